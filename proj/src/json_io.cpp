#include "dischull/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace dischull {

namespace {

json c2_to_json(const C2& p) {
    return json::array({p.w1.real(), p.w1.imag(), p.w2.real(), p.w2.imag()});
}

C2 c2_from_json(const json& j) {
    return C2{cplx(j.at(0).get<double>(), j.at(1).get<double>()),
              cplx(j.at(2).get<double>(), j.at(3).get<double>())};
}

json cplx_to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json pt_to_json(const Pt2& p) { return json::array({p.x, p.y}); }

Pt2 pt_from_json(const json& j) {
    return Pt2{j.at(0).get<double>(), j.at(1).get<double>()};
}

json arc_to_json(const CircleArc& a) { return json::array({a.a, a.b}); }

CircleArc arc_from_json(const json& j) {
    return CircleArc{j.at(0).get<double>(), j.at(1).get<double>()};
}

}  // namespace

json tree_to_json(const PlanarTree& t) {
    json verts = json::array();
    for (int v = 0; v < t.num_vertices(); ++v) {
        json jv{{"id", v},
                {"parent", t.parent[v] < 0 ? json(nullptr) : json(t.parent[v])},
                {"children", t.children[v]}};
        jv["pos"] = t.has_embedding() ? pt_to_json(t.pos[v]) : json(nullptr);
        verts.push_back(std::move(jv));
    }
    return json{{"root", t.root}, {"vertices", std::move(verts)}};
}

PlanarTree tree_from_json(const json& j) {
    const auto& verts = j.at("vertices");
    PlanarTree t;
    t.root = j.at("root").get<int>();
    t.parent.assign(verts.size(), -1);
    t.children.assign(verts.size(), {});
    bool embedded = true;
    std::vector<Pt2> pos(verts.size());
    for (const auto& jv : verts) {
        int id = jv.at("id").get<int>();
        if (id < 0 || id >= int(verts.size()))
            throw std::invalid_argument("tree json: vertex id out of range");
        if (!jv.at("parent").is_null()) t.parent[id] = jv.at("parent").get<int>();
        t.children[id] = jv.at("children").get<std::vector<int>>();
        if (jv.contains("pos") && !jv.at("pos").is_null())
            pos[id] = pt_from_json(jv.at("pos"));
        else
            embedded = false;
    }
    if (embedded && !verts.empty()) t.pos = std::move(pos);
    t.validate();
    return t;
}

json walk_to_json(const PellicleWalk& w) {
    json ev = json::array();
    for (const auto& e : w.events)
        ev.push_back(json{{"edge", e.edge}, {"side", e.side == Side::Left ? "L" : "R"}});
    return json{{"punctured", w.punctured}, {"events", std::move(ev)}};
}

json disc_to_json(const AnalyticDisc& d) {
    json cs = json::array();
    for (const auto& c : d.coeffs) cs.push_back(c2_to_json(c));
    return json{{"radius", d.radius}, {"coeffs", std::move(cs)}};
}

AnalyticDisc disc_from_json(const json& j) {
    std::vector<C2> cs;
    for (const auto& c : j.at("coeffs")) cs.push_back(c2_from_json(c));
    return AnalyticDisc(std::move(cs), j.at("radius").get<double>());
}

json family_to_json(const DiscFamily& f) {
    json ds = json::array();
    for (const auto& d : f.discs) ds.push_back(disc_to_json(d));
    return json{{"params", f.params}, {"discs", std::move(ds)}};
}

DiscFamily family_from_json(const json& j) {
    DiscFamily f;
    f.params = j.at("params").get<std::vector<double>>();
    for (const auto& d : j.at("discs")) f.discs.push_back(disc_from_json(d));
    f.validate();
    return f;
}

json halo_to_json(const Halo& h) {
    json ds = json::array(), cv = json::array();
    for (const auto& d : h.discs) ds.push_back(disc_to_json(d));
    for (const auto& c : h.curve) cv.push_back(c2_to_json(c));
    return json{{"params", h.params}, {"discs", std::move(ds)}, {"curve", std::move(cv)}};
}

Halo halo_from_json(const json& j) {
    Halo h;
    h.params = j.at("params").get<std::vector<double>>();
    for (const auto& d : j.at("discs")) h.discs.push_back(disc_from_json(d));
    for (const auto& c : j.at("curve")) h.curve.push_back(c2_from_json(c));
    return h;
}

json neuron_to_json(const Neuron& n) {
    json trees = json::array();
    for (const auto& t : n.trees)
        trees.push_back(json{{"root_angle", t.root_angle},
                             {"tree", tree_to_json(t.dendrite.tree)},
                             {"walk", walk_to_json(t.dendrite.walk)},
                             {"halo", halo_to_json(t.dendrite.halo)}});
    json wp = json::array();
    for (const auto& p : n.walk_points) wp.push_back(pt_to_json(p));
    json j{{"body", disc_to_json(n.body)},
           {"trees", std::move(trees)},
           {"halo", halo_to_json(n.halo)},
           {"walk_points", std::move(wp)}};
    if (n.axon)
        j["axon"] = json{{"tree_index", n.axon->tree_index},
                         {"leaf", n.axon->leaf},
                         {"angle", n.axon->angle},
                         {"tip", disc_to_json(n.axon->tip)}};
    else
        j["axon"] = nullptr;
    return j;
}

Neuron neuron_from_json(const json& j) {
    Neuron n;
    n.body = disc_from_json(j.at("body"));
    for (const auto& jt : j.at("trees")) {
        AttachedTree t;
        t.root_angle = jt.at("root_angle").get<double>();
        t.dendrite.tree = tree_from_json(jt.at("tree"));
        t.dendrite.walk = pellicle(t.dendrite.tree, true);
        t.dendrite.halo = halo_from_json(jt.at("halo"));
        n.trees.push_back(std::move(t));
    }
    n.halo = halo_from_json(j.at("halo"));
    for (const auto& p : j.at("walk_points")) n.walk_points.push_back(pt_from_json(p));
    if (j.contains("axon") && !j.at("axon").is_null()) {
        const auto& ja = j.at("axon");
        NeuronAxon a;
        a.tree_index = ja.at("tree_index").get<int>();
        a.leaf = ja.at("leaf").get<int>();
        a.angle = ja.at("angle").get<double>();
        a.tip = disc_from_json(ja.at("tip"));
        n.axon = a;
    }
    return n;
}

json core_to_json(const HartogsCoreData& c) {
    json fibers = json::array();
    for (const auto& f : c.fibers) fibers.push_back(disc_to_json(f));
    return json{{"central", disc_to_json(c.central)},
                {"angles", c.angles},
                {"fibers", std::move(fibers)},
                {"small_in_g", c.small_in_g},
                {"gamma", arc_to_json(c.gamma)},
                {"gamma_o", arc_to_json(c.gamma_o)}};
}

HartogsCoreData core_from_json(const json& j) {
    HartogsCoreData c;
    c.central = disc_from_json(j.at("central"));
    c.angles = j.at("angles").get<std::vector<double>>();
    for (const auto& f : j.at("fibers")) c.fibers.push_back(disc_from_json(f));
    c.small_in_g = j.at("small_in_g").get<std::vector<bool>>();
    c.gamma = arc_from_json(j.at("gamma"));
    c.gamma_o = arc_from_json(j.at("gamma_o"));
    c.validate();
    return c;
}

json rh_to_json(const RHSolution& h) {
    // coeff_grid[k] = zeta-coefficients of the fitted a_{k+1}; the damping
    // r^k is applied at evaluation time.
    json grid = json::array();
    for (const auto& pk : h.ext.poly) {
        json row = json::array();
        for (const auto& c : pk) row.push_back(c2_to_json(c));
        grid.push_back(std::move(row));
    }
    json gc = json::array();
    for (cplx c : h.g.coeffs) gc.push_back(cplx_to_json(c));
    json clauses = json::array();
    for (const auto& cl : h.clauses)
        clauses.push_back(json{{"clause", cl.clause}, {"passed", cl.passed}, {"worst", cl.worst}});
    return json{{"central", disc_to_json(h.central)},
                {"coeff_grid", std::move(grid)},
                {"arc_error", h.ext.arc_error},
                {"g_coeffs", std::move(gc)},
                {"g_modulus_residual", h.g.modulus_residual},
                {"r", h.r},
                {"N", h.N},
                {"eps", h.eps},
                {"rho_min", h.rho_min},
                {"clauses", std::move(clauses)},
                {"ok", h.ok}};
}

json region_to_json(const FattenedRegion& r) {
    json caps = json::array(), bd = json::array(), kl = json::array();
    for (const auto& s : r.capsules) caps.push_back(json::array({s.a.x, s.a.y, s.b.x, s.b.y}));
    for (const auto& p : r.boundary) bd.push_back(pt_to_json(p));
    for (const auto& p : r.kept_leaves) kl.push_back(pt_to_json(p));
    return json{{"tau", r.tau},
                {"rounding", r.rounding},
                {"tau_max", r.tau_max},
                {"capsules", std::move(caps)},
                {"kept_leaves", std::move(kl)},
                {"boundary", std::move(bd)}};
}

void write_json_file(const std::string& path, json j) {
    j["schema"] = kSchemaTag;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    return json::parse(in);
}

}  // namespace dischull
