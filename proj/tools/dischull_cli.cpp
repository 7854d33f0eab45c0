#include <atomic>
#include <iostream>
#include <random>
#include <thread>

#include "CLI11.hpp"
#include "dischull/contprin.hpp"
#include "dischull/json_io.hpp"
#include "dischull/lab.hpp"
#include "dischull/svg.hpp"

using namespace dischull;

namespace {

struct Options {
    std::string out;
    std::string svg;
    std::uint64_t seed = 17;
    double tol = -1.0;  // <0: subcommand default
    int workers = 1;
};

// exit 0 on pass; exit 2 with a JSON failure report otherwise
int emit(const Options& o, json j, const std::vector<std::string>& failures) {
    j["ok"] = failures.empty();
    if (!failures.empty()) j["failures"] = failures;
    if (!o.out.empty()) {
        write_json_file(o.out, j);
    } else {
        j["schema"] = kSchemaTag;
        std::cout << j.dump(2) << "\n";
    }
    return failures.empty() ? 0 : 2;
}

void maybe_svg(const Options& o, const std::string& content) {
    if (!o.svg.empty()) write_text_file(o.svg, content);
}

std::string frame_path(const std::string& base, int i) {
    std::string stem = base;
    if (stem.size() > 4 && stem.substr(stem.size() - 4) == ".svg")
        stem = stem.substr(0, stem.size() - 4);
    char buf[16];
    std::snprintf(buf, sizeof buf, "_%03d.svg", i);
    return stem + buf;
}

Pt2 ppolar(double a) { return Pt2{std::cos(a), std::sin(a)}; }

json stages_json(const std::vector<StageReport>& st) {
    json out = json::array();
    for (const auto& s : st)
        out.push_back(json{{"stage", s.stage}, {"error", s.error}, {"ok", s.ok}});
    return out;
}

PlanarTree random_tree(std::mt19937_64& rng, int max_edges) {
    int e = std::uniform_int_distribution<int>(0, max_edges)(rng);
    std::vector<int> parents{-1};
    for (int v = 1; v <= e; ++v)
        parents.push_back(std::uniform_int_distribution<int>(0, v - 1)(rng));
    return PlanarTree::from_parents(0, parents);
}

// every edge once per side
bool edges_twice(const PlanarTree& t, const PellicleWalk& w) {
    if (w.size() != 2 * std::size_t(t.num_edges())) return false;
    std::vector<int> left(t.num_vertices(), 0), right(t.num_vertices(), 0);
    for (const auto& e : w.events) (e.side == Side::Left ? left : right)[e.edge]++;
    for (int v = 0; v < t.num_vertices(); ++v) {
        if (v == t.root) continue;
        if (left[v] != 1 || right[v] != 1) return false;
    }
    return true;
}

AnalyticDisc ring_disc(double t) {
    return small_embedded_disc(C2{std::polar(1.0, 0.2 * std::sin(t)), 0.0},
                               C2{std::polar(1.0, 0.3 * t), 0.0}, 0.001);
}

Halo out_and_back(const AnalyticDisc& a, const AnalyticDisc& b, int n) {
    return Halo::concat({Halo::interpolate(a, b, n), Halo::interpolate(b, a, n)});
}

Dendrite dendrite_from_tree(PlanarTree tree, double angle, double edge_len,
                            const std::function<AnalyticDisc(double)>& fiber) {
    Dendrite d;
    if (tree.num_edges() == 0) {
        d.tree = PlanarTree::point_tree();
        d.tree.pos = {ppolar(angle)};
        d.walk = pellicle(d.tree, true);
        d.halo = Halo::constant(fiber(angle), 2);
        return d;
    }
    if (!tree.has_embedding()) {
        EmbedOptions opt;
        opt.root_pos = ppolar(angle);
        opt.base_angle = angle;
        opt.span = M_PI / 6.0;
        opt.edge_len = edge_len;
        tree = embed_planar(tree, opt);
    }
    d.tree = std::move(tree);
    d.walk = pellicle(d.tree, true);
    d.halo = out_and_back(fiber(angle), fiber(angle + 0.4), 3 + 2 * d.tree.num_edges());
    return d;
}

// splices a dendrite into a neuron boundary walk at its root angle
Neuron attach(const Neuron& base, double angle, const Dendrite& d) {
    Neuron o = base;
    std::size_t at = o.halo.size();
    for (std::size_t i = 1; i < o.walk_points.size(); ++i) {
        if (std::abs(o.walk_points[i].norm() - 1.0) > 1e-9) continue;
        double a = std::atan2(o.walk_points[i].y, o.walk_points[i].x);
        if (a < 0) a += 2 * M_PI;
        if (a > angle) {
            at = i;
            break;
        }
    }
    std::vector<AnalyticDisc> discs;
    std::vector<Pt2> pts;
    for (std::size_t i = 0; i < d.halo.size(); ++i) {
        discs.push_back(d.halo.discs[i]);
        pts.push_back(d.tree.num_edges() > 0 ? d.walk.point_at(d.tree, d.halo.params[i])
                                             : d.tree.pos[d.tree.root]);
    }
    o.halo.discs.insert(o.halo.discs.begin() + at, discs.begin(), discs.end());
    o.walk_points.insert(o.walk_points.begin() + at, pts.begin(), pts.end());
    o.halo.params.clear();
    o.halo.curve.clear();
    for (std::size_t i = 0; i < o.halo.discs.size(); ++i) {
        o.halo.params.push_back(double(i) / double(o.halo.discs.size() - 1));
        o.halo.curve.push_back(o.halo.discs[i].center());
    }
    auto it = o.trees.begin();
    while (it != o.trees.end() && it->root_angle < angle) ++it;
    o.trees.insert(it, {angle, d});
    return o;
}

// small-fiber preneuron used by the peel and rh-solve fixtures
Neuron fixture_preneuron(int n, AnalyticDisc* body_out = nullptr) {
    AnalyticDisc body = small_embedded_disc(C2{1.0, 0.0}, C2{1.0, 0.0}, 0.001);
    if (body_out) *body_out = body;
    auto fiber = [body](double th) {
        return small_embedded_disc(body.eval(std::polar(1.0, th)),
                                   C2{0.0, std::polar(1.0, 0.3 * th)}, 0.001);
    };
    return make_preneuron(body, fiber, n);
}

std::vector<C2> disc_loop(const AnalyticDisc& d, int n = 256) {
    std::vector<C2> out;
    for (int j = 0; j <= n; ++j)
        out.push_back(d.eval(std::polar(1.0, 2 * M_PI * j / double(n))));
    return out;
}

// ---- subcommands ---------------------------------------------------------

int cmd_pellicle(const Options& o, const std::string& tree_path, int edges, int count) {
    std::vector<std::string> failures;
    json j{{"command", "pellicle"}};
    if (!tree_path.empty()) {
        PlanarTree t = tree_from_json(read_json_file(tree_path));
        if (!t.has_embedding()) t = embed_planar(t);
        auto w = pellicle(t, false);
        if (!edges_twice(t, w)) failures.push_back("an edge is not visited once per side");
        int cr = count_embedding_crossings(t);
        if (cr != 0) failures.push_back("embedding has " + std::to_string(cr) + " crossings");
        j["tree"] = tree_to_json(t);
        j["walk"] = walk_to_json(w);
        j["crossings"] = cr;
        maybe_svg(o, svg_tree(t, &w));
        return emit(o, j, failures);
    }
    // batch fixture: `count` random trees, split across workers
    std::atomic<int> bad{0};
    int nw = std::max(1, o.workers);
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w)
        pool.emplace_back([&, w] {
            std::mt19937_64 rng(o.seed + std::uint64_t(w) * 7919);
            for (int i = w; i < count; i += nw) {
                PlanarTree t = embed_planar(random_tree(rng, edges));
                if (!edges_twice(t, pellicle(t, false)) || count_embedding_crossings(t) != 0)
                    bad++;
            }
        });
    for (auto& th : pool) th.join();
    if (bad > 0) failures.push_back(std::to_string(bad.load()) + " trees failed the walk contract");
    std::mt19937_64 rng(o.seed);
    PlanarTree sample = embed_planar(random_tree(rng, edges));
    auto w = pellicle(sample, false);
    j["checked"] = count;
    j["max_edges"] = edges;
    j["tree"] = tree_to_json(sample);
    j["walk"] = walk_to_json(w);
    maybe_svg(o, svg_tree(sample, &w));
    return emit(o, j, failures);
}

int cmd_grow_twins(const Options& o, const std::string& tree_path, int edges, double s,
                   int m, double reach) {
    std::mt19937_64 rng(o.seed);
    double angle = M_PI / 2;
    PlanarTree tree = tree_path.empty() ? random_tree(rng, edges)
                                        : tree_from_json(read_json_file(tree_path));
    auto d = dendrite_from_tree(tree, angle, 0.12, ring_disc);
    Pt2 xi = ppolar(angle);
    double axis = angle - M_PI / 4;
    Cone U{xi, axis, M_PI / 8};
    auto g = grow_twins(d, xi, U, m, reach);

    std::vector<std::string> failures;
    for (const auto& st : g.stages) {
        const auto& tr = st.dend.tree;
        for (int v = 0; v < tr.num_vertices(); ++v) {
            if (!U.contains(tr.pos[v], 1e-9)) failures.push_back("cone containment failed");
            Pt2 r = reflect_about_ray(tr.pos[v], xi, axis);
            double best = 1e300;
            for (int w = 0; w < tr.num_vertices(); ++w)
                best = std::min(best, dist(r, tr.pos[w]));
            if (best > 1e-12) failures.push_back("mirror symmetry broken");
        }
        if (!failures.empty()) break;
    }
    if (failures.empty() && !trees_isomorphic(g.first_twin(), d.tree))
        failures.push_back("final twin not isomorphic to the input tree");

    // the stage closest to the requested fold parameter
    std::size_t pick = 0;
    for (std::size_t i = 0; i < g.stages.size(); ++i)
        if (std::abs(g.stages[i].s - s) < std::abs(g.stages[pick].s - s)) pick = i;
    json j{{"command", "grow-twins"},
           {"input_tree", tree_to_json(d.tree)},
           {"s", g.stages[pick].s},
           {"stages", int(g.stages.size())},
           {"stage_tree", tree_to_json(g.stages[pick].dend.tree)},
           {"first_twin", tree_to_json(g.first_twin())}};
    if (!o.svg.empty())
        for (std::size_t i = 0; i < g.stages.size(); ++i)
            write_text_file(frame_path(o.svg, int(i)),
                            svg_tree(g.stages[i].dend.tree, &g.stages[i].dend.walk));
    return emit(o, j, failures);
}

int cmd_peel(const Options& o, const std::string& minus_path, const std::string& plus_path,
             std::vector<double> gamma, double zeta0, int m) {
    auto G = make_domain("shell", {});
    Neuron nm, np;
    if (!minus_path.empty() && !plus_path.empty()) {
        nm = neuron_from_json(read_json_file(minus_path));
        np = neuron_from_json(read_json_file(plus_path));
    } else {
        const int kN = 96;
        const double dg = 2 * M_PI / double(kN - 1);
        AnalyticDisc body;
        nm = fixture_preneuron(kN, &body);
        auto fiber = [body](double th) {
            return small_embedded_disc(body.eval(std::polar(1.0, th)),
                                       C2{0.0, std::polar(1.0, 0.3 * th)}, 0.001);
        };
        std::mt19937_64 rng(o.seed);
        double a1 = 37.5 * dg;
        np = attach(nm, a1, dendrite_from_tree(random_tree(rng, 2), a1, 0.2, fiber));
    }
    CircleArc arc{gamma.at(0), gamma.at(1)};
    auto r = peel(nm, np, arc, zeta0, m, G);

    std::vector<std::string> failures;
    if (!r.step_bound_met) failures.push_back("pellicle/halo step bound missed");
    for (const auto& fr : r.frames)
        try {
            fr.neuron.validate(G);
        } catch (const std::exception& e) {
            failures.push_back(std::string("frame invalid: ") + e.what());
            break;
        }
    json j{{"command", "peel"},
           {"frames", int(r.frames.size())},
           {"steps_used", r.steps_used},
           {"zeta_star", r.zeta_star},
           {"max_pellicle_step", r.max_pellicle_step},
           {"max_halo_step", r.max_halo_step},
           {"step_bound_met", r.step_bound_met},
           {"dendrite", tree_to_json(r.T.tree)}};
    if (!o.svg.empty())
        for (std::size_t i = 0; i < r.frames.size(); ++i)
            write_text_file(frame_path(o.svg, int(i)), svg_neuron(r.frames[i].neuron));
    return emit(o, j, failures);
}

int cmd_extend_hartogs(const Options& o, const std::string& fn, double t,
                       std::vector<double> z, double eps) {
    CauchyExtender ext;
    ext.epsilon = eps;
    if (fn == "rational")
        ext.g = [](double, cplx w) { return 1.0 / (w - 2.0); };
    else if (fn == "linear")
        ext.g = [](double s, cplx w) { return s * w; };
    else if (fn == "exp")
        ext.g = [](double s, cplx w) { return std::exp(w + 0.5 * s); };
    else  // "pole": hidden singularity inside the bottom disc
        ext.g = [](double, cplx w) { return 1.0 / (w - 0.5); };
    cplx zz(z.at(0), z.at(1));
    auto rep = ext.extend_checked(t, zz, o.tol > 0 ? o.tol : 1e-3);
    json j{{"command", "extend-hartogs"},
           {"fn", fn},
           {"t", t},
           {"z", {zz.real(), zz.imag()}},
           {"value", {rep.value.real(), rep.value.imag()}},
           {"residual", rep.residual},
           {"valid", rep.valid}};
    std::vector<std::string> failures;
    if (!rep.valid)
        failures.push_back("bottom-disc residual " + std::to_string(rep.residual) +
                           " falsifies holomorphy");
    return emit(o, j, failures);
}

int cmd_rh_solve(const Options& o, const std::string& input, std::vector<double> gamma,
                 double eps, double r, int N, const std::string& emit_core) {
    HartogsCoreData core;
    if (!input.empty()) {
        core = core_from_json(read_json_file(input));
    } else {
        const int n = 256;
        AnalyticDisc body({C2{0.0, 0.0}, C2{1.0, 0.0}}, 1.5);
        std::vector<AnalyticDisc> fibers;
        for (int jdx = 0; jdx < n; ++jdx) {
            double th = 2 * M_PI * jdx / double(n);
            fibers.push_back(
                small_embedded_disc(body.eval(std::polar(1.0, th)), C2{0.0, 1.0}, 0.004));
        }
        core = make_core(body, n, fibers, CircleArc{M_PI / 2, 3 * M_PI / 2},
                         CircleArc{3 * M_PI / 4, 5 * M_PI / 4});
    }
    if (gamma.size() == 2) core.gamma = CircleArc{gamma[0], gamma[1]};
    if (!emit_core.empty()) write_json_file(emit_core, core_to_json(core));
    auto h = solve_rh(core, {cplx(0.0)}, o.tol > 0 ? o.tol : eps, r, N);
    json j = rh_to_json(h);
    j["command"] = "rh-solve";
    std::vector<std::string> failures;
    for (const auto& cl : h.clauses)
        if (!cl.passed)
            failures.push_back("clause '" + cl.clause + "' failed, worst " +
                               std::to_string(cl.worst));
    if (!h.ok && failures.empty()) failures.push_back("solution rejected");
    return emit(o, j, failures);
}

int cmd_through_point(const Options& o, std::vector<double> target, double eps) {
    auto G = make_domain("shell", {});
    const int n = 256;
    const double alpha = 2 * M_PI * 128.0 / double(n - 1);
    ThroughPointInput in;
    in.body = AnalyticDisc({C2{0.0, 0.0}, C2{1.0, 0.0}}, 1.5);
    in.n_samples = n;
    in.lift = [&](double th) {
        double q = 0.5 * (1.0 + std::cos(th - alpha));
        double rr = 0.004 * (1.0 - 0.9 * std::pow(q, 8));
        return small_embedded_disc(in.body.eval(std::polar(1.0, th)), C2{0.0, 1.0}, rr);
    };
    C2 tgt{cplx(target.at(0), target.at(1)), cplx(target.at(2), target.at(3))};
    json j{{"command", "through-point"},
           {"target", target},
           {"eps", o.tol > 0 ? o.tol : eps}};
    try {
        auto R = run_through_point(G, in, tgt, o.tol > 0 ? o.tol : eps);
        j["stages"] = stages_json(R.stages);
        j["staged_error_sum"] = R.staged_error_sum();
        j["target_distance"] = R.target_distance;
        j["boundary_margin"] = R.boundary_margin;
        j["translation"] = {R.translation.w1.real(), R.translation.w1.imag(),
                            R.translation.w2.real(), R.translation.w2.imag()};
        j["disc"] = disc_to_json(R.disc);
        maybe_svg(o, svg_neuron(R.neuron));
        std::vector<std::string> failures;
        if (!R.ok) failures.push_back("pipeline contract failed");
        if (R.boundary_margin <= 0) failures.push_back("boundary margin not positive");
        return emit(o, j, failures);
    } catch (const std::exception& e) {
        return emit(o, j, {e.what()});
    }
}

int cmd_family_run(const Options& o, int members, int angles, double eps) {
    auto G = make_domain("shell", {});
    FamilyRunInput in;
    for (int i = 0; i < 9; ++i) {
        double t = double(i) / 8.0;
        cplx rot = std::polar(1.0, 0.1 * t);
        in.bodies.params.push_back(t);
        in.bodies.discs.push_back(
            AnalyticDisc({C2{0.98 * rot, 0.0}, C2{0.045 * rot, 0.0}}, 1.5));
    }
    DiscFamily bodies = in.bodies;
    in.lift = [bodies](double t, double th) {
        return small_embedded_disc(bodies.at(t).eval(std::polar(1.0, th)), C2{0.0, 1.0},
                                   0.001);
    };
    in.n_t = members;
    in.n_angle = angles;
    if (o.tol > 0) in.eps = o.tol;
    else if (eps > 0) in.eps = eps;
    auto R = run_family_pipeline(in, G);
    DiscFamily out;
    out.params = R.params;
    out.discs = R.discs;
    json j{{"command", "family-run"},
           {"members", int(R.neurons.size())},
           {"jumps_spliced", R.jumps_spliced},
           {"max_step", R.max_step},
           {"delta_cont", R.delta_cont},
           {"continuous", R.continuous},
           {"f0_in_g", R.f0_in_g},
           {"stages", stages_json(R.stages)},
           {"discs", family_to_json(out)}};
    if (!R.neurons.empty()) maybe_svg(o, svg_neuron(R.neurons.back()));
    std::vector<std::string> failures;
    if (!R.continuous) failures.push_back("output family is discontinuous");
    if (!R.f0_in_g) failures.push_back("central member leaves G");
    if (!R.ok && failures.empty()) failures.push_back("pipeline contract failed");
    return emit(o, j, failures);
}

int cmd_demo_torus(const Options& o, int modes) {
    DomainParams p;
    p.thickness = 1.0 + 1e-12;  // absorbs round-off at the tube wall
    p.closed = true;
    auto tube = make_domain("torus_tube", p);
    std::vector<std::string> failures;
    json j{{"command", "demo-torus"}, {"modes", modes}};
    for (bool plus : {true, false}) {
        auto d = torus_disc(plus, modes);
        auto loop = disc_loop(d);
        auto wlog = winding_diagnostic(loop, WindingMode::LogModulus);
        auto warg = winding_diagnostic(loop, WindingMode::Argument);
        auto rep = is_g_disc(d, tube);
        double worst = 0.0;
        for (int k = 0; k < 256; ++k) {
            C2 w = d.eval(std::polar(1.0, 2 * M_PI * k / 256.0));
            worst = std::max(worst, std::abs(tube.margin(w)));
        }
        int want = plus ? 1 : -1;
        if (wlog != std::pair<int, int>{want, want})
            failures.push_back("log-modulus winding mismatch");
        if (warg != std::pair<int, int>{0, 0}) failures.push_back("argument winding nonzero");
        if (!rep.ok()) failures.push_back("generator disc leaves the closed tube");
        if (worst > 1e-9) failures.push_back("boundary off the tube wall");
        j[plus ? "plus" : "minus"] =
            json{{"winding_log_modulus", {wlog.first, wlog.second}},
                 {"winding_argument", {warg.first, warg.second}},
                 {"g_disc", rep.ok()},
                 {"max_abs_wall_margin", worst},
                 {"disc", disc_to_json(d)}};
    }
    maybe_svg(o, svg_region(FattenedRegion{}));  // no planar picture; emit the frame anyway
    return emit(o, j, failures);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"analytic-disc toolkit for envelopes of holomorphy"};
    app.require_subcommand(1);

    Options o;
    app.add_option("--out", o.out, "write the JSON report to this path");
    app.add_option("--svg", o.svg, "render SVG output (frames get _NNN suffixes)");
    app.add_option("--seed", o.seed, "seed for randomized fixtures");
    app.add_option("--tol", o.tol, "override the subcommand's contract tolerance");
    app.add_option("-j,--workers", o.workers, "worker threads for batch fixtures");

    std::string tree_path, minus_path, plus_path, input, fn = "linear", emit_core;
    int edges = 6, count = 1, m = 8, members = 5, angles = 64, N = 24, modes = 40;
    double s = 0.75, reach = 0.35, zeta0 = 0.9, t = 0.5, eps_ch = 0.25, eps = 0.05, r = 0.95;
    std::vector<double> gamma{5.8, 1.0}, z{0.0, 0.0}, target{0.0, 0.0, 0.0, 0.0};
    std::vector<double> rh_gamma;

    auto* cp = app.add_subcommand("pellicle", "boundary walk of a planar tree");
    cp->add_option("--tree", tree_path, "tree JSON input");
    cp->add_option("--edges", edges, "max edges of random trees");
    cp->add_option("--count", count, "batch size of random trees");

    auto* cg = app.add_subcommand("grow-twins", "twin-growing homotopy of a dendrite");
    cg->add_option("--tree", tree_path, "tree JSON input");
    cg->add_option("--edges", edges, "max edges of the random tree");
    cg->add_option("--s", s, "fold parameter of the reported stage");
    cg->add_option("--m", m, "number of homotopy stages");
    cg->add_option("--reach", reach, "radial extent inside the cone");

    auto* cl = app.add_subcommand("peel", "peeling homotopy between two neurons");
    cl->add_option("--minus", minus_path, "tree-free neuron JSON");
    cl->add_option("--plus", plus_path, "treed neuron JSON");
    cl->add_option("--gamma", gamma, "arc a,b")->delimiter(',')->expected(2);
    cl->add_option("--zeta0", zeta0, "squeezing depth");
    cl->add_option("--m", m, "twin stages per spliced tree");

    auto* ce = app.add_subcommand("extend-hartogs", "Cauchy extension from the Hartogs core");
    ce->add_option("--fn", fn, "fixture: rational | linear | exp | pole")
        ->check(CLI::IsMember({"rational", "linear", "exp", "pole"}));
    ce->add_option("--t", t, "cylinder parameter");
    ce->add_option("--z", z, "evaluation point re,im")->delimiter(',')->expected(2);
    ce->add_option("--eps", eps_ch, "enlarged-circle margin");

    auto* cr = app.add_subcommand("rh-solve", "approximate Riemann-Hilbert solution");
    cr->add_option("--input", input, "Hartogs core JSON (default: built-in fixture)");
    cr->add_option("--gamma", rh_gamma, "override arc a,b")->delimiter(',')->expected(2);
    cr->add_option("--eps", eps, "target accuracy");
    cr->add_option("--r", r, "damping radius");
    cr->add_option("--N", N, "truncation order");
    cr->add_option("--emit-core", emit_core, "also write the core fixture JSON here");

    auto* ct = app.add_subcommand("through-point", "G-disc through a prescribed point");
    ct->add_option("--target", target, "re1,im1,re2,im2")->delimiter(',')->expected(4);
    ct->add_option("--eps", eps, "stage error budget");

    auto* cf = app.add_subcommand("family-run", "continuous G-disc family pipeline");
    cf->add_option("--members", members, "output parameter samples");
    cf->add_option("--angles", angles, "boundary samples per neuron");
    cf->add_option("--eps", eps, "uniform accuracy");

    auto* cd = app.add_subcommand("demo-torus", "winding +-1 generator discs");
    cd->add_option("--modes", modes, "series truncation length");

    // global flags remain usable after the subcommand name
    for (auto* sc : app.get_subcommands(nullptr)) sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (cp->parsed()) return cmd_pellicle(o, tree_path, edges, count);
        if (cg->parsed()) return cmd_grow_twins(o, tree_path, edges, s, m, reach);
        if (cl->parsed()) return cmd_peel(o, minus_path, plus_path, gamma, zeta0, m);
        if (ce->parsed()) return cmd_extend_hartogs(o, fn, t, z, eps_ch);
        if (cr->parsed()) return cmd_rh_solve(o, input, rh_gamma, eps, r, N, emit_core);
        if (ct->parsed()) return cmd_through_point(o, target, eps);
        if (cf->parsed()) return cmd_family_run(o, members, angles, eps);
        if (cd->parsed()) return cmd_demo_torus(o, modes);
    } catch (const std::exception& e) {
        return emit(o, json{{"command", "error"}, {"what", e.what()}}, {e.what()});
    }
    return 1;
}
