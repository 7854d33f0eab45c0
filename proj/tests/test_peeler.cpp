#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "dischull/peeler.hpp"
#include "doctest.h"

using namespace dischull;

namespace {

ModelDomain shell() { return make_domain("shell", {}); }

Pt2 polar(double a) { return {std::cos(a), std::sin(a)}; }

AnalyticDisc small_at(const C2& c, double phase = 0.0) {
    return small_embedded_disc(c, C2{std::polar(1.0, phase), 0.0}, 0.001);
}

AnalyticDisc ring_disc(double t) {
    return small_at(C2{std::polar(1.0, 0.2 * std::sin(t)), 0.0}, 0.3 * t);
}

Halo out_and_back(const AnalyticDisc& a, const AnalyticDisc& b, int n = 5) {
    return Halo::concat({Halo::interpolate(a, b, n), Halo::interpolate(b, a, n)});
}

Dendrite point_dendrite(Pt2 at) {
    Dendrite d;
    d.tree = PlanarTree::point_tree();
    d.tree.pos[0] = at;
    d.walk = pellicle(d.tree, true);
    d.halo = Halo::constant(ring_disc(0.0), 2);
    return d;
}

// radial path of `edges` unit-circle-rooted edges at the given angle
Dendrite path_dendrite(double angle, int edges, double edge_len = 0.25) {
    PlanarTree t;
    t.root = 0;
    for (int v = 0; v <= edges; ++v) {
        t.parent.push_back(v - 1);
        t.children.emplace_back();
        if (v > 0) t.children[v - 1].push_back(v);
        t.pos.push_back(polar(angle) * (1.0 + edge_len * v));
    }
    Dendrite d;
    d.tree = t;
    d.walk = pellicle(t, true);
    d.halo = out_and_back(ring_disc(angle), ring_disc(angle + 0.4), 3 + 2 * edges);
    return d;
}

// 4-edge tree: root - 1 - {2, 3}, root - 4
Dendrite bushy_dendrite(double angle) {
    PlanarTree t;
    t.root = 0;
    t.parent = {-1, 0, 1, 1, 0};
    t.children = {{1, 4}, {2, 3}, {}, {}, {}};
    t.pos = {polar(angle), polar(angle) * 1.15, polar(angle - 0.05) * 1.3,
             polar(angle + 0.05) * 1.3, polar(angle + 0.1) * 1.2};
    Dendrite d;
    d.tree = t;
    d.walk = pellicle(t, true);
    d.halo = out_and_back(ring_disc(angle), ring_disc(angle + 0.5), 9);
    return d;
}

// splices a dendrite into a neuron's boundary walk at its root angle
Neuron attach(const Neuron& base, double angle, const Dendrite& d) {
    Neuron o = base;
    std::size_t at = o.halo.size();
    for (std::size_t i = 0; i < o.walk_points.size(); ++i) {
        if (std::abs(o.walk_points[i].norm() - 1.0) > 1e-9) continue;
        double a = std::atan2(o.walk_points[i].y, o.walk_points[i].x);
        if (a < 0) a += 2 * M_PI;
        if (i > 0 && a > angle) {
            at = i;
            break;
        }
    }
    std::vector<AnalyticDisc> discs;
    std::vector<Pt2> pts;
    for (std::size_t i = 0; i < d.halo.size(); ++i) {
        discs.push_back(d.halo.discs[i]);
        pts.push_back(d.tree.num_edges() > 0
                          ? d.walk.point_at(d.tree, d.halo.params[i])
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

const int kN = 96;
const double kGrid = 2 * M_PI / double(kN - 1);

Neuron base_neuron() {
    return make_preneuron(small_at(C2{1.0, 0.0}),
                          [](double th) { return ring_disc(th); }, kN);
}

// every halo sample of the neuron is (near-)equal to a stored pool sample
bool halo_in_pool(const Neuron& n, const std::vector<AnalyticDisc>& pool,
                  double tol = 1e-9) {
    for (const auto& d : n.halo.discs) {
        double best = 1e300;
        for (const auto& p : pool) best = std::min(best, disc_distance(d, p));
        if (best > tol) return false;
    }
    return true;
}

}  // namespace

TEST_CASE("grow_twins on a one-point dendrite stays a point") {
    auto d = point_dendrite(polar(1.0));
    Cone U{polar(1.0), 1.0 - M_PI / 4, M_PI / 8};
    auto g = grow_twins(d, polar(1.0), U, 4, 0.3);
    REQUIRE(g.stages.size() == 5);
    for (const auto& st : g.stages) {
        CHECK(st.dend.tree.num_edges() == 0);
        CHECK(dist(st.dend.tree.pos[0], polar(1.0)) < 1e-12);
    }
    CHECK(g.first_twin().num_edges() == 0);
}

TEST_CASE("grow_twins single edge at s = 0.75 is the letter Y") {
    auto d = path_dendrite(1.0, 1);
    Cone U{polar(1.0), 1.0 - M_PI / 4, M_PI / 8};
    auto g = grow_twins(d, polar(1.0), U, 4, 0.5, {0.0, 0.75, 1.0});
    REQUIRE(g.stages.size() == 3);
    const auto& st = g.stages[1];
    CHECK(st.s == doctest::Approx(0.75));
    // trunk = half the (scaled) edge, one rotated branch, one mirror branch
    CHECK(st.dend.tree.num_vertices() == 4);
    CHECK(st.dend.walk.events.size() == 6);
    double sigma = 0.9 * g.reach / 0.25;
    REQUIRE(st.trunk.size() == 2);
    CHECK(dist(st.dend.tree.pos[st.trunk[0]], st.dend.tree.pos[st.trunk[1]]) ==
          doctest::Approx(0.5 * sigma * 0.25).epsilon(1e-9));
}

TEST_CASE("grow_twins 2-edge path at s = 1 yields the twin pair") {
    auto d = path_dendrite(1.0, 2);
    Cone U{polar(1.0), 1.0 - M_PI / 4, M_PI / 8};
    auto g = grow_twins(d, polar(1.0), U, 6, 0.4);
    const auto& last = g.stages.back();
    CHECK(last.s == doctest::Approx(1.0));
    CHECK(last.dend.tree.num_edges() == 4);  // two 2-edge paths off the apex
    CHECK(trees_isomorphic(g.first_twin(), d.tree));
    // between-twins halo value = the input's terminal pellicle value
    CHECK(disc_distance(last.dend.halo.at(0.5), d.halo.back()) < 1e-12);
    // endpoints = the input's initial pellicle value
    CHECK(disc_distance(last.dend.halo.at(0.0), d.halo.front()) < 1e-12);
    CHECK(disc_distance(last.dend.halo.at(1.0), d.halo.front()) < 1e-12);
}

TEST_CASE("grow_twins stages are mirror-symmetric and stay in the cone") {
    auto d = bushy_dendrite(1.0);
    Pt2 xi = polar(1.0);
    double axis = 1.0 - M_PI / 4;
    Cone U{xi, axis, M_PI / 8};
    auto g = grow_twins(d, xi, U, 8, 0.3);
    for (const auto& st : g.stages) {
        const auto& tr = st.dend.tree;
        for (int v = 0; v < tr.num_vertices(); ++v) {
            CHECK(U.contains(tr.pos[v], 1e-9));
            CHECK(dist(tr.pos[v], xi) < 1.5 * g.reach);
            Pt2 r = reflect_about_ray(tr.pos[v], xi, axis);
            double best = 1e300;
            for (int w = 0; w < tr.num_vertices(); ++w)
                best = std::min(best, dist(r, tr.pos[w]));
            CHECK(best < 1e-9);
        }
        const auto& h = st.dend.halo;
        for (double p : h.params)
            CHECK(disc_distance(h.at(p), h.at(1.0 - p)) < 1e-12);
        CHECK_NOTHROW(st.dend.validate());
    }
    CHECK(grow_twins(d, xi, U, 8, 0.3).stages.front().dend.tree.num_edges() == 0);
    CHECK_THROWS(grow_twins(d, xi, Cone{xi, axis, 1e-5}, 8, 0.3));
}

TEST_CASE("peel of identical tree-free neurons sweeps a degenerate edge") {
    auto G = shell();
    Neuron nm = base_neuron();
    CircleArc gamma{5.8, 1.0};
    auto r = peel(nm, nm, gamma, 0.9, 16, G);
    REQUIRE(r.frames.size() >= 2);
    CHECK(neuron_step(r.frames.front().neuron, nm) < 1e-12);
    CHECK(r.T.tree.num_edges() == 0);
    CHECK(gamma.contains(r.zeta_star));
    CHECK(r.zeta_star > M_PI);  // clockwise of 1
    REQUIRE(r.frames.back().neuron.trees.size() == 1);
    CHECK(std::abs(r.frames.back().neuron.trees[0].root_angle - r.zeta_star) < 1e-12);
    CHECK(r.step_bound_met);
}

TEST_CASE("peel transports a single-edge tree") {
    auto G = shell();
    Neuron nm = base_neuron();
    double a1 = 37.5 * kGrid;
    Neuron np = attach(nm, a1, path_dendrite(a1, 1));
    np.validate(G);
    CircleArc gamma{5.8, 1.0};
    auto r = peel(nm, np, gamma, 0.9, 64, G);
    CHECK(r.step_bound_met);
    CHECK(neuron_step(r.frames.front().neuron, nm) < 1e-12);
    const Neuron& last = r.frames.back().neuron;
    REQUIRE(last.trees.size() == 2);
    // the real tree stands at its own root with the original embedding
    CHECK(std::abs(last.trees[0].root_angle - a1) < 1e-12);
    const auto& lt = last.trees[0].dendrite.tree;
    const auto& rt = np.trees[0].dendrite.tree;
    REQUIRE(lt.num_vertices() == rt.num_vertices());
    for (int v = 0; v < lt.num_vertices(); ++v) CHECK(dist(lt.pos[v], rt.pos[v]) < 1e-9);
    // the transported dendrite carries a copy of the tree
    CHECK(std::abs(r.frames.back().theta - r.zeta_star) < 1e-12);
    CHECK(r.T.tree.num_vertices() >= rt.num_vertices() + 2);
    // halo membership: every frame sample is a stored n- or n+ sample
    std::vector<AnalyticDisc> pool = nm.halo.discs;
    pool.insert(pool.end(), np.halo.discs.begin(), np.halo.discs.end());
    for (const auto& f : r.frames) {
        CHECK(halo_in_pool(f.neuron, pool));
        CHECK(f.gamma_begin <= f.gamma_end);
        CHECK(f.gamma_end <= f.fold_end);
        CHECK(f.fold_end <= f.el_end);
        CHECK(f.el_end <= f.neuron.halo.size());
    }
    // [gamma) of the final frame carries n+ values only
    const auto& ff = r.frames.back();
    for (std::size_t i = ff.gamma_begin; i < ff.gamma_end; ++i) {
        double best = 1e300;
        for (const auto& p : np.halo.discs)
            best = std::min(best, disc_distance(ff.neuron.halo.discs[i], p));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("peel recurses through a 2-edge tree") {
    auto G = shell();
    Neuron nm = base_neuron();
    double a1 = 40.5 * kGrid;
    Neuron np = attach(nm, a1, path_dendrite(a1, 2, 0.18));
    np.validate(G);
    auto r = peel(nm, np, CircleArc{5.8, 1.0}, 0.9, 64, G);
    CHECK(r.step_bound_met);
    CHECK(r.frames.back().neuron.trees.size() == 2);
    CHECK(r.max_pellicle_step > 0.0);
    CHECK(r.max_halo_step > 0.0);
}

TEST_CASE("peel rejects bad inputs") {
    auto G = shell();
    Neuron nm = base_neuron();
    CircleArc gamma{5.8, 1.0};
    // tree rooted on gamma
    Neuron bad = attach(nm, 6.1, path_dendrite(6.1, 1));
    CHECK_THROWS(peel(nm, bad, gamma, 0.9, 16, G));
    // haloes disagreeing on gamma
    Neuron off = make_preneuron(nm.body, [](double th) { return ring_disc(th + 0.5); },
                                kN);
    CHECK_THROWS(peel(nm, off, gamma, 0.9, 16, G));
    // n_minus with a tree
    Neuron nt = attach(nm, 2.5, path_dendrite(2.5, 1));
    CHECK_THROWS(peel(nt, nt, gamma, 0.9, 16, G));
}

TEST_CASE("neuron_step and the jump detector") {
    Neuron a = base_neuron();
    CHECK(neuron_step(a, a) == 0.0);
    Neuron b = make_preneuron(a.body, [](double th) { return ring_disc(th + 0.3); }, kN);
    CHECK(neuron_step(a, b) > 0.0);
    std::vector<Neuron> fam;
    for (int i = 0; i < 8; ++i)
        fam.push_back(make_preneuron(
            a.body, [&](double th) { return ring_disc(th + 0.001 * i); }, kN));
    CHECK(neuron_discontinuities(fam).empty());
    fam[5] = attach(fam[5], 2.5 * 1.0, path_dendrite(2.5, 1));
    fam[6] = fam[5];
    fam[7] = fam[5];
    auto j = neuron_discontinuities(fam);
    REQUIRE(j.size() == 1);
    CHECK(j[0] == 4);
}

TEST_CASE("splice_family leaves a continuous family unchanged") {
    auto G = shell();
    std::vector<double> ps;
    std::vector<Neuron> fam;
    Neuron base = base_neuron();
    for (int i = 0; i < 6; ++i) {
        ps.push_back(double(i) / 5.0);
        fam.push_back(base);
    }
    auto out = splice_family(ps, fam, CircleArc{5.8, 1.0}, G, 16);
    CHECK(out.neurons.size() == fam.size());
    CHECK(out.attached.empty());
}

TEST_CASE("splice_family removes an engineered tree jump") {
    auto G = shell();
    Neuron nm = base_neuron();
    double a1 = 37.5 * kGrid;
    Neuron np = attach(nm, a1, path_dendrite(a1, 1));
    std::vector<double> ps;
    std::vector<Neuron> fam;
    for (int i = 0; i < 8; ++i) {
        ps.push_back(double(i) / 7.0);
        fam.push_back(i < 4 ? nm : np);
    }
    CircleArc gamma{5.8, 1.0};
    auto out = splice_family(ps, fam, gamma, G, 32);
    CHECK(out.neurons.size() > fam.size());
    CHECK(out.params.size() == out.neurons.size());
    REQUIRE(out.attached.size() == 1);
    CHECK(neuron_discontinuities(out.neurons).empty());
    // later members carry the transported dendrite
    REQUIRE(out.neurons.back().trees.size() == 2);
    CHECK(out.neurons.back().trees[1].root_angle > M_PI);
    CHECK(out.final_gamma.length() < gamma.length());
    for (std::size_t i = 0; i + 1 < out.params.size(); ++i)
        CHECK(out.params[i] <= out.params[i + 1]);
}

TEST_CASE("splice_family handles two halo jumps at distinct attachment points") {
    auto G = shell();
    auto member = [&](double shift) {
        return make_preneuron(
            small_at(C2{1.0, 0.0}),
            [&](double th) {
                // jump localized strictly inside the swept, off-gamma arc
                bool mid = th > 1.5 && th < 5.5;
                return ring_disc(mid ? th + shift : th);
            },
            kN);
    };
    std::vector<double> ps;
    std::vector<Neuron> fam;
    for (int i = 0; i < 9; ++i) {
        ps.push_back(double(i) / 8.0);
        fam.push_back(member(i < 3 ? 0.0 : (i < 6 ? 0.25 : 0.5)));
    }
    CircleArc gamma{5.8, 1.0};
    auto out = splice_family(ps, fam, gamma, G, 32);
    REQUIRE(out.attached.size() == 2);
    CHECK(neuron_discontinuities(out.neurons).empty());
    // both transported dendrites hang at distinct points, carried to the end
    REQUIRE(out.neurons.back().trees.size() == 2);
    double r0 = out.neurons.back().trees[0].root_angle;
    double r1 = out.neurons.back().trees[1].root_angle;
    CHECK(r1 - r0 > 1e-3);
    CHECK(out.final_gamma.length() < gamma.length() - 0.05);
}
