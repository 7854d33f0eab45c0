#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "dischull/dendra.hpp"
#include "doctest.h"

using namespace dischull;

namespace {

// Shell-domain fixtures: small embedded discs centered on the unit sphere.
ModelDomain shell() { return make_domain("shell", {}); }

AnalyticDisc small_at(const C2& c, const C2& dir, double r = 0.001) {
    return small_embedded_disc(c, dir, r);
}

C2 ring_center(double t) { return C2{std::polar(1.0, 0.3 * t), 0.0}; }

// Homotopy of equally-centered pairs sliding along |w1| = 1.
void make_pair_families(DiscFamily& F1, DiscFamily& F2, int n = 9) {
    for (int i = 0; i < n; ++i) {
        double t = double(i) / double(n - 1);
        F1.params.push_back(t);
        F2.params.push_back(t);
        F1.discs.push_back(small_at(ring_center(t), C2{1.0, 0.0}));
        F2.discs.push_back(small_at(ring_center(t), C2{0.0, 1.0}));
    }
}

EquivalenceTrace edge_trace() {
    DiscFamily F1, F2;
    make_pair_families(F1, F2);
    auto base = EquivalenceTrace::pair(F1.discs.front(), F2.discs.front());
    return EquivalenceTrace::homotopy(base, F1, F2);
}

}  // namespace

TEST_CASE("halo interpolation and reversal") {
    auto a = small_at(C2{1.0, 0.0}, C2{1.0, 0.0});
    auto b = small_at(C2{1.0, 0.0}, C2{0.0, 1.0});
    auto h = Halo::interpolate(a, b, 5);
    CHECK(disc_distance(h.at(0.0), a) == 0.0);
    CHECK(disc_distance(h.at(1.0), b) == 0.0);
    // halfway: coefficientwise average
    auto mid = h.at(0.5);
    CHECK(std::abs(mid.coeffs[1].w1 - 0.0005) < 1e-15);
    CHECK(std::abs(mid.coeffs[1].w2 - 0.0005) < 1e-15);
    auto r = h.reversed();
    CHECK(disc_distance(r.at(0.0), b) == 0.0);
    CHECK(disc_distance(r.at(1.0), a) == 0.0);
    CHECK_NOTHROW(h.validate());
}

TEST_CASE("halo concat keeps params sorted and junction values") {
    auto a = small_at(C2{1.0, 0.0}, C2{1.0, 0.0});
    auto b = small_at(C2{1.0, 0.0}, C2{0.0, 1.0});
    auto h = Halo::concat({Halo::constant(a, 3), Halo::interpolate(a, b, 4)});
    REQUIRE(h.size() == 7);
    for (std::size_t i = 0; i + 1 < h.size(); ++i) CHECK(h.params[i] <= h.params[i + 1]);
    CHECK(disc_distance(h.discs[2], h.discs[3]) == 0.0);  // both equal a
    CHECK(disc_distance(h.back(), b) == 0.0);
}

TEST_CASE("halo discontinuity scan flags an engineered jump") {
    auto a = small_at(C2{1.0, 0.0}, C2{1.0, 0.0});
    auto far = small_at(C2{0.0, 1.0}, C2{1.0, 0.0});
    Halo h = Halo::concat({Halo::constant(a, 8), Halo::constant(far, 8)});
    auto disc = h.discontinuities();
    REQUIRE(disc.size() == 1);
    CHECK(disc[0] == 7);
    CHECK(Halo::constant(a, 8).discontinuities().empty());
}

TEST_CASE("validate_trace accepts the fixtures") {
    auto G = shell();
    CHECK_NOTHROW(validate_trace(edge_trace(), G));
    auto p = EquivalenceTrace::pair(small_at(C2{1.0, 0.0}, C2{1.0, 0.0}),
                                    small_at(C2{1.0, 0.0}, C2{0.0, 1.0}));
    CHECK_NOTHROW(validate_trace(p, G));
}

TEST_CASE("validate_trace rejects center mismatch, big discs, and escapes") {
    auto G = shell();
    // centers differ
    auto bad1 = EquivalenceTrace::pair(small_at(C2{1.0, 0.0}, C2{1.0, 0.0}),
                                       small_at(C2{0.99, 0.0}, C2{1.0, 0.0}));
    CHECK_THROWS(validate_trace(bad1, G));
    // not small: diameter 0.2 >= 0.005
    auto bad2 = EquivalenceTrace::pair(small_at(C2{1.0, 0.0}, C2{1.0, 0.0}, 0.1),
                                       small_at(C2{1.0, 0.0}, C2{0.0, 1.0}, 0.1));
    CHECK_THROWS(validate_trace(bad2, G));
    // centered outside the shell
    auto bad3 = EquivalenceTrace::pair(small_at(C2{0.0, 0.0}, C2{1.0, 0.0}),
                                       small_at(C2{0.0, 0.0}, C2{0.0, 1.0}));
    CHECK_THROWS(validate_trace(bad3, G));
    // homotopy with drifting centers
    DiscFamily F1, F2;
    make_pair_families(F1, F2);
    F2.discs.back() = small_at(ring_center(0.9), C2{0.0, 1.0});
    auto base = EquivalenceTrace::pair(F1.discs.front(), F2.discs.front());
    CHECK_THROWS(validate_trace(EquivalenceTrace::homotopy(base, F1, F2), G));
}

TEST_CASE("dendrite of a bare pair is a point with constant-center halo") {
    auto d1 = small_at(C2{1.0, 0.0}, C2{1.0, 0.0});
    auto dend = build_dendrite(EquivalenceTrace::pair(d1, d1));
    CHECK(dend.tree.num_edges() == 0);
    CHECK(disc_distance(dend.halo.front(), d1) == 0.0);
    CHECK(disc_distance(dend.halo.back(), d1) == 0.0);
    CHECK(dend.halo.max_center_mismatch() == 0.0);
}

TEST_CASE("dendrite of one homotopy step is a single edge") {
    DiscFamily F1, F2;
    make_pair_families(F1, F2);
    auto dend = build_dendrite(edge_trace());
    CHECK(dend.tree.num_edges() == 1);
    REQUIRE(dend.walk.events.size() == 2);
    CHECK(dend.walk.events[0].side == Side::Left);
    CHECK(dend.walk.events[1].side == Side::Right);
    // halo = reversed F1, then the pair bridge, then F2 (assembled by definition)
    REQUIRE(dend.halo.size() == F1.size() + 2 + F2.size());
    CHECK(disc_distance(dend.halo.front(), F1.discs.back()) == 0.0);
    CHECK(disc_distance(dend.halo.back(), F2.discs.back()) == 0.0);
    for (std::size_t i = 0; i < F1.size(); ++i)
        CHECK(disc_distance(dend.halo.discs[i], F1.discs[F1.size() - 1 - i]) == 0.0);
    for (std::size_t i = 0; i < F2.size(); ++i)
        CHECK(disc_distance(dend.halo.discs[F1.size() + 2 + i], F2.discs[i]) == 0.0);
}

TEST_CASE("chained traces glue to a star and concatenate haloes") {
    // two single-edge traces sharing their junction pair: d1 ~ d2 ~ d3
    DiscFamily F1, F2;
    make_pair_families(F1, F2);
    auto t1 = edge_trace();  // endpoints (F1(1), F2(1))
    // second trace's halo starts at G1(1), which must equal the first's end
    DiscFamily G1, G2;
    for (int i = 0; i < 9; ++i) {
        double t = double(i) / 8.0;
        G1.params.push_back(t);
        G2.params.push_back(t);
        G1.discs.push_back(small_at(ring_center(2.0 - t), C2{0.0, 1.0}));
        G2.discs.push_back(small_at(ring_center(2.0 - t), C2{1.0, 1.0}));
    }
    auto base2 = EquivalenceTrace::pair(G1.discs.front(), G2.discs.front());
    auto t2 = EquivalenceTrace::homotopy(base2, G1, G2);
    auto dend = build_dendrite(EquivalenceTrace::chain({t1, t2}));
    CHECK(dend.tree.num_edges() == 2);
    CHECK(dend.tree.children[dend.tree.root].size() == 2);  // star

    // independent assembly oracle: concatenation of the sub-dendrite haloes
    auto d1 = build_dendrite(t1);
    auto d2 = build_dendrite(t2);
    REQUIRE(dend.halo.size() == d1.halo.size() + d2.halo.size());
    for (std::size_t i = 0; i < d1.halo.size(); ++i)
        CHECK(disc_distance(dend.halo.discs[i], d1.halo.discs[i]) == 0.0);
    for (std::size_t i = 0; i < d2.halo.size(); ++i)
        CHECK(disc_distance(dend.halo.discs[d1.halo.size() + i], d2.halo.discs[i]) == 0.0);
    // midpoint value shared between the glued parts
    CHECK(disc_distance(d1.halo.back(), d2.halo.front()) == 0.0);
}

TEST_CASE("chain junction mismatch is rejected") {
    auto t1 = edge_trace();
    DiscFamily G1, G2;
    for (int i = 0; i < 5; ++i) {
        double t = double(i) / 4.0;
        G1.params.push_back(t);
        G2.params.push_back(t);
        G1.discs.push_back(small_at(C2{0.0, 1.0}, C2{1.0, 0.0}));  // elsewhere
        G2.discs.push_back(small_at(C2{0.0, 1.0}, C2{0.0, 1.0}));
    }
    auto t2 = EquivalenceTrace::homotopy(
        EquivalenceTrace::pair(G1.discs.front(), G2.discs.front()), G1, G2);
    CHECK_THROWS(build_dendrite(EquivalenceTrace::chain({t1, t2})));
}

namespace {
// straight horizontal curve with constant-speed parametrization
void make_curve(int n, std::vector<double>& t, std::vector<Pt2>& pts,
                std::vector<C2>& sigma) {
    for (int i = 0; i < n; ++i) {
        double u = double(i) / double(n - 1);
        t.push_back(u);
        pts.push_back({u, 0.0});
        sigma.push_back(ring_center(u));
    }
}
}  // namespace

TEST_CASE("excrescence with a continuous lift is the identity") {
    std::vector<double> t;
    std::vector<Pt2> pts;
    std::vector<C2> sigma;
    make_curve(11, t, pts, sigma);
    CurveLift lift;
    DiscFamily piece;
    for (int i = 0; i < 11; ++i) {
        piece.params.push_back(t[i]);
        piece.discs.push_back(small_at(sigma[i], C2{1.0, 0.0}));
    }
    lift.pieces.push_back(piece);
    auto ex = excrescence_with_halo(t, pts, sigma, lift);
    CHECK(ex.trees.empty());
    CHECK(ex.attach_params.empty());
    REQUIRE(ex.points.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        CHECK(dist(ex.points[i], pts[i]) == doctest::Approx(0.0));
    CHECK(ex.halo.size() == piece.size());
}

TEST_CASE("excrescence pastes one tree at a breakpoint") {
    std::vector<double> t;
    std::vector<Pt2> pts;
    std::vector<C2> sigma;
    make_curve(11, t, pts, sigma);
    // lift jumps direction at t = 0.5, bridged by a single-edge trace
    DiscFamily F1, F2;
    make_pair_families(F1, F2);
    auto left = F1.discs.back();   // trace halo starts here
    auto right = F2.discs.back();  // and ends here
    CurveLift lift;
    DiscFamily p1, p2;
    for (int i = 0; i <= 5; ++i) {
        p1.params.push_back(t[i]);
        p1.discs.push_back(i == 5 ? left : small_at(sigma[i], left.coeffs[1] * 1000.0));
    }
    for (int i = 5; i < 11; ++i) {
        p2.params.push_back(t[i]);
        p2.discs.push_back(i == 5 ? right : small_at(sigma[i], right.coeffs[1] * 1000.0));
    }
    lift.pieces = {p1, p2};
    lift.breaks = {edge_trace()};
    auto ex = excrescence_with_halo(t, pts, sigma, lift);
    REQUIRE(ex.trees.size() == 1);
    CHECK(ex.trees[0].tree.num_edges() == 1);
    REQUIRE(ex.attach_params.size() == 1);
    CHECK(ex.attach_params[0] == doctest::Approx(0.5));
    // halo bookkeeping: both pieces plus the dendrite walk
    CHECK(ex.halo.size() == p1.size() + p2.size() + (F1.size() + 2 + F2.size()));
    // tree sprouts from the breakpoint along the curve normal
    CHECK(dist(ex.trees[0].tree.pos[ex.trees[0].tree.root], {0.5, 0.0}) < 1e-12);
}

TEST_CASE("excrescence trees at two breakpoints stay disjoint") {
    std::vector<double> t;
    std::vector<Pt2> pts;
    std::vector<C2> sigma;
    make_curve(13, t, pts, sigma);
    DiscFamily F1, F2;
    make_pair_families(F1, F2);
    auto left = F1.discs.back(), right = F2.discs.back();
    auto mk_piece = [&](int lo, int hi, const AnalyticDisc& first,
                        const AnalyticDisc& last) {
        DiscFamily p;
        for (int i = lo; i <= hi; ++i) {
            p.params.push_back(t[i]);
            if (i == lo)
                p.discs.push_back(first);
            else if (i == hi)
                p.discs.push_back(last);
            else
                p.discs.push_back(small_at(sigma[i], C2{1.0, 0.0}));
        }
        return p;
    };
    CurveLift lift;
    lift.pieces = {mk_piece(0, 4, small_at(sigma[0], C2{1.0, 0.0}), left),
                   mk_piece(4, 8, right, left),
                   mk_piece(8, 12, right, small_at(sigma[12], C2{1.0, 0.0}))};
    lift.breaks = {edge_trace(), edge_trace()};
    auto ex = excrescence_with_halo(t, pts, sigma, lift);
    REQUIRE(ex.trees.size() == 2);
    // geometric disjointness oracle
    const auto& ta = ex.trees[0].tree;
    const auto& tb = ex.trees[1].tree;
    double mind = 1e9;
    for (int va = 0; va < ta.num_vertices(); ++va) {
        if (va == ta.root) continue;
        for (int vb = 0; vb < tb.num_vertices(); ++vb) {
            if (vb == tb.root) continue;
            mind = std::min(mind, segment_segment_dist(ta.pos[ta.parent[va]], ta.pos[va],
                                                       tb.pos[tb.parent[vb]], tb.pos[vb]));
        }
    }
    CHECK(mind > 0.01);
}

TEST_CASE("preneuron with a small embedded boundary value gets a degenerate axon") {
    auto G = shell();
    auto body = small_at(C2{1.0, 0.0}, C2{1.0, 0.0});
    auto p = make_preneuron(body, [&](double th) {
        return small_at(C2{std::polar(1.0, 0.01 * std::sin(th)), 0.0}, C2{1.0, 0.0});
    }, 32);
    auto n = preneuron_to_neuron(p, {}, G);
    REQUIRE(n.axon.has_value());
    CHECK(n.axon->degenerate());
    CHECK(n.trees.empty());
    CHECK_NOTHROW(n.validate(G));
    // idempotence
    auto again = preneuron_to_neuron(n, {}, G);
    CHECK(again.axon->angle == n.axon->angle);
    CHECK(again.trees.size() == n.trees.size());
}

TEST_CASE("preneuron grows a tree from a boundary trace") {
    auto G = shell();
    DiscFamily F1, F2;
    make_pair_families(F1, F2);
    // halo everywhere is the (big) disc F1(1) scaled up: not small
    auto big = small_at(ring_center(1.0), C2{1.0, 0.0}, 0.02);  // diam 0.04 >= 0.005
    auto p = make_preneuron(big, [&](double) { return big; }, 32);
    // trace starting at the big halo value and bottoming out in small discs
    DiscFamily B1, B2;
    for (int i = 0; i < 9; ++i) {
        double t = double(i) / 8.0;
        B1.params.push_back(t);
        B2.params.push_back(t);
        double r = 0.001 + (0.02 - 0.001) * t;  // shrink toward the pair
        B1.discs.push_back(small_at(ring_center(1.0), C2{1.0, 0.0}, r));
        B2.discs.push_back(small_at(ring_center(1.0), C2{0.0, 1.0}, r));
    }
    auto trace = EquivalenceTrace::homotopy(
        EquivalenceTrace::pair(B1.discs.front(), B2.discs.front()), B1, B2);
    auto n = preneuron_to_neuron(p, {BoundaryTrace{0.5, trace}}, G);
    REQUIRE(n.axon.has_value());
    CHECK_FALSE(n.axon->degenerate());
    REQUIRE(n.trees.size() == 1);
    CHECK(n.trees[0].dendrite.tree.num_edges() == 1);
    CHECK(n.axon->tip.image_diameter() < diam_small(G));
    CHECK_NOTHROW(n.validate(G));
}

TEST_CASE("preneuron with no route to a small disc is rejected") {
    auto G = shell();
    auto big = small_at(C2{1.0, 0.0}, C2{1.0, 0.0}, 0.02);
    auto p = make_preneuron(big, [&](double) { return big; }, 16);
    CHECK_THROWS(preneuron_to_neuron(p, {}, G));
}

TEST_CASE("kappa bookkeeping and margin on the shell fixture") {
    auto G = shell();
    auto d = small_at(C2{1.0, 0.0}, C2{1.0, 0.0});
    auto p = make_preneuron(d, [&](double) { return d; }, 16);
    auto n = preneuron_to_neuron(p, {}, G);
    auto k = kappa(n, G, 32, 8);
    CHECK(k.points.size() == n.halo.size() * 32 + 8 * 8);
    CHECK(k.inside);
    CHECK(k.min_margin > 0.05);
    // constant halo: every circle point lies on d's boundary circle
    auto bnd = d.boundary_samples(32);
    for (std::size_t i = 0; i < 32; ++i)
        CHECK((k.points[i] - bnd[i]).norm() < 1e-12);
}

TEST_CASE("prepend junction member is the sigma-contraction") {
    DiscFamily F;
    F.params = {0.0, 1.0};
    F.discs = {AnalyticDisc({C2{0.0, 0.0}, C2{1.0, 0.0}}, 1.5),
               AnalyticDisc({C2{0.0, 0.0}, C2{1.0, 0.0}, C2{0.0, 0.1}}, 1.5)};
    auto G = shell();
    auto out = prepend_embedded_start(F, {}, 0.1, G);
    // first contraction member: z -> (0.1 z, 0)
    auto j = out.at(1.0 / 3.0);
    CHECK(std::abs(j.coeffs[1].w1 - 0.1) < 1e-12);
    CHECK(std::abs(j.coeffs[0].w1) < 1e-12);
    // tail equals F
    CHECK(disc_distance(out.at(1.0), F.discs.back()) < 1e-15);
}

TEST_CASE("prepend along a path in the shell is discretely continuous") {
    auto G = shell();
    DiscFamily F;
    for (int i = 0; i < 5; ++i) {
        double t = double(i) / 4.0;
        F.params.push_back(t);
        F.discs.push_back(
            AnalyticDisc({C2{1.0, 0.0}, C2{0.02 * (1.0 + t), 0.0}}, 1.5));
    }
    std::vector<C2> path;
    for (int i = 0; i < 8; ++i)
        path.push_back(C2{std::polar(1.0, 0.4 * (1.0 - double(i) / 7.0)), 0.0});
    auto out = prepend_embedded_start(F, path, 0.1, G);
    CHECK(out.params.front() == 0.0);
    CHECK(out.params.back() == 1.0);
    // initial disc small and embedded
    CHECK(out.discs.front().image_diameter() < diam_small(G));
    CHECK(is_g_disc(out.discs.front(), G).ok());
    // junction jumps comparable to interior steps
    Halo h = Halo::from_family(out);
    CHECK(h.discontinuities().empty());
    // coincides with F near t = 1
    CHECK(disc_distance(out.at(1.0), F.discs.back()) == 0.0);
}

TEST_CASE("prepend rejects paths leaving the domain") {
    auto G = shell();
    DiscFamily F;
    F.params = {0.0, 1.0};
    F.discs = {AnalyticDisc({C2{1.0, 0.0}, C2{0.02, 0.0}}, 1.5),
               AnalyticDisc({C2{1.0, 0.0}, C2{0.04, 0.0}}, 1.5)};
    CHECK_THROWS(prepend_embedded_start(F, {C2{0.0, 0.0}}, 0.1, G));
}

TEST_CASE("neuron family over a constant embedded family is tame") {
    auto G = shell();
    auto d = small_at(C2{1.0, 0.0}, C2{1.0, 0.0});
    DiscFamily Psi;
    Psi.params = {0.0, 1.0};
    Psi.discs = {d, d};
    auto fam = build_pw_neuron_family(
        Psi, 0.5, [&](double, double) { return d; }, G, 17, 32);
    CHECK(fam.discontinuities.empty());
    for (const auto& n : fam.neurons) {
        CHECK(n.trees.empty());
        REQUIRE(n.axon.has_value());
        CHECK(n.axon->degenerate());
    }
    // axon tip curve constant
    for (const auto& tip : fam.axon_tips) CHECK((tip - d.center()).norm() < 1e-12);
}

TEST_CASE("neuron family reports one engineered breakpoint") {
    auto G = shell();
    auto d = small_at(C2{1.0, 0.0}, C2{1.0, 0.0});
    auto e = small_at(C2{std::polar(1.0, 0.5), 0.0}, C2{1.0, 0.0});
    DiscFamily Psi;
    Psi.params = {0.0, 0.5099, 0.5101, 1.0};
    Psi.discs = {d, d, e, e};
    auto fam = build_pw_neuron_family(
        Psi, 0.5, [&](double, double) { return d; }, G, 33, 32);
    REQUIRE(fam.discontinuities.size() == 1);
    CHECK(std::abs(fam.discontinuities[0] - 0.51) < 0.05);
}

TEST_CASE("neuron family grows the axon to the segment [1,2]") {
    auto G = shell();
    auto big = small_at(C2{1.0, 0.0}, C2{1.0, 0.0}, 0.02);  // not small
    DiscFamily Psi;
    Psi.params = {0.0, 1.0};
    Psi.discs = {big, big};
    auto fam = build_pw_neuron_family(
        Psi, 0.5, [&](double, double) { return big; }, G, 17, 32);
    // near t = 0: degenerate axon
    CHECK(fam.neurons.front().axon->degenerate());
    CHECK(fam.neurons.front().trees.empty());
    // at t = 1: a single-edge axon tree reaching the point 2
    const auto& last = fam.neurons.back();
    REQUIRE_FALSE(last.axon->degenerate());
    REQUIRE(last.trees.size() == 1);
    const auto& tr = last.trees[0].dendrite.tree;
    CHECK(dist(tr.pos[1], {2.0, 0.0}) < 1e-12);
    CHECK_NOTHROW(last.validate(G));
    // axon halo is symmetric on the two sides of the edge
    const auto& h = last.trees[0].dendrite.halo;
    for (std::size_t i = 0; i < h.size(); ++i)
        CHECK(disc_distance(h.discs[i], h.discs[h.size() - 1 - i]) == 0.0);
    // axon tip curve is continuous
    for (std::size_t i = 0; i + 1 < fam.axon_tips.size(); ++i)
        CHECK((fam.axon_tips[i + 1] - fam.axon_tips[i]).norm() < 0.05);
}
