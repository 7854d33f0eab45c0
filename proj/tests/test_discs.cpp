#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "dischull/discs.hpp"
#include "dischull/domain.hpp"
#include "doctest.h"

using namespace dischull;

namespace {
AnalyticDisc flat_disc() { return AnalyticDisc({C2{0.0, 0.0}, C2{1.0, 0.0}}, 1.5); }
AnalyticDisc parab_disc() {
    return AnalyticDisc({C2{0.0, 0.0}, C2{1.0, 0.0}, C2{0.0, 1.0}}, 1.5);
}
}  // namespace

TEST_CASE("recenter identity automorphism") {
    auto d = parab_disc();
    auto r = recenter(d, 0.0, 1.0);
    CHECK(disc_distance(r, d) < 1e-10);
}

TEST_CASE("recenter moves the center") {
    auto d = flat_disc();
    auto r = recenter(d, 0.5);
    CHECK(std::abs(r.center().w1 - 0.5) < 1e-12);
    CHECK(std::abs(r.center().w2) < 1e-12);
}

TEST_CASE("recenter matches direct composition oracle") {
    auto d = parab_disc();
    cplx z0 = 0.3;
    auto r = recenter(d, z0);
    MobiusAut phi{z0, 1.0};
    for (int j = 0; j < 64; ++j) {
        cplx z = std::polar(1.0, 2 * M_PI * j / 64);
        CHECK((r.eval(z) - d.eval(phi.apply(z))).norm() < 1e-9);
    }
}

TEST_CASE("recenter rejects |z0| >= 1") {
    CHECK_THROWS(recenter(flat_disc(), cplx(1.0, 0.2)));
}

TEST_CASE("recenter approximate involution") {
    auto d = parab_disc();
    cplx z0 = cplx(0.25, 0.1);
    auto r = recenter(d, z0);
    // pull the center back: phi_{z0} composed with phi_{w} with w = phi^{-1}(0)
    MobiusAut phi{z0, 1.0};
    cplx w = phi.preimage_of_zero();
    auto back = recenter(r, w);
    Tolerances tol;
    CHECK(disc_distance(back, d) < 10 * tol.tol_trunc);
}

TEST_CASE("recenter preserves the boundary image as a set") {
    auto d = parab_disc();
    auto r = recenter(d, 0.4);
    auto bd = d.boundary_samples(16384);  // dense reference for the set comparison
    auto br = r.boundary_samples(256);
    double hausdorff = 0.0;
    for (const auto& p : br) {
        double best = 1e9;
        for (const auto& q : bd) best = std::min(best, (p - q).norm());
        hausdorff = std::max(hausdorff, best);
    }
    CHECK(hausdorff < 1e-3);  // dense-sampling slack on top of tol_trunc
}

TEST_CASE("is_g_disc on the shell") {
    auto G = make_domain("shell", {});
    auto rep = is_g_disc(flat_disc(), G);
    CHECK(rep.immersed);
    CHECK(rep.boundary_in_G);
    CHECK(rep.margin == doctest::Approx(0.1).epsilon(1e-6));
}

TEST_CASE("constant disc is not immersed") {
    auto G = make_domain("shell", {});
    AnalyticDisc c({C2{1.0, 0.0}}, 1.5);
    CHECK_FALSE(is_g_disc(c, G).immersed);
}

TEST_CASE("torus example disc sits on the closed tube boundary") {
    DomainParams p;
    p.closed = true;
    auto T = make_domain("torus_tube", p);
    // d(z) = (z, -iz) maps the boundary circle to the tube boundary after exp;
    // in the tube coordinates the disc itself is checked before exp here
    AnalyticDisc d({C2{0.0, 0.0}, C2{1.0, cplx(0.0, -1.0)}}, 1.5);
    // push through exp to land in the tube image
    std::vector<C2> bnd;
    for (int j = 0; j < 256; ++j) {
        C2 v = d.eval(std::polar(1.0, 2 * M_PI * j / 256));
        bnd.push_back(C2{std::exp(v.w1), std::exp(v.w2)});
    }
    for (const auto& w : bnd) {
        // on-boundary up to rounding, so membership is checked via the margin
        CHECK(std::abs(T.margin(w)) < 1e-12);
        // shrinking the log-moduli by 0.999 lands strictly inside
        auto shrink = [](cplx c) { return c * std::pow(std::abs(c), -0.001); };
        CHECK(T.contains(C2{shrink(w.w1), shrink(w.w2)}));
    }
}

TEST_CASE("small_embedded_disc construction") {
    auto d = small_embedded_disc(C2{0.0, 0.0}, C2{1.0, 0.0}, 0.1);
    REQUIRE(d.coeffs.size() == 2);
    CHECK(std::abs(d.coeffs[1].w1 - 0.1) < 1e-15);
    CHECK(d.image_diameter() == doctest::Approx(0.2).epsilon(1e-9));
    auto G = make_domain("shell", {});
    auto d2 = small_embedded_disc(C2{1.0, 0.0}, C2{0.0, 1.0}, 0.04);
    CHECK(is_g_disc(d2, G).boundary_in_G);
}

TEST_CASE("small_embedded_disc diameter is 2r") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int it = 0; it < 10; ++it) {
        C2 dir{cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
        double n = dir.norm();
        dir = dir * (1.0 / n);
        double r = 0.05 + 0.2 * std::abs(u(rng));
        auto d = small_embedded_disc(C2{u(rng), u(rng)}, dir, r);
        CHECK(d.image_diameter(128) == doctest::Approx(2 * r).epsilon(1e-3));
    }
}

TEST_CASE("foliate_tube splits coordinates for the flat disc") {
    auto f = foliate_tube(flat_disc(), C2{0.0, 1.0}, 0.2);
    auto leaf = f.leaf_through(C2{0.1, 0.05});
    CHECK(std::abs(leaf.z1 - 0.1) < 1e-12);
    CHECK(std::abs(leaf.z2 - 0.05) < 1e-12);
    // leaf at z2 = 0 is the base disc
    CHECK(disc_distance(f.leaf(0.0), flat_disc()) == doctest::Approx(0.0));
}

TEST_CASE("foliate_tube Newton residual") {
    auto f = foliate_tube(parab_disc(), C2{0.0, 1.0}, 0.2);
    auto leaf = f.leaf_through(C2{0.2, 0.1});
    C2 res = parab_disc().eval(leaf.z1) + C2{0.0, 1.0} * leaf.z2 - C2{0.2, 0.1};
    CHECK(res.norm() < 1e-10);
}

TEST_CASE("foliate_tube rejects tangential directions") {
    // v parallel to d' everywhere
    CHECK_THROWS(foliate_tube(flat_disc(), C2{1.0, 0.0}, 0.2));
}

TEST_CASE("holomorphize constant family is exact") {
    DiscFamily F;
    for (int i = 0; i <= 10; ++i) {
        F.params.push_back(i / 10.0);
        F.discs.push_back(parab_disc());
    }
    auto H = holomorphize_family(F, 8, 3, 1e-12);
    CHECK(H.achieved_error < 1e-13);
    for (int k = 0; k <= 8; ++k) CHECK(H.t_poly[k].empty());
}

TEST_CASE("holomorphize already-polynomial family exact at degree 1") {
    DiscFamily F;
    for (int i = 0; i <= 10; ++i) {
        double t = i / 10.0;
        F.params.push_back(t);
        F.discs.push_back(AnalyticDisc({C2{0.0, 0.0}, C2{1.0, t}}, 1.5));
    }
    auto H = holomorphize_family(F, 1, 1, 1e-12);
    CHECK(H.achieved_error < 1e-12);
    CHECK(disc_distance(H.member(1.0), F.discs.back()) < 1e-14);
}

TEST_CASE("holomorphize sin family error decays with t-degree") {
    DiscFamily F;
    for (int i = 0; i <= 32; ++i) {
        double t = i / 32.0;
        F.params.push_back(t);
        F.discs.push_back(AnalyticDisc({C2{0.0, 0.0}, C2{1.0, std::sin(t)}}, 1.5));
    }
    double prev = 1e9;
    for (int deg : {1, 3, 5, 7}) {
        auto H = holomorphize_family(F, 1, deg, 1e-14);
        // direct 32x32 evaluation oracle
        double err = 0.0;
        for (int i = 0; i <= 32; ++i) {
            double t = i / 32.0;
            for (int j = 0; j < 32; ++j) {
                cplx z = std::polar(1.0, 2 * M_PI * j / 32);
                C2 direct{z, std::sin(t) * z};
                err = std::max(err, (H.eval(t, z) - direct).norm());
            }
        }
        CHECK(err <= prev + 1e-15);
        prev = err;
        CHECK((H.eval(1.0, 0.7) - C2{0.7, std::sin(1.0) * 0.7}).norm() < 1e-14);
    }
    CHECK(prev < 1e-6);
}

TEST_CASE("holomorphized coefficients are degree-bounded polynomials in t") {
    DiscFamily F;
    for (int i = 0; i <= 16; ++i) {
        double t = i / 16.0;
        F.params.push_back(t);
        F.discs.push_back(AnalyticDisc({C2{t, 0.0}, C2{1.0, std::cos(t)}}, 1.5));
    }
    auto H = holomorphize_family(F, 4, 5, 1e-3);
    for (const auto& p : H.t_poly) CHECK(p.size() <= 5);
}

TEST_CASE("perturb_to_immersion leaves immersed families alone") {
    DiscFamily F;
    F.params = {0.0, 1.0};
    F.discs = {flat_disc(), parab_disc()};
    auto r = perturb_to_immersion(F, 1e-6, 20, 1e-2);
    CHECK(r.success);
    CHECK(r.attempts_used == 0);
    CHECK(disc_distance(r.family.discs[0], F.discs[0]) == 0.0);
}

TEST_CASE("perturb_to_immersion fixes a constant member") {
    DiscFamily F;
    F.params = {0.0, 0.5, 1.0};
    F.discs = {flat_disc(), AnalyticDisc({C2{0.5, 0.5}}, 1.5), flat_disc()};
    auto r = perturb_to_immersion(F, 1e-6, 50, 1e-2);
    REQUIRE(r.success);
    for (const auto& d : r.family.discs) {
        double mind = 1e9;
        for (int i = 0; i < 32; ++i)
            for (int j = 0; j < 64; ++j)
                mind = std::min(mind, d.deriv(std::polar(i / 31.0, 2 * M_PI * j / 64)).norm());
        CHECK(mind > 1e-6);
    }
    // centers untouched
    for (std::size_t i = 0; i < F.size(); ++i)
        CHECK((r.family.discs[i].center() - F.discs[i].center()).norm() < 1e-14);
}

TEST_CASE("family interpolation and continuity witness") {
    DiscFamily F;
    for (int i = 0; i <= 4; ++i) {
        F.params.push_back(i / 4.0);
        F.discs.push_back(AnalyticDisc({C2{i / 4.0, 0.0}, C2{1.0, 0.0}}, 1.5));
    }
    CHECK(F.max_step() == doctest::Approx(0.25));
    auto mid = F.at(0.125);
    CHECK(std::abs(mid.center().w1 - 0.125) < 1e-15);
}
