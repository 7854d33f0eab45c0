#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "dischull/contprin.hpp"
#include "doctest.h"

using namespace dischull;

TEST_CASE("hartogs core sets") {
    HartogsCore hc;
    CHECK(hc.in_core0(0.0, 0.5));
    CHECK(hc.in_core0(0.5, std::polar(1.0, 0.3)));
    CHECK_FALSE(hc.in_core0(0.5, 0.5));
    CHECK(hc.in_core(0.5, 0.5));
    CHECK_FALSE(hc.in_core(1.0, 0.5));
    CHECK(hc.in_core(1.0, std::polar(1.0, 2.0)));
    CHECK(hc.in_cylinder(1.0, 0.5));
    CHECK_FALSE(hc.in_cylinder(1.2, 0.5));
    CHECK_FALSE(hc.in_cylinder(0.5, 1.2));
}

TEST_CASE("cauchy extension is exact on polynomials") {
    CauchyExtender ext;
    ext.g = [](double t, cplx z) { return (1.0 + t) * z * z * z - 2.0 * z + cplx(0.0, 1.0); };
    for (double t : {0.0, 0.4, 1.0})
        for (int j = 0; j < 16; ++j) {
            cplx z = std::polar(0.8 * (j % 4) / 4.0, 2 * M_PI * j / 16);
            CHECK(std::abs(ext.value(t, z) - ext.g(t, z)) < 1e-12);
        }
}

TEST_CASE("cauchy extension recovers 1/(z-2) to closed form") {
    CauchyExtender ext;
    ext.g = [](double, cplx z) { return 1.0 / (z - 2.0); };
    for (int j = 0; j < 32; ++j) {
        cplx z = std::polar(0.9 * (j % 8) / 8.0, 2 * M_PI * j / 32);
        CHECK(std::abs(ext.value(0.0, z) - 1.0 / (z - 2.0)) < 1e-10);
    }
    auto rep = ext.extend_checked(0.0, 0.3);
    CHECK(rep.valid);
    CHECK(rep.residual < 1e-10);
}

TEST_CASE("pole inside the contour is flagged invalid") {
    CauchyExtender ext;
    ext.g = [](double, cplx z) { return 1.0 / (z - 0.5); };
    auto rep = ext.extend_checked(0.0, 0.1);
    CHECK_FALSE(rep.valid);
    CHECK(rep.residual > 1e-2);
}

TEST_CASE("cauchy extension is linear in g") {
    CauchyExtender e1, e2, esum;
    e1.g = [](double, cplx z) { return std::exp(0.3 * z); };
    e2.g = [](double, cplx z) { return 1.0 / (z + 3.0); };
    esum.g = [&](double t, cplx z) { return 2.0 * e1.g(t, z) - 0.5 * e2.g(t, z); };
    for (int j = 0; j < 12; ++j) {
        cplx z = std::polar(0.7, 2 * M_PI * j / 12);
        CHECK(std::abs(esum.value(0.0, z) -
                       (2.0 * e1.value(0.0, z) - 0.5 * e2.value(0.0, z))) < 1e-11);
    }
}

TEST_CASE("extension rejects evaluation outside the unit disc") {
    CauchyExtender ext;
    ext.g = [](double, cplx z) { return z; };
    CHECK_THROWS(ext.value(0.0, cplx(1.0, 0.1)));
}

TEST_CASE("lift check on a flat disc in the shell") {
    auto G = make_domain("shell", {});
    // d(z) = (z, 0): boundary on |w| = 1 inside the shell
    AnalyticDisc d({C2{0.0, 0.0}, C2{1.0, 0.0}}, 1.5);
    // witness family: Mobius sweep of d, so every member has boundary image
    // |w| = 1 inside the shell while the center slides from near (0.9, 0) to 0
    DiscFamily H;
    const int n = 17;
    for (int i = 0; i < n; ++i) {
        double t = double(i) / double(n - 1);
        H.params.push_back(t);
        H.discs.push_back(recenter(d, 0.9 * (1.0 - t)));
    }
    H.discs.back() = d;  // exact endpoint
    std::vector<std::function<cplx(const C2&)>> tests{
        [](const C2& w) { return w.w1; },
        [](const C2& w) { return w.w1 * w.w1 + w.w2; },
    };
    auto rep = lift_disc_check(d, H, tests, G);
    REQUIRE(rep.tests.size() == 2);
    // extensions restricted to d reproduce the test functions
    CHECK(rep.tests[0].direct_residual < 1e-6);
    CHECK(rep.tests[1].direct_residual < 1e-6);
    CHECK(rep.overlap_residual < 1e-6);
    CHECK(rep.family_in_G);
}

TEST_CASE("lift check rejects families leaving the domain") {
    auto G = make_domain("shell", {});
    AnalyticDisc d({C2{0.0, 0.0}, C2{1.0, 0.0}}, 1.5);
    DiscFamily H;
    H.params = {0.0, 0.5, 1.0};
    H.discs = {AnalyticDisc({C2{0.95, 0.0}, C2{0.05, 0.0}}, 1.5),
               AnalyticDisc({C2{0.0, 0.0}, C2{2.0, 0.0}}, 1.5),  // boundary at |w|=2
               d};
    std::vector<std::function<cplx(const C2&)>> tests{[](const C2& w) { return w.w1; }};
    CHECK_THROWS(lift_disc_check(d, H, tests, G));
}

TEST_CASE("lift check requires the family to end at d") {
    auto G = make_domain("shell", {});
    AnalyticDisc d({C2{0.0, 0.0}, C2{1.0, 0.0}}, 1.5);
    DiscFamily H;
    H.params = {0.0, 1.0};
    H.discs = {AnalyticDisc({C2{0.95, 0.0}, C2{0.05, 0.0}}, 1.5),
               AnalyticDisc({C2{0.0, 0.0}, C2{0.0, 1.0}}, 1.5)};
    std::vector<std::function<cplx(const C2&)>> tests{[](const C2& w) { return w.w1; }};
    CHECK_THROWS(lift_disc_check(d, H, tests, G));
}
