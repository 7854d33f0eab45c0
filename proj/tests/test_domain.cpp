#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "dischull/domain.hpp"
#include "doctest.h"

using namespace dischull;

TEST_CASE("shell membership and margins") {
    auto G = make_domain("shell", {});
    CHECK(G.contains(C2{1.0, 0.0}));
    CHECK_FALSE(G.contains(C2{0.5, 0.5}));  // norm ~0.707 < 0.9
    CHECK_FALSE(G.contains(C2{0.0, 0.0}));
    CHECK_FALSE(G.contains(C2{1.2, 0.0}));
    CHECK(G.margin(C2{1.0, 0.0}) == doctest::Approx(0.1));
    CHECK(G.defining(C2{1.0, 0.0}) == doctest::Approx(-0.1));
    CHECK(G.known_envelope(C2{0.0, 0.0}));
    CHECK(G.known_envelope(C2{cplx(0.7, 0.0), cplx(0.0, 0.7)}));
    CHECK_FALSE(G.known_envelope(C2{1.2, 0.0}));
}

TEST_CASE("shell rejects bad radii") {
    DomainParams p;
    p.r1 = 1.1;
    p.r2 = 0.9;
    CHECK_THROWS(make_domain("shell", p));
}

TEST_CASE("hartogs figure membership") {
    auto G = make_domain("hartogs", {});  // eps = 0.25
    CHECK(G.contains(C2{0.0, 0.0}));
    CHECK(G.contains(C2{0.0, 0.2}));       // base layer |w2| < eps
    CHECK_FALSE(G.contains(C2{0.0, 0.5}));  // too high over center
    CHECK(G.contains(C2{0.9, 0.5}));        // outer collar reaches |w2| < 1
    CHECK_FALSE(G.contains(C2{1.0, 0.0}));
    // envelope is the whole bidisc
    CHECK(G.known_envelope(C2{0.0, 0.5}));
    CHECK(G.known_envelope(C2{0.9, 0.9}));
    CHECK_FALSE(G.known_envelope(C2{0.0, 1.1}));
}

TEST_CASE("hartogs defining function sign matches membership") {
    auto G = make_domain("hartogs", {});
    std::mt19937 rng(8);
    std::uniform_real_distribution<double> u(-1.3, 1.3);
    for (int it = 0; it < 500; ++it) {
        C2 w{cplx(u(rng), u(rng)), cplx(u(rng), u(rng))};
        if (std::abs(G.defining(w)) < 1e-9) continue;  // boundary slack
        CHECK(G.contains(w) == (G.defining(w) < 0.0));
        CHECK(G.margin(w) == doctest::Approx(-G.defining(w)));
    }
}

TEST_CASE("torus tube membership and closure") {
    auto open = make_domain("torus_tube", {});
    CHECK(open.contains(C2{1.0, 1.0}));  // log-radius 0
    CHECK(open.contains(C2{std::exp(0.5), 1.0}));
    CHECK_FALSE(open.contains(C2{std::exp(1.0), 1.0}));  // exactly on boundary
    CHECK_FALSE(open.contains(C2{0.0, 1.0}));            // coordinate axis excluded
    DomainParams p;
    p.closed = true;
    auto closed = make_domain("torus_tube", p);
    CHECK(closed.contains(C2{std::exp(1.0), 1.0}));
    CHECK(closed.margin(C2{std::exp(1.0), 1.0}) == doctest::Approx(0.0));
}

TEST_CASE("torus tube envelope equals the closed tube") {
    auto G = make_domain("torus_tube", {});
    CHECK(G.known_envelope(C2{std::exp(1.0), 1.0}));
    CHECK_FALSE(G.known_envelope(C2{std::exp(1.1), 1.0}));
}

TEST_CASE("unknown domain is rejected") { CHECK_THROWS(make_domain("cube", {})); }
