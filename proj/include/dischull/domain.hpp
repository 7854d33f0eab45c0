#ifndef DISCHULL_DOMAIN_HPP
#define DISCHULL_DOMAIN_HPP

#include <functional>
#include <optional>
#include <string>

#include "dischull/discs.hpp"

namespace dischull {

// Concrete domain G in C^2: membership oracle, defining function (negative
// inside), and a signed-distance estimate (positive inside, lower bound on
// the true boundary distance for the shipped fixtures).
struct ModelDomain {
    std::string name;
    std::function<bool(const C2&)> membership;
    std::function<double(const C2&)> defining;
    std::function<double(const C2&)> margin;
    std::function<bool(const C2&)> known_envelope;  // fixture knowledge, may be null
    double inradius_proxy = 1.0;

    bool contains(const C2& p) const { return membership(p); }
};

struct DomainParams {
    double r1 = 0.9, r2 = 1.1;  // shell radii
    double eps = 0.25;          // hartogs figure parameter
    double thickness = 1.0;     // torus tube radius in log coordinates
    bool closed = false;        // take the closure (torus tube fixture)
};

ModelDomain make_domain(const std::string& name, const DomainParams& params = {});

}  // namespace dischull

#endif
