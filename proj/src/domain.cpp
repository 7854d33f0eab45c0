#include "dischull/domain.hpp"

#include <cmath>
#include <stdexcept>

namespace dischull {

ModelDomain make_domain(const std::string& name, const DomainParams& p) {
    ModelDomain d;
    d.name = name;
    if (name == "shell") {
        if (!(0.0 < p.r1 && p.r1 < p.r2))
            throw std::invalid_argument("shell: need 0 < r1 < r2");
        const double r1 = p.r1, r2 = p.r2;
        d.membership = [r1, r2](const C2& w) {
            double r = w.norm();
            return r > r1 && r < r2;
        };
        d.defining = [r1, r2](const C2& w) {
            double r = w.norm();
            return std::max(r1 - r, r - r2);
        };
        d.margin = [r1, r2](const C2& w) {
            double r = w.norm();
            return std::min(r - r1, r2 - r);
        };
        d.known_envelope = [r2](const C2& w) { return w.norm() < r2; };
        d.inradius_proxy = 0.5 * (r2 - r1);
    } else if (name == "hartogs") {
        if (!(p.eps > 0.0 && p.eps < 1.0))
            throw std::invalid_argument("hartogs: need 0 < eps < 1");
        const double e = p.eps;
        // H_e = { |w1|<1, |w2|<e } U { 1-e<|w1|<1, |w2|<1 }
        d.membership = [e](const C2& w) {
            double a = std::abs(w.w1), b = std::abs(w.w2);
            return (a < 1.0 && b < e) || (a > 1.0 - e && a < 1.0 && b < 1.0);
        };
        d.defining = [e](const C2& w) {
            double a = std::abs(w.w1), b = std::abs(w.w2);
            double f1 = std::max(a - 1.0, b - e);
            double f2 = std::max({1.0 - e - a, a - 1.0, b - 1.0});
            return std::min(f1, f2);
        };
        d.margin = [e, d](const C2& w) { return -d.defining(w); };
        d.known_envelope = [](const C2& w) {
            return std::abs(w.w1) < 1.0 && std::abs(w.w2) < 1.0;
        };
        d.inradius_proxy = 0.5 * e;
    } else if (name == "torus_tube") {
        if (!(p.thickness > 0.0))
            throw std::invalid_argument("torus_tube: need thickness > 0");
        const double R = p.thickness;
        const bool closed = p.closed;
        auto rad = [](const C2& w) {
            double a = std::abs(w.w1), b = std::abs(w.w2);
            if (a <= 0.0 || b <= 0.0) return std::numeric_limits<double>::infinity();
            return std::hypot(std::log(a), std::log(b));
        };
        d.membership = [R, closed, rad](const C2& w) {
            double r = rad(w);
            return closed ? r <= R : r < R;
        };
        d.defining = [R, rad](const C2& w) { return rad(w) - R; };
        d.margin = [R, rad](const C2& w) { return R - rad(w); };
        d.known_envelope = [R, rad](const C2& w) { return rad(w) <= R; };
        d.inradius_proxy = R;
    } else {
        throw std::invalid_argument("make_domain: unknown domain '" + name + "'");
    }
    return d;
}

}  // namespace dischull
