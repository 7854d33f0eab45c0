#include "dischull/contprin.hpp"

#include <cmath>
#include <stdexcept>

namespace dischull {

bool HartogsCore::in_core0(double t, cplx z, double tol) const {
    if (t < -tol || t > 1.0 + tol) return false;
    double r = std::abs(z);
    return (std::abs(t) <= tol && r <= 1.0 + tol) || std::abs(r - 1.0) <= tol;
}

bool HartogsCore::in_core(double t, cplx z, double tol) const {
    if (t < -tol || t > 1.0 + tol) return false;
    double r = std::abs(z);
    return (t < 1.0 - tol && r <= 1.0 + tol) || std::abs(r - 1.0) <= tol;
}

bool HartogsCore::in_cylinder(double t, cplx z, double tol) const {
    return t >= -tol && t <= 1.0 + tol && std::abs(z) <= 1.0 + tol;
}

cplx CauchyExtender::value(double t, cplx z) const {
    if (std::abs(z) >= 1.0)
        throw std::invalid_argument("cauchy_extend: need |z| < 1");
    const double R = 1.0 + epsilon;
    cplx acc = 0.0;
    for (int j = 0; j < n_quad; ++j) {
        cplx zeta = std::polar(R, 2 * M_PI * j / n_quad);
        // (1/2pi i) * g(t,zeta)/(zeta - z) * (i zeta) * (2pi/n)
        acc += g(t, zeta) * zeta / (zeta - z);
    }
    return acc / double(n_quad);
}

double CauchyExtender::bottom_residual(int n_grid) const {
    double res = 0.0;
    for (int i = 0; i < n_grid; ++i) {
        double r = 0.95 * double(i) / double(n_grid - 1);
        for (int j = 0; j < n_grid; ++j) {
            cplx z = std::polar(r, 2 * M_PI * j / n_grid);
            res = std::max(res, std::abs(value(0.0, z) - g(0.0, z)));
        }
    }
    return res;
}

CauchyExtender::Report CauchyExtender::extend_checked(double t, cplx z, double tol) const {
    double res = bottom_residual();
    return {value(t, z), res, res <= tol};
}

LiftCheckReport lift_disc_check(const AnalyticDisc& d, const DiscFamily& H,
                                const std::vector<std::function<cplx(const C2&)>>& tests,
                                const ModelDomain& G) {
    H.validate();
    LiftCheckReport rep;
    // endpoint checks: family joins a small embedded disc in G to d
    if (disc_distance(H.discs.back(), d) > 1e-8)
        throw std::invalid_argument("lift_disc_check: family does not end at d");
    {
        auto r0 = is_g_disc(H.discs.front(), G);
        if (!r0.boundary_in_G)
            throw std::invalid_argument("lift_disc_check: family start not a G-disc");
    }
    // every member must be a G-disc
    for (std::size_t i = 0; i < H.size(); ++i) {
        auto r = is_g_disc(H.discs[i], G);
        if (!r.boundary_in_G) {
            rep.family_in_G = false;
            rep.worst_family_t = H.params[i];
            throw std::invalid_argument("lift_disc_check: family leaves G at t = " +
                                        std::to_string(H.params[i]));
        }
    }
    // holomorphize in t and enforce immersion before extending
    auto holo = holomorphize_family(H, 16, 6, 1e-7);
    DiscFamily smooth;
    const int m = 33;
    for (int i = 0; i < m; ++i) {
        double t = double(i) / double(m - 1);
        smooth.params.push_back(t);
        smooth.discs.push_back(holo.member(t));
    }
    auto pert = perturb_to_immersion(smooth, 1e-8, 50, 1e-3);
    const DiscFamily& fam = pert.success ? pert.family : smooth;

    for (const auto& test : tests) {
        LiftCheckReport::PerTest pt;
        CauchyExtender ext;
        ext.g = [&](double t, cplx z) { return test(fam.at(t).eval(z)); };
        pt.direct_residual = 0.0;
        for (int j = 0; j < 64; ++j) {
            // evaluate just inside the boundary (the integral needs |z| < 1)
            cplx z = std::polar(0.995, 2 * M_PI * j / 64);
            cplx v = ext.value(1.0, z);
            pt.boundary_values.push_back(v);
        }
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                cplx z = std::polar(0.9 * double(i) / 7.0, 2 * M_PI * j / 8);
                pt.interior_values.push_back(ext.value(1.0, z));
            }
        // residual against direct evaluation where the test is defined on d
        double res = 0.0;
        int idx = 0;
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                cplx z = std::polar(0.9 * double(i) / 7.0, 2 * M_PI * j / 8);
                cplx direct = test(d.eval(z));
                if (std::isfinite(direct.real()) && std::isfinite(direct.imag()))
                    res = std::max(res, std::abs(pt.interior_values[idx] - direct));
                ++idx;
            }
        pt.direct_residual = res;
        rep.tests.push_back(std::move(pt));
    }

    // overlap consistency: where d's image nearly self-intersects, the
    // extensions of a single test must agree
    if (!tests.empty()) {
        CauchyExtender ext;
        const auto& test = tests[0];
        ext.g = [&](double t, cplx z) { return test(fam.at(t).eval(z)); };
        const int n = 24;
        std::vector<cplx> zs;
        std::vector<C2> ims;
        for (int i = 1; i < 6; ++i)
            for (int j = 0; j < n; ++j) {
                cplx z = std::polar(0.15 * i, 2 * M_PI * j / n);
                zs.push_back(z);
                ims.push_back(d.eval(z));
            }
        double res = 0.0;
        for (std::size_t i = 0; i < zs.size(); ++i)
            for (std::size_t j = i + 1; j < zs.size(); ++j) {
                if (std::abs(zs[i] - zs[j]) < 0.2) continue;  // same sheet
                if ((ims[i] - ims[j]).norm() < 1e-6)
                    res = std::max(res, std::abs(ext.value(1.0, zs[i]) - ext.value(1.0, zs[j])));
            }
        rep.overlap_residual = res;
    }
    return rep;
}

}  // namespace dischull
