#ifndef DISCHULL_CONTPRIN_HPP
#define DISCHULL_CONTPRIN_HPP

#include <functional>
#include <string>
#include <vector>

#include "dischull/discs.hpp"
#include "dischull/domain.hpp"

namespace dischull {

// The Hartogs core sets of the cylinder [0,1] x closed unit disc:
// core0 = ({0} x D-bar) U ([0,1] x dD), core = ([0,1) x D-bar) U ([0,1] x dD),
// cyl = [0,1] x D-bar.
struct HartogsCore {
    double epsilon = 0.25;

    bool in_core0(double t, cplx z, double tol = 1e-12) const;
    bool in_core(double t, cplx z, double tol = 1e-12) const;
    bool in_cylinder(double t, cplx z, double tol = 1e-12) const;
};

// Analytic continuation from the Hartogs core by a Cauchy-type integral over
// the enlarged circles {t} x (1+eps) dD, trapezoid quadrature.
struct CauchyExtender {
    std::function<cplx(double, cplx)> g;  // holomorphic in z near the circles
    double epsilon = 0.25;
    int n_quad = 512;

    cplx value(double t, cplx z) const;

    // Residual of the extension against g on the bottom disc {0} x D-bar.
    // Large values falsify the holomorphy hypothesis (e.g. a hidden pole).
    double bottom_residual(int n_grid = 12) const;

    struct Report {
        cplx value;
        double residual;
        bool valid;
    };
    Report extend_checked(double t, cplx z, double tol = 1e-3) const;
};

struct LiftCheckReport {
    struct PerTest {
        // extension values over d's boundary and an interior grid of d
        std::vector<cplx> boundary_values;   // at 64 boundary points of d
        std::vector<cplx> interior_values;   // on an 8x8 polar grid
        double direct_residual;              // max |ext - test(d(z))| where comparable
    };
    std::vector<PerTest> tests;
    double overlap_residual = 0.0;  // consistency at near self-intersections
    bool family_in_G = true;
    double worst_family_t = -1.0;
};

// Desk-scale disc-lifting check: pushes each test function through the
// Cauchy extension along the (holomorphized, immersed) witness family H
// joining a small embedded disc to d, and reports values on d's image.
LiftCheckReport lift_disc_check(const AnalyticDisc& d, const DiscFamily& H,
                                const std::vector<std::function<cplx(const C2&)>>& tests,
                                const ModelDomain& G);

}  // namespace dischull

#endif
