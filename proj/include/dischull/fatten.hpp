#ifndef DISCHULL_FATTEN_HPP
#define DISCHULL_FATTEN_HPP

#include <optional>
#include <vector>

#include "dischull/dendra.hpp"

namespace dischull {

// Thickened generalized disc: the unit disc united with tau-capsules around
// the kept edges, corners blended with a recorded rounding radius.
struct FattenedRegion {
    struct Seg {
        Pt2 a, b;
    };

    double tau = 0.0;
    double rounding = 0.0;  // corner rounding radius (tau / 4)
    double tau_max = 0.0;   // largest feasible tau for this geometry
    std::vector<Seg> capsules;  // leaf-shortened kept edges
    std::vector<Pt2> kept_leaves;
    std::vector<Pt2> residual_samples;  // cut-off tree parts, must stay outside
    std::vector<Pt2> boundary;          // closed ccw polyline

    double sdf(const Pt2& p) const;  // negative inside
    bool contains(const Pt2& p) const { return sdf(p) <= 0.0; }
    int boundary_winding() const;  // of the traced boundary around the origin
};

// Builds E^tau for the selected subtrees of the attached trees. Throws when
// tau exceeds the clearance bound, reporting the feasible maximum.
FattenedRegion fatten_region(const std::vector<AttachedTree>& trees,
                             const std::vector<SubtreeSelection>& sel, double tau);

// C2-valued polynomial in the plane variable, from least-squares fitting.
struct FitResult {
    std::vector<C2> coeffs;  // in the scaled basis (z / scale)^k
    double scale = 1.0;
    int degree = 0;
    double sup_error = 0.0;
    bool tol_met = false;

    C2 eval(cplx z) const;
};

// Polynomial approximation of the body map and the tree values on nu_S,
// escalating the degree until eps is met or the cap is reached.
FitResult approximate_on_fattening(const AnalyticDisc& body,
                                   const std::vector<std::pair<Pt2, C2>>& tree_values,
                                   const FattenedRegion& region, double eps,
                                   int degree_cap = 48);

// Parallel translation of a halo onto new center values.
Halo transport_halo(const Halo& h, const std::vector<C2>& new_centers);

// Numerical Riemann map phi : D -> region from the Szego kernel.
struct ConformalMap {
    cplx center;                  // phi(0)
    cplx rotation{1.0};           // pre-rotation: phi(zeta) = series(zeta * rotation)
    std::vector<cplx> boundary;   // region boundary samples w_j
    std::vector<double> angle;    // theta_j with phi(e^{i theta_j}) = w_j
    std::vector<double> phi_prime_abs;  // |phi'| at the boundary samples
    std::vector<cplx> taylor;     // phi coefficients about 0
    double residual = 0.0;        // boundary reconstruction + analyticity defect
    bool ok = false;

    // spectral boundary tables: w(t), theta'(t) coefficients and theta(t_j)
    // samples, used for Cauchy-integral evaluation (robust under crowding)
    std::vector<cplx> wc, tpc;
    std::vector<double> theta_t, theta_p;

    cplx eval(cplx zeta) const;
    cplx deriv(cplx zeta) const;
    cplx inverse(cplx w) const;  // Newton, seeded from the boundary table
    double param_of_angle(double alpha) const;  // t with theta(t) = alpha
};

// boundary_pts: closed Jordan curve, ccw, roughly uniform; designated: index
// of a boundary point to be sent to 1 (wins over the phi'(0) > 0 default).
ConformalMap conformal_reparam(const std::vector<cplx>& boundary_pts,
                               long designated = -1, double tol_cr = 1e-6);

ConformalMap conformal_reparam(const FattenedRegion& region,
                               std::optional<Pt2> designated = std::nullopt,
                               double tol_cr = 1e-3);

}  // namespace dischull

#endif
