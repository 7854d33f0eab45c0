#ifndef DISCHULL_RHSOLVE_HPP
#define DISCHULL_RHSOLVE_HPP

#include <array>
#include <string>
#include <vector>

#include "dischull/discs.hpp"
#include "dischull/domain.hpp"

namespace dischull {

// Closed arc of the unit circle, swept ccw from a to b.
struct CircleArc {
    double a = 0.0, b = 0.0;

    double length() const;
    bool contains(double theta) const;
    // closure of this arc lies in the interior of the other
    bool strictly_inside(const CircleArc& outer) const;
};

// Skeleton of a Hartogs figure: central disc plus a full disc fiber over
// each boundary sample, with a distinguished arc Gamma carrying fibers that
// are small and embedded in G, and an open sub-arc Gamma_o.
struct HartogsCoreData {
    AnalyticDisc central;
    std::vector<double> angles;        // uniform boundary sample angles
    std::vector<AnalyticDisc> fibers;  // fiber over each angle
    std::vector<bool> small_in_g;      // per-sample "small embedded in G" flag
    CircleArc gamma, gamma_o;

    std::size_t size() const { return fibers.size(); }
    void validate(const Tolerances& tol = default_tols()) const;
};

// Builds uniformly sampled core data from a fiber rule; flags over gamma set.
HartogsCoreData make_core(const AnalyticDisc& central, int n_samples,
                          const std::vector<AnalyticDisc>& fibers, CircleArc gamma,
                          CircleArc gamma_o);

// Per-fiber Taylor coefficients a_k(zeta), k = 0..k_max, via FFT of fiber
// boundary values; residual is the worst reconstruction error on the samples.
struct FiberCoeffs {
    std::vector<std::vector<C2>> a;  // a[j][k], j = boundary sample index
    int k_max = 0;
    double residual = 0.0;
};

FiberCoeffs taylor_coeffs(const HartogsCoreData& data, int k_max);

// Damped truncation J_{D,r,N}(zeta, z) = sum_{k<=N} a_k(zeta) r^k z^k.
struct TruncatedData {
    std::vector<std::vector<C2>> damped;  // damped[j][k] = a_k r^k
    double r = 0.0;
    int N = 0;
    double sup_error = 0.0;  // vs the fibers on (bd D minus Gamma_o) x closed D

    C2 eval(std::size_t j, cplx z) const;
};

TruncatedData truncate_damp(const HartogsCoreData& data, const FiberCoeffs& coeffs,
                            double r, int N);

// Least-squares polynomial-in-zeta fit of each coefficient function over the
// supplied arc samples; k = 0 is passed through untouched (identically the
// central disc's boundary values, already holomorphic).
struct CoeffExtension {
    std::vector<std::vector<C2>> poly;  // poly[k] = zeta-coefficients, k >= 1
    double arc_error = 0.0;             // worst samplewise fit error over all k

    C2 eval_k(int k, cplx zeta) const;
};

CoeffExtension holo_coeff_ext(const std::vector<cplx>& zetas,
                              const std::vector<std::vector<C2>>& a_k_samples,
                              int degree);

// Zero-free holomorphic g on the closed disc with |g| = rho on the boundary,
// g(0) > 0; built from the conjugate function of log rho.
struct OuterFunction {
    std::vector<double> rho;    // boundary profile on the uniform grid
    std::vector<cplx> coeffs;   // power series of g about 0
    double modulus_residual = 0.0;  // max | |g(e^{i theta})| - rho(theta) |
    double min_abs = 0.0;           // min |g| on a grid of the closed disc
    double fourier_tail = 0.0;      // relative tail mass of log rho

    cplx eval(cplx zeta) const;
};

OuterFunction outer_function(const std::vector<double>& rho_samples, int n_fft);

// Composed approximate Riemann-Hilbert solution H = h o Upsilon^g with
// h(zeta, z) = central(zeta) + sum_{k>=1} fitted_a_k(zeta) r^k z^k and
// Upsilon^g(zeta, z) = (zeta, g(zeta) z).
struct RHClauseReport {
    bool passed = false;
    double worst = 0.0;
    std::size_t worst_index = 0;
    std::string clause;
};

struct RHSolution {
    AnalyticDisc central;
    CoeffExtension ext;
    OuterFunction g;
    double r = 0.95;
    int N = 24;
    double eps = 0.0;
    double rho_min = 0.0;  // final profile depth after geometric lowering
    std::array<RHClauseReport, 3> clauses;
    bool ok = false;

    C2 eval(cplx zeta, cplx z) const;
};

RHSolution solve_rh(const HartogsCoreData& data, const std::vector<cplx>& K,
                    double eps, double r = 0.95, int N = 24, int fit_degree = 24,
                    int n_fft = 1024);

// G-disc f^z(zeta) = H(zeta, z) for a fixed fiber boundary point z, with the
// homotopy f^{tz}, t in [0, 1], joining it to the central disc.
struct GDiscExtraction {
    AnalyticDisc disc;    // immersion-perturbed f^z
    DiscFamily homotopy;  // t -> f^{tz}, homotopy.discs.front() = central
    GDiscReport report;
    double fit_residual = 0.0;     // boundary resampling error of the fits
    double boundary_margin = 0.0;  // min G-margin over boundary samples
    bool ok = false;
};

GDiscExtraction extract_g_disc(const RHSolution& H, cplx z, const ModelDomain& G,
                               const Tolerances& tol = default_tols());

}  // namespace dischull

#endif
