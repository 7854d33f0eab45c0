#ifndef DISCHULL_DISCS_HPP
#define DISCHULL_DISCS_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "dischull/fft.hpp"

namespace dischull {

// Point of C^2.
struct C2 {
    cplx w1{0.0}, w2{0.0};
    C2() = default;
    C2(cplx a, cplx b) : w1(a), w2(b) {}
    C2 operator+(const C2& o) const { return {w1 + o.w1, w2 + o.w2}; }
    C2 operator-(const C2& o) const { return {w1 - o.w1, w2 - o.w2}; }
    C2 operator*(cplx s) const { return {w1 * s, w2 * s}; }
    double norm() const { return std::sqrt(std::norm(w1) + std::norm(w2)); }
};

struct Tolerances {
    double tol_imm = 1e-6;
    double tol_trunc = 1e-8;
    double tol_trans = 1e-6;
    double tol_center = 1e-9;
    int n_boundary = 256;
    int default_degree = 64;
};

inline const Tolerances& default_tols() {
    static Tolerances t;
    return t;
}

// Truncated power series z -> sum a_k z^k with C^2 coefficients, valid on a
// disc of radius > 1.
struct AnalyticDisc {
    std::vector<C2> coeffs;
    double radius = 1.25;     // validity radius of the truncation
    double tail_const = 0.0;  // recorded C with |a_k| <= C * radius^-k

    AnalyticDisc() = default;
    AnalyticDisc(std::vector<C2> c, double rho);

    C2 eval(cplx z) const;
    C2 deriv(cplx z) const;
    C2 center() const { return coeffs.empty() ? C2{} : coeffs[0]; }
    int degree() const { return int(coeffs.size()) - 1; }

    std::vector<C2> boundary_samples(int n) const;
    double image_diameter(int n = 64) const;
};

// Coefficientwise sup-norm distance between two discs.
double disc_distance(const AnalyticDisc& a, const AnalyticDisc& b);
// sup-norm of the derivative coefficient difference on |z|<=1 (crude C^1 bound).
double disc_c1_distance(const AnalyticDisc& a, const AnalyticDisc& b);

// Automorphism of the unit disc with phi(0) = z0.
struct MobiusAut {
    cplx z0{0.0};
    cplx rotation{1.0};
    cplx apply(cplx z) const { return (rotation * z + z0) / (1.0 + std::conj(z0) * rotation * z); }
    cplx preimage_of_zero() const { return -z0 / rotation; }
};

AnalyticDisc recenter(const AnalyticDisc& d, cplx z0, cplx rotation = 1.0,
                      const Tolerances& tol = default_tols());

struct ModelDomain;  // domain.hpp

struct GDiscReport {
    bool immersed = false;
    bool boundary_in_G = false;
    double margin = 0.0;     // min signed margin over boundary samples
    double min_deriv = 0.0;  // min |d'| over the sample grid
    bool ok() const { return immersed && boundary_in_G; }
};

GDiscReport is_g_disc(const AnalyticDisc& d, const ModelDomain& G,
                      const Tolerances& tol = default_tols());

AnalyticDisc small_embedded_disc(const C2& center, const C2& direction, double r);

// Foliation (z1, z2) -> d(z1) + z2 * v of a tubular neighbourhood of d.
struct TubeFoliation {
    AnalyticDisc base;
    C2 direction;
    double delta = 0.0;
    double min_transversality = 0.0;

    struct Leaf {
        cplx z1, z2;
        double residual;
    };
    Leaf leaf_through(const C2& q) const;  // Newton inversion
    AnalyticDisc leaf(cplx z2) const;
};

TubeFoliation foliate_tube(const AnalyticDisc& d, const C2& v, double delta,
                           const Tolerances& tol = default_tols());

// Sampled family of discs over [0,1] (or an arc), coefficientwise linear
// interpolation between samples.
struct DiscFamily {
    std::vector<double> params;
    std::vector<AnalyticDisc> discs;

    std::size_t size() const { return discs.size(); }
    AnalyticDisc at(double t) const;
    double max_step() const;  // largest adjacent coefficient-sup-norm jump
    std::vector<C2> centers() const;
    void validate() const;
};

struct HolomorphizedFamily {
    AnalyticDisc at_one;              // exact member at t = 1
    int varying_degree = 0;           // N: coefficients 0..N vary with t
    std::vector<std::vector<C2>> t_poly;  // per k<=N, coeffs of p_k(t) in basis (t-1)*t^j
    double achieved_error = 0.0;
    bool tol_met = false;

    C2 coeff_at(int k, double t) const;
    C2 eval(double t, cplx z) const;
    AnalyticDisc member(double t) const;
};

HolomorphizedFamily holomorphize_family(const DiscFamily& F, int N, int t_degree,
                                        double tol);

struct PerturbResult {
    DiscFamily family;
    int attempts_used = 0;
    bool success = false;
    double perturbation_norm = 0.0;
};

PerturbResult perturb_to_immersion(const DiscFamily& F, double tol_imm, int attempts,
                                   double bound, std::uint64_t seed = 17);

}  // namespace dischull

#endif
