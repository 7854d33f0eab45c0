#ifndef DISCHULL_LAB_HPP
#define DISCHULL_LAB_HPP

#include "dischull/fatten.hpp"
#include "dischull/peeler.hpp"

namespace dischull {

struct StageReport {
    std::string stage;
    double error = 0.0;
    bool ok = false;
};

// Boundary lift data for the through-point pipeline: a fiber disc per circle
// angle, the coefficient-fit arc gamma with its squeezing sub-arc gamma_o,
// and (when no boundary fiber is small) traces growing the axon tree.
struct ThroughPointInput {
    AnalyticDisc body;
    std::function<AnalyticDisc(double)> lift;
    int n_samples = 256;
    CircleArc gamma{M_PI / 2, 3 * M_PI / 2};
    CircleArc gamma_o{3 * M_PI / 4, 5 * M_PI / 4};
    std::vector<BoundaryTrace> traces;
    cplx fiber_z{1.0, 0.0};
    // fattening thickness when a tree is grown; generous by default to keep
    // the finger aspect ratio (and hence conformal crowding) moderate
    double tau = 0.12;
};

struct ThroughPointResult {
    Neuron neuron;
    FattenedRegion region;
    FitResult fit;
    ConformalMap map;  // populated only when the region has capsules
    RHSolution rh;
    GDiscExtraction extraction;
    AnalyticDisc disc;  // final translated disc
    C2 translation;
    double target_distance = 0.0;
    double boundary_margin = 0.0;
    std::vector<StageReport> stages;
    bool ok = false;

    double staged_error_sum() const;
};

// Pipeline: preneuron_to_neuron -> fatten_region -> approximate_on_fattening
// -> conformal_reparam -> solve_rh -> extract_g_disc -> translate to target.
// Throws std::runtime_error naming the failing stage.
ThroughPointResult run_through_point(const ModelDomain& G, const ThroughPointInput& in,
                                     const C2& target, double eps,
                                     const Tolerances& tol = default_tols());

struct FamilyRunInput {
    DiscFamily bodies;  // the input family Psi_t
    std::function<AnalyticDisc(double, double)> lift;  // (t, theta) -> fiber
    int n_t = 9;
    int n_angle = 128;
    CircleArc gamma{3 * M_PI / 2, M_PI / 2};     // wraps through angle 0
    CircleArc gamma_o{7 * M_PI / 4, M_PI / 4};
    CircleArc splice_gamma{5.8, 1.0};
    cplx fiber_z{1.0, 0.0};
    std::vector<cplx> K{cplx(0.0)};
    double eps = 0.05;
};

struct FamilyRunResult {
    std::vector<double> params;
    std::vector<Neuron> neurons;      // post-splice
    std::vector<AnalyticDisc> discs;  // extracted G-disc per member
    std::size_t jumps_spliced = 0;
    double max_step = 0.0;
    double delta_cont = 0.0;  // discontinuity-detector threshold for the output
    bool continuous = false;
    bool f0_in_g = false;
    std::vector<StageReport> stages;
    bool ok = false;
};

// build_pw_neuron_family -> splice_family -> per-member solve_rh + extraction
// at the fixed fiber point, with parameter-uniform eps.
FamilyRunResult run_family_pipeline(const FamilyRunInput& in, const ModelDomain& G,
                                    const Tolerances& tol = default_tols());

// Variant taking a pre-built (possibly discontinuous) neuron family.
FamilyRunResult run_family_pipeline(const std::vector<double>& params,
                                    const std::vector<Neuron>& family,
                                    const FamilyRunInput& in, const ModelDomain& G,
                                    const Tolerances& tol = default_tols());

enum class WindingMode { LogModulus, Argument };

// LogModulus: winding of the plane curve (log|w1|, log|w2|) about the origin,
// reported in both slots. Argument: total angular increments of w1 and w2,
// in turns. Throws when the loop is open or meets the singular locus.
std::pair<int, int> winding_diagnostic(const std::vector<C2>& loop, WindingMode mode);

// exp of the torus generators f(z) = (z, -iz) (plus) / (z, iz) (minus).
AnalyticDisc torus_disc(bool plus, int n_coeffs = 40);

}  // namespace dischull

#endif
