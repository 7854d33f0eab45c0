#ifndef DISCHULL_PEELER_HPP
#define DISCHULL_PEELER_HPP

#include "dischull/dendra.hpp"
#include "dischull/rhsolve.hpp"

namespace dischull {

// One stage of the twin-growing homotopy: the dendrite is the "fold" of the
// input at pellicle fraction s -- the active path (points traversed once)
// lies on the bisector, completed subtrees hang clockwise of it, and the
// whole clockwise half is mirrored.
struct TwinStage {
    double s = 0.0;
    Dendrite dend;
    std::vector<int> trunk;          // fold-tree vertex ids along the bisector
    std::vector<int> rotated_roots;  // roots of the clockwise (first) copies
    std::vector<int> mirror_roots;   // roots of the mirrored copies
    std::vector<int> cw_map;         // input vertex id -> clockwise copy id (-1 if absent)
    std::vector<int> mirror_map;     // input vertex id -> mirrored copy id (-1 if absent)
};

struct TwinGrowth {
    Cone cone;
    double reach = 1.0;             // radial extent used inside the cone
    std::vector<TwinStage> stages;  // s = 0, 1/m, ..., 1

    // first twin of the final stage as a standalone tree (root = apex)
    PlanarTree first_twin() const;
};

// schedule: fold parameters to use; empty -> uniform {0, 1/m, ..., 1}
TwinGrowth grow_twins(const Dendrite& T, const Pt2& xi, const Cone& U, int m = 16,
                      double reach = 0.5, std::vector<double> schedule = {});

// One member of the peeling homotopy with the decomposition of its halo
// samples: [gamma) swept-arc excrescence carrying the n+ values, [fold) the
// currently growing twin (empty off twin phases), [el) the A-symmetric inner
// side replaying the gamma values reversed, [outer) the A-transported old
// part followed by the untouched arc, both carrying n- values.
struct PeelFrame {
    Neuron neuron;
    double theta = 0.0;  // sweep-edge root angle
    std::size_t gamma_begin = 0, gamma_end = 0, fold_end = 0, el_end = 0;
};

struct PeelResult {
    Dendrite T;  // accumulated dendrite, attached at zeta_star in the end
    double zeta_star = 0.0;
    std::vector<PeelFrame> frames;
    double max_pellicle_step = 0.0;  // worst consecutive walk Hausdorff step
    double max_halo_step = 0.0;      // worst consecutive resampled halo step
    int steps_used = 0;
    bool step_bound_met = false;
};

// Discrete homotopy of neurons joining n_minus to n_plus with the extra
// dendrite T attached at a point of gamma clockwise of 1. Requires identical
// bodies, a tree-free n_minus, haloes agreeing on gamma, and all n_plus
// roots outside gamma.
// zeta_star_hint < 0 picks the midpoint of gamma's clockwise-of-1 part.
PeelResult peel(const Neuron& n_minus, const Neuron& n_plus, const CircleArc& gamma,
                double zeta0, int m, const ModelDomain& G,
                const Tolerances& tol = default_tols(), double zeta_star_hint = -1.0);

// Distance between neurons: walk-point Hausdorff plus the sup over a common
// parameter grid of the coefficientwise halo distance.
double neuron_step(const Neuron& a, const Neuron& b, int n_probe = 256);

// Jump detector over a neuron family, mirroring Halo::discontinuities.
std::vector<std::size_t> neuron_discontinuities(const std::vector<Neuron>& family);

struct SpliceResult {
    std::vector<double> params;
    std::vector<Neuron> neurons;
    std::vector<Dendrite> attached;  // one spliced-in dendrite per jump
    CircleArc final_gamma;
};

// Removes the detected discontinuities by inserting peel homotopies; every
// member after the j-th jump carries a copy of the j-th dendrite; gamma is
// shrunk past each consumed attachment point.
SpliceResult splice_family(const std::vector<double>& params,
                           const std::vector<Neuron>& family, CircleArc gamma,
                           const ModelDomain& G, int m = 32,
                           const Tolerances& tol = default_tols());

}  // namespace dischull

#endif
