#ifndef DISCHULL_DENDRA_HPP
#define DISCHULL_DENDRA_HPP

#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "dischull/discs.hpp"
#include "dischull/domain.hpp"
#include "dischull/treecore.hpp"

namespace dischull {

// Sampled family of discs over a walk parameter together with its curve of
// centers. Linear coefficientwise interpolation between samples.
struct Halo {
    std::vector<double> params;
    std::vector<AnalyticDisc> discs;
    std::vector<C2> curve;  // centers, aligned with discs

    std::size_t size() const { return discs.size(); }
    AnalyticDisc at(double s) const;
    C2 curve_at(double s) const;
    AnalyticDisc front() const { return discs.front(); }
    AnalyticDisc back() const { return discs.back(); }

    double max_center_mismatch() const;
    std::vector<double> jumps() const;  // adjacent coefficient-sup-norm steps
    double cont_scale() const;          // discrete continuity scale delta_cont
    std::vector<std::size_t> discontinuities() const;  // jump > 5 * delta_cont
    void validate(double tol_center = 1e-9) const;

    Halo reversed() const;

    static Halo constant(const AnalyticDisc& d, int n);
    static Halo interpolate(const AnalyticDisc& a, const AnalyticDisc& b, int n);
    static Halo from_family(const DiscFamily& F);
    // Concatenation; sub-halo parameter ranges proportional to sample counts.
    static Halo concat(const std::vector<Halo>& parts);
};

// Witness log for disc equivalence: (i) a pair of small equally centered
// embedded discs, (ii) a homotopy of equally-centered pairs grown from an
// established pair, (iii) a chain of established equivalences.
struct EquivalenceTrace {
    struct Pair {
        AnalyticDisc d1, d2;
    };
    struct Homotopy {
        std::vector<EquivalenceTrace> base;  // exactly one element
        DiscFamily F1, F2;                   // F1(0), F2(0) = base endpoints
    };
    struct Chain {
        std::vector<EquivalenceTrace> parts;
    };
    std::variant<Pair, Homotopy, Chain> step;

    static EquivalenceTrace pair(const AnalyticDisc& d1, const AnalyticDisc& d2);
    static EquivalenceTrace homotopy(EquivalenceTrace base, DiscFamily F1, DiscFamily F2);
    static EquivalenceTrace chain(std::vector<EquivalenceTrace> parts);
};

// diam_small for a session domain.
inline double diam_small(const ModelDomain& G) { return 0.05 * G.inradius_proxy; }

// Checks the trace invariants: pairs small, equally centered, embedded in G;
// homotopy families share centers samplewise. Throws naming the first bad step.
void validate_trace(const EquivalenceTrace& trace, const ModelDomain& G,
                    const Tolerances& tol = default_tols());

// Tree with a halo over its punctured pellicle.
struct Dendrite {
    PlanarTree tree;     // embedded
    PellicleWalk walk;   // punctured
    Halo halo;

    C2 phi_at(double s) const { return halo.curve_at(s); }
    Pt2 point_at(double s) const { return walk.point_at(tree, s); }
    void validate(double tol_center = 1e-9) const;
};

// Assembles the dendrite of an equivalence trace: halo endpoints are the
// final pair, leaves carry the trace's small discs, chains glue at the root.
Dendrite build_dendrite(const EquivalenceTrace& trace,
                        const Tolerances& tol = default_tols());

// Piecewise lift of a curve: families over consecutive parameter ranges with
// an equivalence trace bridging each breakpoint.
struct CurveLift {
    std::vector<DiscFamily> pieces;       // piece k covers [b_{k-1}, b_k]
    std::vector<EquivalenceTrace> breaks; // size = pieces - 1
};

struct Excrescence {
    std::vector<double> params;       // walk parameters of the modified curve
    std::vector<Pt2> points;          // geometric walk including tree detours
    std::vector<Dendrite> trees;
    std::vector<double> attach_params;  // breakpoint parameter values
    Halo halo;
};

// Pastes a dendrite into the curve at every breakpoint of the lift and glues
// the haloes; trees sprout along the left normal and must stay disjoint.
Excrescence excrescence_with_halo(const std::vector<double>& t,
                                  const std::vector<Pt2>& pts,
                                  const std::vector<C2>& sigma,
                                  const CurveLift& lift,
                                  const Tolerances& tol = default_tols());

// Tree hanging off the unit circle at a root angle, embedded in the outside.
struct AttachedTree {
    double root_angle = 0.0;
    Dendrite dendrite;
};

struct NeuronAxon {
    int tree_index = -1;  // -1: degenerate axon at a circle point
    int leaf = -1;        // leaf vertex id within the axon tree
    double angle = 0.0;
    AnalyticDisc tip;     // halo value at the axon tip
    bool degenerate() const { return tree_index < 0; }
};

// Generalized disc with boundary halo: main body on the closed unit disc,
// trees on the circle, halo over the boundary walk, optional axon.
struct Neuron {
    AnalyticDisc body;
    std::vector<AttachedTree> trees;  // ccw by root angle
    Halo halo;                        // over the boundary walk
    std::vector<Pt2> walk_points;     // aligned with halo samples
    std::optional<NeuronAxon> axon;

    bool is_preneuron() const { return !axon.has_value(); }
    void validate(const ModelDomain& G, const Tolerances& tol = default_tols()) const;
};

// Tree-free preneuron: halo sampled from a disc-valued function over angles.
Neuron make_preneuron(const AnalyticDisc& body,
                      const std::function<AnalyticDisc(double)>& boundary_disc,
                      int n_samples);

struct BoundaryTrace {
    double angle = 0.0;
    EquivalenceTrace trace;  // starts at the halo value, ends in small discs
};

// Designates an axon: reuses a boundary point whose halo disc is already
// small and embedded, otherwise grows a tree from a supplied trace.
Neuron preneuron_to_neuron(const Neuron& p, const std::vector<BoundaryTrace>& traces,
                           const ModelDomain& G, const Tolerances& tol = default_tols());

struct KappaCloud {
    std::vector<C2> points;
    double min_margin = 0.0;
    bool inside = false;
};

// Compact kappa of a neuron: halo boundary circles plus the full axon-tip disc.
KappaCloud kappa(const Neuron& n, const ModelDomain& G, int n_b = 32, int n_grid = 8);

// Prefixes a family with small embedded discs along a path and the radial
// contractions of its first member, reparametrized to [0,1].
DiscFamily prepend_embedded_start(const DiscFamily& F, const std::vector<C2>& path,
                                  double sigma, const ModelDomain& G,
                                  const Tolerances& tol = default_tols());

struct NeuronFamily {
    std::vector<double> params;
    std::vector<Neuron> neurons;
    std::vector<double> discontinuities;  // parameter values of detected jumps
    std::vector<C2> axon_tips;            // tip center curve
};

// Piecewise-continuous neuron family over a disc family: boundary halo from
// the lift, axon growing to the segment [1,2] when needed, jump detection.
NeuronFamily build_pw_neuron_family(
    const DiscFamily& Psi, double gamma_half_width,
    const std::function<AnalyticDisc(double, double)>& boundary_halo,
    const ModelDomain& G, int n_t = 33, int n_angle = 64,
    const Tolerances& tol = default_tols());

}  // namespace dischull

#endif
