#ifndef DISCHULL_TREECORE_HPP
#define DISCHULL_TREECORE_HPP

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dischull/geom.hpp"

namespace dischull {

// Rooted tree with counterclockwise sibling order and an optional
// straight-segment planar embedding. Vertex ids are indices 0..n-1.
// An edge is identified by its child vertex.
struct PlanarTree {
    int root = 0;
    std::vector<int> parent;                 // -1 at root
    std::vector<std::vector<int>> children;  // ccw order
    std::vector<Pt2> pos;                    // empty if not embedded

    int num_vertices() const { return int(parent.size()); }
    int num_edges() const { return num_vertices() - 1; }
    bool has_embedding() const { return !pos.empty(); }
    bool is_simple() const { return children[root].size() == 1; }

    static PlanarTree point_tree();
    static PlanarTree single_edge();
    // Build from parent links; child order taken from insertion order.
    static PlanarTree from_parents(int root, const std::vector<int>& parent);

    void validate() const;  // throws std::invalid_argument on malformed trees
};

enum class Side { Left, Right };

struct PellicleEvent {
    int edge;  // child vertex id of the edge
    Side side;
};

// Boundary Euler tour of a planar tree: every edge once per side.
// Parametrized affinely on [0,1], equally per event. The punctured walk
// starts at the left side of the first root edge and ends at the right
// side of the last root edge; the closed walk is the same cyclic sequence.
struct PellicleWalk {
    std::vector<PellicleEvent> events;
    bool punctured = false;

    std::size_t size() const { return events.size(); }
    // Point on the tree at parameter s in [0,1] (requires embedding).
    Pt2 point_at(const PlanarTree& tree, double s) const;
};

PellicleWalk pellicle(const PlanarTree& tree, bool punctured);

PlanarTree glue_at_root(const std::vector<PlanarTree>& trees);

// Root-containing connected selection: kept[v] true for kept vertices.
struct SubtreeSelection {
    std::vector<bool> kept;
};

struct Residual {
    int attach_vertex;  // vertex id in the kept tree
    int child_slot;     // position among the original children (for re-attach)
    PlanarTree tree;    // rooted at the attachment vertex copy
};

struct CutResult {
    PlanarTree kept;
    std::vector<Residual> residuals;
};

CutResult cut_subtrees(const PlanarTree& tree, const SubtreeSelection& sel);

// Inverse of cut_subtrees (restores original vertex structure up to relabeling).
PlanarTree reattach(const CutResult& cut);

struct EmbedOptions {
    Pt2 root_pos{0.0, 0.0};
    double base_angle = 0.0;   // bisector of the root's angular span
    double span = 1.6 * M_PI;  // total angular span at the root
    double edge_len = 1.0;
};

// Deterministic non-crossing straight-segment embedding by recursive
// angular-sector allocation honoring ccw child order.
PlanarTree embed_planar(const PlanarTree& tree, const EmbedOptions& opt = {});

// Combinatorial isomorphism respecting ccw child order.
bool trees_isomorphic(const PlanarTree& a, const PlanarTree& b);

// Brute-force O(E^2) proper-crossing count of the embedded segments.
int count_embedding_crossings(const PlanarTree& tree);

}  // namespace dischull

#endif
