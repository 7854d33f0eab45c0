#include "dischull/treecore.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace dischull {

PlanarTree PlanarTree::point_tree() {
    PlanarTree t;
    t.root = 0;
    t.parent = {-1};
    t.children = {{}};
    t.pos = {Pt2{0, 0}};
    return t;
}

PlanarTree PlanarTree::single_edge() {
    PlanarTree t;
    t.root = 0;
    t.parent = {-1, 0};
    t.children = {{1}, {}};
    t.pos = {Pt2{0, 0}, Pt2{1, 0}};
    return t;
}

PlanarTree PlanarTree::from_parents(int root, const std::vector<int>& parent) {
    PlanarTree t;
    t.root = root;
    t.parent = parent;
    t.children.assign(parent.size(), {});
    for (int v = 0; v < int(parent.size()); ++v) {
        if (v == root) continue;
        if (parent[v] < 0 || parent[v] >= int(parent.size()))
            throw std::invalid_argument("from_parents: bad parent link");
        t.children[parent[v]].push_back(v);
    }
    t.validate();
    return t;
}

void PlanarTree::validate() const {
    const int n = num_vertices();
    if (n == 0) throw std::invalid_argument("tree: empty");
    if (root < 0 || root >= n) throw std::invalid_argument("tree: bad root");
    if (parent[root] != -1) throw std::invalid_argument("tree: root has a parent");
    if (int(children.size()) != n) throw std::invalid_argument("tree: children size");
    std::vector<int> seen(n, 0);
    std::function<void(int)> dfs = [&](int v) {
        if (seen[v]++) throw std::invalid_argument("tree: cycle");
        for (int c : children[v]) {
            if (parent[c] != v) throw std::invalid_argument("tree: parent/child mismatch");
            dfs(c);
        }
    };
    dfs(root);
    for (int v = 0; v < n; ++v)
        if (!seen[v]) throw std::invalid_argument("tree: disconnected vertex");
    if (!pos.empty() && int(pos.size()) != n)
        throw std::invalid_argument("tree: embedding size mismatch");
}

PellicleWalk pellicle(const PlanarTree& tree, bool punctured) {
    tree.validate();
    PellicleWalk w;
    w.punctured = punctured;
    std::function<void(int)> dfs = [&](int v) {
        for (int c : tree.children[v]) {
            w.events.push_back({c, Side::Left});
            dfs(c);
            w.events.push_back({c, Side::Right});
        }
    };
    dfs(tree.root);
    return w;
}

Pt2 PellicleWalk::point_at(const PlanarTree& tree, double s) const {
    if (!tree.has_embedding())
        throw std::invalid_argument("point_at: tree has no embedding");
    if (events.empty()) return tree.pos[tree.root];
    s = std::clamp(s, 0.0, 1.0);
    const double per = 1.0 / double(events.size());
    std::size_t i = std::min(std::size_t(s / per), events.size() - 1);
    double local = s / per - double(i);
    const PellicleEvent& e = events[i];
    Pt2 child = tree.pos[e.edge];
    Pt2 par = tree.pos[tree.parent[e.edge]];
    // left side walks parent->child, right side walks child->parent
    if (e.side == Side::Left) return par + (child - par) * local;
    return child + (par - child) * local;
}

PlanarTree glue_at_root(const std::vector<PlanarTree>& trees) {
    if (trees.empty()) throw std::invalid_argument("glue_at_root: no trees");
    if (trees.size() == 1) return trees[0];
    PlanarTree out;
    out.root = 0;
    out.parent = {-1};
    out.children = {{}};
    for (const auto& t : trees) {
        t.validate();
        const int base = out.num_vertices();
        std::vector<int> remap(t.num_vertices(), -1);
        remap[t.root] = 0;
        // assign new ids in dfs order, skipping the glued root
        int next = base;
        std::function<void(int)> assign = [&](int v) {
            for (int c : t.children[v]) {
                remap[c] = next++;
                assign(c);
            }
        };
        assign(t.root);
        out.parent.resize(next, -1);
        out.children.resize(next);
        for (int v = 0; v < t.num_vertices(); ++v) {
            if (v == t.root) {
                for (int c : t.children[v]) out.children[0].push_back(remap[c]);
            } else {
                out.parent[remap[v]] = remap[t.parent[v]];
                for (int c : t.children[v]) out.children[remap[v]].push_back(remap[c]);
            }
        }
        for (int v = 0; v < t.num_vertices(); ++v)
            if (v != t.root) {
                // parent link for direct root children
                if (t.parent[v] == t.root) out.parent[remap[v]] = 0;
            }
    }
    out.validate();
    return embed_planar(out);
}

CutResult cut_subtrees(const PlanarTree& tree, const SubtreeSelection& sel) {
    tree.validate();
    if (int(sel.kept.size()) != tree.num_vertices())
        throw std::invalid_argument("cut_subtrees: selection size mismatch");
    if (!sel.kept[tree.root])
        throw std::invalid_argument("cut_subtrees: selection must contain the root");
    for (int v = 0; v < tree.num_vertices(); ++v)
        if (sel.kept[v] && v != tree.root && !sel.kept[tree.parent[v]])
            throw std::invalid_argument("cut_subtrees: selection not root-path-closed");

    CutResult res;
    // kept tree
    std::vector<int> remap(tree.num_vertices(), -1);
    PlanarTree& k = res.kept;
    k.root = 0;
    remap[tree.root] = 0;
    k.parent = {-1};
    k.children = {{}};
    if (tree.has_embedding()) k.pos = {tree.pos[tree.root]};
    std::function<void(int)> build = [&](int v) {
        for (int c : tree.children[v]) {
            if (!sel.kept[c]) continue;
            int id = k.num_vertices();
            remap[c] = id;
            k.parent.push_back(remap[v]);
            k.children.emplace_back();
            k.children[remap[v]].push_back(id);
            if (tree.has_embedding()) k.pos.push_back(tree.pos[c]);
            build(c);
        }
    };
    build(tree.root);

    // residuals: one per removed child of a kept vertex
    std::function<void(int)> collect = [&](int v) {
        for (int slot = 0; slot < int(tree.children[v].size()); ++slot) {
            int c = tree.children[v][slot];
            if (sel.kept[c]) {
                collect(c);
                continue;
            }
            Residual r;
            r.attach_vertex = remap[v];
            r.child_slot = slot;
            PlanarTree& rt = r.tree;
            rt.root = 0;
            rt.parent = {-1};
            rt.children = {{}};
            if (tree.has_embedding()) rt.pos = {tree.pos[v]};
            std::function<void(int, int)> copy = [&](int src, int dstparent) {
                int id = rt.num_vertices();
                rt.parent.push_back(dstparent);
                rt.children.emplace_back();
                rt.children[dstparent].push_back(id);
                if (tree.has_embedding()) rt.pos.push_back(tree.pos[src]);
                for (int cc : tree.children[src]) copy(cc, id);
            };
            copy(c, 0);
            res.residuals.push_back(std::move(r));
        }
    };
    collect(tree.root);
    return res;
}

PlanarTree reattach(const CutResult& cut) {
    PlanarTree out = cut.kept;
    // insert residual subtrees back at their recorded child slots
    struct Pending {
        const Residual* r;
    };
    // group residuals by attach vertex, sorted by original slot
    std::vector<const Residual*> rs;
    for (const auto& r : cut.residuals) rs.push_back(&r);
    std::stable_sort(rs.begin(), rs.end(), [](const Residual* a, const Residual* b) {
        if (a->attach_vertex != b->attach_vertex) return a->attach_vertex < b->attach_vertex;
        return a->child_slot < b->child_slot;
    });
    for (const Residual* r : rs) {
        const PlanarTree& rt = r->tree;
        std::vector<int> remap(rt.num_vertices(), -1);
        remap[rt.root] = r->attach_vertex;
        std::function<void(int)> copy = [&](int v) {
            for (int c : rt.children[v]) {
                int id = out.num_vertices();
                remap[c] = id;
                out.parent.push_back(remap[v]);
                out.children.emplace_back();
                if (out.has_embedding())
                    out.pos.push_back(rt.has_embedding() ? rt.pos[c] : Pt2{});
                out.children[remap[v]].push_back(id);
                copy(c);
            }
        };
        copy(rt.root);
    }
    // restore child order at attachment vertices
    for (int v = 0; v < out.num_vertices(); ++v) {
        auto& ch = out.children[v];
        std::vector<int> orig, added;
        // children appended by reattach are at the tail; merge by recorded slots
        std::size_t n_added = 0;
        for (const Residual* r : rs)
            if (r->attach_vertex == v) ++n_added;
        if (n_added == 0) continue;
        orig.assign(ch.begin(), ch.end() - n_added);
        added.assign(ch.end() - n_added, ch.end());
        std::vector<int> slots;
        for (const Residual* r : rs)
            if (r->attach_vertex == v) slots.push_back(r->child_slot);
        std::vector<int> merged;
        std::size_t oi = 0, ai = 0;
        for (int slot = 0; slot < int(orig.size() + added.size()); ++slot) {
            if (ai < slots.size() && slots[ai] == slot)
                merged.push_back(added[ai++]);
            else if (oi < orig.size())
                merged.push_back(orig[oi++]);
        }
        while (oi < orig.size()) merged.push_back(orig[oi++]);
        while (ai < added.size()) merged.push_back(added[ai++]);
        ch = merged;
    }
    out.validate();
    return out;
}

static int leaf_count(const PlanarTree& t, int v) {
    if (t.children[v].empty()) return 1;
    int n = 0;
    for (int c : t.children[v]) n += leaf_count(t, c);
    return n;
}

PlanarTree embed_planar(const PlanarTree& tree, const EmbedOptions& opt) {
    tree.validate();
    PlanarTree out = tree;
    out.pos.assign(tree.num_vertices(), Pt2{});
    out.pos[tree.root] = opt.root_pos;
    // each vertex owns an angular interval; children get ccw sub-intervals
    std::function<void(int, double, double, double)> place =
        [&](int v, double lo, double hi, double len) {
            const auto& ch = out.children[v];
            if (ch.empty()) return;
            // shrink slightly so sibling cones stay strictly disjoint
            double mid = 0.5 * (lo + hi), half = 0.45 * (hi - lo);
            lo = mid - half;
            hi = mid + half;
            int total = 0;
            for (int c : ch) total += leaf_count(out, c);
            double a = lo;
            for (int c : ch) {
                double w = (hi - lo) * double(leaf_count(out, c)) / double(total);
                double dir = a + 0.5 * w;
                out.pos[c] = out.pos[v] + Pt2{std::cos(dir), std::sin(dir)} * len;
                place(c, a, a + w, len * 0.62);
                a += w;
            }
        };
    place(tree.root, opt.base_angle - 0.5 * opt.span, opt.base_angle + 0.5 * opt.span,
          opt.edge_len);
    return out;
}

bool trees_isomorphic(const PlanarTree& a, const PlanarTree& b) {
    if (a.num_vertices() != b.num_vertices()) return false;
    std::function<bool(int, int)> eq = [&](int va, int vb) {
        if (a.children[va].size() != b.children[vb].size()) return false;
        for (std::size_t i = 0; i < a.children[va].size(); ++i)
            if (!eq(a.children[va][i], b.children[vb][i])) return false;
        return true;
    };
    return eq(a.root, b.root);
}

int count_embedding_crossings(const PlanarTree& tree) {
    if (!tree.has_embedding())
        throw std::invalid_argument("count_embedding_crossings: no embedding");
    std::vector<int> edges;
    for (int v = 0; v < tree.num_vertices(); ++v)
        if (v != tree.root) edges.push_back(v);
    int crossings = 0;
    for (std::size_t i = 0; i < edges.size(); ++i)
        for (std::size_t j = i + 1; j < edges.size(); ++j) {
            int e1 = edges[i], e2 = edges[j];
            if (segments_cross(tree.pos[tree.parent[e1]], tree.pos[e1],
                               tree.pos[tree.parent[e2]], tree.pos[e2]))
                ++crossings;
        }
    return crossings;
}

}  // namespace dischull
