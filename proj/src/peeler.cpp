#include "dischull/peeler.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>

namespace dischull {

namespace {

Pt2 polar(double a) { return {std::cos(a), std::sin(a)}; }

double wrap2pi(double a) {
    double w = std::fmod(a, 2 * M_PI);
    if (w < 0) w += 2 * M_PI;
    return w;
}

struct TreeBuilder {
    std::vector<int> parent;
    std::vector<std::vector<int>> children;
    std::vector<Pt2> pos;

    int add(int par, Pt2 p) {
        int id = int(parent.size());
        parent.push_back(par);
        children.emplace_back();
        pos.push_back(p);
        if (par >= 0) children[par].push_back(id);
        return id;
    }
    // verbatim copy of an embedded tree; returns the id offset of its root
    int graft(const PlanarTree& t) {
        int base = int(parent.size());
        for (int v = 0; v < t.num_vertices(); ++v) {
            parent.push_back(t.parent[v] < 0 ? -1 : t.parent[v] + base);
            std::vector<int> ch = t.children[v];
            for (int& c : ch) c += base;
            children.push_back(std::move(ch));
            pos.push_back(t.pos[v]);
        }
        return base + t.root;
    }
    // attaches a previously grafted root under par (appended as last child)
    void attach(int root_id, int par) {
        parent[root_id] = par;
        children[par].push_back(root_id);
    }
    PlanarTree tree() const {
        PlanarTree t;
        t.root = 0;
        t.parent = parent;
        t.children = children;
        t.pos = pos;
        return t;
    }
};

double edge_len(const PlanarTree& T, int c) { return dist(T.pos[c], T.pos[T.parent[c]]); }

// deterministic clockwise-sector layout of the subtree below c, scale decaying
// with depth; positions stay in the angular wedge around dir
void cw_positions(const PlanarTree& T, int c, Pt2 at, double dir, double width,
                  double scale, std::vector<Pt2>& out) {
    out[c] = at;
    int n = int(T.children[c].size());
    for (int i = 0; i < n; ++i) {
        int k = T.children[c][i];
        double phi = dir + width * ((i + 0.5) / n - 0.5);
        cw_positions(T, k, at + polar(phi) * (scale * std::max(edge_len(T, k), 1e-9)), phi,
                     width * 0.8 / std::max(n, 1), scale * 0.72, out);
    }
}

// direction of the completed child in original slot j (of n) at an active-path
// vertex: slot 0 lands most clockwise inside the clockwise half of the cone
double slot_dir(double axis, double half, int j, int n) {
    return axis - half * (0.25 + 0.5 * (n - j - 0.5) / std::max(n, 1));
}

// emits the subtree of T below v into the builder using cfg positions mapped
// through xf; mirrored copies reverse the child order
int emit_subtree(TreeBuilder& B, int par, const PlanarTree& T, int v,
                 const std::vector<Pt2>& cfg, bool mirrored,
                 const std::function<Pt2(const Pt2&)>& xf, std::vector<int>* map) {
    int id = B.add(par, xf(cfg[v]));
    if (map) (*map)[v] = id;
    std::vector<int> kids = T.children[v];
    if (mirrored) std::reverse(kids.begin(), kids.end());
    for (int k : kids) emit_subtree(B, id, T, k, cfg, mirrored, xf, map);
    return id;
}

double max_root_path(const PlanarTree& T) {
    double best = 1e-9;
    std::function<void(int, double)> dfs = [&](int v, double acc) {
        best = std::max(best, acc);
        for (int c : T.children[v]) dfs(c, acc + edge_len(T, c));
    };
    dfs(T.root, 0.0);
    return best;
}

// halo of the fold at parameter s: stored samples below s stretched onto the
// out-half, the cursor at 1/2, and the exact mirrored retrace
Halo fold_halo(const Halo& src, double s) {
    const double lo = src.params.front(), hi = src.params.back();
    const double span = std::max(hi - lo, 1e-300);
    Halo h;
    if (s <= 1e-12) {
        AnalyticDisc d = src.discs.front();
        h.params = {0.0, 1.0};
        h.discs = {d, d};
        h.curve = {d.center(), d.center()};
        return h;
    }
    std::vector<double> ps;
    std::vector<AnalyticDisc> ds;
    for (std::size_t i = 0; i < src.params.size(); ++i) {
        double p = (src.params[i] - lo) / span;
        if (p < s - 1e-12) {
            ps.push_back(p);
            ds.push_back(src.discs[i]);
        }
    }
    ps.push_back(s);
    ds.push_back(src.at(lo + s * span));
    for (std::size_t i = 0; i < ps.size(); ++i) {
        h.params.push_back(ps[i] / (2 * s));
        h.discs.push_back(ds[i]);
    }
    for (std::size_t i = ps.size() - 1; i-- > 0;) {
        h.params.push_back(1.0 - ps[i] / (2 * s));
        h.discs.push_back(ds[i]);
    }
    for (const auto& d : h.discs) h.curve.push_back(d.center());
    return h;
}

TwinStage fold_stage(const Dendrite& T, const Pt2& apex, double axis, double half,
                     double sigma, double s) {
    const PlanarTree& tr = T.tree;
    const int nv = tr.num_vertices();
    TwinStage st;
    st.s = s;
    st.cw_map.assign(nv, -1);
    st.mirror_map.assign(nv, -1);

    if (tr.num_edges() == 0) {
        TreeBuilder B;
        B.add(-1, apex);
        st.cw_map[tr.root] = 0;
        st.trunk = {0};
        st.dend.tree = B.tree();
        st.dend.walk = pellicle(st.dend.tree, true);
        st.dend.halo = fold_halo(T.halo, 0.0);
        return st;
    }

    const auto& ev = T.walk.events;
    const double c = s * double(ev.size());
    int kfull = int(std::floor(c + 1e-12));
    double frac = c - double(kfull);
    if (kfull >= int(ev.size())) {
        kfull = int(ev.size());
        frac = 0.0;
    }
    if (frac < 1e-12) frac = 0.0;

    // replay the walk prefix: stack = active path, done = completed children
    std::vector<int> stack = {tr.root};
    std::vector<std::vector<int>> done(nv);
    for (int i = 0; i < kfull; ++i) {
        if (ev[i].side == Side::Left) {
            stack.push_back(ev[i].edge);
        } else {
            stack.pop_back();
            done[stack.back()].push_back(ev[i].edge);
        }
    }
    int partial_edge = -1;
    bool partial_up = false;
    if (frac > 0.0 && kfull < int(ev.size())) {
        partial_edge = ev[kfull].edge;
        partial_up = ev[kfull].side == Side::Right;
        if (partial_up) stack.pop_back();  // the branch rides above the cursor
    }

    // trunk arc lengths along the bisector
    std::vector<double> cum(stack.size(), 0.0);
    for (std::size_t i = 1; i < stack.size(); ++i)
        cum[i] = cum[i - 1] + sigma * edge_len(tr, stack[i]);
    const double S_h = 0.3 * sigma;

    TreeBuilder B;
    std::vector<std::vector<int>> cwroots(stack.size() + 1), miroots(stack.size() + 1);
    st.trunk.push_back(B.add(-1, apex));
    st.cw_map[stack[0]] = 0;
    for (std::size_t i = 1; i < stack.size(); ++i) {
        st.trunk.push_back(B.add(st.trunk.back(), apex + polar(axis) * cum[i]));
        st.cw_map[stack[i]] = st.trunk.back();
    }
    int cursor_slot = -1;
    if (partial_edge >= 0) {
        double off = partial_up ? (1.0 - frac) * sigma * edge_len(tr, partial_edge)
                                : frac * sigma * edge_len(tr, partial_edge);
        off = std::max(off, 1e-7);
        st.trunk.push_back(B.add(st.trunk.back(), apex + polar(axis) * (cum.back() + off)));
        cursor_slot = int(stack.size());
    }

    auto ident = [](const Pt2& p) { return p; };
    auto mirror = [&](const Pt2& p) { return reflect_about_ray(p, apex, axis); };

    // completed copies at the active-path vertices
    for (std::size_t i = 0; i < stack.size(); ++i) {
        int x = stack[i];
        Pt2 P = B.pos[st.trunk[i]];
        int n = int(tr.children[x].size());
        for (int k : done[x]) {
            int j = int(std::find(tr.children[x].begin(), tr.children[x].end(), k) -
                        tr.children[x].begin());
            std::vector<Pt2> cfg(nv);
            double phi = slot_dir(axis, half, j, n);
            cw_positions(tr, k, P + polar(phi) * (S_h * edge_len(tr, k)), phi, half * 0.3,
                         S_h * 0.72, cfg);
            cwroots[i].push_back(
                emit_subtree(B, st.trunk[i], tr, k, cfg, false, ident, &st.cw_map));
            miroots[i].push_back(
                emit_subtree(B, st.trunk[i], tr, k, cfg, true, mirror, &st.mirror_map));
        }
    }

    // partially ascended edge: branch interpolating between the trunk-tip
    // configuration and the completed-copy configuration at its parent
    if (partial_edge >= 0 && partial_up) {
        int v = partial_edge;
        int x = stack.back();
        std::vector<Pt2> A(nv), C(nv), cfg(nv);
        Pt2 Pv = apex + polar(axis) * (cum.back() + sigma * edge_len(tr, v));
        A[v] = Pv;
        int nvch = int(tr.children[v].size());
        for (int j = 0; j < nvch; ++j) {
            int k = tr.children[v][j];
            double phi = slot_dir(axis, half, j, nvch);
            cw_positions(tr, k, Pv + polar(phi) * (S_h * edge_len(tr, k)), phi, half * 0.3,
                         S_h * 0.72, A);
        }
        int n = int(tr.children[x].size());
        int j = int(std::find(tr.children[x].begin(), tr.children[x].end(), v) -
                    tr.children[x].begin());
        double phi = slot_dir(axis, half, j, n);
        cw_positions(tr, v,
                     B.pos[st.trunk[stack.size() - 1]] + polar(phi) * (S_h * edge_len(tr, v)),
                     phi, half * 0.3, S_h * 0.72, C);
        std::function<void(int)> blend = [&](int u) {
            cfg[u] = A[u] * (1.0 - frac) + C[u] * frac;
            for (int k : tr.children[u]) blend(k);
        };
        blend(v);
        cwroots[cursor_slot].push_back(
            emit_subtree(B, st.trunk[cursor_slot], tr, v, cfg, false, ident, &st.cw_map));
        miroots[cursor_slot].push_back(
            emit_subtree(B, st.trunk[cursor_slot], tr, v, cfg, true, mirror, &st.mirror_map));
    }

    // child order at trunk vertices: clockwise copies, trunk continuation,
    // mirrored copies in reversed order
    for (std::size_t i = 0; i < st.trunk.size(); ++i) {
        std::vector<int> ch = cwroots[i];
        if (i + 1 < st.trunk.size()) ch.push_back(st.trunk[i + 1]);
        ch.insert(ch.end(), miroots[i].rbegin(), miroots[i].rend());
        B.children[st.trunk[i]] = ch;
        st.rotated_roots.insert(st.rotated_roots.end(), cwroots[i].begin(), cwroots[i].end());
        st.mirror_roots.insert(st.mirror_roots.end(), miroots[i].begin(), miroots[i].end());
    }

    st.dend.tree = B.tree();
    st.dend.walk = pellicle(st.dend.tree, true);
    st.dend.halo = fold_halo(T.halo, s);
    return st;
}

}  // namespace

PlanarTree TwinGrowth::first_twin() const {
    const TwinStage& st = stages.back();
    const PlanarTree& ft = st.dend.tree;
    TreeBuilder B;
    B.add(-1, ft.pos[st.trunk.front()]);
    std::function<void(int, int)> copy = [&](int par, int v) {
        int id = B.add(par, ft.pos[v]);
        for (int c : ft.children[v]) copy(id, c);
    };
    for (int r : st.rotated_roots) copy(0, r);
    return B.tree();
}

TwinGrowth grow_twins(const Dendrite& T, const Pt2& xi, const Cone& U, int m,
                      double reach, std::vector<double> schedule) {
    T.validate();
    if (U.half_angle < 1e-3 || U.half_angle > M_PI / 2)
        throw std::invalid_argument("grow_twins: cone cannot host the dendrite");
    if (reach <= 0.0) throw std::invalid_argument("grow_twins: non-positive reach");
    if (m < 1) throw std::invalid_argument("grow_twins: need at least one step");
    if (schedule.empty())
        for (int i = 0; i <= m; ++i) schedule.push_back(double(i) / double(m));
    std::sort(schedule.begin(), schedule.end());
    schedule.erase(std::unique(schedule.begin(), schedule.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                   schedule.end());
    if (schedule.front() > 1e-12) schedule.insert(schedule.begin(), 0.0);
    if (schedule.back() < 1.0 - 1e-12) schedule.push_back(1.0);

    TwinGrowth g;
    g.cone = U;
    g.cone.apex = xi;
    g.reach = reach;
    const double sigma = 0.9 * reach / max_root_path(T.tree);
    for (double s : schedule)
        g.stages.push_back(fold_stage(T, xi, g.cone.bisector_angle, g.cone.half_angle,
                                      sigma, s));
    return g;
}

double neuron_step(const Neuron& a, const Neuron& b, int n_probe) {
    auto one_sided = [](const std::vector<Pt2>& A, const std::vector<Pt2>& B) {
        double worst = 0.0;
        for (const auto& p : A) {
            double best = 1e300;
            for (const auto& q : B) best = std::min(best, dist(p, q));
            worst = std::max(worst, best);
        }
        return worst;
    };
    double hd = std::max(one_sided(a.walk_points, b.walk_points),
                         one_sided(b.walk_points, a.walk_points));
    double hs = 0.0;
    for (int i = 0; i < n_probe; ++i) {
        double u = double(i) / double(n_probe - 1);
        hs = std::max(hs, disc_distance(a.halo.at(u), b.halo.at(u)));
    }
    return hd + hs;
}

std::vector<std::size_t> neuron_discontinuities(const std::vector<Neuron>& family) {
    std::vector<double> steps;
    for (std::size_t i = 0; i + 1 < family.size(); ++i)
        steps.push_back(neuron_step(family[i], family[i + 1]));
    if (steps.empty()) return {};
    std::vector<double> s = steps;
    std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
    double scale = 10.0 * s[s.size() / 2] + 1e-12;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < steps.size(); ++i)
        if (steps[i] > 5.0 * scale) out.push_back(i);
    return out;
}

// ------------------------- peel implementation --------------------------

namespace {

struct PlusTree {
    double angle = 0.0;
    const AttachedTree* at = nullptr;
    double cone_half = 0.0, reach = 0.0;
    double copy_scale = 0.0;  // edge scale of the transported mirror copy
};

struct PeelCtx {
    const Neuron* minus = nullptr;
    int n = 0;                         // circle grid samples (duplicate endpoint)
    std::vector<AnalyticDisc> Hm, Hp;  // circle halo per grid index
    std::vector<Pt2> grid;
    std::vector<double> ang;
    std::vector<PlusTree> trees;
    double theta0 = 0.0;
    int i0 = 0, i_end = 0;
    double L = 0.22;  // sweep trunk length
};

struct RenderState {
    double theta = 0.0;
    int i_cur = 0;
    double L = 0.0;
    int established = 0;          // trees standing at their own root angle
    double t1_u = 1.0;            // morph progress of tree established-1
    const TwinGrowth* growth = nullptr;
    int stage = -1;               // >= 0: fold of tree fold_j active
    int fold_j = -1;
    double merge_u = 0.0;         // mirror transport progress at fold end
};

struct SampleBlock {
    std::vector<AnalyticDisc> discs;
    std::vector<Pt2> pts;
    void push(const AnalyticDisc& d, Pt2 p) {
        discs.push_back(d);
        pts.push_back(p);
    }
    void append(const SampleBlock& o) {
        discs.insert(discs.end(), o.discs.begin(), o.discs.end());
        pts.insert(pts.end(), o.pts.begin(), o.pts.end());
    }
    std::size_t size() const { return discs.size(); }
};

const double kCopyDir = -0.08 * M_PI;  // clockwise tilt of transported copies

// transported mirror copy of a passed tree, rooted at its trunk attachment
PlanarTree make_copy_tree(const PlusTree& pt, Pt2 attach, double dir) {
    const PlanarTree& tr = pt.at->dendrite.tree;
    std::vector<Pt2> cfg(tr.num_vertices());
    cw_positions(tr, tr.root, attach + polar(dir) * (0.35 * pt.copy_scale), dir,
                 0.15 * M_PI, pt.copy_scale, cfg);
    auto refl = [&](const Pt2& p) { return reflect_about_ray(p, attach, dir); };
    TreeBuilder B;
    emit_subtree(B, -1, tr, tr.root, cfg, true, refl, nullptr);
    return B.tree();
}

// positions of the transported copy indexed by input vertex id
std::vector<Pt2> copy_target_positions(const PlusTree& pt, Pt2 attach, double dir) {
    const PlanarTree& tr = pt.at->dendrite.tree;
    std::vector<Pt2> cfg(tr.num_vertices());
    cw_positions(tr, tr.root, attach + polar(dir) * (0.35 * pt.copy_scale), dir,
                 0.15 * M_PI, pt.copy_scale, cfg);
    for (auto& p : cfg) p = reflect_about_ray(p, attach, dir);
    return cfg;
}

SampleBlock tree_detour_block(const Dendrite& d) {
    SampleBlock b;
    const double lo = d.halo.params.front();
    const double span = std::max(d.halo.params.back() - lo, 1e-300);
    for (std::size_t i = 0; i < d.halo.size(); ++i) {
        double u = (d.halo.params[i] - lo) / span;
        Pt2 p = d.tree.num_edges() > 0 ? d.walk.point_at(d.tree, u)
                                       : d.tree.pos[d.tree.root];
        b.push(d.halo.discs[i], p);
    }
    return b;
}

// reversed replay of a passed tree's halo along its transported copy
SampleBlock copy_detour_block(const PlusTree& pt, const PlanarTree& copy_tree,
                              const PellicleWalk& copy_walk) {
    SampleBlock b;
    const Halo& h = pt.at->dendrite.halo;
    const double lo = h.params.front();
    const double span = std::max(h.params.back() - lo, 1e-300);
    for (std::size_t i = h.size(); i-- > 0;) {
        double u = 1.0 - (h.params[i] - lo) / span;
        Pt2 p = copy_tree.num_edges() > 0 ? copy_walk.point_at(copy_tree, u)
                                          : copy_tree.pos[copy_tree.root];
        b.push(h.discs[i], p);
    }
    return b;
}

Dendrite morphed_real_tree(const PeelCtx& cx, const RenderState& st, int j) {
    Dendrite d = cx.trees[j].at->dendrite;
    if (j == st.established - 1 && st.t1_u < 1.0 - 1e-12 && st.growth) {
        const TwinStage& fs = st.growth->stages.back();
        for (int v = 0; v < d.tree.num_vertices(); ++v) {
            Pt2 from = fs.dend.tree.pos[fs.cw_map[v]];
            d.tree.pos[v] = from * (1.0 - st.t1_u) + d.tree.pos[v] * st.t1_u;
        }
    }
    return d;
}

PeelFrame render_frame(const PeelCtx& cx, const RenderState& st) {
    SampleBlock pre, gamma, foldb, el, outer, post;
    std::vector<AttachedTree> out_trees;
    const int n_standing = st.stage >= 0 ? st.fold_j : st.established;

    for (int i = 0; i <= cx.i0; ++i) pre.push(cx.Hm[i], cx.grid[i]);

    // swept arc with the excrescences of the passed trees
    {
        int next_tree = 0;
        auto flush_trees = [&](double upto) {
            while (next_tree < n_standing && cx.trees[next_tree].angle < upto) {
                Dendrite d = morphed_real_tree(cx, st, next_tree);
                gamma.append(tree_detour_block(d));
                out_trees.push_back({cx.trees[next_tree].angle, std::move(d)});
                ++next_tree;
            }
        };
        for (int i = cx.i0 + 1; i <= st.i_cur; ++i) {
            flush_trees(cx.ang[i]);
            gamma.push(cx.Hp[i], cx.grid[i]);
        }
        flush_trees(st.theta + 1e-12);
    }

    // sweep dendrite: optional fold, trunk with transported copies, tip
    AttachedTree sweep;
    bool has_sweep = st.L > 0.0 || st.stage >= 0;
    if (has_sweep) {
        TreeBuilder B;
        PlanarTree fold_tree;  // fold with merge-morphed mirror positions
        if (st.stage >= 0) {
            const TwinStage& fs = st.growth->stages[st.stage];
            fold_tree = fs.dend.tree;
            if (st.merge_u > 0.0) {
                auto target = copy_target_positions(cx.trees[st.fold_j], fold_tree.pos[0],
                                                    st.theta + kCopyDir);
                for (int v = 0; v < int(fs.mirror_map.size()); ++v)
                    if (fs.mirror_map[v] >= 0)
                        fold_tree.pos[fs.mirror_map[v]] =
                            fold_tree.pos[fs.mirror_map[v]] * (1.0 - st.merge_u) +
                            target[v] * st.merge_u;
            }
            B.graft(fold_tree);
        } else {
            B.add(-1, polar(st.theta));
        }

        const double denom = std::max(st.theta - cx.theta0, 1e-12);
        const int n_cop = st.stage >= 0 ? st.fold_j : st.established;
        int chain = 0;
        struct CopyInfo {
            int j;
            PlanarTree tree;
            PellicleWalk walk;
        };
        std::vector<CopyInfo> copies;
        for (int j = n_cop - 1; j >= 0; --j) {
            double fr = std::clamp((st.theta - cx.trees[j].angle) / denom, 0.0, 1.0);
            Pt2 a_pos = polar(st.theta) * (1.0 + fr * st.L);
            int a_id = B.add(chain, a_pos);
            PlanarTree ct = make_copy_tree(cx.trees[j], a_pos, st.theta + kCopyDir);
            int rid = B.graft(ct);
            B.attach(rid, a_id);
            copies.push_back({j, ct, pellicle(ct, true)});
            chain = a_id;
        }
        B.add(chain, polar(st.theta) * (1.0 + std::max(st.L, 2e-6)));

        // fold halo and points
        if (st.stage >= 0) {
            const TwinStage& fs = st.growth->stages[st.stage];
            for (std::size_t i = 0; i < fs.dend.halo.size(); ++i) {
                Pt2 p = fold_tree.num_edges() > 0
                            ? fs.dend.walk.point_at(fold_tree, fs.dend.halo.params[i])
                            : fold_tree.pos[0];
                foldb.push(fs.dend.halo.discs[i], p);
            }
        }
        // inner side: reversed replay of the swept excrescence
        auto trunk_pt = [&](double a) {
            double fr = std::clamp((st.theta - a) / denom, 0.0, 1.0);
            return polar(st.theta) * (1.0 + fr * st.L);
        };
        {
            std::size_t ci = 0;  // copies sorted by descending angle already
            for (int i = st.i_cur; i >= cx.i0; --i) {
                while (ci < copies.size() && cx.trees[copies[ci].j].angle > cx.ang[i]) {
                    el.append(copy_detour_block(cx.trees[copies[ci].j], copies[ci].tree,
                                                copies[ci].walk));
                    ++ci;
                }
                el.push(cx.Hp[i], trunk_pt(cx.ang[i]));
            }
        }
        // outer side: the old values transported onto the edge
        for (int i = cx.i0; i <= st.i_cur; ++i) outer.push(cx.Hm[i], trunk_pt(cx.ang[i]));

        sweep.root_angle = st.theta;
        sweep.dendrite.tree = B.tree();
        sweep.dendrite.walk = pellicle(sweep.dendrite.tree, true);
        SampleBlock all;
        all.append(foldb);
        all.append(el);
        all.append(outer);
        Halo sh;
        for (std::size_t i = 0; i < all.size(); ++i) {
            sh.params.push_back(all.size() > 1 ? double(i) / double(all.size() - 1) : 0.0);
            sh.discs.push_back(all.discs[i]);
            sh.curve.push_back(all.discs[i].center());
        }
        sweep.dendrite.halo = std::move(sh);
    }

    for (int i = st.i_cur + 1; i < cx.n; ++i) post.push(cx.Hm[i], cx.grid[i]);

    PeelFrame f;
    f.theta = st.theta;
    f.gamma_begin = pre.size();
    f.gamma_end = f.gamma_begin + gamma.size();
    f.fold_end = f.gamma_end + foldb.size();
    f.el_end = f.fold_end + el.size();

    Neuron& nr = f.neuron;
    nr.body = cx.minus->body;
    nr.trees = std::move(out_trees);
    if (has_sweep) nr.trees.push_back(std::move(sweep));
    nr.axon = cx.minus->axon;
    SampleBlock all;
    all.append(pre);
    all.append(gamma);
    all.append(foldb);
    all.append(el);
    all.append(outer);
    all.append(post);
    for (std::size_t i = 0; i < all.size(); ++i) {
        nr.halo.params.push_back(double(i) / double(all.size() - 1));
        nr.halo.discs.push_back(all.discs[i]);
        nr.halo.curve.push_back(all.discs[i].center());
    }
    nr.walk_points = std::move(all.pts);
    return f;
}

std::vector<double> quantized_schedule(const Halo& h, int m_twin) {
    const double lo = h.params.front();
    const double span = std::max(h.params.back() - lo, 1e-300);
    std::vector<double> out = {0.0};
    for (int k = 1; k < m_twin; ++k) {
        double target = double(k) / double(m_twin);
        double best = target, err = 1e300;
        for (double p : h.params) {
            double q = (p - lo) / span;
            if (std::abs(q - target) < err) {
                err = std::abs(q - target);
                best = q;
            }
        }
        out.push_back(best);
    }
    out.push_back(1.0);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-9; }),
              out.end());
    return out;
}

}  // namespace

PeelResult peel(const Neuron& n_minus, const Neuron& n_plus, const CircleArc& gamma,
                double zeta0, int m, const ModelDomain& G, const Tolerances& tol,
                double zeta_star_hint) {
    if (disc_distance(n_minus.body, n_plus.body) > 1e-9)
        throw std::invalid_argument("peel: main bodies differ");
    if (!n_minus.trees.empty())
        throw std::invalid_argument("peel: n_minus must be tree-free");

    PeelCtx cx;
    cx.minus = &n_minus;
    cx.n = int(n_minus.halo.size());
    if (cx.n < 16) throw std::invalid_argument("peel: boundary sampling too coarse");
    const double dg = 2 * M_PI / double(cx.n - 1);
    for (int i = 0; i < cx.n; ++i) {
        cx.ang.push_back(i * dg);
        cx.grid.push_back(polar(cx.ang[i]));
        if (std::abs(n_minus.halo.params[i] - double(i) / double(cx.n - 1)) > 1e-9 ||
            dist(n_minus.walk_points[i], cx.grid[i]) > 1e-9)
            throw std::invalid_argument("peel: n_minus is not on the uniform boundary grid");
    }
    cx.Hm = n_minus.halo.discs;

    // extract the circle halo of n_plus (tree detours, incl. their on-circle
    // root points, are skipped)
    for (std::size_t i = 0; i < n_plus.halo.size(); ++i) {
        if (std::abs(n_plus.walk_points[i].norm() - 1.0) > 1e-7) continue;
        std::size_t k = cx.Hp.size();
        if (k < std::size_t(cx.n) && dist(n_plus.walk_points[i], cx.grid[k]) <= 1e-7)
            cx.Hp.push_back(n_plus.halo.discs[i]);
    }
    if (int(cx.Hp.size()) != cx.n)
        throw std::invalid_argument("peel: n_plus circle sampling mismatch");

    // anchor and terminal angles, snapped to the grid
    cx.i0 = std::clamp(int(std::lround(wrap2pi(zeta0) / dg)), 1, cx.n - 2);
    cx.theta0 = cx.ang[cx.i0];
    if (!gamma.contains(cx.theta0))
        throw std::invalid_argument("peel: zeta0 outside gamma");
    double zs = zeta_star_hint;
    if (zs < 0.0) {
        double reach_to_one = wrap2pi(-gamma.a);
        double use = gamma.contains(0.0) ? std::min(reach_to_one, gamma.length())
                                         : gamma.length();
        zs = gamma.a + 0.5 * use;
    }
    cx.i_end = std::clamp(int(std::lround(wrap2pi(zs) / dg)), cx.i0 + 2, cx.n - 2);
    if (!gamma.contains(cx.ang[cx.i_end]))
        throw std::invalid_argument("peel: terminal point outside gamma");

    // halo agreement on gamma and on everything the sweep will not touch
    for (int i = 0; i < cx.n; ++i) {
        bool untouched = i <= cx.i0 || i > cx.i_end;
        if (untouched || gamma.contains(cx.ang[i]))
            if (disc_distance(cx.Hm[i], cx.Hp[i]) > 1e-8)
                throw std::invalid_argument("peel: haloes disagree on gamma");
    }

    // trees of n_plus: angles, cones, copy scales
    const int k_gap = 3;
    {
        double prev = cx.theta0;
        for (const auto& at : n_plus.trees) {
            PlusTree pt;
            pt.angle = wrap2pi(at.root_angle);
            pt.at = &at;
            if (gamma.contains(pt.angle))
                throw std::invalid_argument("peel: n_plus tree rooted on gamma");
            if (pt.angle <= cx.theta0 + (k_gap + 2) * dg ||
                pt.angle >= cx.ang[cx.i_end] - (k_gap + 2) * dg ||
                pt.angle - prev < (k_gap + 3) * dg)
                throw std::invalid_argument("peel: n_plus trees too close together");
            double frac = std::abs(pt.angle / dg - std::lround(pt.angle / dg));
            if (frac < 0.2)
                throw std::invalid_argument("peel: tree root sits on a grid angle");
            prev = pt.angle;
            cx.trees.push_back(pt);
        }
        for (std::size_t j = 0; j < cx.trees.size(); ++j) {
            double lo = j == 0 ? cx.theta0 : cx.trees[j - 1].angle;
            double hi = j + 1 < cx.trees.size() ? cx.trees[j + 1].angle : cx.ang[cx.i_end];
            double gap = std::min(cx.trees[j].angle - lo, hi - cx.trees[j].angle);
            cx.trees[j].cone_half = std::min(M_PI / 8, 0.4 * gap);
            cx.trees[j].reach = std::min(0.25, 0.6 * gap);
            const PlanarTree& jt = cx.trees[j].at->dendrite.tree;
            cx.trees[j].copy_scale =
                jt.num_edges() > 0 ? 0.10 / max_root_path(jt) : 0.05;
        }
    }

    // trivial case: nothing to transport
    bool identical = cx.trees.empty();
    if (identical)
        for (int i = 0; i < cx.n && identical; ++i)
            identical = disc_distance(cx.Hm[i], cx.Hp[i]) <= 1e-12;
    if (identical) {
        PeelResult r;
        r.zeta_star = cx.ang[cx.i_end];
        int frames = std::min(m, 8) + 1;
        for (int k = 0; k < frames; ++k) {
            PeelFrame f;
            f.neuron = n_minus;
            f.theta = cx.theta0;
            r.frames.push_back(std::move(f));
        }
        // degenerate one-point dendrite at the terminal angle
        Dendrite point;
        point.tree = PlanarTree::point_tree();
        point.tree.pos[0] = cx.grid[cx.i_end];
        point.walk = pellicle(point.tree, true);
        AnalyticDisc d = cx.Hm[cx.i_end];
        point.halo.params = {0.0, 1.0};
        point.halo.discs = {d, d};
        point.halo.curve = {d.center(), d.center()};
        Neuron& last = r.frames.back().neuron;
        last.trees.push_back({cx.ang[cx.i_end], point});
        last.halo.params.clear();
        last.halo.discs.clear();
        last.halo.curve.clear();
        last.walk_points.clear();
        for (int i = 0; i < cx.n; ++i) {
            last.halo.discs.push_back(cx.Hm[i]);
            last.walk_points.push_back(cx.grid[i]);
            if (i == cx.i_end) {  // the point detour
                last.halo.discs.push_back(d);
                last.halo.discs.push_back(d);
                last.walk_points.push_back(cx.grid[cx.i_end]);
                last.walk_points.push_back(cx.grid[cx.i_end]);
            }
        }
        for (std::size_t i = 0; i < last.halo.discs.size(); ++i) {
            last.halo.params.push_back(double(i) / double(last.halo.discs.size() - 1));
            last.halo.curve.push_back(last.halo.discs[i].center());
        }
        for (auto& f : r.frames) f.neuron.validate(G, tol);
        r.T = point;
        r.steps_used = frames;
        r.step_bound_met = true;
        return r;
    }

    // total halo variation, for the step bound
    double var = 0.0, maxj = 0.0;
    auto add_var = [&](const std::vector<AnalyticDisc>& ds) {
        for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
            double d = disc_distance(ds[i], ds[i + 1]);
            var += d;
            maxj = std::max(maxj, d);
        }
    };
    add_var(cx.Hm);
    add_var(cx.Hp);
    for (const auto& t : cx.trees) {
        add_var(t.at->dendrite.halo.discs);
        // junction jumps between the tree halo and the circle fiber at the root
        long idx = std::clamp(std::lround(t.angle / (cx.ang[1] - cx.ang[0])), 0L,
                              long(cx.n) - 1);
        for (double dj : {disc_distance(t.at->dendrite.halo.front(), cx.Hp[idx]),
                          disc_distance(t.at->dendrite.halo.back(), cx.Hp[idx])}) {
            var += dj;
            maxj = std::max(maxj, dj);
        }
    }

    std::string last_err;
    for (int mm = std::max(m, 8);; mm *= 2) {
        const int k_birth = std::max(2, mm / 16);
        const int m_sweep = std::max(8, mm / 2);
        const int k_adv = std::max(1, (cx.i_end - cx.i0) / m_sweep);
        const int m_twin = std::max(6, mm / 8);
        const int k_morph = std::max(3, mm / 16);

        std::vector<TwinGrowth> growths(cx.trees.size());
        std::vector<RenderState> plan;
        RenderState st;
        st.theta = cx.theta0;
        st.i_cur = cx.i0;
        plan.push_back(st);  // frame 0 = n_minus
        for (int b = 1; b <= k_birth; ++b) {
            st.L = cx.L * double(b) / double(k_birth);
            plan.push_back(st);
        }
        for (std::size_t j = 0; j < cx.trees.size(); ++j) {
            const PlusTree& pt = cx.trees[j];
            int lim = int(std::floor(pt.angle / dg));
            while (st.i_cur < lim) {
                st.i_cur = std::min(st.i_cur + k_adv, lim);
                st.theta = cx.ang[st.i_cur];
                plan.push_back(st);
            }
            Cone U{polar(pt.angle), pt.angle - M_PI / 4, pt.cone_half};
            growths[j] = grow_twins(pt.at->dendrite, polar(pt.angle), U, m_twin, pt.reach,
                                    quantized_schedule(pt.at->dendrite.halo, m_twin));
            st.theta = pt.angle;
            st.growth = &growths[j];
            st.fold_j = int(j);
            for (std::size_t sidx = 0; sidx < growths[j].stages.size(); ++sidx) {
                st.stage = int(sidx);
                plan.push_back(st);
            }
            st.stage = int(growths[j].stages.size()) - 1;
            for (int u = 1; u <= k_morph; ++u) {
                st.merge_u = double(u) / double(k_morph);
                plan.push_back(st);
            }
            // split: the first twin stands, the mirror rides the moving edge
            st.stage = -1;
            st.merge_u = 0.0;
            st.fold_j = -1;
            st.established = int(j) + 1;
            st.i_cur = lim + k_gap;
            st.theta = cx.ang[st.i_cur];
            for (int u = 0; u <= k_morph; ++u) {
                st.t1_u = double(u) / double(k_morph);
                plan.push_back(st);
            }
            st.t1_u = 1.0;
            st.growth = nullptr;
        }
        while (st.i_cur < cx.i_end) {
            st.i_cur = std::min(st.i_cur + k_adv, cx.i_end);
            st.theta = cx.ang[st.i_cur];
            plan.push_back(st);
        }

        PeelResult r;
        r.zeta_star = cx.ang[cx.i_end];
        for (const auto& ps : plan) r.frames.push_back(render_frame(cx, ps));
        for (auto& f : r.frames) f.neuron.validate(G, tol);

        r.steps_used = int(r.frames.size());
        for (std::size_t i = 0; i + 1 < r.frames.size(); ++i) {
            const Neuron& a = r.frames[i].neuron;
            const Neuron& b = r.frames[i + 1].neuron;
            auto one = [](const std::vector<Pt2>& A, const std::vector<Pt2>& B) {
                double worst = 0.0;
                for (const auto& p : A) {
                    double best = 1e300;
                    for (const auto& q : B) best = std::min(best, dist(p, q));
                    worst = std::max(worst, best);
                }
                return worst;
            };
            r.max_pellicle_step =
                std::max(r.max_pellicle_step,
                         std::max(one(a.walk_points, b.walk_points),
                                  one(b.walk_points, a.walk_points)));
            double hs = 0.0;
            for (int k = 0; k < 256; ++k) {
                double u = double(k) / 255.0;
                hs = std::max(hs, disc_distance(a.halo.at(u), b.halo.at(u)));
            }
            r.max_halo_step = std::max(r.max_halo_step, hs);
        }
        const double bound_p = 2.5 * (1.0 + cx.L) * dg * k_adv + 40.0 / mm;
        const double bound_h = 6.0 * maxj * k_adv + 60.0 * var / mm + 1e-9;
        r.step_bound_met = r.max_pellicle_step <= bound_p && r.max_halo_step <= bound_h;
        if (r.step_bound_met) {
            r.T = r.frames.back().neuron.trees.back().dendrite;
            return r;
        }
        last_err = "pellicle step " + std::to_string(r.max_pellicle_step) + " vs " +
                   std::to_string(bound_p) + ", halo step " +
                   std::to_string(r.max_halo_step) + " vs " + std::to_string(bound_h);
        if (mm >= 1024)
            throw std::runtime_error("peel: step bound not met at m = 1024 (" + last_err +
                                     ")");
    }
}

SpliceResult splice_family(const std::vector<double>& params,
                           const std::vector<Neuron>& family, CircleArc gamma,
                           const ModelDomain& G, int m, const Tolerances& tol) {
    if (params.size() != family.size() || family.empty())
        throw std::invalid_argument("splice_family: malformed family");
    SpliceResult out;
    out.final_gamma = gamma;
    auto jumps = neuron_discontinuities(family);
    if (jumps.empty()) {
        out.params = params;
        out.neurons = family;
        return out;
    }

    CircleArc cur = gamma;
    std::vector<std::pair<double, Dendrite>> attached;  // (root angle, dendrite)

    auto with_attachments = [&](const Neuron& n) {
        Neuron o = n;
        for (const auto& [angle, dend] : attached) {
            // splice the detour into the boundary walk at its root angle
            std::size_t at = o.halo.size();
            for (std::size_t i = 0; i < o.halo.size(); ++i) {
                if (std::abs(o.walk_points[i].norm() - 1.0) > 1e-7) continue;
                double a = wrap2pi(std::atan2(o.walk_points[i].y, o.walk_points[i].x));
                if (i > 0 && a == 0.0) a = 2 * M_PI;
                if (a > angle) {
                    at = i;
                    break;
                }
            }
            std::vector<AnalyticDisc> discs;
            std::vector<Pt2> pts;
            const double lo = dend.halo.params.front();
            const double span = std::max(dend.halo.params.back() - lo, 1e-300);
            for (std::size_t i = 0; i < dend.halo.size(); ++i) {
                discs.push_back(dend.halo.discs[i]);
                pts.push_back(dend.tree.num_edges() > 0
                                  ? dend.walk.point_at(dend.tree,
                                                       (dend.halo.params[i] - lo) / span)
                                  : dend.tree.pos[dend.tree.root]);
            }
            o.halo.discs.insert(o.halo.discs.begin() + at, discs.begin(), discs.end());
            o.walk_points.insert(o.walk_points.begin() + at, pts.begin(), pts.end());
            o.halo.params.clear();
            o.halo.curve.clear();
            for (std::size_t i = 0; i < o.halo.discs.size(); ++i) {
                o.halo.params.push_back(double(i) / double(o.halo.discs.size() - 1));
                o.halo.curve.push_back(o.halo.discs[i].center());
            }
            auto it = o.trees.begin();
            while (it != o.trees.end() && it->root_angle < angle) ++it;
            o.trees.insert(it, {angle, dend});
        }
        return o;
    };

    std::size_t next_jump = 0;
    bool skip_emit = false;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (!skip_emit) {
            Neuron n = with_attachments(family[i]);
            n.validate(G, tol);
            out.params.push_back(params[i]);
            out.neurons.push_back(std::move(n));
        }
        skip_emit = false;
        if (next_jump < jumps.size() && jumps[next_jump] == i) {
            if (cur.length() < 0.05)
                throw std::runtime_error("splice_family: gamma exhausted");
            double reach_to_one = wrap2pi(-cur.a);
            double use = cur.contains(0.0) ? std::min(reach_to_one, cur.length())
                                           : cur.length();
            double zs = wrap2pi(cur.a + 0.5 * use);
            double z0 = wrap2pi(gamma.b) * 0.5;
            PeelResult pr = peel(family[i], family[i + 1], gamma, z0, m, G, tol, zs);
            double t0 = params[i], t1 = params[i + 1];
            for (std::size_t k = 1; k < pr.frames.size(); ++k) {
                Neuron n = with_attachments(pr.frames[k].neuron);
                n.validate(G, tol);
                out.params.push_back(t0 + (t1 - t0) * double(k) /
                                              double(pr.frames.size() - 1));
                out.neurons.push_back(std::move(n));
            }
            attached.push_back({pr.zeta_star, pr.T});
            out.attached.push_back(pr.T);
            cur.b = wrap2pi(pr.zeta_star - 0.05);
            ++next_jump;
            skip_emit = true;  // the last frame already carries family[i + 1]
        }
    }
    out.final_gamma = cur;
    return out;
}

}  // namespace dischull
