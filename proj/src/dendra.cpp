#include "dischull/dendra.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dischull {

namespace {

AnalyticDisc lerp_discs(const AnalyticDisc& a, const AnalyticDisc& b, double u) {
    std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    std::vector<C2> c(n);
    for (std::size_t k = 0; k < n; ++k) {
        C2 ca = k < a.coeffs.size() ? a.coeffs[k] : C2{};
        C2 cb = k < b.coeffs.size() ? b.coeffs[k] : C2{};
        c[k] = ca * (1.0 - u) + cb * u;
    }
    return AnalyticDisc(std::move(c), std::min(a.radius, b.radius));
}

double coeff_dist(const AnalyticDisc& a, const AnalyticDisc& b) {
    return disc_distance(a, b);
}

}  // namespace

AnalyticDisc Halo::at(double s) const {
    if (discs.empty()) throw std::logic_error("Halo::at: empty halo");
    if (s <= params.front()) return discs.front();
    if (s >= params.back()) return discs.back();
    auto it = std::upper_bound(params.begin(), params.end(), s);
    std::size_t i = std::size_t(it - params.begin());
    double h = params[i] - params[i - 1];
    double u = h > 0.0 ? (s - params[i - 1]) / h : 0.0;
    return lerp_discs(discs[i - 1], discs[i], u);
}

C2 Halo::curve_at(double s) const { return at(s).center(); }

double Halo::max_center_mismatch() const {
    double m = 0.0;
    for (std::size_t i = 0; i < discs.size(); ++i)
        m = std::max(m, (discs[i].center() - curve[i]).norm());
    return m;
}

std::vector<double> Halo::jumps() const {
    std::vector<double> j;
    for (std::size_t i = 0; i + 1 < discs.size(); ++i)
        j.push_back(coeff_dist(discs[i], discs[i + 1]));
    return j;
}

double Halo::cont_scale() const {
    auto j = jumps();
    if (j.empty()) return 0.0;
    std::vector<double> s = j;
    std::nth_element(s.begin(), s.begin() + s.size() / 2, s.end());
    // 10x the median step plus a floor, so constant haloes flag any jump
    return 10.0 * s[s.size() / 2] + 1e-12;
}

std::vector<std::size_t> Halo::discontinuities() const {
    std::vector<std::size_t> out;
    double d = cont_scale();
    auto j = jumps();
    for (std::size_t i = 0; i < j.size(); ++i)
        if (j[i] > 5.0 * d) out.push_back(i);
    return out;
}

void Halo::validate(double tol_center) const {
    if (discs.size() != params.size() || discs.size() != curve.size())
        throw std::invalid_argument("Halo: misaligned samples");
    if (discs.empty()) throw std::invalid_argument("Halo: empty");
    for (std::size_t i = 0; i + 1 < params.size(); ++i)
        if (params[i + 1] < params[i])
            throw std::invalid_argument("Halo: params not sorted");
    if (max_center_mismatch() > tol_center)
        throw std::invalid_argument("Halo: center/curve mismatch");
}

Halo Halo::reversed() const {
    Halo h;
    double lo = params.front(), hi = params.back();
    for (std::size_t i = discs.size(); i-- > 0;) {
        h.params.push_back(lo + hi - params[i]);
        h.discs.push_back(discs[i]);
        h.curve.push_back(curve[i]);
    }
    return h;
}

Halo Halo::constant(const AnalyticDisc& d, int n) {
    Halo h;
    for (int i = 0; i < n; ++i) {
        h.params.push_back(n > 1 ? double(i) / double(n - 1) : 0.0);
        h.discs.push_back(d);
        h.curve.push_back(d.center());
    }
    return h;
}

Halo Halo::interpolate(const AnalyticDisc& a, const AnalyticDisc& b, int n) {
    Halo h;
    for (int i = 0; i < n; ++i) {
        double u = n > 1 ? double(i) / double(n - 1) : 0.0;
        auto d = lerp_discs(a, b, u);
        h.params.push_back(u);
        h.curve.push_back(d.center());
        h.discs.push_back(std::move(d));
    }
    return h;
}

Halo Halo::from_family(const DiscFamily& F) {
    Halo h;
    h.params = F.params;
    h.discs = F.discs;
    for (const auto& d : F.discs) h.curve.push_back(d.center());
    return h;
}

Halo Halo::concat(const std::vector<Halo>& parts) {
    std::size_t total = 0;
    for (const auto& p : parts) total += p.size();
    if (total == 0) throw std::invalid_argument("Halo::concat: empty");
    Halo out;
    double acc = 0.0;
    for (const auto& p : parts) {
        if (p.discs.empty()) continue;
        double w = double(p.size()) / double(total);
        double lo = p.params.front(), hi = p.params.back();
        double span = hi - lo;
        for (std::size_t i = 0; i < p.size(); ++i) {
            double u = span > 0.0 ? (p.params[i] - lo) / span
                                  : (p.size() > 1 ? double(i) / double(p.size() - 1) : 0.0);
            out.params.push_back(acc + w * u);
            out.discs.push_back(p.discs[i]);
            out.curve.push_back(p.curve[i]);
        }
        acc += w;
    }
    return out;
}

EquivalenceTrace EquivalenceTrace::pair(const AnalyticDisc& d1, const AnalyticDisc& d2) {
    EquivalenceTrace t;
    t.step = Pair{d1, d2};
    return t;
}

EquivalenceTrace EquivalenceTrace::homotopy(EquivalenceTrace base, DiscFamily F1,
                                            DiscFamily F2) {
    EquivalenceTrace t;
    Homotopy h;
    h.base.push_back(std::move(base));
    h.F1 = std::move(F1);
    h.F2 = std::move(F2);
    t.step = std::move(h);
    return t;
}

EquivalenceTrace EquivalenceTrace::chain(std::vector<EquivalenceTrace> parts) {
    EquivalenceTrace t;
    t.step = Chain{std::move(parts)};
    return t;
}

namespace {

void validate_trace_rec(const EquivalenceTrace& trace, const ModelDomain& G,
                        const Tolerances& tol, std::string path) {
    double ds = diam_small(G);
    if (const auto* p = std::get_if<EquivalenceTrace::Pair>(&trace.step)) {
        if ((p->d1.center() - p->d2.center()).norm() > tol.tol_center)
            throw std::invalid_argument("trace " + path + ": pair centers differ");
        for (const AnalyticDisc* d : {&p->d1, &p->d2}) {
            if (d->image_diameter() >= ds)
                throw std::invalid_argument("trace " + path + ": pair disc not small");
            if (!is_g_disc(*d, G, tol).boundary_in_G)
                throw std::invalid_argument("trace " + path + ": pair disc leaves G");
        }
    } else if (const auto* h = std::get_if<EquivalenceTrace::Homotopy>(&trace.step)) {
        if (h->base.size() != 1)
            throw std::invalid_argument("trace " + path + ": homotopy needs one base");
        if (h->F1.size() != h->F2.size() || h->F1.size() < 2)
            throw std::invalid_argument("trace " + path + ": homotopy family shape");
        for (std::size_t i = 0; i < h->F1.size(); ++i)
            if ((h->F1.discs[i].center() - h->F2.discs[i].center()).norm() > tol.tol_center)
                throw std::invalid_argument("trace " + path + ": homotopy center mismatch at sample " +
                                            std::to_string(i));
        validate_trace_rec(h->base[0], G, tol, path + ".base");
    } else {
        const auto& c = std::get<EquivalenceTrace::Chain>(trace.step);
        if (c.parts.empty())
            throw std::invalid_argument("trace " + path + ": empty chain");
        for (std::size_t i = 0; i < c.parts.size(); ++i)
            validate_trace_rec(c.parts[i], G, tol, path + ".part" + std::to_string(i));
    }
}

// New root below the old one; ids shift by one.
PlanarTree hang_below(const PlanarTree& t) {
    PlanarTree out;
    out.root = 0;
    int n = t.num_vertices();
    out.parent.assign(n + 1, -1);
    out.children.assign(n + 1, {});
    out.children[0] = {t.root + 1};
    for (int v = 0; v < n; ++v) {
        out.parent[v + 1] = v == t.root ? 0 : t.parent[v] + 1;
        for (int c : t.children[v]) out.children[v + 1].push_back(c + 1);
    }
    return out;
}

struct DendriteParts {
    PlanarTree tree;  // combinatorial, embedded later
    Halo halo;
};

DendriteParts build_rec(const EquivalenceTrace& trace, const Tolerances& tol,
                        std::string path) {
    if (const auto* p = std::get_if<EquivalenceTrace::Pair>(&trace.step)) {
        if ((p->d1.center() - p->d2.center()).norm() > tol.tol_center)
            throw std::invalid_argument("build_dendrite " + path + ": pair centers differ");
        return {PlanarTree::point_tree(), Halo::interpolate(p->d1, p->d2, 2)};
    }
    if (const auto* h = std::get_if<EquivalenceTrace::Homotopy>(&trace.step)) {
        if (h->base.size() != 1 || h->F1.size() != h->F2.size() || h->F1.size() < 2)
            throw std::invalid_argument("build_dendrite " + path + ": malformed homotopy");
        auto base = build_rec(h->base[0], tol, path + ".base");
        for (std::size_t i = 0; i < h->F1.size(); ++i)
            if ((h->F1.discs[i].center() - h->F2.discs[i].center()).norm() > tol.tol_center)
                throw std::invalid_argument("build_dendrite " + path +
                                            ": homotopy center mismatch at sample " +
                                            std::to_string(i));
        if (coeff_dist(h->F1.discs.front(), base.halo.front()) > tol.tol_trunc)
            throw std::invalid_argument("build_dendrite " + path +
                                        ": F1 does not start at the base halo");
        if (coeff_dist(h->F2.discs.front(), base.halo.back()) > tol.tol_trunc)
            throw std::invalid_argument("build_dendrite " + path +
                                        ": F2 does not start at the base halo");
        DendriteParts out;
        out.tree = hang_below(base.tree);
        out.halo = Halo::concat({Halo::from_family(h->F1).reversed(), base.halo,
                                 Halo::from_family(h->F2)});
        return out;
    }
    const auto& c = std::get<EquivalenceTrace::Chain>(trace.step);
    if (c.parts.empty())
        throw std::invalid_argument("build_dendrite " + path + ": empty chain");
    std::vector<PlanarTree> trees;
    std::vector<Halo> haloes;
    for (std::size_t i = 0; i < c.parts.size(); ++i) {
        auto part = build_rec(c.parts[i], tol, path + ".part" + std::to_string(i));
        if (i > 0 && coeff_dist(haloes.back().back(), part.halo.front()) > tol.tol_trunc)
            throw std::invalid_argument("build_dendrite " + path +
                                        ": chain junction mismatch before part " +
                                        std::to_string(i));
        trees.push_back(std::move(part.tree));
        haloes.push_back(std::move(part.halo));
    }
    return {glue_at_root(trees), Halo::concat(haloes)};
}

}  // namespace

void validate_trace(const EquivalenceTrace& trace, const ModelDomain& G,
                    const Tolerances& tol) {
    validate_trace_rec(trace, G, tol, "root");
}

void Dendrite::validate(double tol_center) const {
    tree.validate();
    halo.validate(tol_center);
    if (tree.num_edges() > 0 && walk.events.size() != std::size_t(2 * tree.num_edges()))
        throw std::invalid_argument("Dendrite: walk does not cover the tree");
}

Dendrite build_dendrite(const EquivalenceTrace& trace, const Tolerances& tol) {
    auto parts = build_rec(trace, tol, "root");
    Dendrite d;
    d.tree = embed_planar(parts.tree);
    d.walk = pellicle(d.tree, true);
    d.halo = std::move(parts.halo);
    d.validate(tol.tol_center);
    return d;
}

Excrescence excrescence_with_halo(const std::vector<double>& t,
                                  const std::vector<Pt2>& pts,
                                  const std::vector<C2>& sigma,
                                  const CurveLift& lift, const Tolerances& tol) {
    if (t.size() != pts.size() || t.size() != sigma.size() || t.size() < 2)
        throw std::invalid_argument("excrescence: malformed curve");
    if (lift.pieces.empty() || lift.breaks.size() + 1 != lift.pieces.size())
        throw std::invalid_argument("excrescence: lift shape");
    // pieces must cover the curve parameters consecutively
    {
        std::size_t covered = 0;
        for (const auto& p : lift.pieces) covered += p.size();
        if (covered != t.size() + lift.breaks.size())
            throw std::invalid_argument("excrescence: lift does not cover the curve");
    }

    Excrescence out;
    std::vector<Halo> haloes;
    std::size_t curve_idx = 0;
    for (std::size_t k = 0; k < lift.pieces.size(); ++k) {
        const auto& piece = lift.pieces[k];
        // geometric walk for this piece
        for (std::size_t i = 0; i < piece.size(); ++i) {
            out.params.push_back(t[curve_idx]);
            out.points.push_back(pts[curve_idx]);
            if (i + 1 < piece.size()) ++curve_idx;  // breakpoint param repeats
        }
        haloes.push_back(Halo::from_family(piece));
        if (k < lift.breaks.size()) {
            const auto& left = piece.discs.back();
            const auto& right = lift.pieces[k + 1].discs.front();
            auto dend = build_dendrite(lift.breaks[k], tol);
            if (coeff_dist(dend.halo.front(), left) > tol.tol_trunc ||
                coeff_dist(dend.halo.back(), right) > tol.tol_trunc)
                throw std::invalid_argument(
                    "excrescence: breakpoint trace endpoints do not match the limits "
                    "at breakpoint " + std::to_string(k));
            // sprout along the left normal of the curve at the breakpoint
            Pt2 at = pts[curve_idx];
            Pt2 tan = curve_idx + 1 < pts.size() ? pts[curve_idx + 1] - pts[curve_idx - 1]
                                                 : pts[curve_idx] - pts[curve_idx - 1];
            double normal = std::atan2(tan.y, tan.x) + M_PI / 2.0;
            EmbedOptions opt;
            opt.root_pos = at;
            opt.base_angle = normal;
            opt.span = M_PI / 4.0;
            opt.edge_len = 0.2;
            dend.tree = embed_planar(dend.tree, opt);
            if (dend.tree.num_edges() > 0) {
                // tree detour in the geometric walk
                const int per_event = 4;
                for (std::size_t e = 0; e < dend.walk.events.size(); ++e)
                    for (int q = 0; q < per_event; ++q) {
                        double s = (double(e) + double(q) / per_event) /
                                   double(dend.walk.events.size());
                        out.params.push_back(t[curve_idx]);
                        out.points.push_back(dend.walk.point_at(dend.tree, s));
                    }
            }
            out.attach_params.push_back(t[curve_idx]);
            haloes.push_back(dend.halo);
            out.trees.push_back(std::move(dend));
        }
    }
    out.halo = Halo::concat(haloes);
    out.halo.validate(tol.tol_center);
    // trees must be pairwise disjoint and meet the curve only at their roots
    for (std::size_t a = 0; a < out.trees.size(); ++a)
        for (std::size_t b = a + 1; b < out.trees.size(); ++b) {
            const auto& ta = out.trees[a].tree;
            const auto& tb = out.trees[b].tree;
            for (int va = 0; va < ta.num_vertices(); ++va) {
                if (va == ta.root) continue;
                for (int vb = 0; vb < tb.num_vertices(); ++vb) {
                    if (vb == tb.root) continue;
                    if (segment_segment_dist(ta.pos[ta.parent[va]], ta.pos[va],
                                             tb.pos[tb.parent[vb]], tb.pos[vb]) < 1e-9)
                        throw std::invalid_argument("excrescence: pasted trees intersect");
                }
            }
        }
    return out;
}

void Neuron::validate(const ModelDomain& G, const Tolerances& tol) const {
    halo.validate(tol.tol_center);
    if (walk_points.size() != halo.size())
        throw std::invalid_argument("Neuron: walk/halo misaligned");
    // distinct roots, ccw order
    for (std::size_t i = 0; i + 1 < trees.size(); ++i)
        if (trees[i + 1].root_angle - trees[i].root_angle < 1e-9)
            throw std::invalid_argument("Neuron: tree roots not distinct/ccw");
    for (const auto& at : trees) {
        const auto& tr = at.dendrite.tree;
        tr.validate();
        if (!tr.has_embedding())
            throw std::invalid_argument("Neuron: attached tree not embedded");
        Pt2 root{std::cos(at.root_angle), std::sin(at.root_angle)};
        if (dist(tr.pos[tr.root], root) > 1e-9)
            throw std::invalid_argument("Neuron: tree root off its circle point");
        // trees meet the closed disc only at their roots
        for (int v = 0; v < tr.num_vertices(); ++v) {
            if (v == tr.root) continue;
            if (tr.pos[v].norm() <= 1.0 + 1e-9)
                throw std::invalid_argument("Neuron: tree vertex inside the closed disc");
            // edge samples stay outside except at the root itself
            Pt2 a = tr.pos[tr.parent[v]], b = tr.pos[v];
            for (int q = 1; q < 16; ++q) {
                Pt2 p = a + (b - a) * (q / 16.0);
                if (p.norm() < 1.0 - 1e-9)
                    throw std::invalid_argument("Neuron: tree edge dips into the disc");
            }
        }
    }
    // pairwise tree disjointness
    for (std::size_t i = 0; i < trees.size(); ++i)
        for (std::size_t j = i + 1; j < trees.size(); ++j) {
            const auto& ta = trees[i].dendrite.tree;
            const auto& tb = trees[j].dendrite.tree;
            for (int va = 0; va < ta.num_vertices(); ++va) {
                if (va == ta.root) continue;
                for (int vb = 0; vb < tb.num_vertices(); ++vb) {
                    if (vb == tb.root) continue;
                    if (segment_segment_dist(ta.pos[ta.parent[va]], ta.pos[va],
                                             tb.pos[tb.parent[vb]], tb.pos[vb]) < 1e-9)
                        throw std::invalid_argument("Neuron: attached trees intersect");
                }
            }
        }
    if (axon) {
        if (axon->tip.image_diameter() >= diam_small(G))
            throw std::invalid_argument("Neuron: axon tip disc not small");
        if (!is_g_disc(axon->tip, G, tol).boundary_in_G)
            throw std::invalid_argument("Neuron: axon tip disc leaves G");
        if (!axon->degenerate() && axon->tree_index >= int(trees.size()))
            throw std::invalid_argument("Neuron: axon tree index out of range");
    }
}

Neuron make_preneuron(const AnalyticDisc& body,
                      const std::function<AnalyticDisc(double)>& boundary_disc,
                      int n_samples) {
    Neuron n;
    n.body = body;
    for (int i = 0; i < n_samples; ++i) {
        double s = double(i) / double(n_samples - 1);
        double theta = 2 * M_PI * s;
        auto d = boundary_disc(theta);
        n.halo.params.push_back(s);
        n.halo.curve.push_back(d.center());
        n.halo.discs.push_back(std::move(d));
        n.walk_points.push_back({std::cos(theta), std::sin(theta)});
    }
    return n;
}

Neuron preneuron_to_neuron(const Neuron& p, const std::vector<BoundaryTrace>& traces,
                           const ModelDomain& G, const Tolerances& tol) {
    if (p.axon) return p;
    double ds = diam_small(G);
    // a circle point whose halo disc is already small and embedded suffices
    for (std::size_t i = 0; i < p.halo.size(); ++i) {
        if (std::abs(p.walk_points[i].norm() - 1.0) > 1e-9) continue;  // on a tree
        const auto& d = p.halo.discs[i];
        if (d.image_diameter() < ds && is_g_disc(d, G, tol).ok()) {
            Neuron out = p;
            NeuronAxon ax;
            ax.angle = std::atan2(p.walk_points[i].y, p.walk_points[i].x);
            ax.tip = d;
            out.axon = ax;
            return out;
        }
    }
    for (const auto& bt : traces) {
        auto halo_here = p.halo.at(std::fmod(bt.angle / (2 * M_PI) + 1.0, 1.0));
        Dendrite dend;
        try {
            dend = build_dendrite(bt.trace, tol);
        } catch (const std::invalid_argument&) {
            continue;
        }
        if (disc_distance(dend.halo.front(), halo_here) > tol.tol_trans) continue;
        auto tip = dend.halo.at(0.5);  // innermost value: the deepest pair
        if (tip.image_diameter() >= ds || !is_g_disc(tip, G, tol).ok()) continue;
        Neuron out = p;
        EmbedOptions opt;
        opt.root_pos = {std::cos(bt.angle), std::sin(bt.angle)};
        opt.base_angle = bt.angle;  // radially outward
        opt.span = M_PI / 4.0;
        opt.edge_len = 0.4;
        dend.tree = embed_planar(dend.tree, opt);
        // splice the dendrite halo into the circle halo at the root angle
        double s0 = std::fmod(bt.angle / (2 * M_PI) + 1.0, 1.0);
        Halo before, after;
        std::vector<Pt2> wp_before, wp_after;
        for (std::size_t i = 0; i < p.halo.size(); ++i) {
            if (p.halo.params[i] <= s0) {
                before.params.push_back(p.halo.params[i]);
                before.discs.push_back(p.halo.discs[i]);
                before.curve.push_back(p.halo.curve[i]);
                wp_before.push_back(p.walk_points[i]);
            } else {
                after.params.push_back(p.halo.params[i]);
                after.discs.push_back(p.halo.discs[i]);
                after.curve.push_back(p.halo.curve[i]);
                wp_after.push_back(p.walk_points[i]);
            }
        }
        std::vector<Halo> parts;
        if (!before.discs.empty()) parts.push_back(before);
        parts.push_back(dend.halo);
        if (!after.discs.empty()) parts.push_back(after);
        out.halo = Halo::concat(parts);
        out.walk_points.clear();
        out.walk_points.insert(out.walk_points.end(), wp_before.begin(), wp_before.end());
        for (std::size_t e = 0; e < dend.halo.size(); ++e) {
            double s = dend.halo.size() > 1
                           ? double(e) / double(dend.halo.size() - 1)
                           : 0.0;
            out.walk_points.push_back(dend.tree.num_edges() > 0
                                          ? dend.walk.point_at(dend.tree, s)
                                          : opt.root_pos);
        }
        out.walk_points.insert(out.walk_points.end(), wp_after.begin(), wp_after.end());

        NeuronAxon ax;
        ax.angle = bt.angle;
        ax.tip = tip;
        // the leaf reached at walk midpoint carries the small disc
        if (dend.tree.num_edges() > 0) {
            ax.tree_index = 0;
            int leaf = dend.tree.root;
            while (!dend.tree.children[leaf].empty())
                leaf = dend.tree.children[leaf].front();
            ax.leaf = leaf;
        }
        // keep tree list ccw by angle
        auto pos = std::upper_bound(
            out.trees.begin(), out.trees.end(), bt.angle,
            [](double a, const AttachedTree& t) { return a < t.root_angle; });
        long ti = pos - out.trees.begin();
        out.trees.insert(pos, AttachedTree{bt.angle, std::move(dend)});
        if (ax.tree_index == 0) ax.tree_index = int(ti);
        out.axon = ax;
        return out;
    }
    throw std::invalid_argument(
        "preneuron_to_neuron: no boundary point or trace reaches a small embedded disc");
}

KappaCloud kappa(const Neuron& n, const ModelDomain& G, int n_b, int n_grid) {
    if (!n.axon) throw std::invalid_argument("kappa: neuron has no axon");
    KappaCloud out;
    for (const auto& d : n.halo.discs) {
        auto bnd = d.boundary_samples(n_b);
        out.points.insert(out.points.end(), bnd.begin(), bnd.end());
    }
    for (int i = 0; i < n_grid; ++i) {
        double r = double(i) / double(n_grid - 1);
        for (int j = 0; j < n_grid; ++j)
            out.points.push_back(n.axon->tip.eval(std::polar(r, 2 * M_PI * j / n_grid)));
    }
    out.inside = true;
    out.min_margin = std::numeric_limits<double>::infinity();
    for (const auto& p : out.points) {
        out.min_margin = std::min(out.min_margin, G.margin(p));
        if (!G.contains(p)) out.inside = false;
    }
    return out;
}

DiscFamily prepend_embedded_start(const DiscFamily& F, const std::vector<C2>& path,
                                  double sigma, const ModelDomain& G,
                                  const Tolerances& tol) {
    F.validate();
    if (!(sigma > 0.0 && sigma < 1.0))
        throw std::invalid_argument("prepend_embedded_start: need 0 < sigma < 1");
    for (const auto& p : path)
        if (!G.contains(p))
            throw std::invalid_argument("prepend_embedded_start: path exits G");
    const AnalyticDisc& F0 = F.discs.front();
    C2 dir = F0.coeffs.size() > 1 ? F0.coeffs[1] : C2{1.0, 0.0};
    double dn = dir.norm();
    if (dn < tol.tol_imm)
        throw std::invalid_argument("prepend_embedded_start: degenerate first member");
    dir = dir * (1.0 / dn);
    double r_small = 0.25 * sigma * dn;

    DiscFamily out;
    const int n_path = std::max<int>(2, int(path.size()));
    // [0, 1/3]: small embedded discs sliding along the path to F0's center
    for (int i = 0; i < n_path; ++i) {
        double u = double(i) / double(n_path - 1);
        C2 c = path.empty() ? F0.center()
                            : path[std::min<std::size_t>(i, path.size() - 1)];
        out.params.push_back(u / 3.0);
        out.discs.push_back(small_embedded_disc(c, dir, r_small));
    }
    // [1/3, 2/3]: radial contractions F0(rho z), rho from sigma to 1
    const int n_rad = 9;
    for (int i = 0; i < n_rad; ++i) {
        double u = double(i) / double(n_rad - 1);
        double rho = sigma + (1.0 - sigma) * u;
        std::vector<C2> c(F0.coeffs.size());
        double pw = 1.0;
        for (std::size_t k = 0; k < c.size(); ++k) {
            c[k] = F0.coeffs[k] * pw;
            pw *= rho;
        }
        out.params.push_back(1.0 / 3.0 + u / 3.0);
        out.discs.push_back(AnalyticDisc(std::move(c), F0.radius / 1.0));
    }
    // [2/3, 1]: the original family
    double lo = F.params.front(), span = F.params.back() - F.params.front();
    for (std::size_t i = 0; i < F.size(); ++i) {
        double u = span > 0.0 ? (F.params[i] - lo) / span : 1.0;
        out.params.push_back(2.0 / 3.0 + u / 3.0);
        out.discs.push_back(F.discs[i]);
    }
    return out;
}

NeuronFamily build_pw_neuron_family(
    const DiscFamily& Psi, double gamma_half_width,
    const std::function<AnalyticDisc(double, double)>& boundary_halo,
    const ModelDomain& G, int n_t, int n_angle, const Tolerances& tol) {
    Psi.validate();
    if (!(gamma_half_width > 0.0))
        throw std::invalid_argument("build_pw_neuron_family: empty arc");
    NeuronFamily out;
    double ds = diam_small(G);

    // does the lift at the distinguished point 1 already end small+embedded?
    auto probe = boundary_halo(1.0, 0.0);
    bool needs_axon = !(probe.image_diameter() < ds && is_g_disc(probe, G, tol).ok());

    for (int it = 0; it < n_t; ++it) {
        double t = double(it) / double(n_t - 1);
        auto pre = make_preneuron(Psi.at(t),
                                  [&](double th) { return boundary_halo(t, th); },
                                  n_angle);
        double len = 0.0;
        if (needs_axon) len = std::clamp((t - 0.25) / 0.5, 0.0, 1.0);
        Neuron n = pre;
        auto root_disc = boundary_halo(t, 0.0);
        C2 tip_center = root_disc.center();
        if (len > 1e-12) {
            // explicit segment axon [1, 1+len] at angle 0 with a symmetric halo
            C2 dir = root_disc.coeffs.size() > 1 ? root_disc.coeffs[1] : C2{1.0, 0.0};
            double dn = std::max(dir.norm(), tol.tol_imm);
            dir = dir * (1.0 / dn);
            auto tip = small_embedded_disc(tip_center, dir, 0.2 * ds);
            Dendrite dend;
            dend.tree = PlanarTree::single_edge();
            dend.tree.pos = {{1.0, 0.0}, {1.0 + len, 0.0}};
            dend.walk = pellicle(dend.tree, true);
            auto outward = Halo::interpolate(root_disc, tip, 9);
            dend.halo = Halo::concat({outward, outward.reversed()});
            // splice at angle 0 = start of the circle halo
            Halo circ = pre.halo;
            n.halo = Halo::concat({dend.halo, circ});
            n.walk_points.clear();
            for (std::size_t e = 0; e < dend.halo.size(); ++e)
                n.walk_points.push_back(dend.walk.point_at(
                    dend.tree, double(e) / double(dend.halo.size() - 1)));
            n.walk_points.insert(n.walk_points.end(), pre.walk_points.begin(),
                                 pre.walk_points.end());
            NeuronAxon ax;
            ax.tree_index = 0;
            ax.leaf = 1;
            ax.angle = 0.0;
            ax.tip = tip;
            n.trees.push_back(AttachedTree{0.0, std::move(dend)});
            n.axon = ax;
        } else {
            NeuronAxon ax;
            ax.angle = 0.0;
            ax.tip = needs_axon ? small_embedded_disc(tip_center, C2{1.0, 0.0}, 0.2 * ds)
                                : root_disc;
            n.axon = ax;
        }
        out.params.push_back(t);
        out.axon_tips.push_back(n.axon->tip.center());
        out.neurons.push_back(std::move(n));
    }

    // discontinuity scan over the body family
    Halo bodies;
    for (int it = 0; it < n_t; ++it) {
        double t = double(it) / double(n_t - 1);
        auto d = Psi.at(t);
        bodies.params.push_back(t);
        bodies.curve.push_back(d.center());
        bodies.discs.push_back(std::move(d));
    }
    for (auto i : bodies.discontinuities())
        out.discontinuities.push_back(0.5 * (bodies.params[i] + bodies.params[i + 1]));
    return out;
}

}  // namespace dischull
