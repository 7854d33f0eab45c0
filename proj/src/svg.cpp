#include "dischull/svg.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dischull {

namespace {

// Accumulates drawing primitives in world coordinates, then emits a fixed
// 560px viewport with a padded bounding box and a y-flip.
class Canvas {
public:
    void polyline(const std::vector<Pt2>& pts, const std::string& stroke,
                  double width, bool closed = false) {
        if (pts.size() < 2) return;
        for (const auto& p : pts) grow(p);
        std::ostringstream s;
        s << (closed ? "<polygon" : "<polyline") << " fill=\"none\" stroke=\"" << stroke
          << "\" stroke-width=\"" << width << "\" points=\"";
        for (const auto& p : pts) s << p.x << "," << -p.y << " ";
        s << "\"/>";
        items_.push_back(s.str());
    }

    void segment(const Pt2& a, const Pt2& b, const std::string& stroke, double width) {
        polyline({a, b}, stroke, width);
    }

    void dot(const Pt2& p, double r, const std::string& fill) {
        grow(p);
        std::ostringstream s;
        s << "<circle cx=\"" << p.x << "\" cy=\"" << -p.y << "\" r=\"" << r
          << "\" fill=\"" << fill << "\"/>";
        items_.push_back(s.str());
    }

    void circle(const Pt2& c, double r, const std::string& stroke, double width) {
        grow(c + Pt2{r, r});
        grow(c - Pt2{r, r});
        std::ostringstream s;
        s << "<circle cx=\"" << c.x << "\" cy=\"" << -c.y << "\" r=\"" << r
          << "\" fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"" << width
          << "\"/>";
        items_.push_back(s.str());
    }

    std::string render() const {
        double pad = 0.08 * std::max({xmax_ - xmin_, ymax_ - ymin_, 0.05});
        double x0 = xmin_ - pad, y0 = -ymax_ - pad;
        double w = xmax_ - xmin_ + 2 * pad, h = ymax_ - ymin_ + 2 * pad;
        std::ostringstream s;
        s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"560\" height=\"560\" "
          << "viewBox=\"" << x0 << " " << y0 << " " << w << " " << h << "\">\n";
        for (const auto& it : items_) s << "  " << it << "\n";
        s << "</svg>\n";
        return s.str();
    }

private:
    void grow(const Pt2& p) {
        xmin_ = std::min(xmin_, p.x);
        xmax_ = std::max(xmax_, p.x);
        ymin_ = std::min(ymin_, p.y);
        ymax_ = std::max(ymax_, p.y);
    }

    std::vector<std::string> items_;
    double xmin_ = 1e300, xmax_ = -1e300, ymin_ = 1e300, ymax_ = -1e300;
};

double tree_scale(const PlanarTree& t) {
    double s = 0.0;
    for (int v = 0; v < t.num_vertices(); ++v)
        if (t.parent[v] >= 0) s = std::max(s, dist(t.pos[v], t.pos[t.parent[v]]));
    return s > 0 ? s : 1.0;
}

void draw_tree(Canvas& cv, const PlanarTree& t, const PellicleWalk* walk) {
    if (!t.has_embedding()) throw std::invalid_argument("svg: tree not embedded");
    double sc = tree_scale(t);
    for (int v = 0; v < t.num_vertices(); ++v)
        if (t.parent[v] >= 0) cv.segment(t.pos[v], t.pos[t.parent[v]], "#334", 0.012 * sc);
    for (int v = 0; v < t.num_vertices(); ++v)
        cv.dot(t.pos[v], (v == t.root ? 0.035 : 0.022) * sc, v == t.root ? "#c22" : "#334");
    if (walk && !walk->events.empty()) {
        // trace the walk just left of its direction of travel
        int n = int(walk->size()) * 24;
        std::vector<Pt2> trace;
        for (int i = 0; i <= n; ++i) {
            double s0 = double(i) / n, s1 = std::min(1.0, s0 + 0.5 / n);
            Pt2 a = walk->point_at(t, s0), b = walk->point_at(t, s1);
            Pt2 d = b - a;
            double len = d.norm();
            Pt2 off = len > 1e-12 ? Pt2{-d.y / len, d.x / len} * (0.05 * sc) : Pt2{};
            trace.push_back(a + off);
        }
        cv.polyline(trace, "#2a7", 0.008 * sc);
    }
}

}  // namespace

std::string svg_tree(const PlanarTree& tree, const PellicleWalk* walk) {
    Canvas cv;
    draw_tree(cv, tree, walk);
    return cv.render();
}

std::string svg_neuron(const Neuron& n) {
    Canvas cv;
    std::vector<Pt2> circle;
    for (int j = 0; j <= 256; ++j) {
        double th = 2 * M_PI * j / 256.0;
        circle.push_back(Pt2{std::cos(th), std::sin(th)});
    }
    cv.polyline(circle, "#99a", 0.008);
    if (!n.walk_points.empty()) cv.polyline(n.walk_points, "#2a7", 0.006, true);
    for (const auto& t : n.trees) draw_tree(cv, t.dendrite.tree, &t.dendrite.walk);
    if (n.axon) {
        Pt2 tip = n.axon->degenerate()
                      ? Pt2{std::cos(n.axon->angle), std::sin(n.axon->angle)}
                      : n.trees[n.axon->tree_index].dendrite.tree.pos[n.axon->leaf];
        cv.dot(tip, 0.03, "#d80");
    }
    return cv.render();
}

std::string svg_region(const FattenedRegion& r) {
    Canvas cv;
    std::vector<Pt2> circle;
    for (int j = 0; j <= 256; ++j) {
        double th = 2 * M_PI * j / 256.0;
        circle.push_back(Pt2{std::cos(th), std::sin(th)});
    }
    cv.polyline(circle, "#ccd", 0.006);
    if (!r.boundary.empty()) cv.polyline(r.boundary, "#36c", 0.01, true);
    for (const auto& s : r.capsules) cv.segment(s.a, s.b, "#334", 0.008);
    for (const auto& p : r.kept_leaves) cv.dot(p, 0.02, "#c22");
    for (const auto& p : r.residual_samples) cv.dot(p, 0.012, "#aaa");
    return cv.render();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

}  // namespace dischull
