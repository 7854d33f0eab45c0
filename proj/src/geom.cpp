#include "dischull/geom.hpp"

#include <algorithm>

namespace dischull {

double point_segment_dist(const Pt2& p, const Pt2& a, const Pt2& b) {
    Pt2 ab = b - a;
    double len2 = ab.dot(ab);
    if (len2 == 0.0) return dist(p, a);
    double t = std::clamp((p - a).dot(ab) / len2, 0.0, 1.0);
    return dist(p, a + ab * t);
}

static int orient(const Pt2& a, const Pt2& b, const Pt2& c, double eps) {
    double v = (b - a).cross(c - a);
    double scale = std::max({1.0, (b - a).norm(), (c - a).norm()});
    if (v > eps * scale) return 1;
    if (v < -eps * scale) return -1;
    return 0;
}

bool segments_cross(const Pt2& a, const Pt2& b, const Pt2& c, const Pt2& d, double eps) {
    // shared endpoints are allowed
    if (dist(a, c) < eps || dist(a, d) < eps || dist(b, c) < eps || dist(b, d) < eps)
        return false;
    int o1 = orient(a, b, c, eps), o2 = orient(a, b, d, eps);
    int o3 = orient(c, d, a, eps), o4 = orient(c, d, b, eps);
    if (o1 != o2 && o3 != o4 && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0) return true;
    // collinear overlap counts as a crossing
    auto on_seg = [&](const Pt2& p, const Pt2& q, const Pt2& r) {
        return orient(p, q, r, eps) == 0 &&
               r.x >= std::min(p.x, q.x) - eps && r.x <= std::max(p.x, q.x) + eps &&
               r.y >= std::min(p.y, q.y) - eps && r.y <= std::max(p.y, q.y) + eps;
    };
    if (on_seg(a, b, c) || on_seg(a, b, d) || on_seg(c, d, a) || on_seg(c, d, b))
        return true;
    return false;
}

double segment_segment_dist(const Pt2& a, const Pt2& b, const Pt2& c, const Pt2& d) {
    if (segments_cross(a, b, c, d)) return 0.0;
    return std::min({point_segment_dist(a, c, d), point_segment_dist(b, c, d),
                     point_segment_dist(c, a, b), point_segment_dist(d, a, b)});
}

Pt2 rotate(const Pt2& p, double angle) {
    double c = std::cos(angle), s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

Pt2 reflect_about_ray(const Pt2& p, const Pt2& apex, double angle) {
    Pt2 v = rotate(p - apex, -angle);
    v.y = -v.y;
    return apex + rotate(v, angle);
}

bool Cone::contains(const Pt2& p, double tol) const {
    Pt2 v = p - apex;
    double r = v.norm();
    if (r < tol) return true;
    double a = std::atan2(v.y, v.x) - bisector_angle;
    while (a > M_PI) a -= 2 * M_PI;
    while (a < -M_PI) a += 2 * M_PI;
    return std::abs(a) <= half_angle + tol / std::max(r, tol);
}

bool Cone::interior_except_apex(const Pt2& p, double tol) const {
    Pt2 v = p - apex;
    double r = v.norm();
    if (r < tol) return true;
    double a = std::atan2(v.y, v.x) - bisector_angle;
    while (a > M_PI) a -= 2 * M_PI;
    while (a < -M_PI) a += 2 * M_PI;
    return std::abs(a) < half_angle - tol;
}

}  // namespace dischull
