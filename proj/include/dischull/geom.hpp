#ifndef DISCHULL_GEOM_HPP
#define DISCHULL_GEOM_HPP

#include <cmath>
#include <vector>

namespace dischull {

struct Pt2 {
    double x = 0.0, y = 0.0;
    Pt2() = default;
    Pt2(double x_, double y_) : x(x_), y(y_) {}
    Pt2 operator+(const Pt2& o) const { return {x + o.x, y + o.y}; }
    Pt2 operator-(const Pt2& o) const { return {x - o.x, y - o.y}; }
    Pt2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Pt2& o) const { return x * o.x + y * o.y; }
    double cross(const Pt2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

inline double dist(const Pt2& a, const Pt2& b) { return (a - b).norm(); }

double point_segment_dist(const Pt2& p, const Pt2& a, const Pt2& b);

// Proper crossing test: interiors intersect at a single point that is not a
// shared endpoint. Touching at endpoints does not count.
bool segments_cross(const Pt2& a, const Pt2& b, const Pt2& c, const Pt2& d,
                    double eps = 1e-12);

double segment_segment_dist(const Pt2& a, const Pt2& b, const Pt2& c, const Pt2& d);

Pt2 rotate(const Pt2& p, double angle);

// Reflection about the ray from apex in direction angle.
Pt2 reflect_about_ray(const Pt2& p, const Pt2& apex, double angle);

// Closed convex cone with apex, symmetric about bisector_angle, given half-angle.
struct Cone {
    Pt2 apex;
    double bisector_angle = 0.0;
    double half_angle = 0.0;
    bool contains(const Pt2& p, double tol = 1e-12) const;
    // Strictly interior except possibly at the apex.
    bool interior_except_apex(const Pt2& p, double tol = 1e-12) const;
};

}  // namespace dischull

#endif
