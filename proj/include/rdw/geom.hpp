#pragma once

// 2D geometry primitives for the walking simulation: points, angles,
// polygons, clearance queries and ray casts against polygonal scenes.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rdw {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;
inline constexpr double kPi = 3.1415926535897932384626433832795;

// Coincidence tolerance for vertices, in meters.
inline constexpr double kVertexEps = 1e-9;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
inline Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
inline Point2 operator*(double s, Point2 a) { return {s * a.x, s * a.y}; }
inline Point2 operator*(Point2 a, double s) { return {s * a.x, s * a.y}; }
inline bool operator==(Point2 a, Point2 b) { return a.x == b.x && a.y == b.y; }

inline double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 a) { return std::hypot(a.x, a.y); }
inline double norm_sq(Point2 a) { return a.x * a.x + a.y * a.y; }
inline double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

inline Point2 normalized(Point2 a) {
    double n = norm(a);
    return n > 0.0 ? Point2{a.x / n, a.y / n} : Point2{0.0, 0.0};
}

inline Point2 unit_vector(double angle_rad) { return {std::cos(angle_rad), std::sin(angle_rad)}; }

// Signed angle from u to v in (-pi, pi]; positive when v is CCW of u.
inline double signed_angle(Point2 u, Point2 v) { return std::atan2(cross(u, v), dot(u, v)); }

inline bool finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Heading/bearing value kept canonical in [0, 2pi), CCW from +x.
class Angle {
public:
    Angle() = default;
    explicit Angle(double radians) : value_(canonical(radians)) {}

    double rad() const { return value_; }

    static double canonical(double radians) {
        double r = std::fmod(radians, kTwoPi);
        if (r < 0.0) r += kTwoPi;
        if (r >= kTwoPi) r = 0.0;
        return r;
    }

private:
    double value_ = 0.0;
};

// Absolute angular distance on the circle, in [0, pi].
inline double circular_diff(double a, double b) {
    double d = std::fabs(std::fmod(a - b, kTwoPi));
    return d > kPi ? kTwoPi - d : d;
}
inline double circular_diff(Angle a, Angle b) { return circular_diff(a.rad(), b.rad()); }

// Signed angular difference a - b wrapped to (-pi, pi].
inline double signed_angle_diff(double a, double b) {
    double d = std::fmod(a - b, kTwoPi);
    if (d <= -kPi) d += kTwoPi;
    if (d > kPi) d -= kTwoPi;
    return d;
}

struct Segment {
    Point2 a;
    Point2 b;
};

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    Point2 ab = b - a;
    double len_sq = norm_sq(ab);
    if (len_sq == 0.0) return distance(p, a);
    double t = dot(p - a, ab) / len_sq;
    if (t <= 0.0) return distance(p, a);
    if (t >= 1.0) return distance(p, b);
    return distance(p, Point2{a.x + t * ab.x, a.y + t * ab.y});
}

inline Point2 closest_point_on_segment(Point2 p, Point2 a, Point2 b) {
    Point2 ab = b - a;
    double len_sq = norm_sq(ab);
    if (len_sq == 0.0) return a;
    double t = std::clamp(dot(p - a, ab) / len_sq, 0.0, 1.0);
    return {a.x + t * ab.x, a.y + t * ab.y};
}

// Orientation of the triplet (a, b, c): >0 CCW, <0 CW, 0 collinear.
inline double orient(Point2 a, Point2 b, Point2 c) {
    return cross(b - a, c - a);
}

// True when segments ab and cd intersect, endpoints included.
inline bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d) {
    double o1 = orient(a, b, c);
    double o2 = orient(a, b, d);
    double o3 = orient(c, d, a);
    double o4 = orient(c, d, b);
    if (((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0)
        return true;
    auto on = [](Point2 p, Point2 q, Point2 r) {
        return orient(p, q, r) == 0.0 && r.x >= std::min(p.x, q.x) && r.x <= std::max(p.x, q.x) &&
               r.y >= std::min(p.y, q.y) && r.y <= std::max(p.y, q.y);
    };
    return on(a, b, c) || on(a, b, d) || on(c, d, a) || on(c, d, b);
}

// True only for a transversal crossing at interior points of both segments.
inline bool segments_intersect_properly(Point2 a, Point2 b, Point2 c, Point2 d) {
    double o1 = orient(a, b, c);
    double o2 = orient(a, b, d);
    double o3 = orient(c, d, a);
    double o4 = orient(c, d, b);
    return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0)) && o1 != 0 && o2 != 0 && o3 != 0 && o4 != 0;
}

inline double segment_segment_distance(Point2 a, Point2 b, Point2 c, Point2 d) {
    if (segments_intersect(a, b, c, d)) return 0.0;
    return std::min(std::min(point_segment_distance(a, c, d), point_segment_distance(b, c, d)),
                    std::min(point_segment_distance(c, a, b), point_segment_distance(d, a, b)));
}

// Distance along ray (origin, dir) to segment ab, or +inf when missed.
// Grazing hits at segment endpoints count as hits.
inline double ray_segment_intersection(Point2 origin, Point2 dir, Point2 a, Point2 b) {
    Point2 ab = b - a;
    double denom = cross(dir, ab);
    Point2 ao = a - origin;
    if (denom == 0.0) {
        // Parallel: hits only when collinear; nearest forward endpoint wins.
        if (cross(ao, dir) != 0.0) return std::numeric_limits<double>::infinity();
        double ta = dot(ao, dir);
        double tb = dot(b - origin, dir);
        double t = std::numeric_limits<double>::infinity();
        if (ta >= 0.0) t = ta;
        if (tb >= 0.0) t = std::min(t, tb);
        return t;
    }
    double t = cross(ao, ab) / denom;
    double s = cross(ao, dir) / denom;
    if (t >= 0.0 && s >= -1e-12 && s <= 1.0 + 1e-12) return t;
    return std::numeric_limits<double>::infinity();
}

struct Polygon {
    std::vector<Point2> verts;

    std::size_t size() const { return verts.size(); }
    bool empty() const { return verts.empty(); }

    // Signed area, positive for CCW winding.
    double signed_area() const {
        double s = 0.0;
        for (std::size_t i = 0, n = verts.size(); i < n; ++i) {
            Point2 p = verts[i];
            Point2 q = verts[(i + 1) % n];
            s += cross(p, q);
        }
        return 0.5 * s;
    }

    double area() const { return std::fabs(signed_area()); }
    bool is_ccw() const { return signed_area() > 0.0; }

    // Reverses winding while keeping the first vertex first.
    void reverse_keep_first() {
        if (verts.size() > 1) std::reverse(verts.begin() + 1, verts.end());
    }

    // Crossing-number test; points on an edge count as inside.
    bool contains(Point2 p, double edge_tol = kVertexEps) const {
        std::size_t n = verts.size();
        for (std::size_t i = 0; i < n; ++i) {
            if (point_segment_distance(p, verts[i], verts[(i + 1) % n]) <= edge_tol) return true;
        }
        bool inside = false;
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            Point2 a = verts[i];
            Point2 b = verts[j];
            if ((a.y > p.y) != (b.y > p.y)) {
                double xcross = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
                if (p.x < xcross) inside = !inside;
            }
        }
        return inside;
    }

    double distance_to_edges(Point2 p) const {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0, n = verts.size(); i < n; ++i)
            best = std::min(best, point_segment_distance(p, verts[i], verts[(i + 1) % n]));
        return best;
    }

    // Area centroid (vertex mean for degenerate zero-area input).
    Point2 centroid() const {
        double a2 = 0.0, cx = 0.0, cy = 0.0;
        for (std::size_t i = 0, n = verts.size(); i < n; ++i) {
            Point2 p = verts[i];
            Point2 q = verts[(i + 1) % n];
            double w = cross(p, q);
            a2 += w;
            cx += (p.x + q.x) * w;
            cy += (p.y + q.y) * w;
        }
        if (std::fabs(a2) < 1e-12) {
            Point2 m{0.0, 0.0};
            for (Point2 v : verts) m = m + v;
            return verts.empty() ? m : Point2{m.x / verts.size(), m.y / verts.size()};
        }
        return {cx / (3.0 * a2), cy / (3.0 * a2)};
    }

    bool is_simple() const {
        std::size_t n = verts.size();
        if (n < 3) return false;
        for (std::size_t i = 0; i < n; ++i) {
            if (distance(verts[i], verts[(i + 1) % n]) < kVertexEps) return false;
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
                Point2 a = verts[i], b = verts[(i + 1) % n];
                Point2 c = verts[j], d = verts[(j + 1) % n];
                if (adjacent) {
                    if (segments_intersect_properly(a, b, c, d)) return false;
                } else if (segments_intersect(a, b, c, d)) {
                    return false;
                }
            }
        }
        return true;
    }
};

}  // namespace rdw
