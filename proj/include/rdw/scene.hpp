#pragma once

// A time-frozen walkable scene: one closed boundary plus obstacle polygons,
// with the flattened segment soup used by clearance and visibility queries.

#include <utility>

#include "rdw/geom.hpp"

namespace rdw {

struct EnvSnapshot {
    Polygon boundary;
    std::vector<Polygon> obstacle_polys;

    EnvSnapshot() = default;
    EnvSnapshot(Polygon bound, std::vector<Polygon> obstacles)
        : boundary(std::move(bound)), obstacle_polys(std::move(obstacles)) {
        rebuild_segments();
    }

    const std::vector<Segment>& segments() const { return segments_; }

    void rebuild_segments() {
        segments_.clear();
        auto add = [this](const Polygon& poly) {
            for (std::size_t i = 0, n = poly.verts.size(); i < n; ++i)
                segments_.push_back({poly.verts[i], poly.verts[(i + 1) % n]});
        };
        add(boundary);
        for (const Polygon& ob : obstacle_polys) add(ob);
    }

    // True while p is inside the boundary and outside every obstacle.
    bool in_walkable_space(Point2 p) const {
        if (!boundary.contains(p, 0.0)) return false;
        for (const Polygon& ob : obstacle_polys) {
            if (ob.contains(p, 0.0) && ob.distance_to_edges(p) > 0.0) return false;
        }
        return true;
    }

private:
    std::vector<Segment> segments_;
};

// Signed clearance: distance from p to the nearest boundary or obstacle
// segment, negated when p sits inside an obstacle or outside the boundary.
inline double point_clearance(const EnvSnapshot& env, Point2 p) {
    double d = std::numeric_limits<double>::infinity();
    for (const Segment& s : env.segments()) d = std::min(d, point_segment_distance(p, s.a, s.b));
    bool violated = !env.boundary.contains(p);
    if (!violated) {
        for (const Polygon& ob : env.obstacle_polys) {
            if (ob.contains(p)) {
                violated = true;
                break;
            }
        }
    }
    return violated ? -d : d;
}

// Free distance along a ray until the first scene segment is hit.
// The scene boundary is closed, so a finite hit always exists for
// interior origins; +inf signals a degenerate query.
inline double ray_distance(const EnvSnapshot& env, Point2 origin, double angle_rad) {
    Point2 dir = unit_vector(angle_rad);
    double best = std::numeric_limits<double>::infinity();
    for (const Segment& s : env.segments())
        best = std::min(best, ray_segment_intersection(origin, dir, s.a, s.b));
    return best;
}

// True iff the capsule of the given radius around segment ab avoids every
// obstacle and stays inside the boundary.
inline bool segment_clear(const EnvSnapshot& env, Point2 a, Point2 b, double inflation) {
    if (point_clearance(env, a) <= inflation) return false;
    if (point_clearance(env, b) <= inflation) return false;
    for (const Segment& s : env.segments()) {
        if (segment_segment_distance(a, b, s.a, s.b) <= inflation) return false;
    }
    return true;
}

}  // namespace rdw
