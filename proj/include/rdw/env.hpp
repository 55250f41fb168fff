#pragma once

// Environment model: a closed boundary with static polygonal obstacles and
// optional dynamic discs whose trajectories are sampled at the simulation
// timestep. snapshot() freezes the scene at a time instant for geometry
// queries, polygonizing each disc as a circumscribing regular 16-gon.

#include <cmath>
#include <string>

#include "rdw/scene.hpp"

namespace rdw {

struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};
struct TimeOutOfRange : std::runtime_error {
    explicit TimeOutOfRange(const std::string& what) : std::runtime_error(what) {}
};

struct DynamicDisc {
    double radius = 0.0;
    std::vector<Point2> trajectory;  // position samples, one per timestep
    double sample_dt = 0.05;
};

struct Environment {
    Polygon boundary;
    std::vector<Polygon> static_obstacles;
    std::vector<DynamicDisc> dynamic_obstacles;

    bool has_dynamic() const { return !dynamic_obstacles.empty(); }
};

struct EnvPair {
    Environment phys;
    Environment virt;
    std::string name;
};

inline constexpr int kDiscPolygonSides = 16;

// Regular 16-gon circumscribing the disc (inradius = disc radius), so the
// polygon fully contains it and occlusion cannot leak through a chord.
inline Polygon polygonize_disc(Point2 center, double radius) {
    Polygon poly;
    poly.verts.reserve(kDiscPolygonSides);
    double circumradius = radius / std::cos(kPi / kDiscPolygonSides);
    for (int i = 0; i < kDiscPolygonSides; ++i) {
        double ang = (2 * i + 1) * kPi / kDiscPolygonSides;
        poly.verts.push_back({center.x + circumradius * std::cos(ang),
                              center.y + circumradius * std::sin(ang)});
    }
    return poly;
}

// Normalizes winding to CCW (first vertex kept first) and checks the
// polygon is usable: >= 3 vertices, simple, no coincident neighbors.
inline void normalize_polygon(Polygon& poly, const char* what) {
    if (poly.verts.size() < 3)
        throw ValidationError(std::string(what) + ": fewer than 3 vertices");
    if (!poly.is_simple())
        throw ValidationError(std::string(what) + ": polygon is not simple");
    if (poly.area() <= 0.0)
        throw ValidationError(std::string(what) + ": polygon has no area");
    if (!poly.is_ccw()) poly.reverse_keep_first();
}

inline void validate_environment(Environment& env, const char* label) {
    normalize_polygon(env.boundary, label);
    for (std::size_t i = 0; i < env.static_obstacles.size(); ++i) {
        Polygon& ob = env.static_obstacles[i];
        std::string what = std::string(label) + " obstacle " + std::to_string(i + 1);
        normalize_polygon(ob, what.c_str());
        for (Point2 v : ob.verts) {
            if (!env.boundary.contains(v))
                throw ValidationError(what + ": vertex outside boundary");
        }
        // Obstacles may touch each other or the boundary but never cross.
        for (std::size_t j = 0; j < i; ++j) {
            const Polygon& other = env.static_obstacles[j];
            for (std::size_t e1 = 0; e1 < ob.verts.size(); ++e1) {
                for (std::size_t e2 = 0; e2 < other.verts.size(); ++e2) {
                    if (segments_intersect_properly(
                            ob.verts[e1], ob.verts[(e1 + 1) % ob.verts.size()],
                            other.verts[e2], other.verts[(e2 + 1) % other.verts.size()]))
                        throw ValidationError(what + ": overlaps obstacle " + std::to_string(j + 1));
                }
            }
        }
    }
    for (const DynamicDisc& disc : env.dynamic_obstacles) {
        if (disc.radius <= 0.0)
            throw ValidationError(std::string(label) + ": dynamic disc radius must be positive");
        for (Point2 pos : disc.trajectory) {
            if (!env.boundary.contains(pos))
                throw ValidationError(std::string(label) + ": dynamic trajectory leaves boundary");
        }
    }
}

// Scene frozen at time t. Static obstacles are copied; each disc is
// replaced by its 16-gon at the nearest trajectory sample.
inline EnvSnapshot snapshot(const Environment& env, double t) {
    std::vector<Polygon> obstacles = env.static_obstacles;
    for (const DynamicDisc& disc : env.dynamic_obstacles) {
        if (disc.trajectory.empty())
            throw TimeOutOfRange("snapshot: dynamic disc has no trajectory");
        double fidx = t / disc.sample_dt;
        long idx = std::lround(fidx);
        if (t < 0.0 || idx < 0 || static_cast<std::size_t>(idx) >= disc.trajectory.size())
            throw TimeOutOfRange("snapshot: t outside trajectory coverage");
        obstacles.push_back(polygonize_disc(disc.trajectory[static_cast<std::size_t>(idx)], disc.radius));
    }
    return EnvSnapshot(env.boundary, std::move(obstacles));
}

}  // namespace rdw
