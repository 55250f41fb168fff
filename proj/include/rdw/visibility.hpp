#pragma once

// Visibility polygon (isovist) computation by rotational sweep, plus the
// fan decomposition into kernel-anchored triangular slices.

#include <array>
#include <cstdint>

#include "rdw/scene.hpp"

namespace rdw {

struct KernelInObstacle : std::runtime_error {
    explicit KernelInObstacle(const std::string& what) : std::runtime_error(what) {}
};
struct DegenerateEnvironment : std::runtime_error {
    explicit DegenerateEnvironment(const std::string& what) : std::runtime_error(what) {}
};

// One triangle of the fan decomposition. verts[0] is the kernel.
struct Slice {
    std::array<Point2, 3> verts;
    Angle bisector;        // direction bisecting the angular span at the kernel
    double avg_length = 0; // mean of the two kernel-to-rim edge lengths
    double angle_offset = 0; // circular distance from observer heading to bisector, [0, pi]
    double area = 0;
};

struct VisibilityPolygon {
    Point2 kernel;
    std::vector<Point2> verts;  // CCW about the kernel
    std::vector<Slice> slices;

    double area() const {
        double s = 0.0;
        for (std::size_t i = 0, n = verts.size(); i < n; ++i)
            s += cross(verts[i] - kernel, verts[(i + 1) % n] - kernel);
        return 0.5 * s;
    }
};

// Triplets {kernel, v_i, v_i+1} below this cross-product magnitude are
// treated as collinear and produce no slice.
inline constexpr double kCollinearSliceEps = 1e-9;  // m^2

// Fan decomposition of a star-shaped vertex loop about its kernel.
// Degenerate (radially collinear) consecutive pairs are skipped, so the
// remaining slices still tile the polygon exactly.
inline std::vector<Slice> slice_fan(Point2 kernel, const std::vector<Point2>& verts, Angle observer_heading) {
    std::vector<Slice> slices;
    std::size_t n = verts.size();
    if (n < 3) return slices;
    slices.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Point2 a = verts[i];
        Point2 b = verts[(i + 1) % n];
        Point2 ra = a - kernel;
        Point2 rb = b - kernel;
        double cr = cross(ra, rb);
        if (cr < kCollinearSliceEps) continue;  // radial sliver or inverted pair
        double ang_a = std::atan2(ra.y, ra.x);
        double span = Angle::canonical(std::atan2(rb.y, rb.x) - ang_a);
        Slice s;
        s.verts = {kernel, a, b};
        s.bisector = Angle(ang_a + 0.5 * span);
        s.avg_length = 0.5 * (norm(ra) + norm(rb));
        s.angle_offset = circular_diff(observer_heading.rad(), s.bisector.rad());
        s.area = 0.5 * cr;
        slices.push_back(s);
    }
    return slices;
}

inline std::vector<Slice> slice_polygon(const VisibilityPolygon& poly, Angle observer_heading) {
    return slice_fan(poly.kernel, poly.verts, observer_heading);
}

namespace detail {

struct SweepSegment {
    Point2 a, b;       // oriented CCW about the kernel
    double ang_a = 0;  // angle of a (interval start)
    double width = 0;  // CCW angular extent, in (0, pi)
};

// Distance from the kernel along direction u to the supporting line of s,
// valid while the sweep angle lies inside the segment's interval.
inline double sweep_hit_distance(const SweepSegment& s, Point2 kernel, Point2 u) {
    Point2 ab = s.b - s.a;
    Point2 ao = s.a - kernel;
    double denom = cross(u, ab);
    if (std::fabs(denom) <= 1e-12 * norm(ab)) {
        // Glancing: the ray runs along the segment; first contact is the
        // nearer forward endpoint.
        double ta = dot(ao, u);
        double tb = dot(s.b - kernel, u);
        return std::max(0.0, std::min(ta, tb));
    }
    return std::max(0.0, cross(ao, ab) / denom);
}

}  // namespace detail

// Visibility polygon about p: an O(n log n) rotational sweep over the scene
// segment endpoints. Events are the endpoint angles in CCW order; between
// events the nearest segment cannot change (scene segments never cross
// properly), so output vertices are exactly the nearest-hit transitions at
// event angles. Radial jumps emit a vertex pair sharing one angle; the
// slice rule later drops those zero-area wedges.
inline VisibilityPolygon visibility_polygon(const EnvSnapshot& env, Point2 p, Angle observer_heading = Angle(0.0)) {
    if (env.boundary.size() < 3)
        throw DegenerateEnvironment("visibility_polygon: environment has no closed boundary");
    if (point_clearance(env, p) <= 0.0)
        throw KernelInObstacle("visibility_polygon: kernel not strictly inside walkable space");

    using detail::SweepSegment;

    std::vector<SweepSegment> segs;
    segs.reserve(env.segments().size());
    for (const Segment& raw : env.segments()) {
        Point2 a = raw.a, b = raw.b;
        if (cross(a - p, b - p) < 0.0) std::swap(a, b);
        double ang_a = std::atan2(a.y - p.y, a.x - p.x);
        double ang_b = std::atan2(b.y - p.y, b.x - p.x);
        if (ang_a == ang_b) continue;  // radial or degenerate, occludes nothing
        double width = Angle::canonical(ang_b - ang_a);
        if (width < 1e-12 || width >= kPi) continue;
        segs.push_back({a, b, ang_a, width});
    }
    if (segs.empty()) throw DegenerateEnvironment("visibility_polygon: no usable segments");

    // Two events per segment: interval start (insert) and end (remove).
    struct Event {
        double angle;
        std::uint32_t seg;
        bool insert;
        Point2 point;  // generating endpoint, for exact vertex snapping
    };
    std::vector<Event> events;
    events.reserve(segs.size() * 2);
    for (std::uint32_t i = 0; i < segs.size(); ++i) {
        const SweepSegment& s = segs[i];
        events.push_back({Angle::canonical(s.ang_a), i, true, s.a});
        events.push_back({Angle::canonical(s.ang_a + s.width), i, false, s.b});
    }
    std::sort(events.begin(), events.end(), [](const Event& l, const Event& r) { return l.angle < r.angle; });

    // Start the sweep inside the widest event-free gap so no interval
    // boundary coincides with the start angle.
    double best_gap = -1.0, theta0 = 0.0;
    for (std::size_t i = 0; i < events.size(); ++i) {
        double cur = events[i].angle;
        double next = (i + 1 < events.size()) ? events[i + 1].angle : events[0].angle + kTwoPi;
        double gap = next - cur;
        if (gap > best_gap) {
            best_gap = gap;
            theta0 = cur + 0.5 * gap;
        }
    }

    auto interval_contains = [](const SweepSegment& s, double theta) {
        return Angle::canonical(theta - s.ang_a) < s.width;
    };

    std::vector<std::uint32_t> active;
    active.reserve(32);
    for (std::uint32_t i = 0; i < segs.size(); ++i) {
        if (interval_contains(segs[i], theta0)) active.push_back(i);
    }

    constexpr std::uint32_t kNone = 0xffffffffu;
    auto nearest_hit = [&](Point2 u, double* dist_out) -> std::uint32_t {
        double best = std::numeric_limits<double>::infinity();
        std::uint32_t best_id = kNone;
        for (std::uint32_t id : active) {
            double d = detail::sweep_hit_distance(segs[id], p, u);
            if (d < best || (d == best && id < best_id)) {
                best = d;
                best_id = id;
            }
        }
        *dist_out = best;
        return best_id;
    };

    // Rotate the event order so processing starts just past theta0.
    std::size_t first = 0;
    while (first < events.size() && events[first].angle <= Angle::canonical(theta0)) ++first;

    VisibilityPolygon poly;
    poly.kernel = p;
    poly.verts.reserve(segs.size());

    auto push_vertex = [&](Point2 v) {
        if (!poly.verts.empty() && distance(poly.verts.back(), v) <= kVertexEps) return;
        poly.verts.push_back(v);
    };

    std::size_t total = events.size();
    std::size_t idx = 0;
    while (idx < total) {
        std::size_t batch_begin = (first + idx) % total;
        double theta = events[batch_begin].angle;
        std::size_t count = 0;
        while (idx + count < total && events[(first + idx + count) % total].angle == theta) ++count;

        Point2 u = unit_vector(theta);
        double dist_before = 0.0, dist_after = 0.0;
        std::uint32_t id_before = nearest_hit(u, &dist_before);

        for (std::size_t j = 0; j < count; ++j) {
            const Event& e = events[(first + idx + j) % total];
            if (!e.insert) {
                auto it = std::find(active.begin(), active.end(), e.seg);
                if (it != active.end()) active.erase(it);
            }
        }
        for (std::size_t j = 0; j < count; ++j) {
            const Event& e = events[(first + idx + j) % total];
            if (e.insert) active.push_back(e.seg);
        }
        std::uint32_t id_after = nearest_hit(u, &dist_after);

        // Only an actual change of nearest segment marks a polygon vertex;
        // events of occluded segments pass silently.
        if (id_before != kNone && id_after != kNone && id_before != id_after) {
            // Snap transition hits onto exact event endpoints when they match.
            auto snapped = [&](double d) -> Point2 {
                double best_err = std::max(1e-9, 1e-12 * d);
                Point2 out = p + d * u;
                for (std::size_t j = 0; j < count; ++j) {
                    const Event& e = events[(first + idx + j) % total];
                    double err = std::fabs(distance(e.point, p) - d);
                    if (err <= best_err) {
                        best_err = err;
                        out = e.point;
                    }
                }
                return out;
            };
            Point2 hit_before = snapped(dist_before);
            Point2 hit_after = snapped(dist_after);
            if (distance(hit_before, hit_after) <= kVertexEps) {
                push_vertex(hit_before);
            } else {
                push_vertex(hit_before);
                push_vertex(hit_after);
            }
        }

        idx += count;
    }

    // Close the loop: the first and last emitted vertices may coincide.
    if (poly.verts.size() > 1 && distance(poly.verts.front(), poly.verts.back()) <= kVertexEps)
        poly.verts.pop_back();
    if (poly.verts.size() < 3)
        throw DegenerateEnvironment("visibility_polygon: sweep produced no polygon");

    poly.slices = slice_fan(p, poly.verts, observer_heading);
    return poly;
}

}  // namespace rdw
