#pragma once

// Per-frame gain selection. One common entry point (controller_step) with
// five policies: the visibility-polygon alignment controller, an
// alignment baseline on ray-cast clearance ratios (arc), an artificial
// potential field (apf), steer-to-center (s2c), and a no-op (none).

#include <optional>
#include <string>

#include "rdw/redirect.hpp"
#include "rdw/visibility.hpp"

namespace rdw {

enum class ControllerKind { VisPoly, Arc, Apf, S2c, None };

inline const char* controller_name(ControllerKind kind) {
    switch (kind) {
        case ControllerKind::VisPoly: return "vis-poly";
        case ControllerKind::Arc: return "arc";
        case ControllerKind::Apf: return "apf";
        case ControllerKind::S2c: return "s2c";
        case ControllerKind::None: return "none";
    }
    return "?";
}

inline std::optional<ControllerKind> parse_controller(const std::string& name) {
    if (name == "vis-poly") return ControllerKind::VisPoly;
    if (name == "arc") return ControllerKind::Arc;
    if (name == "apf") return ControllerKind::Apf;
    if (name == "s2c") return ControllerKind::S2c;
    if (name == "none") return ControllerKind::None;
    return std::nullopt;
}

struct ControllerContext {
    DualState state;
    VirtMotion motion;
    const EnvSnapshot* phys_snapshot = nullptr;
    const EnvSnapshot* virt_snapshot = nullptr;
};

struct ControllerDecision {
    Gains gains;
    // Optional introspection for traces and tests.
    int virt_slice = -1;
    int phys_slice = -1;
    double theta_delta = 0.0;
};

// Headings this close to the steering target count as aligned: curvature
// stays off and rotation gain stays neutral.
inline constexpr double kAlignedTol = 1e-6;

// The active virtual slice: bisector closest to the walking direction.
// Ties prefer the larger area, then the lower index.
inline std::size_t vis_active_slice_index(const VisibilityPolygon& poly, Angle heading) {
    std::size_t best = 0;
    double best_off = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.slices.size(); ++i) {
        const Slice& s = poly.slices[i];
        double off = circular_diff(s.bisector.rad(), heading.rad());
        if (off < best_off || (off == best_off && s.area > poly.slices[best].area)) {
            best_off = off;
            best = i;
        }
    }
    return best;
}

inline const Slice& vis_active_slice(const VisibilityPolygon& poly, Angle heading) {
    return poly.slices[vis_active_slice_index(poly, heading)];
}

// The physical slice most similar to the active virtual slice: among
// slices whose bisector is within 90 degrees of the physical heading,
// minimize the area difference. If that set is empty, take the slice
// closest to the heading. Ties prefer the smaller heading offset, then
// the lower index.
inline std::size_t vis_most_similar_slice_index(const VisibilityPolygon& poly, Angle heading,
                                                const Slice& virt_slice) {
    std::size_t best = poly.slices.size();
    double best_key = std::numeric_limits<double>::infinity();
    double best_off = std::numeric_limits<double>::infinity();
    bool have_eligible = false;
    for (std::size_t i = 0; i < poly.slices.size(); ++i) {
        double off = circular_diff(heading.rad(), poly.slices[i].bisector.rad());
        if (off >= kPi / 2.0) continue;
        have_eligible = true;
        double key = std::fabs(poly.slices[i].area - virt_slice.area);
        if (key < best_key || (key == best_key && off < best_off)) {
            best_key = key;
            best_off = off;
            best = i;
        }
    }
    if (!have_eligible) {
        for (std::size_t i = 0; i < poly.slices.size(); ++i) {
            double off = circular_diff(heading.rad(), poly.slices[i].bisector.rad());
            if (off < best_off) {
                best_off = off;
                best = i;
            }
        }
    }
    return best;
}

inline const Slice& vis_most_similar_slice(const VisibilityPolygon& poly, Angle heading,
                                           const Slice& virt_slice) {
    return poly.slices[vis_most_similar_slice_index(poly, heading, virt_slice)];
}

namespace detail {

// Gain rules for steering the physical heading by the signed error
// theta_delta (positive = target lies counterclockwise). Walking curves
// toward the target at the curvature threshold; turning scales the
// rotation up when it closes the error and down when it widens it.
inline Gains steering_gains(double theta_delta, VirtMotion motion, double g_t_walk) {
    Gains gains = kIdentityGains;
    switch (motion.kind) {
        case VirtMotion::Kind::Walk:
            gains.g_t = g_t_walk;
            if (std::fabs(theta_delta) >= kAlignedTol)
                gains.g_c = (theta_delta > 0.0 ? kMaxCurvature : -kMaxCurvature);
            break;
        case VirtMotion::Kind::Turn:
            if (std::fabs(theta_delta) >= kAlignedTol)
                gains.g_r = (motion.amount > 0.0) == (theta_delta > 0.0) ? kMaxRotGain : kMinRotGain;
            break;
        case VirtMotion::Kind::Idle:
            break;
    }
    return gains;
}

}  // namespace detail

// Gain computation for the visibility controller. The steering error is
// the mismatch of relative bearings: how far the chosen physical slice
// sits from the physical heading, minus how far the active virtual slice
// sits from the virtual heading. When the two environments look identical
// from the user's poses, the error is exactly zero and the controller is
// neutral. The translation gain stretches walked distance by the ratio of
// average slice lengths.
inline Gains vis_gains(const Slice& virt_slice, const Slice& phys_slice, Angle theta_phys,
                       Angle theta_virt, VirtMotion motion, double* theta_delta_out = nullptr) {
    double bearing_phys = signed_angle_diff(phys_slice.bisector.rad(), theta_phys.rad());
    double bearing_virt = signed_angle_diff(virt_slice.bisector.rad(), theta_virt.rad());
    double theta_delta = signed_angle_diff(bearing_phys, bearing_virt);
    if (theta_delta_out) *theta_delta_out = theta_delta;

    double g_t = 1.0;
    if (motion.kind == VirtMotion::Kind::Walk) {
        double ratio = phys_slice.avg_length / virt_slice.avg_length;
        g_t = std::clamp(ratio, kMinTransGain, kMaxTransGain);
    }
    return detail::steering_gains(theta_delta, motion, g_t);
}

namespace detail {

inline ControllerDecision step_vis_poly(const ControllerContext& ctx) {
    VisibilityPolygon p_phys =
        visibility_polygon(*ctx.phys_snapshot, ctx.state.phys.p, ctx.state.phys.theta);
    VisibilityPolygon p_virt =
        visibility_polygon(*ctx.virt_snapshot, ctx.state.virt.p, ctx.state.virt.theta);

    ControllerDecision decision;
    std::size_t vi = vis_active_slice_index(p_virt, ctx.state.virt.theta);
    std::size_t pi = vis_most_similar_slice_index(p_phys, ctx.state.phys.theta, p_virt.slices[vi]);
    decision.virt_slice = static_cast<int>(vi);
    decision.phys_slice = static_cast<int>(pi);
    decision.gains = vis_gains(p_virt.slices[vi], p_phys.slices[pi], ctx.state.phys.theta,
                               ctx.state.virt.theta, ctx.motion, &decision.theta_delta);
    return decision;
}

inline ControllerDecision step_s2c(const ControllerContext& ctx) {
    ControllerDecision decision;
    decision.gains = kIdentityGains;
    Point2 center = ctx.phys_snapshot->boundary.centroid();
    Point2 to_center = center - ctx.state.phys.p;
    if (norm(to_center) < 0.5) return decision;  // close enough, no steering
    double theta_delta = signed_angle(unit_vector(ctx.state.phys.theta.rad()), to_center);
    decision.theta_delta = theta_delta;
    decision.gains = steering_gains(theta_delta, ctx.motion, 1.0);
    return decision;
}

inline ControllerDecision step_apf(const ControllerContext& ctx) {
    ControllerDecision decision;
    decision.gains = kIdentityGains;
    // Repulsive sum over every scene segment: unit vector away from the
    // nearest point, weighted by inverse distance.
    Point2 force{0.0, 0.0};
    for (const Segment& s : ctx.phys_snapshot->segments()) {
        Point2 nearest = closest_point_on_segment(ctx.state.phys.p, s.a, s.b);
        Point2 away = ctx.state.phys.p - nearest;
        double d = norm(away);
        if (d < 1e-9) continue;
        force = force + (1.0 / (d * d)) * away;
    }
    if (norm(force) < 1e-9) return decision;  // balanced field
    double theta_delta = signed_angle(unit_vector(ctx.state.phys.theta.rad()), force);
    decision.theta_delta = theta_delta;
    decision.gains = steering_gains(theta_delta, ctx.motion, 1.0);
    return decision;
}

inline ControllerDecision step_arc(const ControllerContext& ctx) {
    double th_p = ctx.state.phys.theta.rad();
    double th_v = ctx.state.virt.theta.rad();
    Point2 pp = ctx.state.phys.p;
    Point2 pv = ctx.state.virt.p;
    double ahead_p = ray_distance(*ctx.phys_snapshot, pp, th_p);
    double left_p = ray_distance(*ctx.phys_snapshot, pp, th_p + kPi / 2.0);
    double right_p = ray_distance(*ctx.phys_snapshot, pp, th_p - kPi / 2.0);
    double ahead_v = ray_distance(*ctx.virt_snapshot, pv, th_v);
    double left_v = ray_distance(*ctx.virt_snapshot, pv, th_v + kPi / 2.0);
    double right_v = ray_distance(*ctx.virt_snapshot, pv, th_v - kPi / 2.0);

    double ratio_left = left_p / left_v;
    double ratio_right = right_p / right_v;
    // Steer toward the side with relatively more physical space.
    double theta_delta = 0.0;
    if (ratio_left > ratio_right)
        theta_delta = kPi / 2.0;
    else if (ratio_right > ratio_left)
        theta_delta = -kPi / 2.0;

    ControllerDecision decision;
    decision.theta_delta = theta_delta;
    double g_t_walk = std::clamp(ahead_p / ahead_v, kMinTransGain, kMaxTransGain);
    decision.gains = steering_gains(theta_delta, ctx.motion, g_t_walk);
    return decision;
}

}  // namespace detail

inline ControllerDecision controller_step(ControllerKind kind, const ControllerContext& ctx) {
    switch (kind) {
        case ControllerKind::VisPoly: return detail::step_vis_poly(ctx);
        case ControllerKind::Arc: return detail::step_arc(ctx);
        case ControllerKind::Apf: return detail::step_apf(ctx);
        case ControllerKind::S2c: return detail::step_s2c(ctx);
        case ControllerKind::None: break;
    }
    ControllerDecision decision;
    decision.gains = kIdentityGains;
    return decision;
}

}  // namespace rdw
