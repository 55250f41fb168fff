#pragma once

// Per-frame redirection machinery: gain application that maps virtual
// motion onto physical motion, reset detection, and reset execution.

#include <utility>

#include "rdw/scene.hpp"

namespace rdw {

struct GainOutOfBounds : std::runtime_error {
    explicit GainOutOfBounds(const std::string& what) : std::runtime_error(what) {}
};

// Perceptual threshold constants shared by every controller.
inline constexpr double kMinTransGain = 0.86;
inline constexpr double kMaxTransGain = 1.26;
inline constexpr double kMinRotGain = 0.67;
inline constexpr double kMaxRotGain = 1.24;
inline constexpr double kCurvatureRadius = 7.5;                 // meters
inline constexpr double kMaxCurvature = 1.0 / kCurvatureRadius; // 1/meters

inline constexpr double kUserRadius = 0.5;      // meters
inline constexpr double kResetClearance = 0.2;  // meters, measured from the disc edge

struct UserPose {
    Point2 p;
    Angle theta;
};

struct DualState {
    UserPose phys;
    UserPose virt;
};

struct Gains {
    double g_t = 1.0;  // translation, dimensionless
    double g_r = 1.0;  // rotation, dimensionless
    double g_c = 0.0;  // curvature, signed 1/meters (positive turns CCW)

    bool within_thresholds(double tol = 1e-12) const {
        return g_t >= kMinTransGain - tol && g_t <= kMaxTransGain + tol &&
               g_r >= kMinRotGain - tol && g_r <= kMaxRotGain + tol &&
               std::fabs(g_c) <= kMaxCurvature + tol;
    }
};

inline constexpr Gains kIdentityGains{1.0, 1.0, 0.0};

// One frame of virtual motion: walk a distance, turn in place, or stand.
struct VirtMotion {
    enum class Kind { Walk, Turn, Idle };
    Kind kind = Kind::Idle;
    double amount = 0.0;  // walked meters (>= 0) or signed turn radians

    static VirtMotion walk(double distance) { return {Kind::Walk, distance}; }
    static VirtMotion turn(double delta) { return {Kind::Turn, delta}; }
    static VirtMotion idle() { return {Kind::Idle, 0.0}; }
};

struct TraceSample {
    double t = 0.0;
    DualState state;
};

struct PathTrace {
    std::vector<TraceSample> samples;
    std::vector<double> reset_times;
};

// Advances both poses by one frame. The virtual pose follows the motion
// verbatim; the physical pose follows it through the gains. Walking applies
// the curvature rotation as an arc via the midpoint rule (half the rotation
// before the translation, half after), which keeps the chord length at
// exactly d*g_t.
inline DualState apply_frame(const DualState& state, VirtMotion motion, const Gains& gains) {
    if (!gains.within_thresholds())
        throw GainOutOfBounds("apply_frame: gains outside perceptual thresholds");

    DualState next = state;
    switch (motion.kind) {
        case VirtMotion::Kind::Walk: {
            double d = motion.amount;
            next.virt.p = state.virt.p + d * unit_vector(state.virt.theta.rad());
            double phys_d = d * gains.g_t;
            double arc = phys_d * gains.g_c;
            double mid_heading = state.phys.theta.rad() + 0.5 * arc;
            next.phys.p = state.phys.p + phys_d * unit_vector(mid_heading);
            next.phys.theta = Angle(state.phys.theta.rad() + arc);
            break;
        }
        case VirtMotion::Kind::Turn: {
            next.virt.theta = Angle(state.virt.theta.rad() + motion.amount);
            next.phys.theta = Angle(state.phys.theta.rad() + motion.amount * gains.g_r);
            break;
        }
        case VirtMotion::Kind::Idle:
            break;
    }
    return next;
}

// A reset fires when the user disc edge comes within kResetClearance of
// any obstacle. The comparison is strict: exactly 0.7 m of point clearance
// does not trigger.
inline bool needs_reset(const EnvSnapshot& env_phys, Point2 p_phys,
                        double user_radius = kUserRadius, double reset_clearance = kResetClearance) {
    return point_clearance(env_phys, p_phys) < user_radius + reset_clearance;
}

enum class ResetStrategy {
    ResetToCenter,  // reorient toward the boundary centroid
    MaxClearance,   // reorient along the most open sampled direction
};

inline constexpr int kResetHeadingSamples = 72;

namespace detail {

inline double max_clearance_heading(const EnvSnapshot& env, Point2 p) {
    // Direction of the offending obstacle: toward the nearest segment point.
    double best_d = std::numeric_limits<double>::infinity();
    Point2 nearest = p;
    for (const Segment& s : env.segments()) {
        Point2 c = closest_point_on_segment(p, s.a, s.b);
        double d = distance(p, c);
        if (d < best_d) {
            best_d = d;
            nearest = c;
        }
    }
    Point2 threat_dir = normalized(nearest - p);

    // Candidate headings restricted to the half-plane facing away from the
    // threat; fall back to the unrestricted argmax if that filters all.
    double best_score = -1.0, best_heading = 0.0;
    bool found = false;
    for (int pass = 0; pass < 2 && !found; ++pass) {
        for (int i = 0; i < kResetHeadingSamples; ++i) {
            double heading = kTwoPi * i / kResetHeadingSamples;
            if (pass == 0 && dot(unit_vector(heading), threat_dir) > 0.0) continue;
            double score = ray_distance(env, p, heading);
            if (score > best_score) {
                best_score = score;
                best_heading = heading;
                found = true;
            }
        }
    }
    return best_heading;
}

}  // namespace detail

// Executes a reset: the user turns a full 360 degrees in the virtual world
// (net virtual heading unchanged) while the physical heading is set to the
// strategy's target. Positions never change. Returns the new state and the
// simulated duration, 2*pi over the virtual turn rate.
inline std::pair<DualState, double> execute_reset(const DualState& state, ResetStrategy strategy,
                                                  const EnvSnapshot& env_phys,
                                                  double turn_rate = kPi / 2.0) {
    DualState next = state;
    double target;
    if (strategy == ResetStrategy::ResetToCenter) {
        Point2 center = env_phys.boundary.centroid();
        Point2 to_center = center - state.phys.p;
        target = norm(to_center) > 0.0 ? std::atan2(to_center.y, to_center.x)
                                       : detail::max_clearance_heading(env_phys, state.phys.p);
    } else {
        target = detail::max_clearance_heading(env_phys, state.phys.p);
    }
    next.phys.theta = Angle(target);
    return {next, kTwoPi / turn_rate};
}

}  // namespace rdw
