#pragma once

// Virtual path generation: the random-waypoint model for static scenes and
// a reciprocal-collision-avoidance generator producing collision-free
// trajectories for the user and four dynamic discs in dynamic scenes.

#include <array>

#include "rdw/env.hpp"
#include "rdw/rng.hpp"

namespace rdw {

struct SamplingExhausted : std::runtime_error {
    explicit SamplingExhausted(const std::string& what) : std::runtime_error(what) {}
};

// ---------------------------------------------------------------------------
// Random-waypoint model
// ---------------------------------------------------------------------------

struct WaypointParams {
    double min_step = 2.0;          // meters between consecutive waypoints
    double max_step = 8.0;
    double start_clearance = 0.7;   // start pose sampling margin
    double segment_inflation = 0.5; // capsule radius for segment feasibility
    int max_rejections = 100000;
};

struct WaypointPath {
    std::vector<Point2> waypoints;

    double total_length() const {
        double len = 0.0;
        for (std::size_t i = 1; i < waypoints.size(); ++i)
            len += distance(waypoints[i - 1], waypoints[i]);
        return len;
    }
};

inline Point2 sample_free_point(const EnvSnapshot& scene, Rng& rng, double clearance,
                                int max_rejections, int* rejections = nullptr) {
    Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point2 hi{-lo.x, -lo.y};
    for (Point2 v : scene.boundary.verts) {
        lo.x = std::min(lo.x, v.x);
        lo.y = std::min(lo.y, v.y);
        hi.x = std::max(hi.x, v.x);
        hi.y = std::max(hi.y, v.y);
    }
    int rejected = rejections ? *rejections : 0;
    while (rejected < max_rejections) {
        Point2 candidate = rng.point_in_box(lo, hi);
        if (point_clearance(scene, candidate) > clearance) {
            if (rejections) *rejections = rejected;
            return candidate;
        }
        ++rejected;
    }
    throw SamplingExhausted("sample_free_point: no free point found");
}

// Waypoints chain outward from a start pose: each step draws a distance in
// [min_step, max_step] and a turn relative to the previous segment, and is
// accepted when the inflated segment stays clear. Generation stops once
// the cumulative length reaches target_length.
inline WaypointPath generate_waypoint_path(const Environment& env_virt, std::uint64_t rng_seed,
                                           double target_length,
                                           const WaypointParams& params = {}) {
    EnvSnapshot scene(env_virt.boundary, env_virt.static_obstacles);
    Rng rng(rng_seed);

    WaypointPath path;
    int rejected = 0;
    path.waypoints.push_back(
        sample_free_point(scene, rng, params.start_clearance, params.max_rejections, &rejected));

    double length = 0.0;
    double prev_dir = rng.angle();
    bool first = true;
    while (length < target_length) {
        if (rejected >= params.max_rejections)
            throw SamplingExhausted("generate_waypoint_path: rejection budget exhausted");
        double step = rng.uniform(params.min_step, params.max_step);
        double dir = first ? rng.angle() : prev_dir + rng.uniform(-kPi, kPi);
        Point2 prev = path.waypoints.back();
        Point2 candidate = prev + step * unit_vector(dir);
        if (!segment_clear(scene, prev, candidate, params.segment_inflation)) {
            ++rejected;
            continue;
        }
        path.waypoints.push_back(candidate);
        length += step;
        prev_dir = dir;
        first = false;
    }
    return path;
}

// ---------------------------------------------------------------------------
// Optimal reciprocal collision avoidance
// ---------------------------------------------------------------------------

struct Agent {
    Point2 position;
    Point2 velocity;
    double radius = 0.5;
    double pref_speed = 1.0;
    Point2 goal;
};

// A velocity-space half-plane constraint; feasible velocities lie on the
// left of the directed line through `point` along `direction`.
struct OrcaLine {
    Point2 point;
    Point2 direction;
};

namespace detail {

inline constexpr double kOrcaEps = 1e-10;

inline bool linear_program1(const std::vector<OrcaLine>& lines, std::size_t line_no, double radius,
                            Point2 opt_velocity, bool direction_opt, Point2& result) {
    const OrcaLine& ln = lines[line_no];
    double dot_product = dot(ln.point, ln.direction);
    double discriminant = dot_product * dot_product + radius * radius - norm_sq(ln.point);
    if (discriminant < 0.0) return false;  // max-speed circle misses this line

    double sqrt_disc = std::sqrt(discriminant);
    double t_left = -dot_product - sqrt_disc;
    double t_right = -dot_product + sqrt_disc;

    for (std::size_t i = 0; i < line_no; ++i) {
        double denominator = cross(ln.direction, lines[i].direction);
        double numerator = cross(lines[i].direction, ln.point - lines[i].point);
        if (std::fabs(denominator) <= kOrcaEps) {
            if (numerator < 0.0) return false;  // parallel and fully infeasible
            continue;
        }
        double t = numerator / denominator;
        if (denominator >= 0.0)
            t_right = std::min(t_right, t);
        else
            t_left = std::max(t_left, t);
        if (t_left > t_right) return false;
    }

    double t;
    if (direction_opt) {
        t = dot(opt_velocity, ln.direction) > 0.0 ? t_right : t_left;
    } else {
        t = std::clamp(dot(ln.direction, opt_velocity - ln.point), t_left, t_right);
    }
    result = ln.point + t * ln.direction;
    return true;
}

inline std::size_t linear_program2(const std::vector<OrcaLine>& lines, double radius,
                                   Point2 opt_velocity, bool direction_opt, Point2& result) {
    if (direction_opt) {
        result = radius * opt_velocity;  // opt_velocity is a unit direction
    } else if (norm_sq(opt_velocity) > radius * radius) {
        result = radius * normalized(opt_velocity);
    } else {
        result = opt_velocity;
    }
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (cross(lines[i].direction, lines[i].point - result) > 0.0) {
            Point2 temp = result;
            if (!linear_program1(lines, i, radius, opt_velocity, direction_opt, result)) {
                result = temp;
                return i;
            }
        }
    }
    return lines.size();
}

// Relaxation pass for infeasible systems: keep the first num_fixed lines
// hard and minimize the worst violation of the rest.
inline void linear_program3(const std::vector<OrcaLine>& lines, std::size_t num_fixed,
                            std::size_t begin_line, double radius, Point2& result) {
    double dist = 0.0;
    for (std::size_t i = begin_line; i < lines.size(); ++i) {
        if (cross(lines[i].direction, lines[i].point - result) > dist) {
            std::vector<OrcaLine> proj(lines.begin(),
                                       lines.begin() + static_cast<std::ptrdiff_t>(num_fixed));
            for (std::size_t j = num_fixed; j < i; ++j) {
                OrcaLine ln;
                double det = cross(lines[i].direction, lines[j].direction);
                if (std::fabs(det) <= kOrcaEps) {
                    if (dot(lines[i].direction, lines[j].direction) > 0.0) continue;
                    ln.point = 0.5 * (lines[i].point + lines[j].point);
                } else {
                    ln.point = lines[i].point +
                               (cross(lines[j].direction, lines[i].point - lines[j].point) / det) *
                                   lines[i].direction;
                }
                ln.direction = normalized(lines[j].direction - lines[i].direction);
                proj.push_back(ln);
            }
            Point2 temp = result;
            Point2 opt{-lines[i].direction.y, lines[i].direction.x};
            if (linear_program2(proj, radius, opt, true, result) < proj.size()) {
                result = temp;
            }
            dist = cross(lines[i].direction, lines[i].point - result);
        }
    }
}

// The half-plane induced by one neighbor: the truncated velocity obstacle
// for horizon tau, displaced by half of the correction u (each agent takes
// half the responsibility).
inline OrcaLine orca_line_for_neighbor(const Agent& self, const Agent& other, double tau, double dt,
                                       double radius_slack = 0.0) {
    Point2 rel_pos = other.position - self.position;
    Point2 rel_vel = self.velocity - other.velocity;
    double dist_sq = norm_sq(rel_pos);
    double combined_r = self.radius + other.radius + radius_slack;
    double combined_r_sq = combined_r * combined_r;

    OrcaLine line;
    Point2 u;
    if (dist_sq > combined_r_sq) {
        Point2 w = rel_vel - (1.0 / tau) * rel_pos;
        double w_len_sq = norm_sq(w);
        double dot1 = dot(w, rel_pos);
        if (dot1 < 0.0 && dot1 * dot1 > combined_r_sq * w_len_sq) {
            // Project on the cut-off circle.
            double w_len = std::sqrt(w_len_sq);
            Point2 unit_w = (1.0 / w_len) * w;
            line.direction = {unit_w.y, -unit_w.x};
            u = (combined_r / tau - w_len) * unit_w;
        } else {
            // Project on the nearer cone leg.
            double leg = std::sqrt(dist_sq - combined_r_sq);
            if (cross(rel_pos, w) > 0.0) {
                line.direction = (1.0 / dist_sq) * Point2{rel_pos.x * leg - rel_pos.y * combined_r,
                                                          rel_pos.x * combined_r + rel_pos.y * leg};
            } else {
                line.direction = (-1.0 / dist_sq) * Point2{rel_pos.x * leg + rel_pos.y * combined_r,
                                                           -rel_pos.x * combined_r + rel_pos.y * leg};
            }
            u = dot(rel_vel, line.direction) * line.direction - rel_vel;
        }
    } else {
        // Already overlapping: push apart on the dt horizon.
        Point2 w = rel_vel - (1.0 / dt) * rel_pos;
        double w_len = norm(w);
        Point2 unit_w;
        if (w_len > kOrcaEps) {
            unit_w = (1.0 / w_len) * w;
        } else {
            // Coincident velocities: separate along the center line.
            unit_w = dist_sq > 0.0 ? -1.0 * normalized(rel_pos) : Point2{1.0, 0.0};
            w_len = 0.0;
        }
        line.direction = {unit_w.y, -unit_w.x};
        u = (combined_r / dt - w_len) * unit_w;
    }
    line.point = self.velocity + 0.5 * u;
    return line;
}

}  // namespace detail

// New velocity for `self`: the velocity closest to the preferred velocity
// (unit vector to goal times pref_speed) that satisfies every neighbor's
// reciprocal half-plane and any extra hard constraints (walls), capped at
// 1.5x the preferred speed. Infeasible systems fall back to the safest
// velocity with the hard constraints kept.
inline Point2 orca_velocity(const Agent& self, const std::vector<Agent>& neighbors, double tau,
                            double dt, const std::vector<OrcaLine>& wall_lines = {},
                            double radius_slack = 0.0) {
    std::vector<OrcaLine> lines = wall_lines;
    std::size_t num_fixed = lines.size();
    for (const Agent& other : neighbors)
        lines.push_back(detail::orca_line_for_neighbor(self, other, tau, dt, radius_slack));

    Point2 to_goal = self.goal - self.position;
    Point2 pref_velocity =
        norm(to_goal) > 1e-12 ? self.pref_speed * normalized(to_goal) : Point2{0.0, 0.0};
    double max_speed = 1.5 * self.pref_speed;

    Point2 result;
    std::size_t fail = detail::linear_program2(lines, max_speed, pref_velocity, false, result);
    if (fail < lines.size()) detail::linear_program3(lines, num_fixed, fail, max_speed, result);
    return result;
}

// Velocity-space wall constraints: for each nearby boundary segment, cap
// the approach speed so the gap (distance minus radius) cannot close
// within the horizon.
inline std::vector<OrcaLine> boundary_wall_lines(const Polygon& boundary, Point2 position,
                                                 double radius, double tau, double reach) {
    std::vector<OrcaLine> lines;
    for (std::size_t i = 0, n = boundary.verts.size(); i < n; ++i) {
        Point2 a = boundary.verts[i];
        Point2 b = boundary.verts[(i + 1) % n];
        Point2 nearest = closest_point_on_segment(position, a, b);
        Point2 away = position - nearest;
        double d = norm(away);
        if (d > reach) continue;
        Point2 n_hat = d > 1e-12 ? (1.0 / d) * away : Point2{0.0, 0.0};
        if (d <= 1e-12) continue;
        double allowed = (d - radius - 0.01) / tau;  // may be negative: forces retreat
        lines.push_back({-allowed * n_hat, {n_hat.y, -n_hat.x}});
    }
    return lines;
}

// ---------------------------------------------------------------------------
// Dynamic scenario generation
// ---------------------------------------------------------------------------

struct TimedPose {
    double t = 0.0;
    Point2 p;
    double theta = 0.0;
};

struct DynamicScenario {
    double dt = 0.05;
    double duration = 0.0;
    std::vector<TimedPose> user;                    // includes the t=0 sample
    std::array<std::vector<Point2>, 4> obstacles;   // sampled at the same times

    double user_length() const {
        double len = 0.0;
        for (std::size_t i = 1; i < user.size(); ++i) len += distance(user[i - 1].p, user[i].p);
        return len;
    }
};

struct DynamicParams {
    double dt = 0.05;
    double tau = 2.0;            // seconds of collision horizon
    double pref_speed = 1.0;
    double agent_radius = 0.5;
    double goal_tolerance = 0.3;  // goal reached within this distance
    double start_clearance = 0.7;
    double heading_rate = kPi / 2.0;  // user heading cap, rad/s
    double radius_slack = 0.05;       // extra agent-agent margin inside the solver
    int max_rejections = 100000;
};

// Five agents (the user plus four discs) wander between random goals under
// reciprocal collision avoidance inside the boundary. The user's heading
// turns at most heading_rate toward its avoidance velocity and advances by
// the component of that velocity along the heading, so the recorded
// trajectory is followable by the simulated walker.
inline DynamicScenario generate_dynamic_scenario(const Environment& env_virt,
                                                 std::uint64_t rng_seed, double duration,
                                                 const DynamicParams& params = {}) {
    EnvSnapshot scene(env_virt.boundary, env_virt.static_obstacles);
    Rng rng(rng_seed);

    constexpr int kAgents = 5;  // index 0 is the user
    std::array<Agent, kAgents> agents;
    int rejected = 0;
    for (int i = 0; i < kAgents; ++i) {
        while (true) {
            Point2 candidate =
                sample_free_point(scene, rng, params.start_clearance, params.max_rejections, &rejected);
            bool clear = true;
            for (int j = 0; j < i; ++j) {
                if (distance(candidate, agents[j].position) <
                    2.0 * params.agent_radius + 2.0 * params.radius_slack) {
                    clear = false;
                    break;
                }
            }
            if (clear) {
                agents[i].position = candidate;
                break;
            }
            if (++rejected >= params.max_rejections)
                throw SamplingExhausted("generate_dynamic_scenario: cannot place agents");
        }
        agents[i].velocity = {0.0, 0.0};
        agents[i].radius = params.agent_radius;
        agents[i].pref_speed = params.pref_speed;
        agents[i].goal = sample_free_point(scene, rng, params.start_clearance, params.max_rejections,
                                           &rejected);
    }
    double user_heading = rng.angle();

    DynamicScenario scenario;
    scenario.dt = params.dt;
    scenario.duration = duration;
    long steps = std::lround(duration / params.dt);
    scenario.user.reserve(static_cast<std::size_t>(steps) + 1);
    for (auto& tr : scenario.obstacles) tr.reserve(static_cast<std::size_t>(steps) + 1);

    auto record = [&](double t) {
        scenario.user.push_back({t, agents[0].position, Angle::canonical(user_heading)});
        for (int k = 0; k < 4; ++k) scenario.obstacles[static_cast<std::size_t>(k)].push_back(agents[k + 1].position);
    };
    if (steps > 0) record(0.0);

    double wall_reach = 1.5 * params.pref_speed * params.tau + params.agent_radius + 1.0;
    std::vector<Agent> neighbors;
    neighbors.reserve(kAgents - 1);
    for (long step = 1; step <= steps; ++step) {
        std::array<Point2, kAgents> new_velocity;
        for (int i = 0; i < kAgents; ++i) {
            neighbors.clear();
            for (int j = 0; j < kAgents; ++j)
                if (j != i) neighbors.push_back(agents[j]);
            std::vector<OrcaLine> walls = boundary_wall_lines(
                scene.boundary, agents[i].position, params.agent_radius, params.tau, wall_reach);
            new_velocity[i] =
                orca_velocity(agents[i], neighbors, params.tau, params.dt, walls, params.radius_slack);
        }
        // The discs follow their avoidance velocities directly; the user
        // turns toward its velocity at the capped rate and walks along the
        // heading with the velocity component it can realize.
        for (int i = 1; i < kAgents; ++i) {
            agents[i].velocity = new_velocity[i];
            agents[i].position = agents[i].position + params.dt * agents[i].velocity;
        }
        Point2 v_user = new_velocity[0];
        double speed = norm(v_user);
        if (speed > 1e-9) {
            double desired = std::atan2(v_user.y, v_user.x);
            double err = signed_angle_diff(desired, user_heading);
            double max_turn = params.heading_rate * params.dt;
            double turn = std::clamp(err, -max_turn, max_turn);
            user_heading = Angle::canonical(user_heading + turn);
            double remaining = err - turn;
            double along = speed * std::cos(remaining);
            if (along > 0.0) {
                agents[0].velocity = along * unit_vector(user_heading);
                agents[0].position = agents[0].position + params.dt * agents[0].velocity;
            } else {
                agents[0].velocity = {0.0, 0.0};
            }
        } else {
            agents[0].velocity = {0.0, 0.0};
        }
        record(params.dt * static_cast<double>(step));

        for (int i = 0; i < kAgents; ++i) {
            if (distance(agents[i].position, agents[i].goal) < params.goal_tolerance) {
                agents[i].goal = sample_free_point(scene, rng, params.start_clearance,
                                                   params.max_rejections, &rejected);
            }
        }
    }
    return scenario;
}

}  // namespace rdw
