#pragma once

// Follower side: stiffness-damping impedance realized as a position-based
// outer loop. The wrench error between the measured interaction wrench and
// the impedance reference drives a 6-D PID whose output is a pose increment
// of the compliant end-effector; the flange command follows from it.

#include <numbers>

#include "teleop/delta6.hpp"
#include "teleop/filters.hpp"
#include "teleop/se3.hpp"

namespace teleop {

namespace detail {
inline constexpr double kDeg = std::numbers::pi / 180.0;
}

struct FollowerParams {
    Vec6 K = (Vec6() << 300, 300, 500, 2.4, 2.4, 1.2).finished();
    Vec6 B = (Vec6() << 2, 2, 3, 0.2, 0.2, 0.1).finished();
    double tau_v = 0.03;  // s
    // Increment per tick per unit wrench error: m/N for forces, rad/(N*m) for torques.
    Vec6 kp = (Vec6() << 0.1e-3, 0.1e-3, 0.25e-3, 20 * detail::kDeg, 20 * detail::kDeg, 40 * detail::kDeg).finished();
    Vec6 ki = (Vec6() << 0.01e-3, 0.01e-3, 0.02e-3, 5 * detail::kDeg, 5 * detail::kDeg, 10 * detail::kDeg).finished();
    Vec6 kd = Vec6::Zero();
    Vec6 i_limit = (Vec6() << 1.0, 1.0, 0.5, 0.01, 0.01, 0.01).finished();  // N*s, N*m*s
    double rate = 150.0;
    PoseXYZ home{};

    void validate() const {
        if (!(K.minCoeff() > 0.0)) throw BadParams("follower stiffness must be positive");
        if (!(B.minCoeff() >= 0.0)) throw BadParams("follower damping must be non-negative");
        if (!(tau_v > 0.0)) throw BadParams("tau_v must be positive");
        if (!(i_limit.minCoeff() > 0.0)) throw BadParams("integrator limit must be positive");
        if (!(rate > 0.0)) throw BadParams("follower rate must be positive");
        if (!kp.allFinite() || !ki.allFinite() || !kd.allFinite()) throw BadParams("PID gains must be finite");
    }
};

struct FollowerState {
    PoseXYZ X_d;
    LowPassState lp;
    Vec6 pid_I = Vec6::Zero();
    Vec6 pid_prev_err = Vec6::Zero();
    PoseXYZ prev_pose;
    PoseXYZ prev_target;
    bool primed = false;  // prev_pose/prev_target valid
    bool frozen = false;
};

inline FollowerState make_follower_state(const FollowerParams& p) {
    p.validate();
    FollowerState s;
    s.X_d = p.home;
    s.lp.tau = p.tau_v;
    s.prev_pose = p.home;
    s.prev_target = p.home;
    return s;
}

/// Undo the leader's inverted setpoint convention: X_d = home * T(setpoint)^-1,
/// so the follower displaces the same way the leader did.
inline PoseXYZ reconstruct_target(const Vec6& setpoint, const PoseXYZ& home) {
    return pose_minus(home, PoseXYZ::from_vec(setpoint));
}

/// Pose error: X_d seen from X, in the TCP frame.
inline Vec6 pose_error(const PoseXYZ& X, const PoseXYZ& X_d) { return pose_between(X, X_d).to_vec(); }

/// W_d = K (.) e_p + B (.) e_v, with e_v the filtered velocity error.
inline Vec6 impedance_reference(const PoseXYZ& X, const PoseXYZ& X_d, const Vec6& v_est, const FollowerParams& p) {
    return p.K.cwiseProduct(pose_error(X, X_d)) + p.B.cwiseProduct(v_est);
}

inline Vec6 pid_step(const Vec6& W_err, FollowerState& s, const FollowerParams& p, double dt) {
    if (!(dt > 0.0)) throw BadParams("pid_step requires dt > 0");
    s.pid_I = (s.pid_I + W_err * dt).cwiseMax(-p.i_limit).cwiseMin(p.i_limit);
    const Vec6 D = (W_err - s.pid_prev_err) / dt;
    s.pid_prev_err = W_err;
    return p.kp.cwiseProduct(W_err) + p.ki.cwiseProduct(s.pid_I) + p.kd.cwiseProduct(D);
}

/// Next flange command (flange (+) rel) (-) target_rel, where the target
/// relative state is the measured one advanced by the increment.
inline FrameState follower_command(const FrameState& flange, const FrameState& d6_rel, const Vec6& increment,
                                   const Delta6Params& d6) {
    const FrameState target_rel = compose_plus(d6_rel, FrameState::at(PoseXYZ::from_vec(increment)));
    pose_to_deflection(target_rel, d6);  // throws DeflectionLimit
    return compose_minus(compose_plus(flange, d6_rel), target_rel);
}

/// Watchdog reaction: on fallback hold X_d at the measured TCP pose; on
/// recovery go back to following the channel.
inline void follower_watchdog_update(FollowerState& s, bool fallback, const PoseXYZ& X_now) {
    if (fallback && !s.frozen) {
        s.frozen = true;
        s.X_d = X_now;
        s.prev_target = X_now;
    } else if (!fallback && s.frozen) {
        s.frozen = false;
        s.primed = false;
    }
}

struct FollowerOutput {
    FrameState flange_cmd;
    Vec6 W_ext = Vec6::Zero();  // wrench the tool exerts on its surroundings
    Vec6 W_d = Vec6::Zero();
    Vec6 increment = Vec6::Zero();
    PoseXYZ X;
    PoseXYZ X_d;
};

inline FollowerOutput follower_tick(const Delta6State& sensor, const FrameState& flange, const Vec6& setpoint_held,
                                    FollowerState& s, const FollowerParams& p, const Delta6Params& d6) {
    const double dt = 1.0 / p.rate;
    FollowerOutput out;
    // The springs push back on the tool, so the interaction wrench is the negated spring wrench.
    out.W_ext = -forward_wrench(sensor, d6);
    const FrameState rel = deflection_to_pose(sensor, d6);
    out.X = compose_plus(flange, rel).pose;

    if (!s.frozen) s.X_d = reconstruct_target(setpoint_held, p.home);
    if (!s.primed) {
        s.prev_pose = out.X;
        s.prev_target = s.X_d;
        s.primed = true;
    }
    const Vec6 v_err = body_twist(s.prev_target, s.X_d, dt) - body_twist(s.prev_pose, out.X, dt);
    const Vec6 v_est = lowpass_step(s.lp, v_err, dt);
    s.prev_pose = out.X;
    s.prev_target = s.X_d;

    out.X_d = s.X_d;
    out.W_d = impedance_reference(out.X, s.X_d, v_est, p);
    out.increment = pid_step(out.W_ext - out.W_d, s, p, dt);
    out.flange_cmd = follower_command(flange, rel, out.increment, d6);
    return out;
}

}  // namespace teleop
