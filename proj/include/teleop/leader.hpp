#pragma once

// Leader side: damping-only Cartesian admittance driven by the hand wrench,
// with the follower's wrench (notch-filtered) as the haptic reference, and a
// flange command that preloads the compliant end-effector to render it.

#include "teleop/delta6.hpp"
#include "teleop/filters.hpp"
#include "teleop/se3.hpp"

namespace teleop {

struct LeaderParams {
    Vec6 B = (Vec6() << 60, 60, 100, 0.3, 0.3, 0.2).finished();
    NotchParams notch{};
    double rate = 150.0;  // Hz
    PoseXYZ home{};
    double fallback_ramp = 0.2;  // s, haptic reference ramp-down on watchdog fallback

    void validate() const {
        if (!(B.minCoeff() > 0.0)) throw BadParams("leader damping must be positive");
        if (!(rate > 0.0)) throw BadParams("leader rate must be positive");
        if (notch.fs != rate) throw BadParams("notch sample rate must equal the admittance rate");
        if (!(fallback_ramp > 0.0)) throw BadParams("fallback ramp must be positive");
        notch.validate();
    }
};

struct LeaderState {
    FrameState X_d;          // admittance-consistent desired TCP state
    NotchBank notch_bank;
    Vec6 W_fb_filtered = Vec6::Zero();  // haptic reference actually rendered
    double feedback_gain = 1.0;         // 1 normally, ramps to 0 under watchdog fallback
    bool fallback = false;
    double fallback_since = 0.0;
};

inline LeaderState make_leader_state(const LeaderParams& p) {
    p.validate();
    LeaderState s;
    s.X_d = FrameState::at(p.home);
    s.notch_bank = notch_design(p.notch);
    return s;
}

/// B * Xdot_d = W_hand - W_fb_filtered, integrated forward one tick.
/// The feedback is clipped to what the end-effector can render.
inline FrameState admittance_step(const Vec6& W_hand, const Vec6& W_fb, LeaderState& s, const LeaderParams& p,
                                  const Delta6Params& d6, double dt) {
    const Vec6 filtered = notch_step(s.notch_bank, W_fb);
    s.W_fb_filtered = saturate_wrench(s.feedback_gain * filtered, d6);
    const Vec6 twist = (W_hand - s.W_fb_filtered).cwiseQuotient(p.B);
    s.X_d.pose = integrate_pose(s.X_d.pose, twist, dt);
    s.X_d.vel = twist;
    s.X_d.acc.setZero();
    return s.X_d;
}

/// Flange pose that puts the TCP at X_d while loading the springs to W_fb_filtered.
inline FrameState leader_command(const FrameState& X_d, const Vec6& W_fb_filtered, const Delta6Params& d6) {
    const FrameState rel = deflection_to_pose(inverse_wrench(W_fb_filtered, d6), d6);
    return compose_minus(X_d, rel);
}

/// Teleoperation setpoint, evaluated as vec_XYZ(T(X_now)^-1 * T(home)).
/// Note the operand order: this is the home pose seen from the current pose,
/// so moving +10 mm along z yields -10 mm. reconstruct_target() undoes it.
inline Vec6 leader_setpoint(const PoseXYZ& X_now, const PoseXYZ& home) {
    return pose_between(X_now, home).to_vec();
}

/// Watchdog reaction: ramp the rendered haptic reference to zero over
/// fallback_ramp seconds, restore it as soon as updates resume.
inline void leader_watchdog_update(LeaderState& s, bool fallback, double now, const LeaderParams& p) {
    if (fallback && !s.fallback) {
        s.fallback = true;
        s.fallback_since = now;
    } else if (!fallback) {
        s.fallback = false;
        s.feedback_gain = 1.0;
    }
    if (s.fallback) {
        const double g = 1.0 - (now - s.fallback_since) / p.fallback_ramp;
        s.feedback_gain = g > 1e-9 ? g : 0.0;
    }
}

struct LeaderOutput {
    FrameState flange_cmd;
    Vec6 setpoint = Vec6::Zero();
    Vec6 W_hand = Vec6::Zero();
    Vec6 W_fb_filtered = Vec6::Zero();
};

inline LeaderOutput leader_tick(const Delta6State& sensor, const Vec6& W_fb_msg, LeaderState& s,
                                const LeaderParams& p, const Delta6Params& d6) {
    const double dt = 1.0 / p.rate;
    LeaderOutput out;
    out.W_hand = forward_wrench(sensor, d6);
    const FrameState X_d = admittance_step(out.W_hand, W_fb_msg, s, p, d6, dt);
    out.W_fb_filtered = s.W_fb_filtered;
    out.flange_cmd = leader_command(X_d, s.W_fb_filtered, d6);
    out.setpoint = leader_setpoint(X_d.pose, p.home);
    return out;
}

}  // namespace teleop
