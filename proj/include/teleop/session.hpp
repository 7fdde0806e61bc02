#pragma once

// Bilateral wiring of leader stack, follower stack, channels, gripper and
// operator into one scenario graph advanced one base tick at a time.

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "teleop/delta6.hpp"
#include "teleop/follower.hpp"
#include "teleop/leader.hpp"
#include "teleop/netem.hpp"
#include "teleop/se3.hpp"
#include "teleop/sim/config.hpp"
#include "teleop/sim/environment.hpp"
#include "teleop/sim/gripper.hpp"
#include "teleop/sim/operator.hpp"
#include "teleop/sim/plant.hpp"
#include "teleop/sim/trace.hpp"

namespace teleop {

/// Which halves of the system are live in a scenario.
enum class SessionMode {
    Bilateral,       // hand on the leader, follower against the environment
    LeaderInjected,  // leader TCP clamped, follower replaced by a wrench injector
    FollowerScripted // leader replaced by a scripted setpoint source
};

struct SessionGraph {
    ScenarioConfig cfg;
    SessionMode mode = SessionMode::Bilateral;
    OperatorModel op;

    long base_rate = 750;
    double dt = 1.0 / 750.0;
    long plant_L_div = 3, plant_F_div = 3, loop_L_div = 5, loop_F_div = 5, tele_div = 15;
    long tick = 0;

    // leader stack
    PlantState plant_L;
    LeaderState leader;
    Delta6State sensor_L;
    FrameState L_flange_cmd;
    PoseXYZ L_tcp;
    Vec6 L_vel = Vec6::Zero();
    Vec6 L_W_hand = Vec6::Zero();
    Vec3 L_tcp_world_vel = Vec3::Zero();

    // follower stack
    PlantState plant_F;
    FollowerState follower;
    Delta6State sensor_F;
    FrameState F_flange_cmd;
    PoseXYZ F_tcp;
    Vec6 F_vel = Vec6::Zero();
    Vec6 F_W_ext = Vec6::Zero();
    Vec6 F_W_d = Vec6::Zero();
    Vec3 F_tcp_world_vel = Vec3::Zero();
    double F_normal_force = 0.0;

    // channels: forward carries setpoints, reverse carries wrenches
    ChannelState<Vec6> fwd, rev;
    ChannelState<double> grip_fwd, grip_rev;
    std::uint64_t fwd_seq = 0, rev_seq = 0, grip_fwd_seq = 0, grip_rev_seq = 0;
    PollResult<Vec6> fwd_poll, rev_poll;
    Vec6 setpoint_held = Vec6::Zero();
    Vec6 W_fb_held = Vec6::Zero();
    bool L_fallback = false, F_fallback = false;

    GripperChannel gripper;

    double excitation = 0.0;
    double P_in = 0.0, P_out = 0.0, P_sum = 0.0, E_sum = 0.0;

    [[nodiscard]] double now() const { return static_cast<double>(tick) * dt; }
    [[nodiscard]] bool leader_live() const { return mode != SessionMode::FollowerScripted; }
    [[nodiscard]] bool follower_live() const { return mode != SessionMode::LeaderInjected; }
};

namespace detail {
inline std::uint64_t channel_seed(std::uint64_t seed, std::uint32_t stream) {
    std::seed_seq ss{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), stream};
    std::array<std::uint32_t, 2> out{};
    ss.generate(out.begin(), out.end());
    return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

inline long divisor(long base, double rate, const char* what) {
    const long r = std::lround(rate);
    if (base % r != 0) throw ConfigError(std::string(what) + " does not divide the base rate");
    return base / r;
}
}  // namespace detail

inline SessionGraph build_session(ScenarioConfig cfg) {
    resolve(cfg);
    cfg.validate();
    SessionGraph g;
    g.base_rate = cfg.base_rate();
    g.dt = 1.0 / static_cast<double>(g.base_rate);
    g.plant_L_div = detail::divisor(g.base_rate, cfg.plant_leader.rate, "f_c (leader)");
    g.plant_F_div = detail::divisor(g.base_rate, cfg.plant_follower.rate, "f_c (follower)");
    g.loop_L_div = detail::divisor(g.base_rate, cfg.leader.rate, "f_admt");
    g.loop_F_div = detail::divisor(g.base_rate, cfg.follower.rate, "f_impd");
    g.tele_div = detail::divisor(g.base_rate, cfg.tele_rate, "f_tele");

    switch (cfg.kind) {
        case ScenarioKind::LeaderBode:
            g.mode = SessionMode::LeaderInjected;
            g.op = cfg.op.sine;
            break;
        case ScenarioKind::FollowerBode:
            g.mode = SessionMode::FollowerScripted;
            g.op = cfg.op.motion;
            break;
        case ScenarioKind::Collision:
            g.mode = SessionMode::FollowerScripted;
            g.op = cfg.op.descent;
            break;
        case ScenarioKind::Passivity:
        case ScenarioKind::Outage:
            g.mode = SessionMode::Bilateral;
            g.op = cfg.op.drag;
            break;
        case ScenarioKind::NetemValidate:
            throw ConfigError("netem-validate has no session graph");
    }

    try {
        const FrameState neutral_L = FrameState::at(cfg.d6_leader.neutral);
        const FrameState neutral_F = FrameState::at(cfg.d6_follower.neutral);
        g.L_flange_cmd = compose_minus(FrameState::at(cfg.leader.home), neutral_L);
        g.F_flange_cmd = compose_minus(FrameState::at(cfg.follower.home), neutral_F);
        g.plant_L = make_plant(cfg.plant_leader, g.L_flange_cmd.pose);
        g.plant_F = make_plant(cfg.plant_follower, g.F_flange_cmd.pose);
        g.leader = make_leader_state(cfg.leader);
        g.follower = make_follower_state(cfg.follower);
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(e.what());
    }
    g.L_tcp = cfg.leader.home;
    g.F_tcp = cfg.follower.home;

    g.fwd = ChannelState<Vec6>(detail::channel_seed(cfg.seed, 1));
    g.rev = ChannelState<Vec6>(detail::channel_seed(cfg.seed, 2));
    g.grip_fwd = ChannelState<double>(detail::channel_seed(cfg.seed, 3));
    g.grip_rev = ChannelState<double>(detail::channel_seed(cfg.seed, 4));

    g.gripper.delta = cfg.grip_command;
    g.gripper.delta_hat = cfg.gripper.open_width;
    g.gripper.jaw = cfg.gripper.open_width;
    g.cfg = std::move(cfg);
    return g;
}

namespace detail {

inline NetworkCondition condition_at(const SessionGraph& g, double t) {
    if (g.cfg.kind == ScenarioKind::Outage && t >= g.cfg.outage_start && t < g.cfg.outage_end) {
        return {g.cfg.net.mean_delay, g.cfg.net.std_delay, 1.0};
    }
    return g.cfg.net;
}

inline void sense_leader(SessionGraph& g, double t, double plant_dt) {
    const auto& d6 = g.cfg.d6_leader;
    const FrameState flange = g.plant_L.frame();
    PoseXYZ tcp;
    if (g.mode == SessionMode::LeaderInjected) {
        tcp = g.cfg.leader.home;  // mechanically clamped
        g.sensor_L = pose_to_deflection(FrameState::at(pose_between(flange.pose, tcp)), d6);
    } else {
        // Hand spring-damper in series with the end-effector springs.
        const auto& hand = std::get<DragLiftScript>(g.op);
        const MotionSample h = hand.at(t);
        const Transform tcp0 = to_transform(flange.pose) * to_transform(d6.neutral);
        const Mat3& R = tcp0.rotation;
        const Mat3 C = R * d6.k_trans.cwiseInverse().asDiagonal() * R.transpose();
        const Transform home = to_transform(g.cfg.leader.home);
        const Vec3 x_h = home.rotation * h.offset.head<3>() + home.translation;
        const Vec3 v_h = home.rotation * h.rate.head<3>();
        // The damper acts on the TCP velocity of this step, solved implicitly.
        const double kd = hand.k_hand + hand.b_hand / plant_dt;
        const Vec3 rhs = hand.k_hand * (x_h - tcp0.translation) +
                         hand.b_hand * (v_h - (tcp0.translation - g.L_tcp.position) / plant_dt);
        const Vec3 f = (Mat3::Identity() + kd * C).partialPivLu().solve(rhs);
        Vec6 w = Vec6::Zero();
        w.head<3>() = R.transpose() * f;
        g.sensor_L = inverse_wrench(w, d6);
        tcp = pose_plus(flange.pose, pose_plus(d6.neutral, PoseXYZ::from_vec(g.sensor_L.deflection)));
    }
    g.L_vel = body_twist(g.L_tcp, tcp, plant_dt);
    g.L_tcp_world_vel = (tcp.position - g.L_tcp.position) / plant_dt;
    g.L_tcp = tcp;
    g.L_W_hand = forward_wrench(g.sensor_L, d6);
}

inline void sense_follower(SessionGraph& g, double plant_dt) {
    const auto& d6 = g.cfg.d6_follower;
    const FrameState flange = g.plant_F.frame();
    const ContactSolution c = solve_contact(flange.pose, d6, g.cfg.plate, g.F_tcp_world_vel);
    g.sensor_F = c.deflection;
    g.F_normal_force = c.normal_force;
    g.F_vel = body_twist(g.F_tcp, c.tcp, plant_dt);
    g.F_tcp_world_vel = (c.tcp.position - g.F_tcp.position) / plant_dt;
    g.F_tcp = c.tcp;
    g.F_W_ext = -forward_wrench(g.sensor_F, d6);
}

/// Setpoint the scripted source (or the live leader) publishes at time t.
inline Vec6 current_setpoint(const SessionGraph& g, double t) {
    if (g.mode == SessionMode::FollowerScripted) {
        const auto out = operator_model(g.op, t);
        const auto& m = std::get<MotionSample>(out);
        const PoseXYZ virtual_leader = pose_plus(g.cfg.leader.home, PoseXYZ::from_vec(m.offset));
        return leader_setpoint(virtual_leader, g.cfg.leader.home);
    }
    return leader_setpoint(g.leader.X_d.pose, g.cfg.leader.home);
}

inline double excitation_at(const SessionGraph& g, double t) {
    const auto out = operator_model(g.op, t);
    if (const auto* w = std::get_if<Vec6>(&out)) return (*w)[g.cfg.op.sine.axis];
    if (const auto* m = std::get_if<MotionSample>(&out)) {
        const int axis = std::holds_alternative<SineMotion>(g.op) ? g.cfg.op.motion.axis : 2;
        return m->offset[axis];
    }
    return 0.0;
}

}  // namespace detail

/// Advance one base tick. Order inside a tick: plants, sensing, channel
/// polls and control loops, then outgoing messages.
inline void session_tick(SessionGraph& g) {
    ++g.tick;
    const double t = g.now();
    const long k = g.tick;

    if (g.leader_live() && k % g.plant_L_div == 0) {
        plant_step(g.plant_L, g.L_flange_cmd, g.cfg.plant_leader);
        detail::sense_leader(g, t, g.plant_L.dt);
    }
    if (g.follower_live() && k % g.plant_F_div == 0) {
        plant_step(g.plant_F, g.F_flange_cmd, g.cfg.plant_follower);
        detail::sense_follower(g, g.plant_F.dt);
    }

    if (g.leader_live() && k % g.loop_L_div == 0) {
        g.rev_poll = channel_poll(g.rev, t);
        if (g.rev_poll.payload) g.W_fb_held = *g.rev_poll.payload;
        g.L_fallback = watchdog_check(g.rev, t, g.cfg.watchdog_timeout) == WatchdogStatus::Fallback;
        leader_watchdog_update(g.leader, g.L_fallback, t, g.cfg.leader);
        const LeaderOutput out = leader_tick(g.sensor_L, g.W_fb_held, g.leader, g.cfg.leader, g.cfg.d6_leader);
        g.L_flange_cmd = out.flange_cmd;

        const auto s = channel_poll(g.grip_rev, t);
        if (s.payload) g.gripper.sigma_hat = *s.payload;
        g.gripper.delta = g.cfg.grip_command;
    }
    if (g.follower_live() && k % g.loop_F_div == 0) {
        g.fwd_poll = channel_poll(g.fwd, t);
        if (g.fwd_poll.payload) g.setpoint_held = *g.fwd_poll.payload;
        g.F_fallback = watchdog_check(g.fwd, t, g.cfg.watchdog_timeout) == WatchdogStatus::Fallback;
        follower_watchdog_update(g.follower, g.F_fallback, g.F_tcp);
        const FollowerOutput out = follower_tick(g.sensor_F, g.plant_F.frame(), g.setpoint_held, g.follower,
                                                 g.cfg.follower, g.cfg.d6_follower);
        g.F_flange_cmd = out.flange_cmd;
        g.F_W_d = out.W_d;

        const auto d = channel_poll(g.grip_fwd, t);
        if (d.payload) g.gripper.delta_hat = *d.payload;
        gripper_step(g.gripper, g.cfg.gripper, 1.0 / g.cfg.follower.rate);
    }

    if (k % g.tele_div == 0) {
        const NetworkCondition cond = detail::condition_at(g, t);
        channel_send(TimedMsg<Vec6>{t, ++g.fwd_seq, detail::current_setpoint(g, t)}, cond, g.fwd, t);
        const Vec6 back = g.mode == SessionMode::LeaderInjected ? std::get<Vec6>(operator_model(g.op, t)) : g.F_W_ext;
        channel_send(TimedMsg<Vec6>{t, ++g.rev_seq, back}, cond, g.rev, t);
        channel_send(TimedMsg<double>{t, ++g.grip_fwd_seq, g.gripper.delta}, cond, g.grip_fwd, t);
        channel_send(TimedMsg<double>{t, ++g.grip_rev_seq, g.gripper.sigma}, cond, g.grip_rev, t);
    }

    g.excitation = detail::excitation_at(g, t);
    const double P_in = g.L_W_hand.dot(g.L_vel);
    const double P_out = g.F_W_ext.dot(g.F_vel);
    const double P_sum = P_in - P_out;
    g.E_sum += 0.5 * (g.P_sum + P_sum) * g.dt;
    g.P_in = P_in;
    g.P_out = P_out;
    g.P_sum = P_sum;
}

inline TraceRow snapshot(const SessionGraph& g) {
    TraceRow r;
    r.t = g.now();
    r.excitation = g.excitation;
    if (g.leader_live()) {
        r.L_X = g.L_tcp.to_vec();
        r.L_Xd = g.leader.X_d.pose.to_vec();
        r.L_W_hand = g.L_W_hand;
        r.L_W_fb = g.leader.W_fb_filtered;
        r.L_flange_cmd = g.L_flange_cmd.pose.to_vec();
        r.L_vel = g.L_vel;
    }
    if (g.follower_live()) {
        r.F_X = g.F_tcp.to_vec();
        r.F_Xd = g.follower.X_d.to_vec();
        r.F_W_ext = g.F_W_ext;
        r.F_W_d = g.F_W_d;
        r.F_flange_cmd = g.F_flange_cmd.pose.to_vec();
        r.F_vel = g.F_vel;
    }
    r.fwd_held = g.fwd_poll.held ? 1 : 0;
    r.fwd_seq = g.fwd_poll.seq;
    r.rev_held = g.rev_poll.held ? 1 : 0;
    r.rev_seq = g.rev_poll.seq;
    r.L_fallback = g.L_fallback ? 1 : 0;
    r.F_fallback = g.F_fallback ? 1 : 0;
    r.grip_delta = g.gripper.delta;
    r.grip_sigma_hat = g.gripper.sigma_hat;
    r.grip_delta_hat = g.gripper.delta_hat;
    r.grip_sigma = g.gripper.sigma;
    r.P_in = g.P_in;
    r.P_out = g.P_out;
    r.P_sum = g.P_sum;
    r.E_sum = g.E_sum;
    return r;
}

}  // namespace teleop
