#pragma once

// Scenario runners that combine the scheduler with the analysis functions.

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>
#include <vector>

#include "teleop/analysis.hpp"
#include "teleop/netem.hpp"
#include "teleop/sim/config.hpp"
#include "teleop/sim/scheduler.hpp"

namespace teleop {

inline TraceLog run_checked(const ScenarioConfig& cfg) {
    TraceLog log = schedule(cfg);
    if (log.error) throw ScenarioFailed(*log.error);
    return log;
}

// ---------------------------------------------------------------- Bode

enum class BodeTarget { Leader, Follower };

/// Input and output series of a Bode run.
inline void bode_series(const TraceLog& log, BodeTarget target, const ScenarioConfig& cfg, std::vector<double>& in,
                        std::vector<double>& out) {
    in.clear();
    out.clear();
    for (const auto& r : log.rows) {
        in.push_back(r.excitation);
        if (target == BodeTarget::Leader) {
            out.push_back(r.L_W_hand[cfg.op.sine.axis]);
        } else {
            const int a = cfg.op.motion.axis;
            out.push_back(r.F_X[a] - cfg.follower.home.to_vec()[a]);
        }
    }
}

inline ScenarioConfig bode_config(ScenarioConfig cfg, BodeTarget target, double f) {
    cfg.kind = target == BodeTarget::Leader ? ScenarioKind::LeaderBode : ScenarioKind::FollowerBode;
    if (target == BodeTarget::Leader) {
        cfg.op.sine.freq = f;
    } else {
        cfg.op.motion.freq = f;
    }
    cfg.duration = cfg.bode.settle + std::max(cfg.bode.min_cycles / f, cfg.bode.min_window) + 0.1;
    return cfg;
}

inline BodePoint bode_run(const ScenarioConfig& base, BodeTarget target, double f) {
    const ScenarioConfig cfg = bode_config(base, target, f);
    const TraceLog log = run_checked(cfg);
    std::vector<double> in, out;
    bode_series(log, target, cfg, in, out);
    return bode_point(in, out, log.dt, f, cfg.bode.settle, cfg.bode.min_cycles);
}

/// One independent scenario per frequency, run concurrently.
inline std::vector<BodePoint> bode_sweep(const ScenarioConfig& cfg, BodeTarget target, std::vector<double> freqs = {}) {
    if (freqs.empty()) freqs = cfg.bode.freqs.empty() ? default_freq_grid() : cfg.bode.freqs;
    std::vector<std::future<BodePoint>> jobs;
    jobs.reserve(freqs.size());
    for (double f : freqs) jobs.push_back(std::async(std::launch::async, [&cfg, target, f] { return bode_run(cfg, target, f); }));
    std::vector<BodePoint> pts;
    pts.reserve(freqs.size());
    for (auto& j : jobs) pts.push_back(j.get());
    return pts;
}

inline BodePoint bode_peak(const std::vector<BodePoint>& pts) {
    if (pts.empty()) throw InsufficientData("empty sweep");
    return *std::max_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.mag_db < b.mag_db; });
}

// ---------------------------------------------------------------- collision

struct CollisionResult {
    TraceLog trace;
    CollisionMetrics metrics;
};

inline CollisionResult run_collision(ScenarioConfig cfg) {
    cfg.kind = ScenarioKind::Collision;
    CollisionResult r;
    r.trace = run_checked(cfg);
    r.metrics = collision_metrics(r.trace);
    return r;
}

// ---------------------------------------------------------------- passivity

struct PassivityResult {
    TraceLog trace;
    std::vector<EnergySample> energy;
    double min_E_sum = 0.0;
    std::vector<double> peak_force;  // max normal contact force per repetition
    int contact_episodes = 0;
};

inline int count_contact_episodes(const TraceLog& log, double on = 0.5, double off = 0.1) {
    int n = 0;
    bool in = false;
    for (const auto& r : log.rows) {
        const double f = r.F_W_ext[2];
        if (!in && f > on) {
            in = true;
            ++n;
        } else if (in && f < off) {
            in = false;
        }
    }
    return n;
}

inline PassivityResult run_passivity(ScenarioConfig cfg) {
    cfg.kind = ScenarioKind::Passivity;
    resolve(cfg);
    PassivityResult r;
    r.trace = run_checked(cfg);
    r.energy = energy_ledger(r.trace);
    r.min_E_sum = 0.0;
    for (const auto& e : r.energy) r.min_E_sum = std::min(r.min_E_sum, e.E_sum);
    const auto& drag = cfg.op.drag;
    r.peak_force.assign(static_cast<std::size_t>(drag.repetitions), 0.0);
    for (const auto& row : r.trace.rows) {
        if (row.t < drag.start) continue;
        const auto i = static_cast<std::size_t>((row.t - drag.start) / drag.period());
        if (i < r.peak_force.size()) r.peak_force[i] = std::max(r.peak_force[i], row.F_W_ext[2]);
    }
    r.contact_episodes = count_contact_episodes(r.trace);
    return r;
}

// ---------------------------------------------------------------- outage

struct OutageResult {
    TraceLog trace;
    double last_delivery = 0.0;          // last pre-outage send time (Local delivers immediately)
    double leader_fallback_at = -1.0;    // first row with fallback set
    double follower_fallback_at = -1.0;
    double frozen_drift = 0.0;           // max |X_d - X_d(freeze)| while the follower is in fallback
    double ramp_zero_at = -1.0;          // first time the rendered haptic reference reaches zero
    double pre_outage_feedback = 0.0;    // |W_fb| just before the leader fallback
    double leader_resume_at = -1.0;
    double follower_resume_at = -1.0;
    double final_tracking_err = 0.0;     // |F_Xd - L_Xd| over the last 0.5 s
};

inline OutageResult run_outage(ScenarioConfig cfg) {
    cfg.kind = ScenarioKind::Outage;
    OutageResult r;
    r.trace = run_checked(cfg);
    const double tele = 1.0 / cfg.tele_rate;
    r.last_delivery = std::floor(cfg.outage_start / tele - 1e-9) * tele;
    Vec6 frozen = Vec6::Zero();
    for (const auto& row : r.trace.rows) {
        if (row.L_fallback && r.leader_fallback_at < 0) {
            r.leader_fallback_at = row.t;
        }
        if (!row.L_fallback && r.leader_fallback_at < 0) r.pre_outage_feedback = row.L_W_fb.norm();
        if (row.F_fallback && r.follower_fallback_at < 0) {
            r.follower_fallback_at = row.t;
            frozen = row.F_Xd;
        }
        if (row.F_fallback && r.follower_resume_at < 0) {
            r.frozen_drift = std::max(r.frozen_drift, (row.F_Xd - frozen).norm());
        }
        if (row.L_fallback && r.ramp_zero_at < 0 && row.L_W_fb.norm() == 0.0) r.ramp_zero_at = row.t;
        if (r.leader_fallback_at >= 0 && r.leader_resume_at < 0 && !row.L_fallback) r.leader_resume_at = row.t;
        if (r.follower_fallback_at >= 0 && r.follower_resume_at < 0 && !row.F_fallback) r.follower_resume_at = row.t;
        if (row.t >= r.trace.rows.back().t - 0.5) {
            r.final_tracking_err = std::max(r.final_tracking_err, (row.F_Xd.head<3>() - row.L_Xd.head<3>()).norm());
        }
    }
    return r;
}

// ---------------------------------------------------------------- netem statistics

struct RectifiedMoments {
    double mean = 0.0;
    double std = 0.0;
};

/// Moments of max(0, X) for X ~ N(mu, sigma^2).
inline RectifiedMoments rectified_gaussian(double mu, double sigma) {
    if (sigma == 0.0) return {std::max(0.0, mu), 0.0};
    const double a = mu / sigma;
    const double Phi = 0.5 * std::erfc(-a / std::numbers::sqrt2);
    const double phi = std::exp(-0.5 * a * a) / std::sqrt(2.0 * std::numbers::pi);
    const double m1 = mu * Phi + sigma * phi;
    const double m2 = (mu * mu + sigma * sigma) * Phi + mu * sigma * phi;
    return {m1, std::sqrt(std::max(0.0, m2 - m1 * m1))};
}

struct NetemReport {
    NetworkCondition cond;
    int n = 0;
    double mean = 0.0, std = 0.0, loss = 0.0;  // empirical
    RectifiedMoments expected;                 // of the truncated delay law
    double truncation_skew_mean = 0.0;         // expected.mean - cond.mean_delay
    double truncation_skew_std = 0.0;          // expected.std - cond.std_delay
    bool mean_ok = false, std_ok = false, loss_ok = false;

    [[nodiscard]] bool pass() const { return mean_ok && std_ok && loss_ok; }
};

inline constexpr double kMeanRelTol = 0.02;
inline constexpr double kStdRelTol = 0.03;
inline constexpr double kLossAbsTol = 0.001;

inline bool within_rel(double got, double want, double rel) {
    if (want == 0.0) return got == 0.0;
    return std::abs(got - want) <= rel * std::abs(want);
}

inline NetemReport netem_validate(const NetworkCondition& cond, int n, std::uint64_t seed) {
    cond.validate();
    if (n < 1) throw BadParams("sample count must be positive");
    ChannelState<int> ch(seed);
    double sum = 0.0, sum2 = 0.0;
    int kept = 0;
    for (int i = 0; i < n; ++i) {
        const SendOutcome o = channel_send(TimedMsg<int>{0.0, static_cast<std::uint64_t>(i + 1), i}, cond, ch, 0.0);
        ch.in_flight.clear();
        if (o.dropped) continue;
        ++kept;
        sum += o.delay;
        sum2 += o.delay * o.delay;
    }
    NetemReport r;
    r.cond = cond;
    r.n = n;
    r.loss = 1.0 - static_cast<double>(kept) / n;
    if (kept > 0) {
        r.mean = sum / kept;
        r.std = kept > 1 ? std::sqrt(std::max(0.0, (sum2 - kept * r.mean * r.mean) / (kept - 1))) : 0.0;
    }
    r.expected = rectified_gaussian(cond.mean_delay, cond.std_delay);
    r.truncation_skew_mean = r.expected.mean - cond.mean_delay;
    r.truncation_skew_std = r.expected.std - cond.std_delay;
    // Local has exact zeros; everything else is judged against the truncated law.
    r.mean_ok = cond.mean_delay == 0.0 && cond.std_delay == 0.0 ? r.mean == 0.0 : within_rel(r.mean, r.expected.mean, kMeanRelTol);
    r.std_ok = cond.std_delay == 0.0 ? r.std == 0.0 : within_rel(r.std, r.expected.std, kStdRelTol);
    r.loss_ok = std::abs(r.loss - cond.loss_prob) <= kLossAbsTol;
    return r;
}

}  // namespace teleop
