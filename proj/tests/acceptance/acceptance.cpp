// Acceptance gate: one PASS/FAIL line per criterion. Exit status is the number of failures.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "teleop/experiments.hpp"

using namespace teleop;

namespace {

// Pinned tolerances.
constexpr double kStiffnessRelTol = 0.02;
constexpr double kOvershootMax = 0.05;
constexpr double kCollisionRuntimeMax = 10.0;  // s per run
constexpr double kForceLawRelTol = 0.10;
constexpr double kNotchUnityTol = 1e-6;
constexpr double kNotchCenterTol = 0.005;
constexpr double kNotchBenefitDb = 1.0;
constexpr double kPhaseFreq = 1.5;
constexpr double kAddedPhaseGood = -360.0 * 1.5 * 0.040;
constexpr double kAddedPhaseTol = 5.0;
constexpr double kNetemRuntimeMax = 1.0;  // s per condition
constexpr int kNetemSamples = 100000;
constexpr double kRoundTripTol = 1e-10;
constexpr double kJacobianTol = 1e-6;
constexpr double kDelta6Tol = 1e-8;
constexpr double kBodeDbTol = 0.05;
constexpr double kBodeDegTol = 0.5;

struct Verdict {
    bool pass = true;
    std::string detail;
};

int failures = 0;

void report(int id, const char* name, const Verdict& v) {
    std::printf("[%s] %2d %s: %s\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str());
    std::fflush(stdout);
    if (!v.pass) ++failures;
}

void run(int id, const char* name, const std::function<Verdict()>& fn) {
    Verdict v;
    try {
        v = fn();
    } catch (const std::exception& e) {
        v = {false, std::string("error: ") + e.what()};
    }
    report(id, name, v);
}

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double wrap180(double d) {
    d = std::fmod(d, 360.0);
    if (d > 180.0) d -= 360.0;
    if (d <= -180.0) d += 360.0;
    return d;
}

// ------------------------------------------------------------------ 1, 2

Verdict compliance() {
    Verdict v;
    for (double speed : {0.05, 0.2}) {
        ScenarioConfig c = default_config(ScenarioKind::Collision);
        c.op.descent.speed = speed;
        const auto t0 = std::chrono::steady_clock::now();
        const CollisionResult r = run_collision(c);
        const double secs = seconds_since(t0);
        const double K = c.follower.K[2];
        const bool ok = std::abs(r.metrics.recovered_K - K) <= kStiffnessRelTol * K &&
                        r.metrics.force_overshoot <= kOvershootMax && secs <= kCollisionRuntimeMax;
        v.pass = v.pass && ok;
        v.detail += fmt("v=%.2f K=%.2f overshoot=%.2f%% settle=%.2fs run=%.2fs; ", speed, r.metrics.recovered_K,
                        100 * r.metrics.force_overshoot, r.metrics.settle_time, secs);
    }
    return v;
}

Verdict force_law() {
    Verdict v;
    for (double speed : {0.05, 0.2}) {
        ScenarioConfig c = default_config(ScenarioKind::Collision);
        c.op.descent.speed = speed;
        const CollisionResult r = run_collision(c);
        try {
            const ForceLawFit fit = force_law_fit(r.trace, c.follower.K[2], c.follower.B[2], 0.5 * speed, 1.0 / c.tele_rate);
            v.pass = v.pass && fit.rms_rel_err <= kForceLawRelTol;
            v.detail += fmt("v=%.2f n=%zu rms=%.1f%% max=%.1f%%; ", speed, fit.samples, 100 * fit.rms_rel_err,
                            100 * fit.max_rel_err);
        } catch (const InsufficientData& e) {
            v.pass = false;
            v.detail += fmt("v=%.2f no post-impact constant-velocity window (contact at %.3fs); ", speed,
                            r.metrics.contact_time);
        }
    }
    return v;
}

// ------------------------------------------------------------------ 3

NotchBank notch_bank(double lambda) {
    NotchParams p;
    p.lambda = Vec6::Constant(lambda);
    p.fs = 150.0;
    return notch_design(p);
}

double driven_gain(NotchBank b, double f, double fs) {
    const double w = 2 * std::numbers::pi * f / fs;
    const int n0 = static_cast<int>(std::lround(60 * fs / f)), n1 = static_cast<int>(std::lround(20 * fs / f));
    std::complex<double> xi = 0, xo = 0;
    for (int n = 0; n < n0 + n1; ++n) {
        const double u = std::sin(w * n);
        const double y = notch_step(b, Vec6::Constant(u))[0];
        if (n >= n0) {
            xi += u * std::polar(1.0, -w * n);
            xo += y * std::polar(1.0, -w * n);
        }
    }
    return std::abs(xo / xi);
}

Verdict notch() {
    Verdict v;
    for (double lam : {0.0, 0.27, 1.0}) {
        NotchBank dc = notch_bank(lam), ny = notch_bank(lam);
        double ydc = 0, yny = 0;
        for (int n = 0; n < 20000; ++n) {
            ydc = notch_step(dc, Vec6::Constant(1.0))[0];
            yny = notch_step(ny, Vec6::Constant(n % 2 ? -1.0 : 1.0))[0];
        }
        const double gc = driven_gain(notch_bank(lam), 1.0, 150.0);
        const bool ok = std::abs(ydc - 1.0) <= kNotchUnityTol && std::abs(std::abs(yny) - 1.0) <= kNotchUnityTol &&
                        std::abs(gc - (1.0 - lam)) <= kNotchCenterTol;
        v.pass = v.pass && ok;
        v.detail += fmt("lambda=%.2f dc=%.8f nyq=%.8f center=%.4f; ", lam, ydc, std::abs(yny), gc);
    }
    NotchBank b = notch_bank(0.0);
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g(0.0, 10.0);
    bool exact = true;
    for (int n = 0; n < 10000; ++n) {
        Vec6 u;
        for (int k = 0; k < 6; ++k) u[k] = g(rng);
        const Vec6 y = notch_step(b, u);
        exact = exact && std::memcmp(y.data(), u.data(), sizeof(double) * 6) == 0;
    }
    v.pass = v.pass && exact;
    v.detail += exact ? "bypass bit-exact" : "bypass NOT bit-exact";
    return v;
}

// ------------------------------------------------------------------ 4, 5, 6

std::vector<double> leader_grid() { return log_grid(0.5, 3.0, 11); }

BodePoint leader_peak(double Bz, double lambda) {
    ScenarioConfig c = default_config(ScenarioKind::LeaderBode);
    c.leader.B[2] = Bz;
    c.leader.notch.lambda = Vec6::Constant(lambda);
    return bode_peak(bode_sweep(c, BodeTarget::Leader, leader_grid()));
}

Verdict damping_trend() {
    Verdict v;
    std::vector<BodePoint> peaks;
    for (double Bz : {60.0, 80.0, 100.0}) {
        peaks.push_back(leader_peak(Bz, 0.0));
        v.detail += fmt("Bz=%.0f peak %.2f dB @ %.2f Hz; ", Bz, peaks.back().mag_db, peaks.back().freq);
    }
    for (std::size_t i = 1; i < peaks.size(); ++i) {
        v.pass = v.pass && peaks[i].mag_db < peaks[i - 1].mag_db && peaks[i].freq <= peaks[i - 1].freq;
    }
    return v;
}

Verdict notch_benefit() {
    const BodePoint off = leader_peak(100.0, 0.0), on = leader_peak(100.0, 0.27);
    const double gain = off.mag_db - on.mag_db;
    return {gain >= kNotchBenefitDb,
            fmt("Bz=100 peak off %.2f dB, on %.2f dB, reduction %.2f dB (need >= %.1f)", off.mag_db, on.mag_db, gain,
                kNotchBenefitDb)};
}

double leader_phase(const char* net, bool ideal) {
    ScenarioConfig c = default_config(ScenarioKind::LeaderBode);
    c.net = *NetworkCondition::named(net);
    c.net_name = net;
    c.plant_leader.ideal = ideal;
    c.plant_follower.ideal = ideal;
    return bode_run(c, BodeTarget::Leader, kPhaseFreq).phase_deg;
}

Verdict network_phase() {
    Verdict v;
    const char* nets[] = {"local", "good", "fair", "poor"};
    std::vector<double> ph;
    for (const char* n : nets) {
        ph.push_back(leader_phase(n, false));
        v.detail += fmt("%s %.1f deg; ", n, ph.back());
    }
    for (std::size_t i = 1; i < ph.size(); ++i) v.pass = v.pass && wrap180(ph[i] - ph[i - 1]) < 0.0;
    const double added = wrap180(leader_phase("good", true) - leader_phase("local", true));
    v.pass = v.pass && std::abs(added - kAddedPhaseGood) <= kAddedPhaseTol;
    v.detail += fmt("ideal-plant added phase (good) %.2f deg, expect %.1f +- %.0f", added, kAddedPhaseGood, kAddedPhaseTol);
    return v;
}

// ------------------------------------------------------------------ 7

Verdict channel_statistics() {
    Verdict v;
    for (const char* n : {"local", "good", "fair", "poor"}) {
        const auto t0 = std::chrono::steady_clock::now();
        const NetemReport r = netem_validate(*NetworkCondition::named(n), kNetemSamples, 7);
        const double secs = seconds_since(t0);
        v.pass = v.pass && r.pass() && secs <= kNetemRuntimeMax;
        v.detail += fmt("%s mean %.2fms std %.2fms loss %.3f%% (%.2fs); ", n, 1e3 * r.mean, 1e3 * r.std, 100 * r.loss, secs);
    }
    return v;
}

// ------------------------------------------------------------------ 8

Verdict passivity() {
    Verdict v;
    for (const char* n : {"local", "poor"}) {
        ScenarioConfig c = default_config(ScenarioKind::Passivity);
        c.net = *NetworkCondition::named(n);
        c.net_name = n;
        const PassivityResult r = run_passivity(c);
        v.pass = v.pass && r.min_E_sum >= 0.0 && r.contact_episodes == 3;
        v.detail += fmt("%s min E_sum %.3g J, episodes %d, peak force", n, r.min_E_sum, r.contact_episodes);
        for (double f : r.peak_force) v.detail += fmt(" %.3f", f);
        v.detail += " N";
        if (std::string(n) == "poor") {
            bool non_increasing = r.peak_force.size() == 3;
            for (std::size_t i = 1; i < r.peak_force.size(); ++i) {
                non_increasing = non_increasing && r.peak_force[i] <= r.peak_force[i - 1];
            }
            v.pass = v.pass && non_increasing;
            v.detail += non_increasing ? " (envelope non-increasing)" : " (envelope grows)";
        }
        v.detail += "; ";
    }
    return v;
}

// ------------------------------------------------------------------ 9

Verdict oracle_suites() {
    Verdict v;
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> u(-1.0, 1.0), ang(-3.0, 3.0), pitch(-1.4, 1.4);
    auto pose = [&] { return PoseXYZ{Vec3(u(rng), u(rng), u(rng)), Vec3(ang(rng), pitch(rng), ang(rng))}; };
    auto vec6 = [&] {
        Vec6 x;
        for (int i = 0; i < 6; ++i) x[i] = u(rng);
        return x;
    };
    double rt = 0, grp = 0, jac = 0, d6 = 0;
    const Delta6Params dp;
    for (int i = 0; i < 10000; ++i) {
        const PoseXYZ a = pose(), b = pose();
        rt = std::max(rt, (from_transform(to_transform(a)).to_vec() - a.to_vec()).cwiseAbs().maxCoeff());
        const FrameState fa{a, vec6(), vec6()}, fb{b, vec6(), vec6()};
        const FrameState back = compose_minus(compose_plus(fa, fb), fb);
        grp = std::max({grp, (to_transform(back.pose).rotation - to_transform(a).rotation).cwiseAbs().maxCoeff(),
                        (back.pose.position - a.position).cwiseAbs().maxCoeff(),
                        (back.vel - fa.vel).cwiseAbs().maxCoeff(), (back.acc - fa.acc).cwiseAbs().maxCoeff()});
        const Vec3 e = a.euler, ed = vec6().head<3>();
        const double h = 1e-6;
        const Mat3 W = euler_to_rotation(e).transpose() * (euler_to_rotation(e + h * ed) - euler_to_rotation(e - h * ed)) / (2 * h);
        jac = std::max(jac, (euler_rate_jacobian(e) * ed - Vec3(W(2, 1), W(0, 2), W(1, 0))).cwiseAbs().maxCoeff());
        const Vec6 w = vec6().cwiseProduct(dp.stiffness().cwiseProduct(dp.deflection_limits)) * 0.95;
        d6 = std::max(d6, (forward_wrench(inverse_wrench(w, dp), dp) - w).cwiseAbs().maxCoeff());
    }
    v.pass = rt <= kRoundTripTol && grp <= kRoundTripTol && jac <= kJacobianTol && d6 <= kDelta6Tol;
    v.detail += fmt("round trip %.1e, group %.1e, jacobian %.1e, delta6 %.1e; ", rt, grp, jac, d6);

    // Bode estimator on a synthesized half-gain, 40 ms delayed sine.
    const double f = 1.5, dt = 1.0 / 750;
    std::vector<double> in, out;
    for (int n = 0; n * dt < 20.0; ++n) {
        in.push_back(std::sin(2 * std::numbers::pi * f * n * dt));
        out.push_back(0.5 * std::sin(2 * std::numbers::pi * f * (n * dt - 0.040)));
    }
    const BodePoint p = bode_point(in, out, dt, f, 5.0);
    const double dmag = std::abs(p.mag_db - 20 * std::log10(0.5)), dph = std::abs(p.phase_deg - (-21.6));
    v.pass = v.pass && dmag <= kBodeDbTol && dph <= kBodeDegTol;
    v.detail += fmt("bode err %.4f dB %.4f deg; ", dmag, dph);

    ScenarioConfig c = default_config(ScenarioKind::Passivity);
    c.net = NetworkCondition::poor();
    auto csv = [&] {
        std::ostringstream os;
        write_trace_csv(os, schedule(c));
        return os.str();
    };
    const bool same = csv() == csv();
    v.pass = v.pass && same;
    v.detail += same ? "reruns byte-identical" : "reruns differ";
    return v;
}

// ------------------------------------------------------------------ 10

Verdict watchdog() {
    const ScenarioConfig c = default_config(ScenarioKind::Outage);
    const OutageResult r = run_outage(c);
    const double poll = 1.0 / std::min(c.leader.rate, c.follower.rate);
    const double deadline = r.last_delivery + c.watchdog_timeout + poll + 1e-9;
    const bool trig = r.leader_fallback_at > 0 && r.follower_fallback_at > 0 && r.leader_fallback_at <= deadline &&
                      r.follower_fallback_at <= deadline && r.leader_fallback_at >= c.outage_start;
    const bool frozen = r.frozen_drift == 0.0;
    const bool ramp = r.ramp_zero_at > 0 && r.ramp_zero_at - r.leader_fallback_at <= c.leader.fallback_ramp + poll;
    const bool resumed = r.leader_resume_at > 0 && r.follower_resume_at > 0 && r.final_tracking_err < 0.005;
    return {trig && frozen && ramp && resumed,
            fmt("last delivery %.3fs, fallback L %.3fs F %.3fs (deadline %.3fs), frozen drift %.1e, haptic zero after "
                "%.3fs, resume L %.3fs F %.3fs, final tracking err %.2f mm",
                r.last_delivery, r.leader_fallback_at, r.follower_fallback_at, deadline, r.frozen_drift,
                r.ramp_zero_at - r.leader_fallback_at, r.leader_resume_at, r.follower_resume_at,
                1e3 * r.final_tracking_err)};
}

}  // namespace

int main() {
    run(1, "compliance recovery", compliance);
    run(2, "pre-steady force law", force_law);
    run(3, "notch filter", notch);
    run(4, "damping trend", damping_trend);
    run(5, "notch benefit", notch_benefit);
    run(6, "network phase trend", network_phase);
    run(7, "channel statistics", channel_statistics);
    run(8, "passivity signature", passivity);
    run(9, "algebra and oracle suites", oracle_suites);
    run(10, "watchdog", watchdog);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures;
}
