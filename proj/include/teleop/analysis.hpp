#pragma once

// Frequency response, compliance and energy metrics over completed traces.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "teleop/errors.hpp"
#include "teleop/sim/trace.hpp"

namespace teleop {

struct BodePoint {
    double freq = 0.0;
    double mag_db = 0.0;
    double phase_deg = 0.0;  // in (-360, 0]
};

inline double wrap_lag(double deg) {
    double p = std::fmod(deg, 360.0);
    if (p > 0.0) p -= 360.0;
    if (p <= -360.0) p += 360.0;
    return p;
}

/// Complex gain at f from uniformly sampled series (spacing dt), using the
/// largest whole number of cycles that fits after `settle`.
inline std::complex<double> frequency_response(std::span<const double> input, std::span<const double> output,
                                               double dt, double f, double settle, double min_cycles = 10.0) {
    if (input.size() != output.size()) throw InsufficientData("input and output lengths differ");
    if (!(f > 0.0) || !(dt > 0.0)) throw BadParams("frequency and sample spacing must be positive");
    const auto first = static_cast<std::size_t>(std::ceil(settle / dt - 1e-9));
    if (first >= input.size()) throw InsufficientData("no samples after the settle time");
    const double avail = static_cast<double>(input.size() - first) * dt;
    const double cycles = std::floor(avail * f + 1e-9);
    if (cycles < min_cycles) {
        throw InsufficientData("only " + std::to_string(cycles) + " cycles after settling");
    }
    const auto n = static_cast<std::size_t>(std::lround(cycles / f / dt));
    std::complex<double> xi = 0.0, xo = 0.0;
    const double w = 2.0 * std::numbers::pi * f;
    for (std::size_t i = 0; i < n && first + i < input.size(); ++i) {
        const std::complex<double> e = std::polar(1.0, -w * static_cast<double>(i) * dt);
        xi += input[first + i] * e;
        xo += output[first + i] * e;
    }
    if (std::abs(xi) == 0.0) throw InsufficientData("input has no energy at the test frequency");
    return xo / xi;
}

inline BodePoint bode_point(std::span<const double> input, std::span<const double> output, double dt, double f,
                            double settle, double min_cycles = 10.0) {
    const auto h = frequency_response(input, output, dt, f, settle, min_cycles);
    return {f, 20.0 * std::log10(std::abs(h)), wrap_lag(std::arg(h) * 180.0 / std::numbers::pi)};
}

/// n log-spaced frequencies from lo to hi inclusive.
inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> f(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        f[static_cast<std::size_t>(i)] = n == 1 ? lo : lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    }
    return f;
}

inline std::vector<double> default_freq_grid() { return log_grid(0.1, 4.0, 12); }

struct EnergySample {
    double t = 0.0;
    double P_in = 0.0;
    double P_out = 0.0;
    double P_sum = 0.0;
    double E_sum = 0.0;
};

/// P_in = W_hand . v_leader, P_out = W_ext . v_follower (power into the
/// environment), E_sum = trapezoidal integral of P_in - P_out.
inline std::vector<EnergySample> energy_ledger(const TraceLog& trace) {
    std::vector<EnergySample> out;
    out.reserve(trace.rows.size());
    double E = 0.0, prev = 0.0;
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        const auto& r = trace.rows[i];
        EnergySample s;
        s.t = r.t;
        s.P_in = r.L_W_hand.dot(r.L_vel);
        s.P_out = r.F_W_ext.dot(r.F_vel);
        s.P_sum = s.P_in - s.P_out;
        if (i > 0) E += 0.5 * (prev + s.P_sum) * (r.t - trace.rows[i - 1].t);
        s.E_sum = E;
        prev = s.P_sum;
        out.push_back(s);
    }
    return out;
}

struct CollisionMetrics {
    double steady_z_err = 0.0;
    double steady_Fz = 0.0;
    double recovered_K = 0.0;
    double force_overshoot = 0.0;
    double settle_time = 0.0;  // from first contact into a 2% band around the steady force
    double contact_time = 0.0;
};

inline constexpr double kContactForce = 0.05;  // N

inline CollisionMetrics collision_metrics(const TraceLog& trace) {
    const auto& rows = trace.rows;
    auto contact = std::find_if(rows.begin(), rows.end(), [](const TraceRow& r) { return r.F_W_ext[2] > kContactForce; });
    if (contact == rows.end()) throw NoContactDetected("normal force never exceeded " + std::to_string(kContactForce) + " N");

    CollisionMetrics m;
    m.contact_time = contact->t;
    const std::size_t start = rows.size() - std::max<std::size_t>(1, rows.size() / 5);
    double fz = 0.0, err = 0.0;
    for (std::size_t i = start; i < rows.size(); ++i) {
        fz += rows[i].F_W_ext[2];
        err += rows[i].F_Xd[2] - rows[i].F_X[2];
    }
    const auto n = static_cast<double>(rows.size() - start);
    m.steady_Fz = fz / n;
    m.steady_z_err = err / n;
    if (!(m.steady_Fz > kContactForce)) throw NoContactDetected("no contact in the steady window");
    m.recovered_K = m.steady_Fz / m.steady_z_err;

    double fmax = 0.0;
    for (const auto& r : rows) fmax = std::max(fmax, r.F_W_ext[2]);
    m.force_overshoot = fmax / m.steady_Fz - 1.0;

    const double band = 0.02 * m.steady_Fz;
    std::size_t last_out = static_cast<std::size_t>(contact - rows.begin());
    for (std::size_t i = last_out; i < rows.size(); ++i) {
        if (std::abs(rows[i].F_W_ext[2] - m.steady_Fz) > band) last_out = i;
    }
    const std::size_t settled = std::min(last_out + 1, rows.size() - 1);
    m.settle_time = rows[settled].t - m.contact_time;
    return m;
}

/// Comparison of measured normal force with K z_err + B zdot_d over the
/// samples that are in contact while the desired pose is still moving.
struct ForceLawFit {
    std::size_t samples = 0;
    double t_begin = 0.0, t_end = 0.0;
    double rms_rel_err = 0.0;  // rms(F - model) / rms(model)
    double max_rel_err = 0.0;
};

/// zdot_d is differenced over `diff_window` seconds (one setpoint update period).
inline ForceLawFit force_law_fit(const TraceLog& trace, double K, double B, double min_speed, double diff_window) {
    ForceLawFit fit;
    double se = 0.0, sm = 0.0;
    const auto lag = static_cast<std::size_t>(std::max(1L, std::lround(diff_window / trace.dt)));
    for (std::size_t i = lag; i < trace.rows.size(); ++i) {
        const auto& r = trace.rows[i];
        const auto& p = trace.rows[i - lag];
        const double zd_dot = (r.F_Xd[2] - p.F_Xd[2]) / (r.t - p.t);
        if (r.F_W_ext[2] <= kContactForce || zd_dot < min_speed) continue;
        const double model = K * (r.F_Xd[2] - r.F_X[2]) + B * zd_dot;
        const double e = r.F_W_ext[2] - model;
        if (fit.samples == 0) fit.t_begin = r.t;
        fit.t_end = r.t;
        ++fit.samples;
        se += e * e;
        sm += model * model;
        fit.max_rel_err = std::max(fit.max_rel_err, std::abs(e) / std::max(std::abs(model), 1e-12));
    }
    if (fit.samples == 0) throw InsufficientData("no in-contact samples while the desired pose is moving");
    fit.rms_rel_err = std::sqrt(se / sm);
    return fit;
}

}  // namespace teleop
