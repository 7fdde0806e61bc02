#pragma once

#include <cmath>
#include <cstdio>
#include <string>

#include "teleop/session.hpp"
#include "teleop/sim/trace.hpp"

namespace teleop {

namespace detail {
inline bool row_finite(const TraceRow& r) {
    for (const Vec6* v : {&r.L_X, &r.L_Xd, &r.L_W_hand, &r.L_W_fb, &r.L_flange_cmd, &r.L_vel, &r.F_X, &r.F_Xd,
                          &r.F_W_ext, &r.F_W_d, &r.F_flange_cmd, &r.F_vel}) {
        if (!v->allFinite()) return false;
    }
    return std::isfinite(r.E_sum) && std::isfinite(r.P_sum) && std::isfinite(r.excitation);
}
}  // namespace detail

/// Run a scenario to completion on the fixed base tick. Row 0 holds the
/// initial conditions; a component error ends the run, keeping the rows so
/// far plus a last diagnostic row, and is reported in TraceLog::error.
inline TraceLog schedule(const ScenarioConfig& config) {
    SessionGraph g = build_session(config);
    TraceLog log;
    log.dt = g.dt * g.cfg.record_every;
    const long n = std::max(1L, std::lround(g.cfg.duration * static_cast<double>(g.base_rate)));
    log.rows.reserve(static_cast<std::size_t>(n / g.cfg.record_every + 2));
    log.rows.push_back(snapshot(g));
    for (long k = 1; k < n; ++k) {
        try {
            session_tick(g);
        } catch (const Error& e) {
            char buf[64];
            std::snprintf(buf, sizeof buf, "t=%.6f: ", g.now());
            log.error = buf + std::string(e.what());
            log.rows.push_back(snapshot(g));
            return log;
        }
        if (k % g.cfg.record_every == 0) {
            log.rows.push_back(snapshot(g));
            if (!detail::row_finite(log.rows.back())) {
                log.error = "non-finite state at t=" + std::to_string(g.now());
                return log;
            }
        }
    }
    return log;
}

}  // namespace teleop
