#pragma once

// Trace rows and their CSV schema.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "teleop/se3.hpp"

namespace teleop {

struct TraceRow {
    double t = 0.0;
    double excitation = 0.0;  // scenario input signal (injected wrench or setpoint offset)

    Vec6 L_X = Vec6::Zero(), L_Xd = Vec6::Zero(), L_W_hand = Vec6::Zero(), L_W_fb = Vec6::Zero();
    Vec6 L_flange_cmd = Vec6::Zero(), L_vel = Vec6::Zero();

    Vec6 F_X = Vec6::Zero(), F_Xd = Vec6::Zero(), F_W_ext = Vec6::Zero(), F_W_d = Vec6::Zero();
    Vec6 F_flange_cmd = Vec6::Zero(), F_vel = Vec6::Zero();

    int fwd_held = 0, rev_held = 0;
    std::uint64_t fwd_seq = 0, rev_seq = 0;
    int L_fallback = 0, F_fallback = 0;

    double grip_delta = 0.0, grip_sigma_hat = 0.0, grip_delta_hat = 0.0, grip_sigma = 0.0;

    double P_in = 0.0, P_out = 0.0, P_sum = 0.0, E_sum = 0.0;
};

struct TraceLog {
    double dt = 0.0;  // row spacing
    std::vector<TraceRow> rows;
    std::optional<std::string> error;

    [[nodiscard]] std::size_t size() const { return rows.size(); }
    [[nodiscard]] bool ok() const { return !error.has_value(); }
};

namespace detail {
inline void vec_header(std::vector<std::string>& h, const std::string& prefix) {
    static const char* axes[6] = {"x", "y", "z", "rx", "ry", "rz"};
    for (const char* a : axes) h.push_back(prefix + "_" + a);
}

inline void put(std::string& line, double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    if (!line.empty()) line += ',';
    line += buf;
}

inline void put(std::string& line, const Vec6& v) {
    for (int i = 0; i < 6; ++i) put(line, v[i]);
}
}  // namespace detail

inline std::vector<std::string> trace_columns() {
    std::vector<std::string> h{"t", "excitation"};
    for (const char* p : {"L_X", "L_Xd", "L_W_hand", "L_W_fb", "L_flange_cmd", "L_vel", "F_X", "F_Xd", "F_W_ext",
                          "F_W_d", "F_flange_cmd", "F_vel"}) {
        detail::vec_header(h, p);
    }
    for (const char* c : {"fwd_held", "fwd_seq", "rev_held", "rev_seq", "L_fallback", "F_fallback", "grip_delta",
                          "grip_sigma_hat", "grip_delta_hat", "grip_sigma", "P_in", "P_out", "P_sum", "E_sum"}) {
        h.emplace_back(c);
    }
    return h;
}

inline std::string trace_csv_line(const TraceRow& r) {
    std::string s;
    detail::put(s, r.t);
    detail::put(s, r.excitation);
    for (const Vec6* v : {&r.L_X, &r.L_Xd, &r.L_W_hand, &r.L_W_fb, &r.L_flange_cmd, &r.L_vel, &r.F_X, &r.F_Xd,
                          &r.F_W_ext, &r.F_W_d, &r.F_flange_cmd, &r.F_vel}) {
        detail::put(s, *v);
    }
    s += ',' + std::to_string(r.fwd_held) + ',' + std::to_string(r.fwd_seq) + ',' + std::to_string(r.rev_held) + ',' +
         std::to_string(r.rev_seq) + ',' + std::to_string(r.L_fallback) + ',' + std::to_string(r.F_fallback);
    for (double v : {r.grip_delta, r.grip_sigma_hat, r.grip_delta_hat, r.grip_sigma, r.P_in, r.P_out, r.P_sum,
                     r.E_sum}) {
        detail::put(s, v);
    }
    return s;
}

inline void write_trace_csv(std::ostream& os, const TraceLog& log) {
    const auto cols = trace_columns();
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << cols[i];
    os << '\n';
    for (const auto& r : log.rows) os << trace_csv_line(r) << '\n';
}

}  // namespace teleop
