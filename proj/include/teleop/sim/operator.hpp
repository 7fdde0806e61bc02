#pragma once

// Scripted stand-ins for the human operator and for the missing half of the
// system in the unilateral tests.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <type_traits>
#include <utility>
#include <variant>

#include "teleop/errors.hpp"
#include "teleop/se3.hpp"

namespace teleop {

/// (a) A * sin(2 pi f t) on one wrench axis.
struct SineWrench {
    int axis = 2;
    double amplitude = 1.0;  // N or N*m
    double freq = 1.5;       // Hz

    [[nodiscard]] Vec6 at(double t) const {
        Vec6 w = Vec6::Zero();
        w[axis] = amplitude * std::sin(2.0 * std::numbers::pi * freq * t);
        return w;
    }
};

/// Pose offset of a scripted motion source relative to home, with its rate.
struct MotionSample {
    Vec6 offset = Vec6::Zero();
    Vec6 rate = Vec6::Zero();
};

/// (b) Constant-velocity descent along +z (toward the plate) up to `depth`.
struct DescentScript {
    double speed = 0.05;  // m/s
    double depth = 0.2;   // m
    double start = 0.0;   // s

    [[nodiscard]] MotionSample at(double t) const {
        MotionSample m;
        const double s = std::max(0.0, t - start) * speed;
        m.offset[2] = std::min(s, depth);
        m.rate[2] = (t > start && s < depth) ? speed : 0.0;
        return m;
    }
};

/// (d) Sinusoidal motion setpoint.
struct SineMotion {
    int axis = 2;
    double amplitude = 0.01;  // m
    double freq = 1.0;        // Hz

    [[nodiscard]] MotionSample at(double t) const {
        const double w = 2.0 * std::numbers::pi * freq;
        MotionSample m;
        m.offset[axis] = amplitude * std::sin(w * t);
        m.rate[axis] = amplitude * w * std::cos(w * t);
        return m;
    }
};

namespace detail {
/// Cosine blend from a to b over [t0, t0 + T]; returns value and rate.
inline std::pair<double, double> blend(double t, double t0, double T, double a, double b) {
    if (t <= t0) return {a, 0.0};
    if (t >= t0 + T) return {b, 0.0};
    const double s = (t - t0) / T;
    const double k = 0.5 * (1.0 - std::cos(std::numbers::pi * s));
    const double dk = 0.5 * std::numbers::pi / T * std::sin(std::numbers::pi * s);
    return {a + (b - a) * k, (b - a) * dk};
}
}  // namespace detail

/// (c) Hand held on the leader TCP through a spring-damper; the hand itself
/// follows press / drag / lift / return, repeated.
struct DragLiftScript {
    double press_depth = 0.05;    // hand z at the bottom of the press, from home
    double drag_distance = 0.06;  // m along x
    int repetitions = 3;
    double t_press = 2.0, t_hold = 0.5, t_drag = 2.0, t_lift = 1.5, t_return = 1.0;
    double start = 0.5;
    double k_hand = 250.0;  // N/m
    double b_hand = 15.0;   // N*s/m

    [[nodiscard]] double period() const { return t_press + 2 * t_hold + t_drag + t_lift + t_return; }
    [[nodiscard]] double end_time() const { return start + repetitions * period(); }

    [[nodiscard]] MotionSample at(double t) const {
        MotionSample m;
        if (t <= start || t >= end_time()) return m;
        const double tr = std::fmod(t - start, period());
        double t0 = 0.0;
        auto [z1, dz1] = detail::blend(tr, t0, t_press, 0.0, press_depth);
        t0 += t_press + t_hold;
        auto [x1, dx1] = detail::blend(tr, t0, t_drag, 0.0, drag_distance);
        t0 += t_drag + t_hold;
        auto [z2, dz2] = detail::blend(tr, t0, t_lift, 0.0, -press_depth);
        t0 += t_lift;
        auto [x2, dx2] = detail::blend(tr, t0, t_return, 0.0, -drag_distance);
        m.offset[0] = x1 + x2;
        m.offset[2] = z1 + z2;
        m.rate[0] = dx1 + dx2;
        m.rate[2] = dz1 + dz2;
        return m;
    }

    /// Start time of the press phase of repetition i.
    [[nodiscard]] double rep_start(int i) const { return start + i * period(); }
};

using OperatorModel = std::variant<std::monostate, SineWrench, DescentScript, SineMotion, DragLiftScript>;

/// Either a hand/injected wrench or a scripted motion sample, depending on kind.
using OperatorOutput = std::variant<std::monostate, Vec6, MotionSample>;

inline OperatorOutput operator_model(const OperatorModel& model, double t) {
    return std::visit(
        [t](const auto& m) -> OperatorOutput {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, std::monostate>) {
                return std::monostate{};
            } else {
                return m.at(t);
            }
        },
        model);
}

}  // namespace teleop
