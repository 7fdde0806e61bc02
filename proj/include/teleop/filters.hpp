#pragma once

// 6-axis RBJ notch bank with depth blending, and a first-order low-pass.

#include <array>
#include <cmath>
#include <complex>
#include <numbers>

#include "teleop/errors.hpp"
#include "teleop/se3.hpp"

namespace teleop {

struct NotchParams {
    Vec6 f0 = Vec6::Constant(1.0);      // Hz
    Vec6 kappa = Vec6::Constant(1.2);   // sharpness (Q)
    Vec6 lambda = Vec6::Constant(0.27); // depth, 0 = bypass, 1 = full notch
    double fs = 150.0;                  // Hz

    void validate() const {
        if (!(fs > 0.0)) throw BadParams("notch sample rate must be positive");
        for (int i = 0; i < 6; ++i) {
            if (!(f0[i] > 0.0 && f0[i] < fs / 2.0)) throw BadParams("notch f0 must lie in (0, fs/2)");
            if (!(kappa[i] > 0.0)) throw BadParams("notch kappa must be positive");
            if (!(lambda[i] >= 0.0 && lambda[i] <= 1.0)) throw BadParams("notch lambda must lie in [0, 1]");
        }
    }
};

/// One normalized biquad (a0 == 1) in transposed direct form II.
struct BiquadSection {
    double b0 = 1, b1 = 0, b2 = 0, a1 = 0, a2 = 0;
    double z1 = 0, z2 = 0;

    double step(double x) {
        const double y = b0 * x + z1;
        z1 = b1 * x - a1 * y + z2;
        z2 = b2 * x - a2 * y;
        return y;
    }

    /// H(e^{jw}) for w in rad/sample.
    [[nodiscard]] std::complex<double> response(double w) const {
        const std::complex<double> z1c = std::polar(1.0, -w);
        const std::complex<double> z2c = z1c * z1c;
        return (b0 + b1 * z1c + b2 * z2c) / (1.0 + a1 * z1c + a2 * z2c);
    }
};

struct NotchBank {
    std::array<BiquadSection, 6> sections{};
    Vec6 lambda = Vec6::Zero();
    double fs = 150.0;

    /// Blended response (1 - lambda) + lambda * H on one axis, f in Hz.
    [[nodiscard]] std::complex<double> response(int axis, double f) const {
        const double w = 2.0 * std::numbers::pi * f / fs;
        return (1.0 - lambda[axis]) + lambda[axis] * sections[axis].response(w);
    }

    void reset() {
        for (auto& s : sections) s.z1 = s.z2 = 0.0;
    }
};

inline NotchBank notch_design(const NotchParams& p) {
    p.validate();
    NotchBank bank;
    bank.lambda = p.lambda;
    bank.fs = p.fs;
    for (int i = 0; i < 6; ++i) {
        const double w0 = 2.0 * std::numbers::pi * p.f0[i] / p.fs;
        const double eta = std::sin(w0) / (2.0 * p.kappa[i]);
        const double a0 = 1.0 + eta;
        auto& s = bank.sections[i];
        s.b0 = 1.0 / a0;
        s.b1 = -2.0 * std::cos(w0) / a0;
        s.b2 = 1.0 / a0;
        s.a1 = -2.0 * std::cos(w0) / a0;
        s.a2 = (1.0 - eta) / a0;
    }
    return bank;
}

inline Vec6 notch_step(NotchBank& bank, const Vec6& raw) {
    Vec6 out;
    for (int i = 0; i < 6; ++i) {
        const double filtered = bank.sections[i].step(raw[i]);
        const double lam = bank.lambda[i];
        // lambda == 0 must be a bit-exact bypass (signed zeros included).
        out[i] = lam == 0.0 ? raw[i] : (1.0 - lam) * raw[i] + lam * filtered;
    }
    return out;
}

struct LowPassState {
    double tau = 0.03;  // s
    Vec6 y = Vec6::Zero();
};

/// Backward-Euler first-order low-pass, alpha = dt / (tau + dt).
inline Vec6 lowpass_step(LowPassState& s, const Vec6& u, double dt) {
    if (!(dt > 0.0)) throw BadParams("lowpass_step requires dt > 0");
    if (!(s.tau > 0.0)) throw BadParams("low-pass time constant must be positive");
    const double alpha = dt / (s.tau + dt);
    s.y += alpha * (u - s.y);
    return s.y;
}

}  // namespace teleop
