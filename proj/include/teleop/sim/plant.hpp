#pragma once

// Stand-in for a manipulator's position inner loop: one second-order servo
// per pose coordinate, discretized exactly, with rate and acceleration limits.

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/MatrixFunctions>

#include "teleop/errors.hpp"
#include "teleop/se3.hpp"

namespace teleop {

struct PlantParams {
    double natural_freq = 10.0;  // Hz
    double damping_ratio = 1.0;
    double rate = 250.0;  // Hz
    Vec6 vel_limit = (Vec6() << 1, 1, 1, 3, 3, 3).finished();
    Vec6 acc_limit = (Vec6() << 20, 20, 20, 60, 60, 60).finished();
    bool ideal = false;  // track the command exactly (infinite bandwidth)

    void validate() const {
        if (!(natural_freq > 0.0)) throw BadParams("plant natural frequency must be positive");
        if (!(damping_ratio > 0.0)) throw BadParams("plant damping ratio must be positive");
        if (!(rate > 0.0)) throw BadParams("plant rate must be positive");
        if (!(vel_limit.minCoeff() > 0.0) || !(acc_limit.minCoeff() > 0.0)) {
            throw BadParams("plant limits must be positive");
        }
    }
};

struct PlantState {
    Vec6 q = Vec6::Zero();  // pose vector
    Vec6 qd = Vec6::Zero();
    Vec6 qdd = Vec6::Zero();
    Eigen::Matrix2d Phi = Eigen::Matrix2d::Identity();
    Eigen::Vector2d Gamma = Eigen::Vector2d::Zero();
    double dt = 0.0;

    [[nodiscard]] FrameState frame() const { return {PoseXYZ::from_vec(q), qd, qdd}; }
};

inline PlantState make_plant(const PlantParams& p, const PoseXYZ& initial) {
    p.validate();
    PlantState s;
    s.q = initial.to_vec();
    s.dt = 1.0 / p.rate;
    const double wn = 2.0 * std::numbers::pi * p.natural_freq;
    // Zero-order-hold discretization of x' = A x + b u via the augmented exponential.
    Eigen::Matrix3d M = Eigen::Matrix3d::Zero();
    M(0, 1) = 1.0;
    M(1, 0) = -wn * wn;
    M(1, 1) = -2.0 * p.damping_ratio * wn;
    M(1, 2) = wn * wn;
    const Eigen::Matrix3d E = (M * s.dt).exp();
    s.Phi = E.topLeftCorner<2, 2>();
    s.Gamma = E.topRightCorner<2, 1>();
    return s;
}

inline FrameState plant_step(PlantState& s, const FrameState& cmd, const PlantParams& p) {
    const Vec6 u = cmd.pose.to_vec();
    if (p.ideal) {
        s.qdd = ((u - s.q) / s.dt - s.qd) / s.dt;
        s.qd = (u - s.q) / s.dt;
        s.q = u;
        return s.frame();
    }
    for (int i = 0; i < 6; ++i) {
        const Eigen::Vector2d x(s.q[i], s.qd[i]);
        const Eigen::Vector2d xn = s.Phi * x + s.Gamma * u[i];
        double v = xn[1];
        double a = (v - s.qd[i]) / s.dt;
        bool limited = false;
        if (std::abs(a) > p.acc_limit[i]) {
            a = std::copysign(p.acc_limit[i], a);
            v = s.qd[i] + a * s.dt;
            limited = true;
        }
        if (std::abs(v) > p.vel_limit[i]) {
            v = std::copysign(p.vel_limit[i], v);
            a = (v - s.qd[i]) / s.dt;
            limited = true;
        }
        s.q[i] = limited ? s.q[i] + 0.5 * (s.qd[i] + v) * s.dt : xn[0];
        s.qd[i] = v;
        s.qdd[i] = a;
    }
    return s.frame();
}

}  // namespace teleop
