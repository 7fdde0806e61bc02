#pragma once

// Compliant 6-DOF end-effector (series-elastic flange-to-TCP coupling).
//
// The flange->TCP relative pose is neutral (+) deflection. The spring map from
// deflection to wrench is a ForceMap; the shipped model is a decoupled linear
// spring per axis, and the inverse map is solved with a generic damped Newton
// iteration so a nonlinear map can be dropped in.

#include <cmath>
#include <concepts>
#include <string>

#include "teleop/errors.hpp"
#include "teleop/se3.hpp"

namespace teleop {

struct Delta6Params {
    Vec3 k_rot = Vec3::Constant(0.64);     // N*m/rad
    Vec3 k_trans = Vec3::Constant(800.0);  // N/m
    PoseXYZ neutral{Vec3(0.0, 0.0, 0.1), Vec3::Zero()};
    Vec6 deflection_limits = (Vec6() << 0.02, 0.02, 0.02, 0.5, 0.5, 0.5).finished();

    [[nodiscard]] Vec6 stiffness() const {
        Vec6 k;
        k << k_trans, k_rot;
        return k;
    }

    void validate() const {
        if (!(k_rot.minCoeff() > 0.0) || !(k_trans.minCoeff() > 0.0)) {
            throw BadParams("delta6 stiffness must be positive");
        }
        if (!(deflection_limits.minCoeff() > 0.0)) {
            throw BadParams("delta6 deflection limits must be positive");
        }
        if (!all_finite(neutral)) {
            throw BadParams("delta6 neutral pose must be finite");
        }
    }
};

struct Delta6State {
    Vec6 deflection = Vec6::Zero();
};

template <class M>
concept ForceMap = requires(const M& m, const Vec6& d) {
    { m.wrench(d) } -> std::convertible_to<Vec6>;
    { m.jacobian(d) } -> std::convertible_to<Mat6>;
};

struct LinearSpringMap {
    Vec6 k;

    [[nodiscard]] Vec6 wrench(const Vec6& d) const { return k.cwiseProduct(d); }
    [[nodiscard]] Mat6 jacobian(const Vec6& /*d*/) const { return k.asDiagonal(); }
};

struct RootSolve {
    Vec6 x = Vec6::Zero();
    int iterations = 0;
    double residual = 0.0;
};

/// Damped Newton on r(x) = map.wrench(x) - target, with step halving whenever
/// a full step does not reduce the infinity-norm residual.
template <ForceMap M>
RootSolve solve_wrench_root(const M& map, const Vec6& target, Vec6 x0, double tol, int max_iter) {
    RootSolve out;
    out.x = std::move(x0);
    Vec6 r = map.wrench(out.x) - target;
    double res = r.template lpNorm<Eigen::Infinity>();
    while (res > tol) {
        if (out.iterations >= max_iter) {
            throw NoConvergence("residual " + std::to_string(res) + " after " + std::to_string(max_iter) +
                                " iterations");
        }
        const Vec6 step = map.jacobian(out.x).partialPivLu().solve(r);
        double damping = 1.0;
        Vec6 trial = out.x - step;
        Vec6 r_trial = map.wrench(trial) - target;
        while (r_trial.template lpNorm<Eigen::Infinity>() > res && damping > 1e-6) {
            damping *= 0.5;
            trial = out.x - damping * step;
            r_trial = map.wrench(trial) - target;
        }
        out.x = trial;
        r = r_trial;
        res = r.template lpNorm<Eigen::Infinity>();
        ++out.iterations;
    }
    out.residual = res;
    return out;
}

inline bool within_limits(const Vec6& d, const Delta6Params& p) {
    return (d.cwiseAbs().array() <= p.deflection_limits.array()).all();
}

inline void check_limits(const Vec6& d, const Delta6Params& p) {
    if (!within_limits(d, p)) {
        for (int i = 0; i < 6; ++i) {
            if (std::abs(d[i]) > p.deflection_limits[i]) {
                throw DeflectionLimit("axis " + std::to_string(i) + " deflection " + std::to_string(d[i]) +
                                      " exceeds " + std::to_string(p.deflection_limits[i]));
            }
        }
    }
}

/// External wrench on the TCP (TCP frame) that holds the spring at deflection d.
inline Vec6 forward_wrench(const Delta6State& s, const Delta6Params& p) {
    check_limits(s.deflection, p);
    return LinearSpringMap{p.stiffness()}.wrench(s.deflection);
}

inline Delta6State inverse_wrench(const Vec6& wrench, const Delta6Params& p, double tol = 1e-8,
                                  int max_iter = 50) {
    const RootSolve sol = solve_wrench_root(LinearSpringMap{p.stiffness()}, wrench, Vec6::Zero(), tol, max_iter);
    if (!within_limits(sol.x, p)) {
        throw Unreachable("required deflection exceeds the mechanical limits");
    }
    return {sol.x};
}

/// Largest wrench in the reachable box, component-wise toward `wrench`.
inline Vec6 saturate_wrench(const Vec6& wrench, const Delta6Params& p) {
    const Vec6 cap = p.stiffness().cwiseProduct(p.deflection_limits) * (1.0 - 1e-9);
    return wrench.cwiseMax(-cap).cwiseMin(cap);
}

/// Flange->TCP relative state for a deflection; quasi-static, so zero rates.
inline FrameState deflection_to_pose(const Delta6State& s, const Delta6Params& p) {
    check_limits(s.deflection, p);
    return FrameState::at(pose_plus(p.neutral, PoseXYZ::from_vec(s.deflection)));
}

inline Delta6State pose_to_deflection(const FrameState& rel, const Delta6Params& p) {
    const Vec6 d = pose_between(p.neutral, rel.pose).to_vec();
    check_limits(d, p);
    return {d};
}

}  // namespace teleop
