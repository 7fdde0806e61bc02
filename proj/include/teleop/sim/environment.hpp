#pragma once

// Rigid plate with penalty contact and regularized Coulomb friction, plus the
// quasi-static solve that loads a compliant end-effector against it.
//
// World frame note: tool z points toward the plate, so the plate surface lies
// at +height along z from the follower home and the contact force is along -z.

#include <algorithm>
#include <cmath>

#include "teleop/delta6.hpp"
#include "teleop/errors.hpp"
#include "teleop/se3.hpp"

namespace teleop {

struct EnvPlate {
    double height = 0.192;  // m from home along the approach axis
    double k_env = 5e4;     // N/m
    double mu = 0.3;
    double slip_velocity = 0.005;  // m/s, friction is viscous below this slip speed
    double surface_z = 0.192;      // absolute, filled in when the session is built
    bool enabled = true;

    void validate(double max_k = 0.0) const {
        if (!(k_env > 0.0)) throw BadParams("plate stiffness must be positive");
        if (!(mu >= 0.0)) throw BadParams("friction coefficient must be >= 0");
        if (!(slip_velocity > 0.0)) throw BadParams("slip velocity must be positive");
        if (max_k > 0.0 && k_env < 50.0 * max_k) throw BadParams("plate must be at least 50x stiffer than K");
    }
};

/// Unit-force friction direction: -v_t/|v_t| capped, linear below slip_velocity.
inline Eigen::Vector2d friction_direction(const Vec3& vel, const EnvPlate& plate) {
    const Eigen::Vector2d vt = vel.head<2>();
    return -vt / std::max(vt.norm(), plate.slip_velocity);
}

/// Contact wrench on the TCP in world coordinates [force; torque].
inline Vec6 environment_step(const FrameState& tcp, const EnvPlate& plate) {
    Vec6 w = Vec6::Zero();
    if (!plate.enabled) return w;
    const double pen = tcp.pose.position.z() - plate.surface_z;
    if (pen <= 0.0) return w;
    const double fn = plate.k_env * pen;
    const Eigen::Vector2d dir = friction_direction(tcp.vel.head<3>(), plate);
    w[0] = plate.mu * fn * dir.x();
    w[1] = plate.mu * fn * dir.y();
    w[2] = -fn;
    return w;
}

struct ContactSolution {
    Delta6State deflection;
    PoseXYZ tcp;
    Vec6 world_wrench = Vec6::Zero();  // on the TCP
    double normal_force = 0.0;
};

/// Quasi-static series solve of plate spring and end-effector springs for a
/// given flange pose. `tcp_vel` (previous tick) sets the friction direction.
/// Contact acts at the TCP so only the translational springs are loaded,
/// which makes the TCP displacement exactly linear in the contact force.
inline ContactSolution solve_contact(const PoseXYZ& flange, const Delta6Params& d6, const EnvPlate& plate,
                                     const Vec3& tcp_vel) {
    ContactSolution out;
    const Transform tcp0 = to_transform(flange) * to_transform(d6.neutral);
    out.tcp = from_transform(tcp0);
    if (!plate.enabled) return out;
    const double a = tcp0.translation.z() - plate.surface_z;
    if (a <= 0.0) return out;

    const Mat3& R = tcp0.rotation;
    const Mat3 C = R * d6.k_trans.cwiseInverse().asDiagonal() * R.transpose();
    const Eigen::Vector2d dir = friction_direction(tcp_vel, plate);
    const Vec3 u(plate.mu * dir.x(), plate.mu * dir.y(), -1.0);
    const double denom = 1.0 - plate.k_env * (C * u).z();
    if (!(denom > 0.0)) throw NoConvergence("contact solve is ill-posed for this friction/orientation");
    const double fn = plate.k_env * a / denom;

    const Vec3 f = fn * u;
    Vec6 w_tcp = Vec6::Zero();
    w_tcp.head<3>() = R.transpose() * f;
    out.deflection = inverse_wrench(w_tcp, d6);
    out.tcp = pose_plus(flange, pose_plus(d6.neutral, PoseXYZ::from_vec(out.deflection.deflection)));
    out.world_wrench.head<3>() = f;
    out.normal_force = fn;
    return out;
}

}  // namespace teleop
