#pragma once

// Pose parameterization and kinematic composition.
//
// Conventions used throughout the library:
//  * A pose is [x, y, z, phi, theta, psi] with intrinsic X-then-Y-then-Z Euler
//    angles, i.e. R = Rx(phi) * Ry(theta) * Rz(psi).
//  * 6-vectors are ordered [linear; angular] for both twists and wrenches.
//  * FrameState velocities and accelerations are expressed in the parent frame
//    of the pose they accompany.

#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "teleop/errors.hpp"

namespace teleop {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

inline constexpr double kGimbalEps = 1e-6;

struct PoseXYZ {
    Vec3 position = Vec3::Zero();
    Vec3 euler = Vec3::Zero();

    static PoseXYZ from_vec(const Vec6& v) { return {v.head<3>(), v.tail<3>()}; }

    [[nodiscard]] Vec6 to_vec() const {
        Vec6 v;
        v << position, euler;
        return v;
    }
};

struct Transform {
    Mat3 rotation = Mat3::Identity();
    Vec3 translation = Vec3::Zero();

    [[nodiscard]] Transform inverse() const {
        return {rotation.transpose(), -(rotation.transpose() * translation)};
    }

    friend Transform operator*(const Transform& a, const Transform& b) {
        return {a.rotation * b.rotation, a.rotation * b.translation + a.translation};
    }
};

/// Pose together with its first and second time derivatives.
struct FrameState {
    PoseXYZ pose;
    Vec6 vel = Vec6::Zero();
    Vec6 acc = Vec6::Zero();

    static FrameState identity() { return {}; }
    static FrameState at(const PoseXYZ& p) { return {p, Vec6::Zero(), Vec6::Zero()}; }
};

inline bool all_finite(const Vec6& v) { return v.allFinite(); }
inline bool all_finite(const PoseXYZ& p) { return p.position.allFinite() && p.euler.allFinite(); }
inline bool all_finite(const FrameState& s) {
    return all_finite(s.pose) && s.vel.allFinite() && s.acc.allFinite();
}

inline Mat3 rot_x(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << 1, 0, 0, 0, c, -s, 0, s, c;
    return r;
}

inline Mat3 rot_y(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << c, 0, s, 0, 1, 0, -s, 0, c;
    return r;
}

inline Mat3 rot_z(double a) {
    const double c = std::cos(a), s = std::sin(a);
    Mat3 r;
    r << c, -s, 0, s, c, 0, 0, 0, 1;
    return r;
}

inline Mat3 euler_to_rotation(const Vec3& e) { return rot_x(e.x()) * rot_y(e.y()) * rot_z(e.z()); }

inline Transform to_transform(const PoseXYZ& x) { return {euler_to_rotation(x.euler), x.position}; }

inline Vec3 rotation_to_euler(const Mat3& r, double eps = kGimbalEps) {
    const double cos_theta = std::hypot(r(0, 0), r(0, 1));
    if (cos_theta < eps) {
        throw GimbalLock("|cos(theta)| = " + std::to_string(cos_theta));
    }
    return {std::atan2(-r(1, 2), r(2, 2)), std::atan2(r(0, 2), cos_theta), std::atan2(-r(0, 1), r(0, 0))};
}

/// vec_XYZ: inverse of to_transform on |theta| < pi/2 - eps.
inline PoseXYZ from_transform(const Transform& t, double eps = kGimbalEps) {
    return {t.translation, rotation_to_euler(t.rotation, eps)};
}

inline Mat3 skew(const Vec3& v) {
    Mat3 s;
    s << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return s;
}

/// Maps XYZ Euler-angle rates to body-frame angular velocity: omega_body = J * euler_dot.
inline Mat3 euler_rate_jacobian(const Vec3& e, double eps = kGimbalEps) {
    const double ct = std::cos(e.y()), st = std::sin(e.y());
    if (std::abs(ct) < eps) {
        throw GimbalLock("euler-rate jacobian at theta = " + std::to_string(e.y()));
    }
    const double cp = std::cos(e.z()), sp = std::sin(e.z());
    Mat3 j;
    j << ct * cp, sp, 0,  //
        -ct * sp, cp, 0,  //
        st, 0, 1;
    return j;
}

/// Forward-Euler step: position += v*dt, euler += J^-1 * omega_body * dt.
inline PoseXYZ integrate_pose(const PoseXYZ& x, const Vec6& twist, double dt) {
    if (!(dt > 0.0)) {
        throw BadParams("integrate_pose requires dt > 0");
    }
    PoseXYZ out = x;
    out.position += twist.head<3>() * dt;
    if (!twist.tail<3>().isZero(0.0)) {
        out.euler += euler_rate_jacobian(x.euler).inverse() * twist.tail<3>() * dt;
    }
    return out;
}

/// Pose-only composition: vec_XYZ(T(a) * T(b)).
inline PoseXYZ pose_plus(const PoseXYZ& a, const PoseXYZ& b) {
    return from_transform(to_transform(a) * to_transform(b));
}

/// Pose-only right difference: vec_XYZ(T(a) * T(b)^-1).
inline PoseXYZ pose_minus(const PoseXYZ& a, const PoseXYZ& b) {
    return from_transform(to_transform(a) * to_transform(b).inverse());
}

/// Pose of b seen from a: vec_XYZ(T(a)^-1 * T(b)).
inline PoseXYZ pose_between(const PoseXYZ& a, const PoseXYZ& b) {
    return from_transform(to_transform(a).inverse() * to_transform(b));
}

/// Twist, expressed in the `from` frame, that carries `from` to `to` in `dt` (first-order).
inline Vec6 body_twist(const PoseXYZ& from, const PoseXYZ& to, double dt) {
    const Transform rel = to_transform(from).inverse() * to_transform(to);
    const Eigen::AngleAxisd aa(rel.rotation);
    Vec6 tw;
    tw << rel.translation, aa.axis() * aa.angle();
    return tw / dt;
}

/// a (+) b, with b expressed relative to a's frame.
///
/// Velocities are transported by the rigid-body adjoint. In the acceleration
/// transport the centripetal and Coriolis cross terms are dropped; relative
/// states are quasi-static in every use of this operator.
inline FrameState compose_plus(const FrameState& a, const FrameState& b) {
    const Transform ta = to_transform(a.pose);
    const Transform tb = to_transform(b.pose);
    const Mat3& ra = ta.rotation;
    const Vec3 r = ra * tb.translation;

    FrameState c;
    c.pose = from_transform(ta * tb);

    const Vec3 w = a.vel.tail<3>() + ra * b.vel.tail<3>();
    const Vec3 v = a.vel.head<3>() + a.vel.tail<3>().cross(r) + ra * b.vel.head<3>();
    c.vel << v, w;

    const Vec3 alpha = a.acc.tail<3>() + ra * b.acc.tail<3>();
    const Vec3 lin = a.acc.head<3>() + a.acc.tail<3>().cross(r) + ra * b.acc.head<3>();
    c.acc << lin, alpha;
    return c;
}

/// c (-) b: the exact right inverse of compose_plus, compose_minus(compose_plus(a, b), b) == a.
inline FrameState compose_minus(const FrameState& c, const FrameState& b) {
    const Transform tc = to_transform(c.pose);
    const Transform tb = to_transform(b.pose);
    const Transform ta = tc * tb.inverse();
    const Mat3& ra = ta.rotation;
    const Vec3 r = ra * tb.translation;

    FrameState a;
    a.pose = from_transform(ta);

    const Vec3 w = c.vel.tail<3>() - ra * b.vel.tail<3>();
    const Vec3 v = c.vel.head<3>() - w.cross(r) - ra * b.vel.head<3>();
    a.vel << v, w;

    const Vec3 alpha = c.acc.tail<3>() - ra * b.acc.tail<3>();
    const Vec3 lin = c.acc.head<3>() - alpha.cross(r) - ra * b.acc.head<3>();
    a.acc << lin, alpha;
    return a;
}

}  // namespace teleop
