#include <random>

#include <gtest/gtest.h>

#include "teleop/se3.hpp"

using namespace teleop;

namespace {

constexpr int kCases = 10000;
constexpr double kTol = 1e-10;

struct PoseGen {
    std::mt19937_64 rng{20240611};
    std::uniform_real_distribution<double> pos{-1.0, 1.0};
    std::uniform_real_distribution<double> ang{-3.0, 3.0};
    std::uniform_real_distribution<double> pitch{-1.4, 1.4};
    std::uniform_real_distribution<double> rate{-2.0, 2.0};

    PoseXYZ pose() { return {Vec3(pos(rng), pos(rng), pos(rng)), Vec3(ang(rng), pitch(rng), ang(rng))}; }
    Vec6 vec() {
        Vec6 v;
        for (int i = 0; i < 6; ++i) v[i] = rate(rng);
        return v;
    }
    FrameState frame() { return {pose(), vec(), vec()}; }
};

Mat3 oracle_rotation(const Vec3& e) {
    return (Eigen::AngleAxisd(e.x(), Vec3::UnitX()) * Eigen::AngleAxisd(e.y(), Vec3::UnitY()) *
            Eigen::AngleAxisd(e.z(), Vec3::UnitZ()))
        .toRotationMatrix();
}

Eigen::Isometry3d oracle_iso(const PoseXYZ& p) {
    Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
    t.linear() = oracle_rotation(p.euler);
    t.translation() = p.position;
    return t;
}

void expect_same_transform(const PoseXYZ& a, const PoseXYZ& b, double tol = kTol) {
    const Eigen::Isometry3d ta = oracle_iso(a), tb = oracle_iso(b);
    EXPECT_LT((ta.matrix() - tb.matrix()).cwiseAbs().maxCoeff(), tol);
}

}  // namespace

TEST(Se3, RotationMatchesAxisAngleProduct) {
    PoseGen g;
    for (int i = 0; i < kCases; ++i) {
        const Vec3 e = g.pose().euler;
        ASSERT_LT((euler_to_rotation(e) - oracle_rotation(e)).cwiseAbs().maxCoeff(), 1e-14);
    }
}

TEST(Se3, PoseTransformRoundTrip) {
    PoseGen g;
    for (int i = 0; i < kCases; ++i) {
        const PoseXYZ p = g.pose();
        const PoseXYZ q = from_transform(to_transform(p));
        ASSERT_LT((q.to_vec() - p.to_vec()).cwiseAbs().maxCoeff(), kTol);
    }
}

TEST(Se3, GimbalLockIsReported) {
    Mat3 r = oracle_rotation(Vec3(0.3, std::numbers::pi / 2, -0.2));
    EXPECT_THROW(rotation_to_euler(r), GimbalLock);
    EXPECT_THROW(euler_rate_jacobian(Vec3(0.0, std::numbers::pi / 2, 0.0)), GimbalLock);
    EXPECT_NO_THROW(rotation_to_euler(oracle_rotation(Vec3(0.3, 1.5, -0.2))));
}

TEST(Se3, PlusMinusBetweenAgainstIsometry) {
    PoseGen g;
    for (int i = 0; i < kCases; ++i) {
        const PoseXYZ a = g.pose(), b = g.pose();
        const Eigen::Isometry3d ta = oracle_iso(a), tb = oracle_iso(b);
        ASSERT_LT((oracle_iso(pose_plus(a, b)).matrix() - (ta * tb).matrix()).cwiseAbs().maxCoeff(), kTol);
        ASSERT_LT((oracle_iso(pose_minus(a, b)).matrix() - (ta * tb.inverse()).matrix()).cwiseAbs().maxCoeff(), kTol);
        ASSERT_LT((oracle_iso(pose_between(a, b)).matrix() - (ta.inverse() * tb).matrix()).cwiseAbs().maxCoeff(), kTol);
    }
}

TEST(Se3, GroupProperties) {
    PoseGen g;
    const PoseXYZ e{};
    for (int i = 0; i < kCases; ++i) {
        const PoseXYZ a = g.pose(), b = g.pose(), c = g.pose();
        expect_same_transform(pose_plus(a, e), a);
        expect_same_transform(pose_plus(e, a), a);
        expect_same_transform(pose_minus(pose_plus(a, b), b), a);
        expect_same_transform(pose_plus(a, pose_between(a, b)), b);
        expect_same_transform(pose_plus(pose_plus(a, b), c), pose_plus(a, pose_plus(b, c)));
        expect_same_transform(pose_plus(pose_minus(e, a), a), e);
        if (HasFailure()) return;
    }
}

TEST(Se3, ComposeMinusInvertsComposePlus) {
    PoseGen g;
    for (int i = 0; i < kCases; ++i) {
        const FrameState a = g.frame(), b = g.frame();
        const FrameState r = compose_minus(compose_plus(a, b), b);
        expect_same_transform(r.pose, a.pose);
        ASSERT_LT((r.vel - a.vel).cwiseAbs().maxCoeff(), kTol);
        ASSERT_LT((r.acc - a.acc).cwiseAbs().maxCoeff(), kTol);
    }
}

TEST(Se3, ComposeIdentityAndAssociativeVelocity) {
    PoseGen g;
    for (int i = 0; i < 1000; ++i) {
        const FrameState a = g.frame(), b = g.frame(), c = g.frame();
        const FrameState l = compose_plus(compose_plus(a, b), c);
        const FrameState r = compose_plus(a, compose_plus(b, c));
        expect_same_transform(l.pose, r.pose);
        ASSERT_LT((l.vel - r.vel).cwiseAbs().maxCoeff(), 1e-9);
        const FrameState z = compose_plus(a, FrameState::identity());
        ASSERT_LT((z.vel - a.vel).cwiseAbs().maxCoeff(), kTol);
    }
}

// The composed point moves with a's world twist plus b's motion seen in a.
TEST(Se3, ComposeVelocityMatchesFiniteDifference) {
    PoseGen g;
    const double h = 1e-6;
    for (int i = 0; i < 200; ++i) {
        const FrameState a = g.frame(), b = g.frame();
        auto at = [&](double t) {
            Eigen::Isometry3d ta = Eigen::Isometry3d::Identity();
            const Vec3 wa = a.vel.tail<3>();
            const Mat3 Ra = (wa.norm() > 0 ? Eigen::AngleAxisd(wa.norm() * t, wa.normalized()).toRotationMatrix()
                                           : Mat3::Identity()) *
                            oracle_rotation(a.pose.euler);
            ta.linear() = Ra;
            ta.translation() = a.pose.position + a.vel.head<3>() * t;
            const Vec3 wb = b.vel.tail<3>();
            Eigen::Isometry3d tb = Eigen::Isometry3d::Identity();
            tb.linear() = Eigen::AngleAxisd(wb.norm() * t, wb.normalized()).toRotationMatrix() * oracle_rotation(b.pose.euler);
            tb.translation() = b.pose.position + b.vel.head<3>() * t;
            return ta * tb;
        };
        const Eigen::Isometry3d p = at(h), m = at(-h);
        const Vec3 v_fd = (p.translation() - m.translation()) / (2 * h);
        const Mat3 dR = (p.linear() - m.linear()) / (2 * h);
        const Mat3 W = dR * at(0).linear().transpose();
        const Vec3 w_fd(W(2, 1), W(0, 2), W(1, 0));
        const FrameState c = compose_plus(a, b);
        ASSERT_LT((c.vel.head<3>() - v_fd).norm(), 1e-6);
        ASSERT_LT((c.vel.tail<3>() - w_fd).norm(), 1e-6);
    }
}

TEST(Se3, EulerRateJacobianMatchesFiniteDifference) {
    PoseGen g;
    const double h = 1e-6;
    for (int i = 0; i < kCases; ++i) {
        const Vec3 e = g.pose().euler;
        const Vec3 ed = g.vec().head<3>();
        const Mat3 dR = (oracle_rotation(e + ed * h) - oracle_rotation(e - ed * h)) / (2 * h);
        const Mat3 W = oracle_rotation(e).transpose() * dR;  // body-frame skew
        const Vec3 w_fd(W(2, 1), W(0, 2), W(1, 0));
        ASSERT_LT((euler_rate_jacobian(e) * ed - w_fd).cwiseAbs().maxCoeff(), 1e-6) << "case " << i;
    }
}

TEST(Se3, IntegratePoseFollowsBodyTwist) {
    PoseGen g;
    for (int i = 0; i < 1000; ++i) {
        PoseXYZ x = g.pose();
        x.euler.y() = std::clamp(x.euler.y(), -1.2, 1.2);
        const Vec6 tw = g.vec();
        const double dt = 1e-6;
        const PoseXYZ y = integrate_pose(x, tw, dt);
        const Vec6 back = body_twist(x, y, dt);
        // linear part is world-frame in integrate_pose, body-frame in body_twist
        const Vec3 v_body = oracle_rotation(x.euler).transpose() * tw.head<3>();
        ASSERT_LT((back.head<3>() - v_body).norm(), 1e-4);
        ASSERT_LT((back.tail<3>() - tw.tail<3>()).norm(), 1e-4);
    }
    EXPECT_THROW(integrate_pose(PoseXYZ{}, Vec6::Zero(), 0.0), BadParams);
}
