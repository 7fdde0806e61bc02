#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "teleop/experiments.hpp"
#include "teleop/netem.hpp"

using namespace teleop;

namespace {

// Moments of max(0, X), X ~ N(mu, s^2), by direct quadrature.
std::pair<double, double> quadrature_moments(double mu, double s) {
    const int n = 200000;
    const double lo = mu - 12 * s, hi = mu + 12 * s, h = (hi - lo) / n;
    double m1 = 0, m2 = 0;
    for (int i = 0; i <= n; ++i) {
        const double x = lo + i * h;
        const double w = (i == 0 || i == n) ? 0.5 : 1.0;
        const double pdf = std::exp(-0.5 * (x - mu) * (x - mu) / (s * s)) / (s * std::sqrt(2 * std::numbers::pi));
        const double y = std::max(0.0, x);
        m1 += w * y * pdf * h;
        m2 += w * y * y * pdf * h;
    }
    return {m1, std::sqrt(m2 - m1 * m1)};
}

}  // namespace

TEST(Netem, RectifiedMomentsMatchQuadrature) {
    for (auto [mu, s] : {std::pair{0.04, 0.01}, {0.12, 0.04}, {0.01, 0.02}, {-0.01, 0.02}}) {
        const auto want = quadrature_moments(mu, s);
        const auto got = rectified_gaussian(mu, s);
        EXPECT_NEAR(got.mean, want.first, 1e-9);
        EXPECT_NEAR(got.std, want.second, 1e-9);
    }
}

TEST(Netem, TableConditionsReproduceTheirStatistics) {
    for (const char* name : {"local", "good", "fair", "poor"}) {
        const NetworkCondition c = *NetworkCondition::named(name);
        const NetemReport r = netem_validate(c, 100000, 7);
        EXPECT_TRUE(r.pass()) << name << " mean " << r.mean << " std " << r.std << " loss " << r.loss;
        EXPECT_NEAR(r.loss, c.loss_prob, 0.001);
        if (c.std_delay > 0) {
            EXPECT_NEAR(r.mean, c.mean_delay, 0.02 * c.mean_delay) << name;
            EXPECT_NEAR(r.std, c.std_delay, 0.03 * c.std_delay) << name;
        }
    }
}

TEST(Netem, SameSeedSameDraws) {
    const NetworkCondition c = NetworkCondition::poor();
    ChannelState<int> a(42), b(42), other(43);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = channel_send(TimedMsg<int>{0.0, 1, 0}, c, a, 0.0);
        const auto y = channel_send(TimedMsg<int>{0.0, 1, 0}, c, b, 0.0);
        const auto z = channel_send(TimedMsg<int>{0.0, 1, 0}, c, other, 0.0);
        ASSERT_EQ(x.dropped, y.dropped);
        ASSERT_EQ(x.delay, y.delay);
        differs = differs || x.delay != z.delay;
    }
    EXPECT_TRUE(differs);
}

TEST(Netem, LocalDeliversImmediately) {
    ChannelState<int> ch(1);
    channel_send(TimedMsg<int>{0.5, 1, 17}, NetworkCondition::local(), ch, 0.5);
    const auto r = channel_poll(ch, 0.5);
    ASSERT_TRUE(r.payload);
    EXPECT_EQ(*r.payload, 17);
    EXPECT_FALSE(r.held);
}

TEST(Netem, TotalLossDropsEverything) {
    ChannelState<int> ch(1);
    const NetworkCondition dead{0.0, 0.0, 1.0};
    for (int i = 0; i < 100; ++i) EXPECT_TRUE(channel_send(TimedMsg<int>{0.0, std::uint64_t(i + 1), i}, dead, ch, 0.0).dropped);
    EXPECT_FALSE(channel_poll(ch, 1.0).payload);
}

TEST(Netem, OutOfOrderArrivalIsDiscardedAndLastSampleHeld) {
    ChannelState<int> ch(1);
    channel_send(TimedMsg<int>{0.00, 1, 10}, NetworkCondition{0.100, 0.0, 0.0}, ch, 0.00);
    channel_send(TimedMsg<int>{0.01, 2, 20}, NetworkCondition{0.0, 0.0, 0.0}, ch, 0.01);

    auto r = channel_poll(ch, 0.02);
    ASSERT_TRUE(r.payload);
    EXPECT_EQ(*r.payload, 20);
    EXPECT_EQ(r.seq, 2u);

    r = channel_poll(ch, 0.2);  // seq 1 lands late
    EXPECT_TRUE(r.held);
    EXPECT_EQ(*r.payload, 20);
    EXPECT_EQ(ch.discarded, 1u);
}

TEST(Netem, NewestOfSimultaneousArrivalsWins) {
    ChannelState<int> ch(1);
    for (int i = 1; i <= 3; ++i) channel_send(TimedMsg<int>{0.0, std::uint64_t(i), i}, NetworkCondition::local(), ch, 0.0);
    const auto r = channel_poll(ch, 0.0);
    EXPECT_EQ(*r.payload, 3);
    EXPECT_EQ(ch.discarded, 2u);
}

TEST(Netem, WatchdogUsesArrivalTime) {
    ChannelState<int> ch(1);
    EXPECT_EQ(watchdog_check(ch, 0.5, 0.5), WatchdogStatus::Ok);
    EXPECT_EQ(watchdog_check(ch, 0.5001, 0.5), WatchdogStatus::Fallback);
    channel_send(TimedMsg<int>{0.9, 1, 0}, NetworkCondition{0.1, 0.0, 0.0}, ch, 0.9);
    channel_poll(ch, 1.02);
    EXPECT_NEAR(ch.last_delivery_time, 1.0, 1e-15);
    EXPECT_EQ(watchdog_check(ch, 1.5, 0.5), WatchdogStatus::Ok);
    EXPECT_EQ(watchdog_check(ch, 1.51, 0.5), WatchdogStatus::Fallback);
    EXPECT_THROW(watchdog_check(ch, 1.0, 0.0), BadParams);
}

TEST(Netem, ConditionValidation) {
    EXPECT_THROW((NetworkCondition{0.1, -0.01, 0.0}).validate(), BadParams);
    EXPECT_THROW((NetworkCondition{0.1, 0.01, 1.5}).validate(), BadParams);
    EXPECT_FALSE(NetworkCondition::named("lunar"));
}
