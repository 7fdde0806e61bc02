#pragma once

// Emulated teleoperation channel: truncated-Gaussian delay, Bernoulli loss,
// latest-sample hold on the receiving side and a delivery watchdog.

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "teleop/errors.hpp"

namespace teleop {

struct NetworkCondition {
    double mean_delay = 0.0;  // s
    double std_delay = 0.0;   // s
    double loss_prob = 0.0;   // [0, 1]

    void validate() const {
        if (!(mean_delay >= 0.0)) throw BadParams("mean delay must be >= 0");
        if (!(std_delay >= 0.0)) throw BadParams("delay std must be >= 0");
        if (!(loss_prob >= 0.0 && loss_prob <= 1.0)) throw BadParams("loss probability must lie in [0, 1]");
    }

    static NetworkCondition local() { return {0.0, 0.0, 0.0}; }
    static NetworkCondition good() { return {0.040, 0.010, 0.0}; }
    static NetworkCondition fair() { return {0.080, 0.020, 0.005}; }
    static NetworkCondition poor() { return {0.120, 0.040, 0.010}; }

    static std::optional<NetworkCondition> named(const std::string& name) {
        if (name == "local") return local();
        if (name == "good") return good();
        if (name == "fair") return fair();
        if (name == "poor") return poor();
        return std::nullopt;
    }
};

template <class P>
struct TimedMsg {
    double stamp = 0.0;
    std::uint64_t seq = 0;
    P payload{};
};

enum class WatchdogStatus { Ok, Fallback };

template <class P>
struct ChannelState {
    struct InFlight {
        double deliver_at;
        TimedMsg<P> msg;
    };

    explicit ChannelState(std::uint64_t seed = 0) : rng(seed) {}

    std::vector<InFlight> in_flight;
    std::optional<TimedMsg<P>> held;
    std::uint64_t last_delivered_seq = 0;
    bool any_delivered = false;
    double last_delivery_time = 0.0;
    std::uint64_t sent = 0, dropped = 0, delivered = 0, discarded = 0;
    std::mt19937_64 rng;
};

struct SendOutcome {
    bool dropped = false;
    double delay = 0.0;
};

template <class P>
SendOutcome channel_send(const TimedMsg<P>& msg, const NetworkCondition& cond, ChannelState<P>& ch, double now) {
    ++ch.sent;
    SendOutcome out;
    // Draws are made unconditionally so the random stream does not depend on
    // the condition's parameters being zero.
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(ch.rng);
    const double g = std::normal_distribution<double>(0.0, 1.0)(ch.rng);
    if (u < cond.loss_prob) {
        ++ch.dropped;
        out.dropped = true;
        return out;
    }
    out.delay = std::max(0.0, cond.mean_delay + cond.std_delay * g);
    ch.in_flight.push_back({now + out.delay, msg});
    return out;
}

template <class P>
struct PollResult {
    std::optional<P> payload;
    std::uint64_t seq = 0;
    double stamp = 0.0;
    bool held = false;  // true when no new message surfaced on this poll
};

template <class P>
PollResult<P> channel_poll(ChannelState<P>& ch, double now) {
    std::optional<TimedMsg<P>> newest;
    double newest_arrival = 0.0;
    auto keep = ch.in_flight.begin();
    for (auto it = ch.in_flight.begin(); it != ch.in_flight.end(); ++it) {
        if (it->deliver_at > now) {
            *keep++ = std::move(*it);
            continue;
        }
        const bool stale = ch.any_delivered && it->msg.seq <= ch.last_delivered_seq;
        if (stale || (newest && it->msg.seq < newest->seq)) {
            ++ch.discarded;
            continue;
        }
        if (newest) ++ch.discarded;
        newest = it->msg;
        newest_arrival = it->deliver_at;
    }
    ch.in_flight.erase(keep, ch.in_flight.end());

    PollResult<P> r;
    if (newest) {
        ch.held = newest;
        ch.last_delivered_seq = newest->seq;
        ch.last_delivery_time = newest_arrival;
        ch.any_delivered = true;
        ++ch.delivered;
    } else {
        r.held = true;
    }
    if (ch.held) {
        r.payload = ch.held->payload;
        r.seq = ch.held->seq;
        r.stamp = ch.held->stamp;
    }
    return r;
}

/// Before the first delivery the channel is measured from t = 0.
template <class P>
WatchdogStatus watchdog_check(const ChannelState<P>& ch, double now, double timeout) {
    if (!(timeout > 0.0)) throw BadParams("watchdog timeout must be positive");
    return now - ch.last_delivery_time > timeout ? WatchdogStatus::Fallback : WatchdogStatus::Ok;
}

}  // namespace teleop
