#pragma once

// Scenario configuration: defaults per scenario kind, INI loading with strict
// key checking, and a JSON rendering of the resolved configuration.

#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <nlohmann/json.hpp>

#include "teleop/delta6.hpp"
#include "teleop/errors.hpp"
#include "teleop/follower.hpp"
#include "teleop/leader.hpp"
#include "teleop/netem.hpp"
#include "teleop/sim/environment.hpp"
#include "teleop/sim/gripper.hpp"
#include "teleop/sim/operator.hpp"
#include "teleop/sim/plant.hpp"

namespace teleop {

enum class ScenarioKind { LeaderBode, FollowerBode, Collision, Passivity, Outage, NetemValidate };

inline const char* to_string(ScenarioKind k) {
    switch (k) {
        case ScenarioKind::LeaderBode: return "leader-bode";
        case ScenarioKind::FollowerBode: return "follower-bode";
        case ScenarioKind::Collision: return "collision";
        case ScenarioKind::Passivity: return "passivity";
        case ScenarioKind::Outage: return "outage";
        case ScenarioKind::NetemValidate: return "netem-validate";
    }
    return "?";
}

inline ScenarioKind parse_kind(const std::string& s) {
    for (auto k : {ScenarioKind::LeaderBode, ScenarioKind::FollowerBode, ScenarioKind::Collision,
                   ScenarioKind::Passivity, ScenarioKind::Outage, ScenarioKind::NetemValidate}) {
        if (s == to_string(k)) return k;
    }
    throw ConfigError("unknown scenario kind '" + s + "'");
}

struct OperatorConfig {
    SineWrench sine{};
    DescentScript descent{};
    SineMotion motion{};
    DragLiftScript drag{};
    double target_force = 3.0;  // N, used to place the hand when press_depth is not given
    bool press_depth_set = false;
};

struct BodeConfig {
    double settle = 5.0;       // s
    double min_cycles = 10.0;
    double min_window = 20.0;  // s
    std::vector<double> freqs;  // empty: default grid
};

struct ScenarioConfig {
    ScenarioKind kind = ScenarioKind::Collision;
    std::string net_name = "local";
    NetworkCondition net = NetworkCondition::local();
    std::uint64_t seed = 1;
    double duration = 10.0;
    int record_every = 1;
    double tele_rate = 50.0;
    double watchdog_timeout = 0.5;

    LeaderParams leader{};
    FollowerParams follower{};
    Delta6Params d6_leader{};
    Delta6Params d6_follower{};
    PlantParams plant_leader{};
    PlantParams plant_follower{};
    EnvPlate plate{};
    GripperParams gripper{};
    double grip_command = 0.08;  // operator grip position

    OperatorConfig op{};
    double outage_start = 2.6;
    double outage_end = 3.6;
    BodeConfig bode{};
    int netem_samples = 100000;

    /// Base tick rate: least common multiple of every loop rate.
    [[nodiscard]] long base_rate() const {
        auto as_int = [](double r, const char* what) {
            const long n = std::lround(r);
            if (n <= 0 || std::abs(r - static_cast<double>(n)) > 1e-9) {
                throw ConfigError(std::string(what) + " must be a positive integer rate in Hz");
            }
            return n;
        };
        const long a = as_int(plant_leader.rate, "f_c (leader)");
        const long b = as_int(plant_follower.rate, "f_c (follower)");
        const long c = as_int(leader.rate, "f_admt");
        const long d = as_int(follower.rate, "f_impd");
        const long e = as_int(tele_rate, "f_tele");
        if (c % e != 0 || d % e != 0) throw ConfigError("f_tele must divide f_admt and f_impd");
        return std::lcm(std::lcm(std::lcm(a, b), std::lcm(c, d)), e);
    }

    void validate() const {
        try {
            (void)base_rate();
            net.validate();
            leader.validate();
            follower.validate();
            d6_leader.validate();
            d6_follower.validate();
            plant_leader.validate();
            plant_follower.validate();
            plate.validate(follower.K.head<3>().maxCoeff());
            gripper.validate();
        } catch (const ConfigError&) {
            throw;
        } catch (const Error& e) {
            throw ConfigError(e.what());
        }
        if (!(duration > 0.0)) throw ConfigError("duration must be positive");
        if (record_every < 1) throw ConfigError("record_every must be >= 1");
        if (!(watchdog_timeout > 0.0)) throw ConfigError("watchdog_timeout must be positive");
        if (!(outage_end >= outage_start)) throw ConfigError("outage end precedes start");
        if (netem_samples < 1) throw ConfigError("netem samples must be positive");
    }
};

/// Hand depth that settles at `target_force` through the plate, the follower
/// stiffness and the hand spring, all in series.
inline double press_depth_for(const ScenarioConfig& c) {
    const double f = c.op.target_force;
    return c.plate.height + f / c.plate.k_env + f / c.follower.K[2] + f / c.op.drag.k_hand;
}

inline ScenarioConfig default_config(ScenarioKind kind) {
    ScenarioConfig c;
    c.kind = kind;
    c.plant_leader.natural_freq = 2.5;
    c.plant_follower.natural_freq = 10.0;
    switch (kind) {
        case ScenarioKind::LeaderBode:
            c.plate.enabled = false;
            c.duration = 30.0;
            break;
        case ScenarioKind::FollowerBode:
            c.plate.enabled = false;
            c.duration = 30.0;
            break;
        case ScenarioKind::Collision:
            c.plate.height = 0.192;
            c.duration = 10.0;
            break;
        case ScenarioKind::Passivity:
            c.plate.height = 0.03;
            c.duration = c.op.drag.end_time() + 1.0;
            break;
        case ScenarioKind::Outage:
            c.plate.height = 0.03;
            c.op.drag.repetitions = 1;
            c.duration = 6.0;
            break;
        case ScenarioKind::NetemValidate:
            c.plate.enabled = false;
            c.duration = 1.0;
            break;
    }
    return c;
}

/// Fill in values derived from others (absolute plate surface, notch rate, hand depth).
inline void resolve(ScenarioConfig& c) {
    c.leader.notch.fs = c.leader.rate;
    c.plate.surface_z = c.follower.home.position.z() + c.plate.height;
    if (!c.op.press_depth_set) c.op.drag.press_depth = press_depth_for(c);
    if (c.kind == ScenarioKind::Passivity || c.kind == ScenarioKind::Outage) {
        c.duration = std::max(c.duration, c.op.drag.end_time());
    }
}

namespace detail {

inline std::vector<double> parse_list(const std::string& s, const std::string& key) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            throw ConfigError("bad number '" + item + "' for " + key);
        }
        if (item.find_first_not_of(" \t", used) != std::string::npos) {
            throw ConfigError("bad number '" + item + "' for " + key);
        }
        out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty value for " + key);
    return out;
}

inline double parse_scalar(const std::string& s, const std::string& key) {
    auto v = parse_list(s, key);
    if (v.size() != 1) throw ConfigError(key + " expects one number");
    return v[0];
}

/// 6 comma-separated numbers, or one number applied to every axis.
inline Vec6 parse_vec6(const std::string& s, const std::string& key) {
    auto v = parse_list(s, key);
    if (v.size() == 1) return Vec6::Constant(v[0]);
    if (v.size() != 6) throw ConfigError(key + " expects 1 or 6 numbers");
    return Eigen::Map<const Vec6>(v.data());
}

inline Vec3 parse_vec3(const std::string& s, const std::string& key) {
    auto v = parse_list(s, key);
    if (v.size() == 1) return Vec3::Constant(v[0]);
    if (v.size() != 3) throw ConfigError(key + " expects 1 or 3 numbers");
    return {v[0], v[1], v[2]};
}

inline bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
    if (s == "false" || s == "0" || s == "no" || s == "off") return false;
    throw ConfigError("bad boolean '" + s + "' for " + key);
}

/// k_p/k_i/k_d are written in mm/N and deg/(N*m) per tick.
inline Vec6 gains_from_mm_deg(const Vec6& g) {
    Vec6 out = g;
    out.head<3>() *= 1e-3;
    out.tail<3>() *= std::numbers::pi / 180.0;
    return out;
}

inline Vec6 gains_to_mm_deg(const Vec6& g) {
    Vec6 out = g;
    out.head<3>() *= 1e3;
    out.tail<3>() *= 180.0 / std::numbers::pi;
    return out;
}

using Setter = std::function<void(ScenarioConfig&, const std::string&, const std::string&)>;

inline void add_delta6(std::map<std::string, Setter>& m, const std::string& sec, Delta6Params ScenarioConfig::*d6) {
    m[sec + ".k_s"] = [d6](auto& c, auto& v, auto& k) { (c.*d6).k_rot = parse_vec3(v, k); };
    m[sec + ".k_t"] = [d6](auto& c, auto& v, auto& k) { (c.*d6).k_trans = parse_vec3(v, k); };
    m[sec + ".neutral"] = [d6](auto& c, auto& v, auto& k) { (c.*d6).neutral = PoseXYZ::from_vec(parse_vec6(v, k)); };
    m[sec + ".deflection_limits"] = [d6](auto& c, auto& v, auto& k) { (c.*d6).deflection_limits = parse_vec6(v, k); };
}

inline void add_plant(std::map<std::string, Setter>& m, const std::string& sec, PlantParams ScenarioConfig::*pl) {
    m[sec + ".f_c"] = [pl](auto& c, auto& v, auto& k) { (c.*pl).rate = parse_scalar(v, k); };
    m[sec + ".natural_freq"] = [pl](auto& c, auto& v, auto& k) { (c.*pl).natural_freq = parse_scalar(v, k); };
    m[sec + ".damping_ratio"] = [pl](auto& c, auto& v, auto& k) { (c.*pl).damping_ratio = parse_scalar(v, k); };
    m[sec + ".vel_limit"] = [pl](auto& c, auto& v, auto& k) { (c.*pl).vel_limit = parse_vec6(v, k); };
    m[sec + ".acc_limit"] = [pl](auto& c, auto& v, auto& k) { (c.*pl).acc_limit = parse_vec6(v, k); };
    m[sec + ".ideal"] = [pl](auto& c, auto& v, auto& k) { (c.*pl).ideal = parse_bool(v, k); };
}

inline const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = [] {
        std::map<std::string, Setter> m;
        m["scenario.kind"] = [](auto& c, auto& v, auto&) { c.kind = parse_kind(v); };
        m["scenario.duration"] = [](auto& c, auto& v, auto& k) { c.duration = parse_scalar(v, k); };
        m["scenario.seed"] = [](auto& c, auto& v, auto& k) { c.seed = static_cast<std::uint64_t>(parse_scalar(v, k)); };
        m["scenario.record_every"] = [](auto& c, auto& v, auto& k) { c.record_every = static_cast<int>(parse_scalar(v, k)); };
        m["scenario.f_tele"] = [](auto& c, auto& v, auto& k) { c.tele_rate = parse_scalar(v, k); };
        m["scenario.watchdog_timeout"] = [](auto& c, auto& v, auto& k) { c.watchdog_timeout = parse_scalar(v, k); };

        m["network.condition"] = [](auto& c, auto& v, auto&) {
            auto n = NetworkCondition::named(v);
            if (!n) throw ConfigError("unknown network condition '" + v + "'");
            c.net = *n;
            c.net_name = v;
        };
        m["network.mean_delay"] = [](auto& c, auto& v, auto& k) { c.net.mean_delay = parse_scalar(v, k); c.net_name = "custom"; };
        m["network.std_delay"] = [](auto& c, auto& v, auto& k) { c.net.std_delay = parse_scalar(v, k); c.net_name = "custom"; };
        m["network.loss_prob"] = [](auto& c, auto& v, auto& k) { c.net.loss_prob = parse_scalar(v, k); c.net_name = "custom"; };

        m["leader.B"] = [](auto& c, auto& v, auto& k) { c.leader.B = parse_vec6(v, k); };
        m["leader.f0"] = [](auto& c, auto& v, auto& k) { c.leader.notch.f0 = parse_vec6(v, k); };
        m["leader.kappa"] = [](auto& c, auto& v, auto& k) { c.leader.notch.kappa = parse_vec6(v, k); };
        m["leader.lambda"] = [](auto& c, auto& v, auto& k) { c.leader.notch.lambda = parse_vec6(v, k); };
        m["leader.f_admt"] = [](auto& c, auto& v, auto& k) { c.leader.rate = parse_scalar(v, k); };
        m["leader.fallback_ramp"] = [](auto& c, auto& v, auto& k) { c.leader.fallback_ramp = parse_scalar(v, k); };
        m["leader.home"] = [](auto& c, auto& v, auto& k) { c.leader.home = PoseXYZ::from_vec(parse_vec6(v, k)); };

        m["follower.K"] = [](auto& c, auto& v, auto& k) { c.follower.K = parse_vec6(v, k); };
        m["follower.B"] = [](auto& c, auto& v, auto& k) { c.follower.B = parse_vec6(v, k); };
        m["follower.tau_v"] = [](auto& c, auto& v, auto& k) { c.follower.tau_v = parse_scalar(v, k); };
        m["follower.k_p"] = [](auto& c, auto& v, auto& k) { c.follower.kp = gains_from_mm_deg(parse_vec6(v, k)); };
        m["follower.k_i"] = [](auto& c, auto& v, auto& k) { c.follower.ki = gains_from_mm_deg(parse_vec6(v, k)); };
        m["follower.k_d"] = [](auto& c, auto& v, auto& k) { c.follower.kd = gains_from_mm_deg(parse_vec6(v, k)); };
        m["follower.i_limit"] = [](auto& c, auto& v, auto& k) { c.follower.i_limit = parse_vec6(v, k); };
        m["follower.f_impd"] = [](auto& c, auto& v, auto& k) { c.follower.rate = parse_scalar(v, k); };
        m["follower.home"] = [](auto& c, auto& v, auto& k) { c.follower.home = PoseXYZ::from_vec(parse_vec6(v, k)); };

        add_delta6(m, "delta6_leader", &ScenarioConfig::d6_leader);
        add_delta6(m, "delta6_follower", &ScenarioConfig::d6_follower);
        add_plant(m, "plant_leader", &ScenarioConfig::plant_leader);
        add_plant(m, "plant_follower", &ScenarioConfig::plant_follower);

        m["plate.height"] = [](auto& c, auto& v, auto& k) { c.plate.height = parse_scalar(v, k); };
        m["plate.k_env"] = [](auto& c, auto& v, auto& k) { c.plate.k_env = parse_scalar(v, k); };
        m["plate.mu"] = [](auto& c, auto& v, auto& k) { c.plate.mu = parse_scalar(v, k); };
        m["plate.slip_velocity"] = [](auto& c, auto& v, auto& k) { c.plate.slip_velocity = parse_scalar(v, k); };
        m["plate.enabled"] = [](auto& c, auto& v, auto& k) { c.plate.enabled = parse_bool(v, k); };

        m["gripper.open_width"] = [](auto& c, auto& v, auto& k) { c.gripper.open_width = parse_scalar(v, k); };
        m["gripper.object_width"] = [](auto& c, auto& v, auto& k) { c.gripper.object_width = parse_scalar(v, k); };
        m["gripper.k_grip"] = [](auto& c, auto& v, auto& k) { c.gripper.k_grip = parse_scalar(v, k); };
        m["gripper.tau"] = [](auto& c, auto& v, auto& k) { c.gripper.tau = parse_scalar(v, k); };
        m["gripper.command"] = [](auto& c, auto& v, auto& k) { c.grip_command = parse_scalar(v, k); };

        m["operator.sine_axis"] = [](auto& c, auto& v, auto& k) { c.op.sine.axis = static_cast<int>(parse_scalar(v, k)); };
        m["operator.sine_amplitude"] = [](auto& c, auto& v, auto& k) { c.op.sine.amplitude = parse_scalar(v, k); };
        m["operator.sine_freq"] = [](auto& c, auto& v, auto& k) { c.op.sine.freq = parse_scalar(v, k); };
        m["operator.speed"] = [](auto& c, auto& v, auto& k) { c.op.descent.speed = parse_scalar(v, k); };
        m["operator.depth"] = [](auto& c, auto& v, auto& k) { c.op.descent.depth = parse_scalar(v, k); };
        m["operator.motion_axis"] = [](auto& c, auto& v, auto& k) { c.op.motion.axis = static_cast<int>(parse_scalar(v, k)); };
        m["operator.motion_amplitude"] = [](auto& c, auto& v, auto& k) { c.op.motion.amplitude = parse_scalar(v, k); };
        m["operator.motion_freq"] = [](auto& c, auto& v, auto& k) { c.op.motion.freq = parse_scalar(v, k); };
        m["operator.target_force"] = [](auto& c, auto& v, auto& k) { c.op.target_force = parse_scalar(v, k); };
        m["operator.press_depth"] = [](auto& c, auto& v, auto& k) {
            c.op.drag.press_depth = parse_scalar(v, k);
            c.op.press_depth_set = true;
        };
        m["operator.drag_distance"] = [](auto& c, auto& v, auto& k) { c.op.drag.drag_distance = parse_scalar(v, k); };
        m["operator.repetitions"] = [](auto& c, auto& v, auto& k) { c.op.drag.repetitions = static_cast<int>(parse_scalar(v, k)); };
        m["operator.k_hand"] = [](auto& c, auto& v, auto& k) { c.op.drag.k_hand = parse_scalar(v, k); };
        m["operator.b_hand"] = [](auto& c, auto& v, auto& k) { c.op.drag.b_hand = parse_scalar(v, k); };
        m["operator.start"] = [](auto& c, auto& v, auto& k) { c.op.drag.start = parse_scalar(v, k); };

        m["outage.start"] = [](auto& c, auto& v, auto& k) { c.outage_start = parse_scalar(v, k); };
        m["outage.end"] = [](auto& c, auto& v, auto& k) { c.outage_end = parse_scalar(v, k); };

        m["bode.settle"] = [](auto& c, auto& v, auto& k) { c.bode.settle = parse_scalar(v, k); };
        m["bode.min_cycles"] = [](auto& c, auto& v, auto& k) { c.bode.min_cycles = parse_scalar(v, k); };
        m["bode.min_window"] = [](auto& c, auto& v, auto& k) { c.bode.min_window = parse_scalar(v, k); };
        m["bode.freqs"] = [](auto& c, auto& v, auto& k) { c.bode.freqs = parse_list(v, k); };

        m["netem.samples"] = [](auto& c, auto& v, auto& k) { c.netem_samples = static_cast<int>(parse_scalar(v, k)); };
        return m;
    }();
    return table;
}

}  // namespace detail

inline boost::property_tree::ptree read_ini_tree(std::istream& is) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::ini_parser::read_ini(is, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError(e.message() + " (line " + std::to_string(e.line()) + ")");
    }
    return tree;
}

/// Apply parsed INI sections on top of `base`. Unknown sections or keys are rejected.
inline ScenarioConfig apply_config(const boost::property_tree::ptree& tree, ScenarioConfig base) {
    const auto& table = detail::setters();
    for (const auto& [section, body] : tree) {
        if (body.empty()) throw ConfigError("key '" + section + "' outside a section");
        for (const auto& [key, value] : body) {
            const std::string full = section + "." + key;
            auto it = table.find(full);
            if (it == table.end()) throw ConfigError("unknown key '" + full + "'");
            it->second(base, value.data(), full);
        }
    }
    return base;
}

inline ScenarioConfig parse_config(std::istream& is, ScenarioConfig base) {
    return apply_config(read_ini_tree(is), std::move(base));
}

/// The file's own `kind` (unless overridden) selects the defaults it is applied to.
inline ScenarioConfig load_config(const std::string& path, std::optional<ScenarioKind> kind = std::nullopt) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open '" + path + "'");
    const auto tree = read_ini_tree(f);
    ScenarioKind k = ScenarioKind::Collision;
    if (kind) {
        k = *kind;
    } else if (auto s = tree.get_optional<std::string>("scenario.kind")) {
        k = parse_kind(*s);
    }
    ScenarioConfig c = apply_config(tree, default_config(k));
    c.kind = k;
    return c;
}

inline nlohmann::json to_json(const Vec6& v) { return std::vector<double>(v.data(), v.data() + 6); }
inline nlohmann::json to_json(const Vec3& v) { return std::vector<double>(v.data(), v.data() + 3); }

inline nlohmann::json config_to_json(const ScenarioConfig& c) {
    using nlohmann::json;
    json j;
    j["scenario"] = {{"kind", to_string(c.kind)},
                     {"duration", c.duration},
                     {"seed", c.seed},
                     {"record_every", c.record_every},
                     {"f_tele", c.tele_rate},
                     {"watchdog_timeout", c.watchdog_timeout},
                     {"base_rate", c.base_rate()}};
    j["network"] = {{"condition", c.net_name},
                    {"mean_delay", c.net.mean_delay},
                    {"std_delay", c.net.std_delay},
                    {"loss_prob", c.net.loss_prob}};
    j["leader"] = {{"B", to_json(c.leader.B)},
                   {"f0", to_json(c.leader.notch.f0)},
                   {"kappa", to_json(c.leader.notch.kappa)},
                   {"lambda", to_json(c.leader.notch.lambda)},
                   {"f_admt", c.leader.rate},
                   {"fallback_ramp", c.leader.fallback_ramp},
                   {"home", to_json(c.leader.home.to_vec())}};
    j["follower"] = {{"K", to_json(c.follower.K)},
                     {"B", to_json(c.follower.B)},
                     {"tau_v", c.follower.tau_v},
                     {"k_p", to_json(detail::gains_to_mm_deg(c.follower.kp))},
                     {"k_i", to_json(detail::gains_to_mm_deg(c.follower.ki))},
                     {"k_d", to_json(detail::gains_to_mm_deg(c.follower.kd))},
                     {"i_limit", to_json(c.follower.i_limit)},
                     {"f_impd", c.follower.rate},
                     {"home", to_json(c.follower.home.to_vec())}};
    auto d6 = [](const Delta6Params& d) {
        return json{{"k_s", to_json(d.k_rot)},
                    {"k_t", to_json(d.k_trans)},
                    {"neutral", to_json(d.neutral.to_vec())},
                    {"deflection_limits", to_json(d.deflection_limits)}};
    };
    auto plant = [](const PlantParams& p) {
        return json{{"f_c", p.rate},
                    {"natural_freq", p.natural_freq},
                    {"damping_ratio", p.damping_ratio},
                    {"vel_limit", to_json(p.vel_limit)},
                    {"acc_limit", to_json(p.acc_limit)},
                    {"ideal", p.ideal}};
    };
    j["delta6_leader"] = d6(c.d6_leader);
    j["delta6_follower"] = d6(c.d6_follower);
    j["plant_leader"] = plant(c.plant_leader);
    j["plant_follower"] = plant(c.plant_follower);
    j["plate"] = {{"height", c.plate.height},
                  {"k_env", c.plate.k_env},
                  {"mu", c.plate.mu},
                  {"slip_velocity", c.plate.slip_velocity},
                  {"enabled", c.plate.enabled}};
    j["gripper"] = {{"open_width", c.gripper.open_width},
                    {"object_width", c.gripper.object_width},
                    {"k_grip", c.gripper.k_grip},
                    {"tau", c.gripper.tau},
                    {"command", c.grip_command}};
    j["operator"] = {{"sine_axis", c.op.sine.axis},
                     {"sine_amplitude", c.op.sine.amplitude},
                     {"sine_freq", c.op.sine.freq},
                     {"speed", c.op.descent.speed},
                     {"depth", c.op.descent.depth},
                     {"motion_axis", c.op.motion.axis},
                     {"motion_amplitude", c.op.motion.amplitude},
                     {"motion_freq", c.op.motion.freq},
                     {"target_force", c.op.target_force},
                     {"press_depth", c.op.drag.press_depth},
                     {"drag_distance", c.op.drag.drag_distance},
                     {"repetitions", c.op.drag.repetitions},
                     {"k_hand", c.op.drag.k_hand},
                     {"b_hand", c.op.drag.b_hand},
                     {"start", c.op.drag.start}};
    j["outage"] = {{"start", c.outage_start}, {"end", c.outage_end}};
    j["bode"] = {{"settle", c.bode.settle},
                 {"min_cycles", c.bode.min_cycles},
                 {"min_window", c.bode.min_window},
                 {"freqs", c.bode.freqs}};
    j["netem"] = {{"samples", c.netem_samples}};
    return j;
}

}  // namespace teleop
