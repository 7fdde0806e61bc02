// teleop_sim: run teleoperation scenarios and write traces, tables and summaries.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "teleop/experiments.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace teleop;

namespace {

struct Options {
    std::string config;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> net;
    std::optional<double> speed;
    std::optional<std::string> freq_grid;
    std::optional<double> duration;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::vector<double> parse_grid(const std::string& s) {
    // lo:hi:n or a comma-separated list
    if (s.find(':') != std::string::npos) {
        double lo = 0, hi = 0;
        int n = 0;
        char c1 = 0, c2 = 0;
        std::istringstream is(s);
        if (!(is >> lo >> c1 >> hi >> c2 >> n) || c1 != ':' || c2 != ':' || n < 1 || !(lo > 0) || !(hi >= lo)) {
            throw ConfigError("bad --freq-grid '" + s + "', expected lo:hi:n");
        }
        return log_grid(lo, hi, n);
    }
    return detail::parse_list(s, "--freq-grid");
}

ScenarioConfig load(const Options& o, ScenarioKind kind, bool kind_from_file = false) {
    ScenarioConfig c;
    if (!o.config.empty()) {
        c = kind_from_file ? load_config(o.config) : load_config(o.config, kind);
    } else {
        c = default_config(kind);
    }
    if (o.seed) c.seed = *o.seed;
    if (o.net) {
        auto n = NetworkCondition::named(*o.net);
        if (!n) throw ConfigError("unknown network condition '" + *o.net + "'");
        c.net = *n;
        c.net_name = *o.net;
    }
    if (o.speed) c.op.descent.speed = *o.speed;
    if (o.duration) c.duration = *o.duration;
    if (o.freq_grid) c.bode.freqs = parse_grid(*o.freq_grid);
    resolve(c);
    c.validate();
    return c;
}

class Writer {
public:
    explicit Writer(const std::string& dir) : dir_(dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw ConfigError("cannot create output directory '" + dir + "'");
    }

    std::ofstream open(const std::string& name) {
        std::ofstream f(dir_ / name);
        if (!f) throw ConfigError("cannot write '" + (dir_ / name).string() + "'");
        return f;
    }

    void json_file(const std::string& name, const json& j) { open(name) << j.dump(2) << '\n'; }

    void config(const ScenarioConfig& c) { json_file("config.json", config_to_json(c)); }

    void summary(const std::string& name, json j, const ScenarioConfig& c) {
        j["seed"] = c.seed;
        j["config"] = "config.json";
        const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        char ts[32];
        std::strftime(ts, sizeof ts, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
        j["generated_at"] = ts;
        json_file(name, j);
    }

    void trace(const TraceLog& log, const std::string& name = "trace.csv") {
        auto f = open(name);
        write_trace_csv(f, log);
    }

private:
    fs::path dir_;
};

json bode_json(const std::vector<BodePoint>& pts) {
    json a = json::array();
    for (const auto& p : pts) a.push_back({{"freq", p.freq}, {"mag_db", p.mag_db}, {"phase_deg", p.phase_deg}});
    return a;
}

int cmd_bode(const Options& o, BodeTarget target) {
    const bool leader = target == BodeTarget::Leader;
    const ScenarioConfig c = load(o, leader ? ScenarioKind::LeaderBode : ScenarioKind::FollowerBode);
    Writer w(o.out);
    w.config(c);
    const auto pts = bode_sweep(c, target);
    const std::string stem = leader ? "bode_leader" : "bode_follower";
    auto f = w.open(stem + ".csv");
    f << "freq,mag_db,phase_deg\n";
    for (const auto& p : pts) f << fmt(p.freq) << ',' << fmt(p.mag_db) << ',' << fmt(p.phase_deg) << '\n';
    const BodePoint peak = bode_peak(pts);
    w.summary(stem + ".json",
              {{"experiment", stem},
               {"network", c.net_name},
               {"points", bode_json(pts)},
               {"peak", {{"freq", peak.freq}, {"mag_db", peak.mag_db}, {"phase_deg", peak.phase_deg}}}},
              c);
    return 0;
}

int cmd_collision(const Options& o) {
    const ScenarioConfig c = load(o, ScenarioKind::Collision);
    Writer w(o.out);
    w.config(c);
    const CollisionResult r = run_collision(c);
    w.trace(r.trace);
    const auto& m = r.metrics;
    auto f = w.open("collision.csv");
    f << "steady_z_err,steady_Fz,recovered_K,force_overshoot,settle_time\n"
      << fmt(m.steady_z_err) << ',' << fmt(m.steady_Fz) << ',' << fmt(m.recovered_K) << ','
      << fmt(m.force_overshoot) << ',' << fmt(m.settle_time) << '\n';
    json j{{"experiment", "collision"},
           {"speed", c.op.descent.speed},
           {"steady_z_err", m.steady_z_err},
           {"steady_Fz", m.steady_Fz},
           {"recovered_K", m.recovered_K},
           {"force_overshoot", m.force_overshoot},
           {"settle_time", m.settle_time},
           {"contact_time", m.contact_time}};
    try {
        const auto fit = force_law_fit(r.trace, c.follower.K[2], c.follower.B[2], 0.5 * c.op.descent.speed,
                                       1.0 / c.tele_rate);
        j["force_law"] = {{"samples", fit.samples}, {"rms_rel_err", fit.rms_rel_err}, {"max_rel_err", fit.max_rel_err}};
    } catch (const InsufficientData& e) {
        j["force_law"] = {{"samples", 0}, {"note", e.what()}};
    }
    w.summary("collision.json", j, c);
    return 0;
}

int cmd_passivity(const Options& o) {
    const ScenarioConfig c = load(o, ScenarioKind::Passivity);
    Writer w(o.out);
    w.config(c);
    const PassivityResult r = run_passivity(c);
    w.trace(r.trace);
    auto f = w.open("energy.csv");
    f << "t,P_in,P_out,P_sum,E_sum\n";
    for (const auto& e : r.energy) {
        f << fmt(e.t) << ',' << fmt(e.P_in) << ',' << fmt(e.P_out) << ',' << fmt(e.P_sum) << ',' << fmt(e.E_sum) << '\n';
    }
    w.summary("passivity.json",
              {{"experiment", "passivity"},
               {"network", c.net_name},
               {"min_E_sum", r.min_E_sum},
               {"final_E_sum", r.energy.empty() ? 0.0 : r.energy.back().E_sum},
               {"contact_episodes", r.contact_episodes},
               {"peak_force_per_repetition", r.peak_force}},
              c);
    return 0;
}

int cmd_outage(const Options& o) {
    const ScenarioConfig c = load(o, ScenarioKind::Outage);
    Writer w(o.out);
    w.config(c);
    const OutageResult r = run_outage(c);
    w.trace(r.trace);
    w.summary("outage.json",
              {{"experiment", "outage"},
               {"outage_start", c.outage_start},
               {"outage_end", c.outage_end},
               {"watchdog_timeout", c.watchdog_timeout},
               {"leader_fallback_at", r.leader_fallback_at},
               {"follower_fallback_at", r.follower_fallback_at},
               {"frozen_drift", r.frozen_drift},
               {"haptic_zero_at", r.ramp_zero_at},
               {"leader_resume_at", r.leader_resume_at},
               {"follower_resume_at", r.follower_resume_at},
               {"final_tracking_err", r.final_tracking_err}},
              c);
    return 0;
}

int cmd_netem(const Options& o) {
    const ScenarioConfig c = load(o, ScenarioKind::NetemValidate);
    Writer w(o.out);
    w.config(c);
    std::vector<std::pair<std::string, NetworkCondition>> conds;
    if (o.net || !o.config.empty()) {
        conds.emplace_back(c.net_name, c.net);
    } else {
        for (const char* n : {"local", "good", "fair", "poor"}) conds.emplace_back(n, *NetworkCondition::named(n));
    }
    auto f = w.open("netem.csv");
    f << "condition,n,mean_cfg,std_cfg,loss_cfg,mean,std,loss,mean_expected,std_expected,skew_mean,skew_std,pass\n";
    json rows = json::array();
    bool all = true;
    for (const auto& [name, cond] : conds) {
        const NetemReport r = netem_validate(cond, c.netem_samples, c.seed);
        all = all && r.pass();
        f << name << ',' << r.n << ',' << fmt(cond.mean_delay) << ',' << fmt(cond.std_delay) << ','
          << fmt(cond.loss_prob) << ',' << fmt(r.mean) << ',' << fmt(r.std) << ',' << fmt(r.loss) << ','
          << fmt(r.expected.mean) << ',' << fmt(r.expected.std) << ',' << fmt(r.truncation_skew_mean) << ','
          << fmt(r.truncation_skew_std) << ',' << (r.pass() ? "pass" : "fail") << '\n';
        rows.push_back({{"condition", name},
                        {"n", r.n},
                        {"mean", r.mean},
                        {"std", r.std},
                        {"loss", r.loss},
                        {"expected_mean", r.expected.mean},
                        {"expected_std", r.expected.std},
                        {"truncation_skew_mean", r.truncation_skew_mean},
                        {"truncation_skew_std", r.truncation_skew_std},
                        {"pass", r.pass()}});
        std::cout << name << ": mean " << fmt(r.mean) << " s, std " << fmt(r.std) << " s, loss " << fmt(r.loss)
                  << (r.pass() ? "  pass" : "  FAIL") << '\n';
    }
    w.summary("netem.json", {{"experiment", "netem-validate"}, {"conditions", rows}, {"pass", all}}, c);
    if (!all) throw ScenarioFailed("channel statistics outside tolerance");
    return 0;
}

int cmd_run(const Options& o) {
    if (o.config.empty()) throw ConfigError("run requires --config");
    const ScenarioConfig probe = load(o, ScenarioKind::Collision, true);
    switch (probe.kind) {
        case ScenarioKind::LeaderBode: return cmd_bode(o, BodeTarget::Leader);
        case ScenarioKind::FollowerBode: return cmd_bode(o, BodeTarget::Follower);
        case ScenarioKind::Collision: return cmd_collision(o);
        case ScenarioKind::Passivity: return cmd_passivity(o);
        case ScenarioKind::Outage: return cmd_outage(o);
        case ScenarioKind::NetemValidate: return cmd_netem(o);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bilateral teleoperation simulator"};
    app.require_subcommand(1);
    Options o;

    auto common = [&o](CLI::App* s) {
        s->add_option("--config", o.config, "Scenario config (INI)");
        s->add_option("--out", o.out, "Output directory")->capture_default_str();
        s->add_option("--seed", o.seed, "Random seed override");
        s->add_option("--net", o.net, "Network condition: local|good|fair|poor");
        s->add_option("--speed", o.speed, "Descent speed for the collision scenario (m/s)");
        s->add_option("--freq-grid", o.freq_grid, "Frequencies: lo:hi:n (log spaced) or a comma list");
        s->add_option("--duration", o.duration, "Scenario duration override (s)");
    };

    std::function<int()> action;
    auto sub = [&](const char* name, const char* help, std::function<int()> fn) {
        auto* s = app.add_subcommand(name, help);
        common(s);
        s->callback([&action, fn] { action = fn; });
    };
    sub("bode-leader", "Leader admittance frequency response (clamped TCP)", [&] { return cmd_bode(o, BodeTarget::Leader); });
    sub("bode-follower", "Follower impedance frequency response", [&] { return cmd_bode(o, BodeTarget::Follower); });
    sub("collision", "Descent onto a rigid plate", [&] { return cmd_collision(o); });
    sub("passivity", "Contact, drag and lift, energy ledger", [&] { return cmd_passivity(o); });
    sub("outage", "Communication outage and watchdog fallback", [&] { return cmd_outage(o); });
    sub("netem-validate", "Channel delay and loss statistics", [&] { return cmd_netem(o); });
    sub("run", "Run the scenario named in --config", [&] { return cmd_run(o); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: usage: " << e.what() << '\n';
        return 2;
    }

    try {
        return action ? action() : 0;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
}
