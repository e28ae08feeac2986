#pragma once

// Run configuration: one JSON document aggregating every component's settings.
// Unknown keys are rejected at every level.

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "heatchroma/advisor.hpp"
#include "heatchroma/chromatic.hpp"
#include "heatchroma/detector.hpp"
#include "heatchroma/error.hpp"
#include "heatchroma/io.hpp"
#include "heatchroma/scenario.hpp"
#include "heatchroma/signal.hpp"

namespace heatchroma {

struct ScenarioEntry {
    ScenarioKind kind{ScenarioKind::Background};
    std::size_t count{1};
    double duration_s{1800.0};
    double jitter{0.15};
    std::optional<OperatingMode> operating_mode;
};

struct RunConfig {
    std::uint64_t seed{1};
    TankModel tank;
    std::vector<ScenarioEntry> scenarios;
    NormalizationConfig normalization;
    DetectorConfig detector;
    std::optional<std::array<TriangleProfile, 3>> filter_profiles; // default bank when unset
    std::optional<double> l_scaling;                                // classifier L-axis override
    AdvisorThresholds advisor;
    std::optional<double> efficiency;
    std::optional<OperatingMode> current_mode;

    FilterBank filter_bank() const {
        return filter_profiles ? FilterBank(detector.window_s, *filter_profiles)
                               : default_filter_bank(detector.window_s);
    }
};

/// splitmix64 step; spreads consecutive run indices over the seed space.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// One script per requested run, in config order, each with a seed derived from the run seed.
inline std::vector<ScenarioScript> expand_scripts(const RunConfig& cfg) {
    std::vector<ScenarioScript> out;
    for (const auto& entry : cfg.scenarios) {
        for (std::size_t k = 0; k < entry.count; ++k) {
            ScenarioScript s;
            s.kind = entry.kind;
            s.seed = derive_seed(cfg.seed, out.size());
            s.duration_s = entry.duration_s;
            s.jitter = entry.jitter;
            s.operating_mode = entry.operating_mode;
            out.push_back(s);
        }
    }
    return out;
}

namespace detail {

class ObjectReader {
  public:
    ObjectReader(const nlohmann::json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw Error(ErrorCode::InvalidConfig, path_ + " must be an object");
    }

    template <typename T>
    void read(const char* key, T& target) {
        seen_.insert(key);
        if (!j_.contains(key)) return;
        try {
            target = j_.at(key).get<T>();
        } catch (const nlohmann::json::exception&) {
            throw Error(ErrorCode::InvalidConfig, path_ + "." + key + " has the wrong type");
        }
    }

    template <typename T>
    void read(const char* key, std::optional<T>& target) {
        T value{};
        const bool present = j_.contains(key);
        read(key, value);
        if (present) target = value;
    }

    const nlohmann::json* child(const char* key) {
        seen_.insert(key);
        return j_.contains(key) ? &j_.at(key) : nullptr;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key())) throw Error(ErrorCode::InvalidConfig, "unknown key " + path_ + "." + it.key());
        }
    }

  private:
    const nlohmann::json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

} // namespace detail

inline RunConfig parse_run_config(const nlohmann::json& root) {
    RunConfig cfg;
    detail::ObjectReader top(root, "config");
    top.read("seed", cfg.seed);

    if (const auto* t = top.child("tank")) {
        detail::ObjectReader r(*t, "tank");
        r.read("volume_l", cfg.tank.volume_l);
        r.read("set_point_c", cfg.tank.set_point_c);
        r.read("hysteresis_c", cfg.tank.hysteresis_c);
        r.read("element_power_w", cfg.tank.element_power_w);
        r.read("standing_loss_w_per_c", cfg.tank.standing_loss_w_per_c);
        r.read("inlet_temp_c", cfg.tank.inlet_temp_c);
        r.read("ambient_temp_c", cfg.tank.ambient_temp_c);
        r.read("power_noise_sigma_w", cfg.tank.power_noise_sigma_w);
        r.read("power_noise_clip_w", cfg.tank.power_noise_clip_w);
        r.finish();
    }

    if (const auto* s = top.child("scenarios")) {
        if (!s->is_array()) throw Error(ErrorCode::InvalidConfig, "config.scenarios must be an array");
        for (std::size_t i = 0; i < s->size(); ++i) {
            detail::ObjectReader r(s->at(i), "scenarios[" + std::to_string(i) + "]");
            ScenarioEntry entry;
            std::string kind;
            std::optional<std::string> mode;
            r.read("kind", kind);
            r.read("count", entry.count);
            r.read("duration_s", entry.duration_s);
            r.read("jitter", entry.jitter);
            r.read("operating_mode", mode);
            r.finish();
            if (kind.empty()) throw Error(ErrorCode::InvalidConfig, "scenario entries need a kind");
            entry.kind = parse_scenario_kind(kind);
            if (mode) entry.operating_mode = parse_operating_mode(*mode);
            cfg.scenarios.push_back(entry);
        }
    }

    if (const auto* n = top.child("normalization")) {
        detail::ObjectReader r(*n, "normalization");
        r.read("full_scale_power_w", cfg.normalization.full_scale_power);
        r.read("full_scale_flow_lpm", cfg.normalization.full_scale_flow);
        r.read("hot_weight", cfg.normalization.hot_weight);
        r.read("cold_weight", cfg.normalization.cold_weight);
        r.read("power_weight", cfg.normalization.power_weight);
        r.finish();
    }

    if (const auto* d = top.child("detector")) {
        detail::ObjectReader r(*d, "detector");
        auto& dc = cfg.detector;
        std::optional<std::string> gate;
        r.read("flow_on_lpm", dc.flow_on_lpm);
        r.read("full_open_lpm", dc.full_open_lpm);
        r.read("heater_on_w", dc.heater_on_w);
        r.read("cold_water_c", dc.cold_water_c);
        r.read("case1_reaction_s", dc.case1_reaction_s);
        r.read("sustain_s", dc.sustain_s);
        r.read("comfort_volume_l", dc.comfort_volume_l);
        r.read("window_s", dc.window_s);
        r.read("case2_gate", gate);
        r.finish();
        if (gate) {
            if (*gate == "temperature") dc.case2_gate = Case2Gate::Temperature;
            else if (*gate == "power") dc.case2_gate = Case2Gate::Power;
            else throw Error(ErrorCode::InvalidConfig, "detector.case2_gate must be 'temperature' or 'power'");
        }
    }

    if (const auto* f = top.child("filter_bank")) {
        detail::ObjectReader r(*f, "filter_bank");
        if (const auto* p = r.child("profiles")) {
            if (!p->is_array() || p->size() != 3) {
                throw Error(ErrorCode::InvalidConfig, "filter_bank.profiles must list exactly three profiles");
            }
            std::array<TriangleProfile, 3> profiles;
            for (std::size_t i = 0; i < 3; ++i) {
                detail::ObjectReader pr(p->at(i), "filter_bank.profiles[" + std::to_string(i) + "]");
                pr.read("peak_position_s", profiles[i].peak_position);
                pr.read("half_width_s", profiles[i].half_width);
                pr.read("peak_value", profiles[i].peak_value);
                pr.finish();
            }
            cfg.filter_profiles = profiles;
        }
        r.finish();
    }

    if (const auto* c = top.child("classifier")) {
        detail::ObjectReader r(*c, "classifier");
        r.read("l_scaling", cfg.l_scaling);
        r.finish();
    }

    if (const auto* a = top.child("advisor")) {
        detail::ObjectReader r(*a, "advisor");
        std::optional<std::string> mode;
        r.read("rate_high", cfg.advisor.rate_high);
        r.read("eff_min", cfg.advisor.eff_min);
        r.read("efficiency", cfg.efficiency);
        r.read("current_mode", mode);
        r.finish();
        if (mode) cfg.current_mode = parse_operating_mode(*mode);
    }
    top.finish();

    // Surface component invariants at load time rather than mid-run.
    cfg.tank.validate();
    cfg.normalization.validate();
    cfg.detector.validate();
    (void)cfg.filter_bank();
    for (const auto& s : cfg.scenarios) {
        if (!(s.duration_s > 0.0) || !(s.jitter >= 0.0 && s.jitter <= 0.5)) {
            throw Error(ErrorCode::InvalidConfig, "scenario duration must be > 0 and jitter within [0, 0.5]");
        }
    }
    if (cfg.efficiency && !(*cfg.efficiency >= 0.0 && *cfg.efficiency <= 1.0)) {
        throw Error(ErrorCode::InvalidEfficiency, "advisor.efficiency must lie in [0, 1]");
    }
    return cfg;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::InvalidConfig, path.string() + ": " + e.what());
    }
    return parse_run_config(j);
}

} // namespace heatchroma
