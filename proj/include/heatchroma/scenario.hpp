#pragma once

// Seeded generator of heater traces: a lumped, thermostat-controlled tank and
// scripted usage sequences for each event class plus background daily usage.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heatchroma/error.hpp"
#include "heatchroma/kinds.hpp"
#include "heatchroma/signal.hpp"

namespace heatchroma {

inline constexpr double kWaterHeatCapacity = 4186.0; // J/(kg degC), 1 kg per liter

struct TankModel {
    double volume_l{50.0};
    double set_point_c{60.0};
    double hysteresis_c{5.0};
    double element_power_w{453.0};
    double standing_loss_w_per_c{1.2};
    double inlet_temp_c{18.0};
    double ambient_temp_c{22.0};
    double power_noise_sigma_w{3.0};
    double power_noise_clip_w{10.0};

    double heat_capacity() const { return volume_l * kWaterHeatCapacity; } // J/degC

    void validate() const {
        if (!(volume_l > 0.0)) throw Error(ErrorCode::InvalidScript, "tank volume must be > 0");
        if (!(set_point_c > inlet_temp_c)) throw Error(ErrorCode::InvalidScript, "set point must exceed inlet temperature");
        if (!(hysteresis_c > 0.0)) throw Error(ErrorCode::InvalidScript, "hysteresis must be > 0");
        if (!(element_power_w > 0.0)) throw Error(ErrorCode::InvalidScript, "element power must be > 0");
        if (standing_loss_w_per_c < 0.0 || power_noise_sigma_w < 0.0 || power_noise_clip_w < 0.0) {
            throw Error(ErrorCode::InvalidScript, "loss and noise parameters must be >= 0");
        }
    }
};

enum class ScenarioKind { Case1, Case2, Case3, Comfort, Background };

inline std::string_view to_string(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::Case1: return "Case1";
    case ScenarioKind::Case2: return "Case2";
    case ScenarioKind::Case3: return "Case3";
    case ScenarioKind::Comfort: return "Comfort";
    case ScenarioKind::Background: return "Background";
    }
    return "";
}

inline ScenarioKind parse_scenario_kind(std::string_view s) {
    for (ScenarioKind k : {ScenarioKind::Case1, ScenarioKind::Case2, ScenarioKind::Case3, ScenarioKind::Comfort,
                           ScenarioKind::Background}) {
        if (s == to_string(k)) return k;
    }
    throw Error(ErrorCode::InvalidConfig, "unknown scenario kind '" + std::string(s) + "'");
}

/// Mode a scenario kind naturally runs in when the script leaves it unset.
inline OperatingMode natural_mode(ScenarioKind k) {
    switch (k) {
    case ScenarioKind::Case2:
    case ScenarioKind::Background: return OperatingMode::Continuous;
    default: return OperatingMode::OnDemand;
    }
}

struct ScenarioScript {
    ScenarioKind kind{ScenarioKind::Background};
    std::uint64_t seed{0};
    double duration_s{1800.0};
    double jitter{0.15}; // fractional amplitude of timing/magnitude randomisation
    std::optional<OperatingMode> operating_mode;

    OperatingMode mode() const { return operating_mode.value_or(natural_mode(kind)); }
};

struct GroundTruthLabel {
    EventKind kind;
    double start_s;
    double end_s;
};

struct ManualSwitch {
    std::size_t index; // sample at which the switch takes effect
    bool on;
};

/// Two-position heater control. Continuous mode is a hysteresis thermostat;
/// OnDemand mode follows manual switching only.
class HeaterControl {
  public:
    HeaterControl(const TankModel& model, OperatingMode mode, bool initially_on = false)
        : set_point_(model.set_point_c), hysteresis_(model.hysteresis_c), mode_(mode), on_(initially_on) {}

    bool step(double tank_temp, std::optional<bool> manual = std::nullopt) {
        if (mode_ == OperatingMode::Continuous) {
            if (tank_temp < set_point_ - hysteresis_) {
                on_ = true;
            } else if (tank_temp >= set_point_) {
                on_ = false;
            }
        } else if (manual) {
            on_ = *manual;
        }
        return on_;
    }

    bool is_on() const { return on_; }

  private:
    double set_point_;
    double hysteresis_;
    OperatingMode mode_;
    bool on_;
};

/// Open-loop evaluation of the heater control over a given temperature sequence.
/// Manual events beyond the sequence are ignored; Continuous mode ignores them all.
inline std::vector<bool> heater_state_machine(const TankModel& model, OperatingMode mode,
                                              std::span<const double> tank_temp,
                                              std::span<const ManualSwitch> manual_events) {
    std::vector<std::optional<bool>> manual(tank_temp.size());
    for (const auto& e : manual_events) {
        if (e.index < manual.size()) manual[e.index] = e.on;
    }
    HeaterControl control(model, mode);
    std::vector<bool> out(tank_temp.size());
    for (std::size_t i = 0; i < tank_temp.size(); ++i) out[i] = control.step(tank_temp[i], manual[i]);
    return out;
}

/// Everything a scenario script decides before the tank is integrated.
struct UsagePlan {
    OperatingMode mode{OperatingMode::Continuous};
    double initial_temp_c{60.0};
    bool initially_on{false};
    std::vector<double> hot_flow;  // l/min per second
    std::vector<double> cold_flow; // l/min per second
    std::vector<ManualSwitch> switches;
    std::vector<GroundTruthLabel> labels;
};

/// Integrates the tank at 1 s resolution. Power noise is drawn from rng only while
/// the element is on, so an off heater reads exactly zero.
inline SensorTrace run_plan(const TankModel& model, const UsagePlan& plan, std::mt19937_64& rng) {
    model.validate();
    const std::size_t n = plan.hot_flow.size();
    if (plan.cold_flow.size() != n) throw Error(ErrorCode::InvalidScript, "flow profiles differ in length");

    std::vector<std::optional<bool>> manual(n);
    for (const auto& s : plan.switches) {
        if (s.index < n) manual[s.index] = s.on;
    }

    SensorTrace trace;
    trace.sample_period = 1.0;
    trace.resize(n);

    std::normal_distribution<double> noise(0.0, 1.0);
    HeaterControl control(model, plan.mode, plan.initially_on);
    const double capacity = model.heat_capacity();
    double temp = plan.initial_temp_c;
    for (std::size_t i = 0; i < n; ++i) {
        const bool on = control.step(temp, manual[i]);
        double power = 0.0;
        if (on) {
            const double jitter = std::clamp(model.power_noise_sigma_w * noise(rng), -model.power_noise_clip_w,
                                             model.power_noise_clip_w);
            power = model.element_power_w + jitter;
        }
        trace.power[i] = power;
        trace.hot_flow[i] = plan.hot_flow[i];
        trace.cold_flow[i] = plan.cold_flow[i];
        trace.t_outlet[i] = temp;
        trace.t_inlet[i] = model.inlet_temp_c;

        const double standing = model.standing_loss_w_per_c * (temp - model.ambient_temp_c);
        const double draw = plan.hot_flow[i] / 60.0 * kWaterHeatCapacity * (temp - model.inlet_temp_c);
        temp += (power - standing - draw) / capacity;
    }
    return trace;
}

namespace detail {

class ScriptRandom {
  public:
    ScriptRandom(std::mt19937_64& rng, double jitter) : rng_(rng), jitter_(jitter) {}

    double unit() { return std::uniform_real_distribution<double>(-1.0, 1.0)(rng_); }
    double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    /// Multiplicative jitter factor in [1 - jitter, 1 + jitter].
    double factor() { return 1.0 + jitter_ * unit(); }
    std::size_t seconds(double nominal) { return static_cast<std::size_t>(std::lround(nominal * factor())); }
    std::size_t integer(std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
    }

  private:
    std::mt19937_64& rng_;
    double jitter_;
};

inline void fill(std::vector<double>& v, std::size_t from, std::size_t to, double value) {
    for (std::size_t i = from; i < std::min(to, v.size()); ++i) v[i] = value;
}

// Cold-tank scenarios keep the outlet clearly below lukewarm.
inline constexpr double kColdTankCeiling = 32.0;

} // namespace detail

inline UsagePlan plan_scenario(const TankModel& model, const ScenarioScript& script, std::mt19937_64& rng) {
    model.validate();
    if (!(script.duration_s > 0.0) || !std::isfinite(script.duration_s)) {
        throw Error(ErrorCode::InvalidScript, "scenario duration must be > 0");
    }
    if (!(script.jitter >= 0.0 && script.jitter <= 0.5)) {
        throw Error(ErrorCode::InvalidScript, "jitter must lie in [0, 0.5]");
    }
    const OperatingMode mode = script.mode();
    const ScenarioKind kind = script.kind;
    if ((kind == ScenarioKind::Case1 || kind == ScenarioKind::Comfort) && mode != OperatingMode::OnDemand) {
        throw Error(ErrorCode::InvalidScript, std::string(to_string(kind)) + " requires OnDemand operation");
    }
    if (kind == ScenarioKind::Case2 && mode != OperatingMode::Continuous) {
        throw Error(ErrorCode::InvalidScript, "Case2 requires Continuous operation");
    }
    if ((kind == ScenarioKind::Case1 || kind == ScenarioKind::Case2) &&
        !(model.inlet_temp_c < detail::kColdTankCeiling &&
          model.set_point_c - model.hysteresis_c > detail::kColdTankCeiling)) {
        throw Error(ErrorCode::InvalidScript, "cold-tank scenarios need inlet below 32 degC and a thermostat "
                                              "cut-in above it");
    }

    const auto n = static_cast<std::size_t>(std::floor(script.duration_s)) + 1;
    detail::ScriptRandom rnd(rng, script.jitter);
    UsagePlan plan;
    plan.mode = mode;
    plan.hot_flow.assign(n, 0.0);
    plan.cold_flow.assign(n, 0.0);

    auto hot_tank = [&] { return model.set_point_c - std::abs(rnd.unit()); };
    auto cold_tank = [&](double rise) {
        return std::min(model.inlet_temp_c + rise * rnd.factor(), detail::kColdTankCeiling);
    };
    auto label = [&](EventKind k, std::size_t from, std::size_t to) {
        if (to >= n) {
            throw Error(ErrorCode::InvalidScript, "scripted sequence ends at " + std::to_string(to) +
                                                      " s, past the scenario duration");
        }
        plan.labels.push_back({k, static_cast<double>(from), static_cast<double>(to)});
    };

    switch (kind) {
    case ScenarioKind::Case1: {
        // Hot tap opened on a cold tank, closed again, heater switched on in reaction.
        plan.initial_temp_c = cold_tank(6.0);
        const std::size_t t0 = rnd.seconds(120.0);
        const std::size_t open = std::max<std::size_t>(10, rnd.seconds(25.0));
        const double hot = 6.0 * rnd.factor();
        const std::size_t switch_on = t0 + rnd.integer(30, 120);
        label(EventKind::Case1, t0, switch_on);
        detail::fill(plan.hot_flow, t0, t0 + open, hot);
        plan.switches.push_back({switch_on, true});
        break;
    }
    case ScenarioKind::Case2: {
        // Full hot draw with no cold water while the element is still heating a cold tank.
        plan.initial_temp_c = cold_tank(10.0);
        const std::size_t t0 = rnd.seconds(120.0);
        const double hot = std::max(8.0 * rnd.factor(), 7.0);
        const std::size_t dur = std::max<std::size_t>(rnd.seconds(150.0), 90);
        label(EventKind::Case2, t0, t0 + dur);
        detail::fill(plan.hot_flow, t0, t0 + dur, hot);
        break;
    }
    case ScenarioKind::Case3: {
        // Cold tap opened first and kept above the hot tap to temper an over-hot tank.
        plan.initial_temp_c = hot_tank();
        const std::size_t t0 = rnd.seconds(120.0);
        const double cold = 8.0 * rnd.factor();
        const double hot = std::clamp(4.0 * rnd.factor(), 1.0, 0.75 * cold);
        const std::size_t hot_delay = rnd.integer(0, 3);
        const std::size_t dur = std::max<std::size_t>(rnd.seconds(90.0), 70);
        label(EventKind::Case3, t0, t0 + dur);
        detail::fill(plan.cold_flow, t0, t0 + dur, cold);
        detail::fill(plan.hot_flow, t0 + hot_delay, t0 + dur, hot);
        break;
    }
    case ScenarioKind::Comfort: {
        // A generous hot draw served from a hot tank with the heater left off.
        plan.initial_temp_c = hot_tank();
        const std::size_t t0 = rnd.seconds(120.0);
        const double hot = 6.0 * rnd.factor();
        std::size_t dur = rnd.seconds(180.0);
        const auto min_dur = static_cast<std::size_t>(std::ceil(12.0 * 60.0 / hot));
        dur = std::max(dur, min_dur);
        label(EventKind::Comfort, t0, t0 + dur);
        detail::fill(plan.hot_flow, t0, t0 + dur, hot);
        break;
    }
    case ScenarioKind::Background: {
        // Short hand washes and hot-dominant mixing draws spaced well apart.
        plan.initial_temp_c = model.set_point_c - 0.8 * model.hysteresis_c * rnd.uniform01();
        std::size_t t = 60 + rnd.integer(0, 200);
        while (t + 120 < n) {
            if (rnd.uniform01() < 0.5) {
                const double hot = 3.0 * rnd.factor();
                detail::fill(plan.hot_flow, t, t + rnd.seconds(20.0), hot);
            } else {
                const double hot = 4.0 * rnd.factor();
                const double cold = std::min(2.0 * rnd.factor(), 0.6 * hot);
                const std::size_t dur = rnd.seconds(40.0);
                detail::fill(plan.hot_flow, t, t + dur, hot);
                detail::fill(plan.cold_flow, t + 2, t + dur, cold);
            }
            t += 450 + rnd.integer(0, 300);
        }
        break;
    }
    }
    return plan;
}

struct SimulationResult {
    SensorTrace trace;
    std::vector<GroundTruthLabel> labels;
};

/// Deterministic in (model, script): the generator is seeded from script.seed and owned by the call.
inline SimulationResult simulate(const TankModel& model, const ScenarioScript& script) {
    std::mt19937_64 rng(script.seed);
    UsagePlan plan = plan_scenario(model, script, rng);
    SimulationResult result{run_plan(model, plan, rng), std::move(plan.labels)};
    return result;
}

} // namespace heatchroma
