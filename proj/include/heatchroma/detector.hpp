#pragma once

// Rule-based scan over a heater trace. Each tap-opening edge anchors a fixed
// window; the first rule that matches in priority order Case1 > Case2 > Case3 >
// Comfort labels the window, and the window's composite signal is reduced to a
// chromatic signature.

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "heatchroma/chromatic.hpp"
#include "heatchroma/error.hpp"
#include "heatchroma/kinds.hpp"
#include "heatchroma/signal.hpp"

namespace heatchroma {

/// Which condition confirms that the tank is still heating for Case2.
enum class Case2Gate {
    Temperature, // element on and outlet below the cold threshold
    Power,       // element on
};

struct DetectorConfig {
    double flow_on_lpm{0.5};        // tap counts as open
    double full_open_lpm{6.0};      // tap counts as fully open
    double heater_on_w{100.0};
    double cold_water_c{35.0};      // outlet below this is "cold"
    double case1_reaction_s{120.0}; // max delay from tap opening to heater switch-on
    double sustain_s{60.0};         // minimum duration of sustained conditions
    double comfort_volume_l{10.0};
    double window_s{600.0};
    Case2Gate case2_gate{Case2Gate::Temperature};

    void validate() const {
        for (double v : {flow_on_lpm, full_open_lpm, heater_on_w, cold_water_c, case1_reaction_s, sustain_s,
                         comfort_volume_l, window_s}) {
            if (!(v > 0.0) || !std::isfinite(v)) {
                throw Error(ErrorCode::InvalidConfig, "detector thresholds must be positive");
            }
        }
        if (!(full_open_lpm > flow_on_lpm)) {
            throw Error(ErrorCode::InvalidConfig, "full-open flow must exceed the flow-on threshold");
        }
        if (!(window_s >= case1_reaction_s)) {
            throw Error(ErrorCode::InvalidConfig, "window must be at least the Case1 reaction window");
        }
    }
};

struct DetectedEvent {
    EventKind kind{EventKind::Case1};
    Window window;
    ChromaticSignature signature; // modified transform over exactly `window`
    double trigger_time{0.0};     // epoch seconds of the anchoring edge
    double start_s{0.0};
    double end_s{0.0};
};

namespace detail {

inline std::size_t samples_for(double seconds, double period) {
    return static_cast<std::size_t>(std::llround(seconds / period));
}

inline bool rising(const std::vector<double>& v, std::size_t i, double threshold) {
    return i > 0 && v[i] >= threshold && v[i - 1] < threshold;
}

} // namespace detail

/// Evaluates the four rules on the closed window [trigger, trigger + window samples].
/// The caller guarantees the window fits inside the trace.
inline std::optional<EventKind> match_rules(const SensorTrace& trace, std::size_t trigger,
                                            const DetectorConfig& cfg) {
    const double dt = trace.sample_period;
    const std::size_t last = trigger + detail::samples_for(cfg.window_s, dt);
    const std::size_t reaction = static_cast<std::size_t>(std::floor(cfg.case1_reaction_s / dt + 1e-9));
    const std::size_t sustain = static_cast<std::size_t>(std::ceil(cfg.sustain_s / dt - 1e-9));
    const auto& p = trace.power;
    const auto& hot = trace.hot_flow;
    const auto& cold = trace.cold_flow;
    const auto& temp = trace.t_outlet;

    // Case1: hot tap opens on cold water with the heater off, heater switched on soon after.
    if (detail::rising(hot, trigger, cfg.flow_on_lpm) && p[trigger] < cfg.heater_on_w &&
        temp[trigger] < cfg.cold_water_c) {
        for (std::size_t j = trigger + 1; j <= std::min(trigger + reaction, last); ++j) {
            if (p[j] >= cfg.heater_on_w) return EventKind::Case1;
        }
    }

    // Case2: sustained full hot draw without cold water while the tank is still heating.
    std::size_t run = 0;
    for (std::size_t j = trigger; j <= last; ++j) {
        bool heating = p[j] >= cfg.heater_on_w;
        if (cfg.case2_gate == Case2Gate::Temperature) heating = heating && temp[j] < cfg.cold_water_c;
        const bool full_hot_only = hot[j] >= cfg.full_open_lpm && cold[j] < cfg.flow_on_lpm;
        run = heating && full_hot_only ? run + 1 : 0;
        if (run >= sustain) return EventKind::Case2;
    }

    // Case3: both taps open together for a sustained stretch with more cold than hot.
    for (std::size_t j = trigger; j <= last;) {
        if (hot[j] < cfg.flow_on_lpm || cold[j] < cfg.flow_on_lpm) {
            ++j;
            continue;
        }
        double hot_sum = 0.0;
        double cold_sum = 0.0;
        std::size_t k = j;
        for (; k <= last && hot[k] >= cfg.flow_on_lpm && cold[k] >= cfg.flow_on_lpm; ++k) {
            hot_sum += hot[k];
            cold_sum += cold[k];
        }
        if (k - j >= sustain && cold_sum > hot_sum) return EventKind::Case3;
        j = k;
    }

    // Comfort: a good amount of hot water with the heater off for the whole window.
    double volume = 0.0;
    bool heater_off = true;
    for (std::size_t j = trigger; j <= last; ++j) {
        if (j < last) volume += hot[j] * dt / 60.0;
        heater_off = heater_off && p[j] < cfg.heater_on_w;
    }
    if (heater_off && volume >= cfg.comfort_volume_l) return EventKind::Comfort;

    return std::nullopt;
}

/// Chronological scan emitting at most one event per non-overlapping window. A
/// trigger is a rising edge of hot or cold flow through the flow-on threshold;
/// taps already open at the first sample are not edges. Triggers whose window
/// would run past the end of the trace are skipped. Windows whose composite
/// signal is degenerate are dropped and reported through `diagnostics`.
inline std::vector<DetectedEvent> detect(const SensorTrace& trace, const DetectorConfig& cfg,
                                         const FilterBank& bank, const NormalizationConfig& norm,
                                         std::vector<std::string>* diagnostics = nullptr) {
    cfg.validate();
    norm.validate();
    validate(trace);
    const double dt = trace.sample_period;
    const std::size_t span = detail::samples_for(cfg.window_s, dt);
    if (std::abs(static_cast<double>(span) * dt - cfg.window_s) > 1e-9 * cfg.window_s || span == 0) {
        throw Error(ErrorCode::DomainMismatch, "window length is not a whole number of sample periods");
    }
    if (std::abs(bank.domain_length() - cfg.window_s) > 1e-9 * cfg.window_s) {
        throw Error(ErrorCode::DomainMismatch, "filter bank domain differs from the detector window");
    }
    if (trace.duration() < cfg.window_s) {
        throw Error(ErrorCode::TraceTooShort, "trace spans " + std::to_string(trace.duration()) +
                                                  " s, shorter than the " + std::to_string(cfg.window_s) +
                                                  " s event window");
    }

    std::vector<DetectedEvent> events;
    std::size_t cursor = 1;
    while (cursor + span < trace.size()) {
        const std::size_t i = cursor;
        const bool edge = detail::rising(trace.hot_flow, i, cfg.flow_on_lpm) ||
                          detail::rising(trace.cold_flow, i, cfg.flow_on_lpm);
        if (!edge) {
            ++cursor;
            continue;
        }
        const auto kind = match_rules(trace, i, cfg);
        if (!kind) {
            ++cursor;
            continue;
        }
        const Window window{i, i + span};
        try {
            const auto signature = xyz_modified(processor_outputs(composite_signal(trace, window, norm), bank));
            events.push_back(DetectedEvent{*kind, window, signature, trace.time_at(i), trace.time_at(i),
                                           trace.time_at(i + span)});
            cursor = i + span + 1;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::DegenerateSignal) throw;
            if (diagnostics) {
                diagnostics->push_back("dropped " + std::string(to_string(*kind)) + " window at t=" +
                                       std::to_string(trace.time_at(i)) + ": " + e.what());
            }
            ++cursor;
        }
    }
    return events;
}

struct EventRates {
    std::array<double, 4> per_week{}; // indexed by EventKind

    double operator[](EventKind k) const { return per_week[index_of(k)]; }
    double discomfort() const {
        return per_week[index_of(EventKind::Case1)] + per_week[index_of(EventKind::Case2)] +
               per_week[index_of(EventKind::Case3)];
    }
};

inline constexpr double kSecondsPerWeek = 604800.0;

/// Events per week of each kind over an observation horizon.
inline EventRates event_rate(const std::vector<DetectedEvent>& events, double horizon_s) {
    if (!(horizon_s > 0.0)) throw Error(ErrorCode::InvalidConfig, "rate horizon must be > 0");
    EventRates rates;
    for (const auto& e : events) rates.per_week[index_of(e.kind)] += 1.0;
    for (double& r : rates.per_week) r *= kSecondsPerWeek / horizon_s;
    return rates;
}

} // namespace heatchroma
