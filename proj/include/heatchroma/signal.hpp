#pragma once

// Multi-channel heater traces and the preprocessing that fuses them into the
// single composite signal consumed by the chromatic processors.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heatchroma/chromatic.hpp"
#include "heatchroma/error.hpp"

namespace heatchroma {

enum class Channel { Power, HotFlow, ColdFlow, OutletTemp, InletTemp };

inline constexpr std::array<Channel, 5> kAllChannels{Channel::Power, Channel::HotFlow, Channel::ColdFlow,
                                                      Channel::OutletTemp, Channel::InletTemp};

/// Column name used in trace CSV files.
inline std::string_view column_name(Channel c) {
    switch (c) {
    case Channel::Power: return "power_w";
    case Channel::HotFlow: return "hot_flow_lpm";
    case Channel::ColdFlow: return "cold_flow_lpm";
    case Channel::OutletTemp: return "t_outlet_c";
    case Channel::InletTemp: return "t_inlet_c";
    }
    return "";
}

/// Accepts either the CSV column name or the short form ("power", "hot_flow", ...).
inline Channel parse_channel(std::string_view name) {
    static constexpr std::array<std::string_view, 5> short_names{"power", "hot_flow", "cold_flow", "t_outlet",
                                                                 "t_inlet"};
    for (std::size_t i = 0; i < kAllChannels.size(); ++i) {
        if (name == column_name(kAllChannels[i]) || name == short_names[i]) return kAllChannels[i];
    }
    throw Error(ErrorCode::UnknownChannel, "unknown channel '" + std::string(name) + "'");
}

struct SensorTrace {
    double sample_period{1.0}; // seconds
    double start_time{0.0};    // epoch seconds of sample 0
    std::vector<double> power;     // W
    std::vector<double> hot_flow;  // l/min
    std::vector<double> cold_flow; // l/min
    std::vector<double> t_outlet;  // degC
    std::vector<double> t_inlet;   // degC

    std::size_t size() const { return power.size(); }
    double time_at(std::size_t i) const { return start_time + static_cast<double>(i) * sample_period; }
    double duration() const { return size() < 2 ? 0.0 : static_cast<double>(size() - 1) * sample_period; }

    const std::vector<double>& channel(Channel c) const {
        switch (c) {
        case Channel::Power: return power;
        case Channel::HotFlow: return hot_flow;
        case Channel::ColdFlow: return cold_flow;
        case Channel::OutletTemp: return t_outlet;
        case Channel::InletTemp: return t_inlet;
        }
        throw Error(ErrorCode::UnknownChannel, "unknown channel");
    }
    std::vector<double>& channel(Channel c) {
        return const_cast<std::vector<double>&>(std::as_const(*this).channel(c));
    }

    void resize(std::size_t n) {
        for (Channel c : kAllChannels) channel(c).resize(n, 0.0);
    }
};

/// Index of the first sample breaking a trace invariant, with a reason; nullopt if valid.
struct TraceViolation {
    std::size_t index;
    std::string reason;
};

inline std::optional<TraceViolation> find_violation(const SensorTrace& trace) {
    if (!(trace.sample_period > 0.0)) return TraceViolation{0, "sample period must be > 0"};
    const std::size_t n = trace.size();
    for (Channel c : kAllChannels) {
        if (trace.channel(c).size() != n) return TraceViolation{0, "channels differ in length"};
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (Channel c : kAllChannels) {
            if (!std::isfinite(trace.channel(c)[i])) {
                return TraceViolation{i, std::string(column_name(c)) + " is not finite"};
            }
        }
        if (trace.power[i] < 0.0) return TraceViolation{i, "power must be >= 0"};
        if (trace.hot_flow[i] < 0.0 || trace.cold_flow[i] < 0.0) return TraceViolation{i, "flows must be >= 0"};
        for (double t : {trace.t_outlet[i], trace.t_inlet[i]}) {
            if (t < -10.0 || t > 110.0) return TraceViolation{i, "temperature outside [-10, 110] degC"};
        }
    }
    return std::nullopt;
}

inline void validate(const SensorTrace& trace) {
    if (auto v = find_violation(trace)) {
        throw Error(ErrorCode::InvalidTrace, "sample " + std::to_string(v->index) + ": " + v->reason);
    }
}

struct NormalizationConfig {
    double full_scale_power{1200.0}; // W
    double full_scale_flow{12.0};    // l/min
    double hot_weight{1.0};
    double cold_weight{1.0};
    double power_weight{1.0};

    void validate() const {
        if (!(full_scale_power > 0.0) || !(full_scale_flow > 0.0)) {
            throw Error(ErrorCode::InvalidConfig, "full-scale normalisation values must be > 0");
        }
    }
};

/// Closed sample range [start_index, end_index]; spans (end - start) sample periods.
struct Window {
    std::size_t start_index{0};
    std::size_t end_index{0};

    std::size_t sample_count() const { return end_index - start_index + 1; }
    double duration(double sample_period) const {
        return static_cast<double>(end_index - start_index) * sample_period;
    }
};

/// P = w_h * hot / F_flow + w_p * power / F_power - w_c * cold / F_flow, per sample.
/// Cold water enters negatively, so windows dominated by cold flow have L < 0.
inline SampledSignal composite_signal(const SensorTrace& trace, const Window& window,
                                      const NormalizationConfig& cfg) {
    cfg.validate();
    if (window.end_index <= window.start_index || window.end_index >= trace.size()) {
        throw Error(ErrorCode::WindowOutOfBounds, "window [" + std::to_string(window.start_index) + ", " +
                                                      std::to_string(window.end_index) +
                                                      "] does not fit a trace of " +
                                                      std::to_string(trace.size()) + " samples");
    }
    SampledSignal out;
    out.sample_period = trace.sample_period;
    out.values.reserve(window.sample_count());
    for (std::size_t i = window.start_index; i <= window.end_index; ++i) {
        out.values.push_back(cfg.hot_weight * trace.hot_flow[i] / cfg.full_scale_flow +
                             cfg.power_weight * trace.power[i] / cfg.full_scale_power -
                             cfg.cold_weight * trace.cold_flow[i] / cfg.full_scale_flow);
    }
    return out;
}

/// Linear interpolation onto a grid of new_period starting at sample 0. The grid
/// runs to the last point not past the original end, so the final endpoint is
/// kept whenever the original duration is a multiple of new_period.
inline SensorTrace resample(const SensorTrace& trace, double new_period) {
    if (!(new_period > 0.0)) throw Error(ErrorCode::NonPositivePeriod, "resample period must be > 0");
    if (trace.size() < 2 || new_period == trace.sample_period) {
        SensorTrace copy = trace;
        copy.sample_period = new_period;
        return copy;
    }
    const double span = trace.duration();
    const auto count = static_cast<std::size_t>(std::floor(span / new_period + 1e-9)) + 1;

    SensorTrace out;
    out.sample_period = new_period;
    out.start_time = trace.start_time;
    out.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double pos = std::min(static_cast<double>(k) * new_period / trace.sample_period,
                                    static_cast<double>(trace.size() - 1));
        auto lo = static_cast<std::size_t>(std::floor(pos));
        if (lo >= trace.size() - 1) lo = trace.size() - 2;
        const double frac = pos - static_cast<double>(lo);
        for (Channel c : kAllChannels) {
            const auto& src = trace.channel(c);
            out.channel(c)[k] = frac == 0.0 ? src[lo] : src[lo] + frac * (src[lo + 1] - src[lo]);
        }
    }
    return out;
}

struct ChannelStats {
    double mean{0.0};
    double std{0.0}; // sample standard deviation (n - 1)
    double min{0.0};
    double max{0.0};
};

inline ChannelStats compute_stats(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::TooFewSamples, "channel is empty");
    ChannelStats s;
    const double n = static_cast<double>(values.size());
    s.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = values.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    s.min = *lo;
    s.max = *hi;
    return s;
}

inline ChannelStats channel_stats(const SensorTrace& trace, std::string_view channel) {
    return compute_stats(trace.channel(parse_channel(channel)));
}

} // namespace heatchroma
