#pragma once

// Fuses the weekly discomfort rate with an externally measured heater
// efficiency into one of four operating recommendations.

#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "heatchroma/detector.hpp"
#include "heatchroma/error.hpp"
#include "heatchroma/kinds.hpp"

namespace heatchroma {

struct AdvisorThresholds {
    double rate_high{5.0}; // discomfort events/week at or above which discomfort is significant
    double eff_min{0.75};  // efficiency at or above which the heater counts as efficient
};

struct AdvisorInput {
    double discomfort_rate{0.0}; // Case1 + Case2 + Case3 events per week
    double efficiency{1.0};      // [0, 1], supplied by an external efficiency monitor
    AdvisorThresholds thresholds;
    std::optional<EventRates> per_kind;           // echoed in the rationale when present
    std::optional<OperatingMode> current_mode;    // inferred from per_kind when absent
};

enum class Verdict { KeepCurrent, SwitchModeOrReplaceHeater, UrgentReplacement, SwitchMode };

inline std::string_view to_string(Verdict v) {
    switch (v) {
    case Verdict::KeepCurrent: return "KeepCurrent";
    case Verdict::SwitchModeOrReplaceHeater: return "SwitchModeOrReplaceHeater";
    case Verdict::UrgentReplacement: return "UrgentReplacement";
    case Verdict::SwitchMode: return "SwitchMode";
    }
    return "";
}

/// Partial order used for monotonicity: Keep < {SwitchMode, SwitchModeOrReplace} < Urgent.
inline int severity(Verdict v) {
    switch (v) {
    case Verdict::KeepCurrent: return 0;
    case Verdict::SwitchMode:
    case Verdict::SwitchModeOrReplaceHeater: return 1;
    case Verdict::UrgentReplacement: return 2;
    }
    return 0;
}

struct Recommendation {
    Verdict verdict{Verdict::KeepCurrent};
    std::string rationale;
    AdvisorInput input;
    std::optional<OperatingMode> assumed_current_mode;
    std::optional<OperatingMode> suggested_mode; // set for the two mode-switching verdicts
    bool mode_assumed{false};                    // current mode was inferred, not given
};

/// Case1 only arises when the heater is switched on by hand, Case2 only with the
/// thermostat in charge; whichever dominates names the current mode.
inline std::optional<OperatingMode> infer_operating_mode(const EventRates& rates) {
    const double on_demand = rates[EventKind::Case1];
    const double continuous = rates[EventKind::Case2];
    if (on_demand > continuous) return OperatingMode::OnDemand;
    if (continuous > on_demand) return OperatingMode::Continuous;
    return std::nullopt;
}

namespace detail {

inline std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace detail

inline Recommendation advise(const AdvisorInput& input) {
    if (!(input.efficiency >= 0.0 && input.efficiency <= 1.0)) {
        throw Error(ErrorCode::InvalidEfficiency, "efficiency must lie in [0, 1]");
    }
    if (!(input.discomfort_rate >= 0.0) || !std::isfinite(input.discomfort_rate)) {
        throw Error(ErrorCode::InvalidConfig, "discomfort rate must be >= 0");
    }
    if (!(input.thresholds.rate_high > 0.0) || !(input.thresholds.eff_min > 0.0)) {
        throw Error(ErrorCode::InvalidConfig, "advisor thresholds must be > 0");
    }

    const bool significant = input.discomfort_rate >= input.thresholds.rate_high;
    const bool efficient = input.efficiency >= input.thresholds.eff_min;

    Recommendation rec;
    rec.input = input;
    if (!significant && efficient) {
        rec.verdict = Verdict::KeepCurrent;
    } else if (!significant) {
        rec.verdict = Verdict::SwitchModeOrReplaceHeater;
    } else if (!efficient) {
        rec.verdict = Verdict::UrgentReplacement;
    } else {
        rec.verdict = Verdict::SwitchMode;
    }

    std::string text = "discomfort " + detail::format_number(input.discomfort_rate) + "/week (" +
                       (significant ? "significant" : "few") + ", threshold " +
                       detail::format_number(input.thresholds.rate_high) + "), efficiency " +
                       detail::format_number(input.efficiency) + " (" + (efficient ? "satisfactory" : "low") +
                       ", threshold " + detail::format_number(input.thresholds.eff_min) + ")";
    if (input.per_kind) {
        text += "; per kind/week: Case1 " + detail::format_number((*input.per_kind)[EventKind::Case1]) +
                ", Case2 " + detail::format_number((*input.per_kind)[EventKind::Case2]) + ", Case3 " +
                detail::format_number((*input.per_kind)[EventKind::Case3]) + ", Comfort " +
                detail::format_number((*input.per_kind)[EventKind::Comfort]);
    }

    if (rec.verdict == Verdict::SwitchMode || rec.verdict == Verdict::SwitchModeOrReplaceHeater) {
        rec.assumed_current_mode = input.current_mode;
        if (!rec.assumed_current_mode && input.per_kind) {
            rec.assumed_current_mode = infer_operating_mode(*input.per_kind);
            rec.mode_assumed = rec.assumed_current_mode.has_value();
        }
        if (rec.assumed_current_mode) rec.suggested_mode = opposite(*rec.assumed_current_mode);
    }

    switch (rec.verdict) {
    case Verdict::KeepCurrent:
        text += ". Operation is near optimal; no change needed.";
        break;
    case Verdict::SwitchModeOrReplaceHeater:
        text += ". Standing losses are likely high; switch operating mode";
        if (rec.suggested_mode) text += " to " + std::string(to_string(*rec.suggested_mode));
        text += " to cut losses, or consider replacing the heater.";
        break;
    case Verdict::UrgentReplacement:
        text += ". Frequent discomfort on an inefficient heater; urgent action such as replacing the heater.";
        break;
    case Verdict::SwitchMode:
        text += ". The heater is efficient but usage is uncomfortable; switch operating mode";
        if (rec.suggested_mode) text += " to " + std::string(to_string(*rec.suggested_mode));
        text += " to reduce discomfort.";
        break;
    }
    if (rec.mode_assumed) {
        text += " (current mode assumed " + std::string(to_string(*rec.assumed_current_mode)) +
                " from the dominant discomfort case.)";
    } else if (rec.suggested_mode == std::nullopt &&
               (rec.verdict == Verdict::SwitchMode || rec.verdict == Verdict::SwitchModeOrReplaceHeater)) {
        text += " (current mode unknown; switch to the other mode.)";
    }
    rec.rationale = std::move(text);
    return rec;
}

} // namespace heatchroma
