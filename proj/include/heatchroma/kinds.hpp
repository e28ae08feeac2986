#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

#include "heatchroma/error.hpp"

namespace heatchroma {

/// Event classes in tie-break order.
enum class EventKind { Case1 = 0, Case2 = 1, Case3 = 2, Comfort = 3 };

inline constexpr std::array<EventKind, 4> kAllEventKinds{EventKind::Case1, EventKind::Case2, EventKind::Case3,
                                                         EventKind::Comfort};

inline constexpr std::size_t index_of(EventKind k) { return static_cast<std::size_t>(k); }

inline constexpr bool is_discomfort(EventKind k) { return k != EventKind::Comfort; }

inline std::string_view to_string(EventKind k) {
    switch (k) {
    case EventKind::Case1: return "Case1";
    case EventKind::Case2: return "Case2";
    case EventKind::Case3: return "Case3";
    case EventKind::Comfort: return "Comfort";
    }
    return "";
}

inline EventKind parse_event_kind(std::string_view s) {
    for (EventKind k : kAllEventKinds) {
        if (s == to_string(k)) return k;
    }
    throw Error(ErrorCode::ParseError, "unknown event kind '" + std::string(s) + "'");
}

enum class OperatingMode { Continuous, OnDemand };

inline std::string_view to_string(OperatingMode m) {
    return m == OperatingMode::Continuous ? "Continuous" : "OnDemand";
}

inline OperatingMode parse_operating_mode(std::string_view s) {
    if (s == "Continuous") return OperatingMode::Continuous;
    if (s == "OnDemand") return OperatingMode::OnDemand;
    throw Error(ErrorCode::InvalidConfig, "unknown operating mode '" + std::string(s) + "'");
}

inline OperatingMode opposite(OperatingMode m) {
    return m == OperatingMode::Continuous ? OperatingMode::OnDemand : OperatingMode::Continuous;
}

} // namespace heatchroma
