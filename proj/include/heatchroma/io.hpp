#pragma once

// File formats: trace CSV, ground-truth label and event logs (one JSON object
// per line), the cluster model file and the x-L map export.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "heatchroma/chromatic.hpp"
#include "heatchroma/classifier.hpp"
#include "heatchroma/detector.hpp"
#include "heatchroma/error.hpp"
#include "heatchroma/kinds.hpp"
#include "heatchroma/scenario.hpp"
#include "heatchroma/signal.hpp"

namespace heatchroma {

namespace detail {

/// Shortest representation that parses back to the same double.
inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view field, double& out) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
        field.remove_suffix(1);
    }
    if (field.empty()) return false;
    if (field.front() == '+') field.remove_prefix(1);
    const auto res = std::from_chars(field.data(), field.data() + field.size(), out);
    return res.ec == std::errc() && res.ptr == field.data() + field.size() && std::isfinite(out);
}

inline std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t pos = 0;
    while (true) {
        const auto next = line.find(sep, pos);
        out.push_back(line.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

inline std::string_view chomp(std::string_view s) {
    if (!s.empty() && s.back() == '\r') s.remove_suffix(1);
    return s;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Trace CSV

inline constexpr std::string_view kTraceHeader = "t_s,power_w,hot_flow_lpm,cold_flow_lpm,t_outlet_c,t_inlet_c";

inline void write_trace_csv(const SensorTrace& trace, std::ostream& out) {
    out << kTraceHeader << '\n';
    for (std::size_t i = 0; i < trace.size(); ++i) {
        out << detail::format_double(trace.time_at(i)) << ',' << detail::format_double(trace.power[i]) << ','
            << detail::format_double(trace.hot_flow[i]) << ',' << detail::format_double(trace.cold_flow[i]) << ','
            << detail::format_double(trace.t_outlet[i]) << ',' << detail::format_double(trace.t_inlet[i]) << '\n';
    }
}

/// Parses and validates a trace; the sample period is taken from the t_s column,
/// which must be uniform. Errors carry the 1-based file line.
inline SensorTrace read_trace_csv(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw ParseError(1, "missing header");
    ++line_no;
    if (detail::chomp(line) != kTraceHeader) {
        throw ParseError(line_no, "expected header '" + std::string(kTraceHeader) + "'");
    }

    SensorTrace trace;
    std::vector<double> times;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = detail::chomp(line);
        if (row.empty()) continue;
        const auto fields = detail::split(row, ',');
        if (fields.size() != 6) {
            throw ParseError(line_no, "expected 6 fields, found " + std::to_string(fields.size()));
        }
        double v[6];
        for (std::size_t k = 0; k < 6; ++k) {
            if (!detail::parse_double(fields[k], v[k])) {
                throw ParseError(line_no, "field " + std::to_string(k + 1) + " is not a number");
            }
        }
        times.push_back(v[0]);
        trace.power.push_back(v[1]);
        trace.hot_flow.push_back(v[2]);
        trace.cold_flow.push_back(v[3]);
        trace.t_outlet.push_back(v[4]);
        trace.t_inlet.push_back(v[5]);

        const std::size_t i = times.size() - 1;
        SensorTrace one;
        one.power = {v[1]};
        one.hot_flow = {v[2]};
        one.cold_flow = {v[3]};
        one.t_outlet = {v[4]};
        one.t_inlet = {v[5]};
        if (auto bad = find_violation(one)) throw ParseError(line_no, bad->reason);
        if (i >= 1) {
            const double step = times[i] - times[i - 1];
            if (i == 1) {
                if (!(step > 0.0)) throw ParseError(line_no, "timestamps must increase");
                trace.sample_period = step;
            } else if (std::abs(step - trace.sample_period) > 1e-6 * std::max(1.0, trace.sample_period)) {
                throw ParseError(line_no, "non-uniform sample spacing");
            }
        }
    }
    if (!times.empty()) trace.start_time = times.front();
    return trace;
}

// ---------------------------------------------------------------------------
// Line-delimited JSON helpers

namespace detail {

template <typename F>
void for_each_json_line(std::istream& in, F&& handle) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto text = chomp(line);
        if (text.find_first_not_of(" \t") == std::string_view::npos) continue;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, std::string("invalid JSON: ") + e.what());
        }
        if (!j.is_object()) throw ParseError(line_no, "expected a JSON object");
        try {
            handle(j, line_no);
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(line_no, e.what());
        } catch (const ParseError&) {
            throw;
        } catch (const Error& e) {
            throw ParseError(line_no, e.what());
        }
    }
}

inline double require_number(const nlohmann::json& j, const char* key, std::size_t line_no) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw ParseError(line_no, std::string("missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

inline std::string require_string(const nlohmann::json& j, const char* key, std::size_t line_no) {
    if (!j.contains(key) || !j.at(key).is_string()) {
        throw ParseError(line_no, std::string("missing string field '") + key + "'");
    }
    return j.at(key).get<std::string>();
}

} // namespace detail

// ---------------------------------------------------------------------------
// Ground-truth labels: {"kind", "start_s", "end_s"}

inline void write_labels(const std::vector<GroundTruthLabel>& labels, std::ostream& out) {
    for (const auto& l : labels) {
        nlohmann::ordered_json j;
        j["kind"] = std::string(to_string(l.kind));
        j["start_s"] = l.start_s;
        j["end_s"] = l.end_s;
        out << j.dump() << '\n';
    }
}

inline std::vector<GroundTruthLabel> read_labels(std::istream& in) {
    std::vector<GroundTruthLabel> out;
    detail::for_each_json_line(in, [&](const nlohmann::json& j, std::size_t line_no) {
        out.push_back({parse_event_kind(detail::require_string(j, "kind", line_no)),
                       detail::require_number(j, "start_s", line_no), detail::require_number(j, "end_s", line_no)});
    });
    return out;
}

// ---------------------------------------------------------------------------
// Event log: {"id", "kind", "start_s", "end_s", "x", "y", "z", "L", "trigger_time"}

struct EventRecord {
    std::string id;
    EventKind kind{EventKind::Case1};
    double start_s{0.0};
    double end_s{0.0};
    double x{0.0};
    double y{0.0};
    double z{0.0};
    double l{0.0};
    double trigger_time{0.0};

    /// R, G and B follow from x, y, z and L because x = R / |3L|.
    ChromaticSignature signature() const {
        const double scale = std::abs(3.0 * l);
        return ChromaticSignature{x * scale, y * scale, z * scale, x, y, z, l};
    }
};

inline std::string event_id(std::size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "evt-%04zu", index);
    return buf;
}

inline std::vector<EventRecord> to_records(const std::vector<DetectedEvent>& events) {
    std::vector<EventRecord> out;
    out.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        out.push_back({event_id(i), e.kind, e.start_s, e.end_s, e.signature.x, e.signature.y, e.signature.z,
                       e.signature.l, e.trigger_time});
    }
    return out;
}

inline nlohmann::ordered_json to_json(const EventRecord& r) {
    nlohmann::ordered_json j;
    j["id"] = r.id;
    j["kind"] = std::string(to_string(r.kind));
    j["start_s"] = r.start_s;
    j["end_s"] = r.end_s;
    j["x"] = r.x;
    j["y"] = r.y;
    j["z"] = r.z;
    j["L"] = r.l;
    j["trigger_time"] = r.trigger_time;
    return j;
}

inline void write_events(const std::vector<EventRecord>& records, std::ostream& out) {
    for (const auto& r : records) out << to_json(r).dump() << '\n';
}

/// Records without an "id" get their 0-based position in the file.
inline std::vector<EventRecord> read_events(std::istream& in) {
    std::vector<EventRecord> out;
    detail::for_each_json_line(in, [&](const nlohmann::json& j, std::size_t line_no) {
        EventRecord r;
        r.id = j.contains("id") && j.at("id").is_string() ? j.at("id").get<std::string>() : event_id(out.size());
        r.kind = parse_event_kind(detail::require_string(j, "kind", line_no));
        r.start_s = detail::require_number(j, "start_s", line_no);
        r.end_s = detail::require_number(j, "end_s", line_no);
        r.x = detail::require_number(j, "x", line_no);
        r.y = detail::require_number(j, "y", line_no);
        r.z = detail::require_number(j, "z", line_no);
        r.l = detail::require_number(j, "L", line_no);
        r.trigger_time = detail::require_number(j, "trigger_time", line_no);
        out.push_back(std::move(r));
    });
    return out;
}

// ---------------------------------------------------------------------------
// Cluster model: CSV with header class,centroid_x,centroid_L,spread,scaling

inline constexpr std::string_view kModelHeader = "class,centroid_x,centroid_L,spread,scaling";

inline void write_model(const ClusterModel& model, std::ostream& out) {
    if (!model.calibrated()) throw Error(ErrorCode::UncalibratedModel, "cannot save an uncalibrated model");
    out << kModelHeader << '\n';
    for (const auto& c : model.classes()) {
        out << to_string(c.kind) << ',' << detail::format_double(c.centroid_x) << ','
            << detail::format_double(c.centroid_l) << ',' << detail::format_double(c.spread) << ','
            << detail::format_double(model.l_scaling()) << '\n';
    }
}

inline ClusterModel read_model(std::istream& in) {
    std::string line;
    std::size_t line_no = 1;
    if (!std::getline(in, line) || detail::chomp(line) != kModelHeader) {
        throw ParseError(1, "expected header '" + std::string(kModelHeader) + "'");
    }
    std::vector<ClassCluster> classes;
    double scaling = 0.0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto row = detail::chomp(line);
        if (row.empty()) continue;
        const auto f = detail::split(row, ',');
        if (f.size() != 5) throw ParseError(line_no, "expected 5 fields");
        ClassCluster c;
        try {
            c.kind = parse_event_kind(f[0]);
        } catch (const Error& e) {
            throw ParseError(line_no, e.what());
        }
        double s = 0.0;
        if (!detail::parse_double(f[1], c.centroid_x) || !detail::parse_double(f[2], c.centroid_l) ||
            !detail::parse_double(f[3], c.spread) || !detail::parse_double(f[4], s)) {
            throw ParseError(line_no, "non-numeric model field");
        }
        if (!classes.empty() && s != scaling) throw ParseError(line_no, "inconsistent scaling across classes");
        scaling = s;
        classes.push_back(c);
    }
    try {
        return ClusterModel(std::move(classes), scaling);
    } catch (const Error& e) {
        throw ParseError(line_no, e.what());
    }
}

// ---------------------------------------------------------------------------
// x-L map export

struct MapRow {
    std::string event_id;
    EventKind kind_true{EventKind::Case1};
    EventKind kind_predicted{EventKind::Case1};
    double x{0.0};
    double y{0.0};
    double z{0.0};
    double l{0.0};
    double margin{0.0};
};

inline constexpr std::string_view kMapHeader = "event_id,kind_true,kind_predicted,x,y,z,L,margin";

inline void write_map(const std::vector<MapRow>& rows, std::ostream& out) {
    out << kMapHeader << '\n';
    for (const auto& r : rows) {
        out << r.event_id << ',' << to_string(r.kind_true) << ',' << to_string(r.kind_predicted) << ','
            << detail::format_double(r.x) << ',' << detail::format_double(r.y) << ',' << detail::format_double(r.z)
            << ',' << detail::format_double(r.l) << ',' << detail::format_double(r.margin) << '\n';
    }
}

// ---------------------------------------------------------------------------
// Filesystem helpers

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// Writes via a sibling temporary file and renames it into place, so a failed
/// write never leaves a partial file at `path`.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        out.flush();
        if (!out) {
            std::error_code ec;
            std::filesystem::remove(tmp, ec);
            throw Error(ErrorCode::IoError, "failed writing " + path.string());
        }
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw Error(ErrorCode::IoError, "cannot move " + tmp.string() + " into place");
    }
}

template <typename Writer>
std::string to_text(Writer&& writer) {
    std::ostringstream ss;
    writer(ss);
    return ss.str();
}

} // namespace heatchroma
