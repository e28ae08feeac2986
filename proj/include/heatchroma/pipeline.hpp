#pragma once

// End-to-end runs: simulate -> detect -> calibrate -> classify -> export -> advise.
// Every output is rendered in memory first and written only once the whole run
// has succeeded.

#include <cctype>
#include <cstddef>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <system_error>
#include <vector>

#include <nlohmann/json.hpp>

#include "heatchroma/advisor.hpp"
#include "heatchroma/classifier.hpp"
#include "heatchroma/config.hpp"
#include "heatchroma/detector.hpp"
#include "heatchroma/io.hpp"
#include "heatchroma/scenario.hpp"

namespace heatchroma {

/// Relative path -> file content, in deterministic (sorted) order.
using FileBundle = std::map<std::string, std::string>;

inline std::string run_name(std::size_t index, ScenarioKind kind) {
    std::string k(to_string(kind));
    for (auto& ch : k) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    char buf[32];
    std::snprintf(buf, sizeof buf, "run_%03zu_", index);
    return buf + k;
}

struct SimulatedRun {
    std::string name;
    ScenarioScript script;
    SimulationResult result;
};

/// Runs are independent given their derived seeds and are returned in config order.
inline std::vector<SimulatedRun> simulate_all(const RunConfig& cfg) {
    std::vector<SimulatedRun> runs;
    const auto scripts = expand_scripts(cfg);
    runs.reserve(scripts.size());
    for (std::size_t i = 0; i < scripts.size(); ++i) {
        runs.push_back({run_name(i, scripts[i].kind), scripts[i], simulate(cfg.tank, scripts[i])});
    }
    return runs;
}

inline FileBundle simulation_files(const std::vector<SimulatedRun>& runs) {
    FileBundle files;
    for (const auto& r : runs) {
        files[r.name + ".csv"] = to_text([&](std::ostream& o) { write_trace_csv(r.result.trace, o); });
        files[r.name + ".labels.jsonl"] = to_text([&](std::ostream& o) { write_labels(r.result.labels, o); });
    }
    return files;
}

inline nlohmann::ordered_json to_json(const Recommendation& rec) {
    nlohmann::ordered_json j;
    j["verdict"] = std::string(to_string(rec.verdict));
    j["discomfort_rate_per_week"] = rec.input.discomfort_rate;
    j["efficiency"] = rec.input.efficiency;
    j["rate_high"] = rec.input.thresholds.rate_high;
    j["eff_min"] = rec.input.thresholds.eff_min;
    if (rec.input.per_kind) {
        nlohmann::ordered_json k;
        for (EventKind kind : kAllEventKinds) k[std::string(to_string(kind))] = (*rec.input.per_kind)[kind];
        j["rates_per_week"] = k;
    }
    j["current_mode"] = rec.assumed_current_mode ? nlohmann::ordered_json(std::string(to_string(*rec.assumed_current_mode)))
                                                 : nlohmann::ordered_json(nullptr);
    j["current_mode_assumed"] = rec.mode_assumed;
    j["suggested_mode"] = rec.suggested_mode ? nlohmann::ordered_json(std::string(to_string(*rec.suggested_mode)))
                                             : nlohmann::ordered_json(nullptr);
    j["rationale"] = rec.rationale;
    return j;
}

/// Map rows for a set of event records classified against `model`.
inline std::vector<MapRow> map_rows(const std::vector<EventRecord>& records, const ClusterModel& model) {
    std::vector<MapRow> rows;
    rows.reserve(records.size());
    for (const auto& r : records) {
        const auto c = classify(r.signature(), model);
        rows.push_back({r.id, r.kind, c.kind, r.x, r.y, r.z, r.l, c.margin});
    }
    return rows;
}

inline std::vector<LabeledSignature> labeled(const std::vector<EventRecord>& records) {
    std::vector<LabeledSignature> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back({r.signature(), r.kind});
    return out;
}

struct PipelineResult {
    FileBundle files;
    std::vector<std::string> diagnostics;
    std::optional<Recommendation> recommendation;
};

inline PipelineResult run_pipeline(const RunConfig& cfg) {
    PipelineResult out;
    const auto runs = simulate_all(cfg);
    out.files = simulation_files(runs);

    const FilterBank bank = cfg.filter_bank();
    std::vector<EventRecord> all;
    std::vector<DetectedEvent> all_events;
    double horizon = 0.0;
    for (const auto& r : runs) {
        const auto events = detect(r.result.trace, cfg.detector, bank, cfg.normalization, &out.diagnostics);
        auto records = to_records(events);
        out.files[r.name + ".events.jsonl"] = to_text([&](std::ostream& o) { write_events(records, o); });
        for (auto rec : records) {
            rec.id = r.name + ":" + rec.id;
            all.push_back(std::move(rec));
        }
        all_events.insert(all_events.end(), events.begin(), events.end());
        horizon += r.result.trace.duration();
    }

    if (all.empty()) {
        out.diagnostics.push_back("no events detected; cluster model not calibrated");
        out.files["map.csv"] = to_text([&](std::ostream& o) { write_map({}, o); });
    } else {
        const auto model = calibrate(labeled(all), cfg.l_scaling);
        out.files["model.csv"] = to_text([&](std::ostream& o) { write_model(model, o); });
        out.files["map.csv"] = to_text([&](std::ostream& o) { write_map(map_rows(all, model), o); });
    }

    if (cfg.efficiency && horizon > 0.0) {
        const auto rates = event_rate(all_events, horizon);
        AdvisorInput in;
        in.discomfort_rate = rates.discomfort();
        in.efficiency = *cfg.efficiency;
        in.thresholds = cfg.advisor;
        in.per_kind = rates;
        in.current_mode = cfg.current_mode;
        out.recommendation = advise(in);
        out.files["recommendation.json"] = to_json(*out.recommendation).dump(2) + "\n";
    }
    return out;
}

/// Creates `dir` if needed and writes every file; on failure, files already
/// written by this call are removed again.
inline void write_bundle(const std::filesystem::path& dir, const FileBundle& files) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw Error(ErrorCode::IoError, "cannot create output directory " + dir.string());
    }
    std::vector<std::filesystem::path> written;
    try {
        for (const auto& [name, content] : files) {
            const auto path = dir / name;
            write_file_atomic(path, content);
            written.push_back(path);
        }
    } catch (...) {
        for (const auto& p : written) std::filesystem::remove(p, ec);
        throw;
    }
}

} // namespace heatchroma
