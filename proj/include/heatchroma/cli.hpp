#pragma once

// Command-line front end. Exit codes: 0 success, 1 usage/config/IO error,
// 2 data error. All inputs are read and validated before any output is written.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "heatchroma/advisor.hpp"
#include "heatchroma/classifier.hpp"
#include "heatchroma/config.hpp"
#include "heatchroma/detector.hpp"
#include "heatchroma/error.hpp"
#include "heatchroma/io.hpp"
#include "heatchroma/pipeline.hpp"

namespace heatchroma::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;

inline int exit_code_for(ErrorCode code) {
    switch (code) {
    case ErrorCode::InvalidConfig:
    case ErrorCode::InvalidScript:
    case ErrorCode::InvalidEfficiency:
    case ErrorCode::IoError:
    case ErrorCode::UnknownChannel:
    case ErrorCode::NonPositivePeriod:
    case ErrorCode::NonPositiveWindow: return kExitUsage;
    default: return kExitData;
    }
}

namespace detail {

inline RunConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
    RunConfig cfg = path.empty() ? parse_run_config(nlohmann::json::object()) : load_run_config(path);
    if (seed) cfg.seed = *seed;
    return cfg;
}

template <typename Reader>
auto read_path(const std::string& path, Reader&& reader) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    try {
        return reader(in);
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + std::string(e.what()));
    }
}

/// Writes to `path`, or to `out` when the path is empty.
inline void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
    } else {
        write_file_atomic(path, content);
    }
}

/// Concatenates event files, suffixing ids that repeat across inputs ("_2", "_3", ...).
inline std::vector<EventRecord> merge_event_files(const std::vector<std::string>& paths, std::ostream& err) {
    std::vector<EventRecord> all;
    std::map<std::string, int> seen;
    for (const auto& p : paths) {
        for (auto& r : read_path(p, [](std::istream& in) { return read_events(in); })) {
            int& count = seen[r.id];
            ++count;
            if (count > 1) {
                std::string renamed = r.id + "_" + std::to_string(count);
                while (seen.count(renamed)) renamed += "_";
                err << "warning: duplicate event id '" << r.id << "' in " << p << " renamed to '" << renamed << "'\n";
                seen[renamed] = 1;
                r.id = renamed;
            }
            all.push_back(std::move(r));
        }
    }
    return all;
}

inline double read_efficiency_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::string line;
    std::getline(in, line);
    double v = 0.0;
    if (!heatchroma::detail::parse_double(line, v)) {
        throw Error(ErrorCode::InvalidEfficiency, path + " must hold a single number in [0, 1]");
    }
    return v;
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Chromatic discomfort-event monitor for residential electric water heaters", "heatchroma"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;

    auto* sim = app.add_subcommand("simulate", "Generate seeded scenario traces and ground-truth labels");
    sim->add_option("--config", config_path, "Run configuration (JSON)")->required();
    sim->add_option("--seed", seed, "Override the configuration seed");
    sim->add_option("--out", out_path, "Output directory")->required();

    std::string trace_path;
    auto* det = app.add_subcommand("detect", "Detect discomfort/comfort events in a trace CSV");
    det->add_option("trace", trace_path, "Trace CSV")->required();
    det->add_option("--config", config_path, "Run configuration (JSON)");
    det->add_option("--out", out_path, "Events file (default: stdout)");

    std::vector<std::string> event_paths;
    auto* cal = app.add_subcommand("calibrate", "Fit x-L cluster centroids from event files");
    cal->add_option("events", event_paths, "Event files")->required();
    cal->add_option("--config", config_path, "Run configuration (JSON)");
    cal->add_option("--out", out_path, "Model file (default: stdout)");

    std::string model_path;
    auto* cls = app.add_subcommand("classify", "Classify events by nearest centroid");
    cls->add_option("events", event_paths, "Event files")->required();
    cls->add_option("--model", model_path, "Model file")->required();
    cls->add_option("--out", out_path, "Output file (default: stdout)");

    auto* map = app.add_subcommand("export-map", "Export the x-L map as CSV");
    map->add_option("events", event_paths, "Event files")->required();
    map->add_option("--model", model_path, "Model file (default: calibrate on the inputs)");
    map->add_option("--config", config_path, "Run configuration (JSON)");
    map->add_option("--out", out_path, "Map CSV (default: stdout)");

    std::optional<double> efficiency;
    std::string efficiency_file;
    std::optional<double> horizon;
    std::string mode;
    auto* adv = app.add_subcommand("advise", "Recommend an operating strategy");
    adv->add_option("events", event_paths, "Event files");
    adv->add_option("--efficiency", efficiency, "Heater efficiency in [0, 1]");
    adv->add_option("--efficiency-file", efficiency_file, "File whose first line is the efficiency");
    adv->add_option("--horizon", horizon, "Observation horizon in seconds")->required();
    adv->add_option("--mode", mode, "Current operating mode (Continuous|OnDemand)");
    adv->add_option("--config", config_path, "Run configuration (JSON)");
    adv->add_option("--out", out_path, "Recommendation JSON (default: stdout)");

    auto* pipe = app.add_subcommand("pipeline", "simulate -> detect -> calibrate -> classify -> export -> advise");
    pipe->add_option("--config", config_path, "Run configuration (JSON)")->required();
    pipe->add_option("--seed", seed, "Override the configuration seed");
    pipe->add_option("--efficiency", efficiency, "Heater efficiency in [0, 1]");
    pipe->add_option("--out", out_path, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::CallForAllHelp& e) {
        app.exit(e, out, err);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (sim->parsed()) {
            const RunConfig cfg = detail::load_config(config_path, seed);
            const auto runs = simulate_all(cfg);
            write_bundle(out_path, simulation_files(runs));
            for (const auto& r : runs) {
                out << r.name << ": " << r.result.trace.size() << " samples, " << r.result.labels.size()
                    << " labelled events\n";
            }
        } else if (det->parsed()) {
            const RunConfig cfg = detail::load_config(config_path, std::nullopt);
            const auto trace = detail::read_path(trace_path, [](std::istream& in) { return read_trace_csv(in); });
            std::vector<std::string> diagnostics;
            const auto events = detect(trace, cfg.detector, cfg.filter_bank(), cfg.normalization, &diagnostics);
            for (const auto& d : diagnostics) err << "warning: " << d << '\n';
            detail::emit(out_path, to_text([&](std::ostream& o) { write_events(to_records(events), o); }), out);
        } else if (cal->parsed()) {
            const RunConfig cfg = detail::load_config(config_path, std::nullopt);
            const auto records = detail::merge_event_files(event_paths, err);
            const auto model = calibrate(labeled(records), cfg.l_scaling);
            detail::emit(out_path, to_text([&](std::ostream& o) { write_model(model, o); }), out);
        } else if (cls->parsed()) {
            const auto model = detail::read_path(model_path, [](std::istream& in) { return read_model(in); });
            const auto records = detail::merge_event_files(event_paths, err);
            std::ostringstream text;
            for (const auto& r : records) {
                const auto c = classify(r.signature(), model);
                auto j = to_json(r);
                j["predicted"] = std::string(to_string(c.kind));
                j["margin"] = c.margin;
                text << j.dump() << '\n';
            }
            detail::emit(out_path, text.str(), out);
        } else if (map->parsed()) {
            const RunConfig cfg = detail::load_config(config_path, std::nullopt);
            const auto records = detail::merge_event_files(event_paths, err);
            std::vector<MapRow> rows;
            if (!records.empty()) {
                const ClusterModel model =
                    model_path.empty() ? calibrate(labeled(records), cfg.l_scaling)
                                       : detail::read_path(model_path, [](std::istream& in) { return read_model(in); });
                rows = map_rows(records, model);
            }
            detail::emit(out_path, to_text([&](std::ostream& o) { write_map(rows, o); }), out);
        } else if (adv->parsed()) {
            const RunConfig cfg = detail::load_config(config_path, std::nullopt);
            if (efficiency && !efficiency_file.empty()) {
                throw Error(ErrorCode::InvalidConfig, "give either --efficiency or --efficiency-file, not both");
            }
            if (!efficiency_file.empty()) efficiency = detail::read_efficiency_file(efficiency_file);
            if (!efficiency) efficiency = cfg.efficiency;
            if (!efficiency) throw Error(ErrorCode::InvalidEfficiency, "an efficiency figure is required");

            const auto records = detail::merge_event_files(event_paths, err);
            std::vector<DetectedEvent> events;
            for (const auto& r : records) events.push_back(DetectedEvent{r.kind, {}, r.signature(), r.trigger_time, r.start_s, r.end_s});
            const auto rates = event_rate(events, *horizon);

            AdvisorInput in;
            in.discomfort_rate = rates.discomfort();
            in.efficiency = *efficiency;
            in.thresholds = cfg.advisor;
            in.per_kind = rates;
            in.current_mode = mode.empty() ? cfg.current_mode : std::optional(parse_operating_mode(mode));
            const auto rec = advise(in);
            const std::string json = to_json(rec).dump() + "\n";
            if (out_path.empty()) {
                out << json;
            } else {
                write_file_atomic(out_path, json);
            }
            out << to_string(rec.verdict) << ": " << rec.rationale << '\n';
        } else if (pipe->parsed()) {
            RunConfig cfg = detail::load_config(config_path, seed);
            if (efficiency) cfg.efficiency = efficiency;
            const auto result = run_pipeline(cfg);
            for (const auto& d : result.diagnostics) err << "warning: " << d << '\n';
            write_bundle(out_path, result.files);
            out << "wrote " << result.files.size() << " files to " << out_path << '\n';
            if (result.recommendation) {
                out << to_string(result.recommendation->verdict) << ": " << result.recommendation->rationale << '\n';
            }
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitOk;
}

} // namespace heatchroma::cli
