#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include "heatchroma/config.hpp"
#include "heatchroma/io.hpp"
#include "heatchroma/scenario.hpp"

using namespace heatchroma;

namespace {

SensorTrace sample_trace() {
    ScenarioScript s;
    s.kind = ScenarioKind::Case3;
    s.seed = 5;
    return simulate(TankModel{}, s).trace;
}

std::string csv_with_rows(std::size_t rows) {
    std::ostringstream ss;
    ss << kTraceHeader << '\n';
    for (std::size_t i = 0; i < rows; ++i) ss << i << ",0,0,0,40,18\n";
    return ss.str();
}

} // namespace

TEST(TraceCsv, RoundTripIsExact) {
    const auto trace = sample_trace();
    std::stringstream ss;
    write_trace_csv(trace, ss);
    const auto back = read_trace_csv(ss);
    EXPECT_EQ(back.power, trace.power);
    EXPECT_EQ(back.hot_flow, trace.hot_flow);
    EXPECT_EQ(back.cold_flow, trace.cold_flow);
    EXPECT_EQ(back.t_outlet, trace.t_outlet);
    EXPECT_EQ(back.t_inlet, trace.t_inlet);
    EXPECT_DOUBLE_EQ(back.sample_period, 1.0);
}

TEST(TraceCsv, MalformedRowReportsLine) {
    std::string text = csv_with_rows(30);
    // Line 17 holds data row 16 ("15,..."); drop a field from it.
    const auto pos = text.find("\n15,0,0,0,40,18\n");
    ASSERT_NE(pos, std::string::npos);
    text.replace(pos + 1, 14, "15,0,0,40,18");
    std::istringstream in(text);
    try {
        read_trace_csv(in);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 17u);
        EXPECT_EQ(e.code(), ErrorCode::ParseError);
    }
}

TEST(TraceCsv, RejectsBadInput) {
    std::istringstream bad_header("time,power\n0,1\n");
    EXPECT_THROW(read_trace_csv(bad_header), ParseError);

    std::istringstream negative(std::string(kTraceHeader) + "\n0,0,-1,0,40,18\n");
    EXPECT_THROW(read_trace_csv(negative), ParseError);

    std::istringstream uneven(std::string(kTraceHeader) + "\n0,0,0,0,40,18\n1,0,0,0,40,18\n3,0,0,0,40,18\n");
    try {
        read_trace_csv(uneven);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 4u);
    }

    std::istringstream text(std::string(kTraceHeader) + "\n0,abc,0,0,40,18\n");
    EXPECT_THROW(read_trace_csv(text), ParseError);
}

TEST(TraceCsv, HeaderOnlyIsEmptyAndTooShortToDetect) {
    std::istringstream in(std::string(kTraceHeader) + "\n");
    const auto trace = read_trace_csv(in);
    EXPECT_EQ(trace.size(), 0u);
    try {
        detect(trace, DetectorConfig{}, default_filter_bank(600.0), NormalizationConfig{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TraceTooShort);
    }
}

TEST(Labels, RoundTrip) {
    const std::vector<GroundTruthLabel> labels{{EventKind::Case1, 120, 200}, {EventKind::Comfort, 900, 1100}};
    std::stringstream ss;
    write_labels(labels, ss);
    const auto back = read_labels(ss);
    ASSERT_EQ(back.size(), 2u);
    EXPECT_EQ(back[1].kind, EventKind::Comfort);
    EXPECT_EQ(back[0].end_s, 200.0);
}

TEST(Events, RoundTripAndReconstruction) {
    const auto events = detect(sample_trace(), DetectorConfig{}, default_filter_bank(600.0), NormalizationConfig{});
    ASSERT_FALSE(events.empty());
    const auto records = to_records(events);
    std::stringstream ss;
    write_events(records, ss);
    const auto back = read_events(ss);
    ASSERT_EQ(back.size(), records.size());
    EXPECT_EQ(back[0].id, "evt-0000");
    EXPECT_EQ(back[0].kind, events[0].kind);
    const auto sig = back[0].signature();
    EXPECT_NEAR(sig.r, events[0].signature.r, 1e-9 * std::abs(events[0].signature.r));
    EXPECT_NEAR(sig.b, events[0].signature.b, 1e-9 * std::abs(events[0].signature.b));
    EXPECT_EQ(sig.l, events[0].signature.l);
}

TEST(Events, BadLineIsReported) {
    std::istringstream in("{\"kind\":\"Case1\",\"start_s\":0,\"end_s\":600,\"x\":0.2,\"y\":0.3,\"z\":0.5,\"L\":70,"
                          "\"trigger_time\":0}\n{\"kind\":\"Case9\"}\n");
    try {
        read_events(in);
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 2u);
    }
}

TEST(Model, RoundTrip) {
    const ClusterModel m({{EventKind::Case3, -0.85, -10.8, 0.029}, {EventKind::Case1, 0.211, 70.5, 0.039}}, 44.82);
    std::stringstream ss;
    write_model(m, ss);
    const auto back = read_model(ss);
    ASSERT_EQ(back.classes().size(), 2u);
    EXPECT_EQ(back.l_scaling(), 44.82);
    EXPECT_EQ(back.classes()[0].kind, EventKind::Case1);
    EXPECT_EQ(back.classes()[1].centroid_l, -10.8);

    std::ostringstream none;
    EXPECT_THROW(write_model(ClusterModel{}, none), Error);
}

TEST(Map, HeaderOnlyWhenEmpty) {
    std::ostringstream ss;
    write_map({}, ss);
    EXPECT_EQ(ss.str(), std::string(kMapHeader) + "\n");
}

TEST(Config, DefaultsAndOverrides) {
    const auto cfg = parse_run_config(nlohmann::json::parse(R"({
        "seed": 9,
        "tank": {"volume_l": 80},
        "scenarios": [{"kind": "Case2", "count": 3}, {"kind": "Comfort"}],
        "detector": {"case2_gate": "power"},
        "advisor": {"efficiency": 0.8, "current_mode": "OnDemand"}
    })"));
    EXPECT_EQ(cfg.seed, 9u);
    EXPECT_EQ(cfg.tank.volume_l, 80.0);
    EXPECT_EQ(cfg.tank.set_point_c, 60.0);
    EXPECT_EQ(cfg.detector.case2_gate, Case2Gate::Power);
    EXPECT_EQ(cfg.efficiency, 0.8);
    EXPECT_EQ(cfg.current_mode, OperatingMode::OnDemand);
    const auto scripts = expand_scripts(cfg);
    ASSERT_EQ(scripts.size(), 4u);
    EXPECT_NE(scripts[0].seed, scripts[1].seed);
    EXPECT_EQ(scripts[3].kind, ScenarioKind::Comfort);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
    for (const char* text : {R"({"sead": 1})", R"({"tank": {"volume": 50}})", R"({"scenarios": [{"kind": "Case7"}]})",
                             R"({"detector": {"case2_gate": "both"}})", R"({"tank": {"volume_l": -1}})",
                             R"({"filter_bank": {"profiles": []}})", R"({"seed": "one"})"}) {
        EXPECT_THROW(parse_run_config(nlohmann::json::parse(text)), Error) << text;
    }
    try {
        parse_run_config(nlohmann::json::parse(R"({"advisor": {"efficiency": 1.2}})"));
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidEfficiency);
    }
}

TEST(Config, DerivedSeedsAreStable) {
    EXPECT_EQ(derive_seed(1, 0), derive_seed(1, 0));
    EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
    EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}
