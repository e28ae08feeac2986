#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <gtest/gtest.h>

#include "heatchroma/cli.hpp"

using namespace heatchroma;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "heatchroma");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = heatchroma::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
  protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("heatchroma_cli_" + std::to_string(::getpid()) + "_" + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }

    std::string write(const std::string& name, const std::string& content) const {
        std::ofstream(path(name)) << content;
        return path(name);
    }

    std::string config(const std::string& scenarios) const {
        return write("config.json", R"({"seed": 3, "scenarios": )" + scenarios + "}");
    }

    fs::path dir_;
};

std::string slurp(const std::string& p) { return read_file(p); }

std::size_t count_lines(const std::string& s) {
    std::size_t n = 0;
    for (char c : s) n += c == '\n';
    return n;
}

} // namespace

TEST_F(CliTest, SimulateIsReproducible) {
    const auto cfg = config(R"([{"kind": "Case1"}, {"kind": "Background"}])");
    ASSERT_EQ(invoke({"simulate", "--config", cfg, "--out", path("a")}).code, 0);
    ASSERT_EQ(invoke({"simulate", "--config", cfg, "--out", path("b")}).code, 0);
    for (const char* f : {"run_000_case1.csv", "run_000_case1.labels.jsonl", "run_001_background.csv"}) {
        EXPECT_EQ(slurp(path("a/") + f), slurp(path("b/") + f)) << f;
    }
    const auto labels = slurp(path("a/run_000_case1.labels.jsonl"));
    EXPECT_EQ(count_lines(labels), 1u);
    EXPECT_NE(labels.find("\"Case1\""), std::string::npos);
    EXPECT_EQ(slurp(path("a/run_001_background.labels.jsonl")), "");

    ASSERT_EQ(invoke({"simulate", "--config", cfg, "--seed", "4", "--out", path("c")}).code, 0);
    EXPECT_NE(slurp(path("a/run_000_case1.csv")), slurp(path("c/run_000_case1.csv")));
}

TEST_F(CliTest, UnwritableOutputLeavesNothing) {
    const auto cfg = config(R"([{"kind": "Comfort"}])");
    const auto blocker = write("blocker", "not a directory");
    const auto r = invoke({"simulate", "--config", cfg, "--out", blocker + "/sub"});
    EXPECT_NE(r.code, 0);
    EXPECT_FALSE(r.err.empty());
    EXPECT_FALSE(fs::exists(blocker + "/sub"));
}

TEST_F(CliTest, DetectCase2Trace) {
    const auto cfg = config(R"([{"kind": "Case2"}])");
    ASSERT_EQ(invoke({"simulate", "--config", cfg, "--out", path("sim")}).code, 0);
    const auto r = invoke({"detect", path("sim/run_000_case2.csv")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(count_lines(r.out), 1u);
    EXPECT_NE(r.out.find("\"kind\":\"Case2\""), std::string::npos);

    ASSERT_EQ(invoke({"detect", path("sim/run_000_case2.csv"), "--out", path("ev.jsonl")}).code, 0);
    EXPECT_EQ(slurp(path("ev.jsonl")), r.out);
}

TEST_F(CliTest, DetectErrors) {
    const auto header_only = write("empty.csv", std::string(kTraceHeader) + "\n");
    const auto r = invoke({"detect", header_only});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("TraceTooShort"), std::string::npos);

    EXPECT_EQ(invoke({"detect", path("missing.csv")}).code, 1);
    EXPECT_EQ(invoke({"detect"}).code, 1);
    EXPECT_EQ(invoke({"frobnicate"}).code, 1);

    const auto bad = write("bad.csv", std::string(kTraceHeader) + "\n0,0,0,0,40\n");
    const auto b = invoke({"detect", bad});
    EXPECT_EQ(b.code, 2);
    EXPECT_NE(b.err.find("line 2"), std::string::npos);
}

TEST_F(CliTest, ExportMapOfNothingIsHeaderOnly) {
    const auto empty = write("none.jsonl", "");
    const auto r = invoke({"export-map", empty});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, std::string(kMapHeader) + "\n");
}

TEST_F(CliTest, CalibrateClassifyAndDuplicateIds) {
    std::string events;
    for (int i = 0; i < 3; ++i) {
        events += R"({"id":"evt-000)" + std::to_string(i) + R"(","kind":"Case1","start_s":0,"end_s":600,"x":0.2,"y":0.3,"z":0.5,"L":)" +
                  std::to_string(70 + i) + R"(,"trigger_time":0})" + "\n";
    }
    const auto a = write("a.jsonl", events);
    const auto b = write("b.jsonl", events);

    const auto cal = invoke({"calibrate", a, b, "--out", path("model.csv")});
    ASSERT_EQ(cal.code, 0) << cal.err;
    EXPECT_NE(cal.err.find("duplicate event id 'evt-0000'"), std::string::npos);
    EXPECT_NE(slurp(path("model.csv")).find("Case1,"), std::string::npos);

    const auto map = invoke({"export-map", a, b, "--model", path("model.csv")});
    ASSERT_EQ(map.code, 0);
    EXPECT_NE(map.out.find("evt-0000_2,Case1,Case1"), std::string::npos);
    EXPECT_EQ(count_lines(map.out), 7u);

    const auto cls = invoke({"classify", a, "--model", path("model.csv")});
    ASSERT_EQ(cls.code, 0);
    EXPECT_EQ(count_lines(cls.out), 3u);
    EXPECT_NE(cls.out.find("\"predicted\":\"Case1\""), std::string::npos);

    const auto two = write("two.jsonl", events.substr(0, events.find('\n', events.find('\n') + 1) + 1));
    const auto few = invoke({"calibrate", two});
    EXPECT_EQ(few.code, 2);
    EXPECT_NE(few.err.find("InsufficientSamples"), std::string::npos);
}

TEST_F(CliTest, AdviseExitCodes) {
    std::string events;
    for (int i = 0; i < 10; ++i) {
        events += R"({"kind":"Case1","start_s":0,"end_s":600,"x":0.2,"y":0.3,"z":0.5,"L":70,"trigger_time":0})";
        events += "\n";
    }
    const auto ev = write("ev.jsonl", events);
    const auto r = invoke({"advise", ev, "--horizon", "604800", "--efficiency", "0.9"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("\"verdict\":\"SwitchMode\""), std::string::npos);
    EXPECT_NE(r.out.find("SwitchMode: "), std::string::npos);

    EXPECT_EQ(invoke({"advise", ev, "--horizon", "604800", "--efficiency", "1.5"}).code, 1);
    EXPECT_EQ(invoke({"advise", ev, "--horizon", "604800"}).code, 1);
    EXPECT_EQ(invoke({"advise", ev, "--efficiency", "0.9"}).code, 1);

    const auto eff = write("eff.txt", "0.4\n");
    const auto f = invoke({"advise", "--horizon", "604800", "--efficiency-file", eff});
    ASSERT_EQ(f.code, 0) << f.err;
    EXPECT_NE(f.out.find("SwitchModeOrReplaceHeater"), std::string::npos);
}

TEST_F(CliTest, PipelineWritesEverything) {
    const auto cfg = write("config.json", R"({"seed": 5,
        "scenarios": [{"kind": "Case1", "count": 3}, {"kind": "Case3", "count": 3}, {"kind": "Background"}],
        "advisor": {"efficiency": 0.6}})");
    const auto r = invoke({"pipeline", "--config", cfg, "--out", path("p1")});
    ASSERT_EQ(r.code, 0) << r.err;
    for (const char* f : {"model.csv", "map.csv", "recommendation.json", "run_000_case1.events.jsonl",
                          "run_006_background.csv"}) {
        EXPECT_TRUE(fs::exists(path("p1/") + f)) << f;
    }
    EXPECT_EQ(count_lines(slurp(path("p1/map.csv"))), 7u);
    ASSERT_EQ(invoke({"pipeline", "--config", cfg, "--out", path("p2")}).code, 0);
    EXPECT_EQ(slurp(path("p1/map.csv")), slurp(path("p2/map.csv")));
    EXPECT_EQ(slurp(path("p1/recommendation.json")), slurp(path("p2/recommendation.json")));
}

TEST_F(CliTest, BadConfigExitsOne) {
    const auto cfg = write("bad.json", R"({"scenarios": [{"kind": "Case1", "colour": 1}]})");
    const auto r = invoke({"simulate", "--config", cfg, "--out", path("x")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("colour"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("x")));
}
