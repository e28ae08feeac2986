#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "heatchroma/detector.hpp"
#include "heatchroma/scenario.hpp"

using namespace heatchroma;

namespace {

ScenarioScript script_for(ScenarioKind kind, std::uint64_t seed) {
    ScenarioScript s;
    s.kind = kind;
    s.seed = seed;
    return s;
}

std::size_t first_index(const std::vector<double>& v, double threshold) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i] >= threshold) return i;
    }
    return v.size();
}

} // namespace

TEST(Simulate, SameSeedSameTrace) {
    for (auto kind : {ScenarioKind::Case1, ScenarioKind::Case2, ScenarioKind::Case3, ScenarioKind::Comfort,
                      ScenarioKind::Background}) {
        const auto a = simulate(TankModel{}, script_for(kind, 42));
        const auto b = simulate(TankModel{}, script_for(kind, 42));
        EXPECT_EQ(a.trace.power, b.trace.power);
        EXPECT_EQ(a.trace.hot_flow, b.trace.hot_flow);
        EXPECT_EQ(a.trace.t_outlet, b.trace.t_outlet);
        ASSERT_EQ(a.labels.size(), b.labels.size());
    }
    const auto c = simulate(TankModel{}, script_for(ScenarioKind::Case2, 43));
    EXPECT_NE(c.trace.hot_flow, simulate(TankModel{}, script_for(ScenarioKind::Case2, 42)).trace.hot_flow);
}

TEST(Simulate, Case1Seed7) {
    const auto sim = simulate(TankModel{}, script_for(ScenarioKind::Case1, 7));
    ASSERT_EQ(sim.labels.size(), 1u);
    EXPECT_EQ(sim.labels[0].kind, EventKind::Case1);

    const auto open = first_index(sim.trace.hot_flow, 0.5);
    const auto heat = first_index(sim.trace.power, 100.0);
    ASSERT_LT(open, sim.trace.size());
    ASSERT_LT(heat, sim.trace.size());
    EXPECT_LT(open, heat);
    EXPECT_LE(heat - open, 120u);
    EXPECT_LT(sim.trace.t_outlet[open], 35.0);
    EXPECT_DOUBLE_EQ(sim.labels[0].start_s, static_cast<double>(open));
}

TEST(Simulate, ComfortHasNoPowerAndEnoughVolume) {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto sim = simulate(TankModel{}, script_for(ScenarioKind::Comfort, seed));
        for (double p : sim.trace.power) ASSERT_EQ(p, 0.0);
        double litres = 0.0;
        for (double f : sim.trace.hot_flow) litres += f / 60.0;
        EXPECT_GE(litres, 10.0) << "seed " << seed;
    }
}

TEST(Simulate, InvalidScripts) {
    auto s = script_for(ScenarioKind::Case1, 1);
    s.duration_s = 0.0;
    try {
        simulate(TankModel{}, s);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidScript);
    }
    s.duration_s = 100.0; // too short for the scripted reaction
    EXPECT_THROW(simulate(TankModel{}, s), Error);

    auto wrong_mode = script_for(ScenarioKind::Case2, 1);
    wrong_mode.operating_mode = OperatingMode::OnDemand;
    EXPECT_THROW(simulate(TankModel{}, wrong_mode), Error);

    auto jitter = script_for(ScenarioKind::Comfort, 1);
    jitter.jitter = 0.6;
    EXPECT_THROW(simulate(TankModel{}, jitter), Error);

    TankModel bad;
    bad.volume_l = 0.0;
    EXPECT_THROW(simulate(bad, script_for(ScenarioKind::Comfort, 1)), Error);
}

TEST(HeaterStateMachine, ContinuousHysteresis) {
    const TankModel m; // set point 60, band 5
    const std::vector<double> temps{50, 54.9, 58, 60, 59, 56, 55, 54.9, 57};
    const auto on = heater_state_machine(m, OperatingMode::Continuous, temps, {});
    const std::vector<bool> expected{true, true, true, false, false, false, false, true, true};
    EXPECT_EQ(on, expected);
}

TEST(HeaterStateMachine, OnDemandFollowsSwitchesOnly) {
    const TankModel m;
    const std::vector<double> temps(8, 20.0);
    const std::vector<ManualSwitch> sw{{2, true}, {5, false}, {40, true}};
    const auto on = heater_state_machine(m, OperatingMode::OnDemand, temps, sw);
    const std::vector<bool> expected{false, false, true, true, true, false, false, false};
    EXPECT_EQ(on, expected);
    // Continuous ignores manual events entirely.
    const auto cont = heater_state_machine(m, OperatingMode::Continuous, std::vector<double>(3, 62.0), sw);
    EXPECT_EQ(cont, std::vector<bool>(3, false));
}

TEST(TankPhysics, TimeToSetPointWithoutLosses) {
    TankModel m;
    m.standing_loss_w_per_c = 0.0;
    m.power_noise_sigma_w = 0.0;
    UsagePlan plan;
    plan.mode = OperatingMode::Continuous;
    plan.initial_temp_c = m.inlet_temp_c;
    plan.hot_flow.assign(30000, 0.0);
    plan.cold_flow.assign(30000, 0.0);
    std::mt19937_64 rng(1);
    const auto trace = run_plan(m, plan, rng);
    const auto reached = first_index(trace.t_outlet, m.set_point_c);
    ASSERT_LT(reached, trace.size());
    const double expected_min = m.volume_l * 4186.0 * (m.set_point_c - m.inlet_temp_c) / (m.element_power_w * 60.0);
    EXPECT_NEAR(static_cast<double>(reached) / 60.0, expected_min, 0.1 * expected_min);
}

TEST(TankPhysics, EnergyBalance) {
    const TankModel m;
    for (auto kind : {ScenarioKind::Case1, ScenarioKind::Case2, ScenarioKind::Background}) {
        const auto tr = simulate(m, script_for(kind, 9)).trace;
        double in = 0.0;
        double out = 0.0;
        for (std::size_t i = 0; i + 1 < tr.size(); ++i) {
            in += tr.power[i];
            out += m.standing_loss_w_per_c * (tr.t_outlet[i] - m.ambient_temp_c);
            out += tr.hot_flow[i] / 60.0 * 4186.0 * (tr.t_outlet[i] - m.inlet_temp_c);
        }
        const double stored = m.volume_l * 4186.0 * (tr.t_outlet.back() - tr.t_outlet.front());
        const double scale = std::max({std::abs(in), std::abs(out), std::abs(stored)});
        EXPECT_LE(std::abs(in - out - stored), 0.005 * scale) << to_string(kind);
    }
}

TEST(TankPhysics, ContinuousNeverOvershoots) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        for (auto kind : {ScenarioKind::Case2, ScenarioKind::Background}) {
            auto s = script_for(kind, seed);
            s.duration_s = 7200.0;
            for (double t : simulate(TankModel{}, s).trace.t_outlet) ASSERT_LE(t, 61.0);
        }
    }
}

TEST(Simulate, LabelsSatisfyDetectorRules) {
    const DetectorConfig cfg;
    for (auto kind : {ScenarioKind::Case1, ScenarioKind::Case2, ScenarioKind::Case3, ScenarioKind::Comfort}) {
        for (std::uint64_t seed = 100; seed < 120; ++seed) {
            auto s = script_for(kind, seed);
            s.jitter = 0.5;
            const auto sim = simulate(TankModel{}, s);
            ASSERT_EQ(sim.labels.size(), 1u);
            const auto start = static_cast<std::size_t>(sim.labels[0].start_s);
            ASSERT_LE(start + 600, sim.trace.size() - 1);
            const auto matched = match_rules(sim.trace, start, cfg);
            ASSERT_TRUE(matched.has_value()) << to_string(kind) << " seed " << seed;
            EXPECT_EQ(*matched, sim.labels[0].kind) << to_string(kind) << " seed " << seed;
        }
    }
}

TEST(Simulate, BackgroundHasNoLabels) {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        EXPECT_TRUE(simulate(TankModel{}, script_for(ScenarioKind::Background, seed)).labels.empty());
    }
}
