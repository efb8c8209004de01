#include "rsgame/error.hpp"
#include "rsgame/mcsim.hpp"
#include "rsgame/valuefn.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>

using namespace rsgame;

namespace {

const SmoothFitSolution& benchmark_solution() {
    static const SmoothFitSolution sol = solve_thresholds(benchmark_params());
    return sol;
}

ThresholdStrategyPair equilibrium() { return ThresholdStrategyPair::from(benchmark_solution().thresholds); }

SimConfig quick(std::size_t paths = 4000, double dt = 1e-3) {
    SimConfig c;
    c.paths = paths;
    c.dt = dt;
    c.seed = 99;
    return c;
}

bool same_bits(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

} // namespace

TEST(McSim, DefaultHorizon) {
    EXPECT_DOUBLE_EQ(default_horizon(benchmark_params()), 10.0); // max(10 / 3, 20 / 2)
    SimConfig c;
    c.horizon = 4.0;
    EXPECT_DOUBLE_EQ(effective_horizon(benchmark_params(), c), 4.0);
}

TEST(McSim, ConfigValidation) {
    const auto p = benchmark_params();
    SimConfig c;
    c.dt = 0.0;
    EXPECT_THROW(validate(c, p), Error);
    c = SimConfig{};
    c.paths = 0;
    EXPECT_THROW(validate(c, p), Error);
    c = SimConfig{};
    c.horizon = 1e-5;
    EXPECT_THROW(validate(c, p), Error);
    EXPECT_NO_THROW(validate(SimConfig{}, p));
}

TEST(McSim, ImmediateStopPlayer1) {
    const auto rep = simulate_payoff(benchmark_params(), {-5.0, Regime::one}, equilibrium(), quick(100));
    EXPECT_DOUBLE_EQ(rep.estimate, -7.0);
    EXPECT_EQ(rep.stdError, 0.0);
    EXPECT_DOUBLE_EQ(rep.stops.player1First, 1.0);
}

TEST(McSim, ImmediateStopPlayer2) {
    const auto rep = simulate_payoff(benchmark_params(), {10.0, Regime::two}, equilibrium(), quick(100));
    EXPECT_DOUBLE_EQ(rep.estimate, 4.0);
    EXPECT_EQ(rep.stdError, 0.0);
    EXPECT_DOUBLE_EQ(rep.stops.player2First, 1.0);
}

TEST(McSim, SimultaneousTriggerGoesToPlayer2) {
    // Overlapping levels: both players want to stop at x = 3 in regime 1.
    ThresholdStrategyPair s{{3.0, 1.0}, {3.0, 9.0}};
    const auto rep = simulate_payoff(benchmark_params(), {3.0, Regime::one}, s, quick(10));
    EXPECT_DOUBLE_EQ(rep.estimate, 3.0 - 5.0);
    EXPECT_DOUBLE_EQ(rep.stops.player2First, 1.0);
}

TEST(McSim, TruncatedPathsPayZero) {
    SimConfig c = quick(200);
    c.horizon = 2e-3;
    const auto sample = simulate_payoffs(benchmark_params(), {3.5, Regime::one}, equilibrium(), c);
    EXPECT_EQ(sample.truncated, 200u);
    for (double v : sample.payoffs) EXPECT_EQ(v, 0.0);
    const auto rep = summarize(sample);
    EXPECT_DOUBLE_EQ(rep.stops.truncated, 1.0);
    EXPECT_GT(rep.truncationBias, 0.0);
}

TEST(McSim, ReproducibleBitForBit) {
    const auto a = simulate_payoff(benchmark_params(), {3.0, Regime::one}, equilibrium(), quick());
    const auto b = simulate_payoff(benchmark_params(), {3.0, Regime::one}, equilibrium(), quick());
    EXPECT_TRUE(same_bits(a.estimate, b.estimate));
    EXPECT_TRUE(same_bits(a.stdError, b.stdError));
    EXPECT_EQ(a.pathsUsed, b.pathsUsed);
    auto other = quick();
    other.seed = 100;
    EXPECT_NE(simulate_payoff(benchmark_params(), {3.0, Regime::one}, equilibrium(), other).estimate, a.estimate);
}

TEST(McSim, WorkerCountDoesNotChangeResults) {
    auto c = quick(5000);
    c.workers = 1;
    const auto one = simulate_payoffs(benchmark_params(), {3.0, Regime::two}, equilibrium(), c);
    c.workers = 4;
    const auto four = simulate_payoffs(benchmark_params(), {3.0, Regime::two}, equilibrium(), c);
    ASSERT_EQ(one.payoffs.size(), four.payoffs.size());
    for (std::size_t k = 0; k < one.payoffs.size(); ++k) ASSERT_TRUE(same_bits(one.payoffs[k], four.payoffs[k]));
    EXPECT_TRUE(same_bits(summarize(one).estimate, summarize(four).estimate));
}

TEST(McSim, AgreesWithClosedFormOnShortRun) {
    const ValueFunction vf(benchmark_solution());
    for (Regime i : kRegimes) {
        const auto rep = simulate_payoff(benchmark_params(), {3.0, i}, equilibrium(), quick(20000));
        EXPECT_NEAR(rep.estimate, vf.eval(3.0, i), rep.ci95 + 0.02) << number(i);
        EXPECT_LT(rep.stops.truncated, 1e-3);
    }
}

// Property: antithetic pairs keep the mean.
TEST(McSimProperty, AntitheticPreservesMean) {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto plain = quick(8000);
        plain.seed = seed;
        auto anti = plain;
        anti.antithetic = true;
        const auto a = simulate_payoff(benchmark_params(), {3.0, Regime::one}, equilibrium(), plain);
        const auto b = simulate_payoff(benchmark_params(), {3.0, Regime::one}, equilibrium(), anti);
        EXPECT_EQ(b.pathsUsed, 8000u);
        EXPECT_NEAR(a.estimate, b.estimate, 1.96 * std::hypot(a.stdError, b.stdError) + 1e-3);
    }
}

TEST(McSimProperty, ChainOccupancyMatchesStationaryLaw) {
    const auto p = benchmark_params();
    const double target = p.lambda[1] / (p.lambda[0] + p.lambda[1]);
    for (Regime start : kRegimes) {
        const auto occ = regime_occupancy(p, start, 1000.0, 1000, 17);
        EXPECT_NEAR(occ.fractionRegime1, target, 3.0 * occ.stdError) << number(start);
    }
}

// Grid monitoring stops late; a finer step must not move the estimate
// further from the closed form beyond sampling noise.
TEST(McSimProperty, FinerStepReducesBias) {
    const ValueFunction vf(benchmark_solution());
    const double v = vf.eval(3.0, Regime::one);
    const auto coarse = simulate_payoff(benchmark_params(), {3.0, Regime::one}, equilibrium(), quick(40000, 2e-2));
    const auto fine = simulate_payoff(benchmark_params(), {3.0, Regime::one}, equilibrium(), quick(40000, 1e-2));
    EXPECT_LE(std::abs(fine.estimate - v), std::abs(coarse.estimate - v) + fine.ci95 + coarse.ci95);
}

TEST(McSim, TraceCappedAndConsistent) {
    auto c = quick(1000);
    const auto trace = trace_paths(benchmark_params(), {3.0, Regime::one}, equilibrium(), c, 500);
    ASSERT_FALSE(trace.empty());
    EXPECT_EQ(trace.back().path, kMaxTracePaths - 1);
    EXPECT_EQ(trace.front().t, 0.0);
    EXPECT_EQ(trace.front().x, 3.0);
    for (std::size_t k = 1; k < trace.size(); ++k)
        if (trace[k].path == trace[k - 1].path) EXPECT_GE(trace[k].t, trace[k - 1].t);
}

TEST(Deviation, ClassifyRejectsJointChanges) {
    const auto eq = equilibrium();
    auto d = eq;
    d.p1Levels[0] += 0.1;
    EXPECT_EQ(classify_deviation(eq, d), Deviator::player1);
    d.p2Levels[1] -= 0.1;
    EXPECT_THROW(classify_deviation(eq, d), Error);
    EXPECT_EQ(classify_deviation(eq, eq), Deviator::none);
}

TEST(Deviation, UnilateralSetCoversEveryLevel) {
    const auto devs = unilateral_deviations(equilibrium());
    ASSERT_EQ(devs.size(), 16u);
    int p1 = 0, p2 = 0;
    for (const auto& d : devs) (classify_deviation(equilibrium(), d) == Deviator::player1 ? p1 : p2)++;
    EXPECT_EQ(p1, 8);
    EXPECT_EQ(p2, 8);
}

TEST(Deviation, ZeroDeviationIsExactlyCommonRandomNumbers) {
    const ValueFunction vf(benchmark_solution());
    const auto eq = equilibrium();
    const auto t = nash_deviation_test(benchmark_params(), {3.0, Regime::one}, eq, {eq}, quick(3000),
                                       vf.eval(3.0, Regime::one));
    ASSERT_EQ(t.deviations.size(), 1u);
    EXPECT_EQ(t.deviations[0].diffMean, 0.0);
    EXPECT_EQ(t.deviations[0].diffCi95, 0.0);
    EXPECT_TRUE(t.deviations[0].pass);
}

TEST(Deviation, ShiftedLevelsDoNotPay) {
    const ValueFunction vf(benchmark_solution());
    const auto eq = equilibrium();
    auto p1 = eq;
    p1.p1Levels[0] += 0.5;
    auto p2 = eq;
    p2.p2Levels[1] -= 1.0;
    const auto t1 = nash_deviation_test(benchmark_params(), {3.0, Regime::one}, eq, {p1}, quick(10000),
                                        vf.eval(3.0, Regime::one));
    EXPECT_TRUE(t1.pass);
    EXPECT_EQ(t1.deviations[0].deviator, Deviator::player1);
    const auto t2 = nash_deviation_test(benchmark_params(), {3.0, Regime::two}, eq, {p2}, quick(10000),
                                        vf.eval(3.0, Regime::two));
    EXPECT_TRUE(t2.pass);
    EXPECT_EQ(t2.deviations[0].deviator, Deviator::player2);
}
