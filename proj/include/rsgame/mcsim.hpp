#pragma once

#include "rsgame/model.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace rsgame {

struct SimConfig {
    double dt = 1e-4;
    /// Truncation time; zero selects default_horizon(params).
    double horizon = 0.0;
    std::size_t paths = 100000;
    std::uint64_t seed = 20240601;
    bool antithetic = false;
    /// Worker threads; zero uses the hardware concurrency. Results do not
    /// depend on this value.
    unsigned workers = 0;
};

/// max(10 / r, 20 / min(lambda)): long enough that exp(-r T) is negligible
/// and that the chain has switched many times.
double default_horizon(const GameParams& params);

/// Horizon in effect for a configuration.
double effective_horizon(const GameParams& params, const SimConfig& cfg);

/// Throws Error(validation) for dt <= 0, horizon < dt, or zero paths.
void validate(const SimConfig& cfg, const GameParams& params);

struct StartState {
    double x = 0.0;
    Regime regime = Regime::one;
};

/// Player 1 stops once X <= a_i, Player 2 once X >= b_i, in the current regime i.
struct ThresholdStrategyPair {
    std::array<double, 2> p1Levels{};
    std::array<double, 2> p2Levels{};

    static ThresholdStrategyPair from(const Thresholds& th) { return {{th.a1, th.a2}, {th.b1, th.b2}}; }
    bool operator==(const ThresholdStrategyPair&) const = default;
};

struct StopDistribution {
    double player1First = 0.0;
    double player2First = 0.0;
    double truncated = 0.0;
};

struct SimReport {
    double estimate = 0.0;
    double stdError = 0.0;
    /// 1.96 stdError
    double ci95 = 0.0;
    StopDistribution stops;
    std::size_t pathsUsed = 0;
    double horizon = 0.0;
    /// Bound on the bias from counting truncated paths as zero.
    double truncationBias = 0.0;
};

/// Discounted payoff of every sampling unit (a path, or an antithetic pair
/// averaged), in unit order, plus stop counts.
struct PayoffSample {
    std::vector<double> payoffs;
    std::size_t paths = 0;
    std::size_t player1First = 0;
    std::size_t player2First = 0;
    std::size_t truncated = 0;
    double horizon = 0.0;
    /// Largest |discounted payoff| a path still running at the horizon could have earned.
    double truncatedPayoffBound = 0.0;
};

/// Simulates Euler paths of X with exact regime-switch times merged into the
/// grid. A path stops at the first monitored point where X <= a_i (Player 1)
/// or X >= b_i (Player 2); if both fire, Player 2 stops. Payoffs are
/// exp(-r tau) (X_tau - K(alpha_tau)) or exp(-r tau) (X_tau - Ktilde(alpha_tau));
/// truncated paths pay zero. Path k always draws from the same random
/// streams, so two strategy pairs run with one seed share random numbers.
PayoffSample simulate_payoffs(const GameParams& params, StartState start, const ThresholdStrategyPair& strat,
                              const SimConfig& cfg);

SimReport summarize(const PayoffSample& sample);

SimReport simulate_payoff(const GameParams& params, StartState start, const ThresholdStrategyPair& strat,
                          const SimConfig& cfg);

/// One recorded point of a debugging trace.
struct TracePoint {
    std::size_t path = 0;
    double t = 0.0;
    double x = 0.0;
    Regime regime = Regime::one;
};

inline constexpr std::size_t kMaxTracePaths = 100;

/// Every monitored point of the first min(count, 100) paths, using the same
/// random streams as simulate_payoffs.
std::vector<TracePoint> trace_paths(const GameParams& params, StartState start, const ThresholdStrategyPair& strat,
                                    const SimConfig& cfg, std::size_t count);

enum class Deviator { none, player1, player2 };

struct DeviationResult {
    ThresholdStrategyPair strategy;
    Deviator deviator = Deviator::none;
    SimReport report;
    /// Closed-form equilibrium value at the start state.
    double value = 0.0;
    /// ci95 + allowance
    double slack = 0.0;
    /// Mean of (deviation payoff - equilibrium payoff) on common random numbers.
    double diffMean = 0.0;
    double diffCi95 = 0.0;
    bool pass = false;
};

struct DeviationTest {
    SimReport equilibrium;
    std::vector<DeviationResult> deviations;
    bool pass = false;
};

/// Which player a candidate changes relative to the equilibrium. Throws
/// Error(validation) when both players' levels differ.
Deviator classify_deviation(const ThresholdStrategyPair& equilibrium, const ThresholdStrategyPair& candidate);

/// Every single-level shift of the equilibrium: each of a1, a2 moved by each
/// shift with Player 2 fixed, then each of b1, b2 with Player 1 fixed.
std::vector<ThresholdStrategyPair> unilateral_deviations(const ThresholdStrategyPair& equilibrium,
                                                         const std::vector<double>& shifts = {-0.5, -0.25, 0.25, 0.5});

/// Checks the Nash inequalities by unilateral deviation. A Player-1
/// deviation passes when J >= value - slack, a Player-2 deviation when
/// J <= value + slack, and a null deviation when |J - value| <= slack.
DeviationTest nash_deviation_test(const GameParams& params, StartState start,
                                  const ThresholdStrategyPair& equilibrium,
                                  const std::vector<ThresholdStrategyPair>& deviations, const SimConfig& cfg,
                                  double value, double allowance = 0.02);

struct OccupancyEstimate {
    double fractionRegime1 = 0.0;
    double stdError = 0.0;
};

/// Fraction of [0, horizon] the chain spends in regime 1, averaged over paths.
OccupancyEstimate regime_occupancy(const GameParams& params, Regime start, double horizon, std::size_t paths,
                                   std::uint64_t seed);

} // namespace rsgame
