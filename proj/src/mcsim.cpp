#include "rsgame/mcsim.hpp"

#include "rsgame/error.hpp"
#include "rsgame/rng.hpp"

#include <boost/random/exponential_distribution.hpp>
#include <boost/random/normal_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

namespace rsgame {

double default_horizon(const GameParams& params) {
    const double holding = 1.0 / std::min(params.lambda[0], params.lambda[1]);
    return std::max(10.0 / params.r, 20.0 * holding);
}

double effective_horizon(const GameParams& params, const SimConfig& cfg) {
    return cfg.horizon > 0.0 ? cfg.horizon : default_horizon(params);
}

void validate(const SimConfig& cfg, const GameParams& params) {
    if (!(std::isfinite(cfg.dt) && cfg.dt > 0.0)) throw Error(ErrorKind::validation, "time step dt must be positive");
    if (!(cfg.horizon >= 0.0) || !std::isfinite(cfg.horizon))
        throw Error(ErrorKind::validation, "horizon must be finite and non-negative");
    if (cfg.dt > effective_horizon(params, cfg)) throw Error(ErrorKind::validation, "dt must not exceed the horizon");
    if (cfg.paths == 0) throw Error(ErrorKind::validation, "at least one path is required");
}

namespace {

enum class Stopper : int { none = 0, player1 = 1, player2 = 2 };

struct PathOutcome {
    double payoff = 0.0;
    Stopper stopper = Stopper::none;
};

// Stream lanes within one sampling unit.
constexpr std::uint64_t kBrownianLane = 0;
constexpr std::uint64_t kChainLane = 1;
constexpr std::size_t kBlock = 2048;

struct PathSetup {
    double x0;
    int regime0; // 0 or 1
    std::array<double, 2> a, b, sigma, sigma_dt, lambda, K, Ktilde;
    double r, dt, horizon;
    std::size_t steps;

    PathSetup(const GameParams& p, StartState start, const ThresholdStrategyPair& s, const SimConfig& cfg)
        : x0(start.x), regime0(static_cast<int>(slot(start.regime))), a(s.p1Levels), b(s.p2Levels), sigma(p.sigma),
          lambda(p.lambda), K(p.K), Ktilde(p.Ktilde), r(p.r), dt(cfg.dt), horizon(effective_horizon(p, cfg)) {
        for (int i = 0; i < 2; ++i) sigma_dt[i] = sigma[i] * std::sqrt(dt);
        steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
    }
};

struct NoRecord {
    void operator()(double, double, int) const noexcept {}
};

// One Euler path. `sign` flips every Gaussian increment for the antithetic twin.
template <class Recorder>
PathOutcome run_path(const PathSetup& s, Xoshiro256 brownian, Xoshiro256 chain, double sign, Recorder&& record) {
    boost::random::normal_distribution<double> normal;
    boost::random::exponential_distribution<double> expo;

    double x = s.x0;
    int reg = s.regime0;
    double t = 0.0;
    record(t, x, reg);

    // Levels and full-step scale of the current regime, refreshed on each switch.
    double lower = s.a[reg], upper = s.b[reg], step_scale = sign * s.sigma_dt[reg];
    auto stopped = [&]() -> Stopper {
        if (x >= upper) return Stopper::player2;
        if (x <= lower) return Stopper::player1;
        return Stopper::none;
    };
    auto finish = [&](Stopper who) {
        const double offset = who == Stopper::player1 ? s.K[reg] : s.Ktilde[reg];
        return PathOutcome{std::exp(-s.r * t) * (x - offset), who};
    };

    if (Stopper w = stopped(); w != Stopper::none) return finish(w);
    double next_jump = expo(chain) / s.lambda[reg];

    std::size_t k = 1;
    while (k <= s.steps) {
        // Plain grid steps until the step that contains the next switch.
        const double t_end = static_cast<double>(k) * s.dt;
        if (next_jump >= t_end && k < s.steps) {
            x += step_scale * normal(brownian);
            t = t_end;
            ++k;
            record(t, x, reg);
            if (x >= upper || x <= lower) return finish(stopped());
            continue;
        }
        const double grid_end = std::min(t_end, s.horizon);
        while (next_jump < grid_end) {
            x += sign * s.sigma[reg] * std::sqrt(next_jump - t) * normal(brownian);
            t = next_jump;
            record(t, x, reg);
            if (Stopper w = stopped(); w != Stopper::none) return finish(w);
            reg ^= 1;
            lower = s.a[reg];
            upper = s.b[reg];
            step_scale = sign * s.sigma_dt[reg];
            record(t, x, reg);
            if (Stopper w = stopped(); w != Stopper::none) return finish(w);
            next_jump = t + expo(chain) / s.lambda[reg];
        }
        x += sign * s.sigma[reg] * std::sqrt(grid_end - t) * normal(brownian);
        t = grid_end;
        ++k;
        record(t, x, reg);
        if (Stopper w = stopped(); w != Stopper::none) return finish(w);
    }
    return {0.0, Stopper::none};
}

struct BlockCounts {
    std::size_t p1 = 0, p2 = 0, truncated = 0;
};

void tally(BlockCounts& c, Stopper s) {
    if (s == Stopper::player1) ++c.p1;
    else if (s == Stopper::player2) ++c.p2;
    else ++c.truncated;
}

template <class Work>
void run_blocks(std::size_t blocks, unsigned workers, Work&& work) {
    if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, blocks));
    if (workers <= 1) {
        for (std::size_t b = 0; b < blocks; ++b) work(b);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t b = next++; b < blocks; b = next++) work(b);
        });
    for (auto& th : pool) th.join();
}

} // namespace

PayoffSample simulate_payoffs(const GameParams& params, StartState start, const ThresholdStrategyPair& strat,
                              const SimConfig& cfg) {
    validate(params);
    validate(cfg, params);
    const PathSetup setup(params, start, strat, cfg);

    const std::size_t units = cfg.antithetic ? (cfg.paths + 1) / 2 : cfg.paths;
    const std::size_t blocks = (units + kBlock - 1) / kBlock;
    PayoffSample out;
    out.payoffs.assign(units, 0.0);
    out.horizon = setup.horizon;
    // A path alive at T sits strictly between its two levels.
    double reach = 0.0;
    for (int i = 0; i < 2; ++i)
        for (double level : {setup.a[i], setup.b[i]})
            for (double offset : {setup.K[i], setup.Ktilde[i]}) reach = std::max(reach, std::abs(level - offset));
    out.truncatedPayoffBound = std::exp(-setup.r * setup.horizon) * reach;
    std::vector<BlockCounts> counts(blocks);

    run_blocks(blocks, cfg.workers, [&](std::size_t blk) {
        const std::size_t end = std::min(units, (blk + 1) * kBlock);
        BlockCounts& c = counts[blk];
        for (std::size_t u = blk * kBlock; u < end; ++u) {
            const auto bm = Xoshiro256::stream(cfg.seed, u, kBrownianLane);
            const auto ch = Xoshiro256::stream(cfg.seed, u, kChainLane);
            const PathOutcome first = run_path(setup, bm, ch, 1.0, NoRecord{});
            tally(c, first.stopper);
            if (cfg.antithetic) {
                const PathOutcome twin = run_path(setup, bm, ch, -1.0, NoRecord{});
                tally(c, twin.stopper);
                out.payoffs[u] = 0.5 * (first.payoff + twin.payoff);
            } else {
                out.payoffs[u] = first.payoff;
            }
        }
    });

    for (const auto& c : counts) {
        out.player1First += c.p1;
        out.player2First += c.p2;
        out.truncated += c.truncated;
    }
    out.paths = out.player1First + out.player2First + out.truncated;
    return out;
}

namespace {

struct MeanStd {
    double mean = 0.0;
    double std_error = 0.0;
};

MeanStd mean_and_error(const std::vector<double>& v) {
    MeanStd out;
    if (v.empty()) return out;
    const double n = static_cast<double>(v.size());
    out.mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - out.mean) * (x - out.mean);
        out.std_error = std::sqrt(ss / (n - 1.0) / n);
    }
    return out;
}

} // namespace

SimReport summarize(const PayoffSample& sample) {
    const auto ms = mean_and_error(sample.payoffs);
    SimReport rep;
    rep.estimate = ms.mean;
    rep.stdError = ms.std_error;
    rep.ci95 = 1.96 * ms.std_error;
    const double n = static_cast<double>(std::max<std::size_t>(sample.paths, 1));
    rep.stops = {static_cast<double>(sample.player1First) / n, static_cast<double>(sample.player2First) / n,
                 static_cast<double>(sample.truncated) / n};
    rep.pathsUsed = sample.paths;
    rep.horizon = sample.horizon;
    rep.truncationBias = rep.stops.truncated * sample.truncatedPayoffBound;
    return rep;
}

SimReport simulate_payoff(const GameParams& params, StartState start, const ThresholdStrategyPair& strat,
                          const SimConfig& cfg) {
    return summarize(simulate_payoffs(params, start, strat, cfg));
}

std::vector<TracePoint> trace_paths(const GameParams& params, StartState start, const ThresholdStrategyPair& strat,
                                    const SimConfig& cfg, std::size_t count) {
    validate(params);
    validate(cfg, params);
    const PathSetup setup(params, start, strat, cfg);
    std::vector<TracePoint> out;
    const std::size_t n = std::min({count, kMaxTracePaths, cfg.paths});
    for (std::size_t path = 0; path < n; ++path) {
        const std::size_t unit = cfg.antithetic ? path / 2 : path;
        const double sign = cfg.antithetic && path % 2 == 1 ? -1.0 : 1.0;
        run_path(setup, Xoshiro256::stream(cfg.seed, unit, kBrownianLane),
                 Xoshiro256::stream(cfg.seed, unit, kChainLane), sign, [&](double t, double x, int reg) {
                     out.push_back({path, t, x, reg == 0 ? Regime::one : Regime::two});
                 });
    }
    return out;
}

std::vector<ThresholdStrategyPair> unilateral_deviations(const ThresholdStrategyPair& equilibrium,
                                                         const std::vector<double>& shifts) {
    std::vector<ThresholdStrategyPair> out;
    for (std::size_t k = 0; k < 2; ++k)
        for (double h : shifts) {
            auto d = equilibrium;
            d.p1Levels[k] += h;
            out.push_back(d);
        }
    for (std::size_t k = 0; k < 2; ++k)
        for (double h : shifts) {
            auto d = equilibrium;
            d.p2Levels[k] += h;
            out.push_back(d);
        }
    return out;
}

Deviator classify_deviation(const ThresholdStrategyPair& eq, const ThresholdStrategyPair& cand) {
    const bool p1 = cand.p1Levels != eq.p1Levels;
    const bool p2 = cand.p2Levels != eq.p2Levels;
    if (p1 && p2) throw Error(ErrorKind::validation, "a deviation may change only one player's levels");
    return p1 ? Deviator::player1 : p2 ? Deviator::player2 : Deviator::none;
}

DeviationTest nash_deviation_test(const GameParams& params, StartState start, const ThresholdStrategyPair& equilibrium,
                                  const std::vector<ThresholdStrategyPair>& deviations, const SimConfig& cfg,
                                  double value, double allowance) {
    std::vector<Deviator> who;
    for (const auto& d : deviations) who.push_back(classify_deviation(equilibrium, d));

    DeviationTest out;
    const PayoffSample base = simulate_payoffs(params, start, equilibrium, cfg);
    out.equilibrium = summarize(base);
    out.pass = true;

    for (std::size_t k = 0; k < deviations.size(); ++k) {
        const PayoffSample dev = simulate_payoffs(params, start, deviations[k], cfg);
        DeviationResult res;
        res.strategy = deviations[k];
        res.deviator = who[k];
        res.report = summarize(dev);
        res.value = value;
        res.slack = res.report.ci95 + allowance;

        std::vector<double> diff(dev.payoffs.size());
        for (std::size_t u = 0; u < diff.size(); ++u) diff[u] = dev.payoffs[u] - base.payoffs[u];
        const auto ms = mean_and_error(diff);
        res.diffMean = ms.mean;
        res.diffCi95 = 1.96 * ms.std_error;

        const double est = res.report.estimate;
        switch (res.deviator) {
        case Deviator::player1: res.pass = est >= value - res.slack; break;
        case Deviator::player2: res.pass = est <= value + res.slack; break;
        case Deviator::none: res.pass = std::abs(est - value) <= res.slack; break;
        }
        out.pass = out.pass && res.pass;
        out.deviations.push_back(res);
    }
    return out;
}

OccupancyEstimate regime_occupancy(const GameParams& params, Regime start, double horizon, std::size_t paths,
                                   std::uint64_t seed) {
    validate(params);
    if (!(horizon > 0.0) || paths < 2) throw Error(ErrorKind::validation, "occupancy needs horizon > 0 and >= 2 paths");
    std::vector<double> frac(paths);
    for (std::size_t u = 0; u < paths; ++u) {
        auto chain = Xoshiro256::stream(seed, u, kChainLane);
        boost::random::exponential_distribution<double> expo;
        int reg = static_cast<int>(slot(start));
        double t = 0.0, in_one = 0.0;
        while (t < horizon) {
            const double hold = std::min(expo(chain) / params.lambda[reg], horizon - t);
            if (reg == 0) in_one += hold;
            t += hold;
            reg ^= 1;
        }
        frac[u] = in_one / horizon;
    }
    const auto ms = mean_and_error(frac);
    return {ms.mean, ms.std_error};
}

} // namespace rsgame
