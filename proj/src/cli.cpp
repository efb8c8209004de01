#include "rsgame/cli.hpp"

#include "rsgame/error.hpp"
#include "rsgame/io.hpp"
#include "rsgame/mcsim.hpp"
#include "rsgame/valuefn.hpp"
#include "rsgame/verify.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdlib>
#include <future>
#include <ostream>

namespace rsgame {

namespace {

std::string two_dp(double v) { return fmt::format("{:.2f}", v); }

std::string threshold_summary(const Thresholds& th) {
    return fmt::format("a1 = {}  a2 = {}  b1 = {}  b2 = {}", two_dp(th.a1), two_dp(th.a2), two_dp(th.b1), two_dp(th.b2));
}

// Writes the artifact to the output path or to `out`; the summary goes
// wherever the artifact does not.
void emit(const RunConfig& cfg, const std::string& artifact, const std::string& summary, std::ostream& out,
          std::ostream& err) {
    if (auto path = output_path(cfg)) {
        write_text(*path, artifact);
        out << summary << "wrote " << path->string() << '\n';
    } else {
        out << artifact;
        err << summary;
    }
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

CsvTable verification_table(const VerificationReport& rep) {
    CsvTable t({"check", "x", "regime", "violation", "tolerance", "pass"});
    for (const auto& m : rep.smoothness.points)
        t.add_row({"smooth_" + m.label, format_number(m.x), std::to_string(number(m.regime)),
                   format_number(std::max(m.value_gap, m.slope_gap)), format_number(rep.smoothness.tolerance),
                   std::max(m.value_gap, m.slope_gap) <= rep.smoothness.tolerance ? "true" : "false"});
    for (const auto* c : {&rep.bounds, &rep.vi.c, &rep.vi.d})
        t.add_row({c->name, format_number(c->worst.x), std::to_string(number(c->worst.regime)),
                   format_number(c->worst.violation), format_number(c->tolerance), c->pass ? "true" : "false"});
    return t;
}

std::string verification_summary(const VerificationReport& rep) {
    return fmt::format("smoothness {:.3g} bounds {:.3g} vi {:.3g}/{:.3g}: {}\n", rep.smoothness.worst,
                       rep.bounds.worst.violation, rep.vi.c.worst.violation, rep.vi.d.worst.violation,
                       rep.pass ? "pass" : "FAIL");
}

VerificationReport verify_on(const ValueFunction& vf, std::size_t grid) {
    const auto& th = vf.thresholds();
    return verify(vf, span_grid(th, 2.0, grid), span_grid(th, 5.0, grid));
}

CsvTable solution_row(const SmoothFitSolution& s) {
    CsvTable t({"a1", "a2", "b1", "b2", "residual", "iterations"});
    const auto& th = s.thresholds;
    t.add_row({format_number(th.a1), format_number(th.a2), format_number(th.b1), format_number(th.b2),
               format_number(s.residual), std::to_string(s.newtonIterations)});
    return t;
}

} // namespace

std::optional<std::filesystem::path> output_path(const RunConfig& cfg) {
    if (!cfg.outPath.empty()) return std::filesystem::path(cfg.outPath);
    const char* dir = std::getenv(kOutputDirEnv);
    if (!dir || !*dir) return std::nullopt;
    const char* ext = cfg.output_format() == Format::csv ? ".csv" : ".json";
    return std::filesystem::path(dir) / (std::string(to_string(cfg.mode)) + ext);
}

int run_solve(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto sol = solve_thresholds(cfg.params);
    const ValueFunction vf(sol);
    const auto rep = verify_on(vf, cfg.grid);

    std::string artifact;
    if (cfg.output_format() == Format::json) {
        json j = sol;
        j["verification"] = rep;
        artifact = dump(j);
    } else {
        artifact = solution_row(sol).str();
    }
    emit(cfg, artifact, threshold_summary(sol.thresholds) + "\n" + verification_summary(rep), out, err);
    if (!rep.pass) {
        err << "error: solution failed verification\n";
        return exit_code(ErrorKind::verification);
    }
    return 0;
}

int run_reduce(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const Regime i = cfg.start.regime;
    const auto& p = cfg.params;
    const auto sol = solve_reduction(p.r, p.sigma_of(i), p.K_of(i), p.Ktilde_of(i));

    std::string artifact;
    if (cfg.output_format() == Format::json) {
        json j = sol;
        j["regime"] = number(i);
        artifact = dump(j);
    } else {
        CsvTable t({"regime", "a", "b", "A1", "A2", "residual"});
        t.add_row({std::to_string(number(i)), format_number(sol.thresholds.a), format_number(sol.thresholds.b),
                   format_number(sol.A[0]), format_number(sol.A[1]), format_number(sol.residual)});
        artifact = t.str();
    }
    emit(cfg, artifact, fmt::format("a = {}  b = {}\n", two_dp(sol.thresholds.a), two_dp(sol.thresholds.b)), out,
         err);
    return 0;
}

int run_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto sol = cfg.solutionPath.empty() ? solve_thresholds(cfg.params) : load_solution(cfg.solutionPath);
    const ValueFunction vf(sol);
    const auto rep = verify_on(vf, cfg.grid);
    const auto artifact = cfg.output_format() == Format::json ? dump(json(rep)) : verification_table(rep).str();
    emit(cfg, artifact, verification_summary(rep), out, err);
    return rep.pass ? 0 : exit_code(ErrorKind::verification);
}

int run_simulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto sol = solve_thresholds(cfg.params);
    const ValueFunction vf(sol);
    const auto eq = ThresholdStrategyPair::from(sol.thresholds);
    const double value = vf.eval(cfg.start.x, cfg.start.regime);

    if (!cfg.tracePath.empty())
        write_text(cfg.tracePath, trace_table(trace_paths(cfg.params, cfg.start, eq, cfg.sim, cfg.tracePaths)).str());

    json j;
    j["start"] = {{"x", cfg.start.x}, {"regime", number(cfg.start.regime)}};
    j["config"] = {{"dt", cfg.sim.dt}, {"horizon", effective_horizon(cfg.params, cfg.sim)},
                   {"paths", cfg.sim.paths}, {"seed", cfg.sim.seed}, {"antithetic", cfg.sim.antithetic}};
    j["strategy"] = eq;
    j["closedForm"] = value;

    if (cfg.nash) {
        const auto test =
            nash_deviation_test(cfg.params, cfg.start, eq, unilateral_deviations(eq), cfg.sim, value);
        j["nash"] = test;
        std::string artifact;
        if (cfg.output_format() == Format::json) {
            artifact = dump(j);
        } else {
            CsvTable t({"a1", "a2", "b1", "b2", "deviator", "estimate", "ci95", "value", "slack", "pass"});
            for (const auto& d : test.deviations) {
                const auto& s = d.strategy;
                t.add_row({format_number(s.p1Levels[0]), format_number(s.p1Levels[1]), format_number(s.p2Levels[0]),
                           format_number(s.p2Levels[1]),
                           d.deviator == Deviator::player1 ? "player1" : d.deviator == Deviator::player2 ? "player2" : "none",
                           format_number(d.report.estimate), format_number(d.report.ci95), format_number(d.value),
                           format_number(d.slack), d.pass ? "true" : "false"});
            }
            artifact = t.str();
        }
        emit(cfg, artifact,
             fmt::format("v = {:.4f}  equilibrium estimate {:.4f} +/- {:.4f}  deviations: {}\n", value,
                         test.equilibrium.estimate, test.equilibrium.ci95, test.pass ? "pass" : "FAIL"),
             out, err);
        return test.pass ? 0 : exit_code(ErrorKind::verification);
    }

    const auto rep = simulate_payoff(cfg.params, cfg.start, eq, cfg.sim);
    j["report"] = rep;
    std::string artifact;
    if (cfg.output_format() == Format::json) {
        artifact = dump(j);
    } else {
        CsvTable t({"x", "regime", "estimate", "stdError", "ci95", "closedForm", "player1First", "player2First",
                    "truncated", "paths", "horizon", "truncationBias"});
        t.add_row({format_number(cfg.start.x), std::to_string(number(cfg.start.regime)), format_number(rep.estimate),
                   format_number(rep.stdError), format_number(rep.ci95), format_number(value),
                   format_number(rep.stops.player1First), format_number(rep.stops.player2First),
                   format_number(rep.stops.truncated), std::to_string(rep.pathsUsed), format_number(rep.horizon),
                   format_number(rep.truncationBias)});
        artifact = t.str();
    }
    emit(cfg, artifact,
         fmt::format("estimate {:.4f} +/- {:.4f}  closed form {:.4f}\n", rep.estimate, rep.ci95, value), out, err);
    return 0;
}

std::vector<SweepRow> run_sweep_rows(const GameParams& base, const SweepSpec& spec) {
    auto solve_row = [&](double value, std::optional<Thresholds> init) {
        SweepRow row;
        row.value = value;
        try {
            GameParams p = base;
            param_ref(p, spec.param) = value;
            row.solution = solve_thresholds(p, init);
        } catch (const Error& e) {
            row.error = e.what();
            row.exitCode = exit_code(e.kind());
        }
        return row;
    };

    std::vector<SweepRow> rows;
    if (spec.parallel) {
        std::vector<std::future<SweepRow>> jobs;
        for (double v : spec.values) jobs.push_back(std::async(std::launch::async, solve_row, v, std::nullopt));
        for (auto& j : jobs) rows.push_back(j.get());
        return rows;
    }
    std::optional<Thresholds> warm;
    for (double v : spec.values) {
        rows.push_back(solve_row(v, warm));
        if (rows.back().solution) warm = rows.back().solution->thresholds;
    }
    return rows;
}

int run_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    if (!cfg.sweep) throw Error(ErrorKind::validation, "sweep requires sweep.param and sweep.values");
    const auto rows = run_sweep_rows(cfg.params, *cfg.sweep);

    CsvTable t({cfg.sweep->param, "a1", "a2", "b1", "b2", "residual", "iterations", "error"});
    std::string summary;
    int code = 0;
    for (const auto& row : rows) {
        if (row.solution) {
            const auto& s = *row.solution;
            const auto& th = s.thresholds;
            t.add_row({format_number(row.value), format_number(th.a1), format_number(th.a2), format_number(th.b1),
                       format_number(th.b2), format_number(s.residual), std::to_string(s.newtonIterations), ""});
            summary += fmt::format("{} = {}: {}\n", cfg.sweep->param, format_number(row.value), threshold_summary(th));
        } else {
            t.add_row({format_number(row.value), "", "", "", "", "", "", row.error});
            summary += fmt::format("{} = {}: error: {}\n", cfg.sweep->param, format_number(row.value), row.error);
            if (code == 0) code = row.exitCode;
        }
    }
    emit(cfg, cfg.output_format() == Format::csv ? t.str() : dump(t.records()), summary, out, err);
    return code;
}

int run_plotdata(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    const auto sol = solve_thresholds(cfg.params);
    const ValueFunction vf(sol);
    const auto& th = sol.thresholds;
    const auto table = plot_table(vf, th.a1 - 2.0, th.b2 + 2.0, cfg.plotPoints);
    emit(cfg, cfg.output_format() == Format::csv ? table.str() : dump(table.records()),
         fmt::format("{} points on [{}, {}]\n", cfg.plotPoints, two_dp(th.a1 - 2.0), two_dp(th.b2 + 2.0)), out, err);
    return 0;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        switch (cfg.mode) {
        case Mode::solve: return run_solve(cfg, out, err);
        case Mode::reduce: return run_reduce(cfg, out, err);
        case Mode::verify: return run_verify(cfg, out, err);
        case Mode::simulate: return run_simulate(cfg, out, err);
        case Mode::sweep: return run_sweep(cfg, out, err);
        case Mode::plotdata: return run_plotdata(cfg, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
    return 0;
}

int cli_main(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Regime-switching stopping game solver"};
    app.set_version_flag("--version", "rsgame 0.1.0");

    std::string verb;
    std::string config;
    std::vector<std::string> sets;
    app.add_option("verb", verb, "solve | reduce | verify | simulate | sweep | plotdata")
        ->required()
        ->check(CLI::IsMember({"solve", "reduce", "verify", "simulate", "sweep", "plotdata"}));
    app.add_option("--config", config, "key = value configuration file");
    app.add_option("--set", sets, "override any key: section.key=value");

    // One flag per configuration key, named after its last segment.
    const auto& keys = config_keys();
    std::vector<std::string> flagValues(keys.size());
    std::vector<CLI::Option*> flagOptions;
    for (std::size_t k = 0; k < keys.size(); ++k) {
        const auto& key = keys[k];
        const auto leaf = key.substr(key.rfind('.') + 1);
        if (leaf == "mode") {
            flagOptions.push_back(nullptr);
            continue;
        }
        flagOptions.push_back(app.add_option("--" + leaf, flagValues[k], "sets " + key));
    }

    std::vector<const char*> cargv;
    for (const auto& a : argv) cargv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargv.size()), cargv.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? 0 : exit_code(ErrorKind::validation);
    }

    try {
        ConfigMap entries;
        if (!config.empty()) entries = load_config(config);
        ConfigMap overrides;
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw Error(ErrorKind::validation, "--set expects key=value, got '" + s + "'");
            const auto key = s.substr(0, eq);
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                throw Error(ErrorKind::validation, "--set: unknown key '" + key + "'");
            overrides[key] = {s.substr(eq + 1), "--set"};
        }
        for (std::size_t k = 0; k < keys.size(); ++k)
            if (flagOptions[k] && flagOptions[k]->count() > 0)
                overrides[keys[k]] = {flagValues[k], "--" + keys[k].substr(keys[k].rfind('.') + 1)};
        overrides["mode"] = {verb, "command line"};
        merge_into(entries, overrides);
        return run(build_run_config(entries), out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e.kind());
    }
}

} // namespace rsgame
