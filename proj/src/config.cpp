#include "rsgame/config.hpp"

#include "rsgame/error.hpp"
#include "rsgame/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace rsgame {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw Error(ErrorKind::validation, where + ": " + what);
}

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// Drops a trailing comment that is not inside quotes.
std::string_view strip_comment(std::string_view s) {
    char quote = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const char c = s[k];
        if (quote) {
            if (c == quote) quote = 0;
        } else if (c == '"' || c == '\'') {
            quote = c;
        } else if (c == '#' || c == ';') {
            return s.substr(0, k);
        }
    }
    return s;
}

std::string unquote(std::string_view s) {
    if (s.size() >= 2 && (s.front() == '"' || s.front() == '\'') && s.back() == s.front())
        return std::string(s.substr(1, s.size() - 2));
    return std::string(s);
}

bool known_key(const std::string& key) {
    const auto& keys = config_keys();
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::string where(const std::string& key, const ConfigEntry& e) { return e.origin + ": " + key; }

double to_double(const std::string& key, const ConfigEntry& e, std::string_view text) {
    text = trim(text);
    double v = 0.0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        fail(where(key, e), "expected a number, got '" + std::string(text) + "'");
    if (!std::isfinite(v)) fail(where(key, e), "value must be finite");
    return v;
}

std::uint64_t to_uint(const std::string& key, const ConfigEntry& e) {
    const std::string_view text = trim(e.value);
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty())
        fail(where(key, e), "expected a non-negative integer, got '" + std::string(text) + "'");
    return v;
}

bool to_bool(const std::string& key, const ConfigEntry& e) {
    const auto v = trim(e.value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail(where(key, e), "expected true or false, got '" + std::string(v) + "'");
}

std::vector<double> to_list(const std::string& key, const ConfigEntry& e) {
    std::string_view text = trim(e.value);
    if (!text.empty() && text.front() == '[') {
        if (text.back() != ']') fail(where(key, e), "unterminated list");
        text = text.substr(1, text.size() - 2);
    }
    std::vector<double> out;
    while (!text.empty()) {
        const auto comma = text.find(',');
        out.push_back(to_double(key, e, text.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        text = text.substr(comma + 1);
    }
    if (out.empty()) fail(where(key, e), "value list is empty");
    return out;
}

} // namespace

Mode parse_mode(std::string_view s) {
    if (s == "solve") return Mode::solve;
    if (s == "reduce") return Mode::reduce;
    if (s == "verify") return Mode::verify;
    if (s == "simulate") return Mode::simulate;
    if (s == "sweep") return Mode::sweep;
    if (s == "plotdata") return Mode::plotdata;
    throw Error(ErrorKind::validation, "unknown mode '" + std::string(s) + "'");
}

std::string_view to_string(Mode m) {
    switch (m) {
    case Mode::solve: return "solve";
    case Mode::reduce: return "reduce";
    case Mode::verify: return "verify";
    case Mode::simulate: return "simulate";
    case Mode::sweep: return "sweep";
    case Mode::plotdata: return "plotdata";
    }
    return "solve";
}

Format RunConfig::output_format() const {
    if (format) return *format;
    return mode == Mode::sweep || mode == Mode::plotdata ? Format::csv : Format::json;
}

const std::vector<std::string>& config_keys() {
    static const std::vector<std::string> keys = {
        "mode",
        "params.r", "params.sigma1", "params.sigma2", "params.K1", "params.K2",
        "params.Ktilde1", "params.Ktilde2", "params.lambda1", "params.lambda2",
        "state.x", "state.regime",
        "sim.dt", "sim.horizon", "sim.paths", "sim.seed", "sim.antithetic", "sim.workers",
        "sim.trace", "sim.trace_paths", "sim.nash",
        "sweep.param", "sweep.values", "sweep.parallel",
        "verify.grid", "verify.solution",
        "plot.points",
        "output.out", "output.format",
    };
    return keys;
}

ConfigMap parse_config(std::string_view text, std::string_view source) {
    ConfigMap out;
    std::string section;
    std::size_t lineno = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        const std::string_view raw = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++lineno;
        const std::string at = std::string(source) + ":" + std::to_string(lineno);

        const auto line = trim(strip_comment(raw));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') fail(at, "malformed section header '" + std::string(line) + "'");
            section = std::string(trim(line.substr(1, line.size() - 2)));
            if (section.empty()) fail(at, "empty section name");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) fail(at, "expected key = value, got '" + std::string(line) + "'");
        const auto name = trim(line.substr(0, eq));
        if (name.empty()) fail(at, "missing key before '='");
        std::string key = section.empty() ? std::string(name) : section + "." + std::string(name);
        if (!known_key(key)) fail(at, "unknown key '" + key + "'");
        out[key] = {unquote(trim(line.substr(eq + 1))), at};
    }
    return out;
}

ConfigMap load_config(const std::filesystem::path& path) { return parse_config(read_text(path), path.string()); }

void merge_into(ConfigMap& base, const ConfigMap& overrides) {
    for (const auto& [k, v] : overrides) base[k] = v;
}

double& param_ref(GameParams& p, std::string_view name) {
    if (name == "r") return p.r;
    if (name == "sigma1") return p.sigma[0];
    if (name == "sigma2") return p.sigma[1];
    if (name == "K1") return p.K[0];
    if (name == "K2") return p.K[1];
    if (name == "Ktilde1") return p.Ktilde[0];
    if (name == "Ktilde2") return p.Ktilde[1];
    if (name == "lambda1") return p.lambda[0];
    if (name == "lambda2") return p.lambda[1];
    throw Error(ErrorKind::validation, "unknown sweep parameter '" + std::string(name) + "'");
}

RunConfig build_run_config(const ConfigMap& entries) {
    RunConfig cfg;
    auto get = [&](const char* key) -> const ConfigEntry* {
        auto it = entries.find(key);
        return it == entries.end() ? nullptr : &it->second;
    };

    if (auto e = get("mode")) cfg.mode = parse_mode(trim(e->value));

    for (const char* name : kSweepParams) {
        const std::string key = std::string("params.") + name;
        if (auto e = get(key.c_str())) param_ref(cfg.params, name) = to_double(key, *e, e->value);
    }

    if (auto e = get("state.x")) cfg.start.x = to_double("state.x", *e, e->value);
    if (auto e = get("state.regime")) {
        const auto n = to_uint("state.regime", *e);
        if (n != 1 && n != 2) fail(where("state.regime", *e), "regime must be 1 or 2");
        cfg.start.regime = regime_from_int(static_cast<int>(n));
    }

    if (auto e = get("sim.dt")) cfg.sim.dt = to_double("sim.dt", *e, e->value);
    if (auto e = get("sim.horizon")) cfg.sim.horizon = to_double("sim.horizon", *e, e->value);
    if (auto e = get("sim.paths")) cfg.sim.paths = to_uint("sim.paths", *e);
    if (auto e = get("sim.seed")) cfg.sim.seed = to_uint("sim.seed", *e);
    if (auto e = get("sim.antithetic")) cfg.sim.antithetic = to_bool("sim.antithetic", *e);
    if (auto e = get("sim.workers")) cfg.sim.workers = static_cast<unsigned>(to_uint("sim.workers", *e));
    if (auto e = get("sim.trace")) cfg.tracePath = e->value;
    if (auto e = get("sim.trace_paths")) cfg.tracePaths = to_uint("sim.trace_paths", *e);
    if (auto e = get("sim.nash")) cfg.nash = to_bool("sim.nash", *e);
    if (cfg.sim.dt <= 0.0) fail(where("sim.dt", *get("sim.dt")), "time step must be positive");
    if (cfg.sim.paths == 0) fail(where("sim.paths", *get("sim.paths")), "at least one path is required");

    const auto* sp = get("sweep.param");
    const auto* sv = get("sweep.values");
    if (sp || sv || cfg.mode == Mode::sweep) {
        SweepSpec s;
        if (!sp) throw Error(ErrorKind::validation, "sweep.param is required for a sweep");
        if (!sv) throw Error(ErrorKind::validation, "sweep.values is required for a sweep");
        s.param = std::string(trim(sp->value));
        if (std::find(std::begin(kSweepParams), std::end(kSweepParams), s.param) == std::end(kSweepParams))
            fail(where("sweep.param", *sp), "unknown sweep parameter '" + s.param + "'");
        s.values = to_list("sweep.values", *sv);
        if (auto e = get("sweep.parallel")) s.parallel = to_bool("sweep.parallel", *e);
        cfg.sweep = s;
    }

    if (auto e = get("verify.grid")) {
        cfg.grid = to_uint("verify.grid", *e);
        if (cfg.grid < 2) fail(where("verify.grid", *e), "grid needs at least 2 points");
    }
    if (auto e = get("verify.solution")) cfg.solutionPath = e->value;
    if (auto e = get("plot.points")) {
        cfg.plotPoints = to_uint("plot.points", *e);
        if (cfg.plotPoints < 2) fail(where("plot.points", *e), "plot needs at least 2 points");
    }
    if (auto e = get("output.out")) cfg.outPath = e->value;
    if (auto e = get("output.format")) {
        const auto f = trim(e->value);
        if (f == "csv") cfg.format = Format::csv;
        else if (f == "json") cfg.format = Format::json;
        else fail(where("output.format", *e), "format must be csv or json, got '" + std::string(f) + "'");
    }
    return cfg;
}

} // namespace rsgame
