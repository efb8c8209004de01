#include "rsgame/io.hpp"

#include "rsgame/error.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace rsgame {

void to_json(json& j, const GameParams& p) {
    j = json{{"r", p.r},
             {"sigma1", p.sigma[0]}, {"sigma2", p.sigma[1]},
             {"K1", p.K[0]}, {"K2", p.K[1]},
             {"Ktilde1", p.Ktilde[0]}, {"Ktilde2", p.Ktilde[1]},
             {"lambda1", p.lambda[0]}, {"lambda2", p.lambda[1]}};
}

void from_json(const json& j, GameParams& p) {
    j.at("r").get_to(p.r);
    j.at("sigma1").get_to(p.sigma[0]);
    j.at("sigma2").get_to(p.sigma[1]);
    j.at("K1").get_to(p.K[0]);
    j.at("K2").get_to(p.K[1]);
    j.at("Ktilde1").get_to(p.Ktilde[0]);
    j.at("Ktilde2").get_to(p.Ktilde[1]);
    j.at("lambda1").get_to(p.lambda[0]);
    j.at("lambda2").get_to(p.lambda[1]);
}

void to_json(json& j, const Thresholds& t) { j = json{{"a1", t.a1}, {"a2", t.a2}, {"b1", t.b1}, {"b2", t.b2}}; }

void from_json(const json& j, Thresholds& t) {
    j.at("a1").get_to(t.a1);
    j.at("a2").get_to(t.a2);
    j.at("b1").get_to(t.b1);
    j.at("b2").get_to(t.b2);
}

void to_json(json& j, const SpectralData& s) {
    j = json{{"beta", s.beta}, {"rho", s.rho}, {"gamma", s.gamma}, {"gammaTilde", s.gammaTilde},
             {"p", s.p}, {"q", s.q}, {"pTilde", s.pTilde}, {"qTilde", s.qTilde}};
}

void from_json(const json& j, SpectralData& s) {
    j.at("beta").get_to(s.beta);
    j.at("rho").get_to(s.rho);
    j.at("gamma").get_to(s.gamma);
    j.at("gammaTilde").get_to(s.gammaTilde);
    j.at("p").get_to(s.p);
    j.at("q").get_to(s.q);
    j.at("pTilde").get_to(s.pTilde);
    j.at("qTilde").get_to(s.qTilde);
}

void to_json(json& j, const SmoothFitSolution& s) {
    j = json{{"params", s.params},
             {"thresholds", s.thresholds},
             {"coefficients",
              {{"A", s.coeffs.A}, {"B", s.coeffs.B(s.spectral)}, {"C", s.coeffs.C}, {"Ctilde", s.coeffs.Ctilde}}},
             {"spectral", s.spectral},
             {"residual", s.residual},
             {"newtonResidual", s.newtonResidual},
             {"newtonIterations", s.newtonIterations}};
}

void from_json(const json& j, SmoothFitSolution& s) {
    j.at("params").get_to(s.params);
    j.at("thresholds").get_to(s.thresholds);
    const auto& c = j.at("coefficients");
    c.at("A").get_to(s.coeffs.A);
    c.at("C").get_to(s.coeffs.C);
    c.at("Ctilde").get_to(s.coeffs.Ctilde);
    j.at("spectral").get_to(s.spectral);
    s.residual = j.value("residual", 0.0);
    s.newtonResidual = j.value("newtonResidual", 0.0);
    s.newtonIterations = j.value("newtonIterations", 0);
}

void to_json(json& j, const ReductionSolution& s) {
    j = json{{"a", s.thresholds.a}, {"b", s.thresholds.b}, {"A", s.A}, {"beta", s.beta},
             {"residual", s.residual}, {"newtonIterations", s.newtonIterations}};
}

void to_json(json& j, const GridSpec& g) { j = json{{"lo", g.lo}, {"hi", g.hi}, {"count", g.count}}; }

void to_json(json& j, const ConditionResult& c) {
    j = json{{"name", c.name},
             {"worst", {{"x", c.worst.x}, {"regime", number(c.worst.regime)}, {"violation", c.worst.violation}}},
             {"tolerance", c.tolerance},
             {"pass", c.pass}};
}

void to_json(json& j, const SmoothnessReport& s) {
    json pts = json::array();
    for (const auto& m : s.points)
        pts.push_back({{"label", m.label}, {"x", m.x}, {"regime", number(m.regime)},
                       {"valueGap", m.value_gap}, {"slopeGap", m.slope_gap}});
    j = json{{"points", pts}, {"worst", s.worst}, {"tolerance", s.tolerance}, {"pass", s.pass}};
}

void to_json(json& j, const VerificationReport& r) {
    j = json{{"grid", r.grid}, {"boundsGrid", r.boundsGrid}, {"smoothness", r.smoothness},
             {"bounds", r.bounds}, {"viPlayer1", r.vi.c}, {"viPlayer2", r.vi.d}, {"pass", r.pass}};
}

void to_json(json& j, const SimReport& r) {
    j = json{{"estimate", r.estimate},
             {"stdError", r.stdError},
             {"ci95", r.ci95},
             {"stops",
              {{"player1First", r.stops.player1First},
               {"player2First", r.stops.player2First},
               {"truncated", r.stops.truncated}}},
             {"pathsUsed", r.pathsUsed},
             {"horizon", r.horizon},
             {"truncationBias", r.truncationBias}};
}

void to_json(json& j, const ThresholdStrategyPair& s) {
    j = json{{"player1", s.p1Levels}, {"player2", s.p2Levels}};
}

void to_json(json& j, const DeviationTest& t) {
    json devs = json::array();
    for (const auto& d : t.deviations) {
        const char* who = d.deviator == Deviator::player1 ? "player1" : d.deviator == Deviator::player2 ? "player2" : "none";
        devs.push_back({{"strategy", d.strategy}, {"deviator", who}, {"report", d.report}, {"value", d.value},
                        {"slack", d.slack}, {"diffMean", d.diffMean}, {"diffCi95", d.diffCi95}, {"pass", d.pass}});
    }
    j = json{{"equilibrium", t.equilibrium}, {"deviations", devs}, {"pass", t.pass}};
}

std::string format_number(double v) { return fmt::format("{}", v); }

namespace {

std::string csv_field(const std::string& f) {
    if (f.find_first_of(",\"\n\r") == std::string::npos) return f;
    std::string out = "\"";
    for (char c : f) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

void append_line(std::string& out, const std::vector<std::string>& fields) {
    for (std::size_t k = 0; k < fields.size(); ++k) {
        if (k) out += ',';
        out += csv_field(fields[k]);
    }
    out += '\n';
}

} // namespace

std::string CsvTable::str() const {
    std::string out;
    append_line(out, header_);
    for (const auto& row : rows_) append_line(out, row);
    return out;
}

json CsvTable::records() const {
    json out = json::array();
    for (const auto& row : rows_) {
        json rec = json::object();
        for (std::size_t k = 0; k < header_.size() && k < row.size(); ++k) {
            const auto& f = row[k];
            double v = 0.0;
            auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
            if (!f.empty() && ec == std::errc() && ptr == f.data() + f.size())
                rec[header_[k]] = v;
            else
                rec[header_[k]] = f;
        }
        out.push_back(std::move(rec));
    }
    return out;
}

CsvTable plot_table(const ValueFunction& vf, double lo, double hi, std::size_t count) {
    CsvTable table({"x", "v1", "v2", "dv1", "dv2", "lower1", "upper1", "lower2", "upper2", "Lv1", "Lv2", "piece"});
    const auto& p = vf.params();
    for (const auto& row : tabulate(vf, lo, hi, count)) {
        const double x = row.x;
        table.add_row({format_number(x), format_number(row.v1), format_number(row.v2), format_number(row.dv1),
                       format_number(row.dv2), format_number(x - p.Ktilde[0]), format_number(x - p.K[0]),
                       format_number(x - p.Ktilde[1]), format_number(x - p.K[1]),
                       format_number(vf.generator(x, Regime::one)), format_number(vf.generator(x, Regime::two)),
                       std::to_string(row.piece)});
    }
    return table;
}

CsvTable trace_table(const std::vector<TracePoint>& trace) {
    CsvTable table({"path", "t", "X", "alpha"});
    for (const auto& pt : trace)
        table.add_row({std::to_string(pt.path), format_number(pt.t), format_number(pt.x),
                       std::to_string(number(pt.regime))});
    return table;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) {
        std::error_code ec;
        std::filesystem::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
    out << text;
    out.close();
    if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

SmoothFitSolution load_solution(const std::filesystem::path& path) {
    const auto text = read_text(path);
    try {
        return json::parse(text).get<SmoothFitSolution>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::io, path.string() + ": not a solution file (" + e.what() + ")");
    }
}

} // namespace rsgame
