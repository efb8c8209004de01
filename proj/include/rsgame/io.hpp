#pragma once

#include "rsgame/mcsim.hpp"
#include "rsgame/smoothfit.hpp"
#include "rsgame/valuefn.hpp"
#include "rsgame/verify.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace rsgame {

using nlohmann::json;

// JSON forms. Doubles are written with round-trip precision.
void to_json(json& j, const GameParams& p);
void from_json(const json& j, GameParams& p);
void to_json(json& j, const Thresholds& t);
void from_json(const json& j, Thresholds& t);
void to_json(json& j, const SpectralData& s);
void from_json(const json& j, SpectralData& s);
void to_json(json& j, const SmoothFitSolution& s);
void from_json(const json& j, SmoothFitSolution& s);
void to_json(json& j, const ReductionSolution& s);
void to_json(json& j, const GridSpec& g);
void to_json(json& j, const ConditionResult& c);
void to_json(json& j, const SmoothnessReport& s);
void to_json(json& j, const VerificationReport& r);
void to_json(json& j, const SimReport& r);
void to_json(json& j, const ThresholdStrategyPair& s);
void to_json(json& j, const DeviationTest& t);

/// Shortest representation that reads back to the same double; '.' decimal point.
std::string format_number(double v);

/// RFC 4180-style CSV: header row, one line per row, fields quoted only when needed.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

    void add_row(std::vector<std::string> row) { rows_.push_back(std::move(row)); }
    std::string str() const;
    /// Array of records keyed by header; fields that parse as numbers become numbers.
    json records() const;
    std::size_t size() const noexcept { return rows_.size(); }

private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

/// Value-function tabulation with both envelopes and the generator for plotting.
CsvTable plot_table(const ValueFunction& vf, double lo, double hi, std::size_t count);

CsvTable trace_table(const std::vector<TracePoint>& trace);

/// Writes text to a file, throwing Error(io) on failure.
void write_text(const std::filesystem::path& path, const std::string& text);
/// Reads a whole file, throwing Error(io) on failure.
std::string read_text(const std::filesystem::path& path);

SmoothFitSolution load_solution(const std::filesystem::path& path);

} // namespace rsgame
