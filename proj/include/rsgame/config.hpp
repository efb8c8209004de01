#pragma once

#include "rsgame/mcsim.hpp"
#include "rsgame/model.hpp"

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rsgame {

enum class Mode { solve, reduce, verify, simulate, sweep, plotdata };
enum class Format { csv, json };

Mode parse_mode(std::string_view s);
std::string_view to_string(Mode m);

struct SweepSpec {
    std::string param;
    std::vector<double> values;
    /// Cold-start every row independently instead of warm-starting in order.
    bool parallel = false;
};

struct RunConfig {
    GameParams params = benchmark_params();
    Mode mode = Mode::solve;
    std::optional<SweepSpec> sweep;
    SimConfig sim;
    /// Start state for simulate; the regime also selects the reduce inputs.
    StartState start{3.0, Regime::one};
    bool nash = false;
    std::string tracePath;
    std::size_t tracePaths = 10;
    std::size_t grid = 20001;
    std::string solutionPath;
    std::size_t plotPoints = 2000;
    std::string outPath;
    std::optional<Format> format;

    Format output_format() const;
};

/// Raw value of one key and where it came from ("file:line" or "--flag").
struct ConfigEntry {
    std::string value;
    std::string origin;
};

using ConfigMap = std::map<std::string, ConfigEntry>;

/// Every recognised key, dotted. The last segment is also the flag name.
const std::vector<std::string>& config_keys();

/// Flat key = value lines. "[section]" prefixes the keys that follow with
/// "section."; keys may also be written dotted in full. '#' and ';' start
/// comments, values may be quoted, lists are "a, b, c" or "[a, b, c]".
/// Throws Error(validation) naming the source line on bad syntax or
/// unknown keys.
ConfigMap parse_config(std::string_view text, std::string_view source = "config");
ConfigMap load_config(const std::filesystem::path& path);

/// Later entries win.
void merge_into(ConfigMap& base, const ConfigMap& overrides);

/// Converts and validates; errors carry the key and its origin.
RunConfig build_run_config(const ConfigMap& entries);

inline constexpr const char* kSweepParams[] = {"sigma1", "sigma2", "K1",      "K2", "Ktilde1",
                                               "Ktilde2", "lambda1", "lambda2", "r"};

/// Field of GameParams by sweep name; throws Error(validation) for other names.
double& param_ref(GameParams& p, std::string_view name);

} // namespace rsgame
