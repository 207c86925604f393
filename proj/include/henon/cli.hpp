#pragma once

// Command-line front end: configuration, dispatch, sweeps and artifact emission.

#include "henon/params.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace henon::cli {

enum class Subcommand { sequences, solve, verify, blowup, oracle, decay, sweep };

std::string to_string(Subcommand s);
Subcommand subcommand_from_string(const std::string& name);

/// Bad flags, malformed numbers, missing subcommand.
class UsageError : public HenonError {
public:
    using HenonError::HenonError;
};

struct SweepGrid {
    Subcommand target = Subcommand::sequences;
    std::vector<int> n;
    std::vector<double> p;
    std::vector<double> a;
    std::size_t cap = 500;
    [[nodiscard]] std::size_t size() const { return n.size() * p.size() * a.size(); }
};

struct RunConfig {
    Subcommand subcommand = Subcommand::sequences;
    int n = 8;
    double p = 5.0;
    double a = 0.0;
    Mode mode = Mode::strict;
    std::size_t K = 200;
    double u0 = 1.0;
    double v0 = -1.0;      // blow-up data v(0) < 0
    double escape = 1e6;
    double r_max = 1e3;
    std::size_t trials = 10000;
    std::size_t workers = 4;
    std::uint64_t seed = 1;
    std::map<std::string, double> tolerances;
    std::filesystem::path output_dir;
    std::optional<SweepGrid> sweep;
};

/// ivp, shooting, margin, slope, potential.
std::map<std::string, double> default_tolerances();

/// Environment variable naming the default output directory.
inline constexpr const char* kOutputEnv = "HENONLAB_OUT";

/// "x", "lo:hi" (unit step), "lo:hi:step" or "x,y,z". A reversed range is empty.
std::vector<double> parse_range(const std::string& text);

/// Flags override the optional key=value file (--config), which overrides defaults.
RunConfig parse_config(const std::vector<std::string>& args);

nlohmann::json to_json(const RunConfig& config);

struct PointResult {
    std::string verdict; // pass, fail, report-only, outside-theorem-weight-range, error
    nlohmann::json summary;
};

/// Runs one non-sweep subcommand for `params`, writing artifacts into `dir`.
PointResult run_point(const RunConfig& config, const ProblemParams& params, const std::filesystem::path& dir);

/// Exit status: 0 all verdicts in scope pass, 1 a verdict failed, 3 module error.
int run(const RunConfig& config);

/// Parses, runs and maps usage errors to status 2.
int main_entry(int argc, char** argv);

} // namespace henon::cli
