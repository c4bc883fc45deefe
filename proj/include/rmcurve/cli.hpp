#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rmcurve/curve.hpp"
#include "rmcurve/evolution.hpp"

namespace rmcurve::cli {

struct RunConfig {
    // model
    std::vector<double> endpoints;
    std::vector<Fraction> fractions;
    // time (optional)
    std::optional<double> t;
    std::optional<std::vector<double>> t_grid;
    // sampling
    int n = 100;
    int draws = 100;
    std::uint64_t seed = 2026;
    int bins = 100;
    // analysis
    int points_per_cut = 200;
    std::optional<std::pair<double, double>> bulk_window;
    std::optional<std::vector<int>> edges;
    evolution::ScaleConvention convention = evolution::ScaleConvention::Paper;
    // output
    std::filesystem::path out_dir = "out";
    bool write_csv = true;
    bool write_json = true;
};

/// Parses and validates a config document (or the summary.json echo of a
/// previous run, which reruns bit-identically). Reports the byte position
/// of parse errors and the field path of constraint violations.
RunConfig load_config(const std::filesystem::path& path);

/// The curve spec the config describes: endpoints taken directly, or pushed
/// through the time map when "time.t" is present.
curve::CurveSpec spec_of(const RunConfig& config);

/// Runs one subcommand (analyze | evolve | sample | verify-bulk |
/// verify-edge | rh-check), writing the artifacts and summary.json into
/// out_dir. Returns the process exit code: 0 success, 1 validation error,
/// 2 numerical degeneracy, 3 failed statistical check.
int run(const std::string& command, const RunConfig& config);

inline constexpr const char* kToolName = "rmcurve";
inline constexpr const char* kToolVersion = "0.1.0";

} // namespace rmcurve::cli
