#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "semilin/continuous.hpp"
#include "semilin/experiments.hpp"
#include "semilin/model.hpp"

namespace semilin {

enum class RunMode { Simulate, Estimate, MonteCarlo, Compare, Continuous, Diagnostics };

RunMode run_mode_from_name(const std::string& name);
std::string run_mode_name(RunMode mode);

struct ContinuousRunSpec {
    ContinuousModelSpec model;
    double T = 100.0;
    double dt = 0.01;
    std::string h = "lse";  // "lse" | "optimal"
    long reps = 1;
};

struct DiagnosticsSpec {
    std::vector<long> r_grid = {5, 10, 25, 50};
    std::vector<long> n_grid = {1000, 10000, 100000};
};

// One config file drives every subcommand. Unknown keys are rejected;
// serialization echoes applied defaults, so a persisted config replays
// the run exactly.
struct RunConfig {
    int format_version = 1;
    RunMode mode = RunMode::Simulate;
    ModelSpec model;
    std::vector<WeightScheme> schemes = {WeightScheme::lse()};
    long n = 10000;
    long reps = 1000;
    std::vector<double> time_grid = {1.0};
    long burn_in = 0;
    std::uint64_t seed = 0;
    std::string output_dir = "out";
    std::string series_file;  // estimate mode may read an external series
    ContinuousRunSpec continuous;
    DiagnosticsSpec diagnostics;

    ExperimentConfig experiment() const;
    void validate() const;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& cfg);
std::uint64_t config_hash(const RunConfig& cfg);

// External series: CSV with header "k,xi[,sigma2]" and optional
// "# key: value" metadata lines. No shocks are recoverable without a, so
// eps stays empty and eps-based diagnostics are unavailable.
struct IngestedSeries {
    DiscretePath path;  // eps empty; sigma2 empty unless the column was present
    bool has_sigma2 = false;
    std::string variance_fn;  // metadata name when the sigma2 column is absent
};

IngestedSeries ingest_series(const std::string& text);
IngestedSeries ingest_series_file(const std::string& filename);

// Result writers: delimited text, fixed column order, 17 significant
// digits, LF line endings. write_manifest records the config hash, seed
// and tool version next to the data files.
void write_series(const std::string& dir, const DiscretePath& path);
void write_estimates(const std::string& dir,
                     const std::vector<std::pair<std::string, EstimateResult>>& results);
void write_mc_summary(const std::string& dir, const McSummary& summary);
void write_comparison(const std::string& dir, const std::vector<ComparisonRow>& rows);
void write_diagnostics(const std::string& dir, const DiagnosticsTable& table);
void write_manifest(const std::string& dir, const RunConfig& cfg,
                    const std::vector<std::string>& files);

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace semilin
