#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "semilin/estimators.hpp"
#include "semilin/model.hpp"

namespace semilin {

struct ExperimentConfig {
    ModelSpec model;
    std::vector<WeightScheme> schemes = {WeightScheme::lse()};
    long n = 10000;
    long reps = 1000;
    // Fractions t in (0, 1]; the time-rescaled estimator uses the first
    // [n*t] steps.
    std::vector<double> time_grid = {1.0};
    std::uint64_t master_seed = 0;
    long burn_in = 0;  // optional leading steps dropped from the sums

    void validate() const;
};

struct DeviationStats {
    double mean = 0.0;
    double variance = 0.0;
    std::array<double, 9> deciles{};  // 10% .. 90%
};

struct SchemeSummary {
    std::string scheme;
    std::vector<DeviationStats> by_time;  // parallel to time_grid
    double vn_mean = 0.0;
    double vn_q25 = 0.0;
    double vn_q75 = 0.0;
    long degenerate = 0;
};

struct McSummary {
    std::vector<double> time_grid;
    std::vector<SchemeSummary> schemes;
    long reps = 0;
    long n = 0;
    std::uint64_t master_seed = 0;
    bool invalid = false;  // flagged when > 1% of replicates were degenerate
};

// One path per replicate, sqrt(n) * (a_hat_{[nt]} - a) per scheme and t.
// Replicates run on independent substreams and reduce in index order, so
// the summary is bitwise reproducible for any thread count.
McSummary run_monte_carlo(const ExperimentConfig& cfg);

struct ComparisonRow {
    std::string scheme;
    double dev_variance = 0.0;  // of sqrt(n)(a_hat - a) at t = 1
    double vn_mean = 0.0;
    double predicted_V = 0.0;
    long degenerate = 0;
};

// Rows ordered by empirical deviation variance, best first. predicted_V
// comes from limit_variance_optimal for the optimal scheme and from the
// mean V_n otherwise.
std::vector<ComparisonRow> compare_schemes(const ExperimentConfig& cfg);

struct DiagnosticsTable {
    std::vector<long> r_grid;
    std::vector<long> n_grid;
    // V estimate per (r, n) cell, row-major over r_grid x n_grid.
    std::vector<double> v_estimates;
    // Across-replicate standard deviation of Q_n and G_n (optimal weights)
    // per n in n_grid.
    std::vector<double> q_dispersion;
    std::vector<double> g_dispersion;
};

DiagnosticsTable convergence_diagnostics(const ExperimentConfig& cfg, std::vector<long> r_grid,
                                         std::vector<long> n_grid);

}  // namespace semilin
