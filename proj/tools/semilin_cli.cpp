// Command-line front end: every subcommand is driven by a JSON config and
// writes machine-readable tables plus a manifest into the output directory.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "semilin/errors.hpp"
#include "semilin/io.hpp"
#include "semilin/kahan.hpp"
#include "semilin/parallel.hpp"

namespace {

using namespace semilin;

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    long seed = -1;
    long reps = -1;
    bool quiet = false;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw io_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

RunConfig load_config(const CliOptions& opt, RunMode mode) {
    RunConfig cfg = parse_config(slurp(opt.config_path));
    cfg.mode = mode;
    if (opt.seed >= 0) cfg.seed = static_cast<std::uint64_t>(opt.seed);
    if (opt.reps >= 1) {
        cfg.reps = opt.reps;
        cfg.continuous.reps = opt.reps;
    }
    if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
    return cfg;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw io_error("cannot create output directory " + dir + ": " + ec.message());
}

int run_simulate(const RunConfig& cfg, bool quiet) {
    DiscretePath path = simulate_discrete(cfg.model, cfg.n, cfg.seed);
    ensure_dir(cfg.output_dir);
    write_series(cfg.output_dir, path);
    write_manifest(cfg.output_dir, cfg, {"series.csv"});
    if (!quiet)
        std::cout << "simulated n=" << cfg.n << " steps, xi_n = " << path.xi.back() << "\n";
    return 0;
}

int run_estimate(const RunConfig& cfg, bool quiet) {
    DiscretePath path;
    if (!cfg.series_file.empty()) {
        IngestedSeries series = ingest_series_file(cfg.series_file);
        path = std::move(series.path);
        if (!series.has_sigma2) {
            // No sigma2 column: fall back to the configured noise model.
            path.sigma2.resize(static_cast<std::size_t>(path.n()));
            for (long k = 1; k <= path.n(); ++k)
                path.sigma2[static_cast<std::size_t>(k - 1)] = conditional_variance(
                    cfg.model.noise, k, path.xi[static_cast<std::size_t>(k - 1)]);
        }
    } else {
        path = simulate_discrete(cfg.model, cfg.n, cfg.seed);
    }

    bool degenerate = false;
    std::vector<std::pair<std::string, EstimateResult>> results;
    for (const auto& scheme : cfg.schemes) {
        std::vector<double> mu = weights_for(scheme, cfg.model, path);
        try {
            results.emplace_back(scheme.name(), estimate_discrete(path, cfg.model.f, mu));
        } catch (const degenerate_error& e) {
            degenerate = true;
            if (!quiet) std::cerr << scheme.name() << ": " << e.what() << "\n";
        }
    }
    ensure_dir(cfg.output_dir);
    write_estimates(cfg.output_dir, results);
    write_manifest(cfg.output_dir, cfg, {"estimates.csv"});
    if (!quiet)
        for (const auto& [name, r] : results)
            std::cout << name << ": a_hat = " << r.a_hat << ", V_n = " << r.V_n << "\n";
    return degenerate ? 2 : 0;
}

int run_monte_carlo_cmd(const RunConfig& cfg, bool quiet) {
    McSummary summary = run_monte_carlo(cfg.experiment());
    ensure_dir(cfg.output_dir);
    write_mc_summary(cfg.output_dir, summary);
    write_manifest(cfg.output_dir, cfg, {"deviations.csv", "schemes.csv", "long.csv"});
    if (!quiet)
        for (const auto& ss : summary.schemes)
            std::cout << ss.scheme << ": var[sqrt(n)(a_hat - a)] = "
                      << ss.by_time.back().variance << ", mean V_n = " << ss.vn_mean << "\n";
    return summary.invalid ? 2 : 0;
}

int run_compare(const RunConfig& cfg, bool quiet) {
    std::vector<ComparisonRow> rows = compare_schemes(cfg.experiment());
    ensure_dir(cfg.output_dir);
    write_comparison(cfg.output_dir, rows);
    write_manifest(cfg.output_dir, cfg, {"comparison.csv"});
    bool flagged = false;
    for (const auto& r : rows) {
        if (r.degenerate * 100 > cfg.reps) flagged = true;
        if (!quiet)
            std::cout << r.scheme << ": dev variance = " << r.dev_variance
                      << ", mean V_n = " << r.vn_mean << ", predicted V = " << r.predicted_V
                      << "\n";
    }
    return flagged ? 2 : 0;
}

int run_continuous(const RunConfig& cfg, bool quiet) {
    const ContinuousRunSpec& spec = cfg.continuous;
    WeightFnCt h = spec.h == "optimal" ? ct_weight_optimal(spec.model.f, spec.model.mdot)
                                       : ct_weight_lse(spec.model.f);
    std::vector<std::pair<std::string, EstimateResult>> results;
    KahanSum dev_sum, dev_sq;
    long ok = 0;
    bool degenerate = false;
    const double root_T = std::sqrt(spec.T);
    for (long rep = 0; rep < spec.reps; ++rep) {
        ContinuousPath path = simulate_continuous(spec.model, spec.T, spec.dt, cfg.seed,
                                                  static_cast<std::uint64_t>(rep));
        try {
            EstimateResult r = estimate_continuous(path, spec.model.f, h);
            if (rep == 0) results.emplace_back(spec.h, r);
            double d = root_T * (r.a_hat - spec.model.a);
            dev_sum.add(d);
            dev_sq.add(d * d);
            ++ok;
        } catch (const degenerate_error&) {
            degenerate = true;
        }
    }
    ensure_dir(cfg.output_dir);
    write_estimates(cfg.output_dir, results);
    write_manifest(cfg.output_dir, cfg, {"estimates.csv"});
    if (!quiet && !results.empty()) {
        std::cout << spec.h << ": a_hat = " << results.front().second.a_hat
                  << ", V_T = " << results.front().second.V_n << "\n";
        if (ok > 1) {
            double mean = dev_sum.value() / static_cast<double>(ok);
            double var = dev_sq.value() / static_cast<double>(ok) - mean * mean;
            std::cout << "var[sqrt(T)(a_hat - a)] over " << ok << " reps: " << var << "\n";
        }
    }
    return degenerate ? 2 : 0;
}

int run_diagnostics(const RunConfig& cfg, bool quiet) {
    ExperimentConfig e = cfg.experiment();
    e.reps = std::max<long>(2, std::min<long>(e.reps, 200));
    DiagnosticsTable table = convergence_diagnostics(e, cfg.diagnostics.r_grid,
                                                     cfg.diagnostics.n_grid);
    ensure_dir(cfg.output_dir);
    write_diagnostics(cfg.output_dir, table);
    write_manifest(cfg.output_dir, cfg, {"diagnostics_v.csv", "diagnostics_dispersion.csv"});
    if (!quiet && !table.v_estimates.empty())
        std::cout << "V estimate at largest (r, n): " << table.v_estimates.back() << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semilin: simulation and weighted estimation for semi-linear autoregression"};
    app.require_subcommand(1);

    CliOptions opt;
    RunMode mode = RunMode::Simulate;
    auto add_sub = [&](const char* name, const char* desc, RunMode m) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", opt.config_path, "JSON config file")->required();
        sub->add_option("--seed", opt.seed, "override the config seed");
        sub->add_option("--out", opt.out_dir, "override the output directory");
        sub->add_option("--reps", opt.reps, "override the replicate count");
        sub->add_flag("--quiet", opt.quiet, "suppress progress output");
        sub->callback([&mode, m] { mode = m; });
        return sub;
    };
    add_sub("simulate", "simulate one discrete path", RunMode::Simulate);
    add_sub("estimate", "estimate a from a simulated or ingested series", RunMode::Estimate);
    add_sub("monte-carlo", "Monte Carlo over replicates and weight schemes", RunMode::MonteCarlo);
    add_sub("compare", "rank weight schemes by empirical deviation variance", RunMode::Compare);
    add_sub("continuous", "continuous-time simulation and estimation", RunMode::Continuous);
    add_sub("diagnostics", "limit-variance convergence diagnostics", RunMode::Diagnostics);

    CLI11_PARSE(app, argc, argv);

    try {
        RunConfig cfg = load_config(opt, mode);
        switch (mode) {
            case RunMode::Simulate: return run_simulate(cfg, opt.quiet);
            case RunMode::Estimate: return run_estimate(cfg, opt.quiet);
            case RunMode::MonteCarlo: return run_monte_carlo_cmd(cfg, opt.quiet);
            case RunMode::Compare: return run_compare(cfg, opt.quiet);
            case RunMode::Continuous: return run_continuous(cfg, opt.quiet);
            case RunMode::Diagnostics: return run_diagnostics(cfg, opt.quiet);
        }
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const degenerate_error& e) {
        std::cerr << "degenerate result: " << e.what() << "\n";
        return 2;
    } catch (const io_error& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
