#include "semilin/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "semilin/errors.hpp"
#include "semilin/kahan.hpp"
#include "semilin/parallel.hpp"

namespace semilin {

void ExperimentConfig::validate() const {
    model.validate();
    if (schemes.empty()) throw validation_error("experiment needs at least one scheme");
    for (const auto& s : schemes) s.validate();
    if (n < 1) throw validation_error("experiment: n must be >= 1");
    if (reps < 2) throw validation_error("experiment: reps must be >= 2");
    if (time_grid.empty()) throw validation_error("experiment: time grid must be nonempty");
    for (std::size_t i = 0; i < time_grid.size(); ++i) {
        double t = time_grid[i];
        if (!(t > 0.0 && t <= 1.0)) throw validation_error("time grid values must lie in (0, 1]");
        if (i > 0 && !(time_grid[i] > time_grid[i - 1]))
            throw validation_error("time grid must be strictly increasing");
    }
    if (burn_in < 0 || burn_in >= n) throw validation_error("burn_in must lie in [0, n)");
}

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return std::numeric_limits<double>::quiet_NaN();
    double pos = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

struct MomentPair {
    double mean = 0.0;
    double variance = 0.0;
};

MomentPair moments(const std::vector<double>& xs) {
    MomentPair m;
    if (xs.size() < 2) return m;
    KahanSum s;
    for (double x : xs) s.add(x);
    m.mean = s.value() / static_cast<double>(xs.size());
    KahanSum sq;
    for (double x : xs) sq.add((x - m.mean) * (x - m.mean));
    m.variance = sq.value() / static_cast<double>(xs.size() - 1);
    return m;
}

}  // namespace

McSummary run_monte_carlo(const ExperimentConfig& cfg) {
    cfg.validate();
    const long n = cfg.n;
    const long reps = cfg.reps;
    const std::size_t nt = cfg.time_grid.size();
    const std::size_t ns = cfg.schemes.size();
    const double root_n = std::sqrt(static_cast<double>(n));

    // raw[s][t*reps + rep]; NaN marks a degenerate replicate.
    std::vector<std::vector<double>> raw(ns, std::vector<double>(nt * static_cast<std::size_t>(reps)));
    std::vector<std::vector<double>> vn(ns, std::vector<double>(static_cast<std::size_t>(reps)));
    std::vector<std::vector<std::uint8_t>> bad(ns,
                                               std::vector<std::uint8_t>(static_cast<std::size_t>(reps), 0));

    std::vector<long> cutoffs(nt);
    for (std::size_t i = 0; i < nt; ++i)
        cutoffs[i] = std::max<long>(cfg.burn_in + 1,
                                    static_cast<long>(std::floor(static_cast<double>(n) * cfg.time_grid[i])));

    parallel_for(reps, [&](long rep) {
        DiscretePath path =
            simulate_discrete(cfg.model, n, cfg.master_seed, static_cast<std::uint64_t>(rep));
        for (std::size_t s = 0; s < ns; ++s) {
            std::vector<double> mu;
            try {
                mu = weights_for(cfg.schemes[s], cfg.model, path);
            } catch (const validation_error&) {
                bad[s][static_cast<std::size_t>(rep)] = 1;
                for (std::size_t ti = 0; ti < nt; ++ti)
                    raw[s][ti * static_cast<std::size_t>(reps) + static_cast<std::size_t>(rep)] =
                        std::numeric_limits<double>::quiet_NaN();
                vn[s][static_cast<std::size_t>(rep)] = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            KahanSum num, den, gsum;
            double max_term = 0.0;
            bool degenerate = false;
            std::size_t ti = 0;
            for (long k = cfg.burn_in; k < n; ++k) {
                auto i = static_cast<std::size_t>(k);
                double m = mu[i];
                double fm = cfg.model.f(path.xi[i]) * m;
                num.add(path.xi[i + 1] * m);
                den.add(fm);
                gsum.add(path.sigma2[i] * m * m);
                max_term = std::max(max_term, std::abs(fm));
                while (ti < nt && k + 1 == cutoffs[ti]) {
                    double d = den.value();
                    std::size_t slot =
                        ti * static_cast<std::size_t>(reps) + static_cast<std::size_t>(rep);
                    if (std::abs(d) < kDenomRelTol * static_cast<double>(k + 1) * max_term ||
                        d == 0.0) {
                        degenerate = true;
                        raw[s][slot] = std::numeric_limits<double>::quiet_NaN();
                    } else {
                        raw[s][slot] = root_n * (num.value() / d - cfg.model.a);
                    }
                    ++ti;
                }
            }
            long m_full = n - cfg.burn_in;
            double d = den.value();
            if (std::abs(d) < kDenomRelTol * static_cast<double>(m_full) * max_term || d == 0.0) {
                degenerate = true;
                vn[s][static_cast<std::size_t>(rep)] = std::numeric_limits<double>::quiet_NaN();
            } else {
                double Q = d / static_cast<double>(m_full);
                double G = gsum.value() / static_cast<double>(m_full);
                vn[s][static_cast<std::size_t>(rep)] = G / (Q * Q);
            }
            if (degenerate) bad[s][static_cast<std::size_t>(rep)] = 1;
        }
    });

    McSummary out;
    out.time_grid = cfg.time_grid;
    out.reps = reps;
    out.n = n;
    out.master_seed = cfg.master_seed;

    for (std::size_t s = 0; s < ns; ++s) {
        SchemeSummary ss;
        ss.scheme = cfg.schemes[s].name();
        for (std::size_t ti = 0; ti < nt; ++ti) {
            std::vector<double> vals;
            vals.reserve(static_cast<std::size_t>(reps));
            for (long rep = 0; rep < reps; ++rep) {
                double v = raw[s][ti * static_cast<std::size_t>(reps) + static_cast<std::size_t>(rep)];
                if (!std::isnan(v)) vals.push_back(v);
            }
            DeviationStats st;
            MomentPair m = moments(vals);
            st.mean = m.mean;
            st.variance = m.variance;
            std::sort(vals.begin(), vals.end());
            for (int d = 1; d <= 9; ++d)
                st.deciles[static_cast<std::size_t>(d - 1)] = quantile_sorted(vals, d / 10.0);
            ss.by_time.push_back(st);
        }
        std::vector<double> vns;
        for (long rep = 0; rep < reps; ++rep) {
            double v = vn[s][static_cast<std::size_t>(rep)];
            if (!std::isnan(v)) vns.push_back(v);
        }
        ss.vn_mean = moments(vns).mean;
        std::sort(vns.begin(), vns.end());
        ss.vn_q25 = quantile_sorted(vns, 0.25);
        ss.vn_q75 = quantile_sorted(vns, 0.75);
        for (long rep = 0; rep < reps; ++rep) ss.degenerate += bad[s][static_cast<std::size_t>(rep)];
        if (ss.degenerate * 100 > reps) out.invalid = true;
        out.schemes.push_back(std::move(ss));
    }
    return out;
}

std::vector<ComparisonRow> compare_schemes(const ExperimentConfig& cfg) {
    if (cfg.schemes.size() < 2) throw validation_error("compare needs at least 2 schemes");
    ExperimentConfig c = cfg;
    if (c.time_grid.empty() || c.time_grid.back() != 1.0) c.time_grid = {1.0};
    McSummary mc = run_monte_carlo(c);

    std::vector<ComparisonRow> rows;
    for (std::size_t s = 0; s < c.schemes.size(); ++s) {
        ComparisonRow row;
        row.scheme = mc.schemes[s].scheme;
        row.dev_variance = mc.schemes[s].by_time.back().variance;
        row.vn_mean = mc.schemes[s].vn_mean;
        row.degenerate = mc.schemes[s].degenerate;
        if (c.schemes[s].kind == SchemeKind::Optimal) {
            long n_lv = std::min<long>(c.n, 50000);
            long r_lv = std::min<long>(50, n_lv / 2);
            row.predicted_V =
                limit_variance_optimal(c.model, r_lv, n_lv, std::min<long>(c.reps, 100),
                                       c.master_seed + 1)
                    .value;
        } else {
            row.predicted_V = row.vn_mean;
        }
        rows.push_back(std::move(row));
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const ComparisonRow& a, const ComparisonRow& b) {
                         return a.dev_variance < b.dev_variance;
                     });
    return rows;
}

DiagnosticsTable convergence_diagnostics(const ExperimentConfig& cfg, std::vector<long> r_grid,
                                         std::vector<long> n_grid) {
    cfg.validate();
    for (std::size_t i = 1; i < r_grid.size(); ++i)
        if (r_grid[i] <= r_grid[i - 1]) throw validation_error("r grid must be increasing");
    for (std::size_t i = 1; i < n_grid.size(); ++i)
        if (n_grid[i] <= n_grid[i - 1]) throw validation_error("n grid must be increasing");

    DiagnosticsTable table;
    table.r_grid = r_grid;
    table.n_grid = n_grid;
    for (long r : r_grid)
        for (long n : n_grid)
            table.v_estimates.push_back(
                r < n ? limit_variance_optimal(cfg.model, r, n, cfg.reps, cfg.master_seed).value
                      : std::numeric_limits<double>::quiet_NaN());

    WeightScheme opt = WeightScheme::optimal();
    for (long n : n_grid) {
        std::vector<double> qs(static_cast<std::size_t>(cfg.reps));
        std::vector<double> gs(static_cast<std::size_t>(cfg.reps));
        parallel_for(cfg.reps, [&](long rep) {
            DiscretePath path =
                simulate_discrete(cfg.model, n, cfg.master_seed, static_cast<std::uint64_t>(rep));
            std::vector<double> mu = weights_for(opt, cfg.model, path);
            EstimateResult er = estimate_discrete(path, cfg.model.f, mu);
            qs[static_cast<std::size_t>(rep)] = er.Q_n;
            gs[static_cast<std::size_t>(rep)] = er.G_n;
        });
        table.q_dispersion.push_back(std::sqrt(moments(qs).variance));
        table.g_dispersion.push_back(std::sqrt(moments(gs).variance));
    }
    return table;
}

}  // namespace semilin
