#include "semilin/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "semilin/errors.hpp"
#include "semilin/kahan.hpp"
#include "semilin/parallel.hpp"

namespace semilin {

std::string WeightScheme::name() const {
    if (!label.empty()) return label;
    switch (kind) {
        case SchemeKind::LSE: return "lse";
        case SchemeKind::Optimal: return "optimal";
        case SchemeKind::Custom: return "custom";
    }
    return "?";
}

void WeightScheme::validate() const {
    if (kind == SchemeKind::Custom) custom_h.validate();
}

std::vector<double> weights_for(const WeightScheme& scheme, const ModelSpec& model,
                                const DiscretePath& path) {
    const long n = path.n();
    std::vector<double> mu(static_cast<std::size_t>(n));
    switch (scheme.kind) {
        case SchemeKind::LSE:
            for (long k = 0; k < n; ++k)
                mu[static_cast<std::size_t>(k)] = model.f(path.xi[static_cast<std::size_t>(k)]);
            break;
        case SchemeKind::Optimal:
            if (static_cast<long>(path.sigma2.size()) != n)
                throw validation_error("optimal weights need the conditional variance sequence");
            for (long k = 0; k < n; ++k) {
                auto i = static_cast<std::size_t>(k);
                // sigma^2_{k+1} is a function of xi_k, hence predictable at k.
                double s2 = path.sigma2[i];
                if (!(s2 > 0.0))
                    throw validation_error("optimal weights need sigma^2_{k+1} > 0; it vanishes at k = " +
                                           std::to_string(k));
                mu[i] = model.f(path.xi[i]) / s2;
            }
            break;
        case SchemeKind::Custom:
            for (long k = 0; k < n; ++k)
                mu[static_cast<std::size_t>(k)] = scheme.custom_h(path.xi[static_cast<std::size_t>(k)]);
            break;
    }
    return mu;
}

namespace {

struct Sums {
    double num;        // sum xi_{k+1} mu_k
    double den;        // sum f(xi_k) mu_k
    double gsum;       // sum sigma^2_{k+1} mu_k^2
    double max_term;   // max |f(xi_k) mu_k|
};

Sums weighted_sums(const DiscretePath& path, const FunctionSpec& f, std::span<const double> mu) {
    const long n = path.n();
    if (n < 1) throw validation_error("estimate: path must have n >= 1");
    if (static_cast<long>(mu.size()) != n)
        throw validation_error("estimate: weight sequence length must equal n");
    const bool have_s2 = static_cast<long>(path.sigma2.size()) == n;
    KahanSum num, den, gsum;
    double max_term = 0.0;
    for (long k = 0; k < n; ++k) {
        auto i = static_cast<std::size_t>(k);
        double m = mu[i];
        double fm = f(path.xi[i]) * m;
        num.add(path.xi[i + 1] * m);
        den.add(fm);
        if (have_s2) gsum.add(path.sigma2[i] * m * m);
        max_term = std::max(max_term, std::abs(fm));
    }
    // Without a variance sequence (external data) G_n and V_n are undefined.
    double g = have_s2 ? gsum.value() : std::numeric_limits<double>::quiet_NaN();
    return {num.value(), den.value(), g, max_term};
}

void require_nondegenerate(const Sums& s, long n) {
    if (std::abs(s.den) < kDenomRelTol * static_cast<double>(n) * s.max_term ||
        s.den == 0.0)
        throw degenerate_error("degenerate estimator denominator: |sum f(xi)mu| = " +
                               std::to_string(std::abs(s.den)));
}

}  // namespace

EstimateResult estimate_discrete(const DiscretePath& path, const FunctionSpec& f,
                                 std::span<const double> mu) {
    const long n = path.n();
    Sums s = weighted_sums(path, f, mu);
    require_nondegenerate(s, n);
    EstimateResult r;
    r.n = n;
    r.a_hat = s.num / s.den;
    r.Q_n = s.den / static_cast<double>(n);
    r.G_n = s.gsum / static_cast<double>(n);
    r.V_n = r.G_n / (r.Q_n * r.Q_n);
    r.denominator_magnitude = std::abs(s.den);
    return r;
}

double functional_V_n(const DiscretePath& path, const FunctionSpec& f,
                      std::span<const double> mu) {
    const long n = path.n();
    Sums s = weighted_sums(path, f, mu);
    require_nondegenerate(s, n);
    double Q = s.den / static_cast<double>(n);
    double G = s.gsum / static_cast<double>(n);
    return G / (Q * Q);
}

double check_stationarity_system(const DiscretePath& path, const FunctionSpec& f,
                                 std::span<const double> mu) {
    const long n = path.n();
    Sums s = weighted_sums(path, f, mu);
    double worst = 0.0;
    const double tiny = std::numeric_limits<double>::epsilon();
    for (long k = 0; k < n; ++k) {
        auto i = static_cast<std::size_t>(k);
        double lhs = path.sigma2[i] * mu[i] * s.den;
        double rhs = f(path.xi[i]) * s.gsum;
        double denom = std::abs(lhs) + std::abs(rhs) + tiny;
        worst = std::max(worst, std::abs(lhs - rhs) / denom);
    }
    return worst;
}

LimitVarianceEstimate limit_variance_optimal(const ModelSpec& model, long r, long n, long reps,
                                             std::uint64_t seed) {
    if (r < 1 || n <= r) throw validation_error("limit_variance_optimal: need 1 <= r < n");
    if (reps < 1) throw validation_error("limit_variance_optimal: reps must be >= 1");
    model.validate();

    const long r_half = std::max<long>(1, r / 2);
    const long n_half = std::max(r + 1, n / 2);

    struct RepSums {
        double full = 0.0, half_r = 0.0, half_n = 0.0;
    };
    std::vector<RepSums> per_rep(static_cast<std::size_t>(reps));

    parallel_for(reps, [&](long rep) {
        DiscretePath path = simulate_discrete(model, n, seed, static_cast<std::uint64_t>(rep));
        KahanSum full, half_r_sum, half_n_sum;
        auto truncated_state = [&](long k, long depth) {
            // x^depth_k from the last `depth` realized shocks, zero start.
            return compose_f_r(model, 0.0,
                               std::span<const double>(path.eps).subspan(
                                   static_cast<std::size_t>(k - depth), static_cast<std::size_t>(depth)));
        };
        for (long k = r; k < n; ++k) {
            double xr = truncated_state(k, r);
            double s2 = conditional_variance(model.noise, k + 1, xr);
            if (!(s2 > 0.0)) continue;
            double fx = model.f(xr);
            double term = fx * fx / s2;
            full.add(term);
            if (k < n_half) half_n_sum.add(term);
        }
        for (long k = r_half; k < n; ++k) {
            double xr = truncated_state(k, r_half);
            double s2 = conditional_variance(model.noise, k + 1, xr);
            if (!(s2 > 0.0)) continue;
            double fx = model.f(xr);
            half_r_sum.add(fx * fx / s2);
        }
        per_rep[static_cast<std::size_t>(rep)] = {full.value() / static_cast<double>(n),
                                                  half_r_sum.value() / static_cast<double>(n),
                                                  half_n_sum.value() / static_cast<double>(n_half)};
    });

    KahanSum q_full, q_half_r, q_half_n;
    for (const auto& s : per_rep) {
        q_full.add(s.full);
        q_half_r.add(s.half_r);
        q_half_n.add(s.half_n);
    }
    double qf = q_full.value() / static_cast<double>(reps);
    double qhr = q_half_r.value() / static_cast<double>(reps);
    double qhn = q_half_n.value() / static_cast<double>(reps);
    if (!(qf > 0.0)) throw degenerate_error("limit_variance_optimal: all f(xi^r) values vanish");

    LimitVarianceEstimate out;
    out.value = 1.0 / qf;
    out.value_half_r = qhr > 0.0 ? 1.0 / qhr : std::numeric_limits<double>::quiet_NaN();
    out.value_half_n = qhn > 0.0 ? 1.0 / qhn : std::numeric_limits<double>::quiet_NaN();
    out.r = r;
    out.n = n;
    out.reps = reps;
    return out;
}

}  // namespace semilin
