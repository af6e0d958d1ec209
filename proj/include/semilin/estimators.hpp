#pragma once

#include <span>
#include <string>
#include <vector>

#include "semilin/model.hpp"

namespace semilin {

enum class SchemeKind { LSE, Optimal, Custom };

// Weight family mu_k = h_k(xi_k). LSE takes h = f; Optimal takes
// h_k(x) = f(x) / sigma^2_{k+1} which minimizes the variance functional;
// Custom supplies any certified Lipschitz h.
struct WeightScheme {
    SchemeKind kind = SchemeKind::LSE;
    FunctionSpec custom_h = FunctionSpec::linear(1.0);
    std::string label;

    static WeightScheme lse() { return {SchemeKind::LSE, FunctionSpec::linear(1.0), "lse"}; }
    static WeightScheme optimal() {
        return {SchemeKind::Optimal, FunctionSpec::linear(1.0), "optimal"};
    }
    static WeightScheme custom(FunctionSpec h, std::string label = "custom") {
        return {SchemeKind::Custom, std::move(h), std::move(label)};
    }

    std::string name() const;
    void validate() const;
};

struct EstimateResult {
    double a_hat = 0.0;
    double Q_n = 0.0;
    double G_n = 0.0;
    double V_n = 0.0;
    long n = 0;
    double denominator_magnitude = 0.0;
};

// mu_0 .. mu_{n-1}. Optimal requires sigma^2_{k+1} > 0 for every k.
std::vector<double> weights_for(const WeightScheme& scheme, const ModelSpec& model,
                                const DiscretePath& path);

// Weighted estimate per the ratio of weighted sums, plus the normalized
// sums Q_n, G_n and the ratio functional V_n = G_n / Q_n^2.
EstimateResult estimate_discrete(const DiscretePath& path, const FunctionSpec& f,
                                 std::span<const double> mu);

double functional_V_n(const DiscretePath& path, const FunctionSpec& f, std::span<const double> mu);

// Max relative residual of the stationarity system
//   sigma^2_{k+1} mu_k * sum_i f(xi_i) mu_i = f(xi_k) * sum_i sigma^2_{i+1} mu_i^2.
// ~1e-15 for optimal weights, O(1) for generic ones.
double check_stationarity_system(const DiscretePath& path, const FunctionSpec& f,
                                 std::span<const double> mu);

struct LimitVarianceEstimate {
    double value = 0.0;        // at (r, n)
    double value_half_r = 0.0; // at (r/2, n)   convergence diagnostics
    double value_half_n = 0.0; // at (r, n/2)
    long r = 0, n = 0, reps = 0;
};

// Limit variance of the optimally weighted estimator: reciprocal of the
// replicate average of (1/n) sum_{k=r}^{n-1} f(xi^r_k)^2 / sigma^2_{k+1},
// with xi^r_k the r-shock truncated state.
LimitVarianceEstimate limit_variance_optimal(const ModelSpec& model, long r, long n, long reps,
                                             std::uint64_t seed);

// Relative tolerance below which the estimator denominator counts as
// degenerate: |sum f(xi_k) mu_k| < 1e-12 * n * max_k |f(xi_k) mu_k|.
inline constexpr double kDenomRelTol = 1e-12;

}  // namespace semilin
