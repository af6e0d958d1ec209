#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "semilin/functions.hpp"
#include "semilin/noise.hpp"

namespace semilin {

// Recursion xi_k = a * f(xi_{k-1}) + eps_k with the contraction condition
// |a| * Lip(f) < 1 enforced at validation.
struct ModelSpec {
    double a = 0.5;
    FunctionSpec f = FunctionSpec::linear(1.0);
    NoiseSpec noise;
    double xi0 = 0.0;
    // > 0: xi_0 drawn uniformly from [xi0 - halfwidth, xi0 + halfwidth].
    double xi0_halfwidth = 0.0;

    void validate() const;
};

struct DiscretePath {
    std::vector<double> xi;      // xi_0 .. xi_n
    std::vector<double> eps;     // eps[k-1] = eps_k, k = 1..n
    std::vector<double> sigma2;  // sigma2[k-1] = sigma^2_k = E[eps_k^2 | F_{k-1}]
    std::uint64_t seed = 0;

    // Ingested external series carry no shocks, so n comes from xi.
    long n() const { return static_cast<long>(xi.size()) - 1; }
};

DiscretePath simulate_discrete(const ModelSpec& model, long n, std::uint64_t seed,
                               std::uint64_t stream = 0);

// sigma^2_k as a function of xi_{k-1}; k only matters through the variance
// schedule.
double conditional_variance(const NoiseSpec& noise, long k, double xi_prev);

// Truncated recursion: x <- a f(x) + shock, started from x0. With the true
// shocks this reproduces the path state exactly; with x0 = 0 it is the
// r-shock truncated state.
double compose_f_r(const ModelSpec& model, double x0, std::span<const double> shocks);

}  // namespace semilin
