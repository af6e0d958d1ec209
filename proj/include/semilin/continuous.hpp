#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "semilin/estimators.hpp"
#include "semilin/functions.hpp"

namespace semilin {

// Quadratic-characteristic density mdot(t) = base + amp * sin(freq * t).
// Must stay bounded below by q > 0 except for the noiseless diagnostic
// case base = amp = 0.
struct MdotSpec {
    double base = 1.0;
    double amp = 0.0;
    double freq = 1.0;

    double operator()(double t) const;
    double lower_bound() const;
    bool is_zero() const { return base == 0.0 && amp == 0.0; }
    void validate() const;
};

// dxi = -a f(xi) dt + sqrt(mdot dt) * shock, Euler-Maruyama on a uniform
// grid. Shocks are bounded-support normalized normals, so the driving
// noise is a square integrable martingale with density mdot.
struct ContinuousModelSpec {
    double a = 1.0;
    FunctionSpec f = FunctionSpec::linear(1.0);
    MdotSpec mdot;
    double xi0 = 0.0;

    void validate() const;
};

struct ContinuousPath {
    double dt = 0.0;
    double T = 0.0;
    std::vector<double> xi;         // grid values, size steps + 1
    std::vector<double> dxi;        // per-step increments, size steps
    std::vector<double> mdot_vals;  // mdot(t_j), size steps
    std::uint64_t seed = 0;

    long steps() const { return static_cast<long>(dxi.size()); }
};

ContinuousPath simulate_continuous(const ContinuousModelSpec& model, double T, double dt,
                                   std::uint64_t seed, std::uint64_t stream = 0);

using WeightFnCt = std::function<double(double t, double x)>;

// Predictable (left-endpoint) weight constructors.
WeightFnCt ct_weight_lse(const FunctionSpec& f);
WeightFnCt ct_weight_optimal(const FunctionSpec& f, const MdotSpec& mdot);

// a_hat = -(sum h dxi) / (sum f h dt), left-endpoint sums throughout.
EstimateResult estimate_continuous(const ContinuousPath& path, const FunctionSpec& f,
                                   const WeightFnCt& h);

double functional_V_T(const ContinuousPath& path, const FunctionSpec& f, const WeightFnCt& h);

// Relative residual of
//   (int h g dm)(int f h dt) = (int f g dt)(int h^2 dm)
// evaluated with left-endpoint sums; ~1e-15 for h = f/mdot.
double check_stationarity_continuous(const ContinuousPath& path, const FunctionSpec& f,
                                     const WeightFnCt& h, const WeightFnCt& g);

}  // namespace semilin
