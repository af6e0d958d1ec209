#include "semilin/continuous.hpp"

#include <cmath>
#include <limits>

#include "semilin/errors.hpp"
#include "semilin/kahan.hpp"
#include "semilin/rng.hpp"

namespace semilin {

double MdotSpec::operator()(double t) const { return base + amp * std::sin(freq * t); }

double MdotSpec::lower_bound() const { return base - std::abs(amp); }

void MdotSpec::validate() const {
    if (is_zero()) return;  // noiseless diagnostic
    if (!(lower_bound() > 0.0))
        throw validation_error("mdot must be bounded below by q > 0 (or identically zero)");
}

void ContinuousModelSpec::validate() const {
    f.validate();
    mdot.validate();
}

namespace {

// Standard normal truncated to +-6 sigma, rescaled to exact unit variance.
// Bounded support keeps the discretized driver a bona fide square
// integrable martingale while staying indistinguishable from Gaussian for
// every statistic at desk scale.
double bounded_normal(Philox& gen) {
    constexpr double c = 6.0;
    // variance of N(0,1) truncated to [-6, 6]
    static const double tv = [] {
        const double w = 6.0;
        double phi = std::exp(-0.5 * w * w) / std::sqrt(2.0 * M_PI);
        double mass = std::erf(w / std::sqrt(2.0));
        return 1.0 - 2.0 * w * phi / mass;
    }();
    double z;
    do {
        z = gen.normal();
    } while (std::abs(z) > c);
    return z / std::sqrt(tv);
}

}  // namespace

ContinuousPath simulate_continuous(const ContinuousModelSpec& model, double T, double dt,
                                   std::uint64_t seed, std::uint64_t stream) {
    model.validate();
    if (!(dt > 0.0) || !(dt <= T)) throw validation_error("need 0 < dt <= T");
    const double steps_d = T / dt;
    if (steps_d > 1e8) throw validation_error("T/dt exceeds 1e8 steps");
    const long steps = static_cast<long>(std::llround(steps_d));

    Philox gen(seed, stream);
    ContinuousPath path;
    path.dt = dt;
    path.T = T;
    path.seed = seed;
    path.xi.resize(static_cast<std::size_t>(steps) + 1);
    path.dxi.resize(static_cast<std::size_t>(steps));
    path.mdot_vals.resize(static_cast<std::size_t>(steps));

    double x = model.xi0;
    path.xi[0] = x;
    const bool noiseless = model.mdot.is_zero();
    for (long j = 0; j < steps; ++j) {
        double t = static_cast<double>(j) * dt;
        double md = model.mdot(t);
        double dW = noiseless ? 0.0 : std::sqrt(md * dt) * bounded_normal(gen);
        double dx = -model.a * model.f(x) * dt + dW;
        x = x + dx;
        path.xi[static_cast<std::size_t>(j + 1)] = x;
        path.dxi[static_cast<std::size_t>(j)] = dx;
        path.mdot_vals[static_cast<std::size_t>(j)] = md;
    }
    return path;
}

WeightFnCt ct_weight_lse(const FunctionSpec& f) {
    return [f](double, double x) { return f(x); };
}

WeightFnCt ct_weight_optimal(const FunctionSpec& f, const MdotSpec& mdot) {
    if (!(mdot.lower_bound() > 0.0))
        throw validation_error("optimal continuous weight needs mdot >= q > 0");
    return [f, mdot](double t, double x) { return f(x) / mdot(t); };
}

namespace {

struct CtSums {
    double h_dxi;    // sum h dxi
    double fh_dt;    // sum f h dt
    double h2_dm;    // sum h^2 mdot dt
    double max_term; // max |f h| dt
};

CtSums ct_sums(const ContinuousPath& path, const FunctionSpec& f, const WeightFnCt& h) {
    const long steps = path.steps();
    if (steps < 1) throw validation_error("continuous path has no steps");
    KahanSum s_hdxi, s_fhdt, s_h2dm;
    double max_term = 0.0;
    for (long j = 0; j < steps; ++j) {
        auto i = static_cast<std::size_t>(j);
        double t = static_cast<double>(j) * path.dt;
        double x = path.xi[i];
        double hv = h(t, x);
        double fh = f(x) * hv * path.dt;
        s_hdxi.add(hv * path.dxi[i]);
        s_fhdt.add(fh);
        s_h2dm.add(hv * hv * path.mdot_vals[i] * path.dt);
        max_term = std::max(max_term, std::abs(fh));
    }
    return {s_hdxi.value(), s_fhdt.value(), s_h2dm.value(), max_term};
}

void require_nondegenerate_ct(const CtSums& s, long steps) {
    if (std::abs(s.fh_dt) < kDenomRelTol * static_cast<double>(steps) * s.max_term ||
        s.fh_dt == 0.0)
        throw degenerate_error("degenerate continuous denominator");
}

}  // namespace

EstimateResult estimate_continuous(const ContinuousPath& path, const FunctionSpec& f,
                                   const WeightFnCt& h) {
    CtSums s = ct_sums(path, f, h);
    require_nondegenerate_ct(s, path.steps());
    EstimateResult r;
    r.n = path.steps();
    r.a_hat = -s.h_dxi / s.fh_dt;
    r.Q_n = s.fh_dt / path.T;
    r.G_n = s.h2_dm / path.T;
    r.V_n = r.G_n / (r.Q_n * r.Q_n);
    r.denominator_magnitude = std::abs(s.fh_dt);
    return r;
}

double functional_V_T(const ContinuousPath& path, const FunctionSpec& f, const WeightFnCt& h) {
    CtSums s = ct_sums(path, f, h);
    require_nondegenerate_ct(s, path.steps());
    double Q = s.fh_dt / path.T;
    double G = s.h2_dm / path.T;
    return G / (Q * Q);
}

double check_stationarity_continuous(const ContinuousPath& path, const FunctionSpec& f,
                                     const WeightFnCt& h, const WeightFnCt& g) {
    const long steps = path.steps();
    KahanSum hg_dm, fh_dt, fg_dt, h2_dm;
    for (long j = 0; j < steps; ++j) {
        auto i = static_cast<std::size_t>(j);
        double t = static_cast<double>(j) * path.dt;
        double x = path.xi[i];
        double hv = h(t, x);
        double gv = g(t, x);
        double md = path.mdot_vals[i];
        hg_dm.add(hv * gv * md * path.dt);
        fh_dt.add(f(x) * hv * path.dt);
        fg_dt.add(f(x) * gv * path.dt);
        h2_dm.add(hv * hv * md * path.dt);
    }
    double lhs = hg_dm.value() * fh_dt.value();
    double rhs = fg_dt.value() * h2_dm.value();
    double denom = std::abs(lhs) + std::abs(rhs) + std::numeric_limits<double>::epsilon();
    return std::abs(lhs - rhs) / denom;
}

}  // namespace semilin
