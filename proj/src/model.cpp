#include "semilin/model.hpp"

#include <cmath>
#include <string>

#include "semilin/errors.hpp"
#include "semilin/rng.hpp"

namespace semilin {

void ModelSpec::validate() const {
    f.validate();
    noise.validate();
    if (!(std::abs(a) * f.lipschitz < 1.0))
        throw validation_error("contraction condition |a|*C < 1 violated: |a|*C = " +
                               std::to_string(std::abs(a) * f.lipschitz));
    if (xi0_halfwidth < 0.0) throw validation_error("xi0 halfwidth must be nonnegative");
}

double conditional_variance(const NoiseSpec& noise, long k, double xi_prev) {
    if (k < 1) throw validation_error("conditional_variance: index must be >= 1");
    double v = noise.varsigma2_at(k);
    if (noise.kind == NoiseKind::IidBounded) return v;
    double bt = noise.b_total(xi_prev);
    return v * bt * bt;
}

DiscretePath simulate_discrete(const ModelSpec& model, long n, std::uint64_t seed,
                               std::uint64_t stream) {
    if (n < 1) throw validation_error("simulate_discrete: n must be >= 1");
    model.validate();

    Philox gen(seed, stream);
    DiscretePath path;
    path.seed = seed;
    path.xi.resize(static_cast<std::size_t>(n) + 1);
    path.eps.resize(static_cast<std::size_t>(n));
    path.sigma2.resize(static_cast<std::size_t>(n));

    double x = model.xi0;
    if (model.xi0_halfwidth > 0.0) x += model.xi0_halfwidth * gen.uniform_sym();
    path.xi[0] = x;

    const bool hetero = model.noise.kind == NoiseKind::Heteroscedastic;
    for (long k = 1; k <= n; ++k) {
        double vs = model.noise.varsigma2_at(k);
        double g = std::sqrt(vs) * model.noise.gamma.sample(gen);
        double eps, s2;
        if (hetero) {
            double bt = model.noise.b_total(x);
            eps = g * bt;
            s2 = vs * bt * bt;
        } else {
            eps = g;
            s2 = vs;
        }
        x = model.a * model.f(x) + eps;
        path.xi[static_cast<std::size_t>(k)] = x;
        path.eps[static_cast<std::size_t>(k - 1)] = eps;
        path.sigma2[static_cast<std::size_t>(k - 1)] = s2;
    }
    return path;
}

double compose_f_r(const ModelSpec& model, double x0, std::span<const double> shocks) {
    double x = x0;
    for (double s : shocks) x = model.a * model.f(x) + s;
    return x;
}

}  // namespace semilin
