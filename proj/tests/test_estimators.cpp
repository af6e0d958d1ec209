#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "semilin/errors.hpp"
#include "semilin/estimators.hpp"
#include "semilin/kahan.hpp"
#include "semilin/parallel.hpp"

using namespace semilin;

namespace {

ModelSpec ar1(double a, double varsigma2 = 1.0) {
    ModelSpec m;
    m.a = a;
    m.f = FunctionSpec::linear(1.0);
    m.noise.kind = NoiseKind::IidBounded;
    m.noise.gamma.kind = GammaKind::Uniform;
    m.noise.varsigma2 = varsigma2;
    return m;
}

// The heteroscedastic example model: two-point gamma, b = 1 + c3 tanh(x).
ModelSpec hetero(double a, double f_scale, double b_scale) {
    ModelSpec m;
    m.a = a;
    m.f = FunctionSpec::scaled_tanh(f_scale);
    m.noise.kind = NoiseKind::Heteroscedastic;
    m.noise.gamma.kind = GammaKind::Uniform;
    m.noise.varsigma2 = 1.0;
    m.noise.b = FunctionSpec::scaled_tanh(b_scale);
    m.noise.b0 = 1.0;
    return m;
}

DiscretePath manual_path(std::vector<double> xi, std::vector<double> sigma2) {
    DiscretePath p;
    p.xi = std::move(xi);
    p.eps.assign(p.xi.size() - 1, 0.0);
    p.sigma2 = std::move(sigma2);
    return p;
}

}  // namespace

TEST_CASE("LSE weights are f at the states") {
    auto m = ar1(0.5);
    auto path = manual_path({1.0, 0.5, 0.25, 0.125}, {1.0, 1.0, 1.0});
    auto mu = weights_for(WeightScheme::lse(), m, path);
    REQUIRE(mu.size() == 3);
    CHECK(mu[0] == 1.0);
    CHECK(mu[1] == 0.5);
    CHECK(mu[2] == 0.25);
}

TEST_CASE("optimal weights divide by sigma^2_{k+1}") {
    auto m = ar1(0.5, 2.0);
    auto path = manual_path({1.0, 0.5, 0.25, 0.125}, {2.0, 2.0, 2.0});
    auto mu = weights_for(WeightScheme::optimal(), m, path);
    CHECK(mu[0] == doctest::Approx(0.5));
    CHECK(mu[1] == doctest::Approx(0.25));
    CHECK(mu[2] == doctest::Approx(0.125));

    // heteroscedastic: sigma^2_{k+1} = (1 + 0.5 xi_k)^2 with linear b
    ModelSpec hm;
    hm.a = 0.4;
    hm.f = FunctionSpec::scaled_tanh(1.0);
    hm.noise.kind = NoiseKind::Heteroscedastic;
    hm.noise.b = FunctionSpec::linear(0.5);
    hm.noise.b0 = 1.0;
    auto hp = simulate_discrete(hm, 5, 3);
    hp.xi[2] = 2.0;
    hp.sigma2[2] = conditional_variance(hm.noise, 3, hp.xi[2]);
    auto hmu = weights_for(WeightScheme::optimal(), hm, hp);
    CHECK(hmu[2] == doctest::Approx(hm.f(2.0) / 4.0));
}

TEST_CASE("optimal weights reject vanishing variance naming the index") {
    auto m = ar1(0.5);
    auto path = manual_path({1.0, 0.5, 0.25, 0.125}, {1.0, 0.0, 1.0});
    try {
        weights_for(WeightScheme::optimal(), m, path);
        FAIL("expected validation_error");
    } catch (const validation_error& e) {
        CHECK(std::string(e.what()).find("k = 1") != std::string::npos);
    }
}

TEST_CASE("noiseless path recovers a exactly, zero path gives zero") {
    auto m = ar1(0.5);
    auto path = manual_path({1.0, 0.5, 0.25, 0.125}, {1.0, 1.0, 1.0});
    auto mu = weights_for(WeightScheme::lse(), m, path);
    auto r = estimate_discrete(path, m.f, mu);
    CHECK(r.a_hat == 0.5);
    CHECK(r.n == 3);

    auto zero = manual_path({1.0, 0.0, 0.0, 0.0}, {1.0, 1.0, 1.0});
    auto mu0 = weights_for(WeightScheme::lse(), m, zero);
    CHECK(estimate_discrete(zero, m.f, mu0).a_hat == 0.0);
}

TEST_CASE("AR(1) estimate lands near a at n = 1e4") {
    auto m = ar1(0.5);
    auto path = simulate_discrete(m, 10000, 7);
    auto mu = weights_for(WeightScheme::lse(), m, path);
    auto r = estimate_discrete(path, m.f, mu);
    CHECK(std::abs(r.a_hat - 0.5) <= 0.03);
}

TEST_CASE("V_n arithmetic on the geometric toy path") {
    auto m = ar1(0.5);
    auto path = manual_path({1.0, 0.5, 0.25, 0.125}, {1.0, 1.0, 1.0});
    auto mu = weights_for(WeightScheme::lse(), m, path);
    double v = functional_V_n(path, m.f, mu);
    CHECK(v == doctest::Approx(3.0 / 1.3125));
    auto r = estimate_discrete(path, m.f, mu);
    CHECK(r.V_n == doctest::Approx(r.G_n / (r.Q_n * r.Q_n)));
    CHECK(r.G_n >= 0.0);
}

TEST_CASE("V_n and a_hat are scale invariant in the weights") {
    auto m = hetero(0.4, 0.35, 0.6);
    auto path = simulate_discrete(m, 2000, 17);
    auto mu = weights_for(WeightScheme::lse(), m, path);
    auto base = estimate_discrete(path, m.f, mu);
    double v_base = functional_V_n(path, m.f, mu);
    for (double c : {-2.0, 0.1, 7.0}) {
        std::vector<double> scaled(mu);
        for (double& w : scaled) w *= c;
        auto r = estimate_discrete(path, m.f, scaled);
        CHECK(r.a_hat == doctest::Approx(base.a_hat).epsilon(1e-12));
        CHECK(functional_V_n(path, m.f, scaled) == doctest::Approx(v_base).epsilon(1e-12));
    }
}

TEST_CASE("degenerate denominator raises") {
    auto m = ar1(0.5);
    auto path = manual_path({0.0, 0.0, 0.0}, {1.0, 1.0});
    auto mu = weights_for(WeightScheme::lse(), m, path);
    CHECK_THROWS_AS(estimate_discrete(path, m.f, mu), degenerate_error);
    CHECK_THROWS_AS(functional_V_n(path, m.f, mu), degenerate_error);
}

TEST_CASE("stationarity residual: optimal tiny, LSE tiny iff homoscedastic") {
    auto het = hetero(0.4, 0.35, 0.6);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto path = simulate_discrete(het, 1000, seed);
        auto opt = weights_for(WeightScheme::optimal(), het, path);
        CHECK(check_stationarity_system(path, het.f, opt) <= 1e-10);
    }
    // constant sigma^2: LSE is already optimal
    auto homo = ar1(0.5, 2.0);
    auto hp = simulate_discrete(homo, 1000, 3);
    auto lse = weights_for(WeightScheme::lse(), homo, hp);
    CHECK(check_stationarity_system(hp, homo.f, lse) <= 1e-10);
    // strongly heteroscedastic: LSE fails the optimality condition
    auto strong = hetero(0.4, 0.35, 0.9);
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        auto path = simulate_discrete(strong, 1000, seed);
        auto mu = weights_for(WeightScheme::lse(), strong, path);
        CHECK(check_stationarity_system(path, strong.f, mu) > 1e-3);
    }
}

TEST_CASE("optimal weights minimize V_n pathwise") {
    auto m = hetero(0.4, 0.35, 0.6);
    Philox gen(555, 0);
    std::vector<WeightScheme> rivals;
    rivals.push_back(WeightScheme::lse());
    for (int i = 0; i < 20; ++i) {
        double s = 0.2 + 1.5 * gen.uniform01();
        switch (i % 4) {
            case 0: rivals.push_back(WeightScheme::custom(FunctionSpec::linear(s))); break;
            case 1: rivals.push_back(WeightScheme::custom(FunctionSpec::scaled_tanh(s))); break;
            case 2: rivals.push_back(WeightScheme::custom(FunctionSpec::scaled_sine(s))); break;
            default: rivals.push_back(WeightScheme::custom(FunctionSpec::saturating_ramp(s))); break;
        }
    }
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        auto path = simulate_discrete(m, 500, 1000 + seed);
        auto opt_mu = weights_for(WeightScheme::optimal(), m, path);
        double v_opt = functional_V_n(path, m.f, opt_mu);
        for (const auto& rival : rivals) {
            auto mu = weights_for(rival, m, path);
            double v;
            try {
                v = functional_V_n(path, m.f, mu);
            } catch (const degenerate_error&) {
                continue;
            }
            CHECK(v_opt <= v * (1.0 + 1e-10));
        }
    }
}

TEST_CASE("martingale orthogonality across replicates") {
    auto m = hetero(0.4, 0.35, 0.6);
    const long reps = 10000, n = 200;
    for (auto scheme : {WeightScheme::lse(), WeightScheme::optimal()}) {
        std::vector<double> vals(static_cast<std::size_t>(reps));
        parallel_for(reps, [&](long rep) {
            auto path = simulate_discrete(m, n, 31, static_cast<std::uint64_t>(rep));
            auto mu = weights_for(scheme, m, path);
            KahanSum s;
            for (long k = 0; k < n; ++k)
                s.add((path.xi[static_cast<std::size_t>(k + 1)] -
                       m.a * m.f(path.xi[static_cast<std::size_t>(k)])) *
                      mu[static_cast<std::size_t>(k)]);
            vals[static_cast<std::size_t>(rep)] = s.value() / static_cast<double>(n);
        });
        KahanSum sum, sq;
        for (double v : vals) sum.add(v);
        double mean = sum.value() / reps;
        for (double v : vals) sq.add((v - mean) * (v - mean));
        double se = std::sqrt(sq.value() / (reps - 1.0) / reps);
        CHECK(std::abs(mean) <= 4.0 * se);
    }
}

TEST_CASE("deviation variance scales as 1/n") {
    auto m = ar1(0.5);
    const long reps = 3000;
    auto dev_var = [&](long n) {
        std::vector<double> devs(static_cast<std::size_t>(reps));
        parallel_for(reps, [&](long rep) {
            auto path = simulate_discrete(m, n, 77, static_cast<std::uint64_t>(rep));
            auto mu = weights_for(WeightScheme::lse(), m, path);
            devs[static_cast<std::size_t>(rep)] = estimate_discrete(path, m.f, mu).a_hat - m.a;
        });
        KahanSum sum, sq;
        for (double d : devs) sum.add(d);
        double mean = sum.value() / reps;
        for (double d : devs) sq.add((d - mean) * (d - mean));
        return sq.value() / (reps - 1.0);
    };
    double ratio = dev_var(2500) / dev_var(10000);
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.3);
}

TEST_CASE("V_n concentrates as n grows") {
    auto m = hetero(0.4, 0.35, 0.6);
    const long reps = 400;
    auto iqr = [&](long n) {
        std::vector<double> vns(static_cast<std::size_t>(reps));
        parallel_for(reps, [&](long rep) {
            auto path = simulate_discrete(m, n, 13, static_cast<std::uint64_t>(rep));
            auto mu = weights_for(WeightScheme::lse(), m, path);
            vns[static_cast<std::size_t>(rep)] = functional_V_n(path, m.f, mu);
        });
        std::sort(vns.begin(), vns.end());
        return vns[static_cast<std::size_t>(reps * 3 / 4)] -
               vns[static_cast<std::size_t>(reps / 4)];
    };
    CHECK(iqr(10000) < iqr(1000));
}

TEST_CASE("limit variance: independence case gives 1") {
    auto m = ar1(0.0);
    auto est = limit_variance_optimal(m, 1, 4000, 50, 5);
    CHECK(est.value == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("limit variance: AR(1) closed form 1 - a^2") {
    auto m = ar1(0.5);
    auto est = limit_variance_optimal(m, 30, 20000, 60, 5);
    CHECK(est.value == doctest::Approx(0.75).epsilon(0.02));
    // diagnostics expose the truncation direction: fewer shocks -> smaller
    // second moment -> larger reciprocal
    CHECK(est.value_half_r >= est.value - 1e-3);
}

TEST_CASE("custom scheme requires certified Lipschitz h") {
    auto h = FunctionSpec::linear(1.0);
    h.lipschitz = 0.1;  // understated
    auto scheme = WeightScheme::custom(h);
    CHECK_THROWS_AS(scheme.validate(), validation_error);
}
