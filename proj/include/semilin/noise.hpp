#pragma once

#include <string>
#include <vector>

#include "semilin/functions.hpp"
#include "semilin/rng.hpp"

namespace semilin {

enum class GammaKind { Uniform, TruncNormal, TwoPoint };

// Bounded zero-mean shock with unit variance. Per-step scaling to the
// variance schedule happens in NoiseSpec.
struct GammaDist {
    GammaKind kind = GammaKind::Uniform;
    // TruncNormal: truncation half-width in standard-normal units before
    // rescaling back to unit variance. Symmetric truncation keeps the mean
    // exactly zero.
    double trunc = 6.0;

    // Sure bound on |draw|.
    double bound() const;
    double sample(Philox& gen) const;
    void validate() const;
    std::string kind_name() const;
};

GammaKind gamma_kind_from_name(const std::string& name);

enum class NoiseKind { IidBounded, Heteroscedastic };

// Shock model: eps_k = gamma_k               (iid-bounded)
//              eps_k = gamma_k * (b0 + b(xi_{k-1}))  (heteroscedastic)
// gamma_k has mean 0, variance varsigma2_at(k), and |gamma_k| <= c2().
struct NoiseSpec {
    NoiseKind kind = NoiseKind::IidBounded;
    GammaDist gamma;
    double varsigma2 = 1.0;
    // Optional per-step schedule, cycled; entry (k-1) % size is varsigma^2_k.
    std::vector<double> varsigma2_schedule;
    FunctionSpec b = FunctionSpec::scaled_tanh(0.0);  // shape part, b(0) = 0
    double b0 = 1.0;                                  // additive offset

    double varsigma2_at(long k) const;
    double varsigma2_max() const;
    double c2() const { return gamma.bound() * std::sqrt(varsigma2_max()); }

    double b_total(double x) const { return b0 + b(x); }

    // Section-4 contraction diagnostic f_C + C2*C3 < 1 for |a| <= 1. Some
    // useful heteroscedastic setups violate it yet simulate stably, so it
    // is reported, not enforced.
    bool satisfies_strict_contraction(double f_lipschitz) const;

    void validate() const;
    std::string kind_name() const;
};

NoiseKind noise_kind_from_name(const std::string& name);

}  // namespace semilin
