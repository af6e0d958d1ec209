#include "semilin/noise.hpp"

#include <cmath>

#include "semilin/errors.hpp"

namespace semilin {

namespace {

// Variance of a standard normal truncated to [-c, c].
double truncated_variance(double c) {
    double phi = std::exp(-0.5 * c * c) / std::sqrt(2.0 * M_PI);
    double mass = std::erf(c / std::sqrt(2.0));
    return 1.0 - 2.0 * c * phi / mass;
}

}  // namespace

double GammaDist::bound() const {
    switch (kind) {
        case GammaKind::Uniform: return std::sqrt(3.0);
        case GammaKind::TruncNormal: return trunc / std::sqrt(truncated_variance(trunc));
        case GammaKind::TwoPoint: return 1.0;
    }
    return 0.0;
}

double GammaDist::sample(Philox& gen) const {
    switch (kind) {
        case GammaKind::Uniform:
            return std::sqrt(3.0) * gen.uniform_sym();
        case GammaKind::TruncNormal: {
            double z;
            do {
                z = gen.normal();
            } while (std::abs(z) > trunc);
            return z / std::sqrt(truncated_variance(trunc));
        }
        case GammaKind::TwoPoint:
            return gen.uniform01() < 0.5 ? -1.0 : 1.0;
    }
    return 0.0;
}

void GammaDist::validate() const {
    if (kind == GammaKind::TruncNormal && !(trunc > 0.1))
        throw validation_error("truncated-normal: truncation half-width must exceed 0.1");
}

std::string GammaDist::kind_name() const {
    switch (kind) {
        case GammaKind::Uniform: return "uniform";
        case GammaKind::TruncNormal: return "truncated-normal";
        case GammaKind::TwoPoint: return "two-point";
    }
    return "?";
}

GammaKind gamma_kind_from_name(const std::string& name) {
    if (name == "uniform") return GammaKind::Uniform;
    if (name == "truncated-normal") return GammaKind::TruncNormal;
    if (name == "two-point") return GammaKind::TwoPoint;
    throw validation_error("unknown gamma distribution kind: " + name);
}

double NoiseSpec::varsigma2_at(long k) const {
    if (varsigma2_schedule.empty()) return varsigma2;
    return varsigma2_schedule[static_cast<std::size_t>((k - 1) % static_cast<long>(varsigma2_schedule.size()))];
}

double NoiseSpec::varsigma2_max() const {
    if (varsigma2_schedule.empty()) return varsigma2;
    double m = 0.0;
    for (double v : varsigma2_schedule) m = std::max(m, v);
    return m;
}

bool NoiseSpec::satisfies_strict_contraction(double f_lipschitz) const {
    if (kind != NoiseKind::Heteroscedastic) return true;
    return f_lipschitz + c2() * b.lipschitz < 1.0;
}

void NoiseSpec::validate() const {
    gamma.validate();
    if (varsigma2_schedule.empty()) {
        if (!(varsigma2 >= 0.0)) throw validation_error("varsigma2 must be nonnegative");
    } else {
        for (double v : varsigma2_schedule)
            if (!(v >= 0.0)) throw validation_error("varsigma2 schedule entries must be nonnegative");
    }
    if (kind == NoiseKind::Heteroscedastic) {
        b.validate();
        if (b0 < 0.0) throw validation_error("b0 offset must be nonnegative");
    }
}

std::string NoiseSpec::kind_name() const {
    return kind == NoiseKind::IidBounded ? "iid-bounded" : "heteroscedastic";
}

NoiseKind noise_kind_from_name(const std::string& name) {
    if (name == "iid-bounded") return NoiseKind::IidBounded;
    if (name == "heteroscedastic") return NoiseKind::Heteroscedastic;
    throw validation_error("unknown noise kind: " + name);
}

}  // namespace semilin
