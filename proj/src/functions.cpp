#include "semilin/functions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "semilin/errors.hpp"

namespace semilin {

FunctionSpec FunctionSpec::linear(double scale) {
    return {FnKind::Linear, scale, std::abs(scale), {}, {}};
}

FunctionSpec FunctionSpec::scaled_sine(double scale) {
    return {FnKind::ScaledSine, scale, std::abs(scale), {}, {}};
}

FunctionSpec FunctionSpec::scaled_tanh(double scale) {
    return {FnKind::ScaledTanh, scale, std::abs(scale), {}, {}};
}

FunctionSpec FunctionSpec::saturating_ramp(double scale) {
    return {FnKind::SaturatingRamp, scale, std::abs(scale), {}, {}};
}

FunctionSpec FunctionSpec::custom_table(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2)
        throw validation_error("custom-table: need >= 2 knots with matching x/y sizes");
    double slope_max = 0.0;
    for (std::size_t i = 1; i < xs.size(); ++i) {
        if (!(xs[i] > xs[i - 1]))
            throw validation_error("custom-table: knot abscissae must be strictly increasing");
        slope_max = std::max(slope_max, std::abs((ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1])));
    }
    FunctionSpec spec{FnKind::CustomTable, 1.0, slope_max, std::move(xs), std::move(ys)};
    return spec;
}

double FunctionSpec::operator()(double x) const {
    switch (kind) {
        case FnKind::Linear:
            return scale * x;
        case FnKind::ScaledSine:
            return scale * std::sin(x);
        case FnKind::ScaledTanh:
            return scale * std::tanh(x);
        case FnKind::SaturatingRamp:
            return scale * std::clamp(x, -1.0, 1.0);
        case FnKind::CustomTable: {
            if (x < knots_x.front() || x > knots_x.back())
                throw std::domain_error("custom-table: x outside table domain");
            auto it = std::upper_bound(knots_x.begin(), knots_x.end(), x);
            std::size_t i = (it == knots_x.end()) ? knots_x.size() - 1
                                                  : static_cast<std::size_t>(it - knots_x.begin());
            if (i == 0) i = 1;
            double t = (x - knots_x[i - 1]) / (knots_x[i] - knots_x[i - 1]);
            return knots_y[i - 1] + t * (knots_y[i] - knots_y[i - 1]);
        }
    }
    throw std::logic_error("unreachable function kind");
}

double eval_f(const FunctionSpec& spec, double x) { return spec(x); }

void FunctionSpec::validate() const {
    double lo = -50.0, hi = 50.0;
    if (kind == FnKind::CustomTable) {
        lo = knots_x.front();
        hi = knots_x.back();
        if (lo > 0.0 || hi < 0.0)
            throw validation_error("custom-table: domain must contain the origin");
    }
    if (std::abs((*this)(0.0)) > 1e-12)
        throw validation_error("function does not vanish at the origin");
    if (!(lipschitz > 0.0))
        throw validation_error("lipschitz constant must be positive");

    // 1201 grid points -> 1200 consecutive pairs plus strided ones.
    const int npts = 1201;
    std::vector<double> val(npts);
    std::vector<double> pts(npts);
    for (int i = 0; i < npts; ++i) {
        pts[i] = lo + (hi - lo) * static_cast<double>(i) / (npts - 1);
        val[i] = (*this)(pts[i]);
    }
    auto check_pair = [&](int i, int j) {
        double lhs = std::abs(val[i] - val[j]);
        double rhs = lipschitz * std::abs(pts[i] - pts[j]);
        if (lhs > rhs * (1.0 + 1e-8) + 1e-12)
            throw validation_error("Lipschitz certification failed for " + kind_name());
    };
    for (int i = 1; i < npts; ++i) check_pair(i - 1, i);
    for (int i = 7; i < npts; ++i) check_pair(i - 7, i);
}

std::string FunctionSpec::kind_name() const {
    switch (kind) {
        case FnKind::Linear: return "linear";
        case FnKind::ScaledSine: return "scaled-sine";
        case FnKind::ScaledTanh: return "scaled-tanh";
        case FnKind::SaturatingRamp: return "saturating-ramp";
        case FnKind::CustomTable: return "custom-table";
    }
    return "?";
}

FnKind fn_kind_from_name(const std::string& name) {
    if (name == "linear") return FnKind::Linear;
    if (name == "scaled-sine") return FnKind::ScaledSine;
    if (name == "scaled-tanh") return FnKind::ScaledTanh;
    if (name == "saturating-ramp") return FnKind::SaturatingRamp;
    if (name == "custom-table") return FnKind::CustomTable;
    throw validation_error("unknown function kind: " + name);
}

}  // namespace semilin
