#pragma once

#include <string>
#include <vector>

namespace semilin {

enum class FnKind { Linear, ScaledSine, ScaledTanh, SaturatingRamp, CustomTable };

// A scalar function vanishing at the origin with a certified Lipschitz
// constant. The registry kinds carry analytic constants; custom tables
// get theirs from the maximal segment slope.
struct FunctionSpec {
    FnKind kind = FnKind::Linear;
    double scale = 1.0;
    double lipschitz = 1.0;
    // CustomTable: strictly increasing knots, piecewise linear between them,
    // evaluation outside [knots_x.front(), knots_x.back()] is a domain error.
    std::vector<double> knots_x;
    std::vector<double> knots_y;

    static FunctionSpec linear(double scale = 1.0);
    static FunctionSpec scaled_sine(double scale = 1.0);
    static FunctionSpec scaled_tanh(double scale = 1.0);
    static FunctionSpec saturating_ramp(double scale = 1.0);
    static FunctionSpec custom_table(std::vector<double> xs, std::vector<double> ys);

    double operator()(double x) const;

    // Checks value-at-zero and the Lipschitz bound on a grid of >= 1000
    // point pairs over [-50, 50] (table domain for CustomTable).
    void validate() const;

    std::string kind_name() const;
};

double eval_f(const FunctionSpec& spec, double x);

FnKind fn_kind_from_name(const std::string& name);

}  // namespace semilin
