// Python bindings for the core operations. Specs come in as plain
// keyword-constructed objects; paths and results go out as attributes.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "semilin/continuous.hpp"
#include "semilin/errors.hpp"
#include "semilin/estimators.hpp"
#include "semilin/experiments.hpp"
#include "semilin/io.hpp"
#include "semilin/model.hpp"

namespace py = pybind11;
using namespace semilin;

PYBIND11_MODULE(_semilin, m) {
    m.doc() = "semi-linear autoregression simulation and weighted estimation";

    py::register_exception<validation_error>(m, "ValidationError", PyExc_ValueError);
    py::register_exception<degenerate_error>(m, "DegenerateError", PyExc_ArithmeticError);

    py::enum_<FnKind>(m, "FnKind")
        .value("LINEAR", FnKind::Linear)
        .value("SCALED_SINE", FnKind::ScaledSine)
        .value("SCALED_TANH", FnKind::ScaledTanh)
        .value("SATURATING_RAMP", FnKind::SaturatingRamp)
        .value("CUSTOM_TABLE", FnKind::CustomTable);

    py::class_<FunctionSpec>(m, "FunctionSpec")
        .def_static("linear", &FunctionSpec::linear, py::arg("scale") = 1.0)
        .def_static("scaled_sine", &FunctionSpec::scaled_sine, py::arg("scale") = 1.0)
        .def_static("scaled_tanh", &FunctionSpec::scaled_tanh, py::arg("scale") = 1.0)
        .def_static("saturating_ramp", &FunctionSpec::saturating_ramp, py::arg("scale") = 1.0)
        .def_static("custom_table", &FunctionSpec::custom_table, py::arg("xs"), py::arg("ys"))
        .def_readonly("lipschitz", &FunctionSpec::lipschitz)
        .def("__call__", &FunctionSpec::operator())
        .def("validate", &FunctionSpec::validate);

    py::enum_<GammaKind>(m, "GammaKind")
        .value("UNIFORM", GammaKind::Uniform)
        .value("TRUNC_NORMAL", GammaKind::TruncNormal)
        .value("TWO_POINT", GammaKind::TwoPoint);

    py::class_<GammaDist>(m, "GammaDist")
        .def(py::init([](GammaKind kind, double trunc) {
                 return GammaDist{kind, trunc};
             }),
             py::arg("kind") = GammaKind::Uniform, py::arg("trunc") = 6.0)
        .def("bound", &GammaDist::bound);

    py::enum_<NoiseKind>(m, "NoiseKind")
        .value("IID_BOUNDED", NoiseKind::IidBounded)
        .value("HETEROSCEDASTIC", NoiseKind::Heteroscedastic);

    py::class_<NoiseSpec>(m, "NoiseSpec")
        .def(py::init([](NoiseKind kind, GammaDist gamma, double varsigma2,
                         std::vector<double> schedule, FunctionSpec b, double b0) {
                 return NoiseSpec{kind, gamma, varsigma2, std::move(schedule), std::move(b), b0};
             }),
             py::arg("kind") = NoiseKind::IidBounded, py::arg("gamma") = GammaDist{},
             py::arg("varsigma2") = 1.0, py::arg("varsigma2_schedule") = std::vector<double>{},
             py::arg("b") = FunctionSpec::scaled_tanh(0.0), py::arg("b0") = 1.0)
        .def("c2", &NoiseSpec::c2)
        .def("satisfies_strict_contraction", &NoiseSpec::satisfies_strict_contraction);

    py::class_<ModelSpec>(m, "ModelSpec")
        .def(py::init([](double a, FunctionSpec f, NoiseSpec noise, double xi0,
                         double xi0_halfwidth) {
                 ModelSpec spec{a, std::move(f), std::move(noise), xi0, xi0_halfwidth};
                 spec.validate();
                 return spec;
             }),
             py::arg("a"), py::arg("f") = FunctionSpec::linear(1.0), py::arg("noise") = NoiseSpec{},
             py::arg("xi0") = 0.0, py::arg("xi0_halfwidth") = 0.0)
        .def_readonly("a", &ModelSpec::a)
        .def_readonly("f", &ModelSpec::f);

    py::class_<DiscretePath>(m, "DiscretePath")
        .def_readonly("xi", &DiscretePath::xi)
        .def_readonly("eps", &DiscretePath::eps)
        .def_readonly("sigma2", &DiscretePath::sigma2)
        .def_readonly("seed", &DiscretePath::seed)
        .def_property_readonly("n", &DiscretePath::n);

    m.def("simulate_discrete", &simulate_discrete, py::arg("model"), py::arg("n"), py::arg("seed"),
          py::arg("stream") = 0);
    m.def("conditional_variance", &conditional_variance, py::arg("noise"), py::arg("k"),
          py::arg("xi_prev"));
    m.def(
        "compose_f_r",
        [](const ModelSpec& model, double x0, const std::vector<double>& shocks) {
            return compose_f_r(model, x0, shocks);
        },
        py::arg("model"), py::arg("x0"), py::arg("shocks"));

    py::class_<WeightScheme>(m, "WeightScheme")
        .def_static("lse", &WeightScheme::lse)
        .def_static("optimal", &WeightScheme::optimal)
        .def_static("custom", &WeightScheme::custom, py::arg("h"), py::arg("label") = "custom")
        .def("name", &WeightScheme::name);

    py::class_<EstimateResult>(m, "EstimateResult")
        .def_readonly("a_hat", &EstimateResult::a_hat)
        .def_readonly("Q_n", &EstimateResult::Q_n)
        .def_readonly("G_n", &EstimateResult::G_n)
        .def_readonly("V_n", &EstimateResult::V_n)
        .def_readonly("n", &EstimateResult::n)
        .def_readonly("denominator_magnitude", &EstimateResult::denominator_magnitude);

    m.def("weights_for", &weights_for, py::arg("scheme"), py::arg("model"), py::arg("path"));
    m.def(
        "estimate_discrete",
        [](const DiscretePath& path, const FunctionSpec& f, const std::vector<double>& mu) {
            return estimate_discrete(path, f, mu);
        },
        py::arg("path"), py::arg("f"), py::arg("mu"));
    m.def(
        "functional_V_n",
        [](const DiscretePath& path, const FunctionSpec& f, const std::vector<double>& mu) {
            return functional_V_n(path, f, mu);
        },
        py::arg("path"), py::arg("f"), py::arg("mu"));
    m.def(
        "check_stationarity_system",
        [](const DiscretePath& path, const FunctionSpec& f, const std::vector<double>& mu) {
            return check_stationarity_system(path, f, mu);
        },
        py::arg("path"), py::arg("f"), py::arg("mu"));

    py::class_<LimitVarianceEstimate>(m, "LimitVarianceEstimate")
        .def_readonly("value", &LimitVarianceEstimate::value)
        .def_readonly("value_half_r", &LimitVarianceEstimate::value_half_r)
        .def_readonly("value_half_n", &LimitVarianceEstimate::value_half_n);
    m.def("limit_variance_optimal", &limit_variance_optimal, py::arg("model"), py::arg("r"),
          py::arg("n"), py::arg("reps"), py::arg("seed"));

    py::class_<MdotSpec>(m, "MdotSpec")
        .def(py::init([](double base, double amp, double freq) {
                 return MdotSpec{base, amp, freq};
             }),
             py::arg("base") = 1.0, py::arg("amp") = 0.0, py::arg("freq") = 1.0)
        .def("__call__", &MdotSpec::operator());

    py::class_<ContinuousModelSpec>(m, "ContinuousModelSpec")
        .def(py::init([](double a, FunctionSpec f, MdotSpec mdot, double xi0) {
                 ContinuousModelSpec spec{a, std::move(f), mdot, xi0};
                 spec.validate();
                 return spec;
             }),
             py::arg("a"), py::arg("f") = FunctionSpec::linear(1.0), py::arg("mdot") = MdotSpec{},
             py::arg("xi0") = 0.0);

    py::class_<ContinuousPath>(m, "ContinuousPath")
        .def_readonly("dt", &ContinuousPath::dt)
        .def_readonly("T", &ContinuousPath::T)
        .def_readonly("xi", &ContinuousPath::xi)
        .def_readonly("dxi", &ContinuousPath::dxi)
        .def_readonly("mdot_vals", &ContinuousPath::mdot_vals);

    m.def("simulate_continuous", &simulate_continuous, py::arg("model"), py::arg("T"),
          py::arg("dt"), py::arg("seed"), py::arg("stream") = 0);
    m.def("ct_weight_lse", &ct_weight_lse);
    m.def("ct_weight_optimal", &ct_weight_optimal);
    m.def("estimate_continuous", &estimate_continuous, py::arg("path"), py::arg("f"), py::arg("h"));
    m.def("functional_V_T", &functional_V_T, py::arg("path"), py::arg("f"), py::arg("h"));
    m.def("check_stationarity_continuous", &check_stationarity_continuous, py::arg("path"),
          py::arg("f"), py::arg("h"), py::arg("g"));

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init([](ModelSpec model, std::vector<WeightScheme> schemes, long n, long reps,
                         std::vector<double> time_grid, std::uint64_t master_seed, long burn_in) {
                 ExperimentConfig cfg{std::move(model), std::move(schemes), n,
                                      reps, std::move(time_grid), master_seed, burn_in};
                 cfg.validate();
                 return cfg;
             }),
             py::arg("model"), py::arg("schemes"), py::arg("n") = 10000, py::arg("reps") = 1000,
             py::arg("time_grid") = std::vector<double>{1.0}, py::arg("master_seed") = 0,
             py::arg("burn_in") = 0);

    py::class_<DeviationStats>(m, "DeviationStats")
        .def_readonly("mean", &DeviationStats::mean)
        .def_readonly("variance", &DeviationStats::variance)
        .def_readonly("deciles", &DeviationStats::deciles);
    py::class_<SchemeSummary>(m, "SchemeSummary")
        .def_readonly("scheme", &SchemeSummary::scheme)
        .def_readonly("by_time", &SchemeSummary::by_time)
        .def_readonly("vn_mean", &SchemeSummary::vn_mean)
        .def_readonly("vn_q25", &SchemeSummary::vn_q25)
        .def_readonly("vn_q75", &SchemeSummary::vn_q75)
        .def_readonly("degenerate", &SchemeSummary::degenerate);
    py::class_<McSummary>(m, "McSummary")
        .def_readonly("time_grid", &McSummary::time_grid)
        .def_readonly("schemes", &McSummary::schemes)
        .def_readonly("reps", &McSummary::reps)
        .def_readonly("n", &McSummary::n)
        .def_readonly("invalid", &McSummary::invalid);
    m.def("run_monte_carlo", &run_monte_carlo, py::arg("config"));

    py::class_<ComparisonRow>(m, "ComparisonRow")
        .def_readonly("scheme", &ComparisonRow::scheme)
        .def_readonly("dev_variance", &ComparisonRow::dev_variance)
        .def_readonly("vn_mean", &ComparisonRow::vn_mean)
        .def_readonly("predicted_V", &ComparisonRow::predicted_V)
        .def_readonly("degenerate", &ComparisonRow::degenerate);
    m.def("compare_schemes", &compare_schemes, py::arg("config"));

    m.def("parse_config", &parse_config, py::arg("text"));
    m.def("serialize_config", &serialize_config, py::arg("config"));
    py::class_<RunConfig>(m, "RunConfig");
}
