import pytest

import semilin as sl


def ar1(a=0.5):
    return sl.ModelSpec(a=a)


def test_simulate_shapes_and_determinism():
    m = ar1()
    p1 = sl.simulate_discrete(m, 100, 7)
    p2 = sl.simulate_discrete(m, 100, 7)
    assert p1.n == 100
    assert len(p1.xi) == 101
    assert p1.xi == p2.xi
    p3 = sl.simulate_discrete(m, 100, 8)
    assert p1.xi != p3.xi


def test_noiseless_recovery_is_exact():
    noise = sl.NoiseSpec(varsigma2=0.0)
    m = sl.ModelSpec(a=0.5, noise=noise, xi0=1.0)
    path = sl.simulate_discrete(m, 20, 1)
    mu = sl.weights_for(sl.WeightScheme.lse(), m, path)
    r = sl.estimate_discrete(path, m.f, mu)
    assert r.a_hat == pytest.approx(0.5, abs=1e-12)


def test_optimal_weights_do_not_exceed_lse_variance():
    b = sl.FunctionSpec.scaled_tanh(0.6)
    noise = sl.NoiseSpec(kind=sl.NoiseKind.HETEROSCEDASTIC, b=b, b0=1.0)
    m = sl.ModelSpec(a=0.4, f=sl.FunctionSpec.scaled_tanh(0.35), noise=noise)
    path = sl.simulate_discrete(m, 2000, 3)
    v_opt = sl.functional_V_n(path, m.f, sl.weights_for(sl.WeightScheme.optimal(), m, path))
    v_lse = sl.functional_V_n(path, m.f, sl.weights_for(sl.WeightScheme.lse(), m, path))
    assert v_opt <= v_lse * (1 + 1e-10)


def test_continuous_estimate_runs():
    m = sl.ContinuousModelSpec(a=0.8)
    path = sl.simulate_continuous(m, 50.0, 0.01, 5)
    r = sl.estimate_continuous(path, sl.FunctionSpec.linear(1.0), sl.ct_weight_lse(sl.FunctionSpec.linear(1.0)))
    assert abs(r.a_hat - 0.8) < 0.5


def test_validation_errors_surface_as_value_error():
    with pytest.raises(ValueError):
        sl.ModelSpec(a=2.0)
