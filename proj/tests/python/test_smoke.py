import math

import numpy as np
import pytest

import tadist


def dirac(space, x, mass=1.0):
    w = np.zeros(space.size)
    w[tadist.find_coordinate(space, x)] = mass
    return w


def test_pair_example():
    s = tadist.interval_space(-3.0, 3.0, 61)
    a, b = dirac(s, -2.0), dirac(s, 2.0)
    assert tadist.w0(s, a, b, 1) == pytest.approx(4.0, abs=1e-9)
    assert tadist.w0(s, a, np.zeros(s.size), 2) == pytest.approx(1.0, abs=1e-9)
    assert tadist.w_prime(s, a, b, 2) == pytest.approx(2.0, abs=1e-9)
    assert tadist.w_doubleprime(s, a, b, 2) ** 2 == pytest.approx(2.0, abs=1e-9)


def test_witness_and_representation():
    s = tadist.line_space([0.0, 0.2, 0.5, 0.9, 1.0], [0, 4])
    mu = [0, 0.3, 0.2, 0, 0]
    nu = [0, 0, 0.1, 0.4, 0]
    r = tadist.w0(s, mu, nu, 1, with_witness=True)
    assert r["value"] == pytest.approx(tadist.w0_rep_p1(s, mu, nu), rel=1e-9)
    assert sum(r["rho"]) * 2 + sum(mu) <= 1 + 1e-9
    lo, hi = tadist.w_sharp_bounds(s, mu, nu, 2)
    assert lo <= hi


def test_annihilation_cost_example():
    eps = 0.1
    s = tadist.line_space([0.0, eps, 1.0, 2.0], [0, 3])
    mu = [0, 0.5, 0.5, 0]
    assert tadist.w_prime_zero(s, mu, 2) ** 2 == pytest.approx(0.505, abs=1e-12)
    assert tadist.annihilation_cost(s, mu, 2) == pytest.approx(0.55, abs=1e-12)


def test_heat_flows():
    sys = tadist.interval_system(0.0, 1.0, 41)
    mu = np.zeros(41)
    mu[10] = 0.6
    mu[30] = 0.4
    assert sum(tadist.measure_flow(sys, mu, 0.1, "neumann")) == pytest.approx(1.0)
    assert sum(tadist.measure_flow(sys, mu, 0.1, "dirichlet")) < 1.0
    k = sys.kernel(0.1, "dirichlet")
    assert k.shape == (41, 41)
    rows = tadist.contraction_experiment(sys, mu * 0.5, mu[::-1] * 0.5, 1, [0, 0.05, 0.1])
    assert all(r[3] <= 1e-9 for r in rows)
    plus, minus = tadist.charged_flow(sys, mu * 0.5, mu * 0.5, 0.1)
    assert np.allclose(plus, minus)


def test_errors():
    s = tadist.interval_space(0.0, 1.0, 11)
    with pytest.raises(tadist.DomainError):
        tadist.wasserstein(s, dirac(s, 0.5), dirac(s, 0.5), 0.5)
    with pytest.raises(tadist.MassError):
        tadist.wasserstein(s, dirac(s, 0.5), dirac(s, 0.5, 0.5), 1)
    with pytest.raises(tadist.ConfigError):
        tadist.interval_space(1.0, 1.0, 11)
    bad = tadist.MetricSpace(np.array([[0, 1, 5], [1, 0, 1], [5, 1, 0.0]]), [0], [1, 1, 1])
    assert any(v[0] for v in tadist.validate_metric(bad))
    assert math.isclose(tadist.wasserstein(s, dirac(s, 0.2), dirac(s, 0.7), 2), 0.5)
