import json
import math

import pytest

import sdelab


def test_condition_report():
    rep = sdelab.check_condition(1, 2.4, math.inf)
    assert rep.admissible
    assert rep.alpha == pytest.approx(1.0 - 1.0 / 2.4)

    bad = sdelab.check_condition(3, 2.0, math.inf)
    assert not bad.admissible
    assert bad.failure_reason


def test_drift_roundtrip_and_eval():
    b = sdelab.DriftSpec.bounded_sign(1.0, 1)
    b2 = sdelab.DriftSpec.from_json(b.to_json())
    assert b2.evaluate(0.3, [2.0]) == [-1.0]
    assert b2.evaluate(0.3, [-0.5]) == [1.0]
    assert b2.d == 1 and math.isinf(b2.q)


def test_cutoff_threshold():
    b = sdelab.DriftSpec.constant([3.0])
    # |b| = 3 exceeds B h^0 = 1 for rho = q = inf, so the cutoff clips to 1
    v = sdelab.cutoff_primary(b, 0.25, 1.0, 0.1, [0.0])
    assert v == [1.0]


def test_simulate_deterministic():
    p = sdelab.SchemeParams(T=1.0, n=8, x=[0.0], drift=sdelab.DriftSpec.bounded_sign(1.0, 1))
    a = sdelab.simulate_path(p, 42, 0)
    b = sdelab.simulate_path(p, 42, 0)
    assert a.states == b.states
    assert len(a.states) == 9
    c = sdelab.simulate_path(p, 43, 0)
    assert a.states[-1] != c.states[-1]


def test_density_mass():
    p = sdelab.SchemeParams(T=1.0, n=16, x=[0.0], drift=sdelab.DriftSpec.bounded_sign(1.0, 1))
    grid = sdelab.default_grid(p, 512)
    seq = sdelab.propagate(p, grid, 8)
    assert len(seq) == 16
    assert seq[-1].mass == pytest.approx(1.0, abs=1e-6)
    assert seq[-1].t == pytest.approx(1.0)


def test_gaussian_values():
    assert sdelab.gauss_density(1, 1.0, 1.0, [0.0]) == pytest.approx(1.0 / math.sqrt(2 * math.pi))
    assert sdelab.beta_function(0.5, 0.5) == pytest.approx(math.pi)


def test_fit_rate_exact_power():
    pairs = [(2.0 ** -k, 3.0 * (2.0 ** -k) ** 0.5) for k in range(4, 9)]
    slope, intercept, resid = sdelab.fit_rate(pairs)
    assert slope == pytest.approx(0.5, abs=1e-12)
    assert math.exp(intercept) == pytest.approx(3.0)
    assert resid < 1e-12


def test_mc_crn_zero_at_equal_n():
    p = sdelab.SchemeParams(T=1.0, n=16, x=[0.0], drift=sdelab.DriftSpec.bounded_sign(1.0, 1))
    est = sdelab.mc_weak_error(p, "coordinate", 16, 16, 200, 1)
    assert est["estimate"] == 0.0
    assert est["std_error"] == 0.0


def test_lemma_suite_json():
    rep = json.loads(sdelab.run_lemma_suite_json(7))
    assert rep["all_ok"]
    names = {it["name"] for it in rep["items"]}
    assert "gronwall.case1_exponential" in names
