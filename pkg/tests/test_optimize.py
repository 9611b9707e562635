import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaoa_mld.encoding import IsingModel, diagonal
from qaoa_mld.optimize import (
    OptimizerConfig,
    grid_seed_points,
    minimize_fp,
    minimize_fp_many,
    nelder_mead_batch,
)
from qaoa_mld.qaoa import expectation_fp
from qaoa_mld.statevector import symmetric_eigenvalues


def random_model(n, seed):
    rng = np.random.default_rng(seed)
    return IsingModel(np.triu(rng.standard_normal((n, n)), 1), rng.standard_normal(n))


def test_seed_points_examples():
    (only,) = grid_seed_points(1, 1)
    assert only.gammas == (np.pi / 2,) and only.betas == (np.pi / 2,)
    pts = grid_seed_points(1, 9)
    axis = {np.pi / 6, np.pi / 2, 5 * np.pi / 6}
    got = {(p.gammas[0], p.betas[0]) for p in pts}
    assert len(got) == 9
    assert all(min(abs(v - a) for a in axis) < 1e-12 for pt in got for v in pt)
    assert pts[0].gammas == (np.pi / 2,)
    assert [p.to_vector().tolist() for p in grid_seed_points(2, 25, seed=3)] == \
        [p.to_vector().tolist() for p in grid_seed_points(2, 25, seed=3)]


def test_seed_points_stay_in_box():
    for p, m in [(1, 5), (2, 25), (3, 11)]:
        for pt in grid_seed_points(p, m, seed=1):
            v = pt.to_vector()
            assert v.size == 2 * p and np.all((0 <= v) & (v <= np.pi))


def test_defaults():
    cfg = OptimizerConfig()
    assert cfg.starts_for(1) == 9 and cfg.starts_for(2) == 25
    assert cfg.budget_for(3) == 600
    assert cfg.value_tolerance == 1e-8
    with pytest.raises(ValueError):
        OptimizerConfig(multistarts=0)


def test_single_spin_reaches_ground_energy():
    res = minimize_fp(IsingModel([[0.0]], [1.0]), 1)
    assert res.best_value == pytest.approx(-1.0, abs=1e-6)
    g, b = res.best_params.gammas[0], res.best_params.betas[0]
    assert np.sin(2 * b) * np.sin(2 * g) == pytest.approx(-1.0, abs=1e-6)


def test_zero_model():
    res = minimize_fp(IsingModel(np.zeros((2, 2)), np.zeros(2)), 1)
    assert res.best_value == 0.0


def test_result_is_consistent():
    model = random_model(3, 1)
    res = minimize_fp(model, 2)
    assert res.best_value == pytest.approx(expectation_fp(model, res.best_params), abs=1e-12)
    assert res.best_value == res.final_values.min()
    assert res.best_start == int(np.argmin(res.final_values))
    assert np.all(res.final_values <= res.start_values + 1e-15)
    assert len(res.start_values) == 25


def test_trace_is_monotone():
    res = minimize_fp(random_model(3, 2), 2, record_trace=True)
    values = [v for _, v in res.trace]
    assert len(values) > 1
    assert all(b <= a for a, b in zip(values, values[1:]))
    assert values[-1] == res.best_value


def test_budget_respected():
    cfg = OptimizerConfig(multistarts=4, max_evals_per_start=20)
    res = minimize_fp(random_model(2, 3), 1, cfg)
    assert res.evaluations <= 4 * 20 + 4  # plus the initial start-point evaluations


def test_batched_equals_individual():
    models = [random_model(3, s) for s in range(6)]
    many = minimize_fp_many(models, 2)
    for m, r in zip(models, many):
        single = minimize_fp(m, 2, record_trace=False)
        assert r.best_value == single.best_value
        assert r.best_params == single.best_params
        assert r.evaluations == single.evaluations


def test_determinism():
    model = random_model(3, 4)
    a = minimize_fp(model, 2, OptimizerConfig(seed=5))
    b = minimize_fp(model, 2, OptimizerConfig(seed=5))
    assert a.best_value == b.best_value and a.best_params == b.best_params


def test_nelder_mead_on_quadratic():
    target = np.array([1.0, -2.0, 0.5])

    def fun(x, rows):
        return np.sum((x - target) ** 2, axis=1)

    x, f, evals, _, _ = nelder_mead_batch(fun, np.zeros((2, 3)), OptimizerConfig(), 2000)
    np.testing.assert_allclose(x, [target, target], atol=1e-3)
    assert np.all(f < 1e-7)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(1, 8), st.integers(0, 2**32 - 1))
def test_multistart_dominance(n, k, seed):
    model = random_model(n, seed)
    pts = grid_seed_points(1, k + 1, seed=seed % 7)
    more = minimize_fp(model, 1, start_points=pts, record_trace=False)
    fewer = minimize_fp(model, 1, start_points=pts[:k], record_trace=False)
    assert more.best_value <= fewer.best_value


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 3), st.integers(1, 2), st.integers(0, 2**32 - 1))
def test_lower_bound(n, p, seed):
    model = random_model(n, seed)
    cfg = OptimizerConfig(multistarts=4, max_evals_per_start=60 * p)
    res = minimize_fp(model, p, cfg, record_trace=False)
    ground = symmetric_eigenvalues(np.diag(diagonal(model)))[0]
    assert res.best_value >= ground - 1e-9
