import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from qaoa_mld.adiabatic import mixer_matrix
from qaoa_mld.encoding import IsingModel, diagonal, encode_mimo
from qaoa_mld.instances import single_qubit_example
from qaoa_mld.qaoa import (
    QaoaParams,
    analytic_f1_single,
    expectation_fp,
    f1_factored,
    landscape,
    prepare_ansatz,
)
from qaoa_mld.statevector import uniform_superposition

angle = st.floats(-2 * np.pi, 2 * np.pi)


def random_model(n, seed):
    rng = np.random.default_rng(seed)
    return IsingModel(np.triu(rng.standard_normal((n, n)), 1), rng.standard_normal(n))


def dense_ansatz(model, gammas, betas):
    """Oracle: dense matrix exponentials of H_f and sum X."""
    n = model.num_spins
    hf = np.diag(diagonal(model))
    psi = np.full(1 << n, (1 << n) ** -0.5, dtype=complex)
    for g, b in zip(gammas, betas):
        psi = expm(-1j * b * mixer_matrix(n)) @ (expm(-1j * g * hf) @ psi)
    return psi


def test_params_validation_and_wrapping():
    p = QaoaParams([0.3, 7.0], [4.0, -0.5])
    assert p.level == 2
    assert p.gammas == (0.3, 7.0)  # phase angles are not wrapped
    assert all(0 <= b < np.pi for b in p.betas)
    np.testing.assert_allclose(QaoaParams.from_vector(p.to_vector()).to_vector(), p.to_vector())
    with pytest.raises(ValueError):
        QaoaParams([0.1], [0.2, 0.3])


def test_identity_angles_give_uniform_state():
    s = prepare_ansatz(random_model(3, 0), QaoaParams([0.0], [0.0]))
    np.testing.assert_allclose(s.amplitudes, uniform_superposition(3).amplitudes)
    assert expectation_fp(random_model(3, 0), QaoaParams([0.0], [0.0])) == pytest.approx(0, abs=1e-12)


@pytest.mark.parametrize("n,p", [(1, 1), (2, 2), (3, 3)])
def test_ansatz_matches_dense_exponentials(n, p):
    rng = np.random.default_rng(10 * n + p)
    model = random_model(n, n)
    g, b = rng.uniform(0, np.pi, p), rng.uniform(0, np.pi, p)
    expected = dense_ansatz(model, g, b)
    got = prepare_ansatz(model, QaoaParams(g, b)).amplitudes
    # beta is wrapped mod pi, which can flip the global sign
    assert abs(np.vdot(expected, got)) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_analytic_examples():
    assert analytic_f1_single(1.0, np.pi / 4, np.pi / 4) == pytest.approx(1.0)
    assert analytic_f1_single(1.0, np.pi / 4, 3 * np.pi / 4) == pytest.approx(-1.0)
    assert analytic_f1_single(2.5, 0.0, 0.4) == 0.0


def test_paper_instance_single_point():
    b = encode_mimo(single_qubit_example(), "simplified").fields[0]
    assert b == pytest.approx(1.95415, abs=5e-6)
    model = IsingModel([[0.0]], [b])
    assert expectation_fp(model, QaoaParams([0.2], [0.3])) == pytest.approx(
        analytic_f1_single(b, 0.2, 0.3), abs=1e-10)


def test_single_qubit_sign_convention():
    # + b sin(2 beta) sin(2 b gamma), not the negated form
    model = IsingModel([[0.0]], [1.0])
    val = expectation_fp(model, QaoaParams([np.pi / 4], [np.pi / 4]))
    assert val == pytest.approx(1.0, abs=1e-12)


def test_separable_two_spin_model():
    b1, b2 = 0.8, -1.7
    model = IsingModel(np.zeros((2, 2)), [b1, b2])
    for g, beta in [(0.3, 0.2), (1.1, 2.5), (2.0, 0.9)]:
        expected = analytic_f1_single(b1, g, beta) + analytic_f1_single(b2, g, beta)
        assert f1_factored(model, g, beta) == pytest.approx(expected, abs=1e-10)


def test_landscape_layout_and_signs():
    b = encode_mimo(single_qubit_example(), "simplified").fields[0]
    grid = landscape(IsingModel([[0.0]], [b]), points=21)
    assert grid.values.shape == (21, 21)
    np.testing.assert_allclose(grid.values[0], 0.0, atol=1e-15)
    assert grid.values.min() < 0 < grid.values.max()
    lines = grid.to_csv().splitlines()
    assert lines[0] == "gamma,beta,F1" and len(lines) == 1 + 21 * 21


def test_landscape_matches_pointwise():
    model = random_model(3, 2)
    ga, ba = np.linspace(0, 3, 7), np.linspace(0, 2, 5)
    grid = landscape(model, ga, ba)
    for i in range(0, 7, 3):
        for j in range(0, 5, 2):
            assert grid.values[i, j] == pytest.approx(
                expectation_fp(model, QaoaParams([ga[i]], [ba[j]])), abs=1e-12)


def test_even_symmetry_integer_field():
    # 2 pi - gamma mirrors gamma only when 2b is an integer; b = 1 qualifies
    for g, beta in [(0.4, 0.3), (1.7, 2.2)]:
        assert analytic_f1_single(1.0, g, beta) == pytest.approx(
            analytic_f1_single(1.0, 2 * np.pi - g, np.pi - beta), abs=1e-12)
        model = IsingModel([[0.0]], [1.0])
        assert expectation_fp(model, QaoaParams([g], [beta])) == pytest.approx(
            expectation_fp(model, QaoaParams([2 * np.pi - g], [np.pi - beta])), abs=1e-10)


@settings(max_examples=20, deadline=None)
@given(st.floats(-5, 5), st.integers(0, 2**32 - 1))
def test_analytic_agreement_on_grid(b, seed):
    model = IsingModel([[0.0]], [b])
    axis = np.linspace(0, np.pi, 12)
    grid = landscape(model, axis, axis)
    gg, bb = np.meshgrid(axis, axis, indexing="ij")
    np.testing.assert_allclose(grid.values, analytic_f1_single(b, gg, bb), atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 6), angle, angle, st.integers(0, 2**32 - 1))
def test_factored_equals_direct(n, g, beta, seed):
    model = random_model(n, seed)
    assert f1_factored(model, g, beta) == pytest.approx(
        expectation_fp(model, QaoaParams([g], [beta])), abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 5), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_even_symmetry_and_bounds(n, p, seed):
    rng = np.random.default_rng(seed)
    model = random_model(n, seed)
    g, b = rng.uniform(-4, 4, p), rng.uniform(-4, 4, p)
    f = expectation_fp(model, QaoaParams(g, b))
    assert f == pytest.approx(expectation_fp(model, QaoaParams(-g, -b)), abs=1e-10)
    d = diagonal(model)
    assert d.min() - 1e-12 <= f <= d.max() + 1e-12
    s = prepare_ansatz(model, QaoaParams(g, b))
    assert abs(np.sum(s.probabilities()) - 1) < 1e-9
