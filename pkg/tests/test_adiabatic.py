import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from qaoa_mld.adiabatic import (
    interpolated_hamiltonian,
    mixer_matrix,
    runtime_bound,
    single_qubit_spectrum_closed_form,
    spectrum_trace,
    trotter_evolve,
)
from qaoa_mld.encoding import IsingModel, diagonal, encode_mimo
from qaoa_mld.errors import DegenerateGapError, SizeError
from qaoa_mld.instances import single_qubit_example, three_qubit_example, two_qubit_example
from qaoa_mld.statevector import symmetric_eigenvalues


def scalar_coefficients(inst):
    h, y = inst.channel[0, 0], inst.received[0]
    return h * h, h * y, y * y


def random_model(n, seed):
    rng = np.random.default_rng(seed)
    return IsingModel(np.triu(rng.standard_normal((n, n)), 1), rng.standard_normal(n),
                      float(rng.standard_normal()), "full")


def test_mixer_two_qubit_matrix():
    expected = np.array([[0, 1, 1, 0], [1, 0, 0, 1], [1, 0, 0, 1], [0, 1, 1, 0]])
    np.testing.assert_array_equal(mixer_matrix(2), expected)
    model = encode_mimo(two_qubit_example(), "full")
    np.testing.assert_array_equal(interpolated_hamiltonian(model, 0.0), expected)


def test_interpolation_endpoints_and_pattern():
    model = encode_mimo(two_qubit_example(), "full")
    np.testing.assert_allclose(interpolated_hamiltonian(model, 1.0), np.diag(diagonal(model)))
    tau = 0.37
    m = interpolated_hamiltonian(model, tau)
    off = m[~np.eye(4, dtype=bool)]
    assert set(np.round(off, 12)) <= {0.0, round(1 - tau, 12)}
    with pytest.raises(ValueError):
        interpolated_hamiltonian(model, 1.5)


def test_analysis_size_cap():
    with pytest.raises(SizeError):
        spectrum_trace(IsingModel(np.zeros((13, 13)), np.zeros(13)))


def test_single_qubit_gap():
    trace = spectrum_trace(encode_mimo(single_qubit_example(), "full"))
    assert trace.min_gap == pytest.approx(1.94, abs=0.01)
    assert trace.tau_grid.size == 201


def test_three_qubit_gap_positive():
    assert spectrum_trace(encode_mimo(three_qubit_example(), "full")).min_gap > 0


def test_two_qubit_gap_with_diagonal_problem_hamiltonian():
    # the correct diagonal Hamiltonian gives about 0.963 (see next test)
    gap = spectrum_trace(encode_mimo(two_qubit_example(), "full")).min_gap
    assert gap == pytest.approx(0.9627, abs=1e-3)


def test_two_qubit_gap_with_constant_in_off_diagonal_cells():
    """Putting the constant c' in every off-diagonal cell of H_f reproduces 1.93.

    That matrix is not a function of Z operators, so it is not the detection
    Hamiltonian. The test documents where the published two-qubit value
    comes from.
    """
    inst = two_qubit_example()
    gram = inst.channel.T @ inst.channel
    lin = inst.channel.T @ inst.received
    c_prime = float(inst.received @ inst.received + np.trace(gram))
    d = diagonal(encode_mimo(inst, "full"))
    hf = np.full((4, 4), c_prime)
    np.fill_diagonal(hf, d)
    # diagonal entries agree with the hand-written formulas
    a12, b1, b2 = gram[0, 1], lin[0], lin[1]
    np.testing.assert_allclose(d, [c_prime + 2 * a12 - 2 * b1 - 2 * b2,
                                   c_prime - 2 * a12 - 2 * b1 + 2 * b2,
                                   c_prime - 2 * a12 + 2 * b1 - 2 * b2,
                                   c_prime + 2 * a12 + 2 * b1 + 2 * b2])
    gaps = []
    for tau in np.linspace(0, 1, 201):
        ev = symmetric_eigenvalues((1 - tau) * mixer_matrix(2) + tau * hf)
        gaps.append(ev[1] - ev[0])
    assert min(gaps) == pytest.approx(1.93, abs=0.01)


def test_endpoint_values():
    model = random_model(3, 5)
    trace = spectrum_trace(model, 11)
    np.testing.assert_allclose(trace.eigenvalues[0], [-3, -1, -1, -1, 1, 1, 1, 3], atol=1e-12)
    np.testing.assert_allclose(trace.eigenvalues[-1], np.sort(diagonal(model)), atol=1e-9)
    assert np.all(np.diff(trace.eigenvalues, axis=1) >= 0)
    assert trace.min_gap == pytest.approx(trace.gaps.min())
    assert trace.gaps[list(trace.tau_grid).index(trace.gap_location)] == trace.min_gap


def test_spectrum_csv_layout():
    trace = spectrum_trace(encode_mimo(two_qubit_example(), "full"), 3)
    lines = trace.to_csv().splitlines()
    assert lines[0] == "tau,lambda_0,lambda_1,lambda_2,lambda_3"
    assert len(lines) == 4
    assert float(lines[2].split(",")[0]) == 0.5
    assert len(lines[1].split(",")[1].split("e")[0].replace("-", "").replace(".", "")) >= 12


def test_closed_form_endpoints():
    lo, hi = single_qubit_spectrum_closed_form(1.2, 0.7, 0.4, 0.0)
    assert (lo, hi) == (-1.0, 1.0)
    lo, hi = single_qubit_spectrum_closed_form(1.2, -0.7, 0.4, 1.0)
    assert lo == pytest.approx(1.6 - 1.4) and hi == pytest.approx(1.6 + 1.4)


def test_closed_form_matches_eigensolver_on_instance():
    inst = single_qubit_example()
    a, b, c = scalar_coefficients(inst)
    model = encode_mimo(inst, "full")
    for tau in np.linspace(0, 1, 101):
        ev = symmetric_eigenvalues(interpolated_hamiltonian(model, tau))
        np.testing.assert_allclose(ev, single_qubit_spectrum_closed_form(a, b, c, tau), atol=1e-9)


@settings(max_examples=50, deadline=None)
@given(st.floats(0, 5), st.floats(-5, 5), st.floats(0, 5), st.floats(0, 1))
def test_closed_form_property(a, b, c, tau):
    # direct (a, b, c) parametrisation: H_f = diag(a + c - 2b, a + c + 2b)
    m = (1 - tau) * np.array([[0, 1], [1, 0]]) + tau * np.diag([a + c - 2 * b, a + c + 2 * b])
    np.testing.assert_allclose(symmetric_eigenvalues(m),
                               single_qubit_spectrum_closed_form(a, b, c, tau), atol=1e-9)


def test_grid_refinement_is_stable():
    model = encode_mimo(three_qubit_example(), "full")
    coarse = spectrum_trace(model, 201).min_gap
    fine = spectrum_trace(model, 401).min_gap
    assert abs(coarse - fine) < 1e-3


def test_runtime_bound():
    assert runtime_bound(1.94) == pytest.approx(0.2657, abs=1e-4)
    assert runtime_bound(1.0) == 1.0
    assert runtime_bound(1.3, xi=2.0) == pytest.approx(2 * runtime_bound(1.3))
    with pytest.raises(DegenerateGapError):
        runtime_bound(0.0)


def test_degenerate_gap_from_trace():
    # no field and no coupling: H_f is a constant, two-spin spectrum meets at tau = 1
    trace = spectrum_trace(IsingModel(np.zeros((2, 2)), np.zeros(2), 1.0, "full"), 11)
    assert trace.min_gap == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DegenerateGapError):
        runtime_bound(trace)


def test_trotter_zero_time():
    model = encode_mimo(two_qubit_example(), "full")
    res = trotter_evolve(model, 0.0, 10, 2)
    assert res.ground_overlap == pytest.approx(0.25, abs=1e-15)


def test_trotter_adiabatic_limit():
    model = encode_mimo(single_qubit_example(), "full")
    slow = trotter_evolve(model, 50.0, 500, 2).ground_overlap
    fast = trotter_evolve(model, 1.0, 500, 2).ground_overlap
    assert slow >= 0.95
    assert slow > fast


def test_trotter_matches_dense_time_stepping():
    # oracle: exact exponential of the (negated-mixer) interpolation per slice
    model = random_model(2, 3)
    total, slices = 4.0, 40
    hf = np.diag(diagonal(model))
    hb = -mixer_matrix(2)
    psi = np.full(4, 0.5, dtype=complex)
    dt = total / slices
    for j in range(1, slices + 1):
        tau = (j - 0.5) / slices
        psi = expm(-1j * dt * ((1 - tau) * hb + tau * hf)) @ psi
    res = trotter_evolve(model, total, slices, substeps=200)
    assert abs(np.vdot(psi, res.final_state.amplitudes)) ** 2 == pytest.approx(1.0, abs=1e-4)


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), st.floats(0, 20), st.integers(1, 30), st.integers(1, 3),
       st.integers(0, 1000))
def test_trotter_unitarity(n, total, slices, substeps, seed):
    res = trotter_evolve(random_model(n, seed), total, slices, substeps)
    assert abs(np.sum(res.final_state.probabilities()) - 1) < 1e-8
    assert 0 <= res.ground_overlap <= 1 + 1e-12
