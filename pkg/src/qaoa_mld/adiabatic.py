"""Adiabatic interpolation ``(1 - tau) H_B + tau H_f`` and its spectrum.

The mixer used for spectra is ``H_B = sum_k X_k`` exactly. Conjugating by
``Z`` on every qubit flips the sign of ``H_B`` and leaves ``H_f`` alone, so
the spectrum (and hence the gap) is the same for ``+H_B`` and ``-H_B``.
Which eigenstate ``|+...+>`` is does depend on the sign: it is the ground
state of ``-sum_k X_k``, so the time evolution in :func:`trotter_evolve`
drives with the negated mixer.
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .encoding import IsingModel, diagonal
from .errors import DegenerateGapError, SizeError
from .statevector import (
    StateVector,
    mix_kernel,
    phase_kernel,
    symmetric_eigenvalues,
    uniform_superposition,
)

MAX_ANALYSIS_QUBITS = 12


def _check_analysis_size(model: IsingModel) -> None:
    if model.num_spins > MAX_ANALYSIS_QUBITS:
        raise SizeError(
            f"{model.num_spins} spins exceeds the dense-analysis cap of "
            f"{MAX_ANALYSIS_QUBITS}"
        )


def mixer_matrix(num_qubits: int) -> np.ndarray:
    """Dense ``sum_k X_k``: ones where two indices differ in exactly one bit."""
    dim = 1 << num_qubits
    idx = np.arange(dim)
    m = np.zeros((dim, dim))
    for k in range(num_qubits):
        m[idx, idx ^ (1 << k)] = 1.0
    return m


def interpolated_hamiltonian(model: IsingModel, tau: float) -> np.ndarray:
    if not 0.0 <= tau <= 1.0:
        raise ValueError(f"tau must lie in [0, 1], got {tau}")
    _check_analysis_size(model)
    m = (1.0 - tau) * mixer_matrix(model.num_spins)
    m[np.diag_indices_from(m)] += tau * diagonal(model)
    return m


@dataclass(frozen=True)
class SpectrumTrace:
    tau_grid: np.ndarray
    eigenvalues: np.ndarray  # (len(tau_grid), 2**N), ascending per row
    min_gap: float
    gap_location: float

    @property
    def gaps(self) -> np.ndarray:
        return self.eigenvalues[:, 1] - self.eigenvalues[:, 0]

    def to_csv(self) -> str:
        buf = io.StringIO()
        cols = ["tau"] + [f"lambda_{i}" for i in range(self.eigenvalues.shape[1])]
        buf.write(",".join(cols) + "\n")
        for tau, row in zip(self.tau_grid, self.eigenvalues):
            buf.write(",".join(f"{v:.15e}" for v in (tau, *row)) + "\n")
        return buf.getvalue()


def spectrum_trace(model: IsingModel, grid_points: int = 201) -> SpectrumTrace:
    """Eigenvalues of the interpolated Hamiltonian on a uniform tau grid.

    The minimum gap is read off the grid without interpolation; refine the
    grid to tighten it.
    """
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    _check_analysis_size(model)
    taus = np.linspace(0.0, 1.0, grid_points)
    hb = mixer_matrix(model.num_spins)
    hf = diagonal(model)
    eigs = np.empty((grid_points, hf.size))
    chunk = max(1, (1 << 22) // hf.size**2)  # bound the stacked matrices to ~32 MB
    diag = np.arange(hf.size)
    for start in range(0, grid_points, chunk):
        t = taus[start:start + chunk, None, None]
        stack = (1.0 - t) * hb
        stack[:, diag, diag] += t[:, :, 0] * hf
        eigs[start:start + chunk] = symmetric_eigenvalues(stack)
    gaps = eigs[:, 1] - eigs[:, 0]
    j = int(np.argmin(gaps))
    return SpectrumTrace(taus, eigs, float(max(gaps[j], 0.0)), float(taus[j]))


def single_qubit_spectrum_closed_form(a, b, c, tau):
    """``(a + c) tau -/+ sqrt(1 - 2 tau + (1 + 4 b^2) tau^2)``."""
    if np.any(np.asarray(tau) < 0) or np.any(np.asarray(tau) > 1):
        raise ValueError("tau must lie in [0, 1]")
    centre = (a + c) * tau
    half = np.sqrt(1.0 - 2.0 * tau + (1.0 + 4.0 * b * b) * tau * tau)
    return centre - half, centre + half


def runtime_bound(spectrum, xi: float = 1.0) -> float:
    """``xi / g**2`` for a trace (or a bare gap value)."""
    g = spectrum.min_gap if isinstance(spectrum, SpectrumTrace) else float(spectrum)
    if g <= 0.0:
        raise DegenerateGapError("minimum gap is zero; no finite runtime bound")
    return xi / g**2


@dataclass(frozen=True)
class EvolutionResult:
    final_state: StateVector
    ground_overlap: float
    total_time: float
    slices: int
    trotter_substeps: int


def trotter_evolve(model: IsingModel, total_time: float, slices: int,
                   substeps: int = 1) -> EvolutionResult:
    """First-order Trotterised adiabatic sweep from ``|+...+>``.

    The run is cut into ``slices`` intervals of length ``dt = T / slices``.
    Slice ``j`` freezes the schedule at its midpoint ``tau_j = (j - 1/2) /
    slices`` and applies ``substeps`` repetitions of
    ``exp(-i tau_j H_f dt/r)`` followed by ``exp(+i (1 - tau_j) sum X dt/r)``.
    The driver is ``-sum_k X_k`` so that the start state is its ground state.

    ``ground_overlap`` is the probability of the lowest-energy basis state of
    ``H_f`` (lowest index on ties).
    """
    if total_time < 0:
        raise ValueError("total_time must be non-negative")
    if slices < 1 or substeps < 1:
        raise ValueError("slices and substeps must be at least 1")
    _check_analysis_size(model)
    hf = diagonal(model)
    n = model.num_spins
    amps = uniform_superposition(n).amplitudes
    dt = total_time / slices / substeps
    for j in range(1, slices + 1):
        tau = (j - 0.5) / slices
        for _ in range(substeps):
            amps = phase_kernel(amps, tau * hf, dt)
            amps = mix_kernel(amps, -(1.0 - tau) * dt, n)
    ground = int(np.argmin(hf))
    overlap = float(abs(amps[ground]) ** 2)
    return EvolutionResult(StateVector(amps), overlap, float(total_time), slices, substeps)
