"""Level-``p`` QAOA states and their energy expectation ``F_p``.

The phase separator ``exp(-i gamma H_f)`` is one diagonal phase pass over
the precomputed diagonal; because every term of ``H_f`` is a product of
Z operators this equals the per-term gate product exactly.
"""
from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .encoding import IsingModel, diagonal, spin_table
from .statevector import (
    StateVector,
    _check_qubits,
    expectation_kernel,
    mix_kernel,
    phase_kernel,
)


@dataclass(frozen=True)
class QaoaParams:
    """Angles ``gamma_1..gamma_p`` (phase) and ``beta_1..beta_p`` (mixer).

    Mixer angles are reduced modulo ``pi``, which changes the state by a
    global sign only. Phase angles are kept as given: ``gamma -> gamma +
    2 pi`` is a symmetry only when every energy is an integer.
    """

    gammas: tuple
    betas: tuple

    def __post_init__(self):
        g = tuple(float(v) for v in np.atleast_1d(self.gammas))
        b = tuple(float(v) % np.pi for v in np.atleast_1d(self.betas))
        if len(g) != len(b) or not g:
            raise ValueError("need p >= 1 gammas and the same number of betas")
        object.__setattr__(self, "gammas", g)
        object.__setattr__(self, "betas", b)

    @property
    def level(self) -> int:
        return len(self.gammas)

    def to_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)

    @classmethod
    def from_vector(cls, x) -> "QaoaParams":
        x = np.asarray(x, dtype=float)
        p = x.size // 2
        return cls(x[:p], x[p:])


def ansatz_kernel(energies, gammas, betas, num_qubits):
    """Batched ansatz amplitudes.

    ``gammas`` and ``betas`` have shape ``(..., p)``; the result has shape
    ``(..., 2**N)``. ``energies`` is either one diagonal or one per row.
    """
    gammas = np.asarray(gammas, dtype=float)
    betas = np.asarray(betas, dtype=float)
    dim = 1 << num_qubits
    amps = np.full(gammas.shape[:-1] + (dim,), np.sqrt(1.0 / dim), dtype=np.complex128)
    for j in range(gammas.shape[-1]):
        amps = phase_kernel(amps, energies, gammas[..., j])
        amps = mix_kernel(amps, betas[..., j], num_qubits)
    return amps


def fp_batch(energies, num_qubits, x):
    """``F_p`` for each row of ``x = [gammas | betas]`` (shape ``(B, 2p)``).

    ``energies`` is a shared diagonal ``(2**N,)`` or per-row ``(B, 2**N)``.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    p = x.shape[-1] // 2
    amps = ansatz_kernel(energies, x[:, :p], x[:, p:], num_qubits)
    return expectation_kernel(amps, energies)


def prepare_ansatz(model: IsingModel, params: QaoaParams) -> StateVector:
    """``U(H_B, beta_p) U(H_f, gamma_p) ... U(H_B, beta_1) U(H_f, gamma_1) |+>^N``."""
    _check_qubits(model.num_spins)
    amps = ansatz_kernel(diagonal(model), np.array(params.gammas),
                         np.array(params.betas), model.num_spins)
    return StateVector(amps)


def expectation_fp(model: IsingModel, params: QaoaParams) -> float:
    """Exact ``<psi_p|H_f|psi_p>`` (no shot noise)."""
    _check_qubits(model.num_spins)
    d = diagonal(model)
    return float(fp_batch(d, model.num_spins, params.to_vector())[0])


def analytic_f1_single(b, gamma, beta):
    """Level-1 energy for ``H_f = -b Z``: ``b sin(2 beta) sin(2 b gamma)``."""
    return b * np.sin(2.0 * beta) * np.sin(2.0 * b * gamma)


def pauli_z_correlations(state: StateVector) -> tuple[np.ndarray, np.ndarray]:
    """``<Z_k Z_l>`` (strict upper triangle) and ``<Z_k>`` for a state."""
    s = spin_table(state.num_qubits).astype(float)
    probs = state.probabilities()
    z = probs @ s
    zz = np.triu(s.T @ (probs[:, None] * s), k=1)
    return zz, z


def f1_factored(model: IsingModel, gamma: float, beta: float) -> float:
    """Level-1 energy assembled term by term.

    ``F_1 = sum_{l>k} J_kl f_kl - sum_k h_k g_k (+ offset)`` where ``f_kl``
    and ``g_k`` are the two- and one-body Z expectations in the level-1
    state. Every term is evaluated on the full state, which is exact for
    any coupling graph.
    """
    state = prepare_ansatz(model, QaoaParams([gamma], [beta]))
    f, g = pauli_z_correlations(state)
    return float(np.sum(model.couplings * f) - model.fields @ g + model.offset)


@dataclass(frozen=True)
class LandscapeGrid:
    gamma_axis: np.ndarray
    beta_axis: np.ndarray
    values: np.ndarray  # values[i, j] = F_1(gamma_axis[i], beta_axis[j])

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("gamma,beta,F1\n")
        for i, g in enumerate(self.gamma_axis):
            for j, b in enumerate(self.beta_axis):
                buf.write(f"{float(g)!r},{float(b)!r},{float(self.values[i, j])!r}\n")
        return buf.getvalue()


def landscape(model: IsingModel, gamma_axis=None, beta_axis=None,
              points: int = 101) -> LandscapeGrid:
    """Level-1 energy on a ``gamma x beta`` grid (default ``[0, pi]^2``)."""
    _check_qubits(model.num_spins)
    ga = np.linspace(0.0, np.pi, points) if gamma_axis is None else np.asarray(gamma_axis, float)
    ba = np.linspace(0.0, np.pi, points) if beta_axis is None else np.asarray(beta_axis, float)
    d = diagonal(model)
    n = model.num_spins
    values = np.empty((ga.size, ba.size))
    rows_per_chunk = max(1, (1 << 22) // (ba.size << n))
    for start in range(0, ga.size, rows_per_chunk):
        gs = ga[start:start + rows_per_chunk]
        gg, bb = np.meshgrid(gs, ba, indexing="ij")
        amps = ansatz_kernel(d, gg[..., None], bb[..., None], n)
        values[start:start + gs.size] = expectation_kernel(amps, d)
    return LandscapeGrid(ga, ba, values)
