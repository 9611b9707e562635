"""Dense state-vector primitives.

Basis convention: a bitstring ``z = (z_1, ..., z_N)`` maps to the index
``sum_k z_k * 2**(N - k)``, so qubit 1 is the most significant bit. Index 0
is ``|0...0>``, which the encoding maps to the all ``+1`` symbol vector.

The two structured QAOA unitaries are applied as elementwise/pairwise
amplitude updates and never materialise a ``2**N x 2**N`` matrix. The
``*_kernel`` functions accept arrays with arbitrary leading batch axes so
that many parameter sets can be pushed through one vectorised call.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, SizeError

MAX_QUBITS = 15
MAX_EIGEN_DIM = 4096
NORM_TOL = 1e-9


def bitstring(index: int, num_qubits: int) -> str:
    return format(index, f"0{num_qubits}b")


def basis_index(bits: str) -> int:
    if not bits or any(ch not in "01" for ch in bits):
        raise ValueError(f"not a bitstring: {bits!r}")
    return int(bits, 2)


def _check_qubits(num_qubits: int) -> None:
    if not 1 <= num_qubits <= MAX_QUBITS:
        raise SizeError(
            f"{num_qubits} qubits requested; dense simulation is capped at "
            f"{MAX_QUBITS} qubits"
        )


@dataclass(frozen=True)
class StateVector:
    """Normalised amplitudes of an ``N``-qubit pure state."""

    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        if amps.ndim != 1:
            raise DimensionError("amplitudes must be one-dimensional")
        n = amps.size.bit_length() - 1
        if amps.size < 2 or amps.size != 1 << n:
            raise DimensionError(f"length {amps.size} is not 2**N with N >= 1")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalised (norm**2 = {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def num_qubits(self) -> int:
        return self.amplitudes.size.bit_length() - 1

    @property
    def dimension(self) -> int:
        return self.amplitudes.size

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    @classmethod
    def basis(cls, bits: str) -> "StateVector":
        amps = np.zeros(1 << len(bits), dtype=np.complex128)
        amps[basis_index(bits)] = 1.0
        return cls(amps)


def uniform_superposition(num_qubits: int) -> StateVector:
    """Return ``|+>^N``, the equal-weight superposition of all basis states."""
    _check_qubits(num_qubits)
    dim = 1 << num_qubits
    return StateVector(np.full(dim, np.sqrt(1.0 / dim), dtype=np.complex128))


# -- batched kernels -------------------------------------------------------

# Complex products are written out in real arithmetic: numpy's complex
# multiply loop can round differently depending on array size, which would
# make a row's result depend on the batch it is evaluated in.

def phase_kernel(amps, energies, gamma):
    """Multiply amplitudes by ``exp(-1j * gamma * energies)``.

    ``amps`` has shape ``(..., 2**N)``; ``gamma`` broadcasts against the
    leading axes and ``energies`` against the whole array, so each batch row
    may carry its own diagonal.
    """
    amps = np.asarray(amps, dtype=np.complex128)
    theta = np.asarray(gamma, dtype=float)[..., None] * np.asarray(energies, dtype=float)
    c, s = np.cos(theta), np.sin(theta)
    out = np.empty(np.broadcast_shapes(amps.shape, theta.shape), dtype=np.complex128)
    out.real = amps.real * c + amps.imag * s
    out.imag = amps.imag * c - amps.real * s
    return out


def mix_kernel(amps, beta, num_qubits):
    """Apply ``exp(-1j * beta * sum_k X_k)`` qubit by qubit.

    Works on a copy; ``beta`` broadcasts against the leading axes of ``amps``.
    """
    out = np.array(amps, dtype=np.complex128, copy=True)
    lead = out.shape[:-1]
    beta = np.broadcast_to(np.asarray(beta, dtype=float), lead)
    c = np.cos(beta)[..., None, None]
    s = np.sin(beta)[..., None, None]
    for k in range(num_qubits):
        view = out.reshape(lead + (1 << k, 2, 1 << (num_qubits - k - 1)))
        ar, ai = view[..., 0, :].real.copy(), view[..., 0, :].imag.copy()
        br, bi = view[..., 1, :].real.copy(), view[..., 1, :].imag.copy()
        # [a, b] <- [c a - i s b, -i s a + c b]
        view[..., 0, :].real = c * ar + s * bi
        view[..., 0, :].imag = c * ai - s * br
        view[..., 1, :].real = c * br + s * ai
        view[..., 1, :].imag = c * bi - s * ar
    return out


def expectation_kernel(amps, energies):
    # row-wise reduction: a row's value does not depend on the batch it sits in
    return np.sum((amps.real ** 2 + amps.imag ** 2) * energies, axis=-1)


# -- public operations -----------------------------------------------------

def _energies_for(state: StateVector, energies) -> np.ndarray:
    energies = np.asarray(energies, dtype=float)
    if energies.shape != (state.dimension,):
        raise DimensionError(
            f"expected {state.dimension} energies, got shape {energies.shape}"
        )
    return energies


def apply_diagonal_phase(state: StateVector, energies, gamma: float) -> StateVector:
    """Evolve under a diagonal Hamiltonian: ``a_z <- a_z exp(-i gamma E_z)``."""
    energies = _energies_for(state, energies)
    return StateVector(phase_kernel(state.amplitudes, energies, gamma))


def apply_x_rotations(state: StateVector, beta: float) -> StateVector:
    """Apply ``prod_k exp(-i beta X_k)`` to every qubit."""
    return StateVector(mix_kernel(state.amplitudes, beta, state.num_qubits))


def expectation_diagonal(state: StateVector, energies) -> float:
    """Exact ``<psi|diag(energies)|psi>``."""
    energies = _energies_for(state, energies)
    return float(expectation_kernel(state.amplitudes, energies))


def fidelity(a: StateVector, b: StateVector) -> float:
    """Squared overlap ``|<a|b>|**2``; insensitive to global phase."""
    if a.dimension != b.dimension:
        raise DimensionError("states live in different spaces")
    return float(abs(np.vdot(a.amplitudes, b.amplitudes)) ** 2)


def sample_bitstrings(state: StateVector, shots: int, seed=None) -> dict[str, int]:
    """Simulate ``shots`` computational-basis measurements.

    Returns a map from bitstring (qubit 1 first) to count, in basis order,
    containing only outcomes that occurred. Identical ``seed`` gives
    identical counts.
    """
    if shots < 1:
        raise ValueError("shots must be at least 1")
    probs = state.probabilities()
    probs = probs / probs.sum()
    counts = np.random.default_rng(seed).multinomial(shots, probs)
    n = state.num_qubits
    return {bitstring(int(i), n): int(counts[i]) for i in np.flatnonzero(counts)}


def _as_symmetric(matrix) -> np.ndarray:
    m = np.asarray(matrix, dtype=float)
    if m.ndim < 2 or m.shape[-1] != m.shape[-2]:
        raise DimensionError(f"expected square matrices, got shape {m.shape}")
    if m.shape[-1] > MAX_EIGEN_DIM:
        raise SizeError(
            f"dimension {m.shape[-1]} exceeds the analysis cap of {MAX_EIGEN_DIM}"
        )
    scale = max(1.0, float(np.abs(m).max())) if m.size else 1.0
    if not np.allclose(m, np.swapaxes(m, -1, -2), rtol=0.0, atol=1e-12 * scale):
        raise ValueError("matrix is not symmetric")
    return m


def symmetric_eigendecomposition(matrix) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns.

    Backed by LAPACK's symmetric driver; degenerate eigenvalues are fine.
    A stack of matrices ``(..., d, d)`` is decomposed matrix by matrix.
    """
    m = _as_symmetric(matrix)
    return np.linalg.eigh(m)


def symmetric_eigenvalues(matrix) -> np.ndarray:
    return np.linalg.eigvalsh(_as_symmetric(matrix))
