"""Ising encoding of BPSK MIMO maximum-likelihood detection.

For ``y = H s + n`` with ``s`` in ``{-1, +1}^N`` the ML objective expands to

    ||y - H s||^2 = sum_{l>k} 2 A_kl s_k s_l - sum_k 2 b_k s_k + c + tr(A)

with ``A = H^T H``, ``b = H^T y`` and ``c = y^T y``. Replacing ``s_k`` by the
Pauli-Z eigenvalue ``1 - 2 z_k`` gives a diagonal Hamiltonian whose
eigenvalue on ``|z>`` is the objective at ``s = g(z)``. The *full* form keeps
the factor two and the constant; the *simplified* form drops both, which
is a positive affine map and therefore preserves the minimiser.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from .errors import DimensionError, InstanceFormatError
from .statevector import MAX_QUBITS, _check_qubits, basis_index, bitstring

FORMS = ("full", "simplified")


@dataclass(frozen=True)
class ChannelInstance:
    """A real-valued detection problem ``y = H s + n``."""

    channel: np.ndarray
    received: np.ndarray
    noise_variance: float
    true_symbols: Optional[np.ndarray] = None

    def __post_init__(self):
        h = np.atleast_2d(np.asarray(self.channel, dtype=float))
        y = np.atleast_1d(np.asarray(self.received, dtype=float))
        if h.ndim != 2:
            raise DimensionError("channel must be a matrix")
        if y.shape != (h.shape[0],):
            raise DimensionError(
                f"received has length {y.size}, channel has {h.shape[0]} rows"
            )
        if not self.noise_variance > 0:
            raise ValueError("noise_variance must be positive")
        object.__setattr__(self, "channel", h)
        object.__setattr__(self, "received", y)
        object.__setattr__(self, "noise_variance", float(self.noise_variance))
        if self.true_symbols is not None:
            s = np.atleast_1d(np.asarray(self.true_symbols))
            if s.shape != (h.shape[1],):
                raise DimensionError(
                    f"true_symbols has length {s.size}, expected {h.shape[1]}"
                )
            if not np.all(np.isin(s, (-1, 1))):
                raise ValueError("true_symbols entries must be -1 or +1")
            object.__setattr__(self, "true_symbols", s.astype(int))

    @property
    def num_transmit(self) -> int:
        return self.channel.shape[1]

    @property
    def num_receive(self) -> int:
        return self.channel.shape[0]

    @classmethod
    def from_transmission(cls, channel, symbols, noise, noise_variance=1.0):
        """Build ``y = H s + n`` from its parts, keeping ``s`` as ground truth."""
        channel = np.atleast_2d(np.asarray(channel, dtype=float))
        symbols = np.atleast_1d(np.asarray(symbols))
        received = channel @ symbols + np.atleast_1d(np.asarray(noise, dtype=float))
        return cls(channel, received, noise_variance, symbols)

    def to_dict(self) -> dict:
        record = {
            "channel": self.channel.tolist(),
            "received": self.received.tolist(),
            "noise_variance": self.noise_variance,
        }
        if self.true_symbols is not None:
            record["true_symbols"] = [int(v) for v in self.true_symbols]
        return record

    @classmethod
    def from_dict(cls, record) -> "ChannelInstance":
        """Validate a decoded JSON record; errors name the offending field."""
        if not isinstance(record, dict):
            raise InstanceFormatError("<root>", "expected a JSON object")
        for key in ("channel", "received", "noise_variance"):
            if key not in record:
                raise InstanceFormatError(key, "missing")
        extra = set(record) - {"channel", "received", "noise_variance", "true_symbols"}
        if extra:
            raise InstanceFormatError(sorted(extra)[0], "unknown field")

        rows = record["channel"]
        if (
            not isinstance(rows, list)
            or not rows
            or not all(isinstance(r, list) and r for r in rows)
            or len({len(r) for r in rows}) != 1
            or not all(_is_real(v) for r in rows for v in r)
        ):
            raise InstanceFormatError(
                "channel", "expected a non-empty rectangular array of reals"
            )
        received = record["received"]
        if not isinstance(received, list) or not all(_is_real(v) for v in received):
            raise InstanceFormatError("received", "expected an array of reals")
        if len(received) != len(rows):
            raise InstanceFormatError(
                "received", f"length {len(received)} does not match {len(rows)} channel rows"
            )
        sigma2 = record["noise_variance"]
        if not _is_real(sigma2) or not sigma2 > 0:
            raise InstanceFormatError("noise_variance", "expected a positive real")
        symbols = record.get("true_symbols")
        if symbols is not None:
            if (
                not isinstance(symbols, list)
                or len(symbols) != len(rows[0])
                or any(v not in (-1, 1) or isinstance(v, bool) for v in symbols)
            ):
                raise InstanceFormatError(
                    "true_symbols", f"expected {len(rows[0])} entries of -1 or +1"
                )
        return cls(np.array(rows, dtype=float), np.array(received, dtype=float),
                   float(sigma2), None if symbols is None else np.array(symbols))

    def dump(self, path) -> None:
        Path(path).write_text(json.dumps(self.to_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "ChannelInstance":
        try:
            record = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise InstanceFormatError("<root>", f"invalid JSON ({exc.msg})") from None
        return cls.from_dict(record)


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool) and np.isfinite(v)


@dataclass(frozen=True)
class IsingModel:
    """Diagonal Hamiltonian ``sum_{l>k} J_kl Z_k Z_l - sum_k h_k Z_k + offset``.

    ``couplings`` is an ``N x N`` array whose strictly upper triangle holds
    ``J_kl``; everything on or below the diagonal is zero.
    """

    couplings: np.ndarray
    fields: np.ndarray
    offset: float = 0.0
    form: str = "simplified"

    def __post_init__(self):
        h = np.atleast_1d(np.asarray(self.fields, dtype=float))
        j = np.triu(np.atleast_2d(np.asarray(self.couplings, dtype=float)), k=1)
        if j.shape != (h.size, h.size):
            raise DimensionError("couplings must be N x N for N fields")
        if self.form not in FORMS:
            raise ValueError(f"form must be one of {FORMS}")
        object.__setattr__(self, "couplings", j)
        object.__setattr__(self, "fields", h)
        object.__setattr__(self, "offset", float(self.offset))

    @property
    def num_spins(self) -> int:
        return self.fields.size

    def coupling_map(self) -> dict[tuple[int, int], float]:
        """Nonzero couplings keyed by 1-based ``(k, l)`` with ``l > k``."""
        ks, ls = np.nonzero(self.couplings)
        return {(int(k) + 1, int(l) + 1): float(self.couplings[k, l]) for k, l in zip(ks, ls)}

    def to_dict(self) -> dict:
        return {
            "form": self.form,
            "num_spins": self.num_spins,
            "couplings": [
                {"k": k, "l": l, "value": v} for (k, l), v in self.coupling_map().items()
            ],
            "fields": self.fields.tolist(),
            "offset": self.offset,
        }


def _ising_from_quadratic(gram, linear, const, form) -> IsingModel:
    if form == "full":
        return IsingModel(2.0 * gram, 2.0 * linear, const + float(np.trace(gram)), "full")
    if form == "simplified":
        return IsingModel(gram, linear, 0.0, "simplified")
    raise ValueError(f"form must be one of {FORMS}")


def encode_mimo(instance: ChannelInstance, form: str = "full") -> IsingModel:
    """Ising model of ``min_s ||y - H s||^2`` with ``N = M_t`` spins."""
    h, y = instance.channel, instance.received
    return _ising_from_quadratic(h.T @ h, h.T @ y, float(y @ y), form)


def encode_multiuser(user_channels: Sequence, received, form: str = "simplified") -> IsingModel:
    """Encode a multi-user uplink ``y = sum_k H_k s_k + n``.

    Each user's block (a scalar for single-antenna users, a vector, or an
    ``M_r x N_k`` matrix) is placed side by side, giving one spin per
    transmitted symbol: ``K`` spins for SISO users, ``N K`` for ``N``-antenna
    users.
    """
    y = np.atleast_1d(np.asarray(received, dtype=float))
    blocks = []
    for idx, hk in enumerate(user_channels):
        hk = np.asarray(hk, dtype=float)
        if hk.ndim == 0:
            hk = hk.reshape(1, 1)
        elif hk.ndim == 1:
            hk = hk.reshape(-1, 1)
        if hk.ndim != 2 or hk.shape[0] != y.size:
            raise DimensionError(
                f"user {idx} channel has {hk.shape[0] if hk.ndim else 1} rows, "
                f"received vector has {y.size}"
            )
        blocks.append(hk)
    if not blocks:
        raise DimensionError("at least one user channel is required")
    stacked = np.hstack(blocks)
    return _ising_from_quadratic(stacked.T @ stacked, stacked.T @ y, float(y @ y), form)


def spin_of_bit(z: int) -> int:
    if z not in (0, 1) or isinstance(z, bool):
        raise ValueError(f"bit must be 0 or 1, got {z!r}")
    return 1 - 2 * z


def bit_of_spin(s: int) -> int:
    if s not in (-1, 1) or isinstance(s, bool):
        raise ValueError(f"spin must be -1 or +1, got {s!r}")
    return (1 - s) // 2


def spins_of_bits(bits: str) -> np.ndarray:
    basis_index(bits)
    return np.array([spin_of_bit(int(ch)) for ch in bits])


def bits_of_spins(spins) -> str:
    return "".join(str(bit_of_spin(int(s))) for s in spins)


@lru_cache(maxsize=32)
def spin_table(num_spins: int) -> np.ndarray:
    """``(2**N, N)`` array of spins in basis-index order (row 0 is all +1)."""
    idx = np.arange(1 << num_spins)
    shifts = np.arange(num_spins - 1, -1, -1)
    table = 1 - 2 * ((idx[:, None] >> shifts) & 1)
    table = table.astype(np.int8)
    table.setflags(write=False)
    return table


def energy(model: IsingModel, bits: str) -> float:
    """Eigenvalue of the model on basis state ``|bits>``."""
    if len(bits) != model.num_spins:
        raise DimensionError(f"bitstring length {len(bits)} != {model.num_spins} spins")
    s = spins_of_bits(bits).astype(float)
    return float(s @ model.couplings @ s - model.fields @ s + model.offset)


def diagonal(model: IsingModel) -> np.ndarray:
    """All ``2**N`` eigenvalues in basis-index order."""
    _check_qubits(model.num_spins)
    s = spin_table(model.num_spins).astype(float)
    return np.einsum("ik,kl,il->i", s, model.couplings, s) - s @ model.fields + model.offset


def classical_objective(instance: ChannelInstance, symbols) -> float:
    """``||y - H s||^2``."""
    s = np.asarray(symbols, dtype=float)
    if s.shape != (instance.num_transmit,):
        raise DimensionError(f"expected {instance.num_transmit} symbols, got {s.size}")
    r = instance.received - instance.channel @ s
    return float(r @ r)


__all__ = [
    "ChannelInstance", "IsingModel", "MAX_QUBITS", "bitstring", "encode_mimo",
    "encode_multiuser", "spin_of_bit", "bit_of_spin", "spins_of_bits",
    "bits_of_spins", "spin_table", "energy", "diagonal", "classical_objective",
]
