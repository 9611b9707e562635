"""Gate, optimizer and memory cost formulas for QAOA-based detection."""
from __future__ import annotations

from dataclasses import asdict, dataclass


@dataclass(frozen=True)
class GateCount:
    phase_gates: int  # (N+1)N/2 ZZ and Z rotations per level
    mixer_gates: int  # N X rotations per level
    per_level: int  # (N+3)N/2
    hadamard: int  # N
    total: int  # (N+5)Np/2


def gate_count(num_qubits: int, level: int) -> GateCount:
    if num_qubits < 1 or level < 1:
        raise ValueError("num_qubits and level must be at least 1")
    n, p = num_qubits, level
    return GateCount(
        phase_gates=(n + 1) * n // 2,
        mixer_gates=n,
        per_level=(n + 3) * n // 2,
        hadamard=n,
        total=(n + 5) * n * p // 2,
    )


@dataclass(frozen=True)
class MemoryEstimate:
    state_bytes: int  # 2**(N+3): 2**N complex numbers at 2 x 4 bytes
    dense_unitary_bytes: int  # 2**(2N+3)


def memory_estimate(num_qubits: int) -> MemoryEstimate:
    if num_qubits < 1:
        raise ValueError("num_qubits must be at least 1")
    return MemoryEstimate(1 << (num_qubits + 3), 1 << (2 * num_qubits + 3))


def max_qubits(ram_bytes: int, dense_unitary: bool = True) -> int:
    """Largest ``N`` whose storage stays strictly below ``ram_bytes``."""
    n = 0
    while True:
        est = memory_estimate(n + 1)
        need = est.dense_unitary_bytes if dense_unitary else est.state_bytes
        if need >= ram_bytes:
            return n
        n += 1


def interpolation_points(level: int) -> int:
    """Interpolation set size of a linear-model trust-region solver over 2p angles."""
    return (level + 1) * (2 * level + 1)


def complexity_report(num_qubits: int, level: int) -> dict:
    return {
        "num_qubits": num_qubits,
        "level": level,
        "gates": asdict(gate_count(num_qubits, level)),
        "memory": asdict(memory_estimate(num_qubits)),
        "optimizer": {
            "variables": 2 * level,
            "interpolation_points": interpolation_points(level),
        },
    }
