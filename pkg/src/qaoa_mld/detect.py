"""Classical ML, linear MMSE and QAOA-based ML detectors plus a BER harness.

SNR convention: channel entries and symbols have unit power and the noise
variance is ``sigma^2 = M_t * 10**(-SNR_dB / 10)``, so the per-receive-antenna
ratio ``E||H s||^2 / (M_r sigma^2)`` equals ``10**(SNR_dB / 10)``.

Every trial draws from its own generator seeded by
``SeedSequence(master_seed, spawn_key=(snr_index, trial_index))``. Results
therefore do not depend on execution order or worker count.
"""
from __future__ import annotations

import csv
import enum
import io
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable, Optional

import numpy as np

from .encoding import (
    ChannelInstance,
    diagonal,
    encode_mimo,
    spin_table,
)
from .errors import SizeError
from .optimize import OptimizationResult, OptimizerConfig, minimize_fp_many
from .qaoa import prepare_ansatz
from .statevector import MAX_QUBITS, basis_index, sample_bitstrings

MAX_CML_SPINS = 20
DEFAULT_SHOTS = 1024
TRIAL_CHUNK = 250  # trials optimised together in one batched simplex run


class DetectorKind(str, enum.Enum):
    CML = "cml"
    MMSE = "mmse"
    QML = "qml"


def default_level(num_spins: int) -> int:
    return 1 if num_spins <= 2 else 3


@lru_cache(maxsize=8)
def _candidates(num_spins: int) -> np.ndarray:
    return spin_table(num_spins).astype(float)


def detect_cml(instance: ChannelInstance) -> np.ndarray:
    """Exhaustive ``argmin_s ||y - H s||^2``; ties go to the lowest basis index."""
    n = instance.num_transmit
    if n > MAX_CML_SPINS:
        raise SizeError(f"exhaustive search is capped at {MAX_CML_SPINS} symbols")
    cands = _candidates(n)
    resid = instance.received[None, :] - cands @ instance.channel.T
    return cands[int(np.argmin(np.einsum("ij,ij->i", resid, resid)))].astype(int)


def detect_mmse(instance: ChannelInstance) -> np.ndarray:
    """``sign((H^T H + sigma^2 I)^{-1} H^T y)`` with ``sign(0) = +1``."""
    h = instance.channel
    gram = h.T @ h + instance.noise_variance * np.eye(h.shape[1])
    est = np.linalg.solve(gram, h.T @ instance.received)
    return np.where(est < 0, -1, 1)


@dataclass(frozen=True)
class QmlOutcome:
    symbols: np.ndarray
    bits: str
    counts: dict
    optimization: OptimizationResult


def run_qml_many(instances, level: Optional[int] = None,
                 optimizer: Optional[OptimizerConfig] = None, shots: int = DEFAULT_SHOTS,
                 seeds=None) -> list[QmlOutcome]:
    """:func:`run_qml` over same-size instances with one batched optimisation."""
    instances = list(instances)
    if not instances:
        return []
    n = instances[0].num_transmit
    if any(inst.num_transmit != n for inst in instances):
        raise ValueError("all instances must have the same number of transmit antennas")
    if n > MAX_QUBITS:
        raise SizeError(f"QAOA simulation is capped at {MAX_QUBITS} symbols")
    seeds = [None] * len(instances) if seeds is None else list(seeds)
    level = level or default_level(n)
    simplified = [encode_mimo(inst, "simplified") for inst in instances]
    optimized = minimize_fp_many(simplified, level, optimizer)
    outcomes = []
    for inst, model, opt, seed in zip(instances, simplified, optimized, seeds):
        state = prepare_ansatz(model, opt.best_params)
        counts = sample_bitstrings(state, shots, seed)
        full = diagonal(encode_mimo(inst, "full"))
        bits = min(counts, key=lambda b: (full[basis_index(b)], basis_index(b)))
        symbols = np.array([1 - 2 * int(ch) for ch in bits])
        outcomes.append(QmlOutcome(symbols, bits, counts, opt))
    return outcomes


def run_qml(instance: ChannelInstance, level: Optional[int] = None,
            optimizer: Optional[OptimizerConfig] = None, shots: int = DEFAULT_SHOTS,
            seed=None) -> QmlOutcome:
    """QAOA detection with full diagnostics.

    Optimises the angles on the simplified model, samples the optimised
    state ``shots`` times, and returns the sampled bitstring with the lowest
    ML objective (lowest basis index on ties).
    """
    return run_qml_many([instance], level, optimizer, shots, [seed])[0]


def detect_qml(instance: ChannelInstance, level: Optional[int] = None,
               optimizer: Optional[OptimizerConfig] = None, shots: int = DEFAULT_SHOTS,
               seed=None) -> np.ndarray:
    return run_qml(instance, level, optimizer, shots, seed).symbols


# -- Monte-Carlo BER ---------------------------------------------------------

@dataclass(frozen=True)
class TrialConfig:
    system_size: int
    snr_db_list: tuple
    trials_per_snr: int
    qaoa_level: Optional[int] = None
    shots: int = DEFAULT_SHOTS
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    master_seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "snr_db_list", tuple(float(v) for v in self.snr_db_list))
        if self.system_size < 1:
            raise ValueError("system_size must be at least 1")
        if self.trials_per_snr < 1:
            raise ValueError("trials_per_snr must be at least 1")
        if self.shots < 1:
            raise ValueError("shots must be at least 1")
        if not self.snr_db_list:
            raise ValueError("snr_db_list must not be empty")

    @property
    def level(self) -> int:
        return self.qaoa_level or default_level(self.system_size)


def noise_variance(snr_db: float, num_transmit: int) -> float:
    return num_transmit * 10.0 ** (-snr_db / 10.0)


def trial_rng(master_seed: int, snr_index: int, trial_index: int) -> np.random.Generator:
    ss = np.random.SeedSequence(master_seed, spawn_key=(snr_index, trial_index))
    return np.random.default_rng(ss)


def draw_trial(config: TrialConfig, snr_index: int, trial_index: int):
    """Random instance for one trial plus the seed for its measurement shots."""
    rng = trial_rng(config.master_seed, snr_index, trial_index)
    n = config.system_size
    sigma2 = noise_variance(config.snr_db_list[snr_index], n)
    h = rng.standard_normal((n, n))
    s = 1 - 2 * rng.integers(0, 2, n)
    noise = rng.standard_normal(n) * np.sqrt(sigma2)
    shot_seed = int(rng.integers(0, 2**63 - 1))
    return ChannelInstance.from_transmission(h, s, noise, sigma2), shot_seed


def _run_chunk(args):
    config, detectors, snr_index, trials = args
    draws = [draw_trial(config, snr_index, t) for t in trials]
    totals = {}
    for kind in detectors:
        if kind is DetectorKind.CML:
            estimates = [detect_cml(inst) for inst, _ in draws]
        elif kind is DetectorKind.MMSE:
            estimates = [detect_mmse(inst) for inst, _ in draws]
        else:
            outcomes = run_qml_many([inst for inst, _ in draws], config.level,
                                    config.optimizer, config.shots,
                                    [seed for _, seed in draws])
            estimates = [o.symbols for o in outcomes]
        totals[kind] = sum(
            int(np.count_nonzero(est != inst.true_symbols))
            for est, (inst, _) in zip(estimates, draws)
        )
    return totals


@dataclass(frozen=True)
class BerRow:
    snr_db: float
    trials: int
    bits: int
    errors: dict  # DetectorKind -> bit error count

    def ber(self, kind: DetectorKind) -> float:
        return self.errors[kind] / self.bits


@dataclass(frozen=True)
class BerReport:
    rows: list
    detectors: tuple
    config: TrialConfig

    def ber(self, kind) -> np.ndarray:
        kind = DetectorKind(kind)
        return np.array([r.ber(kind) for r in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["snr_db", "trials"] + [f"ber_{k.value}" for k in DetectorKind])
        for r in self.rows:
            w.writerow([repr(r.snr_db), r.trials] + [
                repr(r.ber(k)) if k in r.errors else "" for k in DetectorKind
            ])
        return buf.getvalue()

    def metadata(self) -> dict:
        cfg = asdict(self.config)
        cfg["qaoa_level"] = self.config.level
        return {
            "config": cfg,
            "master_seed": self.config.master_seed,
            "detectors": [k.value for k in self.detectors],
            "snr_convention": "sigma^2 = M_t * 10**(-SNR_dB/10); H, s unit power",
            "seed_derivation": "SeedSequence(master_seed, spawn_key=(snr_index, trial_index))",
            "errors": [
                {"snr_db": r.snr_db, "bits": r.bits,
                 **{k.value: r.errors[k] for k in self.detectors}}
                for r in self.rows
            ],
        }

    def metadata_json(self) -> str:
        return json.dumps(self.metadata(), indent=2, sort_keys=True) + "\n"


def run_ber(config: TrialConfig, detectors: Iterable = tuple(DetectorKind),
            workers: int = 1) -> BerReport:
    """Monte-Carlo bit error rates for each detector at each SNR.

    All detectors see the same channel, symbols and noise in a trial.
    ``workers > 1`` spreads trials over processes without changing results.
    """
    detectors = tuple(dict.fromkeys(DetectorKind(d) for d in detectors))
    if not detectors:
        raise ValueError("at least one detector is required")
    if DetectorKind.QML in detectors and config.system_size > MAX_QUBITS:
        raise SizeError(f"QAOA simulation is capped at {MAX_QUBITS} symbols")
    trials = range(config.trials_per_snr)
    jobs = [
        (config, detectors, i, trials[start:start + TRIAL_CHUNK])
        for i in range(len(config.snr_db_list))
        for start in range(0, config.trials_per_snr, TRIAL_CHUNK)
    ]
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_run_chunk, jobs))
    else:
        results = [_run_chunk(j) for j in jobs]

    totals = [{k: 0 for k in detectors} for _ in config.snr_db_list]
    for (_, _, i, _), res in zip(jobs, results):
        for k, e in res.items():
            totals[i][k] += e
    bits = config.trials_per_snr * config.system_size
    rows = [BerRow(snr, config.trials_per_snr, bits, totals[i])
            for i, snr in enumerate(config.snr_db_list)]
    return BerReport(rows, detectors, config)


def wilson_interval(errors: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Two-sided Wilson score interval for a binomial proportion."""
    p = errors / n
    denom = 1 + z * z / n
    centre = (p + z * z / (2 * n)) / denom
    half = z * np.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom
    return max(0.0, centre - half), min(1.0, centre + half)
