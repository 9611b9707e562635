"""Derivative-free multistart minimisation of ``F_p``.

Each start runs its own Nelder-Mead simplex. The starts advance in
lockstep so that the trial points of every active simplex are evaluated in
one vectorised call, but no information flows between them: the result of
start ``i`` does not depend on how many other starts are running.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.stats import qmc

from .encoding import IsingModel, diagonal
from .qaoa import QaoaParams, fp_batch
from .statevector import _check_qubits

REFLECT, EXPAND, CONTRACT, SHRINK = 1.0, 2.0, 0.5, 0.5


def default_multistarts(level: int) -> int:
    return 9 if level == 1 else 25


@dataclass(frozen=True)
class OptimizerConfig:
    multistarts: Optional[int] = None  # None -> default_multistarts(p)
    max_evals_per_start: Optional[int] = None  # None -> 200 p
    value_tolerance: float = 1e-8
    step_tolerance: float = 1e-6
    initial_step: float = np.pi / 8
    seed: int = 0

    def __post_init__(self):
        if self.multistarts is not None and self.multistarts < 1:
            raise ValueError("multistarts must be at least 1")
        if self.max_evals_per_start is not None and self.max_evals_per_start < 3:
            raise ValueError("max_evals_per_start must be at least 3")
        if not (self.value_tolerance > 0 and self.step_tolerance > 0 and self.initial_step > 0):
            raise ValueError("tolerances and initial_step must be positive")

    def starts_for(self, level: int) -> int:
        return self.multistarts or default_multistarts(level)

    def budget_for(self, level: int) -> int:
        return self.max_evals_per_start or 200 * level


@dataclass(frozen=True)
class OptimizationResult:
    best_params: QaoaParams
    best_value: float
    evaluations: int
    start_values: np.ndarray
    final_values: np.ndarray  # per-start local minimum
    best_start: int
    trace: list = field(default_factory=list)  # (QaoaParams, value) per iteration of the winning start


def grid_seed_points(level: int, starts: int, seed: int = 0) -> list[QaoaParams]:
    """Deterministic, evenly spread start points in ``[0, pi]^(2p)``.

    The centroid ``(pi/2, ..., pi/2)`` always comes first. When ``starts`` is
    ``m**(2p)`` for odd ``m`` the points form the full midpoint lattice
    ``{(2i + 1) pi / (2m)}``; otherwise the remainder is filled from a
    seeded scrambled Halton sequence.
    """
    if starts < 1:
        raise ValueError("starts must be at least 1")
    dim = 2 * level
    centre = np.full(dim, np.pi / 2)
    m = round(starts ** (1.0 / dim))
    if m % 2 == 1 and m**dim == starts:
        axis = (2 * np.arange(m) + 1) * np.pi / (2 * m)
        pts = np.stack(np.meshgrid(*([axis] * dim), indexing="ij"), -1).reshape(-1, dim)
        mid = int(np.flatnonzero(np.all(np.isclose(pts, centre), axis=1))[0])
        pts = np.vstack([pts[mid], np.delete(pts, mid, axis=0)])
    else:
        rest = qmc.Halton(d=dim, scramble=True, seed=seed).random(starts - 1) * np.pi
        pts = np.vstack([centre, rest])
    return [QaoaParams.from_vector(x) for x in pts]


def nelder_mead_batch(fun: Callable[[np.ndarray, np.ndarray], np.ndarray], x0: np.ndarray,
                      config: OptimizerConfig, max_evals: int, record: bool = False):
    """Run one Nelder-Mead simplex per row of ``x0`` in lockstep.

    ``fun(x, rows)`` maps points ``x`` of shape ``(B, n)`` belonging to
    simplices ``rows`` to ``B`` values. Returns per-simplex best points, best
    values and evaluation counts, plus (when ``record``) the per-iteration
    best point and value, NaN-padded once a simplex stops.
    """
    x0 = np.atleast_2d(np.asarray(x0, dtype=float))
    n_starts, n = x0.shape
    all_rows = np.arange(n_starts)
    simplex = np.repeat(x0[:, None, :], n + 1, axis=1)
    for k in range(n):
        simplex[:, k + 1, k] += config.initial_step
    values = fun(simplex.reshape(-1, n), np.repeat(all_rows, n + 1)).reshape(n_starts, n + 1)
    evals = np.full(n_starts, n + 1)
    active = np.ones(n_starts, dtype=bool)
    history_x, history_f = [], []

    while True:
        order = np.argsort(values, axis=1, kind="stable")
        simplex = np.take_along_axis(simplex, order[..., None], axis=1)
        values = np.take_along_axis(values, order, axis=1)
        if record:
            history_x.append(simplex[:, 0].copy())
            history_f.append(np.where(active, values[:, 0], np.nan))

        spread_f = values[:, -1] - values[:, 0]
        spread_x = np.max(np.abs(simplex[:, 1:] - simplex[:, :1]), axis=(1, 2))
        converged = (spread_f <= config.value_tolerance) & (spread_x <= config.step_tolerance)
        active &= ~converged & (evals + 1 <= max_evals)
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break

        s, f = simplex[idx], values[idx]
        centroid = s[:, :-1].mean(axis=1)
        worst = s[:, -1]
        xr = centroid + REFLECT * (centroid - worst)
        fr = fun(xr, idx)
        evals[idx] += 1

        best_f, second_f, worst_f = f[:, 0], f[:, -2], f[:, -1]
        expand = fr < best_f
        accept_r = (fr >= best_f) & (fr < second_f)
        outside = (fr >= second_f) & (fr < worst_f)
        inside = fr >= worst_f

        # at most one follow-up point per simplex: expansion or contraction
        xt = np.where(expand[:, None], centroid + EXPAND * (xr - centroid),
                      np.where(outside[:, None], centroid + CONTRACT * (xr - centroid),
                               centroid + CONTRACT * (worst - centroid)))
        need = (expand | outside | inside) & (evals[idx] + 1 <= max_evals)
        ft = np.full(idx.size, np.inf)
        if need.any():
            ft[need] = fun(xt[need], idx[need])
            evals[idx[need]] += 1

        new_x = worst.copy()
        new_f = worst_f.copy()
        take_r = accept_r | (expand & ~(ft < fr))
        take_t = (expand & (ft < fr)) | (outside & (ft <= fr)) | (inside & (ft < worst_f))
        new_x[take_r], new_f[take_r] = xr[take_r], fr[take_r]
        new_x[take_t], new_f[take_t] = xt[take_t], ft[take_t]
        # follow-up skipped for budget: still keep a reflection that beats the worst vertex
        keep_r = ~take_r & ~take_t & (fr < worst_f)
        new_x[keep_r], new_f[keep_r] = xr[keep_r], fr[keep_r]
        s[:, -1], f[:, -1] = new_x, new_f

        shrink = ~(take_r | take_t | keep_r) & (evals[idx] + n <= max_evals)
        if shrink.any():
            ss = s[shrink]
            ss[:, 1:] = ss[:, :1] + SHRINK * (ss[:, 1:] - ss[:, :1])
            fs = fun(ss[:, 1:].reshape(-1, n), np.repeat(idx[shrink], n)).reshape(-1, n)
            f_shr = f[shrink]
            f_shr[:, 1:] = fs
            s[shrink], f[shrink] = ss, f_shr
            evals[idx[shrink]] += n
        simplex[idx], values[idx] = s, f

    return simplex[:, 0], values[:, 0], evals, np.array(history_x), np.array(history_f)


def minimize_fp_many(models: Sequence[IsingModel], level: int = 1,
                     config: Optional[OptimizerConfig] = None,
                     record_trace: bool = False,
                     start_points: Optional[Sequence[QaoaParams]] = None) -> list[OptimizationResult]:
    """:func:`minimize_fp` for several same-size models in one batched run.

    Each model's result is identical to optimising it on its own.
    """
    if level < 1:
        raise ValueError("level must be at least 1")
    if not models:
        return []
    n = models[0].num_spins
    if any(m.num_spins != n for m in models):
        raise ValueError("all models must have the same number of spins")
    _check_qubits(n)
    config = config or OptimizerConfig()
    energies = np.stack([diagonal(m) for m in models])
    if start_points is None:
        starts = grid_seed_points(level, config.starts_for(level), config.seed)
    else:
        starts = list(start_points)
        if not starts or any(p.level != level for p in starts):
            raise ValueError(f"start_points must be a non-empty list of level-{level} params")
    n_starts = len(starts)
    x0 = np.tile(np.array([p.to_vector() for p in starts]), (len(models), 1))

    def fun(x, rows):
        return fp_batch(energies[rows // n_starts], n, x)

    start_values = fun(x0, np.arange(x0.shape[0])).reshape(len(models), n_starts)
    best_x, best_f, evals, hist_x, hist_f = nelder_mead_batch(
        fun, x0, config, config.budget_for(level), record=record_trace
    )
    results = []
    for m in range(len(models)):
        sl = slice(m * n_starts, (m + 1) * n_starts)
        local = best_f[sl]
        winner = int(np.argmin(local))
        row = m * n_starts + winner
        trace = []
        if record_trace:
            keep = ~np.isnan(hist_f[:, row])
            trace = [(QaoaParams.from_vector(x), float(v))
                     for x, v in zip(hist_x[keep, row], hist_f[keep, row])]
        results.append(OptimizationResult(
            best_params=QaoaParams.from_vector(best_x[row]),
            best_value=float(local[winner]),
            evaluations=int(evals[sl].sum() + n_starts),
            start_values=start_values[m],
            final_values=local.copy(),
            best_start=winner,
            trace=trace,
        ))
    return results


def minimize_fp(model: IsingModel, level: int = 1,
                config: Optional[OptimizerConfig] = None,
                record_trace: bool = True,
                start_points: Optional[Sequence[QaoaParams]] = None) -> OptimizationResult:
    """Minimise the level-``p`` energy over its ``2p`` angles.

    Starts come from :func:`grid_seed_points` unless ``start_points`` is
    given (``config.multistarts`` is then ignored); each local search is a
    Nelder-Mead simplex that stops once both the value spread and the
    simplex size fall below tolerance, or its evaluation budget runs out.
    Ties between starts go to the lowest start index.
    """
    return minimize_fp_many([model], level, config, record_trace, start_points)[0]
