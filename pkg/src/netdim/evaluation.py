"""Agreement between centrality rankings and simulated spreading ability."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import centrality
from .centrality import RankList, ScoreVector
from .epidemic import spreading_ability
from .graph_core import Graph


@dataclass(frozen=True)
class TauResult:
    tau: float
    n_c: int
    n_d: int
    n: int


def kendall_tau_a(a: Sequence[float], b: Sequence[float]) -> TauResult:
    """Kendall tau-a: ``(n_c - n_d) / (n(n-1)/2)``.

    A pair tied in either sequence is neither concordant nor discordant but
    still counts in the denominator.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape or a.ndim != 1:
        raise ValueError("sequences must be one-dimensional and of equal length")
    n = len(a)
    if n < 2:
        raise ValueError("need at least two observations")
    n_c = n_d = 0
    for i in range(n - 1):
        # comparisons rather than subtraction keep +-inf sentinels well defined
        sa = np.greater(a[i + 1 :], a[i]).astype(np.int8) - np.less(a[i + 1 :], a[i])
        sb = np.greater(b[i + 1 :], b[i]).astype(np.int8) - np.less(b[i + 1 :], b[i])
        prod = sa * sb
        n_c += int(np.count_nonzero(prod > 0))
        n_d += int(np.count_nonzero(prod < 0))
    return TauResult((n_c - n_d) / (0.5 * n * (n - 1)), n_c, n_d, n)


def aligned_scores(sv: ScoreVector) -> np.ndarray:
    """Scores oriented so that larger means more influential."""
    if sv.direction == centrality.ASCENDING:
        return -sv.scores
    return sv.scores


@dataclass(frozen=True)
class SweepRow:
    measure: str
    lam: float
    tau: float


def tau_sweep(
    g: Graph,
    measures: Iterable[str],
    lambdas: Sequence[float],
    t_obs: int = 10,
    runs: int = 100,
    master_seed: int = 0,
    workers: int = 1,
    scores: dict[str, ScoreVector] | None = None,
) -> list[SweepRow]:
    """Kendall tau between each measure and spreading ability, per lambda.

    The ability vector for a given lambda is computed once and shared by
    all measures.
    """
    if not lambdas:
        raise ValueError("lambda grid is empty")
    measures = [m.upper() for m in measures]
    scores = dict(scores or {})
    for m in measures:
        if m not in scores:
            scores[m] = centrality.compute(g, m)
    rows = []
    for lam in lambdas:
        ability = spreading_ability(g, lam, t_obs, runs, master_seed, workers)
        for m in measures:
            tau = kendall_tau_a(aligned_scores(scores[m]), ability).tau
            rows.append(SweepRow(m, float(lam), tau))
    return rows


def topk_overlap(a: RankList, b: RankList) -> int:
    if len(a.labels) != len(b.labels):
        raise ValueError("rank lists differ in length")
    return len(set(a.labels) & set(b.labels))


@dataclass(frozen=True)
class ScatterRow:
    label: str
    x: float
    y: float
    f: float


def scatter_table(
    g: Graph,
    comparison: str,
    lam: float = 0.05,
    t_obs: int = 10,
    runs: int = 100,
    master_seed: int = 0,
    workers: int = 1,
) -> list[ScatterRow]:
    """Per-node (LID, comparison measure, mean F(t_obs)) triples."""
    comparison = comparison.upper()
    if comparison not in ("DC", "LD"):
        raise ValueError(f"comparison must be DC or LD, got {comparison}")
    lid = centrality.local_information_dimensionality(g)
    other = centrality.compute(g, comparison)
    ability = spreading_ability(g, lam, t_obs, runs, master_seed, workers)
    return [
        ScatterRow(g.labels[i], float(lid.scores[i]), float(other.scores[i]), float(ability[i]))
        for i in range(g.n)
    ]
