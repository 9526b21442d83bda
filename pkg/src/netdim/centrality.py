"""Node centralities: DC, BC, CC, EC, local dimension and LID.

Every measure returns a :class:`ScoreVector` that carries its own ranking
direction. LD ranks ascending (smaller dimension = more influential), all
other measures rank descending.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .graph_core import Graph, GraphError, _bfs, _gather_neighbors, eccentricities, label_sort_key

MEASURES = ("DC", "BC", "CC", "EC", "LD", "LID")
ASCENDING = "ascending"
DESCENDING = "descending"
DIRECTIONS = {"DC": DESCENDING, "BC": DESCENDING, "CC": DESCENDING,
              "EC": DESCENDING, "LD": ASCENDING, "LID": DESCENDING}

# Scores equal to this many significant digits are ranked as ties.
TIE_DIGITS = 8


class ConvergenceError(RuntimeError):
    def __init__(self, iterations: int):
        self.iterations = iterations
        super().__init__(f"power iteration did not converge after {iterations} iterations")


@dataclass(frozen=True)
class ScoreVector:
    measure: str
    scores: np.ndarray
    labels: tuple[str, ...]
    direction: str = field(default="")
    universal: np.ndarray | None = None  # mask of sentinel-scored nodes (LD/LID)

    def __post_init__(self) -> None:
        if self.measure not in DIRECTIONS:
            raise ValueError(f"unknown measure: {self.measure}")
        if not self.direction:
            object.__setattr__(self, "direction", DIRECTIONS[self.measure])
        if len(self.scores) != len(self.labels):
            raise ValueError("scores and labels differ in length")

    def __len__(self) -> int:
        return len(self.scores)

    def is_sentinel(self, i: int) -> bool:
        return self.universal is not None and bool(self.universal[i])

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.labels, self.scores.tolist()))


@dataclass(frozen=True)
class RankList:
    measure: str
    labels: tuple[str, ...]
    scores: tuple[float, ...]
    truncated: bool = False  # requested k exceeded n
    sentinel: tuple[bool, ...] = ()


def degree_centrality(g: Graph) -> ScoreVector:
    return ScoreVector("DC", g.degrees.astype(float), g.labels)


def closeness_centrality(g: Graph) -> ScoreVector:
    g.require_connected("closeness centrality")
    scores = np.zeros(g.n)
    for s in range(g.n):
        total = int(_bfs(g, s)[0].sum())
        scores[s] = 1.0 / total if total else 0.0
    return ScoreVector("CC", scores, g.labels)


def _brandes_pass(g: Graph, s: int, bc: np.ndarray) -> None:
    """Add the single-source dependencies of ``s`` to ``bc``.

    Forward phase counts shortest paths (sigma) level by level; the backward
    phase walks the recorded predecessor edges in reverse level order and
    accumulates ``delta[v] += sigma[v] / sigma[w] * (1 + delta[w])``.
    """
    n = g.n
    dist = np.full(n, -1, dtype=np.int64)
    sigma = np.zeros(n)
    delta = np.zeros(n)
    dist[s] = 0
    sigma[s] = 1.0
    frontier = np.array([s], dtype=np.int64)
    pred_edges: list[tuple[np.ndarray, np.ndarray]] = []
    depth = 0
    while True:
        nbrs, owners = _gather_neighbors(g, frontier)
        fresh = dist[nbrs] == -1
        if not fresh.any():
            break
        depth += 1
        dist[nbrs[fresh]] = depth
        on_path = dist[nbrs] == depth
        w, v = nbrs[on_path], owners[on_path]
        sigma += np.bincount(w, weights=sigma[v], minlength=n)
        pred_edges.append((v, w))
        frontier = np.unique(w)
    for v, w in reversed(pred_edges):
        delta += np.bincount(v, weights=sigma[v] / sigma[w] * (1.0 + delta[w]), minlength=n)
    delta[s] = 0.0
    bc += delta


def betweenness_centrality(g: Graph) -> ScoreVector:
    """Unnormalized betweenness over unordered pairs, endpoints excluded."""
    bc = np.zeros(g.n)
    for s in range(g.n):
        _brandes_pass(g, s, bc)
    return ScoreVector("BC", bc / 2.0, g.labels)


def eigenvector_centrality(
    g: Graph,
    tol: float = 1e-10,
    max_iter: int = 100_000,
    start: np.ndarray | None = None,
) -> ScoreVector:
    """Principal adjacency eigenvector by power iteration, unit Euclidean norm.

    Iterates with ``A + I``: same eigenvectors, but the Perron root becomes
    strictly dominant in modulus, so bipartite graphs converge too.
    """
    g.require_connected("eigenvector centrality")
    a = g.adjacency
    x = np.ones(g.n) if start is None else np.abs(np.asarray(start, dtype=float))
    if not x.any():
        raise ValueError("start vector must have a nonzero entry")
    x = x / np.linalg.norm(x)
    for it in range(1, max_iter + 1):
        y = a @ x + x
        y /= np.linalg.norm(y)
        if np.max(np.abs(y - x)) < tol:
            return ScoreVector("EC", y, g.labels)
        x = y
    raise ConvergenceError(max_iter)


def eigenvalue_estimate(g: Graph, x: np.ndarray) -> float:
    """Rayleigh quotient ``x.A.x / x.x``."""
    return float(x @ (g.adjacency @ x) / (x @ x))


@dataclass(frozen=True)
class BoxRow:
    l: int
    n_cum: int
    n_shell: int
    p: float
    info: float


@dataclass(frozen=True)
class FitSample:
    center: int
    rows: tuple[BoxRow, ...]
    r_max: int
    truncated: bool = False  # r_limit was larger than the center's eccentricity

    def xy(self, y: str) -> list[tuple[float, float]]:
        """``(ln l, y)`` pairs where ``y`` is ``'info'`` or ``'ln_n_cum'``."""
        if y == "info":
            return [(math.log(r.l), r.info) for r in self.rows]
        if y == "ln_n_cum":
            return [(math.log(r.l), math.log(r.n_cum)) for r in self.rows]
        raise ValueError(f"unknown fit target: {y}")


def _profile_from_levels(center: int, levels: Sequence[int], n: int, r_limit: int) -> FitSample:
    rows = []
    n_cum = levels[0]
    for l in range(1, min(r_limit, len(levels) - 1) + 1):
        shell = levels[l]
        n_cum += shell
        p = n_cum / n
        rows.append(BoxRow(l, n_cum, shell, p, -p * math.log(p)))
    return FitSample(center, tuple(rows), len(rows), truncated=r_limit > len(levels) - 1)


def box_profile(g: Graph, center: int, r_limit: int) -> FitSample:
    """Box growth around ``center`` for box sizes ``1..r_limit``.

    The center itself is counted in every box, so ``p`` reaches 1 once the
    box covers the eccentricity. Only levels up to ``r_limit`` are explored.
    """
    if not 0 <= center < g.n:
        raise GraphError(f"center {center} out of range for n={g.n}")
    if r_limit < 1:
        raise ValueError("r_limit must be >= 1")
    g.require_connected("box_profile")
    levels = _bfs(g, center, max_depth=r_limit)[1]
    return _profile_from_levels(center, levels, g.n, r_limit)


def ols_slope(points: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of ``y`` on ``x``."""
    if len({x for x, _ in points}) < 2:
        raise ValueError("degenerate fit: need at least two distinct x values")
    k = len(points)
    mx = sum(x for x, _ in points) / k
    my = sum(y for _, y in points) / k
    sxy = sum((x - mx) * (y - my) for x, y in points)
    sxx = sum((x - mx) ** 2 for x, _ in points)
    return sxy / sxx


def local_dimension(g: Graph) -> ScoreVector:
    """Slope of ``ln N(r)`` against ``ln r`` for ``r = 1..ecc``.

    Universal vertices (eccentricity 1) admit no fit and get ``-inf``, which
    puts them first in ascending order.
    """
    g.require_connected("local dimension")
    scores = np.zeros(g.n)
    universal = np.zeros(g.n, dtype=bool)
    for i in range(g.n):
        levels = _bfs(g, i)[1]
        sample = _profile_from_levels(i, levels, g.n, len(levels) - 1)
        if sample.r_max < 2:
            universal[i] = True
            scores[i] = -math.inf
        else:
            scores[i] = ols_slope(sample.xy("ln_n_cum"))
    return ScoreVector("LD", scores, g.labels, universal=universal)


def lid_radius(ecc: int) -> int:
    """Largest box size sampled for LID: ``ceil(ecc/2)``, raised to 2 when possible."""
    r_max = math.ceil(ecc / 2)
    if r_max < 2:
        r_max = min(2, ecc)
    return r_max


def local_information_dimensionality(g: Graph, ecc: np.ndarray | None = None) -> ScoreVector:
    """Negative slope of the box entropy ``-p ln p`` against ``ln l``.

    Boxes grow to half the center's eccentricity only, so each node needs
    a truncated BFS once eccentricities are known.
    """
    g.require_connected("local information dimensionality")
    if ecc is None:
        ecc = eccentricities(g)
    scores = np.zeros(g.n)
    universal = np.zeros(g.n, dtype=bool)
    for i in range(g.n):
        if ecc[i] < 2:
            universal[i] = True
            scores[i] = math.inf
            continue
        sample = box_profile(g, i, lid_radius(int(ecc[i])))
        scores[i] = -ols_slope(sample.xy("info"))
    return ScoreVector("LID", scores, g.labels, universal=universal)


def discrete_lid_estimate(g: Graph, center: int, l: int) -> float:
    """Pointwise discrete-derivative LID estimate at box size ``l``.

    ``l / (1 + ln p(l)) * shell(l) / n`` with ``p(l)`` the fraction of nodes
    within distance ``l`` and ``shell(l)`` the count at distance exactly ``l``.
    """
    sample = box_profile(g, center, l)
    if sample.truncated or sample.r_max < l:
        raise ValueError(f"box size {l} exceeds the eccentricity of node {center}")
    row = sample.rows[-1]
    denom = 1.0 + math.log(row.p)
    if abs(denom) < 1e-12:
        raise ZeroDivisionError("estimator singular at p=1/e")
    return l / denom * row.n_shell / g.n


def discrete_ld_estimate(g: Graph, center: int, r: int) -> float:
    """Pointwise local-dimension estimate ``r * shell(r) / N(r)``."""
    sample = box_profile(g, center, r)
    if sample.truncated or sample.r_max < r:
        raise ValueError(f"radius {r} exceeds the eccentricity of node {center}")
    row = sample.rows[-1]
    return r * row.n_shell / row.n_cum


MEASURE_FUNCS: dict[str, Callable[[Graph], ScoreVector]] = {
    "DC": degree_centrality,
    "BC": betweenness_centrality,
    "CC": closeness_centrality,
    "EC": eigenvector_centrality,
    "LD": local_dimension,
    "LID": local_information_dimensionality,
}


def compute(g: Graph, measure: str) -> ScoreVector:
    try:
        func = MEASURE_FUNCS[measure.upper()]
    except KeyError:
        raise ValueError(f"unknown measure: {measure}") from None
    return func(g)


def _tie_value(score: float) -> float:
    if not math.isfinite(score):
        return score
    return float(f"{score:.{TIE_DIGITS}g}")


def rank(sv: ScoreVector, k: int | None = None) -> RankList:
    """Order nodes by influence, ties broken by ascending label.

    Scores that agree to ``TIE_DIGITS`` significant digits count as ties so
    floating-point noise from a different node numbering cannot reorder
    nodes that are equal in exact arithmetic.
    """
    sign = -1.0 if sv.direction == DESCENDING else 1.0
    order = sorted(
        range(len(sv)),
        key=lambda i: (sign * _tie_value(float(sv.scores[i])), label_sort_key(sv.labels[i])),
    )
    truncated = False
    if k is not None:
        if k < 1:
            raise ValueError("k must be >= 1")
        truncated = k > len(order)
        order = order[:k]
    return RankList(
        sv.measure,
        tuple(sv.labels[i] for i in order),
        tuple(float(sv.scores[i]) for i in order),
        truncated,
        tuple(sv.is_sentinel(i) for i in order),
    )
