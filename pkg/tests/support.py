"""Graph builders and data lookup shared by the tests."""

from __future__ import annotations

import os
from fractions import Fraction
from pathlib import Path

import numpy as np

from netdim.graph_core import Graph, graph_from_edges


def preferential_attachment(n: int, k: int, seed: int) -> Graph:
    """Barabasi-Albert style growth: each new node links to ``k`` distinct
    targets drawn proportionally to degree."""
    rng = np.random.default_rng(seed)
    edges = []
    targets = list(range(k))
    pool: list[int] = []
    for v in range(k, n):
        edges.extend((v, t) for t in targets)
        pool.extend(targets)
        pool.extend([v] * k)
        chosen: set[int] = set()
        while len(chosen) < k:
            chosen.add(pool[int(rng.integers(len(pool)))])
        targets = sorted(chosen)
    return graph_from_edges(edges)


def random_connected(n: int, p: float, rng: np.random.Generator) -> Graph:
    """G(n, p) plus a random spanning tree, so the result is connected."""
    order = rng.permutation(n)
    edges = {(int(order[i]), int(order[rng.integers(i)])) for i in range(1, n)}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    edges_l = sorted(edges)
    g = graph_from_edges(edges_l) if edges_l else graph_from_edges([])
    if g.n < n:  # only possible for n == 1
        return graph_from_edges([(0, 0)])
    return g


def random_graph(n: int, p: float, rng: np.random.Generator) -> Graph:
    """Plain G(n, p) with all ``n`` nodes present (possibly disconnected)."""
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    edges += [(i, i) for i in range(n)]  # self-loops register every node, then get dropped
    return graph_from_edges(edges)


def cycle(n: int) -> Graph:
    return graph_from_edges([(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return graph_from_edges([(i, j) for i in range(n) for j in range(i + 1, n)])


def path(n: int) -> Graph:
    return graph_from_edges([(i, i + 1) for i in range(1, n)])


def star(leaves: int) -> Graph:
    return graph_from_edges([(0, i) for i in range(1, leaves + 1)])


def data_file(*names: str) -> Path | None:
    """First existing archive file among ``names`` in $NETDIM_DATA_DIR or tests/data."""
    dirs = [Path(os.environ["NETDIM_DATA_DIR"])] if os.environ.get("NETDIM_DATA_DIR") else []
    dirs.append(Path(__file__).with_name("data"))
    for d in dirs:
        for name in names:
            if (d / name).exists():
                return d / name
    return None


def brute_force_betweenness(g: Graph) -> list[Fraction]:
    """Betweenness by listing every geodesic of every unordered pair.

    Distances come from repeated relaxation over the edge set, not from BFS;
    paths are grown one hop at a time along edges that stay on a geodesic.
    """
    n = g.n
    inf = n + 1
    d = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    edges = [(i, int(j)) for i in range(n) for j in g.neighbors(i)]
    changed = True
    while changed:
        changed = False
        for s in range(n):
            for u, v in edges:
                if d[s][u] + 1 < d[s][v]:
                    d[s][v] = d[s][u] + 1
                    changed = True

    def geodesics(s: int, t: int) -> list[list[int]]:
        paths = [[s]]
        for _ in range(d[s][t]):
            paths = [
                p + [int(w)]
                for p in paths
                for w in g.neighbors(p[-1])
                if d[s][int(w)] == len(p) and d[int(w)][t] == d[s][t] - len(p)
            ]
        return paths

    bc = [Fraction(0)] * n
    for s in range(n):
        for t in range(s + 1, n):
            if d[s][t] >= inf:
                continue
            paths = geodesics(s, t)
            for i in range(n):
                if i in (s, t):
                    continue
                through = sum(1 for p in paths if i in p)
                bc[i] += Fraction(through, len(paths))
    return bc


def brute_force_tau(a, b) -> tuple[int, int, float]:
    """Concordant/discordant counts by direct pair enumeration."""
    n = len(a)
    nc = nd = 0
    for i in range(n):
        for j in range(i + 1, n):
            da = (a[i] > a[j]) - (a[i] < a[j])
            db = (b[i] > b[j]) - (b[i] < b[j])
            if da * db > 0:
                nc += 1
            elif da * db < 0:
                nd += 1
    return nc, nd, (nc - nd) / (n * (n - 1) / 2)


def straight_line_fit(points) -> float:
    """Slope via numpy least squares on the design matrix [x, 1]."""
    x = np.array([p[0] for p in points], dtype=float)
    y = np.array([p[1] for p in points], dtype=float)
    design = np.column_stack([x, np.ones_like(x)])
    return float(np.linalg.lstsq(design, y, rcond=None)[0][0])
