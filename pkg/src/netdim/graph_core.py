"""Graph ingestion, BFS distances and structural statistics.

Graphs are simple, undirected and unweighted. Node labels are arbitrary
strings; internally every node gets a dense index in ``0..n-1`` and the
adjacency is stored in compressed (offsets + targets) form.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator, Sequence, TextIO

import numpy as np
from scipy import sparse

#: Distance value for nodes not reachable from the BFS source.
UNREACHABLE = -1

_SPLIT = re.compile(r"[\s,]+")


class GraphError(ValueError):
    """Raised for malformed input or a violated graph precondition."""


class ParseError(GraphError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class EdgeList:
    edges: tuple[tuple[str, str], ...]
    labels: tuple[str, ...]


def _read(text: str | TextIO) -> str:
    return text if isinstance(text, str) else text.read()


def _edge_list_from_pairs(pairs: Iterable[tuple[str, str]]) -> EdgeList:
    edges = tuple(pairs)
    seen: dict[str, None] = {}
    for u, v in edges:
        seen.setdefault(u)
        seen.setdefault(v)
    return EdgeList(edges, tuple(seen))


def parse_edge_list(text: str | TextIO) -> EdgeList:
    """Parse a SNAP-style edge list.

    Lines starting with ``#`` or ``%`` are comments. Tokens are separated by
    whitespace and/or commas; only the first two tokens are used.
    """
    pairs = []
    for lineno, line in enumerate(_read(text).splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] in "#%":
            continue
        tokens = [t for t in _SPLIT.split(stripped) if t]
        if len(tokens) < 2:
            raise ParseError(f"expected two endpoints, got {stripped!r}", lineno)
        pairs.append((tokens[0], tokens[1]))
    return _edge_list_from_pairs(pairs)


def parse_pajek(text: str | TextIO) -> EdgeList:
    """Parse the subset of Pajek ``.net`` used by the classic network archives.

    Supports ``*Vertices n`` (with optional quoted names, which are ignored),
    followed by ``*Edges``, ``*Arcs``, ``*Edgeslist`` or ``*Arcslist``
    sections. Arcs are read as undirected edges and weights are dropped.
    Vertex ids ``1..n`` become the labels.
    """
    n_vertices = None
    section = None
    pairs = []
    for lineno, line in enumerate(_read(text).splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped[0] == "%":
            continue
        if stripped[0] == "*":
            head = stripped.split()
            keyword = head[0].lower()
            if keyword == "*vertices":
                try:
                    n_vertices = int(head[1])
                except (IndexError, ValueError):
                    raise ParseError("bad *Vertices header", lineno) from None
                section = "vertices"
            elif keyword in ("*edges", "*arcs", "*edgeslist", "*arcslist"):
                if n_vertices is None:
                    raise ParseError("missing *Vertices header", lineno)
                section = "list" if keyword.endswith("list") else "pairs"
            else:
                # *Matrix, *Partition, ... are not supported; skip their bodies
                section = None
            continue
        if section is None:
            if n_vertices is None:
                raise ParseError("missing *Vertices header", lineno)
            continue
        if section == "vertices":
            continue
        tokens = stripped.split()
        try:
            ids = [int(t) for t in (tokens if section == "list" else tokens[:2])]
        except ValueError:
            raise ParseError(f"non-integer vertex id in {stripped!r}", lineno) from None
        if len(ids) < 2:
            raise ParseError(f"expected two endpoints, got {stripped!r}", lineno)
        for vid in ids:
            if not 1 <= vid <= n_vertices:
                raise ParseError(f"vertex {vid} outside 1..{n_vertices}", lineno)
        src = str(ids[0])
        pairs.extend((src, str(dst)) for dst in ids[1:])
    if n_vertices is None:
        raise ParseError("missing *Vertices header")
    return EdgeList(tuple(pairs), tuple(str(i) for i in range(1, n_vertices + 1)))


def label_sort_key(label: str) -> tuple:
    """Order labels numerically when they are integers, lexically otherwise."""
    try:
        return (0, int(label), "")
    except ValueError:
        return (1, 0, label)


class Graph:
    """Immutable simple undirected graph in compressed adjacency form.

    ``indptr``/``indices`` follow the CSR convention: the neighbors of node
    ``i`` are ``indices[indptr[i]:indptr[i + 1]]``, sorted ascending.
    """

    def __init__(self, indptr: np.ndarray, indices: np.ndarray, labels: Sequence[str]):
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)
        self.labels = tuple(labels)
        if len(self.labels) != len(self.indptr) - 1:
            raise GraphError("label count does not match node count")

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.indices) // 2

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.labels == other.labels
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    __hash__ = None  # type: ignore[assignment]

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    @cached_property
    def degrees(self) -> np.ndarray:
        deg = np.diff(self.indptr)
        deg.setflags(write=False)
        return deg

    @cached_property
    def index(self) -> dict[str, int]:
        return {label: i for i, label in enumerate(self.labels)}

    def index_of(self, label: str) -> int:
        try:
            return self.index[str(label)]
        except KeyError:
            raise GraphError(f"unknown node label: {label}") from None

    @cached_property
    def adjacency(self) -> sparse.csr_matrix:
        """Adjacency matrix as a float64 CSR matrix (shared, do not mutate)."""
        data = np.ones(len(self.indices))
        return sparse.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))

    @cached_property
    def component_ids(self) -> np.ndarray:
        comp = np.full(self.n, -1, dtype=np.int64)
        cid = 0
        for start in range(self.n):
            if comp[start] >= 0:
                continue
            dist = _bfs(self, start)[0]
            comp[dist != UNREACHABLE] = cid
            cid += 1
        comp.setflags(write=False)
        return comp

    @property
    def is_connected(self) -> bool:
        return self.n <= 1 or int(self.component_ids.max()) == 0

    def require_connected(self, what: str) -> None:
        if self.n == 0:
            raise GraphError(f"{what} requires a non-empty graph (empty graph)")
        if not self.is_connected:
            raise GraphError(f"{what} requires a connected graph; use the largest component")


def build_graph(el: EdgeList) -> Graph:
    """Build a simple graph: self-loops dropped, duplicate edges collapsed."""
    index = {label: i for i, label in enumerate(el.labels)}
    for u, v in el.edges:
        for label in (u, v):
            if label not in index:
                index[label] = len(index)
    labels = list(index)
    n = len(labels)
    if el.edges:
        pairs = np.array([(index[u], index[v]) for u, v in el.edges], dtype=np.int64)
        pairs = pairs[pairs[:, 0] != pairs[:, 1]]
    else:
        pairs = np.empty((0, 2), dtype=np.int64)
    both = np.concatenate([pairs, pairs[:, ::-1]])
    both = np.unique(both, axis=0) if len(both) else both
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(both[:, 0], minlength=n), out=indptr[1:])
    # np.unique sorts rows lexicographically, so targets come out sorted per source
    return Graph(indptr, both[:, 1], labels)


def graph_from_edges(edges: Iterable[tuple[object, object]]) -> Graph:
    """Convenience constructor from Python pairs; labels are ``str()``-ed."""
    return build_graph(_edge_list_from_pairs((str(u), str(v)) for u, v in edges))


def read_graph(path: str | Path, fmt: str = "auto") -> Graph:
    """Load a graph from disk. ``fmt`` is ``edgelist``, ``pajek`` or ``auto``."""
    path = Path(path)
    text = path.read_text(encoding="utf-8", errors="replace")
    if fmt == "auto":
        is_pajek = path.suffix.lower() in (".net", ".paj") or re.search(
            r"^\s*\*vertices", text, re.IGNORECASE | re.MULTILINE
        )
        fmt = "pajek" if is_pajek else "edgelist"
    if fmt == "pajek":
        return build_graph(parse_pajek(text))
    if fmt == "edgelist":
        return build_graph(parse_edge_list(text))
    raise GraphError(f"unknown format: {fmt}")


def karate_path() -> Path:
    """Path of the bundled Zachary karate club edge list."""
    return Path(__file__).with_name("data") / "karate.txt"


def karate() -> Graph:
    return read_graph(karate_path(), "edgelist")


def induced_subgraph(g: Graph, nodes: np.ndarray) -> Graph:
    """Induced subgraph on ``nodes`` (kept in ascending index order)."""
    nodes = np.sort(np.asarray(nodes, dtype=np.int64))
    remap = np.full(g.n, -1, dtype=np.int64)
    remap[nodes] = np.arange(len(nodes))
    src = np.repeat(np.arange(g.n), g.degrees)
    keep = (remap[src] >= 0) & (remap[g.indices] >= 0)
    new_src = remap[src[keep]]
    new_dst = remap[g.indices[keep]]
    indptr = np.zeros(len(nodes) + 1, dtype=np.int64)
    np.cumsum(np.bincount(new_src, minlength=len(nodes)), out=indptr[1:])
    # src is nondecreasing and remap is monotone, so order is preserved
    return Graph(indptr, new_dst, [g.labels[i] for i in nodes])


def largest_component(g: Graph) -> Graph:
    if g.n == 0 or g.is_connected:
        return g
    sizes = np.bincount(g.component_ids)
    # components are numbered in order of their smallest node index
    best = int(np.argmax(sizes))
    return induced_subgraph(g, np.flatnonzero(g.component_ids == best))


def _gather_neighbors(g: Graph, frontier: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Concatenated neighbor lists of ``frontier`` plus the owning frontier node."""
    starts = g.indptr[frontier]
    counts = g.indptr[frontier + 1] - starts
    total = int(counts.sum())
    if total == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    offsets = np.repeat(starts - (np.cumsum(counts) - counts), counts) + np.arange(total)
    return g.indices[offsets], np.repeat(frontier, counts)


def _bfs(g: Graph, source: int, max_depth: int | None = None) -> tuple[np.ndarray, list[int]]:
    """Level-synchronous BFS.

    Returns the distance array and the number of nodes found at each level
    (``level_sizes[0] == 1`` for the source). With ``max_depth`` the search
    stops after labelling that level; deeper nodes stay ``UNREACHABLE``.
    """
    dist = np.full(g.n, UNREACHABLE, dtype=np.int64)
    dist[source] = 0
    frontier = np.array([source], dtype=np.int64)
    level_sizes = [1]
    depth = 0
    while max_depth is None or depth < max_depth:
        nbrs, _ = _gather_neighbors(g, frontier)
        nbrs = nbrs[dist[nbrs] == UNREACHABLE]
        if nbrs.size == 0:
            break
        frontier = np.unique(nbrs)
        depth += 1
        dist[frontier] = depth
        level_sizes.append(len(frontier))
    return dist, level_sizes


@dataclass(frozen=True)
class DistanceRow:
    source: int
    dist: np.ndarray
    ecc: int

    @property
    def reachable(self) -> np.ndarray:
        return self.dist != UNREACHABLE


def _check_source(g: Graph, source: int) -> None:
    if not 0 <= source < g.n:
        raise GraphError(f"source {source} out of range for n={g.n}")


def bfs_distances(g: Graph, source: int) -> DistanceRow:
    _check_source(g, source)
    dist, levels = _bfs(g, source)
    return DistanceRow(source, dist, len(levels) - 1)


def level_sizes(g: Graph, source: int, max_depth: int | None = None) -> list[int]:
    """Node counts per BFS level from ``source``: ``[1, |shell 1|, |shell 2|, ...]``."""
    _check_source(g, source)
    return _bfs(g, source, max_depth)[1]


def all_distance_rows(g: Graph) -> Iterator[DistanceRow]:
    for s in range(g.n):
        yield bfs_distances(g, s)


def _multi_source_levels(g: Graph, block_words: int | None = None) -> Iterator[tuple[int, int, np.ndarray]]:
    """Bit-parallel BFS from every node at once.

    Row ``v`` of the state matrix holds one bit per source; bit ``s`` is set
    once ``v`` has been reached from ``s``. One level costs a gather and an
    OR-reduction over the adjacency, processing 64 sources per machine word.
    Sources are handled in blocks of ``block_words`` words to bound memory.

    Yields ``(first_source, level, new)`` where ``new`` has the bits of
    nodes first reached at ``level`` for sources ``first_source + bit``.
    """
    n = g.n
    words = (n + 63) // 64
    if block_words is None:
        # keep the gathered (2m x block) matrix around 32 MB
        block_words = max(1, min(words, 4_000_000 // max(len(g.indices), 1)))
    has_nbrs = g.degrees > 0
    starts = g.indptr[:-1][has_nbrs]
    for w0 in range(0, words, block_words):
        w1 = min(words, w0 + block_words)
        first = w0 * 64
        sources = np.arange(first, min(n, w1 * 64))
        bits = np.zeros((n, w1 - w0), dtype=np.uint64)
        local = sources - first
        bits[sources, local // 64] = np.left_shift(np.uint64(1), (local % 64).astype(np.uint64))
        seen = bits
        frontier = bits.copy()
        level = 0
        while True:
            reached = np.zeros_like(seen)
            if len(starts):
                reached[has_nbrs] = np.bitwise_or.reduceat(frontier[g.indices], starts, axis=0)
            new = reached & ~seen
            if not new.any():
                break
            level += 1
            seen |= new
            frontier = new
            yield first, level, new


def _unpack(words: np.ndarray, count: int) -> np.ndarray:
    return np.unpackbits(words.view(np.uint8), bitorder="little")[:count].astype(bool)


def eccentricities(g: Graph, block_words: int | None = None) -> np.ndarray:
    """Largest finite BFS distance from every node (0 for isolated nodes)."""
    ecc = np.zeros(g.n, dtype=np.int64)
    for first, level, new in _multi_source_levels(g, block_words):
        width = min(g.n - first, new.shape[1] * 64)
        active = _unpack(np.bitwise_or.reduce(new, axis=0), width)
        ecc[first : first + width][active] = level
    return ecc


def distance_totals(g: Graph) -> tuple[int, int]:
    """Sum of distances over ordered reachable pairs, and the diameter."""
    total = 0
    diameter = 0
    for _, level, new in _multi_source_levels(g):
        total += level * int(np.bitwise_count(new).sum())
        diameter = max(diameter, level)
    return total, diameter


@dataclass(frozen=True)
class GraphStats:
    n: int
    m: int
    avg_degree: float
    max_degree: int
    avg_shortest_distance: float
    diameter: int


def graph_stats(g: Graph) -> GraphStats:
    """Table-style summary; distances averaged over unordered distinct pairs."""
    g.require_connected("graph_stats")
    n = g.n
    total, diameter = distance_totals(g)
    pairs = n * (n - 1) // 2
    # every unordered pair is counted twice over all sources
    avg = total / 2 / pairs if pairs else 0.0
    return GraphStats(
        n=n,
        m=g.m,
        avg_degree=2 * g.m / n,
        max_degree=int(g.degrees.max()),
        avg_shortest_distance=avg,
        diameter=diameter,
    )
