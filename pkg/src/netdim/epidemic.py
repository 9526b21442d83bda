"""Discrete-time SI spreading with reproducible random streams.

Randomness protocol (part of the output contract):

* every run owns a PCG64 generator seeded with
  ``SeedSequence(master_seed, spawn_key=key)`` where ``key`` is ``(run,)``
  for seed-set ensembles and ``(node, run)`` for per-node spreading ability;
* a run over ``T`` steps draws one ``T x n`` block of uniforms up front and
  node ``v`` at step ``t`` uses entry ``[t - 1, v]``;
* a susceptible node with ``k`` infected neighbours (as of the start of the
  step) becomes infected iff its uniform is below ``1 - (1 - lambda)**k``,
  which is the chance that at least one of ``k`` independent per-edge
  transmissions succeeds.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .graph_core import Graph

# cap on uniforms held in memory at once per batch
_BATCH_ELEMENTS = 4_000_000


def derive_rng(master_seed: int, *key: int) -> np.random.Generator:
    """Generator for the stream identified by ``(master_seed, *key)``."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=key)))


def lambda_from_beta(beta: float) -> float:
    return 0.5**beta


def _check_seed(master_seed: int) -> int:
    master_seed = int(master_seed)
    if not 0 <= master_seed < 2**64:
        raise ValueError("master_seed must be in [0, 2**64)")
    return master_seed


def _check_lambda(lam: float) -> float:
    if not 0.0 <= lam <= 1.0:
        raise ValueError(f"lambda must be in [0, 1], got {lam}")
    return float(lam)


def _check_seeds(g: Graph, seeds: Sequence[int]) -> np.ndarray:
    arr = np.asarray(list(seeds), dtype=np.int64)
    if arr.size == 0:
        raise ValueError("seed set is empty")
    if len(np.unique(arr)) != arr.size:
        raise ValueError("seed nodes must be distinct")
    if arr.min() < 0 or arr.max() >= g.n:
        raise ValueError("seed node index out of range")
    return arr


def _spread(g: Graph, infected: np.ndarray, lam: float, uniforms: np.ndarray) -> np.ndarray:
    """Advance a batch of runs in lockstep.

    ``infected`` is an ``(R, n)`` boolean matrix (modified in place) and
    ``uniforms`` an ``(R, T, n)`` array. Returns ``F`` with shape ``(R, T+1)``.
    """
    runs, steps, _ = uniforms.shape
    adj = g.adjacency
    counts = np.empty((runs, steps + 1), dtype=np.int64)
    counts[:, 0] = infected.sum(axis=1)
    escape = 1.0 - lam
    for t in range(steps):
        k = (adj @ infected.T.astype(float)).T
        p = 1.0 - escape**k
        infected |= uniforms[:, t, :] < p
        counts[:, t + 1] = infected.sum(axis=1)
    return counts


def si_run(
    g: Graph, seeds: Sequence[int], lam: float, steps: int, rng: np.random.Generator
) -> np.ndarray:
    """One SI realisation; returns ``F(0..steps)``."""
    seeds = _check_seeds(g, seeds)
    lam = _check_lambda(lam)
    infected = np.zeros((1, g.n), dtype=bool)
    infected[0, seeds] = True
    uniforms = rng.random((steps, g.n))[None]
    return _spread(g, infected, lam, uniforms)[0]


@dataclass(frozen=True)
class SIConfig:
    lam: float
    steps: int
    runs: int
    seeds: tuple[int, ...]
    master_seed: int = 0

    def __post_init__(self) -> None:
        _check_lambda(self.lam)
        _check_seed(self.master_seed)
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.steps < 0:
            raise ValueError("steps must be >= 0")
        if not self.seeds:
            raise ValueError("seed set is empty")
        if len(set(self.seeds)) != len(self.seeds):
            raise ValueError("seed nodes must be distinct")

    @classmethod
    def from_beta(cls, beta: float, **kwargs) -> "SIConfig":
        return cls(lam=lambda_from_beta(beta), **kwargs)


@dataclass(frozen=True)
class SITrace:
    mean_F: np.ndarray
    config: SIConfig
    runs_F: np.ndarray | None = field(default=None, repr=False)


def _batches(runs: int, per_run: int) -> list[range]:
    size = max(1, _BATCH_ELEMENTS // max(per_run, 1))
    return [range(a, min(a + size, runs)) for a in range(0, runs, size)]


def si_ensemble(g: Graph, cfg: SIConfig, keep_runs: bool = False) -> SITrace:
    """Mean infection curve over ``cfg.runs`` independent runs."""
    seeds = _check_seeds(g, cfg.seeds)
    curves = []
    for batch in _batches(cfg.runs, cfg.steps * g.n):
        infected = np.zeros((len(batch), g.n), dtype=bool)
        infected[:, seeds] = True
        uniforms = np.stack([derive_rng(cfg.master_seed, r).random((cfg.steps, g.n)) for r in batch])
        curves.append(_spread(g, infected, cfg.lam, uniforms))
    per_run = np.concatenate(curves)
    return SITrace(per_run.mean(axis=0), cfg, per_run if keep_runs else None)


def _node_ability(g: Graph, v: int, lam: float, t_obs: int, runs: int, master_seed: int) -> float:
    total = 0
    for batch in _batches(runs, t_obs * g.n):
        infected = np.zeros((len(batch), g.n), dtype=bool)
        infected[:, v] = True
        uniforms = np.stack([derive_rng(master_seed, v, r).random((t_obs, g.n)) for r in batch])
        total += int(_spread(g, infected, lam, uniforms)[:, -1].sum())
    return total / runs


def _ability_chunk(args: tuple) -> list[float]:
    g, nodes, lam, t_obs, runs, master_seed = args
    return [_node_ability(g, v, lam, t_obs, runs, master_seed) for v in nodes]


def resolve_workers(workers: int | None) -> int:
    if workers is None or workers <= 0:
        return os.cpu_count() or 1
    return workers


def spreading_ability(
    g: Graph,
    lam: float,
    t_obs: int,
    runs: int,
    master_seed: int = 0,
    workers: int = 1,
) -> np.ndarray:
    """Mean ``F(t_obs)`` for every single-node seed, averaged over ``runs``.

    Results do not depend on ``workers``: each (node, run) pair has its own
    derived stream.
    """
    lam = _check_lambda(lam)
    master_seed = _check_seed(master_seed)
    if t_obs < 1:
        raise ValueError("t_obs must be >= 1")
    if runs < 1:
        raise ValueError("runs must be >= 1")
    workers = min(resolve_workers(workers), max(g.n, 1))
    if workers == 1:
        return np.array([_node_ability(g, v, lam, t_obs, runs, master_seed) for v in range(g.n)])
    chunks = np.array_split(np.arange(g.n), workers)
    jobs = [(g, c.tolist(), lam, t_obs, runs, master_seed) for c in chunks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_ability_chunk, jobs))
    return np.array([x for part in parts for x in part])
