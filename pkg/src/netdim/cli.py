"""Command-line interface: ``netdim <command> --input FILE [options]``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

from . import centrality, evaluation
from .epidemic import SIConfig, lambda_from_beta, si_ensemble, spreading_ability
from .graph_core import Graph, GraphError, graph_stats, karate, largest_component, read_graph

DEFAULT_LAMBDAS = tuple(round(0.01 * i, 2) for i in range(1, 11))
SEED_ENV = "NETDIM_SEED"


class CLIError(Exception):
    pass


@dataclass
class ExperimentConfig:
    input: Path
    format: str = "auto"
    largest_component: bool = False
    measures: tuple[str, ...] = centrality.MEASURES
    k: int = 10
    beta: float | None = None
    lam: float | None = None
    steps: int = 30
    runs: int = 50
    t_obs: int = 10
    master_seed: int = 0
    output: Path | None = None
    out_format: str = "csv"
    workers: int = 1
    extra: dict = field(default_factory=dict)

    def spreading_rate(self) -> float:
        if (self.beta is None) == (self.lam is None):
            raise CLIError("exactly one of --beta or --lambda is required")
        return lambda_from_beta(self.beta) if self.beta is not None else self.lam


def read_config_file(path: str | Path) -> dict[str, str]:
    """``key = value`` lines; ``#`` starts a comment; keys use flag names."""
    values = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise CLIError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        values[key.lstrip("-").replace("-", "_")] = value
    return values


def _parse_measures(text: str) -> tuple[str, ...]:
    names = tuple(m.strip().upper() for m in text.split(",") if m.strip())
    unknown = [m for m in names if m not in centrality.MEASURES]
    if unknown:
        raise CLIError(f"unknown measure: {', '.join(unknown)}")
    if not names:
        raise CLIError("no measures given")
    return names


def _parse_floats(text: str) -> tuple[float, ...]:
    try:
        return tuple(float(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise CLIError(f"bad number list: {text}") from None


def _bool(text: str | bool) -> bool:
    if isinstance(text, bool):
        return text
    return text.strip().lower() in ("1", "true", "yes", "on")


# ---------------------------------------------------------------- output


def _fmt(x: float) -> str:
    return repr(float(x))


def _score_cell(value: float, sentinel: bool) -> str:
    return "universal" if sentinel else _fmt(value)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(payload: object) -> str:
    return json.dumps(payload, indent=2, sort_keys=False) + "\n"


def _json_float(x: float) -> float | None:
    return float(x) if math.isfinite(x) else None


def _emit(cfg: ExperimentConfig, text: str) -> None:
    if cfg.output is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out = Path(cfg.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=out.parent, prefix=f".{out.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        Path(tmp).unlink(missing_ok=True)
        raise


def _note(message: str) -> None:
    print(f"note: {message}", file=sys.stderr)


# ---------------------------------------------------------------- loading


def load_graph(cfg: ExperimentConfig) -> Graph:
    try:
        g = read_graph(cfg.input, cfg.format)
    except OSError as exc:
        raise CLIError(f"cannot read {cfg.input}: {exc.strerror or exc}") from None
    if g.n == 0:
        raise CLIError("empty graph")
    if cfg.largest_component:
        g = largest_component(g)
    return g


def _seed_nodes(g: Graph, cfg: ExperimentConfig) -> tuple[int, ...]:
    labels = cfg.extra.get("seeds")
    if labels:
        return tuple(g.index_of(label.strip()) for label in labels.split(",") if label.strip())
    measure = (cfg.extra.get("seed_measure") or "LID").upper()
    if measure not in centrality.MEASURES:
        raise CLIError(f"unknown measure: {measure}")
    ranked = centrality.rank(centrality.compute(g, measure), cfg.k)
    return tuple(g.index_of(label) for label in ranked.labels)


# ---------------------------------------------------------------- commands


def cmd_stats(cfg: ExperimentConfig) -> None:
    st = graph_stats(load_graph(cfg))
    if cfg.out_format == "json":
        _emit(cfg, _json_text(asdict(st)))
        return
    row = [st.n, st.m, f"{st.avg_degree:.4f}", st.max_degree,
           f"{st.avg_shortest_distance:.4f}", st.diameter]
    header = ["n", "m", "avg_degree", "max_degree", "avg_shortest_distance", "diameter"]
    _emit(cfg, _csv_text(header, [row]))


def cmd_rank(cfg: ExperimentConfig) -> None:
    g = load_graph(cfg)
    if cfg.k > g.n:
        _note(f"k={cfg.k} exceeds n={g.n}; listing all {g.n} nodes")
    ranked = [centrality.rank(centrality.compute(g, m), cfg.k) for m in cfg.measures]
    if cfg.out_format == "json":
        payload = {
            r.measure: [
                {"rank": i + 1, "label": lab, "score": _json_float(s), "universal": u}
                for i, (lab, s, u) in enumerate(zip(r.labels, r.scores, r.sentinel))
            ]
            for r in ranked
        }
        _emit(cfg, _json_text(payload))
        return
    rows = [
        [r.measure, i + 1, lab, _score_cell(s, u)]
        for r in ranked
        for i, (lab, s, u) in enumerate(zip(r.labels, r.scores, r.sentinel))
    ]
    _emit(cfg, _csv_text(["measure", "rank", "label", "score"], rows))


def cmd_si(cfg: ExperimentConfig) -> None:
    g = load_graph(cfg)
    si_cfg = SIConfig(cfg.spreading_rate(), cfg.steps, cfg.runs, _seed_nodes(g, cfg), cfg.master_seed)
    trace = si_ensemble(g, si_cfg)
    if cfg.out_format == "json":
        payload = {
            "lambda": si_cfg.lam, "steps": si_cfg.steps, "runs": si_cfg.runs,
            "seeds": [g.labels[i] for i in si_cfg.seeds], "master_seed": si_cfg.master_seed,
            "mean_F": trace.mean_F.tolist(),
        }
        _emit(cfg, _json_text(payload))
        return
    rows = [[t, _fmt(f)] for t, f in enumerate(trace.mean_F)]
    _emit(cfg, _csv_text(["t", "mean_F"], rows))


def cmd_ability(cfg: ExperimentConfig) -> None:
    g = load_graph(cfg)
    ability = spreading_ability(g, cfg.spreading_rate(), cfg.t_obs, cfg.runs,
                                cfg.master_seed, cfg.workers)
    if cfg.out_format == "json":
        _emit(cfg, _json_text(dict(zip(g.labels, ability.tolist()))))
        return
    _emit(cfg, _csv_text(["label", "ability"], [[lab, _fmt(a)] for lab, a in zip(g.labels, ability)]))


def cmd_kendall(cfg: ExperimentConfig) -> None:
    g = load_graph(cfg)
    lambdas = cfg.extra.get("lambdas") or DEFAULT_LAMBDAS
    if cfg.lam is not None or cfg.beta is not None:
        lambdas = (cfg.spreading_rate(),)
    rows = evaluation.tau_sweep(g, cfg.measures, lambdas, cfg.t_obs, cfg.runs,
                                cfg.master_seed, cfg.workers)
    if cfg.out_format == "json":
        _emit(cfg, _json_text([{"measure": r.measure, "lambda": r.lam, "tau": r.tau} for r in rows]))
        return
    _emit(cfg, _csv_text(["measure", "lambda", "tau"],
                         [[r.measure, _fmt(r.lam), _fmt(r.tau)] for r in rows]))


def cmd_scatter(cfg: ExperimentConfig) -> None:
    g = load_graph(cfg)
    lam = cfg.spreading_rate() if (cfg.lam is not None or cfg.beta is not None) else 0.05
    rows = evaluation.scatter_table(g, cfg.extra.get("comparison") or "DC", lam, cfg.t_obs,
                                    cfg.runs, cfg.master_seed, cfg.workers)
    if cfg.out_format == "json":
        _emit(cfg, _json_text([{"node": r.label, "x": _json_float(r.x), "y": _json_float(r.y),
                                "f": r.f} for r in rows]))
        return
    _emit(cfg, _csv_text(["node", "x", "y", "f"],
                         [[r.label, _fmt(r.x), _fmt(r.y), _fmt(r.f)] for r in rows]))


def bench_measures(g: Graph, measures: Sequence[str], repeat: int = 1) -> list[tuple[str, float]]:
    """Best-of-``repeat`` wall-clock seconds per measure, single worker.

    Each measure first runs once untimed on the bundled karate graph so that
    import and cache costs stay out of the numbers; the connectivity check on
    ``g`` is also done up front.
    """
    warm = karate()
    g.require_connected("bench")
    results = []
    for m in measures:
        centrality.compute(warm, m)
        best = math.inf
        for _ in range(max(repeat, 1)):
            start = time.perf_counter()
            centrality.compute(g, m)
            best = min(best, time.perf_counter() - start)
        results.append((m, best))
    return results


def cmd_bench(cfg: ExperimentConfig) -> None:
    g = load_graph(cfg)
    results = bench_measures(g, cfg.measures, int(cfg.extra.get("repeat") or 1))
    if cfg.out_format == "json":
        _emit(cfg, _json_text({m: s for m, s in results}))
        return
    _emit(cfg, _csv_text(["measure", "seconds"], [[m, f"{s:.6f}"] for m, s in results]))


COMMANDS: dict[str, tuple[Callable[[ExperimentConfig], None], str]] = {
    "stats": (cmd_stats, "structural statistics (n, m, <k>, k_max, <d>, diameter)"),
    "rank": (cmd_rank, "top-k nodes per centrality measure"),
    "si": (cmd_si, "mean SI infection curve from a seed set"),
    "ability": (cmd_ability, "per-node spreading ability F(t_obs)"),
    "kendall": (cmd_kendall, "Kendall tau between measures and spreading ability over a lambda grid"),
    "scatter": (cmd_scatter, "per-node LID vs DC/LD vs F(t_obs) table"),
    "bench": (cmd_bench, "single-worker timing of each measure"),
}


# ---------------------------------------------------------------- parsing


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="file of 'key = value' defaults")
    parser.add_argument("--input", "-i", help="network file")
    parser.add_argument("--format", choices=("auto", "edgelist", "pajek"), help="default: auto")
    parser.add_argument("--largest-component", action="store_true", default=None)
    parser.add_argument("--measures", help="comma-separated subset of " + ",".join(centrality.MEASURES))
    parser.add_argument("--k", type=int, help="top-k size (default: 10)")
    rate = parser.add_mutually_exclusive_group()
    rate.add_argument("--beta", type=float, help="spreading rate lambda = (1/2)**beta")
    rate.add_argument("--lambda", dest="lam", type=float, help="spreading rate")
    parser.add_argument("--steps", type=int, help="SI horizon (default: 30)")
    parser.add_argument("--runs", type=int, help="independent runs (default: 50 for si, else 100)")
    parser.add_argument("--t-obs", type=int, help="observation step for F(t) (default: 10)")
    parser.add_argument("--seed", type=int, help=f"master seed (fallback: ${SEED_ENV}, then 0)")
    parser.add_argument("--output", "-o", help="output file (default: stdout)")
    parser.add_argument("--out-format", choices=("csv", "json"), help="default: csv")
    parser.add_argument("--workers", type=int, help="parallel workers, 0 = all cores (default: 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="netdim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text, description=help_text, allow_abbrev=False)
        _common(p)
        if name == "si":
            p.add_argument("--seeds", help="comma-separated seed labels")
            p.add_argument("--seed-measure", help="seed with the top-k nodes of this measure (default LID)")
        elif name == "kendall":
            p.add_argument("--lambdas", help="comma-separated lambda grid (default 0.01..0.10)")
        elif name == "scatter":
            p.add_argument("--comparison", choices=("DC", "LD", "dc", "ld"), help="default: DC")
        elif name == "bench":
            p.add_argument("--repeat", type=int, help="timed repetitions, best kept (default: 1)")
    return parser


_DEFAULT_MEASURES = {"kendall": ("LID", "LD")}
_DEFAULT_RUNS = {"si": 50, "ability": 100, "kendall": 100, "scatter": 100}


def make_config(args: argparse.Namespace, file_values: dict[str, str]) -> ExperimentConfig:
    def pick(name: str, default=None):
        value = getattr(args, name, None)
        if value is not None:
            return value
        return file_values.get(name, default)

    input_path = pick("input")
    if not input_path:
        raise CLIError("--input is required")
    measures = pick("measures")
    measures = _parse_measures(measures) if measures else _DEFAULT_MEASURES.get(args.command, centrality.MEASURES)
    seed = pick("seed")
    if seed is None:
        seed = os.environ.get(SEED_ENV, 0)
    beta = pick("beta")
    lam = args.lam if args.lam is not None else file_values.get("lambda", file_values.get("lam"))
    if args.beta is not None:
        lam = None
    elif args.lam is not None:
        beta = None
    extra = {}
    for key in ("seeds", "seed_measure", "lambdas", "comparison", "repeat"):
        value = pick(key)
        if value is not None:
            extra[key] = value
    if "lambdas" in extra:
        extra["lambdas"] = _parse_floats(extra["lambdas"])
    try:
        cfg = ExperimentConfig(
            input=Path(input_path),
            format=str(pick("format", "auto")),
            largest_component=_bool(pick("largest_component", False)),
            measures=measures,
            k=int(pick("k", 10)),
            beta=None if beta is None else float(beta),
            lam=None if lam is None else float(lam),
            steps=int(pick("steps", 30)),
            runs=int(pick("runs", _DEFAULT_RUNS.get(args.command, 50))),
            t_obs=int(pick("t_obs", 10)),
            master_seed=int(seed),
            output=None if pick("output") is None else Path(pick("output")),
            out_format=str(pick("out_format", "csv")),
            workers=int(pick("workers", 1)),
            extra=extra,
        )
    except ValueError as exc:
        raise CLIError(f"bad configuration value: {exc}") from None
    if cfg.k < 1:
        raise CLIError("--k must be >= 1")
    if cfg.beta is not None and cfg.lam is not None:
        raise CLIError("exactly one of --beta or --lambda is allowed")
    return cfg


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        file_values = read_config_file(args.config) if args.config else {}
        cfg = make_config(args, file_values)
        COMMANDS[args.command][0](cfg)
    except (CLIError, GraphError, ValueError, KeyError) as exc:
        message = exc.args[0] if exc.args else str(exc)
        print(f"netdim {args.command}: error: {message}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"netdim {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
