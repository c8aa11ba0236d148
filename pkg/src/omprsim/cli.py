"""Config grammar, result files and the command-line driver."""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path
from typing import List, NamedTuple, Optional, Sequence, Tuple

from . import __version__, _kernels
from .config import ConfigError, SimConfig
from .flood import FloodOutcome, write_trace
from .fixtures import grid_fixture
from .geometry import build_neighbor_tables, dump_snapshot, sample_links
from .harness import ALGORITHMS, SweepResult, run_sweep, trajectory
from .mpr import assign_relays, dump_relay_diagnostics
from . import streams

CSV_HEADER = [
    "algorithm", "p_c", "rch_mean", "rch_stddev", "ret_mean", "ret_stddev",
    "loops", "sources", "avg_mpr_sets", "cap_hits",
]
DEFAULT_GRID = (0.5, 1.0, 0.1)
DEFAULT_ALGORITHMS = ("pure", "prob", "greedy-mpr", "ompr")

# config key -> (SimConfig field, parser)
_KEYS = {
    "nodes": ("node_count", int),
    "area_width": ("area_width", float),
    "area_height": ("area_height", float),
    "radius": ("radius", float),
    "speed": ("speed", float),
    "sim_time": ("sim_time", float),
    "p_r": ("retrans_prob", float),
    "branch_cap": ("branch_cap", int),
    "seed": ("master_seed", int),
    "loops": ("loops", int),
    "noise_model": ("noise_model", str),
    "forward_rule": ("forward_rule", str),
}
_GRID_KEYS = ("p_c_min", "p_c_max", "p_c_step")


class ParseError(ConfigError):
    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class GridSpec(NamedTuple):
    start: float
    stop: float
    step: float

    def values(self) -> List[float]:
        for name, v in zip(_GRID_KEYS, self):
            if name != "p_c_step" and not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name}={v!r} violates bound 0 <= p_c <= 1")
        if self.step <= 0:
            raise ConfigError(f"p_c_step={self.step!r} violates bound > 0")
        if self.stop < self.start - 1e-12:
            raise ConfigError(f"p_c_max={self.stop!r} is below p_c_min={self.start!r}")
        count = int(round((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(min(self.start + i * self.step, 1.0), 10) for i in range(count)]


def parse_grid(text: str) -> GridSpec:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"p_c grid {text!r} must look like MIN:MAX:STEP")
    try:
        return GridSpec(*map(float, parts))
    except ValueError:
        raise ConfigError(f"p_c grid {text!r} has a non-numeric field") from None


def parse_algorithms(text: str) -> Tuple[str, ...]:
    algos = tuple(a.strip() for a in text.split(",") if a.strip())
    if not algos:
        raise ConfigError("algorithm list is empty")
    for a in algos:
        if a not in ALGORITHMS:
            raise ConfigError(f"unknown algorithm {a!r}; choose from {','.join(ALGORITHMS)}")
    return algos


@dataclass(frozen=True)
class RunManifest:
    config: SimConfig
    grid: GridSpec
    algorithms: Tuple[str, ...]
    version: str = __version__

    @property
    def master_seed(self) -> int:
        return self.config.master_seed

    def to_text(self) -> str:
        c = self.config
        lines = [
            f"# omprsim {self.version}",
            f"# pause_time={c.pause_time:g} loops={c.loop_count}",
        ]
        for key, (name, _) in _KEYS.items():
            lines.append(f"{key}={getattr(c, name)!r}".replace("'", ""))
        for key, v in zip(_GRID_KEYS, self.grid):
            lines.append(f"{key}={v!r}")
        lines.append("algorithms=" + ",".join(self.algorithms))
        return "\n".join(lines) + "\n"


def parse_config(text: str) -> RunManifest:
    """Parse ``key=value`` lines; missing keys fall back to the defaults."""
    values = {}
    grid = dict(zip(_GRID_KEYS, DEFAULT_GRID))
    algorithms = DEFAULT_ALGORITHMS
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(lineno, f"expected key=value, got {raw.strip()!r}")
        key, val = (part.strip() for part in line.split("=", 1))
        try:
            if key in _KEYS:
                name, conv = _KEYS[key]
                values[name] = conv(val)
            elif key in _GRID_KEYS:
                grid[key] = float(val)
            elif key == "algorithms":
                algorithms = parse_algorithms(val)
            else:
                raise ParseError(lineno, f"unknown key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ParseError(lineno, f"bad value for {key}: {val!r}") from None
    config = SimConfig(**values).validate()
    spec = GridSpec(*(grid[k] for k in _GRID_KEYS))
    spec.values()
    return RunManifest(config, spec, tuple(algorithms))


def _fmt(v: float) -> str:
    return f"{v:.6f}"


def results_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in result.rows:
        w.writerow([
            r.algorithm, _fmt(r.p_c), _fmt(r.rch_mean), _fmt(r.rch_spread), _fmt(r.ret_mean),
            _fmt(r.ret_spread), r.loops, r.sources_per_loop, _fmt(r.avg_sets), r.cap_hit_count,
        ])
    return buf.getvalue()


def plot_table(result: SweepResult, metric: str) -> str:
    """Whitespace-separated columns: p_c, then one column per algorithm."""
    algos = list(dict.fromkeys(r.algorithm for r in result.rows))
    grid = sorted({r.p_c for r in result.rows})
    lookup = {(r.algorithm, r.p_c): getattr(r, metric) for r in result.rows}
    lines = ["# p_c " + " ".join(algos)]
    for p in grid:
        cells = [_fmt(lookup[(a, p)]) if (a, p) in lookup else "nan" for a in algos]
        lines.append(" ".join([_fmt(p)] + cells))
    return "\n".join(lines) + "\n"


def emit_results(result: SweepResult, manifest: RunManifest, out_dir) -> List[Path]:
    if not result.rows:
        raise ValueError("nothing to emit: sweep result has no rows")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    files = {
        "results.csv": results_csv(result),
        "plot_rch.txt": plot_table(result, "rch_mean"),
        "plot_ret.txt": plot_table(result, "ret_mean"),
        "manifest.txt": manifest.to_text(),
    }
    written = []
    for name, text in files.items():
        path = out / name
        with open(path, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
        written.append(path)
    return written


def format_table(result: SweepResult) -> str:
    lines = [f"{'algorithm':<11} {'p_c':>5} {'RCH':>8} {'sd':>7} {'RET':>8} {'sd':>7} {'sets':>7} {'caps':>5}"]
    for r in result.rows:
        lines.append(
            f"{r.algorithm:<11} {r.p_c:>5.2f} {r.rch_mean:>8.4f} {r.rch_spread:>7.4f} "
            f"{r.ret_mean:>8.4f} {r.ret_spread:>7.4f} {r.avg_sets:>7.2f} {r.cap_hit_count:>5}"
        )
    return "\n".join(lines)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="omprsim", description="RET/RCH sweeps of RREQ flooding in noisy MANETs.")
    p.add_argument("--config", metavar="PATH", help="key=value configuration file")
    p.add_argument("--seed", type=int, metavar="U64", help="master seed (overrides config)")
    p.add_argument("--out", metavar="DIR", default="results", help="output directory (default: results)")
    p.add_argument("--algorithms", metavar="LIST", help=f"comma list from {{{','.join(ALGORITHMS)}}}")
    p.add_argument("--pc", metavar="MIN:MAX:STEP", help="reception probability grid")
    p.add_argument("--loops", type=int, help="override the number of mobility loops")
    p.add_argument("--workers", type=int, default=1, help="worker processes for sweep cells")
    p.add_argument("--trace", action="store_true", help="write per-flood event traces to DIR/trace.txt")
    p.add_argument("--dump", action="store_true",
                   help="write the first loop's snapshot and relay diagnostics to DIR")
    p.add_argument("--grid-fixture", action="store_true", help="run the 7x7 lattice diffusion scenario and exit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({_kernels.BACKEND} kernel)")
    return p


def resolve(args) -> RunManifest:
    text = ""
    if args.config:
        text = Path(args.config).read_text(encoding="utf-8")
    manifest = parse_config(text)
    config, grid, algos = manifest.config, manifest.grid, manifest.algorithms
    if args.seed is not None:
        config = replace(config, master_seed=args.seed)
    if args.loops is not None:
        config = replace(config, loops=args.loops)
    if args.pc:
        grid = parse_grid(args.pc)
        grid.values()
    if args.algorithms:
        algos = parse_algorithms(args.algorithms)
    return RunManifest(config.validate(), grid, algos)


def _print_fixture(rule: str) -> None:
    rows = grid_fixture(rule=rule)
    print("7x7 grid, R=1.5, p_c=1, source=center")
    print(f"{'algorithm':<11} {'reached':>8} {'fwd_to_ring3':>13} {'total_tx':>9} {'RCH':>7} {'RET':>7}")
    for r in rows:
        print(f"{r.algorithm:<11} {r.reached:>5}/{r.others:<2} {r.forwarders:>13} {r.total_tx:>9} {r.rch:>7.4f} {r.ret:>7.4f}")


def _write_dump(manifest: RunManifest, out: Path) -> None:
    c = manifest.config.with_reception(manifest.grid.values()[0])
    positions = trajectory(c)[0]
    snap = sample_links(positions, c.radius, c.reception_prob, streams.stream(c.master_seed, streams.DISCOVERY, 0))
    tables = build_neighbor_tables(snap)
    with open(out / "snapshot.txt", "w", encoding="utf-8") as fh:
        dump_snapshot(snap, fh)
    with open(out / "relays.txt", "w", encoding="utf-8") as fh:
        dump_relay_diagnostics(tables, assign_relays(tables, c.branch_cap), fh)


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        manifest = resolve(args)
    except ConfigError as exc:
        print(f"omprsim: invalid configuration: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"omprsim: cannot read config: {exc}", file=sys.stderr)
        return 2

    if args.grid_fixture:
        _print_fixture(manifest.config.forward_rule)
        return 0

    out = Path(args.out)
    trace_fh = None
    try:
        out.mkdir(parents=True, exist_ok=True)
        tracer = None
        if args.trace:
            trace_fh = open(out / "trace.txt", "w", encoding="utf-8")
            trace_fh.write("# algorithm p_c loop source hop transmitter receiver\n")

            def tracer(algorithm, p_c, loop, source, snap, hops, sent):
                outcome = FloodOutcome.from_arrays(source, hops, sent)
                write_trace(snap, outcome, trace_fh, f"{algorithm} {p_c:.6f} {loop} {source} ")

        result = run_sweep(manifest.config, manifest.grid.values(), manifest.algorithms,
                           workers=max(1, args.workers), tracer=tracer)
        emit_results(result, manifest, out)
        if args.dump:
            _write_dump(manifest, out)
    except OSError as exc:
        print(f"omprsim: I/O failure: {exc}", file=sys.stderr)
        return 2
    finally:
        if trace_fh is not None:
            trace_fh.close()

    print(format_table(result))
    print(f"wrote {out / 'results.csv'}")
    return 0


def main() -> None:
    sys.exit(cli_main())
