"""Mobility loops, per-source floods and RET/RCH sweeps."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import List, NamedTuple, Sequence

import numpy as np

from . import streams
from .config import ConfigError, SimConfig
from .flood import relay_edges, relay_matrix, retransmit_coins, run_kernel
from .geometry import (
    NetworkSnapshot,
    build_neighbor_tables,
    in_range_pairs,
    place_nodes,
    sample_links,
    step_mobility,
)
from .mpr import assign_relays

ALGORITHMS = ("pure", "prob", "greedy-mpr", "ompr")
MPR_METHODS = {"greedy-mpr": "greedy", "ompr": "ompr"}


@dataclass
class MetricsAccumulator:
    sum_rch: float = 0.0
    sum_ret: float = 0.0
    sum_sq_rch: float = 0.0
    sum_sq_ret: float = 0.0
    trials: int = 0

    def add(self, rch: float, ret: float) -> None:
        self.sum_rch += rch
        self.sum_ret += ret
        self.sum_sq_rch += rch * rch
        self.sum_sq_ret += ret * ret
        self.trials += 1

    @staticmethod
    def _spread(total: float, total_sq: float, k: int) -> float:
        if k < 2:
            return 0.0
        var = (total_sq - total * total / k) / (k - 1)
        return math.sqrt(max(var, 0.0))

    @property
    def rch_mean(self) -> float:
        return self.sum_rch / self.trials if self.trials else 0.0

    @property
    def ret_mean(self) -> float:
        return self.sum_ret / self.trials if self.trials else 0.0

    @property
    def rch_spread(self) -> float:
        return self._spread(self.sum_rch, self.sum_sq_rch, self.trials)

    @property
    def ret_spread(self) -> float:
        return self._spread(self.sum_ret, self.sum_sq_ret, self.trials)


class LoopStats(NamedTuple):
    rch: float
    ret: float
    mean_sets: float = 0.0
    cap_hits: int = 0


class SweepRow(NamedTuple):
    algorithm: str
    p_c: float
    rch_mean: float
    rch_spread: float
    ret_mean: float
    ret_spread: float
    loops: int
    sources_per_loop: int
    avg_sets: float
    cap_hit_count: int


@dataclass
class SweepResult:
    rows: List[SweepRow] = field(default_factory=list)

    def cell(self, algorithm: str, p_c: float) -> SweepRow:
        for row in self.rows:
            if row.algorithm == algorithm and math.isclose(row.p_c, p_c, abs_tol=1e-9):
                return row
        raise KeyError((algorithm, p_c))

    def series(self, algorithm: str, metric: str = "rch_mean") -> List[float]:
        return [getattr(r, metric) for r in self.rows if r.algorithm == algorithm]


def trajectory(config: SimConfig) -> List[np.ndarray]:
    """Node positions at the start of every mobility loop."""
    positions = place_nodes(config, streams.stream(config.master_seed, streams.PLACE))
    out = [positions]
    for m in range(1, config.loop_count):
        positions = step_mobility(positions, config, streams.stream(config.master_seed, streams.MOVE, m))
        out.append(positions)
    return out


def flood_snapshot(config: SimConfig, positions, loop_index: int, source: int, pairs, discovery: NetworkSnapshot) -> NetworkSnapshot:
    """Links in force while ``source``'s RREQ propagates."""
    if config.noise_model == "discovery" or config.reception_prob >= 1.0:
        return discovery
    rng = streams.stream(config.master_seed, streams.FLOOD_LINKS, loop_index, source)
    return sample_links(positions, config.radius, config.reception_prob, rng, loop_index, pairs)


def run_loop(config: SimConfig, positions, algorithm: str, loop_index: int = 0, tracer=None) -> LoopStats:
    """One mobility loop: sample links, select relays, flood from every node.

    Returns the mean over sources of Rx/(n-1) and Tx/(n-1). ``tracer``, if
    given, is called as ``tracer(source, snapshot, hops, sent)`` per flood.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}; expected one of {ALGORITHMS}")
    n = len(positions)
    if n < 2:
        raise ConfigError("metric runs need at least 2 nodes")
    seed = config.master_seed
    p_c = config.reception_prob
    pairs = in_range_pairs(positions, config.radius)
    discovery = sample_links(
        positions, config.radius, p_c, streams.stream(seed, streams.DISCOVERY, loop_index), loop_index, pairs
    )

    matrix = None
    mean_sets, cap_hits = 0.0, 0
    if algorithm in MPR_METHODS:
        assignment = assign_relays(build_neighbor_tables(discovery), config.branch_cap, MPR_METHODS[algorithm])
        matrix = relay_matrix(assignment)
        mean_sets, cap_hits = assignment.mean_sets_explored, assignment.cap_hits

    rx_total = tx_total = 0
    for s in range(n):
        snap = flood_snapshot(config, positions, loop_index, s, pairs, discovery)
        edge_ok = node_ok = None
        if matrix is not None:
            edge_ok = relay_edges(snap, assignment, matrix)
        elif algorithm == "prob":
            node_ok = retransmit_coins(n, config.retrans_prob, streams.stream(seed, streams.COINS, loop_index, s))
        hops, sent = run_kernel(snap, s, edge_ok, node_ok, config.forward_rule)
        rx_total += int(np.count_nonzero(hops > 0))
        tx_total += int(sent.sum()) - 1
        if tracer is not None:
            tracer(s, snap, hops, sent)
    denom = n * (n - 1)
    return LoopStats(rx_total / denom, tx_total / denom, mean_sets, cap_hits)


def run_experiment(config: SimConfig, algorithm: str, positions_by_loop=None, tracer=None) -> SweepRow:
    """Average RCH/RET over all mobility loops of one (algorithm, p_c) cell."""
    config.validate()
    if positions_by_loop is None:
        positions_by_loop = trajectory(config)
    acc = MetricsAccumulator()
    sets_total, caps = 0.0, 0
    for m, positions in enumerate(positions_by_loop):
        loop_tracer = None
        if tracer is not None:
            loop_tracer = lambda s, snap, hops, sent, m=m: tracer(algorithm, config.reception_prob, m, s, snap, hops, sent)
        stats = run_loop(config, positions, algorithm, m, loop_tracer)
        acc.add(stats.rch, stats.ret)
        sets_total += stats.mean_sets
        caps += stats.cap_hits
    loops = len(positions_by_loop)
    return SweepRow(
        algorithm, config.reception_prob, acc.rch_mean, acc.rch_spread, acc.ret_mean, acc.ret_spread,
        loops, config.node_count, sets_total / loops, caps,
    )


def _cell(args) -> SweepRow:
    config, algorithm = args
    return run_experiment(config, algorithm)


def run_sweep(
    config: SimConfig,
    grid: Sequence[float],
    algorithms: Sequence[str],
    workers: int = 1,
    tracer=None,
) -> SweepResult:
    """One row per (algorithm, p_c), algorithm-major.

    Every cell reuses the same trajectory and the same link/coin draws, so
    cells differ only in the thresholds applied to common random numbers.
    """
    if not grid or not algorithms:
        raise ValueError("sweep needs a non-empty p_c grid and algorithm list")
    for a in algorithms:
        if a not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {a!r}; expected one of {ALGORITHMS}")
    config.validate()
    cells = [(config.with_reception(p).validate(), a) for a in algorithms for p in grid]
    if workers > 1 and tracer is None:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_cell, cells))
    else:
        positions = trajectory(config)
        rows = [run_experiment(c, a, positions, tracer) for c, a in cells]
    return SweepResult(rows)
