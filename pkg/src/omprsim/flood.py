"""Propagation of one RREQ over a link snapshot.

All three disciplines share the compiled BFS kernel and differ only in the
per-edge and per-node forwarding masks handed to it.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Dict, FrozenSet, Iterator, Tuple

import numpy as np

from . import _kernels
from .geometry import NetworkSnapshot
from .mpr import RelayAssignment

RULES = {"any": 0, "first": 1}


@dataclass(frozen=True)
class FloodOutcome:
    source: int
    received: FrozenSet[int]
    retransmitted: FrozenSet[int]
    hops: Dict[int, int]

    @classmethod
    def from_arrays(cls, source: int, hops: np.ndarray, sent: np.ndarray) -> "FloodOutcome":
        hop_list = hops.tolist()
        received = frozenset(i for i, h in enumerate(hop_list) if h > 0)
        tx = frozenset(np.flatnonzero(sent).tolist()) - {source}
        return cls(source, received, tx, {i: h for i, h in enumerate(hop_list) if h >= 0})

    @property
    def rx_count(self) -> int:
        return len(self.received)

    @property
    def tx_count(self) -> int:
        return len(self.retransmitted)

    def forwarders_within(self, max_hop: int) -> int:
        """Retransmitting nodes first reached at hop ``<= max_hop``."""
        return sum(1 for v in self.retransmitted if self.hops[v] <= max_hop)


def _ones(k: int) -> np.ndarray:
    return np.ones(k, dtype=np.uint8)


def _check_source(snapshot: NetworkSnapshot, source: int) -> None:
    if not 0 <= source < snapshot.n:
        raise ValueError(f"source {source} outside [0, {snapshot.n})")


def run_kernel(snapshot: NetworkSnapshot, source: int, edge_ok=None, node_ok=None, rule: str = "first") -> Tuple[np.ndarray, np.ndarray]:
    """Raw ``(hops, sent)`` arrays; the harness uses this to skip set building.

    ``rule`` decides which same-hop copy counts when a node is reached by
    several transmitters at once: ``"first"`` looks only at the copy from
    the lowest-id transmitter, ``"any"`` accepts a forwarding edge from any
    of them. It has no effect when ``edge_ok`` is all ones.
    """
    if edge_ok is None:
        edge_ok = _ones(snapshot.edge_count)
    if node_ok is None:
        node_ok = _ones(snapshot.n)
    return _kernels.flood(snapshot.indptr, snapshot.indices, edge_ok, node_ok, int(source), RULES[rule])


def flood_pure(snapshot: NetworkSnapshot, source: int) -> FloodOutcome:
    _check_source(snapshot, source)
    return FloodOutcome.from_arrays(source, *run_kernel(snapshot, source))


def retransmit_coins(n: int, p_r: float, rng: np.random.Generator) -> np.ndarray:
    """One forwarding decision per node for one flood."""
    if not 0.0 <= p_r <= 1.0:
        raise ValueError(f"p_r={p_r} outside [0, 1]")
    return (rng.random(n) < p_r).astype(np.uint8)


def flood_probabilistic(snapshot: NetworkSnapshot, source: int, p_r: float, rng: np.random.Generator) -> FloodOutcome:
    _check_source(snapshot, source)
    coins = retransmit_coins(snapshot.n, p_r, rng)
    return FloodOutcome.from_arrays(source, *run_kernel(snapshot, source, node_ok=coins))


def relay_matrix(assignment: RelayAssignment) -> np.ndarray:
    n = assignment.n
    mat = np.zeros((n, n), dtype=np.uint8)
    for u, rs in assignment.relay_sets.items():
        if rs.relays:
            mat[u, list(rs.relays)] = 1
    return mat


def relay_edges(snapshot: NetworkSnapshot, assignment: RelayAssignment, matrix: np.ndarray | None = None) -> np.ndarray:
    """Per-edge flag: 1 where the edge's tail picked its head as a relay."""
    if assignment.n != snapshot.n:
        raise ValueError(
            f"relay assignment covers {assignment.n} nodes but the snapshot has {snapshot.n}"
        )
    if matrix is None:
        matrix = relay_matrix(assignment)
    return np.ascontiguousarray(matrix[snapshot.edge_sources(), snapshot.indices])


def flood_mpr(snapshot: NetworkSnapshot, assignment: RelayAssignment, source: int, rule: str = "first") -> FloodOutcome:
    """Only nodes picked as relays by the transmitter they heard from forward."""
    _check_source(snapshot, source)
    edges = relay_edges(snapshot, assignment)
    return FloodOutcome.from_arrays(source, *run_kernel(snapshot, source, edge_ok=edges, rule=rule))


def trace_events(snapshot: NetworkSnapshot, outcome: FloodOutcome) -> Iterator[Tuple[int, int, int]]:
    """``(hop, transmitter, receiver)`` for every delivered copy, by hop then ids."""
    senders = sorted({outcome.source} | outcome.retransmitted, key=lambda v: (outcome.hops[v], v))
    for u in senders:
        for v in snapshot.out_neighbors(u).tolist():
            yield outcome.hops[u] + 1, u, v


def write_trace(snapshot: NetworkSnapshot, outcome: FloodOutcome, fh: IO[str], prefix: str = "") -> None:
    for hop, u, v in trace_events(snapshot, outcome):
        fh.write(f"{prefix}{hop} {u} {v}\n")
