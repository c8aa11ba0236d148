"""Node placement, mobility, noisy link sampling and neighbor tables."""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Dict, FrozenSet, Iterator, NamedTuple, Tuple

import numpy as np

from .config import SimConfig


class NodePosition(NamedTuple):
    node_id: int
    x: float
    y: float


def place_nodes(config: SimConfig, rng: np.random.Generator) -> np.ndarray:
    """Uniform random placement; returns an ``(n, 2)`` array of x, y."""
    n = config.node_count
    xs = rng.uniform(0.0, config.area_width, n)
    ys = rng.uniform(0.0, config.area_height, n)
    return np.column_stack([xs, ys])


def _fold(values: np.ndarray, upper: float) -> np.ndarray:
    # reflect into [0, upper]; mirror images repeat with period 2 * upper
    t = np.mod(values, 2.0 * upper)
    return np.where(t > upper, 2.0 * upper - t, t)


def step_mobility(positions: np.ndarray, config: SimConfig, rng: np.random.Generator) -> np.ndarray:
    """Move every node ``u * tau`` metres along an independent uniform heading.

    Coordinates leaving the area are reflected off the boundary.
    """
    positions = np.asarray(positions, dtype=float)
    n = len(positions)
    heading = rng.uniform(0.0, 2.0 * np.pi, n)
    step = config.step_length
    if step == 0.0:
        return positions.copy()
    x = positions[:, 0] + step * np.cos(heading)
    y = positions[:, 1] + step * np.sin(heading)
    return np.column_stack([_fold(x, config.area_width), _fold(y, config.area_height)])


def in_range_pairs(positions: np.ndarray, radius: float) -> Tuple[np.ndarray, np.ndarray]:
    """Ordered pairs ``(i, j)``, ``i != j``, with distance <= radius, row-major."""
    pos = np.asarray(positions, dtype=float)
    diff = pos[:, None, :] - pos[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    mask = d2 <= radius * radius
    np.fill_diagonal(mask, False)
    rows, cols = np.nonzero(mask)
    return rows.astype(np.int32), cols.astype(np.int32)


def _csr(n: int, rows: np.ndarray, cols: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    indptr = np.zeros(n + 1, dtype=np.int32)
    np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
    return indptr, np.ascontiguousarray(cols, dtype=np.int32)


@dataclass(frozen=True, eq=False)
class NetworkSnapshot:
    """Positions plus the directed link graph for one mobility loop.

    Links are stored in CSR form: the out-neighbors of ``i`` are
    ``indices[indptr[i]:indptr[i + 1]]``, sorted ascending.
    """

    positions: np.ndarray
    indptr: np.ndarray
    indices: np.ndarray
    p_c_used: float
    loop_index: int = 0

    @classmethod
    def from_edges(cls, positions, rows, cols, p_c_used: float = 1.0, loop_index: int = 0) -> "NetworkSnapshot":
        positions = np.asarray(positions, dtype=float)
        rows = np.asarray(rows, dtype=np.int32)
        cols = np.asarray(cols, dtype=np.int32)
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr, indices = _csr(len(positions), rows, cols)
        return cls(positions, indptr, indices, p_c_used, loop_index)

    @property
    def n(self) -> int:
        return len(self.positions)

    @property
    def edge_count(self) -> int:
        return len(self.indices)

    def out_neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def edge_sources(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int32), np.diff(self.indptr))

    def edges(self) -> Iterator[Tuple[int, int]]:
        for i, j in zip(self.edge_sources().tolist(), self.indices.tolist()):
            yield i, j

    def link_set(self) -> set:
        return set(self.edges())

    def has_link(self, i: int, j: int) -> bool:
        nbrs = self.out_neighbors(i)
        k = np.searchsorted(nbrs, j)
        return bool(k < len(nbrs) and nbrs[k] == j)

    def node_positions(self) -> list:
        return [NodePosition(i, float(x), float(y)) for i, (x, y) in enumerate(self.positions)]


def sample_links(
    positions: np.ndarray,
    radius: float,
    p_c: float,
    rng: np.random.Generator,
    loop_index: int = 0,
    pairs: Tuple[np.ndarray, np.ndarray] | None = None,
) -> NetworkSnapshot:
    """Sample the directed link graph under reception probability ``p_c``.

    One draw ``xi`` in [0, 1) per in-range ordered pair, taken in row-major
    pair order; the link survives iff ``xi <= p_c``. At ``p_c == 1`` no
    draws are made. ``pairs`` may carry precomputed ``in_range_pairs`` output.
    """
    if not 0.0 <= p_c <= 1.0:
        raise ValueError(f"p_c={p_c} outside [0, 1]")
    rows, cols = pairs if pairs is not None else in_range_pairs(positions, radius)
    if p_c < 1.0:
        keep = rng.random(len(rows)) <= p_c
        rows, cols = rows[keep], cols[keep]
    # pairs are already row-major, skip the sort in from_edges
    indptr, indices = _csr(len(positions), rows, cols)
    return NetworkSnapshot(np.asarray(positions, dtype=float), indptr, indices, p_c, loop_index)


@dataclass(frozen=True)
class NeighborTables:
    one_hop: Dict[int, FrozenSet[int]]
    two_hop: Dict[int, FrozenSet[int]]
    # out-neighbors of every node, needed to evaluate covers(y, z)
    links: Dict[int, FrozenSet[int]]

    @property
    def n(self) -> int:
        return len(self.one_hop)

    def covers(self, y: int, z: int) -> bool:
        return z in self.links[y]


def build_neighbor_tables(snapshot: NetworkSnapshot) -> NeighborTables:
    links = {i: frozenset(snapshot.out_neighbors(i).tolist()) for i in range(snapshot.n)}
    two_hop = {}
    for x, n1 in links.items():
        reach = set()
        for y in n1:
            reach |= links[y]
        reach -= n1
        reach.discard(x)
        two_hop[x] = frozenset(reach)
    return NeighborTables(one_hop=links, two_hop=two_hop, links=links)


def dump_snapshot(snapshot: NetworkSnapshot, fh: IO[str]) -> None:
    fh.write(f"# snapshot loop={snapshot.loop_index} p_c={snapshot.p_c_used:.6f} n={snapshot.n}\n")
    fh.write("# nodes: node_id x y\n")
    for i, (x, y) in enumerate(snapshot.positions):
        fh.write(f"{i} {x:.6f} {y:.6f}\n")
    fh.write("# links: i j\n")
    for i, j in snapshot.edges():
        fh.write(f"{i} {j}\n")


def load_snapshot(fh: IO[str]) -> NetworkSnapshot:
    """Inverse of :func:`dump_snapshot` (positions rounded to 1e-6 m)."""
    header = fh.readline().split()
    meta = dict(tok.split("=", 1) for tok in header[2:])
    section = None
    pos, rows, cols = [], [], []
    for line in fh:
        line = line.strip()
        if not line:
            continue
        if line.startswith("# nodes"):
            section = "nodes"
        elif line.startswith("# links"):
            section = "links"
        elif section == "nodes":
            _, x, y = line.split()
            pos.append((float(x), float(y)))
        elif section == "links":
            i, j = line.split()
            rows.append(int(i))
            cols.append(int(j))
    return NetworkSnapshot.from_edges(
        np.array(pos, dtype=float).reshape(-1, 2), rows, cols,
        p_c_used=float(meta["p_c"]), loop_index=int(meta["loop"]),
    )


def grid_positions(side: int, spacing: float = 1.0) -> np.ndarray:
    """Row-major ``side x side`` lattice; node id = row * side + col."""
    r, c = np.divmod(np.arange(side * side), side)
    return np.column_stack([c * spacing, r * spacing]).astype(float)
