"""Regular-lattice diffusion scenario: 7x7 grid, Moore neighborhoods."""

from __future__ import annotations

from typing import List, NamedTuple

from .flood import flood_mpr, flood_pure
from .geometry import build_neighbor_tables, grid_positions, sample_links
from .mpr import assign_relays


class FixtureRow(NamedTuple):
    algorithm: str
    reached: int
    others: int
    forwarders: int
    total_tx: int

    @property
    def rch(self) -> float:
        return self.reached / self.others

    @property
    def ret(self) -> float:
        return self.total_tx / self.others


def grid_fixture(side: int = 7, radius: float = 1.5, rule: str = "first") -> List[FixtureRow]:
    """Flood from the center of a ``side x side`` unit grid at p_c = 1.

    ``forwarders`` counts retransmissions needed to reach the outermost
    ring: forwarding nodes first reached at hop < side // 2.
    """
    snap = sample_links(grid_positions(side), radius, 1.0, None)
    center = (side * side) // 2
    last_ring = side // 2
    rows = []
    outcomes = [("pure", flood_pure(snap, center))]
    for method, tag in (("greedy", "greedy-mpr"), ("ompr", "ompr")):
        assignment = assign_relays(build_neighbor_tables(snap), method=method)
        outcomes.append((tag, flood_mpr(snap, assignment, center, rule)))
    for tag, out in outcomes:
        rows.append(FixtureRow(tag, out.rx_count, snap.n - 1, out.forwarders_within(last_ring - 1), out.tx_count))
    return rows
