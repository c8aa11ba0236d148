"""Multipoint relay selection.

Three selectors over the same :class:`CoverInstance`:

* :func:`greedy_mpr` - classic greedy cover, ties to the smallest node id.
* :func:`ompr_select` - the branching variant: every greedy tie spawns one
  sibling set per tying candidate and the smallest finished set wins.
* :func:`brute_force_min_cover` - exhaustive minimum cover, used as an oracle.

The heuristics work on integer bitmasks: bit ``k`` of a relay mask is the
k-th candidate in ascending id order, bit ``t`` of a coverage mask the t-th
target in ascending id order.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from itertools import combinations
from typing import IO, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from .geometry import NeighborTables

ORACLE_MAX_CANDIDATES = 20
DEFAULT_BRANCH_CAP = 10_000


@dataclass(frozen=True)
class CoverInstance:
    center: int
    candidates: Tuple[int, ...]
    targets: FrozenSet[int]
    covers: Mapping[int, FrozenSet[int]]

    @classmethod
    def build(cls, center: int, coverage: Mapping[int, Iterable[int]], targets: Optional[Iterable[int]] = None) -> "CoverInstance":
        """Build from ``candidate -> covered nodes``; targets default to the union."""
        cov = {int(y): frozenset(int(z) for z in zs) for y, zs in coverage.items()}
        if targets is None:
            tgt = frozenset().union(*cov.values()) if cov else frozenset()
        else:
            tgt = frozenset(int(z) for z in targets)
        cov = {y: zs & tgt for y, zs in cov.items()}
        return cls(int(center), tuple(sorted(cov)), tgt, cov)

    def validate(self) -> None:
        reached = set()
        for y in self.candidates:
            if not self.covers[y] <= self.targets:
                raise ValueError(f"candidate {y} covers nodes outside the target set")
            reached |= self.covers[y]
        missing = self.targets - reached
        if missing:
            raise ValueError(f"targets {sorted(missing)[:5]} are not covered by any candidate")

    def is_cover(self, relays: Iterable[int]) -> bool:
        got = set()
        for y in relays:
            got |= self.covers[y]
        return got == self.targets


def cover_instance(tables: NeighborTables, x: int) -> CoverInstance:
    targets = tables.two_hop[x]
    covers = {y: tables.links[y] & targets for y in tables.one_hop[x]}
    return CoverInstance(x, tuple(sorted(covers)), targets, covers)


@dataclass(frozen=True)
class RelaySet:
    center: int
    relays: FrozenSet[int]
    sets_explored: int = 1
    cap_hit: bool = False

    def __len__(self) -> int:
        return len(self.relays)


class _Bits:
    """Bitmask view of a cover instance."""

    __slots__ = ("ids", "masks", "full")

    def __init__(self, inst: CoverInstance):
        index = {z: t for t, z in enumerate(sorted(inst.targets))}
        self.ids = inst.candidates
        self.masks = [sum(1 << index[z] for z in inst.covers[y]) for y in inst.candidates]
        self.full = (1 << len(index)) - 1

    def mandatory(self) -> Tuple[int, int]:
        chosen = cov = 0
        seen_once = seen_twice = 0
        for m in self.masks:
            seen_twice |= seen_once & m
            seen_once |= m
        unique = seen_once & ~seen_twice
        for k, m in enumerate(self.masks):
            if m & unique:
                chosen |= 1 << k
                cov |= m
        return chosen, cov

    def best_candidates(self, chosen: int, cov: int) -> List[int]:
        """Candidates (ascending) tying for the largest number of newly covered targets."""
        best, tied = 0, []
        uncovered = self.full & ~cov
        for k, m in enumerate(self.masks):
            if chosen >> k & 1:
                continue
            gain = (m & uncovered).bit_count()
            if gain > best:
                best, tied = gain, [k]
            elif gain == best and gain:
                tied.append(k)
        if not tied:
            raise AssertionError("uncovered targets remain but no candidate covers them")
        return tied

    def relay_ids(self, chosen: int) -> Tuple[int, ...]:
        return tuple(y for k, y in enumerate(self.ids) if chosen >> k & 1)


def mandatory_relays(instance: CoverInstance) -> FrozenSet[int]:
    bits = _Bits(instance)
    return frozenset(bits.relay_ids(bits.mandatory()[0]))


def greedy_mpr(instance: CoverInstance) -> RelaySet:
    bits = _Bits(instance)
    chosen, cov = bits.mandatory()
    while cov != bits.full:
        k = bits.best_candidates(chosen, cov)[0]
        chosen |= 1 << k
        cov |= bits.masks[k]
    return RelaySet(instance.center, frozenset(bits.relay_ids(chosen)))


def ompr_select(instance: CoverInstance, branch_cap: int = DEFAULT_BRANCH_CAP) -> RelaySet:
    """Branch on every greedy tie and keep the smallest completed relay set.

    Sets are processed in creation order. A set that reaches a relay mask
    already produced by another set is merged into it. Once ``branch_cap``
    sets exist, further ties are resolved greedily and ``cap_hit`` is set.
    Among minimum-size results the lexicographically smallest id tuple wins.
    """
    if branch_cap < 1:
        raise ValueError("branch_cap must be >= 1")
    bits = _Bits(instance)
    start = bits.mandatory()
    seen = {start[0]}
    pending = deque([start])
    n_sets = 1
    cap_hit = False
    best: Optional[Tuple[int, Tuple[int, ...]]] = None

    while pending:
        chosen, cov = pending.popleft()
        merged = False
        while cov != bits.full:
            first, *others = bits.best_candidates(chosen, cov)
            for k in others:
                sibling = chosen | 1 << k
                if sibling in seen:
                    continue
                if n_sets >= branch_cap:
                    cap_hit = True
                    continue
                seen.add(sibling)
                n_sets += 1
                pending.append((sibling, cov | bits.masks[k]))
            chosen |= 1 << first
            cov |= bits.masks[first]
            if chosen in seen:
                merged = True
                break
            seen.add(chosen)
        if merged:
            continue
        key = (chosen.bit_count(), bits.relay_ids(chosen))
        if best is None or key < best:
            best = key

    return RelaySet(instance.center, frozenset(best[1]), n_sets, cap_hit)


def brute_force_min_cover(instance: CoverInstance) -> RelaySet:
    """Globally minimum cover by exhaustive search over candidate subsets."""
    if len(instance.candidates) > ORACLE_MAX_CANDIDATES:
        raise ValueError(
            f"{len(instance.candidates)} candidates exceeds the oracle limit of {ORACLE_MAX_CANDIDATES}"
        )
    for size in range(len(instance.candidates) + 1):
        # combinations of a sorted tuple come out in lexicographic order
        for subset in combinations(instance.candidates, size):
            if instance.is_cover(subset):
                return RelaySet(instance.center, frozenset(subset))
    raise ValueError("instance has targets that no candidate covers")


SELECTORS = {
    "ompr": ompr_select,
    "greedy": lambda inst, branch_cap=None: greedy_mpr(inst),
}


@dataclass(frozen=True)
class RelayAssignment:
    relay_sets: Dict[int, RelaySet]
    selectors: Dict[int, FrozenSet[int]] = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.relay_sets)

    def is_relay(self, u: int, v: int) -> bool:
        """True when ``u`` picked ``v`` as one of its relays."""
        return v in self.relay_sets[u].relays

    @property
    def mean_sets_explored(self) -> float:
        if not self.relay_sets:
            return 0.0
        return sum(r.sets_explored for r in self.relay_sets.values()) / len(self.relay_sets)

    @property
    def cap_hits(self) -> int:
        return sum(r.cap_hit for r in self.relay_sets.values())


def assign_relays(tables: NeighborTables, branch_cap: int = DEFAULT_BRANCH_CAP, method: str = "ompr") -> RelayAssignment:
    select = SELECTORS[method]
    relay_sets = {}
    selectors: Dict[int, set] = {x: set() for x in range(tables.n)}
    for x in range(tables.n):
        inst = cover_instance(tables, x)
        rs = select(inst, branch_cap=branch_cap)
        if not inst.is_cover(rs.relays):
            raise AssertionError(f"relay set of node {x} leaves two-hop neighbors uncovered")
        relay_sets[x] = rs
        for y in rs.relays:
            selectors[y].add(x)
    return RelayAssignment(relay_sets, {y: frozenset(s) for y, s in selectors.items()})


def dump_relay_diagnostics(
    tables: NeighborTables,
    assignment: RelayAssignment,
    fh: IO[str],
    oracle_limit: int = 12,
) -> None:
    """One row per node; ``oracle_min`` is ``-`` when |N1| exceeds ``oracle_limit``."""
    fh.write("node_id n1 n2 mpr sets_explored cap_hit oracle_min\n")
    for x in range(tables.n):
        rs = assignment.relay_sets[x]
        inst = cover_instance(tables, x)
        oracle = "-"
        if len(inst.candidates) <= oracle_limit:
            oracle = str(len(brute_force_min_cover(inst)))
        fh.write(
            f"{x} {len(tables.one_hop[x])} {len(tables.two_hop[x])} {len(rs)} "
            f"{rs.sets_explored} {int(rs.cap_hit)} {oracle}\n"
        )
