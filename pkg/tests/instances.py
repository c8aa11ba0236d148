"""Seeded cover-instance generators shared by tests and the acceptance run."""

import numpy as np

from omprsim.mpr import CoverInstance


def random_instance(rng: np.random.Generator, max_candidates: int = 10, max_targets: int = 16, density: float = 0.3) -> CoverInstance:
    k = int(rng.integers(1, max_candidates + 1))
    m = int(rng.integers(0, max_targets + 1))
    candidates = list(range(100, 100 + k))
    targets = list(range(1000, 1000 + m))
    hit = rng.random((k, m)) < density
    # every target needs at least one coverer
    for t in range(m):
        if not hit[:, t].any():
            hit[rng.integers(k), t] = True
    coverage = {c: {targets[t] for t in range(m) if hit[i, t]} for i, c in enumerate(candidates)}
    return CoverInstance.build(0, coverage, targets)


def moore_grid_instance(side: int = 7) -> CoverInstance:
    """Center of a side x side lattice, built from Chebyshev distances only."""
    c = side // 2

    def nid(r, col):
        return r * side + col

    def cheb(a, b):
        return max(abs(a[0] - b[0]), abs(a[1] - b[1]))

    cells = [(r, col) for r in range(side) for col in range(side)]
    ring1 = [p for p in cells if cheb(p, (c, c)) == 1]
    ring2 = [p for p in cells if cheb(p, (c, c)) == 2]
    coverage = {nid(*y): {nid(*z) for z in ring2 if cheb(y, z) == 1} for y in ring1}
    return CoverInstance.build(nid(c, c), coverage, [nid(*z) for z in ring2])
