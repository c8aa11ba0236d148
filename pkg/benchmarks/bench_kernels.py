"""Compare the compiled and pure-Python flood kernels.

    python benchmarks/bench_kernels.py [--floods N] [--loops N]

Part 1 times the bare kernel on default-scenario snapshots; part 2 times a whole
sweep cell with each kernel swapped in, and checks the rows agree.
"""

import argparse
import time

import numpy as np

from omprsim import _flood_py, _kernels, streams
from omprsim.config import SimConfig
from omprsim.flood import relay_edges
from omprsim.geometry import build_neighbor_tables, place_nodes, sample_links
from omprsim.harness import run_sweep
from omprsim.mpr import assign_relays

try:
    from omprsim import _flood_core
except ImportError:
    _flood_core = None


def bench_kernel(kernel, cases, floods):
    t0 = time.perf_counter()
    done = 0
    while done < floods:
        for snap, edge_ok, node_ok in cases:
            kernel(snap.indptr, snap.indices, edge_ok, node_ok, done % snap.n, 1)
            done += 1
    return (time.perf_counter() - t0) / done


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--floods", type=int, default=20_000)
    ap.add_argument("--loops", type=int, default=10)
    args = ap.parse_args()

    kernels = {"python": _flood_py.flood}
    if _flood_core is not None:
        kernels["cython"] = _flood_core.flood
    else:
        print("compiled kernel not built; timing the fallback only")

    cases = []
    for seed in range(10):
        pos = place_nodes(SimConfig(), streams.stream(seed, streams.PLACE))
        snap = sample_links(pos, 200.0, 0.8, streams.stream(seed, streams.DISCOVERY, 0))
        edge_ok = relay_edges(snap, assign_relays(build_neighbor_tables(snap)))
        cases.append((snap, edge_ok, np.ones(snap.n, np.uint8)))

    print(f"bare kernel, {args.floods} floods on 100-node snapshots (p_c=0.8, relay masks):")
    per = {}
    for name, k in kernels.items():
        per[name] = bench_kernel(k, cases, args.floods)
        print(f"  {name:<7} {per[name] * 1e6:9.1f} us/flood")
    if len(per) == 2:
        print(f"  speedup {per['python'] / per['cython']:.1f}x")

    cfg = SimConfig(loops=args.loops)
    grid = [0.5, 0.6, 0.7, 0.8, 0.9, 1.0]
    print(f"\nsweep: pure + prob + ompr, 6 p_c values, {args.loops} loops:")
    rows = {}
    original = _kernels.flood
    try:
        for name, k in kernels.items():
            _kernels.flood = k
            t0 = time.perf_counter()
            rows[name] = run_sweep(cfg, grid, ["pure", "prob", "ompr"]).rows
            print(f"  {name:<7} {time.perf_counter() - t0:7.2f} s")
    finally:
        _kernels.flood = original
    if len(rows) == 2:
        print(f"  identical rows: {rows['python'] == rows['cython']}")


if __name__ == "__main__":
    main()
