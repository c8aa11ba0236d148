import io
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from omprsim import streams
from omprsim.config import SimConfig
from omprsim.geometry import (
    NetworkSnapshot,
    build_neighbor_tables,
    dump_snapshot,
    grid_positions,
    in_range_pairs,
    load_snapshot,
    place_nodes,
    sample_links,
    step_mobility,
)

from conftest import chain_positions


def test_place_single_node_in_bounds():
    pos = place_nodes(SimConfig(node_count=1), streams.stream(1, streams.PLACE))
    assert pos.shape == (1, 2)
    assert 0 <= pos[0, 0] <= 1000 and 0 <= pos[0, 1] <= 1000


def test_place_is_deterministic():
    cfg = SimConfig(node_count=100)
    a = place_nodes(cfg, streams.stream(7, streams.PLACE))
    b = place_nodes(cfg, streams.stream(7, streams.PLACE))
    assert np.array_equal(a, b)


def test_place_large_sample_mean():
    pos = place_nodes(SimConfig(node_count=10_000), streams.stream(0, streams.PLACE))
    # sd of the mean is 1000/sqrt(12 * 1e4) ~ 2.9 m, so +-20 m is ~7 sigma
    assert 480 <= pos[:, 0].mean() <= 520
    assert 480 <= pos[:, 1].mean() <= 520
    assert pos.min() >= 0 and pos.max() <= 1000


def test_zero_speed_leaves_nodes_in_place():
    cfg = SimConfig(speed=0.0)
    pos = place_nodes(cfg, streams.stream(0, streams.PLACE))
    assert np.array_equal(step_mobility(pos, cfg, np.random.default_rng(0)), pos)


def test_step_length_is_u_tau():
    cfg = SimConfig(radius=200, speed=5)
    # far from every wall, no reflection can occur
    pos = np.full((50, 2), 500.0)
    moved = step_mobility(pos, cfg, np.random.default_rng(3))
    assert np.allclose(np.hypot(*(moved - pos).T), 150.0)


class _FixedHeading:
    def __init__(self, angle):
        self.angle = angle

    def uniform(self, low, high, size):
        return np.full(size, self.angle)


def test_reflection_off_left_wall():
    cfg = SimConfig(radius=200, speed=5)
    moved = step_mobility(np.array([[0.5, 500.0]]), cfg, _FixedHeading(math.pi))
    assert moved[0, 0] == pytest.approx(149.5)
    assert moved[0, 1] == pytest.approx(500.0)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), speed=st.floats(0.5, 200))
def test_mobility_stays_inside(seed, speed):
    cfg = SimConfig(node_count=30, speed=speed, radius=900, area_width=300, area_height=700)
    rng = np.random.default_rng(seed)
    pos = place_nodes(cfg, rng)
    for _ in range(5):
        pos = step_mobility(pos, cfg, rng)
        assert (pos[:, 0] >= 0).all() and (pos[:, 0] <= 300).all()
        assert (pos[:, 1] >= 0).all() and (pos[:, 1] <= 700).all()


def test_boundary_distance_is_inclusive():
    snap = sample_links(np.array([[0.0, 0.0], [200.0, 0.0]]), 200.0, 1.0, None)
    assert snap.link_set() == {(0, 1), (1, 0)}


def test_just_out_of_range():
    snap = sample_links(np.array([[0.0, 0.0], [200.0 + 1e-9, 0.0]]), 200.0, 1.0, None)
    assert snap.edge_count == 0


def test_link_fraction_at_half():
    # 101 co-located nodes -> 10,100 in-range ordered pairs
    pos = np.zeros((101, 2))
    snap = sample_links(pos, 1.0, 0.5, np.random.default_rng(11))
    frac = snap.edge_count / (101 * 100)
    assert abs(frac - 0.5) <= 0.02


def _brute_links(positions, radius):
    out = set()
    for i, p in enumerate(positions):
        for j, q in enumerate(positions):
            if i != j and math.dist(p, q) <= radius:
                out.add((i, j))
    return out


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), p_c=st.sampled_from([0.0, 0.3, 0.5, 0.9, 1.0]))
def test_sampled_links_respect_range(seed, p_c):
    cfg = SimConfig(node_count=40)
    pos = place_nodes(cfg, np.random.default_rng(seed))
    snap = sample_links(pos, cfg.radius, p_c, np.random.default_rng(seed + 1))
    links = snap.link_set()
    assert links <= _brute_links(pos, cfg.radius)
    assert all(i != j for i, j in links)
    if p_c == 1.0:
        assert links == _brute_links(pos, cfg.radius)
        assert all((j, i) in links for i, j in links)
    if p_c == 0.0:
        assert not links


def test_sampling_is_repeatable():
    pos = place_nodes(SimConfig(), np.random.default_rng(5))
    a = sample_links(pos, 200, 0.6, streams.stream(9, streams.DISCOVERY, 0))
    b = sample_links(pos, 200, 0.6, streams.stream(9, streams.DISCOVERY, 0))
    assert a.link_set() == b.link_set()


def test_coupled_draws_are_monotone_in_p_c():
    pos = place_nodes(SimConfig(), np.random.default_rng(2))
    grid = [0.0, 0.2, 0.5, 0.7, 0.9, 1.0]
    sets = [sample_links(pos, 200, p, streams.stream(4, streams.DISCOVERY, 3)).link_set() for p in grid]
    for lo, hi in zip(sets, sets[1:]):
        assert lo <= hi


def test_p_c_one_consumes_no_randomness():
    pos = place_nodes(SimConfig(), np.random.default_rng(2))
    rng = np.random.default_rng(0)
    sample_links(pos, 200, 1.0, rng)
    assert rng.random() == np.random.default_rng(0).random()


def test_isolated_node_tables():
    snap = sample_links(np.array([[0.0, 0.0], [500.0, 0.0]]), 10.0, 1.0, None)
    t = build_neighbor_tables(snap)
    assert t.one_hop[0] == frozenset() and t.two_hop[0] == frozenset()


def test_chain_tables():
    t = build_neighbor_tables(sample_links(chain_positions(3), 1.0, 1.0, None))
    assert t.one_hop[0] == {1}
    assert t.two_hop[0] == {2}
    assert t.one_hop[1] == {0, 2}
    assert t.two_hop[1] == frozenset()


def test_grid_center_rings(grid7):
    t = build_neighbor_tables(grid7)
    assert len(t.one_hop[24]) == 8
    assert len(t.two_hop[24]) == 16


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), p_c=st.sampled_from([0.4, 0.7, 1.0]))
def test_neighbor_table_invariants(seed, p_c):
    cfg = SimConfig(node_count=50)
    pos = place_nodes(cfg, np.random.default_rng(seed))
    snap = sample_links(pos, cfg.radius, p_c, np.random.default_rng(seed))
    t = build_neighbor_tables(snap)
    links = snap.link_set()
    for x in range(snap.n):
        assert x not in t.one_hop[x] and x not in t.two_hop[x]
        assert not (t.one_hop[x] & t.two_hop[x])
        for z in t.two_hop[x]:
            assert any((x, y) in links and (y, z) in links for y in t.one_hop[x])


def test_snapshot_dump_round_trip():
    pos = place_nodes(SimConfig(node_count=20), np.random.default_rng(1))
    snap = sample_links(pos, 300, 0.7, np.random.default_rng(2), loop_index=4)
    buf = io.StringIO()
    dump_snapshot(snap, buf)
    buf.seek(0)
    back = load_snapshot(buf)
    assert back.link_set() == snap.link_set()
    assert back.loop_index == 4 and back.p_c_used == pytest.approx(0.7)
    assert np.allclose(back.positions, snap.positions, atol=1e-6)


def test_from_edges_sorts_and_answers_has_link():
    snap = NetworkSnapshot.from_edges(np.zeros((3, 2)), [2, 0, 0], [1, 2, 1])
    assert list(snap.out_neighbors(0)) == [1, 2]
    assert snap.has_link(2, 1) and not snap.has_link(1, 2)


def test_in_range_pairs_row_major():
    rows, cols = in_range_pairs(grid_positions(3), 1.0)
    pairs = list(zip(rows.tolist(), cols.tolist()))
    assert pairs == sorted(pairs)
