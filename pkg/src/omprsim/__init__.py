"""RREQ flooding simulator for noisy MANETs with branching MPR selection."""

__version__ = "0.1.0"

from .config import ConfigError, SimConfig, pause_time
from .flood import FloodOutcome, flood_mpr, flood_probabilistic, flood_pure
from .geometry import (
    NeighborTables,
    NetworkSnapshot,
    NodePosition,
    build_neighbor_tables,
    place_nodes,
    sample_links,
    step_mobility,
)
from .harness import SweepResult, run_experiment, run_loop, run_sweep
from .mpr import (
    CoverInstance,
    RelayAssignment,
    RelaySet,
    assign_relays,
    brute_force_min_cover,
    greedy_mpr,
    mandatory_relays,
    ompr_select,
)

__all__ = [
    "ConfigError", "SimConfig", "pause_time",
    "FloodOutcome", "flood_mpr", "flood_probabilistic", "flood_pure",
    "NeighborTables", "NetworkSnapshot", "NodePosition", "build_neighbor_tables",
    "place_nodes", "sample_links", "step_mobility",
    "SweepResult", "run_experiment", "run_loop", "run_sweep",
    "CoverInstance", "RelayAssignment", "RelaySet", "assign_relays",
    "brute_force_min_cover", "greedy_mpr", "mandatory_relays", "ompr_select",
]
