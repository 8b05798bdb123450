"""Deterministic stateless probe-model graph oracles and their distributed simulation."""
from .coloring import FINAL_PALETTE_CONSTANT, color, palette_bound, reduce_once, three_color_part
from .distsim import dist_mcm, dist_mwm, dist_orientation, dist_run, run, simulate_centlocal
from .errors import (
    BudgetExceededError,
    ConstructionError,
    GraphFormatError,
    InputError,
    NotAugmentingError,
    RadiusViolationError,
    SimulationError,
    VerificationError,
)
from .estimators import (
    ApproxMCM,
    ApproxMWM,
    LocalColoring,
    LocalGreedyColoring,
    LocalMaximalMatching,
    LocalMIS,
    LocalOrientation,
    check_eps,
    check_graph,
    check_queries,
)
from .graph import LabeledGraph, ProbeSession, generate, load_graph, parse_graph, probe, save_graph
from .harness import bench, brute_mcm, brute_mwm, consistency_fuzz
from .mcm import apx_mcm, global_apx_mcm
from .mwm import apx_mwm, global_apx_mwm
from .orientation import orient_edge, verify_bounds
from .seqsim import l_color_delta_plus_1, l_mis, l_mm, simulate

__all__ = [name for name in dir() if not name.startswith("_")]
