"""Agent-based simulation of scientific inquiry over abstract argumentation
landscapes."""

from .agent import Agent, BehaviorConfig
from .engine import RunResult, Simulation, SimulationConfig, run_simulation, score_success
from .experiment import CellSummary, SweepSpec, compare_cells, export_results, full_grid, run_sweep
from .knowledge import SubjectiveKnowledge, merge, subjective_defensibility, visible_edges
from .landscape import Arg, Landscape, LandscapeConfig, full_defensibility, generate_landscape, is_defended
from .social import SharingConfig, build_networks

__version__ = "0.1.0"

__all__ = [
    "Agent", "Arg", "BehaviorConfig", "CellSummary", "Landscape", "LandscapeConfig",
    "RunResult", "SharingConfig", "Simulation", "SimulationConfig", "SubjectiveKnowledge",
    "SweepSpec", "build_networks", "compare_cells", "export_results", "full_defensibility",
    "generate_landscape", "is_defended", "merge", "full_grid", "run_simulation", "run_sweep",
    "score_success", "subjective_defensibility", "visible_edges",
]
