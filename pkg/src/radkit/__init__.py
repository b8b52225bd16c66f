"""Distribution network reconfiguration: data model, radiality formulations, model emission and native search."""

from .emitter import EmitOptions, read_back_stats, write_lp, write_mps
from .formulation import (
    FormulationKind,
    ModelIR,
    ModelStats,
    add_radiality,
    binary_feasible_set,
    build_core_model,
    directed_arc_map,
    model_stats,
)
from .harness import BenchRow, ManifestEntry, load_system, render_report, run_bench
from .netmodel import Branch, Bus, Network, load_network, parse_network, serialize_network, to_per_unit, validate
from .powerflow import PowerFlowResult, check_limits, evaluate_losses, solve_distflow
from .search import SearchReport, enumerate_radial, local_search_branch_exchange, multistart
from .topology import Configuration, count_spanning_trees, is_radial

__version__ = "0.1.0"

__all__ = [
    "BenchRow",
    "Branch",
    "Bus",
    "Configuration",
    "EmitOptions",
    "FormulationKind",
    "ManifestEntry",
    "ModelIR",
    "ModelStats",
    "Network",
    "PowerFlowResult",
    "SearchReport",
    "add_radiality",
    "binary_feasible_set",
    "build_core_model",
    "check_limits",
    "count_spanning_trees",
    "directed_arc_map",
    "enumerate_radial",
    "evaluate_losses",
    "is_radial",
    "load_network",
    "load_system",
    "local_search_branch_exchange",
    "model_stats",
    "multistart",
    "parse_network",
    "read_back_stats",
    "render_report",
    "run_bench",
    "serialize_network",
    "solve_distflow",
    "to_per_unit",
    "validate",
    "write_lp",
    "write_mps",
]
