"""Triad dynamics on signed graphs, their particle-walk duals, and 3-XOR-SAT."""

from .signed_graph import (EdgeState, GraphError, SignedGraph, count_imbalanced, flip_edge,
                           generate_triadic_cycle, imbalanced_triangles, is_balanced,
                           triangle_sign, triangular_lattice_section, triangulated_torus)
from .hypergraph import Hypergraph, build_triadic_dual, state_to_particles, switch
from .gf2 import Gf2Solution, Gf2System, Gf2Unsat, solve_gf2
from .reach import (classify_recurrent_graphdual, gf2_criterion, is_reachable, is_recurrent,
                    witness_path)
from .dynamics import DynamicsParams, estimate_tau_sb, run_until_recurrent, step
from .walks import run_coupled, step_arw, step_crw, step_switching
from .analysis import cheeger_time_exact, cheeger_time_regular, convergence_bound, edge_connectivity
from .xorsat import XorFormula, random_walk_sat, reduce, time_bound

__version__ = "0.1.0"

__all__ = [
    "EdgeState", "GraphError", "SignedGraph", "count_imbalanced", "flip_edge",
    "generate_triadic_cycle", "imbalanced_triangles", "is_balanced", "triangle_sign",
    "triangular_lattice_section", "triangulated_torus",
    "Hypergraph", "build_triadic_dual", "state_to_particles", "switch",
    "Gf2Solution", "Gf2System", "Gf2Unsat", "solve_gf2",
    "classify_recurrent_graphdual", "gf2_criterion", "is_reachable", "is_recurrent", "witness_path",
    "DynamicsParams", "estimate_tau_sb", "run_until_recurrent", "step",
    "run_coupled", "step_arw", "step_crw", "step_switching",
    "cheeger_time_exact", "cheeger_time_regular", "convergence_bound", "edge_connectivity",
    "XorFormula", "random_walk_sat", "reduce", "time_bound",
]
