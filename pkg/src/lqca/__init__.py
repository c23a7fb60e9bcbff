"""Unitarity verification for linear quantum cellular automata."""

from .affine import ClosureVerdict, DynamicBasis, decide_closed, lift
from .automaton import (Automaton, Configuration, Neighborhood, ValidationReport,
                        Violation, expand_to_simple, local_amplitude, mirror,
                        normalize_neighborhood, validate)
from .border import (BorderGraph, BorderVectors, WeightMatrix, border_vectors,
                     build_left_border_graph, build_right_border_graph,
                     kleene_all_pairs, kleene_closure)
from .evolution import (DEFAULT_ORACLE_LIMIT, GramReport, OracleScaleError, Superposition,
                        step, transition_amplitude, truncated_column_gram,
                        truncated_row_norm)
from .numerics import (DEFAULT_TOLERANCE, INF, ExtReal, Tolerance, ext_add, ext_mul,
                       ext_star)
from .transfer import TransferOperator, apply_word, build_transfer_operators, row_norm_squared

__version__ = "0.1.0"

__all__ = [
    "Automaton", "BorderGraph", "BorderVectors", "ClosureVerdict", "Configuration",
    "DEFAULT_ORACLE_LIMIT", "DEFAULT_TOLERANCE", "DynamicBasis", "ExtReal", "GramReport",
    "INF", "Neighborhood", "OracleScaleError", "Superposition", "Tolerance",
    "TransferOperator", "ValidationReport", "Violation", "WeightMatrix", "apply_word",
    "border_vectors", "build_left_border_graph", "build_right_border_graph",
    "build_transfer_operators", "decide_closed", "expand_to_simple", "ext_add", "ext_mul",
    "ext_star", "kleene_all_pairs", "kleene_closure", "lift", "local_amplitude", "mirror",
    "normalize_neighborhood", "row_norm_squared", "step", "transition_amplitude",
    "truncated_column_gram", "truncated_row_norm", "validate",
]
