"""Deterministic, window-sound expansion algorithms."""

from .bijection import BijectionTrace, TruncationError, bijection_pattern, greedy_bijection
from .colouring import ColouringState, colouring_pattern, equivariant_colouring
from .forest import ForestResult, spanning_forest, spanning_forest_arrays
from .linear import (InconsistentPieceError, MergeResult, NotATreeError, merge_linearizations,
                     tree_distance, tree_linearization, tree_potential)
from .zline import NOT_IN_X, Block, BlockKind, OrderSpec, zline_select

__all__ = [
    "BijectionTrace", "TruncationError", "bijection_pattern", "greedy_bijection",
    "ColouringState", "colouring_pattern", "equivariant_colouring",
    "ForestResult", "spanning_forest", "spanning_forest_arrays",
    "InconsistentPieceError", "MergeResult", "NotATreeError", "merge_linearizations",
    "tree_distance", "tree_linearization", "tree_potential",
    "NOT_IN_X", "Block", "BlockKind", "OrderSpec", "zline_select",
]
