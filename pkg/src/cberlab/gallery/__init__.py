"""Explicit counterexample structures: the dyadic order, random pair colourings
and adversaries against finite-radius rules."""

from .adversary import (
    DEFEATED, NAIVE_RULES, NO_DEFEAT_FOUND, AdversaryResult, DefeatWitness, adversary,
    all_red_ball_rule, coordinate_order_rule, fixed_pattern_rule, load_rule, replay,
)
from .dyadic import (
    DomainError, DyadicPoint, Order, conjugation_check, dyadic_successor, f0_equivalent,
    flip_head, l_compare, order_check, successor_check,
)
from .ramsey import (
    PairColouring, SizeError, expected_max_homogeneous, max_homogeneous,
    max_homogeneous_bruteforce, sample_max_homogeneous, sample_pair_colouring,
)

__all__ = [
    "AdversaryResult", "DEFEATED", "DefeatWitness", "DomainError", "DyadicPoint", "NAIVE_RULES",
    "NO_DEFEAT_FOUND", "Order", "PairColouring", "SizeError", "adversary", "all_red_ball_rule",
    "conjugation_check", "coordinate_order_rule", "dyadic_successor", "expected_max_homogeneous",
    "f0_equivalent", "fixed_pattern_rule", "flip_head", "l_compare", "load_rule",
    "max_homogeneous", "max_homogeneous_bruteforce", "order_check", "replay",
    "sample_max_homogeneous", "sample_pair_colouring", "successor_check",
]
