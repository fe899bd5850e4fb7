"""Exact belief-lattice solver for selective-labels accept/reject decisions."""

from ._core import (
    BeliefState,
    ValueGrid,
    avg_solve,
    check,
    expectimax,
    groups,
    lemma1_check,
    simulate,
    solve,
    terminal_value,
    transitions,
)

__all__ = [
    "BeliefState",
    "ValueGrid",
    "avg_solve",
    "check",
    "expectimax",
    "groups",
    "lemma1_check",
    "simulate",
    "solve",
    "terminal_value",
    "transitions",
]
