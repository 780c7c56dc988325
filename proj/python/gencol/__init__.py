"""Genetic column generation for symmetric pairwise-cost transport on grids.

The heavy lifting lives in the compiled extension; this package re-exports
its functions.
"""

from ._core import (
    clique_decision,
    configuration_cost,
    coulomb_cost_matrix,
    ematrix_extremum,
    enumerate_occupancies,
    full_lp_value,
    monge_plan,
    monge_value,
    pair_marginal,
    pricing_decision,
    solve,
    solve_and_write,
    universe_size,
)

__version__ = "0.1.0"

__all__ = [
    "clique_decision",
    "configuration_cost",
    "coulomb_cost_matrix",
    "ematrix_extremum",
    "enumerate_occupancies",
    "full_lp_value",
    "monge_plan",
    "monge_value",
    "pair_marginal",
    "pricing_decision",
    "solve",
    "solve_and_write",
    "universe_size",
]
