"""Annealed two-step Newton-type root finding.

Thin wrapper over the compiled ``_core`` module; see ``help(annealroot)``.
"""

from ._core import (
    AnnealrootError,
    BasinMap,
    annealing_beta,
    cube_root_contraction,
    cube_root_window,
    estimate_order,
    evaluate,
    extended_step,
    iterate,
    list_functions,
    order_from_grid,
    random_kuramoto_system,
    solve_sync,
    sweep,
    table,
)

__all__ = [
    "AnnealrootError",
    "BasinMap",
    "annealing_beta",
    "cube_root_contraction",
    "cube_root_window",
    "estimate_order",
    "evaluate",
    "extended_step",
    "iterate",
    "list_functions",
    "order_from_grid",
    "random_kuramoto_system",
    "solve_sync",
    "sweep",
    "table",
]
