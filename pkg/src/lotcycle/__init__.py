"""Cyclic single-machine lot sizing with sequence-dependent switching costs."""
from .errors import *  # noqa: F401,F403
from .evaluator import CostReport, StockTrajectory, evaluate, stock_trajectory
from .model import (
    ContinuousSchedule,
    DiscreteSchedule,
    FixedSchedule,
    Instance,
    Phase,
    Product,
    Slot,
    Variant,
    Violation,
    check_feasibility,
    construct_feasible,
    make_instance,
    validate_schedule,
)
from .oracles import brute_force_f1, held_karp, ternary_search_c2
from .reductions import (
    TspInstance,
    tour_to_schedule_continuous,
    tour_to_schedule_discrete,
    tsp_to_lsp_continuous,
    tsp_to_lsp_discrete,
    verify_correspondence,
)
from .solvers import solve, solve_c1, solve_c2, solve_d1, solve_f1
from .transforms import average_to_simple_cycle, canonicalize_production_period, improve_idle

__version__ = "0.1.0"
