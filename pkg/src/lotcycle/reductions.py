"""TSP to lot-sizing reductions and replayable checks of their cost
correspondences.

A tour visiting the nodes in order ``phi`` becomes a cycle producing the
matching products in the same order.  For the slot variants the average cost
of that cycle is ``h n (n-1) / 2 + B / n`` with B the tour cost; for the
continuous variant the balanced cycle length ``sqrt(2 B / (n-1))`` yields an
average cost of ``sqrt(2 (n-1) B)``.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .errors import InvalidTour, NotMetric, TooManyNodes
from .evaluator import evaluate
from .model import ContinuousSchedule, DiscreteSchedule, FixedSchedule, Instance, Phase, Product, Slot, Variant
from .oracles import held_karp, tour_cost
from .solvers import sqrt_approx


def is_metric(cost):
    n = len(cost)
    return all(
        cost[i][k] <= cost[i][j] + cost[j][k]
        for i in range(n)
        for j in range(n)
        for k in range(n)
    )


@dataclass(frozen=True)
class TspInstance:
    cost: tuple
    metric: bool = field(init=False)

    def __post_init__(self):
        cost = tuple(tuple(int(c) for c in row) for row in self.cost)
        n = len(cost)
        if n < 1 or any(len(row) != n for row in cost):
            raise ValueError("cost matrix must be square and non-empty")
        for i, row in enumerate(cost):
            if row[i] != 0:
                raise ValueError(f"c[{i}][{i}] must be 0")
            if any(c < 0 for c in row):
                raise ValueError("costs must be non-negative")
        object.__setattr__(self, "cost", cost)
        object.__setattr__(self, "metric", is_metric(cost))

    @property
    def n(self):
        return len(self.cost)

    def scaled(self, factor):
        return TspInstance([[c * factor for c in row] for row in self.cost])


def random_metric_tsp(n, rng, grid=20):
    """Rounded Euclidean distances between distinct random grid points.

    Rounding can break the triangle inequality, so draws are repeated until
    the rounded matrix is metric.
    """
    while True:
        pts = rng.sample([(x, y) for x in range(grid) for y in range(grid)], n)
        cost = [[round(math.dist(a, b)) for b in pts] for a in pts]
        if is_metric(cost):
            return TspInstance(cost)


def random_tsp(n, rng, high=20):
    cost = [[0 if i == j else rng.randint(0, high) for j in range(n)] for i in range(n)]
    return TspInstance(cost)


def tsp_to_lsp_discrete(tsp, variant=Variant.DISCRETE):
    variant = Variant(variant)
    if variant is Variant.CONTINUOUS:
        raise ValueError("use tsp_to_lsp_continuous for the continuous variant")
    n = tsp.n
    # one more than the sum over every ordered pair, so any tour is cheaper
    # than a single extra unit of stock
    h = sum(map(sum, tsp.cost)) + 1
    return Instance(variant, tuple(Product(1, n, h) for _ in range(n)), tsp.cost)


def tsp_to_lsp_continuous(tsp):
    if not tsp.metric:
        raise NotMetric("the continuous reduction needs costs satisfying the triangle inequality")
    n = tsp.n
    return Instance(Variant.CONTINUOUS, tuple(Product(1, n, 1) for _ in range(n)), tsp.cost)


def _check_tour(instance, tour):
    order = tuple(getattr(tour, "order", tour))
    if sorted(order) != list(range(instance.n)):
        raise InvalidTour(f"{order} does not visit each of the {instance.n} nodes once")
    return order


def tour_to_schedule_discrete(instance, tour):
    """One slot per product in tour order; the k-th product starts with k units."""
    order = _check_tour(instance, tour)
    n = instance.n
    stock = [0] * n
    for k, j in enumerate(order):
        stock[j] = k
    if instance.variant is Variant.FIXED:
        return FixedSchedule(list(order), stock)
    return DiscreteSchedule([Slot(j, n) for j in order], stock)


def tour_to_schedule_continuous(instance, tour, C):
    """Full-rate runs of length C / n in tour order, minimal start stocks."""
    order = _check_tour(instance, tour)
    n = instance.n
    C = Fraction(C)
    run = C / n
    stock = [Fraction(0)] * n
    for k, j in enumerate(order):
        stock[j] = k * run * instance.products[j].d
    return ContinuousSchedule([Phase(run, j, instance.products[j].p) for j in order], stock)


@dataclass
class VerificationReport:
    variant: str
    n: int
    optimal_tour: tuple
    tour_cost: int
    expected_average: Optional[Fraction] = None
    best_average: Optional[Fraction] = None
    best_tour_cost: Optional[int] = None
    tours_checked: int = 0
    exhaustive: bool = False
    every_tour_matches: bool = True
    # continuous only
    expected_avg_squared: Optional[Fraction] = None
    cycle_length: Optional[Fraction] = None
    avg_squared: Optional[Fraction] = None
    relative_error: Optional[float] = None
    exact_balance: Optional[bool] = None
    holding: Optional[Fraction] = None
    switching: Optional[Fraction] = None
    confirmed: bool = False

    def to_dict(self):
        out = {}
        for k, v in self.__dict__.items():
            if isinstance(v, Fraction):
                v = f"{v.numerator}/{v.denominator}"
            elif isinstance(v, tuple):
                v = list(v)
            out[k] = v
        return out


MAX_VERIFY_NODES = 12
MAX_EXHAUSTIVE_NODES = 9


def _tours(n):
    for rest in itertools.permutations(range(1, n)):
        yield (0,) + rest


def verify_correspondence(tsp, variant, rng=None, samples=2000):
    """Replay the reduction's cost identity through the evaluator."""
    variant = Variant(variant)
    n = tsp.n
    if n > MAX_VERIFY_NODES:
        raise TooManyNodes(f"verification is limited to {MAX_VERIFY_NODES} nodes")
    best = held_karp(tsp)
    rep = VerificationReport(variant.value, n, best.order, best.cost)
    if variant is Variant.CONTINUOUS:
        return _verify_continuous(tsp, rep)

    inst = tsp_to_lsp_discrete(tsp, variant)
    h = inst.products[0].h
    base = Fraction(h * n * (n - 1), 2)
    rep.expected_average = base + Fraction(best.cost, n)
    if n <= MAX_EXHAUSTIVE_NODES:
        tours = _tours(n)
        rep.exhaustive = True
    else:
        rng = rng or random.Random(0)
        tours = itertools.chain([best.order], ([0] + rng.sample(range(1, n), n - 1) for _ in range(samples)))
    for order in tours:
        avg = evaluate(inst, tour_to_schedule_discrete(inst, order)).average_cost
        c = tour_cost(tsp.cost, order)
        rep.tours_checked += 1
        if avg != base + Fraction(c, n):
            rep.every_tour_matches = False
        if rep.best_average is None or avg < rep.best_average:
            rep.best_average, rep.best_tour_cost = avg, c
    rep.confirmed = (
        rep.every_tour_matches
        and rep.best_average == rep.expected_average
        and rep.best_tour_cost == best.cost
    )
    return rep


def _verify_continuous(tsp, rep, tolerance=1e-9):
    inst = tsp_to_lsp_continuous(tsp)
    n, B = tsp.n, rep.tour_cost
    rep.expected_avg_squared = Fraction(2 * (n - 1) * B)
    if n < 2 or B == 0:
        # no switching cost to balance: the average cost tends to 0
        rep.confirmed = rep.expected_avg_squared == 0
        return rep
    target = Fraction(2 * B, n - 1)
    C = sqrt_approx(target)
    rep.cycle_length = C
    report = evaluate(inst, tour_to_schedule_continuous(inst, rep.optimal_tour, C))
    rep.avg_squared = report.average_cost**2
    rep.relative_error = float(abs(rep.avg_squared - rep.expected_avg_squared) / rep.expected_avg_squared)
    rep.holding, rep.switching = report.holding_total, report.switching_total
    rep.exact_balance = C * C == target
    ok = rep.relative_error <= tolerance and report.switching_total == B
    if rep.exact_balance:
        ok = ok and report.holding_total == report.switching_total and rep.avg_squared == rep.expected_avg_squared
    rep.confirmed = ok
    return rep
