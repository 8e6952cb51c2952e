"""Closed-form optimal schedules for one product (all variants) and for two
products in the Continuous variant."""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import NamedTuple

from .errors import DegenerateSwitchingCosts, InfeasibleInstance, MismatchedVariant, UnsupportedCase
from .evaluator import CostReport, evaluate, to_decimal
from .model import (
    ContinuousSchedule,
    DiscreteSchedule,
    FixedSchedule,
    Phase,
    Slot,
    Variant,
    check_feasibility,
)


class Solution(NamedTuple):
    schedule: object
    report: CostReport


def _require(instance, variant, n):
    if instance.variant is not variant:
        raise MismatchedVariant(f"expected a {variant.value} instance, got {instance.variant.value}")
    if instance.n != n:
        raise UnsupportedCase(f"expected {n} product(s), got {instance.n}")
    feasible, load = check_feasibility(instance)
    if not feasible:
        raise InfeasibleInstance(f"load {load} exceeds 1")


def solve_c1(instance):
    """Produce exactly at the demand rate; stock stays at zero."""
    _require(instance, Variant.CONTINUOUS, 1)
    sched = ContinuousSchedule([Phase(1, 0, instance.products[0].d)], [0])
    return Solution(sched, evaluate(instance, sched))


def solve_d1(instance):
    _require(instance, Variant.DISCRETE, 1)
    sched = DiscreteSchedule([Slot(0, instance.products[0].d)], [0])
    return Solution(sched, evaluate(instance, sched))


# -- one product, fixed batches ------------------------------------------------

def f1_cycle_length(p, d):
    return p // math.gcd(p, d)


def f1_unit_cost(p, d, h):
    return Fraction(h * (p - math.gcd(p, d)), 2)


def f1_total_cost(p, d, h, q0=0):
    """Cycle cost of the greedy schedule started from stock ``q0 < p``."""
    G = math.gcd(p, d)
    return Fraction(h * p, 2) * (Fraction(p, G) - 1) + Fraction(h * p, G) * (q0 % G)


def reduce_initial_stock(p, d, q0):
    """Number of leading idle slots and the stock left once it is below p."""
    if q0 < p:
        return 0, q0
    k = (q0 - p) // d + 1
    return k, q0 - k * d


def greedy_f1(p, d, q0=0):
    """Yield the slots of the greedy cycle one at a time.

    A slot produces iff the stock carried into it is below ``d``.  The stock
    walks through q0, q0 - d, ... modulo p, so the cycle closes after exactly
    p / gcd(p, d) slots and every slot is emitted in O(1).
    """
    if not 0 <= q0 < p:
        raise ValueError(f"start stock must lie in [0, {p}), got {q0}")
    q = q0
    while True:
        produce = q < d
        q += (p - d) if produce else -d
        yield produce
        if q == q0:
            return


@dataclass(frozen=True)
class F1Solution:
    cycle_length: int
    unit_cost: Fraction
    total_cost: Fraction
    schedule: FixedSchedule
    gcd: int
    leading_idle: int = 0


def solve_f1(instance, initial_stock=0):
    _require(instance, Variant.FIXED, 1)
    pr = instance.products[0]
    skip, q = reduce_initial_stock(pr.p, pr.d, initial_stock)
    slots = [0 if produce else None for produce in greedy_f1(pr.p, pr.d, q)]
    sched = FixedSchedule(slots, [q])
    rep = evaluate(instance, sched)
    return F1Solution(len(slots), rep.average_cost, rep.total, sched, math.gcd(pr.p, pr.d), skip)


# -- two products, continuous -------------------------------------------------

def c2_coefficients(first, second, s_total):
    """(A, B) of the average cost A t + B / t, t being the first product's run."""
    d1, p1, h1 = first.d, first.p, first.h
    d2, p2, h2 = second.d, second.p, second.h
    A = Fraction(h1 * (p1 - d1), 2) + Fraction(h2 * d1 * d2, 2 * p1) * (1 + Fraction(d2, p2 - d2))
    B = Fraction(s_total * d1, p1)
    return A, B


def sqrt_fraction(x, digits=40):
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        return (Decimal(x.numerator) / Decimal(x.denominator)).sqrt()


def sqrt_approx(x, max_denominator=10**6):
    """A rational close to sqrt(x) with bounded denominator; exact for squares."""
    x = Fraction(x)
    rn, rd = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    scale = 10**30
    approx = Fraction(math.isqrt(x.numerator * scale * scale // x.denominator), scale)
    return approx.limit_denominator(max_denominator)


@dataclass(frozen=True)
class C2Solution:
    instance: object
    first: int
    second: int
    A: Fraction
    B: Fraction
    role_swap: bool

    @property
    def t_star_squared(self):
        return self.B / self.A

    @property
    def avg_cost_squared(self):
        return 4 * self.A * self.B

    @property
    def ratio(self):
        pr = self.instance.products[self.first]
        return Fraction(pr.p, pr.d)

    @property
    def cycle_length_squared(self):
        return self.t_star_squared * self.ratio**2

    @property
    def t_star(self):
        return sqrt_fraction(self.t_star_squared)

    @property
    def cycle_length(self):
        return sqrt_fraction(self.cycle_length_squared)

    @property
    def average_cost(self):
        return sqrt_fraction(self.avg_cost_squared)

    def default_t(self):
        return sqrt_approx(self.t_star_squared)

    def cost_at(self, t):
        t = Fraction(t)
        return self.A * t + self.B / t

    def phase_lengths(self, t):
        """Lengths of the full-rate, demand-rate and full-rate phases for run t."""
        t = Fraction(t)
        a = self.instance.products[self.first]
        b = self.instance.products[self.second]
        C = t * Fraction(a.p, a.d)
        L3 = Fraction(b.d, b.p - b.d) * t
        return t, C - t - L3, L3

    def schedule_at(self, t=None):
        t = self.default_t() if t is None else Fraction(t)
        if t <= 0:
            raise ValueError("t must be positive")
        a, b = self.first, self.second
        pa, pb = self.instance.products[a], self.instance.products[b]
        L1, L2, L3 = self.phase_lengths(t)
        phases = [Phase(L1, a, pa.p)]
        if L2:
            phases.append(Phase(L2, b, pb.d))
        phases.append(Phase(L3, b, pb.p))
        stock = [0, 0]
        stock[b] = pb.d * t
        return ContinuousSchedule(phases, stock)

    def to_dict(self):
        return {
            "A": _fs(self.A),
            "B": _fs(self.B),
            "t_star_squared": _fs(self.t_star_squared),
            "avg_cost_squared": _fs(self.avg_cost_squared),
            "cycle_length_squared": _fs(self.cycle_length_squared),
            "role_swap": self.role_swap,
            "decimals": {
                "t_star": str(_round12(self.t_star)),
                "cycle_length": str(_round12(self.cycle_length)),
                "average_cost": str(_round12(self.average_cost)),
            },
        }


def _fs(x):
    return f"{x.numerator}/{x.denominator}"


def _round12(d):
    with localcontext() as ctx:
        ctx.prec = 12
        return +d


def solve_c2(instance):
    _require(instance, Variant.CONTINUOUS, 2)
    s_total = instance.switch[0][1] + instance.switch[1][0]
    if s_total == 0:
        raise DegenerateSwitchingCosts("with no switching cost the average cost tends to 0 as the cycle shrinks")
    best = None
    for first, second in ((0, 1), (1, 0)):
        A, B = c2_coefficients(instance.products[first], instance.products[second], s_total)
        # strict comparison keeps the original labeling on ties
        if best is None or A * B < best[2] * best[3]:
            best = (first, second, A, B)
    first, second, A, B = best
    return C2Solution(instance, first, second, A, B, role_swap=first != 0)


def solve(instance, **kwargs):
    """Dispatch on (variant, number of products)."""
    key = (instance.variant, instance.n)
    if key == (Variant.CONTINUOUS, 1):
        return solve_c1(instance)
    if key == (Variant.DISCRETE, 1):
        return solve_d1(instance)
    if key == (Variant.FIXED, 1):
        return solve_f1(instance, **kwargs)
    if key == (Variant.CONTINUOUS, 2):
        return solve_c2(instance)
    raise UnsupportedCase(
        f"no optimal algorithm is known for the {instance.variant.value} variant with {instance.n} products"
    )


__all__ = [
    "C2Solution",
    "F1Solution",
    "Solution",
    "c2_coefficients",
    "f1_cycle_length",
    "f1_total_cost",
    "f1_unit_cost",
    "greedy_f1",
    "solve",
    "solve_c1",
    "solve_c2",
    "solve_d1",
    "solve_f1",
    "sqrt_approx",
    "to_decimal",
]
