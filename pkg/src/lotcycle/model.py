"""Instances, cyclic schedules, the load criterion and schedule validation.

All stock and time quantities are ``fractions.Fraction``; inputs (rates,
holding and switching costs) are integers.  Product indices are 0-based.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Union

from .errors import InfeasibleInstance, IndexOutOfRange, MismatchedVariant


class Variant(str, enum.Enum):
    CONTINUOUS = "continuous"
    DISCRETE = "discrete"
    FIXED = "fixed"


def _positive_int(value, name, allow_zero=False):
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < 0 or (value == 0 and not allow_zero):
        raise ValueError(f"{name} must be {'non-negative' if allow_zero else 'positive'}, got {value}")
    return value


@dataclass(frozen=True)
class Product:
    d: int
    p: int
    h: int = 1

    def __post_init__(self):
        _positive_int(self.d, "demand rate d")
        _positive_int(self.p, "production rate p")
        # h = 0 is accepted so that cost-free instances can be modelled
        _positive_int(self.h, "holding cost h", allow_zero=True)


@dataclass(frozen=True)
class Instance:
    variant: Variant
    products: tuple
    switch: tuple = None

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        products = tuple(p if isinstance(p, Product) else Product(*p) for p in self.products)
        if not products:
            raise ValueError("an instance needs at least one product")
        object.__setattr__(self, "products", products)
        n = len(products)
        switch = self.switch
        if switch is None:
            switch = [[0] * n for _ in range(n)]
        switch = tuple(tuple(row) for row in switch)
        if len(switch) != n or any(len(row) != n for row in switch):
            raise ValueError(f"switching-cost matrix must be {n}x{n}")
        for i, row in enumerate(switch):
            for j, s in enumerate(row):
                _positive_int(s, f"s[{i}][{j}]", allow_zero=True)
            if row[i] != 0:
                raise ValueError(f"s[{i}][{i}] must be 0")
        object.__setattr__(self, "switch", switch)

    @property
    def n(self):
        return len(self.products)

    @property
    def load(self):
        return sum((Fraction(pr.d, pr.p) for pr in self.products), Fraction(0))

    def with_variant(self, variant):
        return Instance(variant, self.products, self.switch)


@dataclass(frozen=True)
class Phase:
    """A stretch of ``duration`` time units, idle when ``product`` is None."""

    duration: Fraction
    product: Optional[int] = None
    rate: Optional[Fraction] = None

    def __post_init__(self):
        object.__setattr__(self, "duration", Fraction(self.duration))
        if self.duration <= 0:
            raise ValueError(f"phase duration must be positive, got {self.duration}")
        if self.product is None:
            if self.rate not in (None, 0):
                raise ValueError("an idle phase has no rate")
            object.__setattr__(self, "rate", None)
        else:
            if self.rate is None:
                raise ValueError("a producing phase needs a rate")
            object.__setattr__(self, "rate", Fraction(self.rate))
            if self.rate <= 0:
                raise ValueError(f"production rate must be positive, got {self.rate}")

    @property
    def is_idle(self):
        return self.product is None

    @property
    def activity(self):
        return (self.product, self.rate)


@dataclass(frozen=True)
class Slot:
    """One time unit of a discrete schedule; idle when ``product`` is None."""

    product: Optional[int] = None
    amount: Optional[Fraction] = None

    def __post_init__(self):
        if self.product is None:
            if self.amount not in (None, 0):
                raise ValueError("an idle slot produces nothing")
            object.__setattr__(self, "amount", None)
        else:
            if self.amount is None:
                raise ValueError("a producing slot needs an amount")
            object.__setattr__(self, "amount", Fraction(self.amount))
            if self.amount <= 0:
                raise ValueError(f"slot amount must be positive, got {self.amount}")

    @property
    def is_idle(self):
        return self.product is None


def _stock_vector(values, integral=False):
    out = []
    for v in values:
        v = int(v) if integral and Fraction(v).denominator == 1 else Fraction(v)
        if integral and not isinstance(v, int):
            raise ValueError(f"initial stock of a fixed schedule must be integral, got {v}")
        out.append(v)
    return tuple(out)


@dataclass(frozen=True)
class ContinuousSchedule:
    phases: tuple
    initial_stock: tuple

    def __post_init__(self):
        phases = tuple(self.phases)
        if not phases:
            raise ValueError("a schedule needs at least one phase")
        object.__setattr__(self, "phases", phases)
        object.__setattr__(self, "initial_stock", _stock_vector(self.initial_stock))
        if len(phases) > 1:
            for k, ph in enumerate(phases):
                nxt = phases[(k + 1) % len(phases)]
                if ph.activity == nxt.activity:
                    raise ValueError(
                        f"phases {k} and {(k + 1) % len(phases)} repeat the same activity; merge them"
                    )

    @property
    def cycle_length(self):
        return sum((ph.duration for ph in self.phases), Fraction(0))

    @property
    def has_idle(self):
        return any(ph.is_idle for ph in self.phases)

    def boundaries(self):
        """Phase start times followed by the cycle length."""
        t = Fraction(0)
        out = [t]
        for ph in self.phases:
            t += ph.duration
            out.append(t)
        return out


@dataclass(frozen=True)
class DiscreteSchedule:
    slots: tuple
    initial_stock: tuple

    def __post_init__(self):
        slots = tuple(s if isinstance(s, Slot) else Slot(*s) for s in self.slots)
        if not slots:
            raise ValueError("a schedule needs at least one slot")
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "initial_stock", _stock_vector(self.initial_stock))

    @property
    def cycle_length(self):
        return Fraction(len(self.slots))

    @property
    def has_idle(self):
        return any(s.is_idle for s in self.slots)


@dataclass(frozen=True)
class FixedSchedule:
    """Slots hold a product index or None; a producing slot makes exactly p_j."""

    slots: tuple
    initial_stock: tuple

    def __post_init__(self):
        slots = tuple(self.slots)
        if not slots:
            raise ValueError("a schedule needs at least one slot")
        for s in slots:
            if s is not None and (isinstance(s, bool) or not isinstance(s, int)):
                raise TypeError(f"fixed slots hold a product index or None, got {s!r}")
        object.__setattr__(self, "slots", slots)
        object.__setattr__(self, "initial_stock", _stock_vector(self.initial_stock, integral=True))

    @property
    def cycle_length(self):
        return Fraction(len(self.slots))

    @property
    def has_idle(self):
        return any(s is None for s in self.slots)

    def as_discrete(self, instance):
        slots = [Slot() if j is None else Slot(j, instance.products[j].p) for j in self.slots]
        return DiscreteSchedule(slots, self.initial_stock)


CyclicSchedule = Union[ContinuousSchedule, DiscreteSchedule, FixedSchedule]


@dataclass(frozen=True)
class Violation:
    kind: str
    product: Optional[int]
    time: Fraction
    detail: str = field(default="", compare=False)

    def __str__(self):
        who = "" if self.product is None else f" product {self.product}"
        return f"{self.kind}({who.strip() or '-'}, t={self.time}){': ' + self.detail if self.detail else ''}"


def check_feasibility(instance):
    """Return ``(load <= 1, load)`` with the load computed exactly."""
    load = instance.load
    return load <= 1, load


def construct_feasible(instance):
    """Build a cycle of length prod(p_i) in which every product gets one block.

    Product i is made at full rate in ``[t_{i-1}, t_i]`` with
    ``t_i = t_{i-1} + C d_i / p_i``; its initial stock is the demand that
    accrues before its block starts, and the remainder of the cycle is idle.
    """
    feasible, load = check_feasibility(instance)
    if not feasible:
        raise InfeasibleInstance(f"load {load} exceeds 1")
    C = math.prod(pr.p for pr in instance.products)
    lengths = [C * pr.d // pr.p for pr in instance.products]
    starts = [sum(lengths[:i]) for i in range(instance.n)]
    stock = [pr.d * s for pr, s in zip(instance.products, starts)]
    idle = C - sum(lengths)

    if instance.variant is Variant.CONTINUOUS:
        phases = [Phase(L, i, instance.products[i].p) for i, L in enumerate(lengths)]
        if idle:
            phases.append(Phase(idle))
        return ContinuousSchedule(phases, stock)

    order = [i for i, L in enumerate(lengths) for _ in range(L)] + [None] * idle
    if instance.variant is Variant.FIXED:
        return FixedSchedule(order, stock)
    slots = [Slot() if j is None else Slot(j, instance.products[j].p) for j in order]
    return DiscreteSchedule(slots, stock)


def _check_shape(instance, schedule):
    v = instance.variant
    ok = (
        (v is Variant.CONTINUOUS and isinstance(schedule, ContinuousSchedule))
        or (v is Variant.DISCRETE and isinstance(schedule, DiscreteSchedule))
        # a slot schedule with explicit amounts may be checked against a Fixed
        # instance; partial batches are then reported as violations
        or (v is Variant.FIXED and isinstance(schedule, (FixedSchedule, DiscreteSchedule)))
    )
    if not ok:
        raise MismatchedVariant(f"{type(schedule).__name__} does not fit a {v.value} instance")
    if len(schedule.initial_stock) != instance.n:
        raise IndexOutOfRange(
            f"initial stock has {len(schedule.initial_stock)} entries for {instance.n} products"
        )
    if isinstance(schedule, ContinuousSchedule):
        used = [ph.product for ph in schedule.phases]
    elif isinstance(schedule, DiscreteSchedule):
        used = [s.product for s in schedule.slots]
    else:
        used = list(schedule.slots)
    for j in used:
        if j is not None and not 0 <= j < instance.n:
            raise IndexOutOfRange(f"product index {j} out of range for {instance.n} products")


def slot_amounts(instance, schedule):
    """Per-slot (product, amount) pairs of a Discrete or Fixed schedule."""
    if isinstance(schedule, FixedSchedule):
        batch = [Fraction(pr.p) for pr in instance.products]
        return [(j, None if j is None else batch[j]) for j in schedule.slots]
    return [(s.product, s.amount) for s in schedule.slots]


def boundary_levels(instance, schedule):
    """Stock of every product at each boundary, without any validity checks.

    Returns ``(times, levels)`` where ``levels[i][k]`` is the stock of product
    i at ``times[k]``.  Continuous schedules report phase boundaries, slot
    schedules report t = 0, 1, ..., C.
    """
    n = instance.n
    q = [Fraction(x) for x in schedule.initial_stock]
    levels = [[x] for x in q]
    if isinstance(schedule, ContinuousSchedule):
        times = schedule.boundaries()
        for ph in schedule.phases:
            for i in range(n):
                q[i] -= instance.products[i].d * ph.duration
            if not ph.is_idle:
                q[ph.product] += ph.rate * ph.duration
            for i in range(n):
                levels[i].append(q[i])
    else:
        # slot schedules: integer arithmetic over a common denominator, which
        # is much faster than Fraction arithmetic on long cycles
        pairs = slot_amounts(instance, schedule)
        times = [Fraction(t) for t in range(len(pairs) + 1)]
        D = math.lcm(*(x.denominator for x in q), *(a.denominator for _, a in pairs if a is not None))
        qi = [x.numerator * (D // x.denominator) for x in q]
        dem = [pr.d * D for pr in instance.products]
        add = [None if a is None else a.numerator * (D // a.denominator) for _, a in pairs]
        rows = [[x] for x in qi]
        for (j, _), a in zip(pairs, add):
            for i in range(n):
                qi[i] -= dem[i]
            if j is not None:
                qi[j] += a
            for i in range(n):
                rows[i].append(qi[i])
        if D == 1:
            levels = rows
        else:
            levels = [[Fraction(v, D) for v in row] for row in rows]
    return times, levels


def validate_schedule(instance, schedule):
    """Collect every constraint violation of ``schedule``; empty means valid."""
    _check_shape(instance, schedule)
    out = []

    if isinstance(schedule, ContinuousSchedule):
        t = Fraction(0)
        for ph in schedule.phases:
            if not ph.is_idle and ph.rate > instance.products[ph.product].p:
                out.append(Violation("RateExceeded", ph.product, t,
                                     f"rate {ph.rate} > p={instance.products[ph.product].p}"))
            t += ph.duration
    else:
        fixed = instance.variant is Variant.FIXED
        for t, (j, amount) in enumerate(slot_amounts(instance, schedule), start=1):
            if j is None:
                continue
            p = instance.products[j].p
            if amount > p:
                out.append(Violation("AmountExceeded", j, Fraction(t), f"amount {amount} > p={p}"))
            elif fixed and amount != p:
                out.append(Violation("PartialBatch", j, Fraction(t), f"amount {amount} != p={p}"))

    times, levels = boundary_levels(instance, schedule)
    for i, row in enumerate(levels):
        for t, q in zip(times, row):
            if q < 0:
                out.append(Violation("NegativeStock", i, t, f"stock {q}"))
                break
        if row[-1] != row[0]:
            out.append(Violation("NotCyclic", i, times[-1], f"ends at {row[-1]}, starts at {row[0]}"))
    return out


def is_valid(instance, schedule):
    return not validate_schedule(instance, schedule)


def coalesce(instance, phases, initial_stock):
    """Build a ContinuousSchedule after merging repeated adjacent activities.

    When the first and last phase share an activity the cycle is restarted at
    the last phase so that the merged phase comes first.
    """
    merged = []
    for ph in phases:
        if merged and merged[-1].activity == ph.activity:
            prev = merged.pop()
            ph = Phase(prev.duration + ph.duration, ph.product, ph.rate)
        merged.append(ph)
    stock = [Fraction(x) for x in initial_stock]
    if len(merged) > 1 and merged[0].activity == merged[-1].activity:
        last = merged.pop()
        for i, pr in enumerate(instance.products):
            stock[i] += pr.d * last.duration
        if not last.is_idle:
            stock[last.product] -= last.rate * last.duration
        merged[0] = Phase(last.duration + merged[0].duration, last.product, last.rate)
    return ContinuousSchedule(merged, stock)


def rotate(instance, schedule, k):
    """Restart the cycle at phase/slot ``k``, carrying stocks along."""
    _, levels = boundary_levels(instance, schedule)
    stock = [row[k] for row in levels]
    if isinstance(schedule, ContinuousSchedule):
        ph = schedule.phases
        return ContinuousSchedule(ph[k:] + ph[:k], stock)
    sl = schedule.slots
    if isinstance(schedule, FixedSchedule):
        return FixedSchedule(sl[k:] + sl[:k], [int(x) for x in stock])
    return DiscreteSchedule(sl[k:] + sl[:k], stock)


def repeat(schedule, k):
    """The same cycle run ``k`` times back to back."""
    if isinstance(schedule, ContinuousSchedule):
        if len(schedule.phases) == 1:
            ph = schedule.phases[0]
            return ContinuousSchedule([Phase(ph.duration * k, ph.product, ph.rate)], schedule.initial_stock)
        return ContinuousSchedule(schedule.phases * k, schedule.initial_stock)
    return type(schedule)(schedule.slots * k, schedule.initial_stock)


def production_sequence(schedule):
    """Products in the order they are made, idle removed, runs collapsed, cyclic."""
    if isinstance(schedule, ContinuousSchedule):
        raw = [ph.product for ph in schedule.phases]
    elif isinstance(schedule, DiscreteSchedule):
        raw = [s.product for s in schedule.slots]
    else:
        raw = list(schedule.slots)
    seq = []
    for j in raw:
        if j is not None and (not seq or seq[-1] != j):
            seq.append(j)
    while len(seq) > 1 and seq[0] == seq[-1]:
        seq.pop()
    return seq


def make_instance(variant, products: Sequence, switch=None):
    """Convenience constructor accepting ``(d, p, h)`` tuples."""
    return Instance(Variant(variant), tuple(Product(*p) if not isinstance(p, Product) else p for p in products), switch)
