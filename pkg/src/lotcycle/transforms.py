"""Schedule rewrites that never raise the average cost.

Each function takes a valid schedule and returns a new valid schedule; the
input is never modified.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import InvalidPeriodIndex, InvalidSchedule, MismatchedVariant, NoIdleTime, UnsupportedShape
from .model import (
    ContinuousSchedule,
    DiscreteSchedule,
    Phase,
    Slot,
    Variant,
    coalesce,
    rotate,
    validate_schedule,
)


def _require_valid(instance, schedule):
    violations = validate_schedule(instance, schedule)
    if violations:
        raise InvalidSchedule(violations)


def production_periods(schedule):
    """Maximal cyclic runs of phases making the same product.

    Returns ``(start, count)`` pairs ordered by start index; a run that wraps
    past the last phase has ``start + count > len(phases)``.
    """
    phases = schedule.phases
    n = len(phases)
    products = [ph.product for ph in phases]
    if all(j == products[0] for j in products):
        return [] if products[0] is None else [(0, n)]
    # begin the scan at a phase whose predecessor makes something else
    origin = next(k for k in range(n) if products[k] != products[k - 1])
    out = []
    k = 0
    while k < n:
        start = (origin + k) % n
        j = products[start]
        count = 1
        while k + count < n and products[(origin + k + count) % n] == j:
            count += 1
        if j is not None:
            out.append((start, count))
        k += count
    return sorted(out)


def _two_phase(product, duration, amount):
    """Demand-rate run then full-rate run with the given length and amount."""
    d, p = product.d, product.p
    if p == d:
        return [(duration, Fraction(d))]
    slow = (p * duration - amount) / (p - d)
    out = []
    if slow > 0:
        out.append((slow, Fraction(d)))
    if duration - slow > 0:
        out.append((duration - slow, Fraction(p)))
    return out


def canonicalize_production_period(instance, schedule, period_index):
    """Rewrite one production period as a demand-rate run followed by a
    full-rate run, keeping its length and output.

    Among stock paths that never fall inside the period, this one is the
    lowest at every instant, so holding cost cannot rise.  Periods containing
    a rate below demand are rejected: improving those needs production moved
    into earlier periods, which this rewrite does not do.
    """
    if instance.variant is not Variant.CONTINUOUS:
        raise MismatchedVariant("canonicalization applies to continuous schedules")
    _require_valid(instance, schedule)
    periods = production_periods(schedule)
    if not 0 <= period_index < len(periods):
        raise InvalidPeriodIndex(f"period {period_index} out of range ({len(periods)} periods)")
    start, count = periods[period_index]
    n = len(schedule.phases)
    if start + count > n:
        schedule = rotate(instance, schedule, start)
        start = 0

    run = schedule.phases[start:start + count]
    j = run[0].product
    pr = instance.products[j]
    if any(ph.rate < pr.d for ph in run):
        raise UnsupportedShape(f"period {period_index} produces below the demand rate of product {j}")
    duration = sum((ph.duration for ph in run), Fraction(0))
    amount = sum((ph.rate * ph.duration for ph in run), Fraction(0))
    new_run = [Phase(L, j, r) for L, r in _two_phase(pr, duration, amount)]
    phases = list(schedule.phases[:start]) + new_run + list(schedule.phases[start + count:])
    return coalesce(instance, phases, schedule.initial_stock)


def canonicalize_all(instance, schedule, max_rounds=None):
    """Canonicalize every eligible period until nothing changes."""
    cap = max_rounds or 10 * len(schedule.phases)
    for _ in range(cap):
        changed = False
        for k in range(len(production_periods(schedule))):
            try:
                out = canonicalize_production_period(instance, schedule, k)
            except UnsupportedShape:
                continue
            if out != schedule:
                schedule, changed = out, True
                break
        if not changed:
            break
    return schedule


def average_to_simple_cycle(instance, schedule):
    """Turn a two-product cycle with two periods per product into a simple
    cycle of half the length.

    Each product's two period lengths are averaged; the halved cycle makes
    half the demand of the original cycle per product, laid out as a
    demand-rate run followed by a full-rate run, starting from zero stock.
    """
    if instance.variant is not Variant.CONTINUOUS or instance.n != 2:
        raise UnsupportedShape("averaging needs a continuous two-product instance")
    _require_valid(instance, schedule)
    if schedule.has_idle:
        raise UnsupportedShape("averaging needs a schedule without idle time")
    periods = production_periods(schedule)
    if len(periods) != 4:
        raise UnsupportedShape(f"expected four production periods, found {len(periods)}")

    phases = schedule.phases
    n = len(phases)
    lengths = []
    for start, count in periods:
        run = [phases[(start + k) % n] for k in range(count)]
        lengths.append((run[0].product, sum((ph.duration for ph in run), Fraction(0))))
    first = lengths[0][0]
    by_product = {first: [], 1 - first: []}
    for j, L in lengths:
        by_product[j].append(L)

    half = schedule.cycle_length / 2
    new_phases = []
    stock = [Fraction(0), Fraction(0)]
    elapsed = Fraction(0)
    for j in (first, 1 - first):
        pr = instance.products[j]
        L = sum(by_product[j]) / 2
        stock[j] = pr.d * elapsed
        new_phases += [Phase(dur, j, r) for dur, r in _two_phase(pr, L, pr.d * half)]
        elapsed += L
    return coalesce(instance, new_phases, stock)


def improve_idle(instance, schedule):
    """Fill one idle stretch by slowing down the production just before it.

    The product made right before the idle stretch is spread evenly over
    both: same output, same stock afterwards, and a stock path that is the
    chord of the old concave one, hence strictly lower in between.
    """
    if instance.variant is Variant.FIXED:
        raise MismatchedVariant("fixed batches cannot be slowed down")
    _require_valid(instance, schedule)
    if not schedule.has_idle:
        raise NoIdleTime("schedule has no idle time")

    if isinstance(schedule, ContinuousSchedule):
        phases = list(schedule.phases)
        n = len(phases)
        k = _pick_idle(instance, [ph.product for ph in phases])
        prev = phases[k - 1]
        span = prev.duration + phases[k].duration
        rate = prev.rate * prev.duration / span
        merged = Phase(span, prev.product, rate)
        if k == 0:
            # the producing phase is the last one; restart the cycle there
            schedule = rotate(instance, schedule, n - 1)
            rest = list(schedule.phases[2:])
            return coalesce(instance, [merged] + rest, schedule.initial_stock)
        phases[k - 1:k + 1] = [merged]
        return coalesce(instance, phases, schedule.initial_stock)

    slots = list(schedule.slots)
    k = _pick_idle(instance, [s.product for s in slots])
    prev = slots[k - 1]
    half = prev.amount / 2
    slots[k - 1] = Slot(prev.product, half)
    slots[k] = Slot(prev.product, half)
    return DiscreteSchedule(slots, _rebased_stock(instance, schedule, slots, k))


def _pick_idle(instance, products):
    """Index of an idle entry whose predecessor produces, preferring h > 0."""
    candidates = [k for k, j in enumerate(products) if j is None and products[k - 1] is not None]
    for k in candidates:
        if instance.products[products[k - 1]].h > 0:
            return k
    return candidates[0]


def _rebased_stock(instance, schedule, slots, k):
    # when the modified pair wraps around (k == 0), the last slot moved into
    # the start stock changes by the amount shifted out of it
    stock = list(schedule.initial_stock)
    if k == 0:
        j = slots[0].product
        stock[j] += slots[-1].amount
        old = schedule.slots[-1].amount
        stock[j] -= old
    return stock


def improve_idle_fixpoint(instance, schedule, max_rounds=None):
    cap = max_rounds or 10 * (len(getattr(schedule, "phases", ())) or len(schedule.slots))
    for _ in range(cap):
        if not schedule.has_idle:
            break
        schedule = improve_idle(instance, schedule)
    return schedule
