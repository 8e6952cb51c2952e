"""Random instance and schedule generators shared by the test modules."""
import math
import random
from fractions import Fraction

from lotcycle.model import (
    ContinuousSchedule,
    DiscreteSchedule,
    FixedSchedule,
    Instance,
    Phase,
    Product,
    Slot,
    Variant,
    boundary_levels,
    coalesce,
)
from lotcycle.transforms import _two_phase, production_periods


def random_instance(rng, variant, n, max_value=8, feasible=True, switch_max=9):
    while True:
        products = []
        for _ in range(n):
            p = rng.randint(1, max_value)
            products.append(Product(rng.randint(1, p), p, rng.randint(1, max_value)))
        load = sum(Fraction(pr.d, pr.p) for pr in products)
        if not feasible or load <= 1:
            break
    switch = [[0 if i == j else rng.randint(0, switch_max) for j in range(n)] for i in range(n)]
    return Instance(Variant(variant), tuple(products), switch)


def random_fraction(rng, lo, hi, den=12):
    """Uniform-ish rational in [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    return lo + (hi - lo) * Fraction(rng.randint(0, den), den)


def min_stock(instance, schedule_cls, body, extra=None, rng=None):
    """Attach the smallest non-negative start stock that keeps stock >= 0."""
    zero = [0] * instance.n
    probe = schedule_cls(body, zero)
    _, levels = boundary_levels(instance, probe)
    stock = [-min(row) for row in levels]
    if rng is not None and extra:
        stock = [q + rng.randint(0, extra) for q in stock]
    if schedule_cls is FixedSchedule:
        stock = [int(q) for q in stock]
    return schedule_cls(body, stock)


def _split_amount(rng, total, parts, cap):
    """Split ``total`` into ``parts`` positive pieces, each at most ``cap``."""
    pieces = [total / parts] * parts
    for _ in range(2 * parts):
        u, v = rng.randrange(parts), rng.randrange(parts)
        if u == v:
            continue
        room = min(pieces[u] * Fraction(9, 10), cap - pieces[v])
        if room <= 0:
            continue
        delta = room * Fraction(rng.randint(0, 8), 8)
        pieces[u] -= delta
        pieces[v] += delta
    return pieces


def _period_phases(rng, product, j, duration, amount, min_rate):
    """One or two phases of product j covering ``duration`` with output ``amount``."""
    p = product.p
    if rng.random() < 0.4:
        return [Phase(duration, j, amount / duration)]
    cut = duration * Fraction(rng.randint(1, 7), 8)
    d1, d2 = cut, duration - cut
    lo_r1 = max(min_rate, (amount - p * d2) / d1)
    hi_r1 = min(Fraction(p), (amount - min_rate * d2) / d1)
    r1 = random_fraction(rng, lo_r1, hi_r1, 6)
    r2 = (amount - r1 * d1) / d2
    if r1 <= 0 or r2 <= 0:
        return [Phase(duration, j, amount / duration)]
    return [Phase(d1, j, r1), Phase(d2, j, r2)]


def random_continuous_schedule(rng, instance, max_periods=2, idle=True, rates="any", extra_stock=0):
    """A valid continuous cycle with up to ``max_periods`` runs per product.

    ``rates`` is "any" (rates in (0, p]), "demand" (rates in [d, p]) or
    "extreme" (only d and p).
    """
    C = Fraction(rng.randint(1, 6), rng.choice([1, 2, 3]))
    slack = C * (1 - instance.load)
    runs = []
    for j, pr in enumerate(instance.products):
        k = rng.randint(1, max_periods)
        for amount in _split_amount(rng, pr.d * C, k, Fraction(10**9)):
            runs.append([j, amount, amount / pr.p])
    # hand out the slack as extra run length or idle time; runs whose rates
    # must stay at or above demand can only absorb amount/d - amount/p
    capped = rates in ("demand", "extreme")

    def room(run):
        j, amount, duration = run
        if not capped:
            return None
        return amount / instance.products[j].d - duration

    idle_pieces = []
    remaining = slack
    for run in runs:
        if remaining <= 0:
            break
        give = remaining * Fraction(rng.randint(0, 4), 8)
        if capped:
            give = min(give, room(run))
        run[2] += give
        remaining -= give
    if remaining > 0:
        if idle:
            idle_pieces = [remaining]
        else:
            for run in runs:
                give = remaining if not capped else min(remaining, room(run))
                run[2] += give
                remaining -= give
            assert remaining == 0
    items = [("run", r) for r in runs] + [("idle", L) for L in idle_pieces]
    rng.shuffle(items)
    phases = []
    for kind, val in items:
        if kind == "idle":
            phases.append(Phase(val))
            continue
        j, amount, duration = val
        pr = instance.products[j]
        if rates == "extreme":
            chunk = [Phase(L, j, r) for L, r in _two_phase(pr, duration, amount)]
            if rng.random() < 0.5:
                chunk.reverse()
            phases += chunk
        else:
            min_rate = Fraction(pr.d) if rates == "demand" else Fraction(0)
            if rates == "demand" and amount < pr.d * duration:
                # cannot keep every rate at or above demand; shorten the run
                spare = duration - amount / pr.d
                duration -= spare
                phases.append(Phase(spare))
            phases += _period_phases(rng, pr, j, duration, amount, min_rate)
    sched = coalesce(instance, phases, [0] * instance.n)
    return min_stock(instance, ContinuousSchedule, sched.phases, extra_stock, rng)


def _slot_cycle(rng, instance, reps):
    lcm = math.lcm(*(pr.p for pr in instance.products))
    return lcm * reps


def random_discrete_schedule(rng, instance, reps=1, extra_stock=0, idle=True):
    C = _slot_cycle(rng, instance, reps)
    counts = [C * pr.d // pr.p for pr in instance.products]
    spare = C - sum(counts)
    # idle-free schedules hand every spare slot to some product
    handed = spare if not idle else rng.randint(0, spare)
    for _ in range(handed):
        counts[rng.randrange(instance.n)] += 1
    slots = []
    for j, (pr, k) in enumerate(zip(instance.products, counts)):
        for a in _split_amount(rng, Fraction(pr.d * C), k, Fraction(pr.p)):
            slots.append(Slot(j, a))
    slots += [Slot()] * (C - len(slots))
    rng.shuffle(slots)
    return min_stock(instance, DiscreteSchedule, slots, extra_stock, rng)


def random_fixed_schedule(rng, instance, reps=1, extra_stock=0):
    C = _slot_cycle(rng, instance, reps)
    slots = []
    for j, pr in enumerate(instance.products):
        slots += [j] * (C * pr.d // pr.p)
    slots += [None] * (C - len(slots))
    rng.shuffle(slots)
    return min_stock(instance, FixedSchedule, slots, extra_stock, rng)


def random_valid_schedule(rng, instance, **kw):
    if instance.variant is Variant.CONTINUOUS:
        return random_continuous_schedule(rng, instance, **kw)
    if instance.variant is Variant.DISCRETE:
        return random_discrete_schedule(rng, instance, **kw)
    return random_fixed_schedule(rng, instance, **kw)


def rng_for(seed):
    return random.Random(seed)


def random_four_period_cycle(rng, instance, rates="any"):
    """Two-product continuous cycle alternating 0, 1, 0, 1 with no idle time."""
    assert instance.n == 2
    while True:
        s = random_continuous_schedule(rng, instance, max_periods=2, idle=False, rates=rates)
        if len(production_periods(s)) == 4:
            return s
