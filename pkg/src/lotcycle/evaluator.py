"""Stock trajectories and exact cost reports."""
from __future__ import annotations

import csv
from dataclasses import dataclass
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction

from .errors import InvalidSchedule
from .model import ContinuousSchedule, boundary_levels, production_sequence, validate_schedule


def to_decimal(x, digits=12):
    """Render a Fraction with ``digits`` significant digits, round-half-even."""
    x = Fraction(x)
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = ROUND_HALF_EVEN
        return Decimal(x.numerator) / Decimal(x.denominator)


def fraction_str(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class StockTrajectory:
    """Stock levels at breakpoints.

    ``times`` is shared by all products.  For continuous schedules stock is
    linear between consecutive breakpoints; for slot schedules ``levels[i][t]``
    is the stock at the end of slot t (index 0 is the initial stock).
    """

    times: tuple
    levels: tuple
    continuous: bool

    def points(self, i):
        return list(zip(self.times, self.levels[i]))

    def end_of_slot(self, i):
        return list(self.levels[i][1:])

    def write_csv(self, path_or_file, digits=12):
        own = isinstance(path_or_file, (str, bytes)) or hasattr(path_or_file, "__fspath__")
        fh = open(path_or_file, "w", newline="") if own else path_or_file
        try:
            w = csv.writer(fh)
            w.writerow(["t", "product", "stock"])
            for i, row in enumerate(self.levels):
                for t, q in zip(self.times, row):
                    w.writerow([str(to_decimal(t, digits)), i, str(to_decimal(q, digits))])
        finally:
            if own:
                fh.close()


@dataclass(frozen=True)
class CostReport:
    cycle_length: Fraction
    holding_total: Fraction
    switching_total: Fraction
    average_cost: Fraction
    per_product_holding: tuple

    @property
    def total(self):
        return self.holding_total + self.switching_total

    def to_dict(self):
        exact = {
            "cycle_length": self.cycle_length,
            "holding_total": self.holding_total,
            "switching_total": self.switching_total,
            "average_cost": self.average_cost,
        }
        doc = {k: fraction_str(v) for k, v in exact.items()}
        doc["per_product_holding"] = [fraction_str(v) for v in self.per_product_holding]
        doc["decimal"] = {k: str(to_decimal(v)) for k, v in exact.items()}
        return doc


def _require_valid(instance, schedule):
    violations = validate_schedule(instance, schedule)
    if violations:
        raise InvalidSchedule(violations)


def stock_trajectory(instance, schedule):
    _require_valid(instance, schedule)
    times, levels = boundary_levels(instance, schedule)
    return StockTrajectory(
        tuple(times),
        tuple(tuple(row) for row in levels),
        isinstance(schedule, ContinuousSchedule),
    )


def switching_cost(instance, schedule):
    seq = production_sequence(schedule)
    if len(seq) < 2:
        return Fraction(0)
    s = instance.switch
    return Fraction(sum(s[a][b] for a, b in zip(seq, seq[1:] + seq[:1])))


def holding_costs(instance, schedule):
    """Per-product holding cost of one cycle (no validity check)."""
    times, levels = boundary_levels(instance, schedule)
    out = []
    for pr, row in zip(instance.products, levels):
        if isinstance(schedule, ContinuousSchedule):
            area = sum(
                ((a + b) / 2 * (t1 - t0) for a, b, t0, t1 in zip(row, row[1:], times, times[1:])),
                Fraction(0),
            )
        else:
            # charged on the stock left at the end of each slot
            area = Fraction(sum(row[1:]))
        out.append(pr.h * area)
    return out


def evaluate(instance, schedule):
    _require_valid(instance, schedule)
    per = holding_costs(instance, schedule)
    H = sum(per, Fraction(0))
    W = switching_cost(instance, schedule)
    C = schedule.cycle_length
    return CostReport(C, H, W, (H + W) / C, tuple(per))
