"""JSON documents for instances, schedules, solutions and TSP inputs.

Rationals are written as ``"num/den"`` strings; integers and such strings are
both accepted on input.
"""
from __future__ import annotations

import json
from fractions import Fraction

from .errors import FormatError
from .model import (
    ContinuousSchedule,
    DiscreteSchedule,
    FixedSchedule,
    Instance,
    Phase,
    Product,
    Slot,
    Variant,
)
from .reductions import TspInstance


def fstr(x):
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_fraction(value, what="value"):
    if isinstance(value, bool):
        raise FormatError(f"{what}: expected a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise FormatError(f"{what}: expected an integer or 'num/den' string, got {value!r}")


def _int(value, what):
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(f"{what}: expected an integer, got {value!r}")
    return value


def read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path} is not valid JSON: {exc}") from exc


def dumps(doc):
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


# -- instances ----------------------------------------------------------------

def instance_to_dict(instance):
    return {
        "variant": instance.variant.value,
        "products": [{"d": p.d, "p": p.p, "h": p.h} for p in instance.products],
        "switch": [list(row) for row in instance.switch],
    }


def instance_from_dict(doc):
    if not isinstance(doc, dict):
        raise FormatError("instance document must be an object")
    try:
        variant = Variant(doc["variant"])
        products = tuple(
            Product(_int(p["d"], "d"), _int(p["p"], "p"), _int(p.get("h", 1), "h"))
            for p in doc["products"]
        )
        switch = doc.get("switch")
        if switch is not None:
            switch = [[_int(s, "switch entry") for s in row] for row in switch]
        return Instance(variant, products, switch)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad instance document: {exc}") from exc


# -- schedules ----------------------------------------------------------------

def schedule_to_dict(schedule, instance=None):
    doc = {"initial_stock": [fstr(q) for q in schedule.initial_stock]}
    if isinstance(schedule, ContinuousSchedule):
        doc["phases"] = [
            {
                "duration": fstr(ph.duration),
                "product": ph.product,
                "rate": None if ph.is_idle else fstr(ph.rate),
            }
            for ph in schedule.phases
        ]
    elif isinstance(schedule, DiscreteSchedule):
        doc["slots"] = [
            {"product": s.product, "amount": None if s.is_idle else fstr(s.amount)}
            for s in schedule.slots
        ]
    else:
        slots = []
        for j in schedule.slots:
            entry = {"product": j}
            if j is not None and instance is not None:
                entry["amount"] = fstr(instance.products[j].p)
            slots.append(entry)
        doc["slots"] = slots
    return doc


def schedule_from_dict(doc, instance):
    """Parse a schedule document for ``instance``.

    For a Fixed instance the result is a FixedSchedule unless some slot
    states an amount other than the full batch or the stock is fractional, in
    which case a DiscreteSchedule comes back so the validator can report it.
    """
    if not isinstance(doc, dict):
        raise FormatError("schedule document must be an object")
    try:
        stock = [parse_fraction(q, "initial_stock") for q in doc["initial_stock"]]
        if "phases" in doc:
            phases = []
            for ph in doc["phases"]:
                j = ph.get("product")
                dur = parse_fraction(ph["duration"], "duration")
                if j is None:
                    phases.append(Phase(dur))
                else:
                    phases.append(Phase(dur, _int(j, "product"), parse_fraction(ph["rate"], "rate")))
            return ContinuousSchedule(phases, stock)
        if "slots" not in doc:
            raise FormatError("schedule needs 'phases' or 'slots'")
        raw = []
        for s in doc["slots"]:
            j = s.get("product") if isinstance(s, dict) else s
            amount = s.get("amount") if isinstance(s, dict) else None
            raw.append((None if j is None else _int(j, "product"),
                        None if amount is None else parse_fraction(amount, "amount")))
        if instance.variant is Variant.FIXED:
            full = all(
                j is None or a is None or (0 <= j < instance.n and a == instance.products[j].p)
                for j, a in raw
            )
            if full and all(q.denominator == 1 for q in stock):
                return FixedSchedule([j for j, _ in raw], [int(q) for q in stock])
            raw = [
                (j, instance.products[j].p if a is None and j is not None and 0 <= j < instance.n else a)
                for j, a in raw
            ]
        return DiscreteSchedule([Slot() if j is None else Slot(j, a) for j, a in raw], stock)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad schedule document: {exc}") from exc


def violation_to_dict(v):
    return {"kind": v.kind, "product": v.product, "time": fstr(v.time), "detail": v.detail}


# -- TSP ----------------------------------------------------------------------

def tsp_from_dict(doc):
    try:
        cost = [[_int(c, "cost") for c in row] for row in doc["cost"]]
        if "n" in doc and doc["n"] != len(cost):
            raise FormatError(f"n={doc['n']} does not match a {len(cost)}x{len(cost)} cost matrix")
        return TspInstance(cost)
    except FormatError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad TSP document: {exc}") from exc


def tsp_to_dict(tsp):
    return {"n": tsp.n, "cost": [list(row) for row in tsp.cost]}
