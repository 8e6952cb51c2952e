"""Slow, independent reference computations used to check the solvers."""
from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

import numpy as np

from .errors import SearchSpaceTooLarge, TooManyNodes
from .model import FixedSchedule

DEFAULT_BUDGET = 2**27


def search_budget(default=DEFAULT_BUDGET):
    env = os.environ.get("LOTCYCLE_BUDGET")
    return int(env) if env else default


@dataclass(frozen=True)
class BruteForceResult:
    best_average_cost: Fraction
    best_length: int
    best_schedule: FixedSchedule
    search_space_size: int


def _bit_matrix(L):
    # row v is the slot vector whose binary expansion (first slot = MSB) is v,
    # so row order is lexicographic order
    v = np.arange(1 << L, dtype=np.int64)[:, None]
    shifts = np.arange(L - 1, -1, -1, dtype=np.int64)[None, :]
    return (v >> shifts) & 1


def brute_force_f1(p, d, h, max_length, budget=None):
    """Exhaustive search over fixed-batch cycles of one product.

    Every cycle length L <= max_length, every produce/idle vector of length L
    and every integer start stock in [0, p) is tried.  Ties on average cost
    go to the shorter cycle, then to the lexicographically smaller
    (vector, start stock).
    """
    if not 1 <= d <= p:
        raise ValueError("need 1 <= d <= p")
    if max_length < p // math.gcd(p, d):
        raise ValueError("max_length is below the minimum cycle length")
    budget = search_budget() if budget is None else budget
    size = (2**max_length) * max_length * p
    if size > budget:
        raise SearchSpaceTooLarge(f"{size} candidate evaluations exceed the budget {budget}")

    best = None
    for L in range(1, max_length + 1):
        X = _bit_matrix(L)
        # stock at the end of slot t, before adding the start stock
        drift = np.cumsum(X * p - d, axis=1)
        cyclic = drift[:, -1] == 0
        if not cyclic.any():
            continue
        drift = drift[cyclic]
        rows = np.nonzero(cyclic)[0]
        q0 = np.arange(p, dtype=np.int64)
        lowest = drift.min(axis=1)
        ok = lowest[:, None] + q0[None, :] >= 0
        ok &= q0[None, :] >= 0
        totals = h * (drift.sum(axis=1)[:, None] + L * q0[None, :])
        totals = np.where(ok, totals, np.iinfo(np.int64).max)
        flat = int(np.argmin(totals))  # first minimum in (vector, q0) row-major order
        r, c = divmod(flat, p)
        if totals[r, c] == np.iinfo(np.int64).max:
            continue
        cost = Fraction(int(totals[r, c]), L)
        if best is None or cost < best[0]:
            slots = [0 if b else None for b in X[rows[r]]]
            best = (cost, L, FixedSchedule(slots, [int(q0[c])]))
    return BruteForceResult(best[0], best[1], best[2], size)


def ternary_search_c2(A, B, tolerance=Decimal("1e-12"), digits=60):
    """Minimise A t + B / t numerically on t > 0.

    The bracket (0, hi] is grown by doubling until the cost rises again; the
    search then shrinks it by thirds until its width is below ``tolerance``
    relative to its lower end.
    """
    with localcontext() as ctx:
        ctx.prec = digits
        a = Decimal(Fraction(A).numerator) / Decimal(Fraction(A).denominator)
        b = Decimal(Fraction(B).numerator) / Decimal(Fraction(B).denominator)
        tol = Decimal(str(tolerance))

        def f(t):
            return a * t + b / t

        hi = Decimal(1)
        while f(2 * hi) <= f(hi):
            hi *= 2
        hi *= 2
        lo = Decimal(0)
        for _ in range(100000):
            if lo > 0 and hi - lo <= tol * lo:
                break
            m1 = lo + (hi - lo) / 3
            m2 = hi - (hi - lo) / 3
            if f(m1) < f(m2):
                hi = m2
            else:
                lo = m1
        return (lo + hi) / 2


@dataclass(frozen=True)
class Tour:
    order: tuple
    cost: int

    def __post_init__(self):
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError(f"{self.order} is not a permutation")


def tour_cost(cost, order):
    n = len(order)
    if n < 2:
        return 0
    return sum(cost[order[k]][order[(k + 1) % n]] for k in range(n))


MAX_HELD_KARP = 16


def held_karp(tsp):
    """Minimum-cost Hamiltonian cycle by dynamic programming over subsets.

    ``tsp`` is a TspInstance or a square cost matrix; costs may be asymmetric.
    The returned tour starts at node 0.
    """
    cost = getattr(tsp, "cost", tsp)
    n = len(cost)
    if n > MAX_HELD_KARP:
        raise TooManyNodes(f"{n} nodes exceed the Held-Karp limit of {MAX_HELD_KARP}")
    if n == 1:
        return Tour((0,), 0)

    # best[(mask, j)]: cheapest path from 0 through the nodes in mask ending at j
    # (mask over nodes 1..n-1, bit j-1)
    best = {}
    for j in range(1, n):
        best[(1 << (j - 1), j)] = (cost[0][j], 0)
    for size in range(2, n):
        for subset in itertools.combinations(range(1, n), size):
            mask = 0
            for j in subset:
                mask |= 1 << (j - 1)
            for j in subset:
                prev = mask & ~(1 << (j - 1))
                best[(mask, j)] = min((best[(prev, k)][0] + cost[k][j], k) for k in subset if k != j)

    full = (1 << (n - 1)) - 1
    total, last = min((best[(full, j)][0] + cost[j][0], j) for j in range(1, n))
    order = []
    mask, j = full, last
    while j != 0:
        order.append(j)
        _, k = best[(mask, j)]
        mask &= ~(1 << (j - 1))
        j = k
    order.append(0)
    return Tour(tuple(reversed(order)), total)


def brute_force_tsp(cost):
    """Cheapest tour by trying every permutation that starts at node 0."""
    n = len(cost)
    if n == 1:
        return Tour((0,), 0)
    best = None
    for rest in itertools.permutations(range(1, n)):
        order = (0,) + rest
        c = tour_cost(cost, order)
        if best is None or c < best.cost:
            best = Tour(order, c)
    return best
