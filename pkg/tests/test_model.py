import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_instance, random_valid_schedule, rng_for
from lotcycle.errors import IndexOutOfRange, InfeasibleInstance, MismatchedVariant
from lotcycle.model import (
    ContinuousSchedule,
    DiscreteSchedule,
    FixedSchedule,
    Instance,
    Phase,
    Product,
    Slot,
    Variant,
    check_feasibility,
    coalesce,
    construct_feasible,
    make_instance,
    production_sequence,
    rotate,
    validate_schedule,
)


def kinds(violations):
    return [(v.kind, v.product, v.time) for v in violations]


class TestInstance:
    def test_switch_defaults_to_zero(self):
        inst = make_instance("fixed", [(1, 2, 1), (1, 3, 1)])
        assert inst.switch == ((0, 0), (0, 0))

    @pytest.mark.parametrize("bad", [(0, 2, 1), (1, 0, 1), (1, 2, -1)])
    def test_rejects_non_positive_rates(self, bad):
        with pytest.raises(ValueError):
            Product(*bad)

    def test_rejects_float_rate(self):
        with pytest.raises(TypeError):
            Product(1.5, 2, 1)

    def test_rejects_nonzero_diagonal(self):
        with pytest.raises(ValueError):
            make_instance("discrete", [(1, 2), (1, 2)], [[1, 0], [0, 0]])

    def test_rejects_wrong_shape(self):
        with pytest.raises(ValueError):
            make_instance("discrete", [(1, 2), (1, 2)], [[0, 1]])


class TestFeasibility:
    @pytest.mark.parametrize(
        "products, expected",
        [
            ([(1, 2), (1, 2)], (True, Fraction(1))),
            ([(2, 3), (2, 3)], (False, Fraction(4, 3))),
            ([(1, 6), (2, 6), (3, 12)], (True, Fraction(3, 4))),
        ],
    )
    def test_examples(self, products, expected):
        assert check_feasibility(make_instance("continuous", products)) == expected

    @given(st.lists(st.tuples(st.integers(1, 10**6), st.integers(1, 10**6)), min_size=1, max_size=6))
    def test_exact_not_float(self, pairs):
        products = [(min(d, p), max(d, p)) for d, p in pairs]
        ok, load = check_feasibility(make_instance("discrete", products))
        assert load == sum(Fraction(d, p) for d, p in products)
        assert ok == (load <= 1)

    def test_float_would_disagree(self):
        # 1/3 + 1/3 + 1/3 is exactly 1; the float sum of these terms is not
        products = [(1, 3)] * 3 + [(1, 10**17)]
        ok, load = check_feasibility(make_instance("discrete", products))
        assert not ok
        assert load > 1


class TestConstructFeasible:
    def test_continuous_example(self):
        inst = make_instance("continuous", [(1, 2), (1, 2)])
        s = construct_feasible(inst)
        assert s.cycle_length == 4
        assert s.phases == (Phase(2, 0, 2), Phase(2, 1, 2))
        assert s.initial_stock == (0, 2)
        assert validate_schedule(inst, s) == []

    def test_fixed_tight_single(self):
        inst = make_instance("fixed", [(1, 1)])
        s = construct_feasible(inst)
        assert s == FixedSchedule([0], [0])

    def test_discrete_three_products(self):
        inst = make_instance("discrete", [(1, 6), (2, 6), (3, 12)])
        s = construct_feasible(inst)
        assert len(s.slots) == 432
        runs = [(k, len(list(g))) for k, g in itertools.groupby(x.product for x in s.slots)]
        assert runs == [(0, 72), (1, 144), (2, 108), (None, 108)]
        assert validate_schedule(inst, s) == []

    def test_infeasible(self):
        with pytest.raises(InfeasibleInstance):
            construct_feasible(make_instance("fixed", [(2, 3), (2, 3)]))

    def test_block_boundaries_integral(self):
        inst = make_instance("fixed", [(1, 4), (1, 6), (1, 5)])
        s = construct_feasible(inst)
        assert all(isinstance(q, int) for q in s.initial_stock)
        assert validate_schedule(inst, s) == []


class TestValidate:
    F1 = make_instance("fixed", [(4, 6, 1)])

    def test_greedy_ok(self):
        assert validate_schedule(self.F1, FixedSchedule([0, 0, None], [0])) == []

    def test_backlog(self):
        out = validate_schedule(self.F1, FixedSchedule([None, 0, 0], [0]))
        assert kinds(out) == [("NegativeStock", 0, 1)]

    def test_rate_exceeded(self):
        inst = make_instance("continuous", [(1, 2, 2), (1, 2, 2)], [[0, 1], [1, 0]])
        s = ContinuousSchedule([Phase(1, 0, 3), Phase(Fraction(3, 2), 1, 2)], [0, Fraction(3, 2)])
        out = validate_schedule(inst, s)
        assert ("RateExceeded", 0, 0) in kinds(out)

    def test_amount_exceeded(self):
        inst = make_instance("discrete", [(1, 2)])
        out = validate_schedule(inst, DiscreteSchedule([Slot(0, 3), Slot()], [0]))
        assert ("AmountExceeded", 0, 1) in kinds(out)

    def test_partial_batch_on_fixed(self):
        out = validate_schedule(self.F1, DiscreteSchedule([Slot(0, 4)], [0]))
        assert kinds(out) == [("PartialBatch", 0, 1)]

    def test_not_cyclic(self):
        inst = make_instance("discrete", [(1, 2)])
        out = validate_schedule(inst, DiscreteSchedule([Slot(0, 2)], [0]))
        assert kinds(out) == [("NotCyclic", 0, 1)]

    def test_continuous_negative_inside(self):
        inst = make_instance("continuous", [(1, 2), (1, 2)])
        s = ContinuousSchedule([Phase(2, 0, 2), Phase(2, 1, 2)], [0, 1])
        out = validate_schedule(inst, s)
        assert kinds(out) == [("NegativeStock", 1, 2)]

    def test_mismatched_variant(self):
        with pytest.raises(MismatchedVariant):
            validate_schedule(self.F1, ContinuousSchedule([Phase(1, 0, 4)], [0]))
        with pytest.raises(MismatchedVariant):
            validate_schedule(self.F1.with_variant("discrete"), FixedSchedule([0], [0]))

    def test_index_out_of_range(self):
        with pytest.raises(IndexOutOfRange):
            validate_schedule(self.F1, FixedSchedule([1], [0]))
        with pytest.raises(IndexOutOfRange):
            validate_schedule(self.F1, FixedSchedule([0], [0, 0]))


class TestScheduleTypes:
    def test_adjacent_repeat_rejected(self):
        with pytest.raises(ValueError):
            ContinuousSchedule([Phase(1, 0, 2), Phase(1, 0, 2)], [0])
        with pytest.raises(ValueError):
            ContinuousSchedule([Phase(1), Phase(1, 0, 2), Phase(1)], [0])

    def test_rate_change_allowed(self):
        ContinuousSchedule([Phase(1, 0, 1), Phase(1, 0, 2)], [0])

    def test_idle_slot_has_no_amount(self):
        with pytest.raises(ValueError):
            Slot(None, 2)

    def test_coalesce_wraps(self):
        inst = make_instance("continuous", [(1, 2), (1, 4)])
        phases = [Phase(1, 0, 2), Phase(1, 1, 2), Phase(1, 0, 2)]
        s = coalesce(inst, phases, [1, 2])
        assert s.phases == (Phase(2, 0, 2), Phase(1, 1, 2))
        # starting one phase earlier: product 0 has 1 - (2-1)*1 = 0
        assert s.initial_stock == (0, 3)

    def test_production_sequence(self):
        s = FixedSchedule([0, 0, None, 1, None, 0], [0, 0])
        assert production_sequence(s) == [0, 1]


def test_rotation_preserves_validity():
    for seed in range(200):
        rng = rng_for(seed)
        v = list(Variant)[seed % 3]
        inst = random_instance(rng, v, rng.randint(1, 3), max_value=6)
        s = random_valid_schedule(rng, inst)
        k = rng.randrange(len(getattr(s, "phases", None) or s.slots))
        assert validate_schedule(inst, rotate(inst, s, k)) == []


def test_rotation_preserves_invalidity():
    inst = make_instance("fixed", [(4, 6, 1)])
    bad = FixedSchedule([None, 0, 0], [0])
    for k in range(3):
        assert validate_schedule(inst, rotate(inst, bad, k)) != []


def test_instance_immutable():
    inst = make_instance("fixed", [(1, 2)])
    with pytest.raises(AttributeError):
        inst.variant = Variant.DISCRETE
    assert isinstance(inst, Instance)
