"""Exact allocation for two-valued and three-valued instances."""

import doctest
import random

import pytest

import mmsalloc.ternary as ternary_mod
from helpers import ternary_suite

from mmsalloc import (
    Allocation,
    InputError,
    Instance,
    bundle_value,
    exact_mms_012,
    lift_allocation,
    mms_exact,
    profile_rows,
    sort_reduce,
)


def test_module_doctests():
    assert doctest.testmod(ternary_mod).failed == 0


class TestProfileRows:
    def test_both_mixed_rows(self):
        profile = profile_rows([2, 2, 2, 1, 1, 0], 2)
        assert profile.row_types == ("2", "2/1", "1/0")
        assert profile.row_21 == 1 and profile.row_10 == 2
        assert profile.classified

    def test_clean_boundaries_are_unclassified(self):
        profile = profile_rows([2, 2, 1, 1, 0, 0], 2)
        assert profile.row_types == ("2", "1", "0")
        assert profile.row_21 is None and profile.row_10 is None
        assert not profile.classified

    def test_shared_mixed_row_is_unclassified(self):
        # 2s and 1s both end inside row 0, so it holds all three values
        # and the agent cannot be classified.
        profile = profile_rows([2, 1, 0, 0, 0, 0], 3)
        assert profile.row_types == ("2/1/0", "0")
        assert not profile.classified

    def test_single_mixed_row_is_unclassified(self):
        # Only the upper boundary is mixed; the 1/0 split is clean.
        profile = profile_rows([2, 1, 0, 0], 2)
        assert profile.row_types == ("2/1", "0")
        assert profile.row_21 is None and profile.row_10 is None
        assert not profile.classified

    def test_rejects_unsorted_row(self):
        with pytest.raises(InputError):
            profile_rows([1, 2], 2)

    def test_rejects_bad_values(self):
        with pytest.raises(InputError):
            profile_rows([3, 1], 2)


class TestSortReduce:
    def test_sorts_rows_with_stable_ties(self):
        inst = Instance.from_rows([[0, 2, 1], [1, 1, 2]])
        reduced, sigmas = sort_reduce(inst)
        assert reduced.row(0) == (2, 1, 0)
        assert reduced.row(1) == (2, 1, 1)
        assert sigmas[0] == (1, 2, 0)
        assert sigmas[1] == (2, 0, 1)

    def test_lift_round_trip_preserves_value(self):
        rng = random.Random(314)
        for _ in range(50):
            n = rng.randint(1, 4)
            m = rng.randint(n, 12)
            rows = [[rng.randint(0, 2) for _ in range(m)] for _ in range(n)]
            inst = Instance.from_rows(rows)
            reduced, sigmas = sort_reduce(inst)
            sorted_alloc = exact_mms_012(reduced)
            lifted = lift_allocation(inst, sorted_alloc, sigmas)
            lifted.require_partition(m)
            for i in inst.agents:
                before = bundle_value(reduced, i, sorted_alloc.bundles[i])
                after = bundle_value(inst, i, lifted.bundles[i])
                assert after >= before

    def test_lift_validates_inputs(self):
        inst = Instance.from_rows([[2, 1], [1, 2]])
        alloc = Allocation.of([[0], [1]])
        with pytest.raises(InputError):
            lift_allocation(inst, alloc, ((0, 1),))  # one permutation missing
        with pytest.raises(InputError):
            lift_allocation(inst, alloc, ((0, 0), (0, 1)))  # not a permutation


class TestExactTernary:
    def test_reaches_share_on_random_suite(self):
        for inst in ternary_suite(count=80, seed=271828):
            alloc = exact_mms_012(inst)
            alloc.require_partition(inst.m)
            for i in inst.agents:
                share = mms_exact(inst.row(i), inst.n).value
                assert bundle_value(inst, i, alloc.bundles[i]) >= share

    def test_binary_values_also_exact(self):
        rng = random.Random(1618)
        for _ in range(60):
            n = rng.randint(1, 5)
            m = rng.randint(1, 14)
            rows = [[rng.randint(0, 1) for _ in range(m)] for _ in range(n)]
            inst = Instance.from_rows(rows)
            alloc = exact_mms_012(inst)
            for i in inst.agents:
                share = mms_exact(inst.row(i), n).value
                assert bundle_value(inst, i, alloc.bundles[i]) >= share

    def test_identical_rows_split_evenly(self):
        inst = Instance.from_rows([[2, 2, 1, 1]] * 2)
        alloc = exact_mms_012(inst)
        values = sorted(bundle_value(inst, i, alloc.bundles[i]) for i in inst.agents)
        assert values == [3, 3]

    def test_no_goods(self):
        inst = Instance.from_rows([[], []])
        trace = []
        alloc = exact_mms_012(inst, trace=trace)
        assert all(not b for b in alloc)
        assert len(trace) == 1

    def test_fewer_goods_than_agents(self):
        inst = Instance.from_rows([[2], [1], [1]])
        alloc = exact_mms_012(inst)
        alloc.require_partition(1)

    def test_rejects_values_above_two(self):
        with pytest.raises(InputError):
            exact_mms_012(Instance.from_rows([[3, 1]]))

    def test_trace_structure(self):
        inst = Instance.from_rows([[1, 2, 0, 2, 1, 1], [2, 2, 1, 0, 1, 2]])
        trace = []
        exact_mms_012(inst, trace=trace)
        step = trace[0]
        assert step["rows"] == 3
        assert step["dummies"] == 0
        assert len(step["seats"]) == 2
        assert sorted(step["seats"]) == [0, 1]

    def test_presorted_rows_skip_the_lift(self):
        inst = Instance.from_rows([[2, 2, 1, 0], [2, 1, 1, 1]])
        trace = []
        alloc = exact_mms_012(inst, trace=trace)
        assert trace[0]["sorted_applied"] is False
        alloc.require_partition(4)

    def test_deterministic(self):
        for inst in ternary_suite(count=20, seed=57721):
            assert exact_mms_012(inst) == exact_mms_012(inst)
