import math
import random

import pytest

from fdsearch import ChangeOutcome, DomainStore, FiniteDomain
from fdsearch.domain import Trail


def store_of(*domains):
    return DomainStore([FiniteDomain.from_values(vals) for vals in domains])


class TestFiniteDomain:
    def test_interval_construction(self):
        d = FiniteDomain(2, 6)
        assert (d.min, d.max, d.size) == (2, 6, 5)
        assert d.as_tuple() == (2, 3, 4, 5, 6)

    def test_holey_construction(self):
        d = FiniteDomain.from_values([7, 1, 4, 1])
        assert d.as_tuple() == (1, 4, 7)
        assert 4 in d and 5 not in d and 0 not in d

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            FiniteDomain(3, 2)
        with pytest.raises(ValueError):
            FiniteDomain.from_values([])

    def test_singleton(self):
        d = FiniteDomain(5, 5)
        assert d.is_bound() and d.value() == 5


class TestRemoveValue:
    def test_present_value_shrinks(self):
        s = store_of([1, 2, 3])
        assert s.remove_value(0, 2) is ChangeOutcome.SHRUNK
        assert s.domain(0).as_tuple() == (1, 3)

    def test_absent_value_unchanged(self):
        s = store_of([1, 2, 3])
        assert s.remove_value(0, 7) is ChangeOutcome.UNCHANGED
        assert s.domain(0).as_tuple() == (1, 2, 3)

    def test_wipeout_leaves_store_untouched(self):
        s = store_of([4])
        assert s.remove_value(0, 4) is ChangeOutcome.WOULD_EMPTY
        assert s.domain(0).as_tuple() == (4,)


class TestAssign:
    def test_narrows_to_singleton(self):
        s = store_of([1, 2, 3])
        assert s.assign(0, 2) is ChangeOutcome.SHRUNK
        assert s.domain(0).as_tuple() == (2,)

    def test_idempotent_on_singleton(self):
        s = store_of([2])
        assert s.assign(0, 2) is ChangeOutcome.UNCHANGED

    def test_absent_value_would_empty(self):
        s = store_of([1, 3])
        assert s.assign(0, 2) is ChangeOutcome.WOULD_EMPTY
        assert s.domain(0).as_tuple() == (1, 3)


class TestTighten:
    def test_tighten_min(self):
        s = store_of([1, 2, 5])
        assert s.tighten_min(0, 2) is ChangeOutcome.SHRUNK
        assert s.domain(0).as_tuple() == (2, 5)

    def test_tighten_min_noop(self):
        s = store_of([1, 2, 5])
        assert s.tighten_min(0, 0) is ChangeOutcome.UNCHANGED

    def test_tighten_min_would_empty(self):
        s = store_of([1, 2, 5])
        assert s.tighten_min(0, 6) is ChangeOutcome.WOULD_EMPTY
        assert s.domain(0).as_tuple() == (1, 2, 5)

    def test_tighten_max(self):
        s = store_of([1, 2, 5])
        assert s.tighten_max(0, 4) is ChangeOutcome.SHRUNK
        assert s.domain(0).as_tuple() == (1, 2)
        assert s.tighten_max(0, 9) is ChangeOutcome.UNCHANGED
        assert s.tighten_max(0, 0) is ChangeOutcome.WOULD_EMPTY

    def test_remove_values_bulk(self):
        s = store_of([1, 2, 3, 4])
        assert s.remove_values(0, [2, 4, 9]) is ChangeOutcome.SHRUNK
        assert s.domain(0).as_tuple() == (1, 3)
        assert s.remove_values(0, [1, 3]) is ChangeOutcome.WOULD_EMPTY
        assert s.domain(0).as_tuple() == (1, 3)


class TestSearchSpaceLogSize:
    def test_two_vars_of_four(self):
        s = store_of([1, 2, 3, 4], [0, 1, 2, 3])
        assert s.search_space_log_size() == pytest.approx(math.log(16), abs=1e-12)
        assert s.search_space_log_size() == pytest.approx(2.7726, abs=1e-4)

    def test_all_singletons(self):
        s = store_of([3], [9], [1])
        assert s.search_space_log_size() == 0.0

    def test_large_domain(self):
        s = DomainStore([FiniteDomain(1, 1000)])
        assert s.search_space_log_size() == pytest.approx(math.log(1000), abs=1e-12)
        assert s.search_space_log_size() == pytest.approx(6.9078, abs=1e-4)

    def test_decreases_on_shrink(self):
        s = store_of([1, 2, 3, 4], [0, 1, 2, 3])
        before = s.search_space_log_size()
        s.remove_value(0, 2)
        assert s.search_space_log_size() < before


class TestTrailRoundTrip:
    def test_push_restore_cycle(self):
        s = store_of([1, 2, 3], [4, 5, 6])
        snap0 = [d.mask for d in s.domains]
        k = s.push_level()
        s.assign(0, 2)
        s.remove_value(1, 5)
        assert [d.mask for d in s.domains] != snap0
        s.restore_to(k)
        assert [d.mask for d in s.domains] == snap0
        assert s.level == k - 1

    def test_restore_validation(self):
        s = store_of([1, 2])
        with pytest.raises(ValueError):
            s.restore_to(1)  # nothing pushed
        s.push_level()
        with pytest.raises(ValueError):
            s.restore_to(2)
        with pytest.raises(ValueError):
            s.restore_to(0)

    def test_root_changes_are_permanent(self):
        s = store_of([1, 2, 3])
        s.remove_value(0, 1)
        k = s.push_level()
        s.assign(0, 3)
        s.restore_to(k)
        assert s.domain(0).as_tuple() == (2, 3)

    def test_random_sequences_restore_exactly(self):
        rng = random.Random(20240817)
        for _ in range(200):
            nvars = rng.randint(1, 5)
            s = store_of(
                *[
                    sorted(rng.sample(range(-4, 9), rng.randint(1, 6)))
                    for _ in range(nvars)
                ]
            )
            snapshots = {}  # level -> masks at the moment push returned it
            for _ in range(rng.randint(1, 60)):
                action = rng.random()
                if action < 0.25:
                    level = s.push_level()
                    snapshots[level] = [d.mask for d in s.domains]
                elif action < 0.35 and snapshots:
                    k = rng.choice(sorted(snapshots))
                    s.restore_to(k)
                    assert [d.mask for d in s.domains] == snapshots[k]
                    assert s.level == k - 1
                    for lvl in list(snapshots):
                        if lvl >= k:
                            del snapshots[lvl]
                else:
                    x = rng.randrange(nvars)
                    d = s.domain(x)
                    size_before = d.size
                    op = rng.choice(["remove", "assign", "tmin", "tmax"])
                    v = rng.randint(d.min - 1, d.max + 1)
                    if op == "remove":
                        s.remove_value(x, v)
                    elif op == "assign":
                        s.assign(x, v)
                    elif op == "tmin":
                        s.tighten_min(x, v)
                    else:
                        s.tighten_max(x, v)
                    # monotone within a level: never grows
                    assert s.domain(x).size <= size_before
                    assert s.domain(x).size >= 1
            # unwind everything that is still pending
            if snapshots:
                k = min(snapshots)
                s.restore_to(k)
                assert [d.mask for d in s.domains] == snapshots[k]


class TestTrailInternals:
    def test_one_snapshot_per_var_per_level(self):
        t = Trail(2)
        t.push()
        t.record(0, 0b111)
        t.record(0, 0b011)  # second change at same level: no new entry
        t.record(1, 0b101)
        assert t.entries == [(0, 0b111), (1, 0b101)]

    def test_reverse_replay_restores_oldest(self):
        s = store_of([1, 2, 3, 4])
        k = s.push_level()
        s.remove_value(0, 1)
        s.push_level()
        s.remove_value(0, 2)
        s.restore_to(k)
        assert s.domain(0).as_tuple() == (1, 2, 3, 4)
