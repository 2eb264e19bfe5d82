"""Frequent-itemset mining: exact examples, oracle equivalence, invariants."""

import io
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import exhaustive_frequent, make_record
from crimeminer.apriori import (
    FrequentPattern,
    mine_frequent,
    mine_hotspot_patterns,
    record_transaction,
    run_summary_dict,
    support,
    write_patterns_csv,
)
from crimeminer.errors import EmptyTransactionListError

ABC = [frozenset("abc"), frozenset("ab"), frozenset("ac"), frozenset("bc"), frozenset("abc")]


class TestSupport:
    def test_singleton(self):
        transactions = [frozenset("a"), frozenset("b"), frozenset("ab"), frozenset("c")]
        assert support({"a"}, transactions) == (0.5, 2)

    def test_triple_over_five_transactions(self):
        # brute count: {a,b,c} is contained in the two "abc" transactions only
        assert support({"a", "b", "c"}, ABC) == (0.4, 2)

    def test_full_transaction_identity(self):
        assert support({"x", "y"}, [frozenset("xy")]) == (1.0, 1)

    def test_empty_itemset_rejected(self):
        with pytest.raises(ValueError):
            support(set(), ABC)

    def test_empty_transactions_rejected(self):
        with pytest.raises(EmptyTransactionListError):
            support({"a"}, [])


class TestMineFrequent:
    def test_textbook_example(self):
        run = mine_frequent(ABC, 0.6)
        by_level = {
            size: {tuple(sorted(s)): stat for s, stat in level.items()}
            for size, level in run.itemsets.items()
        }
        assert by_level[1] == {
            ("a",): by_level[1][("a",)],
            ("b",): by_level[1][("b",)],
            ("c",): by_level[1][("c",)],
        }
        assert all(stat.support == 0.8 for stat in run.itemsets[1].values())
        assert {tuple(sorted(s)) for s in run.itemsets[2]} == {("a", "b"), ("a", "c"), ("b", "c")}
        assert all(stat.support == 0.6 for stat in run.itemsets[2].values())
        assert run.itemsets.get(3, {}) == {}

    def test_min_sup_one_over_identical_transactions(self):
        run = mine_frequent([frozenset("ab"), frozenset("ab")], 1.0)
        assert run.frequent_sets() == {frozenset("a"), frozenset("b"), frozenset("ab")}
        assert all(
            stat.support == 1.0 for level in run.itemsets.values() for stat in level.values()
        )

    def test_threshold_above_everything_gives_zero_levels(self):
        run = mine_frequent([frozenset("a"), frozenset("b")], 0.9)
        assert run.frequent_sets() == set()
        assert all(count == 0 for count in run.levels.values())

    def test_rejects_empty_and_bad_min_sup(self):
        with pytest.raises(EmptyTransactionListError):
            mine_frequent([], 0.5)
        with pytest.raises(ValueError):
            mine_frequent(ABC, 0.0)
        with pytest.raises(ValueError):
            mine_frequent(ABC, 1.5)


def random_transactions(rng, max_transactions=12, max_items=8):
    alphabet = "abcdefgh"[: rng.randint(1, max_items)]
    n = rng.randint(1, max_transactions)
    return [
        frozenset(rng.sample(alphabet, rng.randint(1, len(alphabet)))) for _ in range(n)
    ]


class TestOracleEquivalence:
    def test_matches_exhaustive_enumeration(self):
        rng = random.Random(7)
        for _ in range(60):
            transactions = random_transactions(rng)
            min_sup = rng.choice([0.2, 0.4, 0.6, 0.8, 1.0])
            run = mine_frequent(transactions, min_sup)
            expected = exhaustive_frequent(transactions, min_sup)
            assert run.frequent_sets() == set(expected)
            for level in run.itemsets.values():
                for itemset, stat in level.items():
                    assert stat.count == expected[itemset]

    def test_dedup_path_is_output_identical(self):
        rng = random.Random(11)
        for _ in range(40):
            transactions = random_transactions(rng)
            min_sup = rng.choice([0.2, 0.5, 0.8])
            plain = mine_frequent(transactions, min_sup, dedup=False)
            packed = mine_frequent(transactions, min_sup, dedup=True)
            assert plain.itemsets == packed.itemsets

    def test_threaded_counting_is_output_identical(self):
        rng = random.Random(13)
        for _ in range(20):
            transactions = random_transactions(rng)
            single = mine_frequent(transactions, 0.3, threads=1)
            multi = mine_frequent(transactions, 0.3, threads=4)
            assert single.itemsets == multi.itemsets


def assert_mining_invariants(run):
    """Anti-monotonicity: every subset of a frequent itemset is frequent."""
    frequent = run.frequent_sets()
    for itemset in frequent:
        for item in itemset:
            if len(itemset) > 1:
                assert itemset - {item} in frequent


class TestMiningInvariants:
    def test_anti_monotonicity_on_random_runs(self):
        rng = random.Random(17)
        for _ in range(40):
            run = mine_frequent(random_transactions(rng), rng.choice([0.2, 0.4, 0.6]))
            assert_mining_invariants(run)

    def test_min_sup_monotonicity(self):
        rng = random.Random(19)
        for _ in range(40):
            transactions = random_transactions(rng)
            low = mine_frequent(transactions, 0.3)
            high = mine_frequent(transactions, 0.6)
            assert high.frequent_sets() <= low.frequent_sets()

    @given(st.integers(1, 5000), st.floats(0.0001, 1.0))
    def test_support_count_consistency(self, n, min_sup):
        # any reported count c of a frequent itemset satisfies c/n >= min_sup
        threshold_count = min(c for c in range(n + 1) if c / n >= min_sup)
        assert threshold_count / n >= min_sup
        if threshold_count:
            assert (threshold_count - 1) / n < min_sup


class TestHotspotMining:
    def test_single_repeated_triple(self):
        dataset = [make_record(location="five-points", day="Friday", hour=21)] * 4
        run = mine_hotspot_patterns(dataset, 0.5)
        assert run.patterns == [
            FrequentPattern("five-points", "Friday", "T6", 1.0, 4)
        ]
        assert run.dataset_size == 4

    def test_transactions_carry_one_item_per_tag(self):
        transaction = record_transaction(make_record(location="cbd", day="Monday", hour=3))
        assert transaction == {("location", "cbd"), ("day", "Monday"), ("time", "T1")}

    def test_patterns_sorted_by_location_weekday_time(self):
        dataset = (
            [make_record(location="cbd", day="Sunday", hour=22)] * 3
            + [make_record(location="cbd", day="Monday", hour=22)] * 3
            + [make_record(location="baker", day="Friday", hour=2)] * 3
            + [make_record(location="baker", day="Friday", hour=22)] * 3
        )
        run = mine_hotspot_patterns(dataset, 0.25)
        assert [(p.location, p.day, p.time) for p in run.patterns] == [
            ("baker", "Friday", "T1"),
            ("baker", "Friday", "T6"),
            ("cbd", "Monday", "T6"),
            ("cbd", "Sunday", "T6"),
        ]

    def test_counts_match_relative_supports(self):
        dataset = [make_record(location="cbd")] * 3 + [make_record(location="baker")]
        run = mine_hotspot_patterns(dataset, 0.1)
        for pattern in run.patterns:
            assert abs(pattern.count - pattern.support * run.dataset_size) < 1e-9

    def test_levels_are_computed_through_size_three(self):
        dataset = [make_record()] * 2
        run = mine_hotspot_patterns(dataset, 0.5)
        assert set(run.levels) == {1, 2, 3}
        assert run.levels == {1: 3, 2: 3, 3: 1}

    def test_raising_min_sup_never_adds_patterns(self, synthetic_dataset):
        low = mine_hotspot_patterns(synthetic_dataset, 0.01)
        high = mine_hotspot_patterns(synthetic_dataset, 0.03)
        low_set = {(p.location, p.day, p.time) for p in low.patterns}
        high_set = {(p.location, p.day, p.time) for p in high.patterns}
        assert high_set <= low_set
        assert_mining_invariants(low)
        assert_mining_invariants(high)

    def test_absolute_count_thresholds_round_as_expected(self):
        # the documented operating points: fractions are authoritative
        assert round(0.0018 * 196767) == 354
        assert round(0.0012 * 231640) == 278
        assert abs(278 - 277) <= 1


class TestPatternOutput:
    def test_csv_golden_with_three_decimal_supports(self):
        dataset = [make_record(location="cbd", day="Monday", hour=18)] * 1 + [
            make_record(location="baker", day="Friday", hour=22)
        ] * 2
        run = mine_hotspot_patterns(dataset, 0.3)
        buffer = io.StringIO()
        write_patterns_csv(run, buffer)
        assert buffer.getvalue() == (
            "location,day,time,support,count\n"
            "baker,Friday,T6,0.667,2\n"
            "cbd,Monday,T5,0.333,1\n"
        )

    def test_summary_dict(self):
        run = mine_hotspot_patterns([make_record()] * 2, 0.5)
        summary = run_summary_dict(run)
        assert summary == {
            "min_sup": 0.5,
            "dataset_size": 2,
            "levels": {"1": 3, "2": 3, "3": 1},
            "pattern_count": 1,
        }
