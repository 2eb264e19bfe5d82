"""Neighborhood crime ranking and dangerous-vs-safe group comparison."""

import io

import pytest
from hypothesis import given

from conftest import datasets, make_record
from crimeminer.demographics import (
    compare_groups,
    comparison_to_json_dict,
    crime_rate_by_location,
    write_comparison_csv,
)
from crimeminer.errors import (
    EmptyDatasetError,
    GroupSelectionError,
    UnmatchedNeighborhoodError,
)
from crimeminer.ingestion import DemographicsRecord


def demo(name, population=100, male=None, female=None, units=50, occupied=45, vacant=5, ages=None):
    male = population * 6 // 10 if male is None else male
    female = population - male if female is None else female
    return DemographicsRecord(
        neighborhood=name,
        population_total=population,
        male=male,
        female=female,
        age_brackets=ages or {"20-29": population // 4, "50-59": population // 10},
        housing_units_total=units,
        occupied_units=occupied,
        vacant_units=vacant,
        owned_units=30,
        rented_units=15,
    )


class TestCrimeRateByLocation:
    def test_counts_and_shares(self):
        dataset = [make_record(location=loc) for loc in ("a", "a", "b", "c")]
        rates = crime_rate_by_location(dataset)
        assert [(r.neighborhood, r.crime_count, r.crime_share) for r in rates] == [
            ("a", 2, 0.5),
            ("b", 1, 0.25),
            ("c", 1, 0.25),
        ]

    def test_single_location(self):
        rates = crime_rate_by_location([make_record(location="solo")])
        assert rates == [type(rates[0])("solo", 1, 1.0)]

    def test_empty_dataset(self):
        with pytest.raises(EmptyDatasetError):
            crime_rate_by_location([])

    @given(datasets)
    def test_shares_sum_to_one(self, dataset):
        rates = crime_rate_by_location(dataset)
        assert abs(sum(r.crime_share for r in rates) - 1.0) < 1e-9
        counts = [r.crime_count for r in rates]
        assert counts == sorted(counts, reverse=True)


def six_neighborhood_setup():
    """Crime volume decreasing a > b > c > d > e > f; population tracks danger."""
    dataset = []
    for i, name in enumerate("abcdef"):
        dataset.extend(make_record(location=name) for _ in range(60 - i * 10))
    demographics = [demo(name, population=1000 - i * 150) for i, name in enumerate("abcdef")]
    return dataset, demographics


class TestCompareGroups:
    def test_group_membership_and_ordering(self):
        dataset, demographics = six_neighborhood_setup()
        comparison = compare_groups(crime_rate_by_location(dataset), demographics)
        assert comparison.dangerous == ("a", "b", "c")
        assert comparison.safe == ("f", "e", "d")  # safest first

    def test_dangerous_population_exceeds_safe_in_the_constructed_setup(self):
        dataset, demographics = six_neighborhood_setup()
        comparison = compare_groups(crime_rate_by_location(dataset), demographics)
        assert (
            comparison.group_sums["dangerous"]["population"]
            > comparison.group_sums["safe"]["population"]
        )

    def test_metrics_are_exact_sums_and_means(self):
        dataset, demographics = six_neighborhood_setup()
        comparison = compare_groups(crime_rate_by_location(dataset), demographics)
        by_name = {d.neighborhood: d for d in demographics}
        expected_sum = sum(by_name[n].vacant_units for n in comparison.dangerous)
        assert comparison.group_sums["dangerous"]["vacant_units"] == expected_sum
        assert comparison.group_means["dangerous"]["vacant_units"] == pytest.approx(expected_sum / 3)
        assert comparison.metrics["a"]["age_20-29"] == by_name["a"].age_brackets["20-29"]

    def test_demographics_row_order_is_irrelevant(self):
        dataset, demographics = six_neighborhood_setup()
        rates = crime_rate_by_location(dataset)
        forward = compare_groups(rates, demographics)
        backward = compare_groups(rates, list(reversed(demographics)))
        assert forward == backward

    def test_unmatched_neighborhood_raises_with_suggestion(self):
        dataset, demographics = six_neighborhood_setup()
        rates = crime_rate_by_location(dataset + [make_record(location="aa-ville")] * 100)
        with pytest.raises(UnmatchedNeighborhoodError) as err:
            compare_groups(rates, demographics)
        assert err.value.name == "aa-ville"

    def test_suggestion_names_the_closest_match(self):
        dataset = [make_record(location="five-pointz")] * 3 + [
            make_record(location=n) for n in ("x", "y", "z")
        ]
        demographics = [demo(n) for n in ("five-points", "x", "y", "z")]
        with pytest.raises(UnmatchedNeighborhoodError) as err:
            compare_groups(crime_rate_by_location(dataset), demographics, top_k=1, bottom_k=1)
        assert err.value.suggestion == "five-points"

    def test_oversized_groups_rejected(self):
        dataset, demographics = six_neighborhood_setup()
        with pytest.raises(GroupSelectionError):
            compare_groups(crime_rate_by_location(dataset), demographics, top_k=4, bottom_k=3)

    def test_extra_columns_are_echoed_into_metrics(self):
        dataset = [make_record(location=n) for n in ("a", "a", "b")]
        records = [
            DemographicsRecord(
                neighborhood=n,
                population_total=10,
                male=5,
                female=5,
                age_brackets={"20-29": 4},
                housing_units_total=6,
                occupied_units=5,
                vacant_units=1,
                owned_units=3,
                rented_units=2,
                extras={"race_white": 7 + i},
            )
            for i, n in enumerate(("a", "b"))
        ]
        comparison = compare_groups(
            crime_rate_by_location(dataset), records, top_k=1, bottom_k=1
        )
        assert "race_white" in comparison.metric_names
        assert comparison.metrics["a"]["race_white"] == 7
        assert comparison.group_sums["safe"]["race_white"] == 8

    def test_per_capita_ranking_can_reorder(self):
        # b has fewer crimes than a but a tiny population: per capita it leads
        dataset = [make_record(location="a")] * 50 + [make_record(location="b")] * 25
        dataset += [make_record(location="c")] * 10
        demographics = [
            demo("a", population=1000),
            demo("b", population=100),
            demo("c", population=1000),
        ]
        rates = crime_rate_by_location(dataset)
        raw = compare_groups(rates, demographics, top_k=1, bottom_k=1)
        capita = compare_groups(rates, demographics, top_k=1, bottom_k=1, per_capita=True)
        assert raw.dangerous == ("a",)
        assert capita.dangerous == ("b",)


class TestComparisonOutput:
    def test_csv_has_a_row_per_neighborhood_metric_plus_aggregates(self):
        dataset, demographics = six_neighborhood_setup()
        comparison = compare_groups(crime_rate_by_location(dataset), demographics)
        buffer = io.StringIO()
        write_comparison_csv(comparison, buffer)
        lines = buffer.getvalue().splitlines()
        assert lines[0] == "group,neighborhood,metric,value"
        n_metrics = len(comparison.metric_names)
        # 2 groups x (3 neighborhoods + sum + mean) x metrics
        assert len(lines) - 1 == 2 * (3 + 2) * n_metrics
        assert f"dangerous,a,population,{comparison.metrics['a']['population']}" in lines

    def test_json_mirror_round_trips_through_dict(self):
        dataset, demographics = six_neighborhood_setup()
        comparison = compare_groups(crime_rate_by_location(dataset), demographics)
        obj = comparison_to_json_dict(comparison)
        assert obj["dangerous"] == ["a", "b", "c"]
        assert obj["group_sums"]["safe"]["population"] == comparison.group_sums["safe"]["population"]
