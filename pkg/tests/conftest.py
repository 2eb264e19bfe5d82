"""Shared fixtures, builders, and independent oracles for the test suite."""

from __future__ import annotations

import itertools
from pathlib import Path

import pytest
from hypothesis import strategies as st

from crimeminer.classify import FEATURES, FeatureVector, feature_of
from crimeminer.preprocess import (
    MONTH_NAMES,
    WEEKDAY_NAMES,
    CrimeCategory,
    UnifiedCrimeRecord,
    bin_time,
    read_unified_jsonl,
)

DATA_DIR = Path(__file__).parent / "data"

LOCATIONS = ("five-points", "cbd", "capitol-hill", "baker", "montbello", "wellshire")


def make_record(
    crime_type=CrimeCategory.THEFT,
    month="June",
    day="Friday",
    hour=21,
    location="five-points",
    year=2014,
) -> UnifiedCrimeRecord:
    return UnifiedCrimeRecord(
        crime_type=crime_type,
        month=month,
        day=day,
        time=bin_time(hour),
        location=location,
        year=year,
        hour=hour,
    )


@st.composite
def unified_records(draw) -> UnifiedCrimeRecord:
    return make_record(
        crime_type=draw(st.sampled_from(list(CrimeCategory))),
        month=draw(st.sampled_from(MONTH_NAMES)),
        day=draw(st.sampled_from(WEEKDAY_NAMES)),
        hour=draw(st.integers(0, 23)),
        location=draw(st.sampled_from(LOCATIONS)),
        year=draw(st.sampled_from((2013, 2014, 2015))),
    )


datasets = st.lists(unified_records(), min_size=1, max_size=60)


@pytest.fixture(scope="session")
def synthetic_dataset() -> list[UnifiedCrimeRecord]:
    with open(DATA_DIR / "synthetic_crimes.jsonl", encoding="utf-8") as fp:
        return read_unified_jsonl(fp)


# --- independent oracles ---------------------------------------------------

def exhaustive_frequent(transactions, min_sup) -> dict[frozenset, int]:
    """Support filter over every possible itemset, by brute enumeration."""
    universe = sorted({item for t in transactions for item in t})
    n = len(transactions)
    frequent: dict[frozenset, int] = {}
    for size in range(1, len(universe) + 1):
        for combo in itertools.combinations(universe, size):
            itemset = frozenset(combo)
            count = sum(1 for t in transactions if itemset <= frozenset(t))
            if count / n >= min_sup:
                frequent[itemset] = count
    return frequent


def brute_force_posterior(train, x: FeatureVector, alpha: float) -> dict[CrimeCategory, float]:
    """Direct Bayes evaluation in probability space with the same smoothing.

    joint(c) = P(c) * prod_f (count(v,c,f) + alpha) / (count_c + alpha*(|V_f|+1)),
    normalized over classes. Counts are recomputed by scanning, independent of
    the model's tables.
    """
    n = len(train)
    vocab = {f: {feature_of(r, f) for r in train} for f in FEATURES}
    joint: dict[CrimeCategory, float] = {}
    for c in CrimeCategory:
        members = [r for r in train if r.crime_type == c]
        probability = len(members) / n
        for f in FEATURES:
            denominator = len(members) + alpha * (len(vocab[f]) + 1)
            value = x.value(f)
            if value in vocab[f]:
                numerator = sum(1 for r in members if feature_of(r, f) == value) + alpha
            else:
                numerator = alpha
            probability *= numerator / denominator if denominator > 0 else 0.0
        joint[c] = probability
    total = sum(joint.values())
    if total == 0.0:
        return {c: 1.0 / len(joint) for c in joint}
    return {c: p / total for c, p in joint.items()}
