"""Crime-type classifiers over the four categorical features.

Two predictors share the (month, day, time, location) feature space:

* a categorical Naive Bayes with Laplace-smoothed per-feature conditional
  tables and a reserved slot for values unseen in training, and
* a best-first binary decision tree using information gain, capped at a
  maximum number of leaves.

Both are deterministic: identical training data and parameters produce
byte-identical serialized models.
"""

from __future__ import annotations

import json
import math
import random
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence, TextIO, Union

from .errors import AllZeroCountsError, DatasetTooSmallError, EmptyTrainingSetError
from .preprocess import (
    MONTH_NAMES,
    WEEKDAY_NAMES,
    CrimeCategory,
    TimeBin,
    UnifiedCrimeRecord,
)

FEATURES = ("month", "day", "time", "location")

_MONTH_RANK = {name: i for i, name in enumerate(MONTH_NAMES)}
_WEEKDAY_RANK = {name: i for i, name in enumerate(WEEKDAY_NAMES)}
_TIME_RANK = {b.value: i for i, b in enumerate(TimeBin)}

CLASSES = tuple(CrimeCategory)


@dataclass(frozen=True)
class FeatureVector:
    """Prediction-time crime features.

    Month, day, and time bin must be canonical values; the location may be
    any non-empty string (unseen locations are handled by smoothing in the
    Bayes model and by equality predicates failing in the tree).
    """

    month: str
    day: str
    time: TimeBin
    location: str

    def __post_init__(self):
        if self.month not in _MONTH_RANK:
            raise ValueError(f"unknown month {self.month!r}")
        if self.day not in _WEEKDAY_RANK:
            raise ValueError(f"unknown weekday {self.day!r}")
        if not isinstance(self.time, TimeBin):
            raise ValueError(f"time must be a TimeBin, got {self.time!r}")
        if not self.location:
            raise ValueError("location must be non-empty")

    def value(self, feature: str) -> str:
        if feature == "time":
            return self.time.value
        return getattr(self, feature)


def feature_of(record: UnifiedCrimeRecord, feature: str) -> str:
    if feature == "time":
        return record.time.value
    return getattr(record, feature)


def vector_from_record(record: UnifiedCrimeRecord) -> FeatureVector:
    return FeatureVector(record.month, record.day, record.time, record.location)


def value_order_key(feature: str, value: str):
    """Canonical within-feature value order used for all tie-breaks."""
    if feature == "month":
        return _MONTH_RANK[value]
    if feature == "day":
        return _WEEKDAY_RANK[value]
    if feature == "time":
        return _TIME_RANK[value]
    return value


# --- train/test splitting ----------------------------------------------------

@dataclass(frozen=True)
class SplitSpec:
    """Seeded shuffle-split parameters."""

    train_fraction: float = 0.8
    seed: int = 42

    def __post_init__(self):
        if not 0 < self.train_fraction < 1:
            raise ValueError(f"train_fraction must be in (0, 1), got {self.train_fraction}")


def split_train_test(dataset: Sequence, spec: SplitSpec) -> tuple[list, list]:
    """Partition by a seeded pseudo-random permutation.

    The train size is round-half-up(train_fraction * n); both sides keep the
    original dataset order. The same seed always yields the same partition.
    """
    n = len(dataset)
    if n < 2:
        raise DatasetTooSmallError(f"need at least 2 records to split, got {n}")
    indices = list(range(n))
    random.Random(spec.seed).shuffle(indices)
    n_train = math.floor(spec.train_fraction * n + 0.5)
    train_indices = sorted(indices[:n_train])
    test_indices = sorted(indices[n_train:])
    return [dataset[i] for i in train_indices], [dataset[i] for i in test_indices]


# --- Naive Bayes --------------------------------------------------------------

UNSEEN = "__unseen__"  # reserved smoothing slot, never a real feature value


@dataclass(frozen=True)
class NaiveBayesModel:
    """Class priors plus per-feature conditional log-probability tables.

    For each feature f and class c the conditionals follow
    ``P(v|c,f) = (count(v,c,f) + alpha) / (count_c + alpha * (|vocab_f| + 1))``
    with the +1 slot reserved for values unseen in training, so the
    distribution over vocab plus UNSEEN sums to one exactly.
    """

    alpha: float
    classes: tuple[CrimeCategory, ...]
    log_prior: Mapping[CrimeCategory, float]
    vocab: Mapping[str, tuple[str, ...]]
    cond_log: Mapping[str, Mapping[CrimeCategory, Mapping[str, float]]]
    unseen_log: Mapping[str, Mapping[CrimeCategory, float]]


def _log(x: float) -> float:
    return math.log(x) if x > 0.0 else -math.inf


def nb_train(train: Sequence[UnifiedCrimeRecord], alpha: float = 1.0) -> NaiveBayesModel:
    if not train:
        raise EmptyTrainingSetError("cannot train Naive Bayes on an empty set")
    if alpha < 0:
        raise ValueError(f"alpha must be >= 0, got {alpha}")
    n = len(train)
    class_counts = Counter(r.crime_type for r in train)
    log_prior = {c: _log(class_counts.get(c, 0) / n) for c in CLASSES}

    vocab: dict[str, tuple[str, ...]] = {}
    cond_log: dict[str, dict[CrimeCategory, dict[str, float]]] = {}
    unseen_log: dict[str, dict[CrimeCategory, float]] = {}
    for feature in FEATURES:
        values = sorted(
            {feature_of(r, feature) for r in train},
            key=lambda v: value_order_key(feature, v),
        )
        vocab[feature] = tuple(values)
        joint = Counter((feature_of(r, feature), r.crime_type) for r in train)
        per_class: dict[CrimeCategory, dict[str, float]] = {}
        per_class_unseen: dict[CrimeCategory, float] = {}
        for c in CLASSES:
            denominator = class_counts.get(c, 0) + alpha * (len(values) + 1)
            if denominator > 0:
                table = {
                    v: _log((joint.get((v, c), 0) + alpha) / denominator) for v in values
                }
                per_class_unseen[c] = _log(alpha / denominator)
            else:  # alpha == 0 and class absent: no mass anywhere
                table = {v: -math.inf for v in values}
                per_class_unseen[c] = -math.inf
            per_class[c] = table
        cond_log[feature] = per_class
        unseen_log[feature] = per_class_unseen

    return NaiveBayesModel(
        alpha=alpha,
        classes=CLASSES,
        log_prior=log_prior,
        vocab=vocab,
        cond_log=cond_log,
        unseen_log=unseen_log,
    )


def nb_class_scores(model: NaiveBayesModel, x: FeatureVector) -> dict[CrimeCategory, float]:
    """Unnormalized log-posterior score per class."""
    scores: dict[CrimeCategory, float] = {}
    for c in model.classes:
        score = model.log_prior[c]
        for feature in FEATURES:
            value = x.value(feature)
            score += model.cond_log[feature][c].get(value, model.unseen_log[feature][c])
        scores[c] = score
    return scores


def _posterior_from_scores(scores: Mapping[CrimeCategory, float]) -> dict[CrimeCategory, float]:
    peak = max(scores.values())
    if peak == -math.inf:
        # Every class scored zero probability (possible only with alpha=0 and
        # unseen values); fall back to a uniform posterior.
        return {c: 1.0 / len(scores) for c in scores}
    weights = {c: math.exp(s - peak) for c, s in scores.items()}
    total = sum(weights.values())
    return {c: w / total for c, w in weights.items()}


def nb_predict(
    model: NaiveBayesModel, x: FeatureVector
) -> tuple[CrimeCategory, dict[CrimeCategory, float]]:
    """Most probable class (ties break to the lowest class id) and the posterior."""
    scores = nb_class_scores(model, x)
    best = model.classes[0]
    best_score = scores[best]
    for c in model.classes[1:]:
        if scores[c] > best_score:
            best, best_score = c, scores[c]
    return best, _posterior_from_scores(scores)


# --- decision tree -------------------------------------------------------------

def entropy(label_counts: Mapping[Hashable, int]) -> float:
    """Shannon entropy in bits of a label-count distribution (0*log0 = 0)."""
    if any(c < 0 for c in label_counts.values()):
        raise ValueError("counts must be non-negative")
    total = sum(label_counts.values())
    if total == 0:
        raise AllZeroCountsError("entropy of an empty distribution is undefined")
    h = 0.0
    for count in label_counts.values():
        if count:
            p = count / total
            h -= p * math.log2(p)
    return h


@dataclass
class TreeLeaf:
    counts: dict[CrimeCategory, int]
    majority: CrimeCategory


@dataclass
class TreeSplit:
    feature: str
    value: str
    gain: float
    if_true: Union["TreeSplit", TreeLeaf]
    if_false: Union["TreeSplit", TreeLeaf]


@dataclass
class DecisionTree:
    """Binary predicate tree over the categorical features."""

    root: TreeSplit | TreeLeaf
    max_leaves: int

    def leaves(self) -> list[TreeLeaf]:
        found: list[TreeLeaf] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, TreeLeaf):
                found.append(node)
            else:
                stack.append(node.if_false)
                stack.append(node.if_true)
        return found

    @property
    def leaf_count(self) -> int:
        return len(self.leaves())

    def splits(self) -> list[TreeSplit]:
        found: list[TreeSplit] = []
        stack = [self.root]
        while stack:
            node = stack.pop()
            if isinstance(node, TreeSplit):
                found.append(node)
                stack.append(node.if_false)
                stack.append(node.if_true)
        return found


def _majority(counts: Mapping[CrimeCategory, int]) -> CrimeCategory:
    return min(counts.items(), key=lambda kv: (-kv[1], kv[0]))[0]


class _GrowNode:
    """Frontier bookkeeping during best-first growth."""

    __slots__ = ("records", "counts", "path", "creation", "best", "children")

    def __init__(self, records, path, creation):
        self.records = records
        self.counts = Counter(r.crime_type for r in records)
        self.path = path  # frozenset of (feature, value) predicates already used
        self.creation = creation
        self.best = _best_split(records, self.counts, path)
        self.children: tuple | None = None  # (feature, value, gain, true_node, false_node)


def _best_split(records, counts, path):
    """Highest-gain (feature == value) predicate, or None if no gain is positive.

    Ties break by feature order month < day < time < location, then by the
    feature's canonical value order (both enforced by iteration order with a
    strictly-greater comparison).
    """
    parent_entropy = entropy(counts)
    if parent_entropy == 0.0:
        return None
    total = len(records)
    best = None
    for feature in FEATURES:
        by_value: dict[str, Counter] = {}
        for r in records:
            by_value.setdefault(feature_of(r, feature), Counter())[r.crime_type] += 1
        for value in sorted(by_value, key=lambda v: value_order_key(feature, v)):
            if (feature, value) in path:
                continue
            true_counts = by_value[value]
            n_true = sum(true_counts.values())
            if n_true == total:
                continue
            false_counts = counts - true_counts
            children = n_true * entropy(true_counts) + (total - n_true) * entropy(false_counts)
            gain = parent_entropy - children / total
            if gain > 0.0 and (best is None or gain > best[0]):
                best = (gain, feature, value)
    return best


def dt_train(train: Sequence[UnifiedCrimeRecord], max_leaves: int = 10) -> DecisionTree:
    """Grow a tree best-first: always split the frontier leaf whose best
    predicate yields the largest information gain, until the leaf cap is hit
    or no split has positive gain. Equal gains go to the earlier-created leaf.
    """
    if not train:
        raise EmptyTrainingSetError("cannot train a decision tree on an empty set")
    if max_leaves < 2:
        raise ValueError(f"max_leaves must be >= 2, got {max_leaves}")

    creation = 0
    root = _GrowNode(list(train), frozenset(), creation)
    frontier = [root]
    n_leaves = 1
    while n_leaves < max_leaves:
        splittable = [g for g in frontier if g.best is not None]
        if not splittable:
            break
        node = max(splittable, key=lambda g: (g.best[0], -g.creation))
        gain, feature, value = node.best
        true_records = [r for r in node.records if feature_of(r, feature) == value]
        false_records = [r for r in node.records if feature_of(r, feature) != value]
        path = node.path | {(feature, value)}
        true_child = _GrowNode(true_records, path, creation + 1)
        false_child = _GrowNode(false_records, path, creation + 2)
        creation += 2
        node.children = (feature, value, gain, true_child, false_child)
        frontier.remove(node)
        frontier.extend((true_child, false_child))
        n_leaves += 1

    def materialize(grow: _GrowNode) -> TreeSplit | TreeLeaf:
        if grow.children is None:
            return TreeLeaf(counts=dict(sorted(grow.counts.items())), majority=_majority(grow.counts))
        feature, value, gain, true_child, false_child = grow.children
        return TreeSplit(feature, value, gain, materialize(true_child), materialize(false_child))

    return DecisionTree(root=materialize(root), max_leaves=max_leaves)


def dt_predict(tree: DecisionTree, x: FeatureVector) -> CrimeCategory:
    """Route by equality predicates; unseen values fail every test and fall
    through to a valid leaf."""
    node = tree.root
    while isinstance(node, TreeSplit):
        node = node.if_true if x.value(node.feature) == node.value else node.if_false
    return node.majority


# --- model serialization --------------------------------------------------------

NB_SCHEMA = "nb-v1"
DT_SCHEMA = "dt-v1"


def _dump_log(value: float):
    return None if value == -math.inf else value


def _load_log(value) -> float:
    return -math.inf if value is None else float(value)


def nb_to_json_dict(model: NaiveBayesModel) -> dict:
    return {
        "schema": NB_SCHEMA,
        "alpha": model.alpha,
        "classes": [int(c) for c in model.classes],
        "log_prior": {str(int(c)): _dump_log(model.log_prior[c]) for c in model.classes},
        "vocab": {f: list(model.vocab[f]) for f in FEATURES},
        "cond_log": {
            f: {
                str(int(c)): {v: _dump_log(p) for v, p in model.cond_log[f][c].items()}
                for c in model.classes
            }
            for f in FEATURES
        },
        "unseen_log": {
            f: {str(int(c)): _dump_log(model.unseen_log[f][c]) for c in model.classes}
            for f in FEATURES
        },
    }


def nb_from_json_dict(obj: Mapping) -> NaiveBayesModel:
    if obj.get("schema") != NB_SCHEMA:
        raise ValueError(f"expected schema {NB_SCHEMA!r}, got {obj.get('schema')!r}")
    classes = tuple(CrimeCategory(i) for i in obj["classes"])
    return NaiveBayesModel(
        alpha=float(obj["alpha"]),
        classes=classes,
        log_prior={c: _load_log(obj["log_prior"][str(int(c))]) for c in classes},
        vocab={f: tuple(obj["vocab"][f]) for f in FEATURES},
        cond_log={
            f: {
                c: {v: _load_log(p) for v, p in obj["cond_log"][f][str(int(c))].items()}
                for c in classes
            }
            for f in FEATURES
        },
        unseen_log={
            f: {c: _load_log(obj["unseen_log"][f][str(int(c))]) for c in classes}
            for f in FEATURES
        },
    )


def _dt_node_to_json(node: TreeSplit | TreeLeaf) -> dict:
    if isinstance(node, TreeLeaf):
        return {
            "kind": "leaf",
            "counts": {str(int(c)): n for c, n in sorted(node.counts.items())},
            "class": int(node.majority),
        }
    return {
        "kind": "split",
        "feature": node.feature,
        "value": node.value,
        "gain": node.gain,
        "true": _dt_node_to_json(node.if_true),
        "false": _dt_node_to_json(node.if_false),
    }


def _dt_node_from_json(obj: Mapping) -> TreeSplit | TreeLeaf:
    if obj["kind"] == "leaf":
        counts = {CrimeCategory(int(k)): int(v) for k, v in obj["counts"].items()}
        return TreeLeaf(counts=counts, majority=CrimeCategory(int(obj["class"])))
    return TreeSplit(
        feature=obj["feature"],
        value=obj["value"],
        gain=float(obj["gain"]),
        if_true=_dt_node_from_json(obj["true"]),
        if_false=_dt_node_from_json(obj["false"]),
    )


def dt_to_json_dict(tree: DecisionTree) -> dict:
    return {"schema": DT_SCHEMA, "max_leaves": tree.max_leaves, "root": _dt_node_to_json(tree.root)}


def dt_from_json_dict(obj: Mapping) -> DecisionTree:
    if obj.get("schema") != DT_SCHEMA:
        raise ValueError(f"expected schema {DT_SCHEMA!r}, got {obj.get('schema')!r}")
    return DecisionTree(root=_dt_node_from_json(obj["root"]), max_leaves=int(obj["max_leaves"]))


def save_model(model: NaiveBayesModel | DecisionTree, fp: TextIO) -> None:
    obj = nb_to_json_dict(model) if isinstance(model, NaiveBayesModel) else dt_to_json_dict(model)
    json.dump(obj, fp, indent=2, sort_keys=True)
    fp.write("\n")


def load_model(fp: TextIO) -> NaiveBayesModel | DecisionTree:
    obj = json.load(fp)
    schema = obj.get("schema")
    if schema == NB_SCHEMA:
        return nb_from_json_dict(obj)
    if schema == DT_SCHEMA:
        return dt_from_json_dict(obj)
    raise ValueError(f"unknown model schema {schema!r}")
