"""Confusion matrices, precision/recall/F1 reports, and k-fold cross-validation."""

from __future__ import annotations

import csv
import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence, TextIO

from .classify import (
    dt_predict,
    dt_train,
    nb_predict,
    nb_train,
    vector_from_record,
)
from .errors import (
    EmptyInputError,
    EmptyMatrixError,
    LengthMismatchError,
    TooFewRecordsError,
)
from .preprocess import CrimeCategory, UnifiedCrimeRecord
from .stats import round_half_up

CLASS_ORDER = tuple(CrimeCategory)


@dataclass(frozen=True)
class ConfusionMatrix:
    """cells[actual][predicted] over the fixed six-class canonical order."""

    cells: tuple[tuple[int, ...], ...]
    classes: tuple[CrimeCategory, ...] = CLASS_ORDER

    @classmethod
    def from_pairs(
        cls,
        actual: Sequence[CrimeCategory],
        predicted: Sequence[CrimeCategory],
    ) -> "ConfusionMatrix":
        if len(actual) != len(predicted):
            raise LengthMismatchError(
                f"{len(actual)} actual labels vs {len(predicted)} predictions"
            )
        if not actual:
            raise EmptyInputError("cannot build a confusion matrix from zero pairs")
        counts = [[0] * len(CLASS_ORDER) for _ in CLASS_ORDER]
        for a, p in zip(actual, predicted):
            counts[int(a) - 1][int(p) - 1] += 1
        return cls(cells=tuple(tuple(row) for row in counts))

    @property
    def total(self) -> int:
        return sum(sum(row) for row in self.cells)

    @property
    def trace(self) -> int:
        return sum(self.cells[i][i] for i in range(len(self.cells)))

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.cells)

    def col_sums(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.cells))


@dataclass(frozen=True)
class ClassMetrics:
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvaluationReport:
    matrix: ConfusionMatrix
    per_class: Mapping[CrimeCategory, ClassMetrics]
    weighted: ClassMetrics  # support-weighted averages; support == total
    accuracy: float


def confusion_matrix(
    actual: Sequence[CrimeCategory], predicted: Sequence[CrimeCategory]
) -> ConfusionMatrix:
    return ConfusionMatrix.from_pairs(actual, predicted)


def classification_report(matrix: ConfusionMatrix) -> EvaluationReport:
    """Per-class and support-weighted precision/recall/F1 plus accuracy.

    Empty predicted columns give precision 0 and empty actual rows give
    recall 0, so never-predicted classes contribute zeros rather than NaNs.
    """
    total = matrix.total
    if total == 0:
        raise EmptyMatrixError("all confusion matrix cells are zero")
    rows = matrix.row_sums()
    cols = matrix.col_sums()
    per_class: dict[CrimeCategory, ClassMetrics] = {}
    for i, c in enumerate(matrix.classes):
        tp = matrix.cells[i][i]
        precision = tp / cols[i] if cols[i] else 0.0
        recall = tp / rows[i] if rows[i] else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
        per_class[c] = ClassMetrics(precision, recall, f1, rows[i])
    weighted = ClassMetrics(
        precision=sum(m.precision * m.support for m in per_class.values()) / total,
        recall=sum(m.recall * m.support for m in per_class.values()) / total,
        f1=sum(m.f1 * m.support for m in per_class.values()) / total,
        support=total,
    )
    return EvaluationReport(
        matrix=matrix,
        per_class=per_class,
        weighted=weighted,
        accuracy=matrix.trace / total,
    )


def evaluate_split(
    train: Sequence[UnifiedCrimeRecord],
    test: Sequence[UnifiedCrimeRecord],
    model_kind: str,
    *,
    alpha: float = 1.0,
    max_leaves: int = 10,
) -> EvaluationReport:
    """Train on one set, predict the other, and report."""
    actual, predicted = _fit_predict(train, test, model_kind, alpha, max_leaves)
    return classification_report(confusion_matrix(actual, predicted))


def _fit_predict(train, test, model_kind, alpha, max_leaves):
    if model_kind == "nb":
        model = nb_train(train, alpha=alpha)
        predicted = [nb_predict(model, vector_from_record(r))[0] for r in test]
    elif model_kind == "dt":
        tree = dt_train(train, max_leaves=max_leaves)
        predicted = [dt_predict(tree, vector_from_record(r)) for r in test]
    else:
        raise ValueError(f"model_kind must be 'nb' or 'dt', got {model_kind!r}")
    return [r.crime_type for r in test], predicted


def make_fold_indices(n: int, k: int, seed: int) -> list[list[int]]:
    """Seeded permutation sliced into k folds with sizes differing by at most 1."""
    indices = list(range(n))
    random.Random(seed).shuffle(indices)
    folds: list[list[int]] = []
    base, extra = divmod(n, k)
    start = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append(sorted(indices[start : start + size]))
        start += size
    return folds


@dataclass(frozen=True)
class CrossValidationResult:
    mean_accuracy: float
    fold_accuracies: tuple[float, ...]
    report: EvaluationReport  # pooled over all out-of-fold predictions


def cross_validate(
    dataset: Sequence[UnifiedCrimeRecord],
    model_kind: str,
    *,
    k: int = 5,
    seed: int = 42,
    alpha: float = 1.0,
    max_leaves: int = 10,
    threads: int = 1,
) -> CrossValidationResult:
    """k-fold cross-validation with a seeded fold assignment.

    Each fold serves once as the test set. The mean accuracy is the
    arithmetic mean of fold accuracies; the report pools every out-of-fold
    prediction into a single confusion matrix.
    """
    if k < 2:
        raise ValueError(f"fold count must be >= 2, got {k}")
    if model_kind not in ("nb", "dt"):
        raise ValueError(f"model_kind must be 'nb' or 'dt', got {model_kind!r}")
    n = len(dataset)
    if n < k:
        raise TooFewRecordsError(f"{n} records cannot fill {k} folds")
    folds = make_fold_indices(n, k, seed)

    def run_fold(fold: list[int]):
        in_fold = set(fold)
        train = [dataset[i] for i in range(n) if i not in in_fold]
        test = [dataset[i] for i in fold]
        return _fit_predict(train, test, model_kind, alpha, max_leaves)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(run_fold, folds))
    else:
        outcomes = [run_fold(fold) for fold in folds]

    fold_accuracies = []
    pooled_actual: list[CrimeCategory] = []
    pooled_predicted: list[CrimeCategory] = []
    for actual, predicted in outcomes:
        hits = sum(1 for a, p in zip(actual, predicted) if a == p)
        fold_accuracies.append(hits / len(actual))
        pooled_actual.extend(actual)
        pooled_predicted.extend(predicted)
    report = classification_report(confusion_matrix(pooled_actual, pooled_predicted))
    return CrossValidationResult(
        mean_accuracy=sum(fold_accuracies) / k,
        fold_accuracies=tuple(fold_accuracies),
        report=report,
    )


# --- report serialization ------------------------------------------------------

def _metrics_json(m: ClassMetrics) -> dict:
    return {
        "precision": m.precision,
        "recall": m.recall,
        "f1": m.f1,
        "support": m.support,
        "display": {
            "precision": round_half_up(m.precision, 2),
            "recall": round_half_up(m.recall, 2),
            "f1": round_half_up(m.f1, 2),
        },
    }


def report_to_json_dict(report: EvaluationReport) -> dict:
    return {
        "matrix": {
            "labels": [c.label for c in report.matrix.classes],
            "cells": [list(row) for row in report.matrix.cells],
        },
        "per_class": {c.label: _metrics_json(m) for c, m in report.per_class.items()},
        "weighted_avg": _metrics_json(report.weighted),
        "accuracy": report.accuracy,
        "accuracy_display": round_half_up(report.accuracy, 2),
    }


def write_report_json(report: EvaluationReport, fp: TextIO) -> None:
    json.dump(report_to_json_dict(report), fp, indent=2, sort_keys=True)
    fp.write("\n")


def cv_result_to_json_dict(result: CrossValidationResult) -> dict:
    return {
        "mean_accuracy": result.mean_accuracy,
        "fold_accuracies": list(result.fold_accuracies),
        "report": report_to_json_dict(result.report),
    }


def write_cv_result_json(result: CrossValidationResult, fp: TextIO) -> None:
    json.dump(cv_result_to_json_dict(result), fp, indent=2, sort_keys=True)
    fp.write("\n")


def write_report_csv(report: EvaluationReport, fp: TextIO) -> None:
    """Two-decimal metrics table, one row per class plus the weighted average."""
    writer = csv.writer(fp, lineterminator="\n")
    writer.writerow(["class", "precision", "recall", "f1", "support"])
    for c in report.matrix.classes:
        m = report.per_class[c]
        writer.writerow(
            [
                c.label,
                round_half_up(m.precision, 2),
                round_half_up(m.recall, 2),
                round_half_up(m.f1, 2),
                m.support,
            ]
        )
    w = report.weighted
    writer.writerow(
        [
            "Weighted Avg",
            round_half_up(w.precision, 2),
            round_half_up(w.recall, 2),
            round_half_up(w.f1, 2),
            w.support,
        ]
    )
