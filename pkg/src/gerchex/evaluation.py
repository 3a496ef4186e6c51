"""Metric protocol: task reductions, confusion metrics, bootstrap CIs.

Labeler output is compared to gold annotations per class on three binary
reductions plus one binary conversion:

* mention extraction: positive iff the class was labeled at all (anything but
  blank/none),
* negation detection: positive iff labeled negative,
* uncertainty detection: positive iff labeled uncertain,
* binary: uncertain counts as positive, none/blank as negative (the
  conversion used for sensitivity/specificity reporting).

Metrics with a zero denominator are undefined and surface as ``None``
("N/A"): precision needs tp+fp > 0, recall/sensitivity tp+fn > 0,
specificity tn+fp > 0, and F1 needs both components defined and p+r > 0.

Confidence intervals use a non-parametric bootstrap: reports are resampled
with replacement, the metric is recomputed per replicate (undefined
replicates are skipped and counted), and the 2.5th/97.5th percentiles are
taken with linear interpolation, h = (m - 1) * q, v[lo] + (h - lo) *
(v[lo+1] - v[lo]). The index mapping replicates see is documented in
``_resample``; together these conventions make every bootstrap run exactly
reproducible, including across worker counts.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from ._resample import resample_counts
from .errors import DataError
from .observations import ALL_CLASSES, ObservationClass, Polarity

DEFAULT_RESAMPLES = 10_000
DEFAULT_SEED = 0

METRIC_NAMES = ("f1", "precision", "recall", "sensitivity", "specificity")


class Task(Enum):
    MENTION_EXTRACTION = "mention_extraction"
    NEGATION = "negation"
    UNCERTAINTY = "uncertainty"
    BINARY = "binary"


def binarize(value: Polarity | None) -> bool:
    """Binary conversion: uncertain counts positive, none/blank negative."""
    return value in (Polarity.POSITIVE, Polarity.UNCERTAIN)


def reduce_task(
    gold: Polarity | None, pred: Polarity | None, task: Task
) -> tuple[bool, bool]:
    """Map one (gold, predicted) label pair onto a task's binary pair."""
    if task is Task.MENTION_EXTRACTION:
        return (gold is not None, pred is not None)
    if task is Task.NEGATION:
        return (gold is Polarity.NEGATIVE, pred is Polarity.NEGATIVE)
    if task is Task.UNCERTAINTY:
        return (gold is Polarity.UNCERTAIN, pred is Polarity.UNCERTAIN)
    return (binarize(gold), binarize(pred))


@dataclass(frozen=True)
class ConfusionCounts:
    tp: int
    fp: int
    fn: int
    tn: int

    @property
    def total(self) -> int:
        return self.tp + self.fp + self.fn + self.tn

    @staticmethod
    def from_pairs(pairs: Iterable[tuple[bool, bool]]) -> "ConfusionCounts":
        tp = fp = fn = tn = 0
        for gold, pred in pairs:
            if gold and pred:
                tp += 1
            elif gold:
                fn += 1
            elif pred:
                fp += 1
            else:
                tn += 1
        return ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn)


@dataclass(frozen=True)
class ClassMetrics:
    """Point metrics for one class and task; ``None`` renders as "N/A"."""

    counts: ConfusionCounts
    f1: float | None
    precision: float | None
    recall: float | None
    sensitivity: float | None
    specificity: float | None
    #: metric name -> (low, high), present when bootstrapped and defined.
    cis: Mapping[str, tuple[float, float] | None] = field(default_factory=dict)
    #: metric name -> replicates skipped because the metric was undefined.
    skipped_replicates: Mapping[str, int] = field(default_factory=dict)

    def value(self, metric: str) -> float | None:
        return getattr(self, metric)


def _metrics_from_counts(c: ConfusionCounts) -> dict[str, float | None]:
    precision = c.tp / (c.tp + c.fp) if (c.tp + c.fp) > 0 else None
    recall = c.tp / (c.tp + c.fn) if (c.tp + c.fn) > 0 else None
    specificity = c.tn / (c.tn + c.fp) if (c.tn + c.fp) > 0 else None
    if precision is None or recall is None or (precision + recall) == 0:
        f1 = None
    else:
        f1 = 2 * precision * recall / (precision + recall)
    return {
        "f1": f1,
        "precision": precision,
        "recall": recall,
        "sensitivity": recall,
        "specificity": specificity,
    }


def compute_metrics(pairs: Iterable[tuple[bool, bool]]) -> ClassMetrics:
    """Point metrics from (gold, pred) binary pairs."""
    counts = ConfusionCounts.from_pairs(pairs)
    return ClassMetrics(counts=counts, **_metrics_from_counts(counts))


def percentile_pair(values: Sequence[float], low_q: float = 2.5, high_q: float = 97.5) -> tuple[float, float]:
    """Percentiles by the documented linear-interpolation rule, in float64."""
    ordered = sorted(float(v) for v in values)
    m = len(ordered)
    if m == 0:
        raise ValueError("no values to take percentiles of")

    def at(q: float) -> float:
        h = (m - 1) * (q / 100.0)
        lo = math.floor(h)
        if lo + 1 >= m:
            return ordered[m - 1]
        return ordered[lo] + (h - lo) * (ordered[lo + 1] - ordered[lo])

    return (at(low_q), at(high_q))


def _replicate_metric_values(
    counts: np.ndarray, metric: str
) -> tuple[list[float], int]:
    """Per-replicate metric values from (R, 4) category counts (tn,fp,fn,tp).

    Returns the defined values plus the count of skipped (undefined)
    replicates. Division happens on Python floats so results match a plain
    reimplementation of the documented formulas bit for bit.
    """
    values: list[float] = []
    skipped = 0
    for tn, fp, fn, tp in counts.tolist():
        derived = _metrics_from_counts(ConfusionCounts(tp=tp, fp=fp, fn=fn, tn=tn))
        value = derived[metric]
        if value is None:
            skipped += 1
        else:
            values.append(value)
    return values, skipped


def bootstrap_ci(
    pairs: Sequence[tuple[bool, bool]],
    metric: str,
    resamples: int = DEFAULT_RESAMPLES,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> tuple[float, float] | None:
    """95% bootstrap CI for one metric; ``None`` when every replicate is undefined."""
    if metric not in METRIC_NAMES:
        raise ValueError(f"unknown metric {metric!r}")
    if not pairs:
        raise DataError("bootstrap requires at least one report")
    gold = np.array([g for g, _ in pairs], dtype=np.uint8)
    pred = np.array([p for _, p in pairs], dtype=np.uint8)
    counts = resample_counts(gold, pred, seed=seed, resamples=resamples, workers=workers)
    values, _skipped = _replicate_metric_values(counts, metric)
    if not values:
        return None
    return percentile_pair(values)


def _bootstrap_all_metrics(
    pairs: Sequence[tuple[bool, bool]],
    resamples: int,
    seed: int,
    workers: int,
) -> tuple[dict[str, tuple[float, float] | None], dict[str, int]]:
    gold = np.array([g for g, _ in pairs], dtype=np.uint8)
    pred = np.array([p for _, p in pairs], dtype=np.uint8)
    counts = resample_counts(gold, pred, seed=seed, resamples=resamples, workers=workers)
    cis: dict[str, tuple[float, float] | None] = {}
    skipped: dict[str, int] = {}
    for metric in METRIC_NAMES:
        values, n_skipped = _replicate_metric_values(counts, metric)
        skipped[metric] = n_skipped
        cis[metric] = percentile_pair(values) if values else None
    return cis, skipped


#: One evaluation: class -> task -> ClassMetrics.
EvaluationResult = dict[ObservationClass, dict[Task, ClassMetrics]]


def evaluate(
    pred: Mapping[str, Mapping[ObservationClass, Polarity | None]],
    gold: Mapping[str, Mapping[ObservationClass, Polarity | None]],
    *,
    resamples: int | None = None,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> EvaluationResult:
    """Score predictions against gold annotations for all classes and tasks.

    Both tables are keyed by report_id and must cover the same reports;
    anything missing on either side is a data error. ``resamples`` enables
    bootstrap CIs.
    """
    missing_in_pred = sorted(set(gold) - set(pred))
    missing_in_gold = sorted(set(pred) - set(gold))
    if missing_in_pred or missing_in_gold:
        parts = []
        if missing_in_pred:
            parts.append(f"missing from predictions: {missing_in_pred[:5]}")
        if missing_in_gold:
            parts.append(f"missing from gold: {missing_in_gold[:5]}")
        raise DataError("report sets differ; " + "; ".join(parts))
    if not gold:
        raise DataError("no reports to evaluate")
    report_ids = sorted(gold)
    result: EvaluationResult = {}
    for cls in ALL_CLASSES:
        result[cls] = {}
        for task in Task:
            pairs = [
                reduce_task(gold[rid][cls], pred[rid][cls], task) for rid in report_ids
            ]
            metrics = compute_metrics(pairs)
            if resamples:
                cis, skipped = _bootstrap_all_metrics(pairs, resamples, seed, workers)
                metrics = ClassMetrics(
                    counts=metrics.counts,
                    f1=metrics.f1,
                    precision=metrics.precision,
                    recall=metrics.recall,
                    sensitivity=metrics.sensitivity,
                    specificity=metrics.specificity,
                    cis=cis,
                    skipped_replicates=skipped,
                )
            result[cls][task] = metrics
    return result


def result_to_json(result: EvaluationResult) -> dict:
    """Serialize as class -> task -> metric -> {value, ci}."""
    doc: dict = {}
    for cls, by_task in result.items():
        doc[cls.value] = {}
        for task, metrics in by_task.items():
            doc[cls.value][task.value] = {
                metric: {
                    "value": metrics.value(metric),
                    "ci": list(metrics.cis[metric]) if metrics.cis.get(metric) else None,
                }
                for metric in METRIC_NAMES
            }
    return doc
