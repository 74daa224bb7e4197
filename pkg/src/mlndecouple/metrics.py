"""Set agreement between an estimated vertex set and the ground truth."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


@dataclass(frozen=True)
class SetComparison:
    """Jaccard, precision and recall with their raw counts.

    Two empty sets agree perfectly (all three are 1.0). Any other 0/0
    ratio, e.g. precision of an empty estimate, is 0.0 so that returning
    nothing is never rewarded.
    """

    jaccard: float
    precision: float
    recall: float
    tp: int
    fp: int
    fn: int


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _ids(s) -> np.ndarray:
    if isinstance(s, (set, frozenset)):
        s = list(s)
    return np.unique(np.asarray(s, dtype=np.int64).ravel())


def compare_sets(estimated: Iterable[int], truth: Iterable[int]) -> SetComparison:
    est, tru = _ids(estimated), _ids(truth)
    tp = int(np.intersect1d(est, tru, assume_unique=True).shape[0])
    fp = int(est.shape[0]) - tp
    fn = int(tru.shape[0]) - tp
    if tp + fp + fn == 0:
        return SetComparison(1.0, 1.0, 1.0, 0, 0, 0)
    return SetComparison(
        jaccard=tp / (tp + fp + fn),
        precision=_ratio(tp, tp + fp),
        recall=_ratio(tp, tp + fn),
        tp=tp,
        fp=fp,
        fn=fn,
    )


@dataclass(frozen=True)
class SuiteSummary:
    count: int
    jaccard: float
    precision: float
    recall: float
    gain: float | None = None  # mean relative change vs the baseline, as a fraction


def summarize(
    rows: Sequence[SetComparison],
    baseline: Sequence[SetComparison] | None = None,
    metric: str = "jaccard",
) -> SuiteSummary:
    """Mean metrics over a suite; ``gain`` is ``mean((h - b) / b)`` over paired rows.

    Pairs whose baseline value is 0 carry no relative gain and are skipped.
    """
    if not rows:
        raise ValueError("cannot summarize an empty list of comparisons")
    gain = None
    if baseline is not None:
        if len(baseline) != len(rows):
            raise ValueError(f"baseline has {len(baseline)} rows, expected {len(rows)}")
        pairs = [
            (getattr(h, metric), getattr(b, metric))
            for h, b in zip(rows, baseline)
            if getattr(b, metric) != 0
        ]
        gain = float(np.mean([(h - b) / b for h, b in pairs])) if pairs else None
    return SuiteSummary(
        count=len(rows),
        jaccard=float(np.mean([r.jaccard for r in rows])),
        precision=float(np.mean([r.precision for r in rows])),
        recall=float(np.mean([r.recall for r in rows])),
        gain=gain,
    )
