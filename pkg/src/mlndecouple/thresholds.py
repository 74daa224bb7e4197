"""Exact "at or above the mean" selection.

Hub and CC-node membership is decided by comparing each value against the
arithmetic mean. Floating point can flip ties (a regular graph must make
every vertex a hub), so comparisons here are exact.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

# relative band inside which a float comparison is not trusted
_AMBIGUOUS = 1e-9


def at_least_mean(values: np.ndarray) -> np.ndarray:
    """Mask of integer values ``v`` with ``v >= mean(values)``.

    Done by cross-multiplication: ``n * v >= sum``.
    """
    values = np.asarray(values, dtype=np.int64)
    n = values.shape[0]
    if n == 0:
        return np.zeros(0, dtype=bool)
    total = int(values.sum())
    return values * n >= total


def exact_mean(num: np.ndarray, den: np.ndarray) -> Fraction:
    pairs, counts = np.unique(np.column_stack((num, den)), axis=0, return_counts=True)
    total = sum(
        (Fraction(int(a), int(b)) * int(c) for (a, b), c in zip(pairs, counts)),
        Fraction(0),
    )
    return total / len(num)


def at_least_mean_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    """Mask of rationals ``num/den`` that are ``>=`` their mean.

    A float pass settles everything outside a narrow band around the mean;
    the entries inside the band are re-decided with exact fractions.
    """
    num = np.asarray(num, dtype=np.int64)
    den = np.asarray(den, dtype=np.int64)
    n = num.shape[0]
    if n == 0:
        return np.zeros(0, dtype=bool)
    if np.any(den <= 0):
        raise ValueError("denominators must be positive")
    vals = num / den
    mean = math.fsum(vals) / n
    mask = vals >= mean
    band = np.abs(vals - mean) <= _AMBIGUOUS * max(abs(mean), 1e-300)
    if band.any():
        m = exact_mean(num, den)
        for i in np.flatnonzero(band):
            mask[i] = Fraction(int(num[i]), int(den[i])) >= m
    return mask
