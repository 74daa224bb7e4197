import pytest
from hypothesis import given, strategies as st

from mlndecouple import compare_sets, summarize
from mlndecouple.metrics import SetComparison

ids = st.frozensets(st.integers(0, 40), max_size=20)


def test_subset_estimate():
    c = compare_sets({0, 1}, {0, 1, 2})
    assert c.jaccard == pytest.approx(2 / 3)
    assert c.precision == 1.0 and c.recall == pytest.approx(2 / 3)
    assert (c.tp, c.fp, c.fn) == (2, 0, 1)


def test_identity_and_disjoint():
    c = compare_sets([3, 4, 5], [5, 4, 3])
    assert (c.jaccard, c.precision, c.recall) == (1.0, 1.0, 1.0)
    c = compare_sets({0}, {1})
    assert (c.jaccard, c.precision, c.recall) == (0.0, 0.0, 0.0)


def test_empty_conventions():
    assert compare_sets([], []) == SetComparison(1.0, 1.0, 1.0, 0, 0, 0)
    c = compare_sets([], [1, 2])
    assert (c.jaccard, c.precision, c.recall) == (0.0, 0.0, 0.0)
    c = compare_sets([1], [])
    assert (c.precision, c.recall) == (0.0, 0.0)


@given(ids, ids)
def test_properties(a, b):
    c = compare_sets(a, b)
    assert c.jaccard == compare_sets(b, a).jaccard
    for v in (c.jaccard, c.precision, c.recall):
        assert 0.0 <= v <= 1.0
    if c.precision == 1.0:
        assert c.jaccard == pytest.approx(c.recall)
    if c.recall == 1.0:
        assert c.jaccard == pytest.approx(c.precision)
    if a or b:
        assert c.jaccard == len(a & b) / len(a | b)


def _row(j):
    return SetComparison(j, j, j, 0, 0, 0)


def test_summarize_mean_and_gain():
    s = summarize([_row(1.0), _row(0.5)])
    assert s.count == 2 and s.jaccard == 0.75 and s.gain is None
    s = summarize([_row(0.9)], baseline=[_row(0.45)])
    assert s.gain == pytest.approx(1.0)


def test_summarize_skips_zero_baseline():
    s = summarize([_row(0.5), _row(0.6)], baseline=[_row(0.0), _row(0.3)])
    assert s.gain == pytest.approx(1.0)
    assert summarize([_row(0.5)], baseline=[_row(0.0)]).gain is None


def test_summarize_errors():
    with pytest.raises(ValueError, match="empty"):
        summarize([])
    with pytest.raises(ValueError):
        summarize([_row(1.0)], baseline=[])
