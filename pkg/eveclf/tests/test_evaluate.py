"""Scoring arithmetic and the CSV surfaces other tools consume."""

import csv

import numpy as np
import pytest

from eveclf.evaluate import (
    tally,
    wilson_interval,
    write_confusion_csv,
    write_curve_csv,
    write_per_class_csv,
)

CLASSES = ("a", "b", "c")
GRID = (0.0, 20.0)


def _crafted(with_probabilities=False):
    """Hand-checkable decisions: class 0 perfect, class 1 perfect only at
    the high point, class 2 always called class 0."""
    true, pts, pred = [], [], []
    for cls in range(3):
        for pt in range(2):
            for _ in range(4):
                true.append(cls)
                pts.append(pt)
                if cls == 0:
                    pred.append(0)
                elif cls == 1:
                    pred.append(1 if pt == 1 else 2)
                else:
                    pred.append(0)
    pred = np.array(pred)
    proba = None
    if with_probabilities:
        # barely-confident rows: 0.4 on the decision, 0.3 elsewhere
        proba = np.full((len(pred), 3), 0.3)
        proba[np.arange(len(pred)), pred] = 0.4
    return tally(np.array(true), np.array(pts), pred, CLASSES, GRID, proba)


def test_per_class_table():
    ev = _crafted()
    np.testing.assert_array_equal(ev.per_class, [[1, 1], [0, 1], [0, 0]])
    np.testing.assert_array_equal(ev.trials, np.full((3, 2), 4))


def test_sca_is_class_average():
    ev = _crafted()
    np.testing.assert_allclose(ev.sca, [1 / 3, 2 / 3])


def test_confusion_rows_are_distributions():
    ev = _crafted()
    np.testing.assert_allclose(ev.confusion.sum(axis=1), 1.0)
    np.testing.assert_allclose(ev.confusion[0], [1, 0, 0])
    np.testing.assert_allclose(ev.confusion[1], [0, 0.5, 0.5])
    np.testing.assert_allclose(ev.confusion[2], [1, 0, 0])


def test_sca_interval_contains_the_estimate():
    ev = _crafted()
    for p in range(2):
        lo, hi = ev.sca_interval(p)
        assert 0.0 <= lo <= ev.sca[p] <= hi <= 1.0


def test_soft_confusion_averages_assigned_mass():
    ev = _crafted(with_probabilities=True)
    # each row mixes the 0.4/0.3/0.3 vectors in the hard-decision ratios
    np.testing.assert_allclose(ev.soft_confusion[0], [0.4, 0.3, 0.3])
    np.testing.assert_allclose(ev.soft_confusion[1], [0.3, 0.35, 0.35])
    np.testing.assert_allclose(ev.soft_confusion[2], [0.4, 0.3, 0.3])
    np.testing.assert_allclose(ev.soft_confusion.sum(axis=1), 1.0)


def test_soft_confusion_absent_without_probabilities():
    assert _crafted().soft_confusion is None
    with pytest.raises(ValueError, match="assigned-mass"):
        write_confusion_csv("/dev/null", _crafted(), soft=True)


def test_indifferent_probabilities_yield_uniform_soft_rows():
    # a collapsed model: argmax always lands on class 0, yet the mass it
    # actually assigns is one-third everywhere -- the two matrices must
    # disagree in exactly that way
    n = 30
    true = np.repeat([0, 1, 2], n // 3)
    proba = np.full((n, 3), 1 / 3) + np.array([1e-9, 0, 0])
    ev = tally(true, np.zeros(n, int), proba.argmax(1), CLASSES, GRID, proba)
    np.testing.assert_allclose(ev.confusion[:, 0], 1.0)
    np.testing.assert_allclose(ev.soft_confusion, 1 / 3, atol=1e-6)


class TestWilson:
    def test_degenerate_counts(self):
        assert wilson_interval(0, 50)[0] == 0.0
        assert wilson_interval(50, 50)[1] == 1.0
        assert wilson_interval(0, 0) == (0.0, 1.0)

    def test_contains_point_estimate(self):
        for s, n in [(1, 7), (3, 9), (250, 251), (499, 500)]:
            lo, hi = wilson_interval(s, n)
            assert lo <= s / n <= hi

    def test_narrows_with_trials(self):
        small = wilson_interval(5, 10)
        large = wilson_interval(500, 1000)
        assert large[1] - large[0] < small[1] - small[0]


def test_curve_csv_schema(tmp_path):
    path = tmp_path / "sca.csv"
    write_curve_csv(path, _crafted())
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["es_n0_db", "value", "ci_low", "ci_high"]
    assert len(rows) == 1 + len(GRID)
    for row in rows[1:]:
        es, value, lo, hi = map(float, row)
        assert es in GRID
        assert 0.0 <= lo <= value <= hi <= 1.0


@pytest.mark.parametrize("soft", [False, True])
def test_confusion_csv_schema(tmp_path, soft):
    path = tmp_path / "confusion.csv"
    write_confusion_csv(path, _crafted(with_probabilities=True), soft=soft)
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["true", *CLASSES]
    assert [r[0] for r in rows[1:]] == list(CLASSES)
    matrix = np.array([[float(v) for v in r[1:]] for r in rows[1:]])
    np.testing.assert_allclose(matrix.sum(axis=1), 1.0, atol=1e-5)


def test_per_class_csv(tmp_path):
    path = tmp_path / "per-class.csv"
    write_per_class_csv(path, _crafted())
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == ["es_n0_db", *CLASSES]
    assert float(rows[1][1]) == 1.0  # class a at 0 dB
    assert float(rows[2][2]) == 1.0  # class b at 20 dB


def test_empty_cells_are_nan_not_crash():
    ev = tally(np.array([0]), np.array([0]), np.array([0]), CLASSES, GRID)
    table = ev.per_class
    assert table[0, 0] == 1.0
    assert np.isnan(table[1, 1])
