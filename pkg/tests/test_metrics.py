import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from isacl_mfnn import metrics
from isacl_mfnn.errors import DivisionGuardError, InvalidArgumentError, R2UndefinedError
from oracles import metrics_brute_force

values = st.lists(st.floats(1.0, 1e4), min_size=2, max_size=40)


def test_perfect_fit():
    rep = metrics.compute_metrics([3, 7, 11], [3, 7, 11])
    assert (rep.rmse, rep.mae, rep.mape, rep.rmsre, rep.r2) == (0, 0, 0, 0, 1)


def test_worked_example():
    rep = metrics.compute_metrics([1, 2, 3], [2, 2, 2])
    assert rep.rmse == pytest.approx(math.sqrt(2 / 3), abs=1e-12)
    assert rep.rmse == pytest.approx(0.816497, abs=1e-6)
    assert rep.mae == pytest.approx(2 / 3, abs=1e-12)
    assert rep.mape == pytest.approx(1 / 3, abs=1e-12)
    assert rep.rmsre == pytest.approx(math.sqrt(1 / 6), abs=1e-12)
    assert rep.rmsre == pytest.approx(0.408248, abs=1e-6)
    assert rep.r2 == pytest.approx(0.0, abs=1e-12)


def test_denominator_flag():
    rep = metrics.compute_metrics([1, 2, 4], [2, 2, 2], denominator="actual")
    assert rep.mape == pytest.approx((1 + 0 + 0.5) / 3)
    with pytest.raises(InvalidArgumentError):
        metrics.compute_metrics([1, 2], [1, 2], denominator="bogus")


def test_guards():
    with pytest.raises(DivisionGuardError, match="mape"):
        metrics.mape([1, 2, 3], [0, 2, 3])
    with pytest.raises(DivisionGuardError):
        metrics.compute_metrics([1, 2, 3], [0, 2, 3])
    with pytest.raises(R2UndefinedError):
        metrics.r2([5, 5, 5], [1, 2, 3])
    with pytest.raises(InvalidArgumentError):
        metrics.rmse([1], [1])
    with pytest.raises(InvalidArgumentError):
        metrics.rmse([1, 2], [1, 2, 3])


def test_six_significant_digits():
    rep = metrics.compute_metrics([1, 2, 3], [2, 2, 2])
    f = rep.formatted()
    assert f["rmse"] == "0.816497"
    assert f["rmsre"] == "0.408248"
    assert metrics.format_sig(151887.93) == "151888"


@settings(max_examples=200)
@given(data=st.data())
def test_matches_brute_force(data):
    a = data.draw(values)
    m = data.draw(st.lists(st.floats(1.0, 1e4), min_size=len(a), max_size=len(a)))
    assume(np.ptp(a) > 1e-3)
    rep = metrics.compute_metrics(a, m).as_dict()
    ref = metrics_brute_force(a, m)
    for k in metrics.FIELDS:
        assert rep[k] == pytest.approx(ref[k], rel=1e-9, abs=1e-9)


@settings(max_examples=100)
@given(data=st.data(), c=st.floats(0.1, 100), shift=st.floats(-50, 50))
def test_invariances(data, c, shift):
    a = np.array(data.draw(values))
    m = np.array(data.draw(st.lists(st.floats(1.0, 1e4), min_size=len(a), max_size=len(a))))
    assume(np.ptp(a) > 1e-3)
    base = metrics.compute_metrics(a, m)
    assert base.rmse >= base.mae - 1e-12

    perm = np.random.default_rng(len(a)).permutation(len(a))
    shuffled = metrics.compute_metrics(a[perm], m[perm])
    for k in ("rmse", "mae", "mape", "rmsre"):
        assert getattr(shuffled, k) == pytest.approx(getattr(base, k), rel=1e-12)

    scaled = metrics.compute_metrics(c * a, c * m)
    assert scaled.rmse == pytest.approx(c * base.rmse, rel=1e-9)
    assert scaled.mae == pytest.approx(c * base.mae, rel=1e-9)
    assert metrics.r2(c * a + shift, c * m + shift) == pytest.approx(base.r2, rel=1e-6, abs=1e-9)
