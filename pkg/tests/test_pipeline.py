from dataclasses import replace
from datetime import date

import numpy as np
import pytest

from isacl_mfnn import pipeline
from isacl_mfnn.dataset import SeriesDataset
from isacl_mfnn.errors import CompatibilityError, InvalidArgumentError, ParseError
from isacl_mfnn.pipeline import RunConfig

FAST = dict(iters=20, pop_size=10)


def test_config_defaults_follow_the_protocol():
    cfg = RunConfig()
    assert (cfg.iters, cfg.pop_size, cfg.horizon_days) == (500, 10, 12)
    assert cfg.network.dim == 140
    assert cfg.bp_epochs == 5000
    with pytest.raises(InvalidArgumentError):
        RunConfig(algorithm="nope")


@pytest.mark.parametrize("algo", pipeline.ALGORITHMS)
def test_train_every_algorithm(logistic_series, algo):
    res = pipeline.train(logistic_series, RunConfig(algorithm=algo, seed=1, **FAST))
    expected_rows = res.model.config.bp_epochs if algo == "MFNN-BP" else 20
    assert res.best_per_iter.shape == (expected_rows,)
    assert np.all(np.diff(res.best_per_iter) <= 0)
    assert res.model.train_mse == pytest.approx(res.best_per_iter[-1])
    assert (len(res.train), len(res.test)) == (69, 4)


def test_model_record_round_trip(tmp_path, logistic_series):
    res = pipeline.train(logistic_series, RunConfig(seed=4, **FAST))
    path = tmp_path / "model.txt"
    pipeline.save_model(res.model, path)
    loaded = pipeline.load_model(path)
    np.testing.assert_array_equal(loaded.vector, res.model.vector)
    assert loaded.config == res.model.config
    assert loaded.scaler == res.model.scaler
    assert loaded.series_start == date(2020, 1, 22)
    assert loaded.created
    np.testing.assert_array_equal(loaded.predict_days([1, 50, 80]), res.model.predict_days([1, 50, 80]))


def test_model_record_with_ratio_split(tmp_path, logistic_series):
    cfg = RunConfig(split_ratio=0.75, split_date=None, algorithm="MFNN-BP", epochs=3, **FAST)
    res = pipeline.train(logistic_series, cfg)
    assert len(res.train) == 54
    path = tmp_path / "m.txt"
    pipeline.save_model(res.model, path, timestamp=False)
    assert pipeline.load_model(path).config == cfg


def test_load_model_rejects_garbage(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("hello\n")
    with pytest.raises(ParseError):
        pipeline.load_model(path)


def test_perfect_fit_scores_perfectly(logistic_series):
    model = pipeline.train(logistic_series, RunConfig(seed=0, **FAST)).model
    days = logistic_series.day_index
    preds = model.predict_days(days)
    perfect = SeriesDataset(logistic_series.dates, days, preds)
    # refit the target scale to the new data and compensate in the linear output layer
    new_max = float(preds[:69].max())
    n_out = model.spec.hidden2 * model.spec.n_outputs
    model.vector[-n_out:] *= model.scaler.target_max / new_max
    model.scaler = replace(model.scaler, target_max=new_max)
    np.testing.assert_allclose(model.predict_days(days), preds, rtol=1e-12)

    reports = pipeline.evaluate(model, perfect)
    for rep in reports.values():
        assert rep.rmse < 1e-9 * new_max
        assert rep.mape < 1e-12
        assert rep.r2 == pytest.approx(1.0, abs=1e-12)


def test_evaluate_detects_incompatible_data(logistic_series):
    res = pipeline.train(logistic_series, RunConfig(seed=0, **FAST))
    shifted = SeriesDataset.from_counts(date(2020, 2, 1), logistic_series.cumulative)
    with pytest.raises(CompatibilityError):
        pipeline.evaluate(res.model, shifted)
    doubled = SeriesDataset(logistic_series.dates, logistic_series.day_index, 2 * logistic_series.cumulative)
    with pytest.raises(CompatibilityError):
        pipeline.evaluate(res.model, doubled)


def test_forecast_dates(logistic_series):
    res = pipeline.train(logistic_series, RunConfig(seed=0, **FAST))
    rows = pipeline.forecast(res.model, 12)
    assert [d for d, _ in rows][0] == date(2020, 4, 4)
    assert [d for d, _ in rows][-1] == date(2020, 4, 15)
    assert all(np.isfinite(v) for _, v in rows)
    assert len(pipeline.forecast(res.model, 1)) == 1
    with pytest.raises(InvalidArgumentError):
        pipeline.forecast(res.model, 0)
