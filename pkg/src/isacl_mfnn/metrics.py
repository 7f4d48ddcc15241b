"""Forecast error indices: RMSE, MAE, MAPE, RMSRE and R^2.

MAPE and RMSRE are relative to the *model* values by default; pass
``denominator="actual"`` for the conventional form.  R^2 uses the mean of the
actual series.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import DivisionGuardError, InvalidArgumentError, R2UndefinedError

FIELDS = ("rmse", "mae", "mape", "rmsre", "r2")


@dataclass(frozen=True)
class MetricsReport:
    rmse: float
    mae: float
    mape: float
    rmsre: float
    r2: float

    def as_dict(self) -> dict[str, float]:
        return asdict(self)

    def formatted(self, digits: int = 6) -> dict[str, str]:
        return {k: format_sig(v, digits) for k, v in self.as_dict().items()}


def format_sig(value: float, digits: int = 6) -> str:
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return "nan"
    return f"{value:.{digits}g}"


def rmse(actual, model) -> float:
    a, m = _pair(actual, model)
    return float(np.sqrt(np.mean((a - m) ** 2)))


def mae(actual, model) -> float:
    a, m = _pair(actual, model)
    return float(np.mean(np.abs(a - m)))


def _relative(actual, model, denominator, index):
    a, m = _pair(actual, model)
    if denominator not in ("model", "actual"):
        raise InvalidArgumentError(f"denominator must be 'model' or 'actual', got {denominator!r}")
    base = m if denominator == "model" else a
    if np.any(base == 0):
        raise DivisionGuardError(index)
    return (a - m) / base


def mape(actual, model, denominator: str = "model") -> float:
    return float(np.mean(np.abs(_relative(actual, model, denominator, "mape"))))


def rmsre(actual, model, denominator: str = "model") -> float:
    return float(np.sqrt(np.mean(_relative(actual, model, denominator, "rmsre") ** 2)))


def r2(actual, model) -> float:
    a, m = _pair(actual, model)
    total = np.sum((a - a.mean()) ** 2)
    if total == 0:
        raise R2UndefinedError("r2 is undefined for a constant actual series")
    return float(1.0 - np.sum((a - m) ** 2) / total)


def compute_metrics(actual, model, denominator: str = "model") -> MetricsReport:
    return MetricsReport(
        rmse=rmse(actual, model),
        mae=mae(actual, model),
        mape=mape(actual, model, denominator),
        rmsre=rmsre(actual, model, denominator),
        r2=r2(actual, model),
    )


def _pair(actual, model):
    a = np.asarray(actual, dtype=float).ravel()
    m = np.asarray(model, dtype=float).ravel()
    if a.shape != m.shape:
        raise InvalidArgumentError(f"length mismatch: {a.size} actual vs {m.size} model values")
    if a.size < 2:
        raise InvalidArgumentError("need at least two points")
    return a, m
