"""Training, evaluation and forecasting of a network on one series.

Also defines the model record: a versioned ``key=value`` text header
followed by the flat parameter vector, one value per line.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

import numpy as np

from . import baselines, core, isa, isacl, metrics
from .dataset import DEFAULT_HORIZON, Scaler, SeriesDataset, fit_scaler, split
from .errors import CompatibilityError, InvalidArgumentError, ParseError
from .mfnn import MseObjective, NetworkSpec, bp_train, decode, encode, predict

ALGORITHMS = ("MFNN-BP", "GA", "PSO", "GWO", "SCA", "ISA", "ISACL")
DEFAULT_SPLIT_DATE = "2020-03-30"
MODEL_FORMAT = "isacl-mfnn-model"
MODEL_VERSION = 1


@dataclass(frozen=True)
class RunConfig:
    algorithm: str = "ISACL"
    iters: int = core.DEFAULT_ITERS
    pop_size: int = core.DEFAULT_POP_SIZE
    seed: int = 0
    hidden1: int = 10
    hidden2: int = 10
    bounds: tuple[float, float] = (-10.0, 10.0)
    split_date: str | None = DEFAULT_SPLIT_DATE
    split_ratio: float | None = None
    horizon_days: int = DEFAULT_HORIZON
    mape_denominator: str = "model"
    learning_rate: float = 0.5
    epochs: int | None = None
    n_maps: int = 10
    cl_inner_iters: int = 1

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise InvalidArgumentError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if self.iters < 1 or self.pop_size < 2:
            raise InvalidArgumentError("iters must be >= 1 and pop_size >= 2")
        if not self.bounds[0] < self.bounds[1]:
            raise InvalidArgumentError("bounds must satisfy low < high")
        if self.horizon_days < 1:
            raise InvalidArgumentError("horizon_days must be >= 1")
        if self.mape_denominator not in ("model", "actual"):
            raise InvalidArgumentError("mape_denominator must be 'model' or 'actual'")

    @property
    def network(self) -> NetworkSpec:
        return NetworkSpec(1, self.hidden1, self.hidden2, 1)

    @property
    def bp_epochs(self) -> int:
        # Same evaluation budget as a population run unless set explicitly.
        return self.epochs if self.epochs is not None else self.iters * self.pop_size

    def split(self, ds: SeriesDataset):
        if self.split_ratio is not None:
            return split(ds, ratio=self.split_ratio)
        return split(ds, split_date=date.fromisoformat(self.split_date))


def make_optimizer(cfg: RunConfig):
    name = cfg.algorithm
    if name == "ISA":
        return isa.ISA()
    if name == "ISACL":
        return isacl.ISACL(isacl.IsaclConfig(n_maps=cfg.n_maps, cl_inner_iters=cfg.cl_inner_iters))
    if name == "PSO":
        return baselines.PSO()
    if name == "GA":
        return baselines.GA()
    if name == "GWO":
        return baselines.GWO()
    if name == "SCA":
        return baselines.SCA()
    raise InvalidArgumentError(f"{name} is not a population optimizer")


@dataclass
class Model:
    config: RunConfig
    vector: np.ndarray
    scaler: Scaler
    series_start: date
    series_days: int
    train_days: int
    train_mse: float
    created: str = ""

    @property
    def spec(self) -> NetworkSpec:
        return self.config.network

    @property
    def params(self):
        return decode(self.vector, self.spec)

    def predict_days(self, days) -> np.ndarray:
        scaled = predict(self.params, self.scaler.scale_input(np.asarray(days)))
        return self.scaler.unscale_target(scaled)

    def date_of(self, day: int) -> date:
        return self.series_start + timedelta(days=int(day) - 1)


@dataclass
class TrainResult:
    model: Model
    best_per_iter: np.ndarray
    eval_count: int
    train: SeriesDataset
    test: SeriesDataset
    extra: dict = field(default_factory=dict)


def best_so_far(values) -> np.ndarray:
    return np.minimum.accumulate(np.asarray(values, dtype=float))


def train(ds: SeriesDataset, cfg: RunConfig) -> TrainResult:
    train_ds, test_ds = cfg.split(ds)
    scaler = fit_scaler(train_ds, cfg.horizon_days, series_days=len(ds))
    inputs, targets = scaler.apply(train_ds)
    objective = MseObjective(cfg.network, inputs, targets)

    if cfg.algorithm == "MFNN-BP":
        history: list[float] = []
        params = bp_train(cfg.network, inputs, targets, cfg.learning_rate, cfg.bp_epochs,
                          seed=cfg.seed, history=history)
        vector = encode(params)
        final = objective(vector)
        trace = best_so_far(history[1:] + [final])
        evals = cfg.bp_epochs + 1
    else:
        space = core.SearchSpace.uniform(cfg.network.dim, *cfg.bounds)
        result = core.run(make_optimizer(cfg), space, objective, pop_size=cfg.pop_size,
                          iters=cfg.iters, seed=cfg.seed)
        vector = result.final_best.position
        final = result.final_best.fitness
        trace = result.best_per_iter
        evals = result.eval_count

    model = Model(cfg, np.array(vector, dtype=float), scaler, ds.start, len(ds), len(train_ds),
                  float(final))
    return TrainResult(model, trace, evals, train_ds, test_ds)


def evaluate(model: Model, ds: SeriesDataset) -> dict[str, metrics.MetricsReport]:
    """Metrics on the train and test halves of ``ds`` in original units."""
    check_compatible(model, ds)
    train_ds, test_ds = model.config.split(ds)
    out = {}
    for name, part in (("train", train_ds), ("test", test_ds)):
        out[name] = metrics.compute_metrics(part.cumulative, model.predict_days(part.day_index),
                                            model.config.mape_denominator)
    return out


def check_compatible(model: Model, ds: SeriesDataset) -> None:
    if ds.start != model.series_start:
        raise CompatibilityError(f"series starts {ds.start} but the model was trained on a series "
                                 f"starting {model.series_start}")
    train_ds, _ = model.config.split(ds)
    refit = fit_scaler(train_ds, model.config.horizon_days, series_days=len(ds))
    if refit != model.scaler:
        raise CompatibilityError(f"scaler mismatch: data gives {refit}, model stores {model.scaler}")


def forecast(model: Model, horizon_days: int) -> list[tuple[date, float]]:
    if horizon_days <= 0:
        raise InvalidArgumentError(f"horizon must be positive, got {horizon_days}")
    days = np.arange(model.series_days + 1, model.series_days + horizon_days + 1)
    values = model.predict_days(days)
    return [(model.date_of(d), float(v)) for d, v in zip(days, values)]


# --- model record ------------------------------------------------------------

_CONFIG_FIELDS = {f: type(v) for f, v in asdict(RunConfig()).items()}


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, (tuple, list)):
        return ",".join(_fmt(v) for v in value)
    return str(value)


def save_model(model: Model, path, timestamp: bool = True) -> None:
    lines = [f"# {MODEL_FORMAT} v{MODEL_VERSION}"]
    if timestamp:
        stamp = model.created or datetime.now(timezone.utc).isoformat(timespec="seconds")
        lines.append(f"# created: {stamp}")
    header = {
        "format": MODEL_FORMAT,
        "version": MODEL_VERSION,
        "n_inputs": model.spec.n_inputs,
        "n_outputs": model.spec.n_outputs,
        "input_max": model.scaler.input_max,
        "target_max": model.scaler.target_max,
        "series_start": model.series_start.isoformat(),
        "series_days": model.series_days,
        "train_days": model.train_days,
        "train_mse": model.train_mse,
    }
    header.update({f"config.{k}": v for k, v in asdict(model.config).items()})
    lines.extend(f"{k}={_fmt(v)}" for k, v in header.items())
    lines.append(f"params={model.vector.size}")
    lines.extend(repr(float(v)) for v in model.vector)
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _parse_config_value(key: str, text: str):
    kind = _CONFIG_FIELDS[key]
    if key == "bounds":
        low, high = text.split(",")
        return (float(low), float(high))
    if text == "":
        return None
    if key in ("split_ratio", "learning_rate"):
        return float(text)
    if key == "epochs":
        return int(text)
    return kind(text)


def load_model(path) -> Model:
    text = Path(path).read_text(encoding="utf-8").splitlines()
    header: dict[str, str] = {}
    created = ""
    i = 0
    while i < len(text):
        line = text[i]
        i += 1
        if line.startswith("# created:"):
            created = line.split(":", 1)[1].strip()
            continue
        if line.startswith("#") or not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParseError(f"expected key=value, got {line!r}", line=i)
        header[key] = value
        if key == "params":
            break
    if header.get("format") != MODEL_FORMAT:
        raise ParseError(f"not a {MODEL_FORMAT} record")
    if int(header.get("version", -1)) != MODEL_VERSION:
        raise ParseError(f"unsupported model version {header.get('version')}")
    try:
        n = int(header["params"])
        vector = np.array([float(v) for v in text[i:i + n]])
        config = RunConfig(**{k[7:]: _parse_config_value(k[7:], v)
                              for k, v in header.items() if k.startswith("config.")})
        model = Model(
            config=config,
            vector=vector,
            scaler=Scaler(float(header["input_max"]), float(header["target_max"])),
            series_start=date.fromisoformat(header["series_start"]),
            series_days=int(header["series_days"]),
            train_days=int(header["train_days"]),
            train_mse=float(header["train_mse"]),
            created=created,
        )
    except (KeyError, ValueError) as exc:
        raise ParseError(f"malformed model record: {exc}") from None
    if vector.size != n or n != config.network.dim:
        raise ParseError(f"expected {config.network.dim} parameters, found {vector.size}")
    return model
