"""Two-hidden-layer feed-forward network with sigmoid hidden units and a linear output.

Hidden units compute ``sigmoid(W x - b)``: the bias is subtracted.  The
output layer has no bias.  Flat parameter vectors use the layout
``[w1 row-major, b1, w2 row-major, b2, w_out row-major]``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import InvalidArgumentError, TrainingError


@dataclass(frozen=True)
class NetworkSpec:
    n_inputs: int = 1
    hidden1: int = 10
    hidden2: int = 10
    n_outputs: int = 1

    def __post_init__(self):
        for name in ("n_inputs", "hidden1", "hidden2", "n_outputs"):
            if getattr(self, name) < 1:
                raise InvalidArgumentError(f"{name} must be >= 1")

    @property
    def shapes(self) -> list[tuple[int, ...]]:
        n, N, M, H = self.n_inputs, self.hidden1, self.hidden2, self.n_outputs
        return [(N, n), (N,), (M, N), (M,), (H, M)]

    @property
    def dim(self) -> int:
        return sum(int(np.prod(s)) for s in self.shapes)


@dataclass
class NetworkParams:
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray
    w_out: np.ndarray

    @property
    def spec(self) -> NetworkSpec:
        return NetworkSpec(self.w1.shape[1], self.w1.shape[0], self.w2.shape[0], self.w_out.shape[0])

    def arrays(self):
        return [self.w1, self.b1, self.w2, self.b2, self.w_out]

    def __eq__(self, other):
        if not isinstance(other, NetworkParams):
            return NotImplemented
        return all(np.array_equal(a, b) for a, b in zip(self.arrays(), other.arrays()))


def encode(params: NetworkParams) -> np.ndarray:
    return np.concatenate([np.asarray(a, dtype=float).ravel() for a in params.arrays()])


def decode(vector, spec: NetworkSpec) -> NetworkParams:
    """Split a flat vector into layer arrays (views, no copy)."""
    vector = np.asarray(vector, dtype=float)
    if vector.ndim != 1 or vector.size != spec.dim:
        raise InvalidArgumentError(f"expected a vector of length {spec.dim}, got shape {vector.shape}")
    parts = []
    offset = 0
    for shape in spec.shapes:
        size = int(np.prod(shape))
        parts.append(vector[offset:offset + size].reshape(shape))
        offset += size
    return NetworkParams(*parts)


def random_params(spec: NetworkSpec, rng: np.random.Generator, low=-0.5, high=0.5) -> NetworkParams:
    return decode(rng.uniform(low, high, spec.dim), spec)


def _as_batch(x, n_inputs):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1 and n_inputs == 1:
        return x.reshape(-1, 1)
    return np.atleast_2d(x)


def _activations(params: NetworkParams, X: np.ndarray):
    y = expit(X @ params.w1.T - params.b1)
    theta = expit(y @ params.w2.T - params.b2)
    return y, theta, theta @ params.w_out.T


def forward(params: NetworkParams, x) -> np.ndarray:
    """Output for one input vector of length ``n`` (shape ``(H,)``) or a batch ``(S, n)``."""
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        if x.size != params.w1.shape[1]:
            raise InvalidArgumentError(f"expected {params.w1.shape[1]} inputs, got {x.size}")
        return _activations(params, x.reshape(1, -1))[2][0]
    return _activations(params, x)[2]


def predict(params: NetworkParams, inputs) -> np.ndarray:
    """Batch outputs; for single-input, single-output nets a 1-D array maps to a 1-D array."""
    X = _as_batch(inputs, params.w1.shape[1])
    out = _activations(params, X)[2]
    return out[:, 0] if out.shape[1] == 1 and np.ndim(inputs) == 1 else out


def hidden_activations(params: NetworkParams, x):
    y, theta, _ = _activations(params, _as_batch(x, params.w1.shape[1]))
    return y, theta


def _targets(targets, n_samples):
    t = np.asarray(targets, dtype=float)
    return t.reshape(n_samples, -1)


def mse(params: NetworkParams, inputs, targets) -> float:
    X = _as_batch(inputs, params.w1.shape[1])
    if X.shape[0] == 0:
        raise InvalidArgumentError("dataset is empty")
    out = _activations(params, X)[2]
    residual = _targets(targets, X.shape[0]) - out
    return float(np.sum(residual**2) / X.shape[0])


def mse_fitness(vector, spec: NetworkSpec, inputs, targets) -> float:
    """Mean squared training error of the network encoded by ``vector``."""
    return mse(decode(vector, spec), inputs, targets)


class MseObjective:
    """Picklable ``vector -> mse`` callable bound to one training set."""

    def __init__(self, spec: NetworkSpec, inputs, targets):
        self.spec = spec
        self.inputs = _as_batch(inputs, spec.n_inputs)
        if self.inputs.shape[0] == 0:
            raise InvalidArgumentError("dataset is empty")
        self.targets = _targets(targets, self.inputs.shape[0])

    def __call__(self, vector) -> float:
        return mse(decode(vector, self.spec), self.inputs, self.targets)


def mse_gradient(vector, spec: NetworkSpec, inputs, targets) -> tuple[float, np.ndarray]:
    """Loss and its gradient with respect to the flat parameter vector."""
    p = decode(vector, spec)
    X = _as_batch(inputs, spec.n_inputs)
    S = X.shape[0]
    if S == 0:
        raise InvalidArgumentError("dataset is empty")
    y, theta, out = _activations(p, X)
    residual = _targets(targets, S) - out
    with np.errstate(over="ignore", invalid="ignore"):
        loss = float(np.sum(residual**2) / S)

    d_out = -2.0 * residual / S
    g_wout = d_out.T @ theta
    d_z2 = (d_out @ p.w_out) * theta * (1.0 - theta)
    g_w2 = d_z2.T @ y
    g_b2 = -d_z2.sum(axis=0)
    d_z1 = (d_z2 @ p.w2) * y * (1.0 - y)
    g_w1 = d_z1.T @ X
    g_b1 = -d_z1.sum(axis=0)
    return loss, encode(NetworkParams(g_w1, g_b1, g_w2, g_b2, g_wout))


def bp_train(spec: NetworkSpec, inputs, targets, learning_rate: float, epochs: int, seed=None,
             init=None, history: list | None = None) -> NetworkParams:
    """Full-batch gradient descent on the mean squared error.

    Weights start uniform in [-0.5, 0.5] unless ``init`` (a flat vector) is
    given.  When ``history`` is a list, the loss before each update is
    appended to it.
    """
    if not learning_rate >= 0.0:
        raise InvalidArgumentError("learning_rate must be non-negative")
    if epochs < 1:
        raise InvalidArgumentError("epochs must be >= 1")
    rng = np.random.default_rng(seed)
    vector = rng.uniform(-0.5, 0.5, spec.dim) if init is None else np.array(init, dtype=float)
    for epoch in range(1, epochs + 1):
        loss, grad = mse_gradient(vector, spec, inputs, targets)
        if not np.isfinite(loss):
            raise TrainingError(epoch, loss)
        if history is not None:
            history.append(loss)
        vector = vector - learning_rate * grad
    final = mse_fitness(vector, spec, inputs, targets)
    if not np.isfinite(final):
        raise TrainingError(epochs, final)
    return decode(vector, spec)
