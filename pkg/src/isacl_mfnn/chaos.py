"""Chaotic maps on the open unit interval and the row-wise chaos matrix.

Each row of a :class:`ChaosState` follows its own one-dimensional map.  Maps
that are naturally defined on ``[-1, 1]`` (Chebyshev, iterative) are
conjugated onto ``(0, 1)`` through ``u = 2x - 1`` so every state lives in the
same interval.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import InvalidArgumentError

EPS = 1e-12

# Number of forward iterates inspected when screening a seed value.
_SCREEN_STEPS = 8
_FIXED_TOL = 1e-10


def logistic(x):
    return 4.0 * x * (1.0 - x)


def sine(x):
    return np.sin(np.pi * x)


def tent(x):
    return np.where(x < 0.7, x / 0.7, (10.0 / 3.0) * (1.0 - x))


def chebyshev(x):
    # (cos(4 arccos u) + 1) / 2 with u = 2x - 1, expanded as a polynomial.
    return (8.0 * x * (x - 1.0) + 1.0) ** 2


def circle(x):
    return np.mod(x + 0.2 - (0.5 / (2.0 * np.pi)) * np.sin(2.0 * np.pi * x), 1.0)


def _safe_reciprocal(numerator, x):
    # Zero wherever x is zero, so both maps below send 0 to 0.
    x = np.asarray(x, dtype=float)
    return np.divide(numerator, x, out=np.zeros(x.shape), where=x != 0.0)


def gauss(x):
    return np.mod(_safe_reciprocal(1.0, x), 1.0)


def iterative(x):
    return 0.5 * (np.sin(_safe_reciprocal(0.7 * np.pi, 2.0 * x - 1.0)) + 1.0)


def piecewise(x, p=0.4):
    # The map is symmetric about 1/2.
    y = np.minimum(x, 1.0 - x)
    return np.where(y < p, y / p, (y - p) / (0.5 - p))


_SINGER = (7.86, -23.31, 28.75, -13.302875)


def singer(x, mu=1.07):
    a, b, c, d = (mu * v for v in _SINGER)
    return x * (a + x * (b + x * (c + d * x)))


def sinusoidal(x, a=2.3):
    return a * (x * x) * np.sin(np.pi * x)


MAPS: dict[str, Callable] = {
    "logistic": logistic,
    "sine": sine,
    "tent": tent,
    "chebyshev": chebyshev,
    "circle": circle,
    "gauss": gauss,
    "iterative": iterative,
    "piecewise": piecewise,
    "singer": singer,
    "sinusoidal": sinusoidal,
}

DEFAULT_MAP_ORDER = tuple(MAPS)

# Plain-float versions of the maps above.  For small matrices the fixed cost
# of each numpy call dominates, so advance() iterates entry by entry instead.
_SMALL_STATE = 64
_TWO_PI = 2.0 * math.pi


def _tent_f(x):
    return x / 0.7 if x < 0.7 else (10.0 / 3.0) * (1.0 - x)


def _iterative_f(x):
    u = 2.0 * x - 1.0
    return 0.5 * (math.sin(0.7 * math.pi / u) + 1.0) if u != 0.0 else 0.5


def _piecewise_f(x, p=0.4):
    y = min(x, 1.0 - x)
    return y / p if y < p else (y - p) / (0.5 - p)


_SCALAR_MAPS: dict[str, Callable[[float], float]] = {
    "logistic": logistic,
    "sine": lambda x: math.sin(math.pi * x),
    "tent": _tent_f,
    "chebyshev": chebyshev,
    "circle": lambda x: (x + 0.2 - (0.5 / _TWO_PI) * math.sin(_TWO_PI * x)) % 1.0,
    "gauss": lambda x: (1.0 / x) % 1.0 if x != 0.0 else 0.0,
    "iterative": _iterative_f,
    "piecewise": _piecewise_f,
    "singer": singer,
    "sinusoidal": lambda x: 2.3 * (x * x) * math.sin(math.pi * x),
}


def _clamp(values):
    return np.minimum(np.maximum(values, EPS), 1.0 - EPS)


def is_degenerate_seed(kind: str, x0: float) -> bool:
    """True when ``x0`` is a fixed point or reaches one within a few iterates.

    Orbits that leave the open interval (e.g. logistic from 0.5 -> 1 -> 0)
    are also rejected.
    """
    f = MAPS[kind]
    x = float(x0)
    for _ in range(_SCREEN_STEPS):
        if not 0.0 < x < 1.0:
            return True
        nxt = float(f(x))
        if abs(nxt - x) <= _FIXED_TOL:
            return True
        x = nxt
    return not 0.0 < x < 1.0


def _row_groups(map_kinds) -> tuple:
    """``(kind, rows)`` pairs; ``rows`` is a slice when the rows are contiguous."""
    kinds = np.asarray(map_kinds)
    groups = []
    for kind in dict.fromkeys(map_kinds):
        rows = np.flatnonzero(kinds == kind)
        if rows[-1] - rows[0] + 1 == rows.size:
            rows = slice(int(rows[0]), int(rows[-1]) + 1)
        groups.append((kind, rows))
    return tuple(groups)


@dataclass(frozen=True)
class ChaosState:
    """Current ``(N, D)`` matrix of chaotic values, one map per row."""

    map_kinds: tuple[str, ...]
    current: np.ndarray
    _groups: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        current = np.array(self.current, dtype=float)
        if current.ndim != 2 or current.shape[0] != len(self.map_kinds):
            raise InvalidArgumentError("current must be an (n_maps, dim) matrix")
        unknown = set(self.map_kinds) - set(MAPS)
        if unknown:
            raise InvalidArgumentError(f"unknown chaotic map(s): {sorted(unknown)}")
        current.setflags(write=False)
        object.__setattr__(self, "current", current)
        if not self._groups:
            object.__setattr__(self, "_groups", _row_groups(self.map_kinds))

    @property
    def n_maps(self) -> int:
        return self.current.shape[0]

    @property
    def dim(self) -> int:
        return self.current.shape[1]

    def __eq__(self, other):
        if not isinstance(other, ChaosState):
            return NotImplemented
        return self.map_kinds == other.map_kinds and np.array_equal(self.current, other.current)

    __hash__ = None


def _default_kinds(n_maps: int) -> tuple[str, ...]:
    return tuple(DEFAULT_MAP_ORDER[j % len(DEFAULT_MAP_ORDER)] for j in range(n_maps))


def init_chaos(n_maps: int, dim: int, seed=None, map_kinds=None) -> ChaosState:
    """Draw a fresh chaos matrix.

    ``seed`` may be an int or a :class:`numpy.random.Generator`; when a
    generator is passed its stream is consumed row by row, entry by entry.
    Rows cycle through the ten built-in maps unless ``map_kinds`` is given.
    """
    if n_maps < 1 or dim < 1:
        raise InvalidArgumentError(f"n_maps and dim must be >= 1, got {n_maps} and {dim}")
    kinds = _default_kinds(n_maps) if map_kinds is None else tuple(map_kinds)
    if len(kinds) != n_maps:
        raise InvalidArgumentError("map_kinds must have one entry per row")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)

    values = rng.random((n_maps, dim))
    for j, kind in enumerate(kinds):
        for d in range(dim):
            while values[j, d] == 0.0 or is_degenerate_seed(kind, values[j, d]):
                values[j, d] = rng.random()
    return ChaosState(kinds, values)


def advance(state: ChaosState) -> ChaosState:
    """Apply one step of each row's map, clamping into ``[EPS, 1 - EPS]``."""
    current = state.current
    if current.size <= _SMALL_STATE:
        hi = 1.0 - EPS
        out = np.array([[min(max(f(v), EPS), hi) for v in row]
                        for f, row in zip(map(_SCALAR_MAPS.get, state.map_kinds), current.tolist())])
    else:
        out = np.empty_like(current)
        for kind, rows in state._groups:
            out[rows] = MAPS[kind](current[rows])
        np.maximum(out, EPS, out=out)
        np.minimum(out, 1.0 - EPS, out=out)
    out.setflags(write=False)
    # The shape and map kinds are unchanged, so skip revalidation.
    nxt = object.__new__(ChaosState)
    object.__setattr__(nxt, "map_kinds", state.map_kinds)
    object.__setattr__(nxt, "current", out)
    object.__setattr__(nxt, "_groups", state._groups)
    return nxt
