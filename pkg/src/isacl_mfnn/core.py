"""Population machinery shared by every optimizer.

An optimizer is any object with ``initialize(population, rng)`` and
``step(population, k, total, rng)`` methods, where ``k`` runs from 1 to
``total``.  :func:`run` owns the random generator, the evaluation counter and
the best-so-far trace.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Protocol

import numpy as np

from .errors import EvaluationError, InvalidArgumentError

log = logging.getLogger(__name__)

DEFAULT_ITERS = 500
DEFAULT_POP_SIZE = 10


@dataclass(frozen=True)
class SearchSpace:
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lower.ndim != 1 or lower.shape != upper.shape or lower.size < 1:
            raise InvalidArgumentError("lower and upper must be equal-length non-empty vectors")
        if not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise InvalidArgumentError("bounds must be finite")
        if np.any(lower >= upper):
            raise InvalidArgumentError("every lower bound must be strictly below its upper bound")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, dim: int, low: float, high: float) -> SearchSpace:
        if dim < 1:
            raise InvalidArgumentError(f"dim must be >= 1, got {dim}")
        return cls(np.full(dim, float(low)), np.full(dim, float(high)))

    @property
    def dim(self) -> int:
        return self.lower.size

    @property
    def width(self) -> np.ndarray:
        return self.upper - self.lower

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return self.lower + rng.random((n, self.dim)) * self.width


def clamp(position, space: SearchSpace) -> np.ndarray:
    return np.minimum(space.upper, np.maximum(space.lower, position))


@dataclass
class Element:
    position: np.ndarray
    fitness: float


class Objective:
    """Counting wrapper around a fitness function.

    ``strict`` calls raise :class:`EvaluationError` on non-finite values;
    ``try_`` calls return ``inf`` instead and count a warning.
    """

    def __init__(self, func: Callable[[np.ndarray], float]):
        self.func = func
        self.count = 0
        self.rejected = 0

    def __call__(self, position) -> float:
        self.count += 1
        value = float(self.func(position))
        if not np.isfinite(value):
            raise EvaluationError(np.array(position, copy=True), value)
        return value

    def try_(self, position) -> float:
        self.count += 1
        value = float(self.func(position))
        if not np.isfinite(value):
            self.rejected += 1
            log.warning("rejected candidate with non-finite fitness %r", value)
            return np.inf
        return value


def greedy_select(old: Element, candidate_position, objective: Objective) -> Element:
    """Keep the candidate only if it is strictly better than ``old``."""
    if not isinstance(objective, Objective):
        objective = Objective(objective)
    value = objective.try_(candidate_position)
    if value < old.fitness:
        return Element(np.array(candidate_position, dtype=float), value)
    return old


class Population:
    """Positions, fitness values and the evaluation budget of one run."""

    def __init__(self, space: SearchSpace, positions: np.ndarray, fitness: np.ndarray,
                 objective: Objective):
        self.space = space
        self.positions = positions
        self.fitness = fitness
        self.objective = objective

    @property
    def size(self) -> int:
        return self.positions.shape[0]

    @property
    def best_index(self) -> int:
        # np.argmin breaks ties toward the lowest index.
        return int(np.argmin(self.fitness))

    def best(self) -> Element:
        i = self.best_index
        return Element(self.positions[i].copy(), float(self.fitness[i]))

    def element(self, i: int) -> Element:
        return Element(self.positions[i], float(self.fitness[i]))

    def replace(self, i: int, element: Element) -> None:
        self.positions[i] = element.position
        self.fitness[i] = element.fitness

    def greedy(self, i: int, candidate) -> bool:
        """Greedy replacement of slot ``i``; returns True if the candidate won."""
        old = self.element(i)
        new = greedy_select(old, candidate, self.objective)
        if new is old:
            return False
        self.replace(i, new)
        return True


def init_population(space: SearchSpace, pop_size: int, seed, objective) -> Population:
    """Uniform random population, each member evaluated once."""
    if pop_size < 2:
        raise InvalidArgumentError(f"pop_size must be >= 2, got {pop_size}")
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    if not isinstance(objective, Objective):
        objective = Objective(objective)
    positions = space.sample(rng, pop_size)
    fitness = np.array([objective(x) for x in positions])
    return Population(space, positions, fitness, objective)


class Optimizer(Protocol):
    name: str

    def initialize(self, population: Population, rng: np.random.Generator) -> None: ...

    def step(self, population: Population, k: int, total: int,
             rng: np.random.Generator) -> None: ...

    def best(self, population: Population) -> Element: ...


class PopulationBest:
    """Mixin: the best element is the population argmin."""

    def best(self, population: Population) -> Element:
        return population.best()


@dataclass
class RunTrace:
    best_per_iter: np.ndarray
    eval_count: int
    final_best: Element
    rejected: int = 0
    algorithm: str = ""
    seed: int | None = None
    extra: dict = field(default_factory=dict)


def run(optimizer: Optimizer, space: SearchSpace, objective, *, pop_size: int = DEFAULT_POP_SIZE,
        iters: int = DEFAULT_ITERS, seed=None) -> RunTrace:
    """Drive ``optimizer`` for ``iters`` iterations from one seeded generator.

    Draw order: the initial population (pop_size x dim uniforms), then
    whatever the optimizer's ``initialize`` consumes, then each ``step`` in
    turn.
    """
    if iters < 1:
        raise InvalidArgumentError(f"iters must be >= 1, got {iters}")
    rng = np.random.default_rng(seed)
    objective = objective if isinstance(objective, Objective) else Objective(objective)
    population = init_population(space, pop_size, rng, objective)
    optimizer.initialize(population, rng)

    best = optimizer.best(population)
    trace = np.empty(iters)
    for k in range(1, iters + 1):
        optimizer.step(population, k, iters, rng)
        current = optimizer.best(population)
        if current.fitness < best.fitness:
            best = current
        trace[k - 1] = best.fitness
    return RunTrace(trace, objective.count, best, objective.rejected,
                    getattr(optimizer, "name", type(optimizer).__name__),
                    seed if isinstance(seed, (int, np.integer)) else None)
