"""Interior search algorithm: mirror, composition and global-best walk."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Element, Population, PopulationBest, SearchSpace, clamp, greedy_select
from .errors import InvalidArgumentError


@dataclass(frozen=True)
class IsaConfig:
    """
    Parameters
    ----------
    partition_threshold : float
        Probability that a non-best element joins the mirror group.
    walk_scale_fraction : float
        Random-walk step as a fraction of each dimension's width.
    composition_per_dimension : bool
        Draw the random-composition coefficient per dimension.  A single
        scalar confines every composition candidate to the box diagonal.
    mirror_per_dimension : bool
        Draw the mirror coefficient per dimension instead of one scalar per
        element.
    """

    partition_threshold: float = 0.2
    walk_scale_fraction: float = 0.01
    composition_per_dimension: bool = True
    mirror_per_dimension: bool = False

    def __post_init__(self):
        if not 0.0 <= self.partition_threshold <= 1.0:
            raise InvalidArgumentError("partition_threshold must lie in [0, 1]")
        if not self.walk_scale_fraction > 0.0:
            raise InvalidArgumentError("walk_scale_fraction must be positive")


def _coefficient(rng: np.random.Generator, dim: int, per_dimension: bool):
    return rng.random(dim) if per_dimension else rng.random()


def composition_random(space: SearchSpace, rng: np.random.Generator, per_dimension=True,
                       r2=None) -> np.ndarray:
    if r2 is None:
        r2 = _coefficient(rng, space.dim, per_dimension)
    return space.lower + r2 * space.width


def mirror_point(current, gbest, r3):
    return r3 * np.asarray(current) + (1.0 - r3) * np.asarray(gbest)


def mirror_update(current, gbest, rng: np.random.Generator | None = None,
                  per_dimension=False, r3=None) -> np.ndarray:
    """Reflect ``current`` through a mirror placed between it and ``gbest``.

    The result is not clamped.
    """
    current = np.asarray(current, dtype=float)
    gbest = np.asarray(gbest, dtype=float)
    if current.shape != gbest.shape:
        raise InvalidArgumentError("current and gbest must have equal length")
    if r3 is None:
        r3 = _coefficient(rng, current.size, per_dimension)
    return 2.0 * mirror_point(current, gbest, r3) - current


def walk_step(space: SearchSpace, cfg: IsaConfig) -> np.ndarray:
    return cfg.walk_scale_fraction * space.width


def global_best_walk(gbest: Element, space: SearchSpace, cfg: IsaConfig,
                     rng: np.random.Generator, objective, r_n=None) -> Element:
    if r_n is None:
        r_n = rng.standard_normal(space.dim)
    candidate = clamp(gbest.position + r_n * walk_step(space, cfg), space)
    return greedy_select(gbest, candidate, objective)


def _candidates(population: Population, cfg: IsaConfig, rng: np.random.Generator,
                compose) -> list[np.ndarray]:
    """One clamped candidate per element, all drawn before any evaluation.

    Per element, in index order: the global best draws ``dim`` normals; any
    other element draws r1, then the mirror r3 or whatever ``compose``
    consumes.
    """
    space = population.space
    gb = population.best_index
    gbest = population.positions[gb]
    out = []
    for i in range(population.size):
        x = population.positions[i]
        if i == gb:
            r_n = rng.standard_normal(space.dim)
            cand = x + r_n * walk_step(space, cfg)
        elif rng.random() <= cfg.partition_threshold:
            cand = mirror_update(x, gbest, rng, cfg.mirror_per_dimension)
        else:
            cand = compose(population, i, rng)
        out.append(clamp(cand, space))
    return out


def isa_iteration(population: Population, cfg: IsaConfig, rng: np.random.Generator,
                  compose=None) -> Population:
    """Advance ``population`` in place by one ISA iteration.

    Exactly ``population.size`` evaluations are spent.
    """
    if compose is None:
        def compose(pop, i, rng):
            return composition_random(pop.space, rng, cfg.composition_per_dimension)
    for i, cand in enumerate(_candidates(population, cfg, rng, compose)):
        population.greedy(i, cand)
    return population


class ISA(PopulationBest):
    name = "ISA"

    def __init__(self, cfg: IsaConfig | None = None):
        self.cfg = cfg or IsaConfig()

    def initialize(self, population, rng):
        pass

    def step(self, population, k, total, rng):
        isa_iteration(population, self.cfg, rng)

    def evaluations_per_iteration(self, pop_size: int) -> int:
        return pop_size
