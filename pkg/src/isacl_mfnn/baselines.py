"""Comparison optimizers: PSO, GA, GWO and SCA in their canonical forms.

All schedules are linear in ``k / total`` with ``k`` in ``0..total``, so the
value at ``k == total`` is the schedule's end point.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Element, Population, PopulationBest, clamp
from .errors import InvalidArgumentError


def linear_schedule(start: float, end: float, k: int, total: int) -> float:
    return start + (end - start) * (k / total)


@dataclass(frozen=True)
class PsoConfig:
    w_min: float = 0.1
    w_max: float = 0.4
    c1: float = 2.0
    c2: float = 2.0

    def inertia(self, k: int, total: int) -> float:
        return linear_schedule(self.w_max, self.w_min, k, total)


@dataclass(frozen=True)
class GaConfig:
    crossover_prob: float = 0.25
    mutation_prob: float = 0.2
    tournament_size: int = 2
    elitism: bool = True

    def __post_init__(self):
        for name in ("crossover_prob", "mutation_prob"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidArgumentError(f"{name} must lie in [0, 1]")
        if self.tournament_size < 1:
            raise InvalidArgumentError("tournament_size must be >= 1")


@dataclass(frozen=True)
class GwoConfig:
    a_start: float = 2.0
    a_end: float = 0.0

    def a(self, k: int, total: int) -> float:
        return linear_schedule(self.a_start, self.a_end, k, total)


@dataclass(frozen=True)
class ScaConfig:
    c1_start: float = 1.0
    c1_end: float = 0.0
    c2_range: tuple[float, float] = (0.0, 2.0 * np.pi)
    c3_range: tuple[float, float] = (0.0, 2.0)

    def c1(self, k: int, total: int) -> float:
        return linear_schedule(self.c1_start, self.c1_end, k, total)


@dataclass(frozen=True)
class BaselineConfig:
    pso: PsoConfig = field(default_factory=PsoConfig)
    ga: GaConfig = field(default_factory=GaConfig)
    gwo: GwoConfig = field(default_factory=GwoConfig)
    sca: ScaConfig = field(default_factory=ScaConfig)


# --- PSO -------------------------------------------------------------------


def pso_velocity(x, v, pbest, gbest, w, c1, c2, r1, r2):
    return w * v + c1 * r1 * (pbest - x) + c2 * r2 * (gbest - x)


class PSO:
    """Global-best particle swarm; the population arrays hold personal bests."""

    name = "PSO"

    def __init__(self, cfg: PsoConfig | None = None):
        self.cfg = cfg or PsoConfig()

    def initialize(self, population, rng):
        self.x = population.positions.copy()
        self.v = np.zeros_like(self.x)

    def best(self, population):
        return population.best()

    def step(self, population: Population, k, total, rng):
        cfg = self.cfg
        w = cfg.inertia(k, total)
        g = population.positions[population.best_index].copy()
        n, d = self.x.shape
        r1 = rng.random((n, d))
        r2 = rng.random((n, d))
        self.v = pso_velocity(self.x, self.v, population.positions, g, w, cfg.c1, cfg.c2, r1, r2)
        self.x = clamp(self.x + self.v, population.space)
        for i in range(n):
            population.greedy(i, self.x[i])

    def evaluations_per_iteration(self, pop_size):
        return pop_size


# --- GA --------------------------------------------------------------------


def arithmetic_crossover(p, q, mix):
    """Blend two parents: ``mix * p + (1 - mix) * q``."""
    return mix * np.asarray(p) + (1.0 - mix) * np.asarray(q)


def tournament(fitness: np.ndarray, size: int, rng: np.random.Generator) -> int:
    entrants = rng.integers(fitness.size, size=size)
    return int(entrants[np.argmin(fitness[entrants])])


class GA(PopulationBest):
    """Slot-wise real-coded GA.

    For each slot, with probability ``crossover_prob`` the occupant is
    replaced by an arithmetic blend of two tournament winners; every gene is
    then reset uniformly within bounds with probability ``mutation_prob``.
    Children replace their slots unconditionally, except that the previous
    best overwrites the worst child when all children are worse (elitism).
    """

    name = "GA"

    def __init__(self, cfg: GaConfig | None = None):
        self.cfg = cfg or GaConfig()

    def initialize(self, population, rng):
        pass

    def step(self, population: Population, k, total, rng):
        cfg = self.cfg
        space = population.space
        n, d = population.positions.shape
        elite = population.best()

        children = population.positions.copy()
        for i in range(n):
            if rng.random() < cfg.crossover_prob:
                p = tournament(population.fitness, cfg.tournament_size, rng)
                q = tournament(population.fitness, cfg.tournament_size, rng)
                children[i] = arithmetic_crossover(population.positions[p],
                                                   population.positions[q], rng.random())
            mask = rng.random(d) < cfg.mutation_prob
            if mask.any():
                children[i, mask] = space.lower[mask] + rng.random(int(mask.sum())) * space.width[mask]

        fitness = np.array([population.objective.try_(c) for c in children])
        population.positions[:] = children
        population.fitness[:] = fitness
        if cfg.elitism and not fitness.min() <= elite.fitness:
            population.replace(int(np.argmax(fitness)), elite)

    def evaluations_per_iteration(self, pop_size):
        return pop_size


# --- GWO -------------------------------------------------------------------


def gwo_move(x, leader, a, r1, r2):
    A = 2.0 * a * r2 - a
    C = 2.0 * r1
    D = np.abs(C * leader - x)
    return leader - A * D


class GWO:
    """Grey wolf optimizer; alpha, beta and delta are the three best positions ever seen."""

    name = "GWO"

    def __init__(self, cfg: GwoConfig | None = None):
        self.cfg = cfg or GwoConfig()

    def initialize(self, population: Population, rng):
        if population.size < 3:
            raise InvalidArgumentError("GWO needs a population of at least 3")
        order = np.argsort(population.fitness, kind="stable")[:3]
        self.leaders = [Element(population.positions[j].copy(), float(population.fitness[j]))
                        for j in order]

    def best(self, population):
        return self.leaders[0]

    def _offer(self, position, fitness):
        for rank, leader in enumerate(self.leaders):
            if fitness < leader.fitness:
                self.leaders.insert(rank, Element(position.copy(), fitness))
                self.leaders.pop()
                return

    def step(self, population: Population, k, total, rng):
        a = self.cfg.a(k, total)
        n, d = population.positions.shape
        leaders = [l.position for l in self.leaders]
        for i in range(n):
            x = population.positions[i]
            moves = [gwo_move(x, p, a, rng.random(d), rng.random(d)) for p in leaders]
            population.positions[i] = clamp(np.mean(moves, axis=0), population.space)
        for i in range(n):
            population.fitness[i] = population.objective.try_(population.positions[i])
            self._offer(population.positions[i], population.fitness[i])

    def evaluations_per_iteration(self, pop_size):
        return pop_size


# --- SCA -------------------------------------------------------------------


def sca_move(x, dest, c1, c2, c3, use_sine: bool):
    wave = np.sin(c2) if use_sine else np.cos(c2)
    return x + c1 * wave * np.abs(c3 * dest - x)


class SCA:
    """Sine cosine algorithm toward the best position found so far."""

    name = "SCA"

    def __init__(self, cfg: ScaConfig | None = None):
        self.cfg = cfg or ScaConfig()

    def initialize(self, population, rng):
        self.dest = population.best()

    def best(self, population):
        return self.dest

    def step(self, population: Population, k, total, rng):
        cfg = self.cfg
        c1 = cfg.c1(k, total)
        for i in range(population.size):
            c2 = rng.uniform(*cfg.c2_range)
            c3 = rng.uniform(*cfg.c3_range)
            use_sine = rng.random() < 0.5
            x = sca_move(population.positions[i], self.dest.position, c1, c2, c3, use_sine)
            population.positions[i] = clamp(x, population.space)
        for i in range(population.size):
            f = population.objective.try_(population.positions[i])
            population.fitness[i] = f
            if f < self.dest.fitness:
                self.dest = Element(population.positions[i].copy(), f)

    def evaluations_per_iteration(self, pop_size):
        return pop_size
