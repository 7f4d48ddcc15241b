"""Interior search with experience-guided composition and chaotic learning."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .chaos import ChaosState, advance, init_chaos
from .core import Element, Population, PopulationBest, SearchSpace
from .errors import InvalidArgumentError
from .isa import IsaConfig, isa_iteration


@dataclass(frozen=True)
class IsaclConfig(IsaConfig):
    n_maps: int = 10
    cl_inner_iters: int = 1

    def __post_init__(self):
        super().__post_init__()
        if self.n_maps < 1:
            raise InvalidArgumentError("n_maps must be >= 1")
        if self.cl_inner_iters < 1:
            raise InvalidArgumentError("cl_inner_iters must be >= 1")


@dataclass(frozen=True)
class ClWeight:
    """Blend weight ``k / k_max`` between the incumbent and chaotic points."""

    value: float

    @classmethod
    def at(cls, k: int, k_max: int) -> ClWeight:
        if k_max < 1 or not 0 <= k <= k_max:
            raise InvalidArgumentError(f"need 0 <= k <= k_max and k_max >= 1, got {k}/{k_max}")
        return cls(k / k_max)


def composition_experience(current: Element, peer_l: Element, peer_r: Element,
                           rng: np.random.Generator | None = None, r2=None) -> np.ndarray:
    """Step from ``current`` along the direction from the worse peer to the better one.

    Ties (equal peer fitness) take the second branch, ``l - r``.
    """
    if r2 is None:
        r2 = rng.random()
    if peer_r.fitness < peer_l.fitness:
        direction = peer_r.position - peer_l.position
    else:
        direction = peer_l.position - peer_r.position
    return current.position + r2 * direction


def pick_peers(pop_size: int, i: int, rng: np.random.Generator) -> tuple[int, int]:
    """Two distinct indices, both different from ``i``, drawn uniformly."""
    if pop_size < 3:
        raise InvalidArgumentError("experience composition needs a population of at least 3")
    l = i
    while l == i:
        l = int(rng.integers(pop_size))
    r = i
    while r == i or r == l:
        r = int(rng.integers(pop_size))
    return l, r


def chaotic_candidates(gbest_position, chaos: ChaosState, space: SearchSpace,
                       weight: ClWeight) -> np.ndarray:
    """Rows ``w * gbest + (1 - w) * (lower + C * width)`` for the current chaos matrix."""
    replicated = np.broadcast_to(gbest_position, chaos.current.shape)
    in_box = space.lower + chaos.current * space.width
    return weight.value * replicated + (1.0 - weight.value) * in_box


def chaotic_learning_phase(gbest: Element, chaos: ChaosState, space: SearchSpace,
                           weight: ClWeight, objective) -> tuple[Element, ChaosState]:
    """Advance the chaos matrix, evaluate its N blended rows and keep the best if it wins.

    Spends exactly ``chaos.n_maps`` evaluations.  Rows are compared with a
    lowest-index tie-break.
    """
    if chaos.dim != space.dim:
        raise InvalidArgumentError(f"chaos dim {chaos.dim} does not match space dim {space.dim}")
    chaos = advance(chaos)
    rows = chaotic_candidates(gbest.position, chaos, space, weight)
    try_ = getattr(objective, "try_", objective)
    values = np.array([try_(z) for z in rows])
    j = int(np.argmin(values))
    if values[j] < gbest.fitness:
        gbest = Element(rows[j].copy(), float(values[j]))
    return gbest, chaos


def isacl_iteration(population: Population, cfg: IsaclConfig, chaos: ChaosState, k: int,
                    k_max: int, rng: np.random.Generator) -> ChaosState:
    """One outer iteration; mutates ``population`` and returns the advanced chaos state.

    Phase 1 draws peers ``(l, r)`` then ``r2`` for each composition element.
    """

    def compose(pop, i, rng):
        l, r = pick_peers(pop.size, i, rng)
        return composition_experience(pop.element(i), pop.element(l), pop.element(r), rng)

    isa_iteration(population, cfg, rng, compose=compose)

    weight = ClWeight.at(k, k_max)
    gb = population.best_index
    gbest = population.element(gb)
    for _ in range(cfg.cl_inner_iters):
        gbest, chaos = chaotic_learning_phase(gbest, chaos, population.space, weight,
                                              population.objective)
    population.replace(gb, gbest)
    return chaos


class ISACL(PopulationBest):
    name = "ISACL"

    def __init__(self, cfg: IsaclConfig | None = None):
        self.cfg = cfg or IsaclConfig()
        self.chaos: ChaosState | None = None

    def initialize(self, population, rng):
        # Consumes n_maps * dim uniforms (plus rare redraws) after the population draw.
        self.chaos = init_chaos(self.cfg.n_maps, population.space.dim, rng)

    def step(self, population, k, total, rng):
        self.chaos = isacl_iteration(population, self.cfg, self.chaos, k, total, rng)

    def evaluations_per_iteration(self, pop_size: int) -> int:
        return pop_size + self.cfg.n_maps * self.cfg.cl_inner_iters
