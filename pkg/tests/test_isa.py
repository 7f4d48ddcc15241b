import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from isacl_mfnn import core, isa
from isacl_mfnn.core import Element, Objective, SearchSpace
from oracles import sphere

finite = st.floats(-1e3, 1e3, allow_nan=False)


def test_composition_random_endpoints():
    space = SearchSpace([-2.0], [4.0])
    assert isa.composition_random(space, None, r2=0.0) == pytest.approx([-2.0])
    assert isa.composition_random(space, None, r2=1.0) == pytest.approx([4.0])
    assert isa.composition_random(space, None, r2=0.5)[0] == pytest.approx(1.0, abs=1e-9)


def test_composition_random_per_dimension_leaves_the_diagonal(rng):
    space = SearchSpace.uniform(5, 0, 1)
    x = isa.composition_random(space, rng)
    assert np.ptp(x) > 0
    y = isa.composition_random(space, rng, per_dimension=False)
    assert np.ptp(y) == 0


def test_mirror_update_cases():
    x, g = np.array([1.0, -2.0]), np.array([3.0, 5.0])
    np.testing.assert_array_equal(isa.mirror_update(x, g, r3=1.0), x)
    np.testing.assert_array_equal(isa.mirror_update(x, g, r3=0.0), 2 * g - x)
    assert isa.mirror_point([1.0], [3.0], 0.5)[0] == pytest.approx(2.0, abs=1e-9)
    assert isa.mirror_update([1.0], [3.0], r3=0.5)[0] == pytest.approx(3.0, abs=1e-9)


@settings(max_examples=100)
@given(x=arrays(float, 4, elements=finite), g=arrays(float, 4, elements=finite),
       r3=st.floats(0, 1))
def test_mirror_point_is_midpoint(x, g, r3):
    m = isa.mirror_point(x, g, r3)
    image = isa.mirror_update(x, g, r3=r3)
    np.testing.assert_allclose(image - m, m - x, atol=1e-9)
    np.testing.assert_array_equal(isa.mirror_update(x, g, r3=1.0), x)


def test_global_best_walk():
    space = SearchSpace([0.0], [10.0])
    cfg = isa.IsaConfig()
    np.testing.assert_allclose(isa.walk_step(space, cfg), [0.1])

    obj = Objective(lambda x: abs(x[0] - 5.1))
    gbest = Element(np.array([5.0]), abs(5.0 - 5.1))
    out = isa.global_best_walk(gbest, space, cfg, None, obj, r_n=np.array([1.0]))
    assert out.position[0] == pytest.approx(5.1, abs=1e-9)

    same = isa.global_best_walk(gbest, space, cfg, None, obj, r_n=np.zeros(1))
    assert same is gbest


def test_config_validation():
    with pytest.raises(ValueError):
        isa.IsaConfig(partition_threshold=1.5)
    with pytest.raises(ValueError):
        isa.IsaConfig(walk_scale_fraction=0.0)


def _spy_population(seed=0, size=10, dim=3):
    space = SearchSpace.uniform(dim, -5, 5)
    return core.init_population(space, size, seed, sphere)


@pytest.mark.parametrize("threshold,expect_mirror", [(1.0, True), (0.0, False)])
def test_threshold_extremes(monkeypatch, threshold, expect_mirror):
    calls = {"mirror": 0, "compose": 0}
    real_mirror = isa.mirror_update

    def mirror(*a, **k):
        calls["mirror"] += 1
        return real_mirror(*a, **k)

    def compose(pop, i, rng):
        calls["compose"] += 1
        return pop.positions[i]

    monkeypatch.setattr(isa, "mirror_update", mirror)
    pop = _spy_population()
    isa.isa_iteration(pop, isa.IsaConfig(partition_threshold=threshold), np.random.default_rng(0),
                      compose=compose)
    assert calls["mirror" if expect_mirror else "compose"] == 9
    assert calls["compose" if expect_mirror else "mirror"] == 0


def test_iteration_budget_and_best_never_worsens():
    pop = _spy_population()
    rng = np.random.default_rng(1)
    before = pop.best().fitness
    for _ in range(20):
        count = pop.objective.count
        isa.isa_iteration(pop, isa.IsaConfig(), rng)
        assert pop.objective.count - count == 10
        assert pop.best().fitness <= before
        before = pop.best().fitness
    assert np.all(np.abs(pop.positions) <= 5)


def test_mirror_branch_frequency():
    rng = np.random.default_rng(2024)
    draws = rng.random(10_000)
    freq = np.mean(draws <= 0.2)
    assert abs(freq - 0.2) <= 0.02


def test_mirror_branch_frequency_in_iterations(monkeypatch):
    hits = {"mirror": 0, "total": 0}
    real_mirror = isa.mirror_update

    def mirror(*a, **k):
        hits["mirror"] += 1
        return real_mirror(*a, **k)

    def compose(pop, i, rng):
        return pop.positions[i]

    monkeypatch.setattr(isa, "mirror_update", mirror)
    pop = _spy_population(size=11, dim=2)
    rng = np.random.default_rng(5)
    for _ in range(1000):
        isa.isa_iteration(pop, isa.IsaConfig(), rng, compose=compose)
        hits["total"] += 10
    assert abs(hits["mirror"] / hits["total"] - 0.2) <= 0.02
