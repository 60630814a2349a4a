import numpy as np
import pytest

from rulemix import ESConfig, FitnessParams, GAConfig, LearnerConfig


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def small_config(master_seed: int = 7, **overrides) -> LearnerConfig:
    """A reduced configuration that trains in milliseconds."""
    defaults = dict(
        n_iter=3,
        es=ESConfig(lambda_=6, delta=2, n_rules=2),
        ga=GAConfig(population_size=10, generations=5, n_elitists=2),
        rule_fitness=FitnessParams(),
        solution_fitness=FitnessParams(),
        master_seed=master_seed,
    )
    defaults.update(overrides)
    return LearnerConfig(**defaults)


def linear_data(n: int = 120, d: int = 2, noise: float = 0.0, seed: int = 0):
    """Raw-unit data with a known linear target."""
    gen = np.random.default_rng(seed)
    X = gen.uniform(-3.0, 7.0, size=(n, d))
    coef = np.arange(1, d + 1, dtype=float)
    y = X @ coef + 2.5
    if noise > 0:
        y = y + gen.normal(0.0, noise, size=n)
    return X, y
