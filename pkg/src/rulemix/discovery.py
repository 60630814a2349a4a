"""Rule discovery by repeated (1, lambda) evolution strategies.

Each ES run seeds an interval on a training example chosen with
probability proportional to the current model's squared error there,
then repeatedly widens it: every generation drafts lambda children by
expanding the parent's bounds, the fittest child becomes the next
parent regardless of whether it beats it (comma selection), and the
best individual seen so far is kept aside. A run stops once that best
has not improved for delta consecutive generations.

Mutation only ever widens intervals and bounds are clipped to the
scaled domain, so every run reaches a fixed point and terminates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, EmptyMatchError
from .fitness import FitnessParams
from .rng import spawn_rng
from .rules import Rule, fit_submodel


@dataclass(frozen=True)
class ESConfig:
    """Settings of one rule-discovery cycle."""

    lambda_: int = 20
    """Children drafted per generation."""

    delta: int = 8
    """Consecutive stale generations before a run stops."""

    n_rules: int = 4
    """Independent ES runs (and so new rules) per cycle."""

    mutation_spread: float = 0.1
    """Scale of the half-normal bound expansions during mutation."""

    init_spread: float = 0.05
    """Scale of the half-normal half-widths of the initial interval."""

    def __post_init__(self):
        for name in ("lambda_", "delta", "n_rules"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        for name in ("mutation_spread", "init_spread"):
            value = getattr(self, name)
            if not value > 0:
                raise ConfigError(f"{name} must be positive, got {value!r}")


def select_seed_example(errors, rng: np.random.Generator) -> int:
    """Roulette-wheel draw of an example index, weighted by squared error.

    All-zero errors fall back to a uniform draw.
    """
    errors = np.asarray(errors, dtype=float)
    if errors.ndim != 1 or errors.size == 0:
        raise ValueError(f"errors must be a non-empty 1-d array, got shape {errors.shape}")
    if np.any(errors < 0) or not np.all(np.isfinite(errors)):
        raise ValueError("errors must be finite and non-negative")
    total = errors.sum()
    if total <= 0.0:
        return int(rng.integers(errors.size))
    return int(rng.choice(errors.size, p=errors / total))


def init_interval(seed_point: np.ndarray, init_spread: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Small random interval around one scaled example.

    Each side of each dimension gets an independent half-normal
    half-width; bounds are clipped to [-1, 1]. The seed point always
    stays inside.
    """
    seed_point = np.asarray(seed_point, dtype=float)
    offsets = np.abs(rng.normal(0.0, init_spread, size=(2, seed_point.shape[0])))
    lower = np.maximum(seed_point - offsets[0], -1.0)
    upper = np.minimum(seed_point + offsets[1], 1.0)
    return lower, upper


def init_rule(
    seed_point: np.ndarray,
    init_spread: float,
    rng: np.random.Generator,
    X: np.ndarray,
    y: np.ndarray,
    ridge_coeff: float,
    fitness_params: FitnessParams | None = None,
) -> Rule:
    """Fit the small initial rule around one scaled training example.

    The seed example is matched by construction, so fitting always has
    at least one row.
    """
    lower, upper = init_interval(seed_point, init_spread, rng)
    return fit_submodel(lower, upper, X, y, ridge_coeff, fitness_params)


def mutate(lower: np.ndarray, upper: np.ndarray, mutation_spread: float, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Expand an interval by half-normal steps on each side of each dimension.

    The child always contains the parent; bounds are clipped to [-1, 1].
    """
    steps = np.abs(rng.normal(0.0, mutation_spread, size=(2, lower.shape[0])))
    return np.maximum(lower - steps[0], -1.0), np.minimum(upper + steps[1], 1.0)


def evolve_rule(
    X: np.ndarray,
    y: np.ndarray,
    errors: np.ndarray,
    config: ESConfig,
    fitness_params: FitnessParams,
    ridge_coeff: float,
    rng: np.random.Generator,
) -> Rule:
    """One full (1, lambda) ES run; returns the fittest rule it ever saw."""
    seed_index = select_seed_example(errors, rng)
    candidate = init_rule(X[seed_index], config.init_spread, rng, X, y, ridge_coeff, fitness_params)
    parent = candidate
    stale = 0
    while stale < config.delta:
        best_child: Rule | None = None
        for _ in range(config.lambda_):
            child_lower, child_upper = mutate(parent.lower, parent.upper, config.mutation_spread, rng)
            try:
                child = fit_submodel(child_lower, child_upper, X, y, ridge_coeff, fitness_params)
            except EmptyMatchError:
                # Unreachable when the parent matched something, since
                # mutation only widens; kept so a failed child never
                # kills the run.
                continue
            if best_child is None or child.fitness > best_child.fitness:
                best_child = child
        if best_child is not None:
            parent = best_child
        if parent.fitness > candidate.fitness:
            candidate = parent
            stale = 0
        else:
            stale += 1
    return candidate


def discover_rules(
    X: np.ndarray,
    y: np.ndarray,
    errors: np.ndarray,
    config: ESConfig,
    fitness_params: FitnessParams,
    ridge_coeff: float,
    master_seed: int,
    cycle_index: int,
) -> list[Rule]:
    """Run n_rules independent ES runs for one cycle.

    Each run draws from its own stream derived from (master_seed,
    cycle_index, run index), so results do not depend on the order the
    runs execute in.
    """
    if X.shape[0] != y.shape[0] or X.shape[0] != np.asarray(errors).shape[0]:
        raise ValueError("X, y, and errors must have one entry per training example")
    return [
        evolve_rule(X, y, errors, config, fitness_params, ridge_coeff, spawn_rng(master_seed, "rule-es", cycle_index, run_index))
        for run_index in range(config.n_rules)
    ]
