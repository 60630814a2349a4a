"""Interval rules, their linear submodels, and mixing-based prediction.

A rule matches the inputs lying inside its closed per-dimension
interval and predicts through a linear model fitted by ridge regression
on exactly the training rows it matches. Fitted rules are immutable;
the pool that archives them only ever appends, so a rule's pool index
is a stable identifier for the whole run.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterator, Sequence

import numpy as np

from .errors import EmptyMatchError, NotFittedError
from .fitness import FitnessParams, combine, pseudo_accuracy

# Mixing weights are experience / (mse + MIX_EPS); the epsilon keeps
# zero-error rules from collapsing the weighted average onto themselves.
MIX_EPS = 1e-6


def _readonly(values) -> np.ndarray:
    out = np.array(values, dtype=float)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class Rule:
    """A fitted rule: interval bounds in scaled feature space plus the
    linear submodel in standardized-target units."""

    lower: np.ndarray
    upper: np.ndarray
    coefficients: np.ndarray
    intercept: float
    in_sample_mse: float
    experience: int
    volume: float
    fitness: float

    @property
    def dim(self) -> int:
        return int(self.lower.shape[0])


def match_mask(lower: np.ndarray, upper: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Boolean mask of the rows of X inside [lower, upper] in every dimension."""
    if X.ndim != 2:
        raise ValueError(f"X must be 2-d, got shape {X.shape}")
    if X.shape[1] != lower.shape[0]:
        raise ValueError(f"dimension mismatch: rule has {lower.shape[0]} dimensions, X has {X.shape[1]}")
    return ((X >= lower) & (X <= upper)).all(axis=1)


def matches(rule: Rule, x) -> bool:
    """Whether a single input lies inside the rule's interval (bounds inclusive)."""
    x = np.asarray(x, dtype=float)
    if x.shape != rule.lower.shape:
        raise ValueError(f"dimension mismatch: rule has {rule.dim} dimensions, input has shape {x.shape}")
    return bool(np.all((x >= rule.lower) & (x <= rule.upper)))


def match_set(rule: Rule, X) -> np.ndarray:
    """Indices of the rows of X the rule matches, in ascending order."""
    X = np.asarray(X, dtype=float)
    return np.flatnonzero(match_mask(rule.lower, rule.upper, X))


def fit_submodel(
    lower,
    upper,
    X: np.ndarray,
    y: np.ndarray,
    ridge_coeff: float = 0.01,
    fitness_params: FitnessParams | None = None,
) -> Rule:
    """Fit the rule's linear submodel on the training rows it matches.

    Minimizes the sum of squared residuals plus ridge_coeff times the
    squared coefficient norm; the intercept is not penalized. Passing
    fitness_params also stamps the rule's fitness, otherwise it is 0.
    """
    if not ridge_coeff >= 0:
        raise ValueError(f"ridge_coeff must be non-negative, got {ridge_coeff}")
    lower = _readonly(lower)
    upper = _readonly(upper)
    if lower.shape != upper.shape or lower.ndim != 1:
        raise ValueError("lower and upper must be 1-d arrays of equal length")
    if np.any(lower > upper) or np.any(lower < -1.0) or np.any(upper > 1.0):
        raise ValueError("bounds must satisfy -1 <= lower <= upper <= 1 in every dimension")
    mask = match_mask(lower, upper, X)
    n_matched = int(np.count_nonzero(mask))
    if n_matched == 0:
        raise EmptyMatchError("rule matches no training example")
    Xm = X[mask]
    ym = y[mask]

    # Centering makes the penalty apply to the slope only: for any fixed
    # slope the optimal intercept is y_mean - x_mean @ w.
    x_mean = Xm.mean(axis=0)
    y_mean = ym.mean()
    Xc = Xm - x_mean
    yc = ym - y_mean
    d = X.shape[1]
    if d == 1:
        xc = Xc[:, 0]
        gram00 = float(xc @ xc) + ridge_coeff
        rhs0 = float(xc @ yc)
        coefficients = np.array([rhs0 / gram00]) if gram00 > 0.0 else np.zeros(1)
    else:
        gram = Xc.T @ Xc
        gram.flat[:: d + 1] += ridge_coeff
        rhs = Xc.T @ yc
        try:
            coefficients = np.linalg.solve(gram, rhs)
        except np.linalg.LinAlgError:
            coefficients, *_ = np.linalg.lstsq(gram, rhs, rcond=None)
    intercept = float(y_mean - x_mean @ coefficients)

    residuals = ym - (Xm @ coefficients + intercept)
    mse = float(residuals @ residuals) / n_matched
    rule = Rule(
        lower=lower,
        upper=upper,
        coefficients=_readonly(coefficients),
        intercept=intercept,
        in_sample_mse=mse,
        experience=n_matched,
        volume=float(np.prod((upper - lower) / 2.0)),
        fitness=0.0,
    )
    if fitness_params is not None:
        rule = replace(rule, fitness=rule_fitness(rule, fitness_params))
    return rule


def rule_fitness(rule: Rule, params: FitnessParams) -> float:
    """Blend of the rule's error pseudo-accuracy and its volume share."""
    if not math.isfinite(rule.in_sample_mse):
        raise NotFittedError("rule has no fitted submodel")
    return combine(pseudo_accuracy(rule.in_sample_mse, params.beta), rule.volume, params.alpha)


def predict_rule(rule: Rule, x) -> float:
    """The rule's linear output at a single input (matching or not)."""
    x = np.asarray(x, dtype=float)
    if x.shape != rule.lower.shape:
        raise ValueError(f"dimension mismatch: rule has {rule.dim} dimensions, input has shape {x.shape}")
    return float(rule.coefficients @ x + rule.intercept)


class Pool:
    """Append-only archive of every fitted rule a run has produced."""

    def __init__(self, rules: Sequence[Rule] = ()):
        self._rules: list[Rule] = list(rules)

    def append(self, rule: Rule) -> None:
        self._rules.append(rule)

    def extend(self, rules: Sequence[Rule]) -> None:
        self._rules.extend(rules)

    def selected(self, genome: np.ndarray) -> list[Rule]:
        """The rules picked out by a boolean genome over the pool."""
        if len(genome) != len(self._rules):
            raise ValueError(f"genome length {len(genome)} does not match pool size {len(self._rules)}")
        return [rule for rule, bit in zip(self._rules, genome) if bit]

    def __len__(self) -> int:
        return len(self._rules)

    def __getitem__(self, index: int) -> Rule:
        return self._rules[index]

    def __iter__(self) -> Iterator[Rule]:
        return iter(self._rules)


def mix_predict(rules: Sequence[Rule], X, eps: float = MIX_EPS) -> np.ndarray:
    """Weighted average of the matching rules' outputs at each row of X.

    Each matching rule contributes with weight experience / (mse + eps).
    Rows matched by no rule predict 0, the standardized target mean.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim != 2:
        raise ValueError(f"X must be 2-d, got shape {X.shape}")
    numerator = np.zeros(X.shape[0])
    denominator = np.zeros(X.shape[0])
    for rule in rules:
        mask = match_mask(rule.lower, rule.upper, X)
        weight = rule.experience / (rule.in_sample_mse + eps)
        weighted_outputs = weight * (X @ rule.coefficients + rule.intercept)
        numerator[mask] += weighted_outputs[mask]
        denominator[mask] += weight
    predictions = np.zeros(X.shape[0])
    np.divide(numerator, denominator, out=predictions, where=denominator > 0)
    return predictions
