"""Dataset loading, reversible scaling, splitting, and synthetic data.

Learning happens in a scaled space: features min-max scaled to [-1, 1]
and target standardized, always with statistics of the training portion
only. TransformState keeps those statistics so predictions can be
mapped back to original units and new inputs into the scaled space.
"""

from __future__ import annotations

import csv
from pathlib import PurePath
from dataclasses import dataclass, field

import numpy as np

from .errors import DataError, DegenerateFeatureError, DegenerateTargetError


@dataclass
class Dataset:
    """A named numeric regression dataset in original units."""

    name: str
    X: np.ndarray
    y: np.ndarray
    feature_names: list[str]
    target_name: str
    metadata: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return int(self.X.shape[0])

    @property
    def dim(self) -> int:
        return int(self.X.shape[1])


def load_csv(path, target_column: str | None = None, name: str | None = None) -> Dataset:
    """Read a numeric CSV with a header row into a Dataset.

    target_column picks the target by header name; the default is the
    last column. Missing or non-numeric cells are reported with their
    row and column.
    """
    path = str(path)
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise DataError(f"{path}: file is empty") from None
        header = [h.strip() for h in header]
        if len(header) < 2:
            raise DataError(f"{path}: need at least one feature column and one target column")
        if len(set(header)) != len(header):
            raise DataError(f"{path}: duplicate column names in header")

        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and row[0].strip() == ""):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}: row {line_no} has {len(row)} cells, header has {len(header)}")
            values = []
            for column, cell in zip(header, row):
                cell = cell.strip()
                if cell == "":
                    raise DataError(f"{path}: missing value at row {line_no}, column {column!r}")
                try:
                    value = float(cell)
                except ValueError:
                    raise DataError(
                        f"{path}: non-numeric value {cell!r} at row {line_no}, column {column!r}"
                    ) from None
                if not np.isfinite(value):
                    raise DataError(f"{path}: non-finite value {cell!r} at row {line_no}, column {column!r}")
                values.append(value)
            rows.append(values)

    if not rows:
        raise DataError(f"{path}: no data rows")

    if target_column is None:
        target_index = len(header) - 1
    else:
        if target_column not in header:
            raise DataError(f"{path}: target column {target_column!r} not found; columns are {header}")
        target_index = header.index(target_column)

    data = np.array(rows, dtype=float)
    y = data[:, target_index]
    X = np.delete(data, target_index, axis=1)
    feature_names = [h for i, h in enumerate(header) if i != target_index]
    return Dataset(
        name=name if name is not None else PurePath(path).stem,
        X=X,
        y=y,
        feature_names=feature_names,
        target_name=header[target_index],
    )


def write_csv(dataset: Dataset, path) -> None:
    """Write a Dataset back to CSV, features first, target last."""
    with open(str(path), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow([*dataset.feature_names, dataset.target_name])
        for x_row, y_val in zip(dataset.X, dataset.y):
            writer.writerow([repr(float(v)) for v in x_row] + [repr(float(y_val))])


@dataclass(frozen=True)
class TransformState:
    """Scaling statistics fitted on training data.

    Features map affinely onto [-1, 1] from their observed min/max; the
    target is centered and divided by its population standard deviation.
    """

    feature_min: np.ndarray
    feature_max: np.ndarray
    target_mean: float
    target_std: float

    @property
    def dim(self) -> int:
        return int(self.feature_min.shape[0])

    def transform_features(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.dim:
            raise DataError(f"expected 2-d input with {self.dim} features, got shape {X.shape}")
        span = self.feature_max - self.feature_min
        return 2.0 * (X - self.feature_min) / span - 1.0

    def inverse_features(self, X_scaled) -> np.ndarray:
        X_scaled = np.asarray(X_scaled, dtype=float)
        span = self.feature_max - self.feature_min
        return (X_scaled + 1.0) / 2.0 * span + self.feature_min

    def transform_target(self, y) -> np.ndarray:
        return (np.asarray(y, dtype=float) - self.target_mean) / self.target_std

    def inverse_target(self, y_scaled) -> np.ndarray:
        return np.asarray(y_scaled, dtype=float) * self.target_std + self.target_mean


def fit_transform(X, y) -> tuple[TransformState, np.ndarray, np.ndarray]:
    """Fit scaling statistics on (X, y) and return them with the scaled data."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    if X.ndim != 2:
        raise DataError(f"X must be 2-d, got shape {X.shape}")
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise DataError(f"y must be 1-d with one value per row of X, got shape {y.shape}")
    if X.shape[0] < 2:
        raise DataError(f"need at least 2 examples, got {X.shape[0]}")
    if not np.all(np.isfinite(X)) or not np.all(np.isfinite(y)):
        raise DataError("data contains NaN or infinite values")

    feature_min = X.min(axis=0)
    feature_max = X.max(axis=0)
    for i in np.flatnonzero(feature_max == feature_min):
        raise DegenerateFeatureError(f"feature {i} is constant (value {feature_min[i]}) and cannot be scaled")

    target_mean = float(y.mean())
    target_std = float(y.std())
    if target_std == 0.0:
        raise DegenerateTargetError(f"target is constant (value {target_mean}) and cannot be standardized")

    state = TransformState(
        feature_min=feature_min,
        feature_max=feature_max,
        target_mean=target_mean,
        target_std=target_std,
    )
    return state, state.transform_features(X), state.transform_target(y)


def monte_carlo_split(n: int, test_fraction: float = 0.25, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """One random disjoint train/test partition of range(n).

    The test side gets round(test_fraction * n) indices; both sides come
    back sorted. Different seeds give independent resamples.
    """
    if n < 4:
        raise ValueError(f"need at least 4 examples to split, got {n}")
    if not 0.0 < test_fraction < 1.0:
        raise ValueError(f"test_fraction must lie strictly between 0 and 1, got {test_fraction}")
    n_test = int(round(n * test_fraction))
    if n_test < 1 or n_test > n - 1:
        raise ValueError(f"test_fraction {test_fraction} with n={n} leaves an empty train or test side")
    permutation = np.random.default_rng(seed).permutation(n)
    test = np.sort(permutation[:n_test])
    train = np.sort(permutation[n_test:])
    return train, test


def gen_piecewise_linear(
    n: int,
    segments: int,
    noise_std: float = 0.0,
    seed: int = 0,
    name: str = "piecewise_linear",
) -> Dataset:
    """A 1-d dataset whose target is continuous piecewise linear on [0, 1].

    The domain splits into equal-width segments with independently drawn
    slopes, joined continuously. The generating breakpoints, slopes, and
    segment start levels land in Dataset.metadata so a test can rebuild
    the exact target function.
    """
    if n < 2:
        raise ValueError(f"need at least 2 samples, got {n}")
    if segments < 1:
        raise ValueError(f"need at least 1 segment, got {segments}")
    if noise_std < 0:
        raise ValueError(f"noise_std must be non-negative, got {noise_std}")
    rng = np.random.default_rng(seed)
    x = rng.uniform(0.0, 1.0, size=n)
    slopes = rng.uniform(-4.0, 4.0, size=segments)
    breakpoints = np.linspace(0.0, 1.0, segments + 1)
    # Value at each breakpoint, chaining segments continuously from 0.
    levels = np.concatenate([[0.0], np.cumsum(slopes / segments)])
    segment = np.minimum((x * segments).astype(int), segments - 1)
    y = levels[segment] + slopes[segment] * (x - breakpoints[segment])
    if noise_std > 0:
        y = y + rng.normal(0.0, noise_std, size=n)
    return Dataset(
        name=name,
        X=x.reshape(-1, 1),
        y=y,
        feature_names=["x"],
        target_name="y",
        metadata={
            "breakpoints": breakpoints.tolist(),
            "slopes": slopes.tolist(),
            "levels": levels.tolist(),
            "noise_std": float(noise_std),
            "seed": int(seed),
        },
    )
