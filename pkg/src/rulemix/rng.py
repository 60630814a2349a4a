"""Deterministic random-stream derivation.

Every stochastic unit of work (one ES run, one GA run, one benchmark
split) gets its own generator, derived from the master seed and a path
of identifying parts. Streams are therefore independent of execution
order, which keeps results identical whether work runs serially or in
parallel.
"""

from __future__ import annotations

import hashlib

import numpy as np


def _entropy_part(part: int | str) -> int:
    """Map a seed-path part to a non-negative integer for SeedSequence."""
    if isinstance(part, (int, np.integer)):
        part = int(part)
        if part < 0:
            raise ValueError(f"seed path parts must be non-negative, got {part}")
        return part
    if isinstance(part, str):
        digest = hashlib.sha256(part.encode("utf-8")).digest()
        return int.from_bytes(digest[:16], "big")
    raise TypeError(f"seed path parts must be int or str, got {type(part).__name__}")


def seed_sequence(master_seed: int, *path: int | str) -> np.random.SeedSequence:
    return np.random.SeedSequence([_entropy_part(master_seed), *(_entropy_part(p) for p in path)])


def spawn_rng(master_seed: int, *path: int | str) -> np.random.Generator:
    """Generator for the stream identified by (master_seed, *path)."""
    return np.random.default_rng(seed_sequence(master_seed, *path))


def derive_seed(master_seed: int, *path: int | str) -> int:
    """Collapse a seed path to a plain integer seed in [0, 2**64)."""
    return int(seed_sequence(master_seed, *path).generate_state(1, np.uint64)[0])
