"""Uniform mutation by addition and deletion over linear token genomes.

The addition pass inserts, adjacent to each existing token, a number of
uniformly random tokens whose expectation equals the rate mu (floor(mu)
or floor(mu)+1, the latter with probability frac(mu)). The deletion pass
removes every token of the augmented genome independently with probability
mu / (1 + mu), which exactly balances the expected growth.

Implementation note: the augmented genome is never materialized. Each
inserted token survives deletion independently of its value, so the number
of surviving insertions per anchor is Binomial(k, 1/(1+mu)) and their
values are i.i.d. uniform; survivors split evenly between the before/after
slots of their anchor. This is distributionally identical to the two-pass
procedure and stays O(output length) even for astronomically large rates.
"""
from __future__ import annotations

import math
from typing import Sequence

import numpy as np

__all__ = ["umad_mutate", "random_genome", "deletion_rate"]

# rng.binomial needs the trial count to fit in int64; beyond that the
# Poisson limit (n huge, p tiny, n*p <= 1 + mu^-1) is exact to within p.
_BINOMIAL_MAX_N = 2 ** 62


def deletion_rate(mu: float) -> float:
    """Deletion probability that balances an expected addition rate mu."""
    return mu / (1.0 + mu)


def random_genome(length: int, instruction_set: Sequence[int],
                  rng: np.random.Generator) -> np.ndarray:
    """Uniform i.i.d. token genome of the given length."""
    if length < 0:
        raise ValueError(f"length must be >= 0, got {length}")
    tokens = np.asarray(instruction_set, dtype=np.int8)
    return tokens[rng.integers(0, len(tokens), length)]


def umad_mutate(genome: np.ndarray, mu: float, instruction_set: Sequence[int],
                rng: np.random.Generator, max_len: int | None = 500) -> np.ndarray:
    """Apply one UMAD variation to a genome; returns a new genome."""
    if not mu > 0:
        raise ValueError(f"rate must be positive, got {mu}")
    genome = np.asarray(genome, dtype=np.int8)
    n = len(genome)
    if n == 0:
        return genome.copy()

    base = math.floor(mu)
    frac = mu - base
    p_keep = 1.0 / (1.0 + mu)
    if base <= _BINOMIAL_MAX_N:
        inserts = base + (rng.random(n) < frac).astype(np.int64)
        survivors = rng.binomial(inserts, p_keep)
    else:
        # Poisson limit for counts beyond int64; frac is zero for floats
        # this large, and base * p_keep stays near 1.
        survivors = rng.poisson(base * p_keep, n)
    before = rng.binomial(survivors, 0.5)
    keep_anchor = rng.random(n) < p_keep

    total_new = int(survivors.sum())
    tokens = np.asarray(instruction_set, dtype=np.int8)
    fresh = tokens[rng.integers(0, len(tokens), total_new)]

    parts: list[np.ndarray] = []
    ptr = 0
    for i in range(n):
        b = int(before[i])
        a = int(survivors[i]) - b
        if b:
            parts.append(fresh[ptr:ptr + b])
            ptr += b
        if keep_anchor[i]:
            parts.append(genome[i:i + 1])
        if a:
            parts.append(fresh[ptr:ptr + a])
            ptr += a
    child = np.concatenate(parts) if parts else np.empty(0, dtype=np.int8)
    if max_len is not None and len(child) > max_len:
        child = child[:max_len]
    return child
