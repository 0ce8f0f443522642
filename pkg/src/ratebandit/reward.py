"""Error transforms and reward bookkeeping for mutation-rate controllers.

Rewards are defined as the decrease in mean transformed error from a parent
to its mutated child. Credit assignment downstream scores a rate by the
maximum reward seen over a bounded trailing window, so this module also
provides a FIFO history with O(1) sliding-window max queries.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

__all__ = [
    "TransformConfig",
    "transform_error",
    "transform_errors",
    "immediate_reward",
    "RewardHistory",
    "windowed_max",
]


@dataclass(frozen=True)
class TransformConfig:
    """How raw errors are squashed before rewards are computed.

    ``c`` sets the resolution of the signed log squash: errors smaller than
    ``c`` in magnitude are effectively flattened. ``identity`` bypasses the
    squash entirely; scalar-error domains (function minimization) compare
    raw errors directly.
    """

    c: float = 1.0
    identity: bool = False

    def __post_init__(self) -> None:
        if not self.identity and not self.c > 0:
            raise ValueError(f"transform constant must be positive, got {self.c}")


def transform_error(x: float, cfg: TransformConfig) -> float:
    """Signed log squash sgn(x) * ln(c + |x|), or x unchanged in identity mode."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"error value must be finite, got {x}")
    if cfg.identity:
        return x
    return math.copysign(1.0, x) * math.log(cfg.c + abs(x)) if x != 0.0 else 0.0


def transform_errors(errors: np.ndarray, cfg: TransformConfig) -> np.ndarray:
    """Vectorized transform_error over an error vector."""
    arr = np.asarray(errors, dtype=float)
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("error vector must be one-dimensional and nonempty")
    if not np.isfinite(arr).all():
        raise ValueError("error vector must be finite")
    if cfg.identity:
        return arr
    return np.sign(arr) * np.log(cfg.c + np.abs(arr))


def immediate_reward(parent: np.ndarray, child: np.ndarray, cfg: TransformConfig) -> float:
    """Decrease in mean transformed error from parent to child.

    Positive iff the child improved on the parent. Antisymmetric in its
    first two arguments.
    """
    p = np.asarray(parent, dtype=float)
    c = np.asarray(child, dtype=float)
    if p.shape != c.shape:
        raise ValueError(f"parent/child error lengths differ: {p.shape} vs {c.shape}")
    return float(np.mean(transform_errors(p, cfg)) - np.mean(transform_errors(c, cfg)))


class RewardHistory:
    """Bounded FIFO of recent rewards with O(1) max queries.

    A secondary monotone deque of (sequence number, value) pairs tracks the
    sliding-window maximum; entries dominated by a newer, larger value are
    discarded eagerly.
    """

    __slots__ = ("capacity", "_buf", "_maxq", "_seq")

    def __init__(self, capacity: int):
        if capacity < 1:
            raise ValueError(f"history capacity must be >= 1, got {capacity}")
        self.capacity = int(capacity)
        self._buf: deque[float] = deque()
        self._maxq: deque[tuple[int, float]] = deque()
        self._seq = 0

    def __len__(self) -> int:
        return len(self._buf)

    def push(self, reward: float) -> None:
        r = float(reward)
        self._buf.append(r)
        if len(self._buf) > self.capacity:
            self._buf.popleft()
        while self._maxq and self._maxq[-1][1] <= r:
            self._maxq.pop()
        self._maxq.append((self._seq, r))
        self._seq += 1
        # drop max candidates that fell out of the window
        expired = self._seq - self.capacity
        while self._maxq[0][0] < expired:
            self._maxq.popleft()

    def max(self) -> float:
        if not self._buf:
            raise ValueError("max() on an empty history")
        return self._maxq[0][1]

    def values(self) -> list[float]:
        """Window contents, oldest first."""
        return list(self._buf)

    @classmethod
    def from_values(cls, values: list[float], capacity: int) -> "RewardHistory":
        hist = cls(capacity)
        for v in values:
            hist.push(v)
        return hist


def windowed_max(history: RewardHistory, new_reward: float) -> float:
    """Push a reward, then return the max over the trailing window."""
    history.push(new_reward)
    return history.max()
