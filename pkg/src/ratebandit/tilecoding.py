"""A single tiling of a log-rate interval.

A tiling partitions [low, high) into an optional partial first tile
[low, low+offset) followed by width-sized tiles. Each tile owns a learned
value, a momentum accumulator, and a bounded history of recent rewards.
Values are trained toward the max reward in the tile's window by SGD with
Nesterov-style momentum.
"""
from __future__ import annotations

import math

import numpy as np

from .reward import RewardHistory

__all__ = ["TileCoding"]


class TileCoding:
    """One tiling: tile indexing plus per-tile value/momentum/history state.

    Tile 0 is the partial interval [low, low+offset); it is empty and
    degenerate when offset == 0, in which case the index formula below
    never produces it anyway. The final partial tile, when offset == 0,
    folds into the last full tile via index clamping.
    """

    __slots__ = ("low", "high", "offset", "width", "history_len",
                 "tile_count", "values", "momenta", "histories")

    def __init__(self, low: float, high: float, offset: float, width: float,
                 history_len: int = 100):
        if not low < high:
            raise ValueError(f"need low < high, got [{low}, {high})")
        if not 0.0 <= offset < high - low:
            raise ValueError(f"offset {offset} outside [0, {high - low})")
        if not width > 0:
            raise ValueError(f"width must be positive, got {width}")
        if history_len < 1:
            raise ValueError(f"history_len must be >= 1, got {history_len}")
        self.low = float(low)
        self.high = float(high)
        self.offset = float(offset)
        self.width = float(width)
        self.history_len = int(history_len)
        if self.offset > 0:
            count = math.floor((self.high - self.low - self.offset) / self.width) + 2
        else:
            count = math.floor((self.high - self.low) / self.width) + 1
        self.tile_count = int(count)
        self.values = np.zeros(self.tile_count)
        self.momenta = np.zeros(self.tile_count)
        # histories are sparse: most tiles are never observed in a run
        self.histories: dict[int, RewardHistory] = {}

    def tile_index(self, x: float) -> int:
        """Index of the tile covering x. Rejects x outside [low, high)."""
        if not self.low <= x < self.high:
            raise ValueError(f"x={x} outside [{self.low}, {self.high})")
        idx = math.floor((x - self.low - self.offset) / self.width) + 1
        if idx < 0:
            return 0
        if idx >= self.tile_count:
            return self.tile_count - 1
        return idx

    def tile_value(self, x: float) -> float:
        return float(self.values[self.tile_index(x)])

    def update_tile(self, x: float, max_reward: float, learning_rate: float,
                    momentum: float) -> int:
        """One SGD-with-momentum step of the covering tile's value toward
        max_reward. Returns the updated tile index."""
        idx = self.tile_index(x)
        self._step(idx, max_reward, learning_rate, momentum)
        return idx

    def observe(self, x: float, immediate: float, learning_rate: float,
                momentum: float) -> tuple[int, float]:
        """Push an immediate reward into the covering tile's window and apply
        the max-credit update.

        Returns (tile index, value change) so callers can maintain derived
        caches incrementally.
        """
        idx = self.tile_index(x)
        hist = self.histories.get(idx)
        if hist is None:
            hist = self.histories[idx] = RewardHistory(self.history_len)
        hist.push(immediate)
        delta = self._step(idx, hist.max(), learning_rate, momentum)
        return idx, delta

    def _step(self, idx: int, max_reward: float, learning_rate: float,
              momentum: float) -> float:
        g = 2.0 * (self.values[idx] - max_reward)
        m = momentum * self.momenta[idx] + g
        self.momenta[idx] = m
        delta = -learning_rate * (g + momentum * m)
        self.values[idx] += delta
        return delta

    # -- serialization ------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "low": self.low,
            "high": self.high,
            "offset": self.offset,
            "width": self.width,
            "history_len": self.history_len,
            "values": self.values.tolist(),
            "momenta": self.momenta.tolist(),
            "histories": {str(i): h.values() for i, h in self.histories.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TileCoding":
        coding = cls(d["low"], d["high"], d["offset"], d["width"], d["history_len"])
        values = np.asarray(d["values"], dtype=float)
        momenta = np.asarray(d["momenta"], dtype=float)
        if values.shape != coding.values.shape or momenta.shape != coding.momenta.shape:
            raise ValueError("serialized tile arrays do not match tiling shape")
        coding.values = values
        coding.momenta = momenta
        coding.histories = {
            int(i): RewardHistory.from_values(vals, coding.history_len)
            for i, vals in d["histories"].items()
        }
        return coding
