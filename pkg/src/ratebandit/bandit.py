"""Epsilon-greedy max-reward bandits over tile-coded log-rate space.

A bandit searches a log-rate interval [log_low, log_high) discretized by a
base grid of resolution-sized cells. Its value estimate at any point is the
mean over ``num_codings`` randomized tilings of the covering tile's value.
Sampling is epsilon-greedy over base cells with Gaussian integer noise
around the argmax; updates push the immediate reward into every tiling and
train tile values toward the max reward in each tile's trailing window.

An ensemble holds several bandits with independently randomized learning
rates; one member is drawn uniformly per sample, and every member receives
every observation.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .reward import TransformConfig, immediate_reward
from .tilecoding import TileCoding

__all__ = ["EpsilonSchedule", "Bandit", "BanditEnsemble", "EnsembleSample"]

# Tiling shape sets, in units of the base resolution. With the default
# resolution 0.03 these are widths {0.18, 0.21, ..., 0.39} and offsets
# {0, 0.03, ..., 0.15}; expressing them in units keeps every offset and
# width an exact integer multiple of the resolution at any scale.
WIDTH_UNIT_CHOICES = tuple(range(6, 14))
OFFSET_UNIT_CHOICES = tuple(range(0, 6))


@dataclass(frozen=True)
class EpsilonSchedule:
    """Linear anneal of the exploration rate over early generations."""

    start: float = 1.0
    end: float = 0.01
    anneal_generations: int = 5

    def value(self, generation: int) -> float:
        # The saturated branch returns `end` exactly (no residual float error).
        if self.anneal_generations <= 0 or generation >= self.anneal_generations:
            return self.end
        frac = generation / self.anneal_generations
        return self.start + (self.end - self.start) * frac


class Bandit:
    """One ensemble member: randomized tilings over a shared log interval.

    The base grid (offset 0, width = resolution) is a read-only sampling
    grid: only the randomized tilings hold learned values. ``_weights``
    caches base_weights(); each observation refreshes just the touched
    cell range so sampling avoids a full recomputation per draw.
    """

    def __init__(self, log_low: float, log_high: float, resolution: float,
                 learning_rate: float, momentum: float, noise: float,
                 codings: list[TileCoding], history_len: int = 100):
        if not log_low < log_high:
            raise ValueError(f"need log_low < log_high, got [{log_low}, {log_high}]")
        if resolution <= 0 or learning_rate <= 0 or noise <= 0:
            raise ValueError("resolution, learning_rate and noise must be positive")
        if not 0.0 <= momentum < 1.0:
            raise ValueError(f"momentum must lie in [0, 1), got {momentum}")
        self.log_low = float(log_low)
        self.log_high = float(log_high)
        self.resolution = float(resolution)
        self.learning_rate = float(learning_rate)
        self.momentum = float(momentum)
        self.noise = float(noise)
        self.history_len = int(history_len)
        self.num_base_tiles = int(math.floor((self.log_high - self.log_low) / self.resolution))
        if self.num_base_tiles < 2:
            raise ValueError("search interval must span at least two base tiles")
        self.codings = list(codings)
        if not self.codings:
            raise ValueError("need at least one tile coding")
        self._coding_units: list[tuple[int, int]] = []
        for coding in self.codings:
            if (coding.low, coding.high) != (self.log_low, self.log_high):
                raise ValueError("all codings must share the bandit's interval")
            off_u = round(coding.offset / self.resolution)
            wid_u = round(coding.width / self.resolution)
            if not math.isclose(off_u * self.resolution, coding.offset, rel_tol=0, abs_tol=1e-12) \
                    or not math.isclose(wid_u * self.resolution, coding.width, rel_tol=1e-12):
                raise ValueError("coding offsets/widths must be integer multiples of the resolution")
            self._coding_units.append((int(off_u), int(wid_u)))
        # Covering map per coding: base cell i -> coding tile index, computed
        # in integer units so grid-aligned points never misround.
        self._maps: list[np.ndarray] = []
        self._starts: list[np.ndarray] = []
        cells = np.arange(self.num_base_tiles, dtype=np.int64)
        for coding, (off_u, wid_u) in zip(self.codings, self._coding_units):
            idx = (cells - off_u) // wid_u + 1
            np.clip(idx, 0, coding.tile_count - 1, out=idx)
            self._maps.append(idx)
            self._starts.append(np.searchsorted(idx, np.arange(coding.tile_count + 1)))
        self._weights = self.base_weights()

    @classmethod
    def random(cls, rng: np.random.Generator, log_low: float, log_high: float,
               resolution: float, learning_rate: float, momentum: float,
               noise: float, num_codings: int, history_len: int = 100) -> "Bandit":
        """Draw tiling shapes uniformly from the documented unit sets."""
        codings = []
        for _ in range(num_codings):
            off_u = OFFSET_UNIT_CHOICES[rng.integers(len(OFFSET_UNIT_CHOICES))]
            wid_u = WIDTH_UNIT_CHOICES[rng.integers(len(WIDTH_UNIT_CHOICES))]
            codings.append(TileCoding(log_low, log_high, off_u * resolution,
                                      wid_u * resolution, history_len))
        return cls(log_low, log_high, resolution, learning_rate, momentum,
                   noise, codings, history_len)

    def base_weights(self) -> np.ndarray:
        """Mean covering-tile value at each base cell, recomputed exactly."""
        gathered = np.stack([coding.values[m]
                             for coding, m in zip(self.codings, self._maps)])
        return np.mean(gathered, axis=0)

    def sample_log_rate(self, rng: np.random.Generator, epsilon: float) -> float:
        """Epsilon-greedy draw of a log rate from the base grid."""
        n = self.num_base_tiles
        if rng.random() < epsilon:
            best = int(rng.integers(n))
        else:
            best = int(np.argmax(self._weights))
            best += math.floor(rng.normal(0.0, self.noise))
            best = min(max(best, 0), n - 1)
        return rng.uniform(self.log_low + self.resolution * best,
                           self.log_low + self.resolution * (best + 1))

    def sample_rate(self, rng: np.random.Generator, epsilon: float) -> float:
        return math.exp(self.sample_log_rate(rng, epsilon))

    def observe_log(self, log_rate: float, reward: float) -> None:
        """Feed one (log rate, immediate reward) observation to every tiling."""
        lo, hi = self.num_base_tiles, 0
        for coding, starts in zip(self.codings, self._starts):
            idx, _ = coding.observe(log_rate, reward,
                                    self.learning_rate, self.momentum)
            lo = min(lo, int(starts[idx]))
            hi = max(hi, int(starts[idx + 1]))
        if lo < hi:
            # same gather and reduction as base_weights(), restricted to the
            # touched cells, so the cache never drifts from a full recompute
            gathered = np.stack([coding.values[m[lo:hi]]
                                 for coding, m in zip(self.codings, self._maps)])
            self._weights[lo:hi] = np.mean(gathered, axis=0)

    def update(self, rate: float, parent: np.ndarray, child: np.ndarray,
               cfg: TransformConfig) -> None:
        """Observe a parent/child outcome at the given raw rate."""
        x = math.log(rate)
        if not self.log_low <= x < self.log_high:
            raise ValueError(f"log rate {x} outside [{self.log_low}, {self.log_high})")
        self.observe_log(x, immediate_reward(parent, child, cfg))

    def to_dict(self) -> dict:
        return {
            "learning_rate": self.learning_rate,
            "codings": [c.to_dict() for c in self.codings],
        }


class EnsembleSample(NamedTuple):
    rate: float
    log_rate: float
    bandit: int


class BanditEnsemble:
    """Several bandits with randomized learning rates behind one sampler.

    Sampling picks one member uniformly; updates go to every member. The
    exploration rate is shared and advances once per host generation.
    """

    def __init__(self, bandits: list[Bandit], schedule: EpsilonSchedule,
                 transform: TransformConfig, generation: int = 0):
        if not bandits:
            raise ValueError("ensemble needs at least one bandit")
        self.bandits = list(bandits)
        self.schedule = schedule
        self.transform = transform
        self.generation = int(generation)

    @classmethod
    def random(cls, rng: np.random.Generator, num_bandits: int = 5,
               log_low: float = -10.0, log_high: float = 0.0,
               resolution: float = 0.03, noise: float = 3.0,
               momentum: float = 0.9, num_codings: int = 20,
               history_len: int = 100,
               schedule: EpsilonSchedule | None = None,
               transform: TransformConfig | None = None) -> "BanditEnsemble":
        """Construct an ensemble, drawing each member's learning rate from
        10^U([-4, -3]) and its tiling shapes from the documented sets."""
        bandits = []
        for _ in range(num_bandits):
            gamma = 10.0 ** rng.uniform(-4.0, -3.0)
            bandits.append(Bandit.random(rng, log_low, log_high, resolution,
                                         gamma, momentum, noise, num_codings,
                                         history_len))
        return cls(bandits, schedule or EpsilonSchedule(),
                   transform or TransformConfig())

    @property
    def epsilon(self) -> float:
        return self.schedule.value(self.generation)

    def advance_generation(self) -> None:
        self.generation += 1

    def sample(self, rng: np.random.Generator) -> EnsembleSample:
        """Pick a member uniformly and draw a rate from it."""
        pick = int(rng.integers(len(self.bandits)))
        log_rate = self.bandits[pick].sample_log_rate(rng, self.epsilon)
        return EnsembleSample(math.exp(log_rate), log_rate, pick)

    def update(self, rate: float, parent: np.ndarray, child: np.ndarray) -> None:
        """Report one outcome at a raw rate to every member."""
        self.update_at_log(math.log(rate), parent, child)

    def update_at_log(self, log_rate: float, parent: np.ndarray,
                      child: np.ndarray) -> None:
        b0 = self.bandits[0]
        if not b0.log_low <= log_rate < b0.log_high:
            raise ValueError(
                f"log rate {log_rate} outside [{b0.log_low}, {b0.log_high})")
        reward = immediate_reward(parent, child, self.transform)
        for bandit in self.bandits:
            bandit.observe_log(log_rate, reward)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> str:
        b0 = self.bandits[0]
        doc = {
            "log_low": b0.log_low,
            "log_high": b0.log_high,
            "resolution": b0.resolution,
            "noise": b0.noise,
            "momentum": b0.momentum,
            "history_len": b0.history_len,
            "generation": self.generation,
            "epsilon": self.epsilon,
            "schedule": {
                "start": self.schedule.start,
                "end": self.schedule.end,
                "anneal_generations": self.schedule.anneal_generations,
            },
            "transform": {"c": self.transform.c, "identity": self.transform.identity},
            "bandits": [b.to_dict() for b in self.bandits],
        }
        return json.dumps(doc)

    @classmethod
    def from_json(cls, text: str) -> "BanditEnsemble":
        doc = json.loads(text)
        sched = EpsilonSchedule(**doc["schedule"])
        transform = TransformConfig(**doc["transform"])
        bandits = []
        for bd in doc["bandits"]:
            codings = [TileCoding.from_dict(cd) for cd in bd["codings"]]
            bandits.append(Bandit(doc["log_low"], doc["log_high"], doc["resolution"],
                                  bd["learning_rate"], doc["momentum"], doc["noise"],
                                  codings, doc["history_len"]))
        return cls(bandits, sched, transform, generation=doc["generation"])
