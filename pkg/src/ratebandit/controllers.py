"""Mutation-rate controllers behind one small interface.

A controller answers one question per child ("what rate should this parent
be mutated at?") and hears the outcome right after evaluation. Five
strategies are provided: a constant rate, self-adaptive per-individual
rates, a coevolved rate population scored per group, a look-ahead oracle
that simulates candidate rates on cloned runs, and the tile-coded bandit
ensemble from the bandit module.
"""
from __future__ import annotations

import math
from collections import deque

import numpy as np

from .bandit import BanditEnsemble

__all__ = [
    "RateController", "FixedRate", "SelfAdaptiveRates", "GroupEliteRates",
    "LookaheadRates", "BanditController", "gesmr_generation",
]


class RateController:
    """Interface shared by every rate strategy.

    Lifecycle per run: prepare() once after the initial population is
    evaluated, then per generation begin_generation / N×(sample, report) /
    end_generation. All hooks default to no-ops so trivial controllers
    stay trivial.
    """

    #: when True the evolution loop stores each sampled rate on the child
    attaches_rates = False
    #: exploration probability, None for controllers without one
    epsilon: float | None = None

    def prepare(self, population, rng: np.random.Generator) -> None:
        pass

    def begin_generation(self, run) -> None:
        pass

    def sample(self, parent, rng: np.random.Generator) -> float:
        raise NotImplementedError

    def report(self, rate: float, parent_errors: np.ndarray,
               child_errors: np.ndarray) -> None:
        pass

    def end_generation(self, rng: np.random.Generator) -> None:
        pass


class FixedRate(RateController):
    """The same strictly positive rate for every child."""

    def __init__(self, rate: float):
        if not (rate > 0 and math.isfinite(rate)):
            raise ValueError(f"rate must be finite and positive, got {rate!r}")
        self.rate = float(rate)

    def sample(self, parent, rng: np.random.Generator) -> float:
        return self.rate

    def __repr__(self) -> str:
        return f"FixedRate({self.rate!r})"


class SelfAdaptiveRates(RateController):
    """Each individual carries its own rate; a child's rate is its parent's
    scaled by meta_factor**u, u ~ U([-1, 1]), and the child is mutated at
    that new rate.
    """

    attaches_rates = True

    def __init__(self, meta_factor: float = 2.0,
                 init_low: float = 1e-3, init_high: float = 1e3):
        if meta_factor <= 1:
            raise ValueError("meta factor must exceed 1")
        if not 0 < init_low <= init_high:
            raise ValueError("initial rate span must be positive and ordered")
        self.meta_factor = float(meta_factor)
        self.init_low = float(init_low)
        self.init_high = float(init_high)

    def prepare(self, population, rng: np.random.Generator) -> None:
        # Log-spaced spread over the whole span, assigned in population order.
        rates = np.logspace(math.log10(self.init_low),
                            math.log10(self.init_high), len(population))
        for ind, rate in zip(population, rates):
            ind.rate = float(rate)

    def sample(self, parent, rng: np.random.Generator) -> float:
        if parent.rate is None:
            raise ValueError("parent has no attached rate; was prepare() called?")
        return parent.rate * self.meta_factor ** rng.uniform(-1.0, 1.0)


def gesmr_generation(rates, improvements, rng: np.random.Generator,
                     truncation_size: int = 4) -> np.ndarray:
    """One meta-generation of the group-elite rate population.

    Each rate's fitness is the maximum parent-to-child improvement observed
    in its group. The single fittest rate survives unmutated (lowest index
    on ties); the rest are refilled by a uniform draw among the
    truncation_size fittest, scaled by 2**U([-1, 1]).
    """
    rates = np.asarray(rates, dtype=float)
    k = len(rates)
    if k < 1:
        raise ValueError("rate population is empty")
    if len(improvements) != k:
        raise ValueError(f"expected {k} improvement groups, got {len(improvements)}")
    if not 1 <= truncation_size <= k:
        raise ValueError(f"meta truncation size {truncation_size} outside [1, {k}]")
    fitness = np.empty(k)
    for i, group in enumerate(improvements):
        group = np.asarray(group, dtype=float)
        if group.size == 0:
            raise ValueError(f"rate group {i} has no observations")
        fitness[i] = group.max()
    order = np.argsort(-fitness, kind="stable")
    top = rates[order[:truncation_size]]
    picks = top[rng.integers(0, len(top), size=k - 1)]
    factors = np.exp2(rng.uniform(-1.0, 1.0, size=k - 1))
    return np.concatenate(([rates[order[0]]], picks * factors))


class GroupEliteRates(RateController):
    """Coevolves a small population of rates alongside the main population.

    Children are dealt to rates round-robin (child i gets rate i mod K), so
    every rate sees an equal (or off-by-one) share of each generation. The
    controller needs at least K children per generation so every group
    gets at least one observation.
    """

    def __init__(self, num_rates: int = 10, truncation_size: int = 4,
                 init_low: float = 1e-3, init_high: float = 1e3):
        if num_rates < 1:
            raise ValueError("need at least one rate")
        if not 1 <= truncation_size <= num_rates:
            raise ValueError("meta truncation size outside [1, num_rates]")
        if not 0 < init_low <= init_high:
            raise ValueError("initial rate span must be positive and ordered")
        self.truncation_size = truncation_size
        self.rates = np.logspace(math.log10(init_low), math.log10(init_high),
                                 num_rates)
        self._improvements: list[list[float]] = [[] for _ in range(num_rates)]
        self._next_child = 0
        self._pending: deque[int] = deque()

    def begin_generation(self, run) -> None:
        self._improvements = [[] for _ in range(len(self.rates))]
        self._next_child = 0
        self._pending.clear()

    def sample(self, parent, rng: np.random.Generator) -> float:
        group = self._next_child % len(self.rates)
        self._next_child += 1
        self._pending.append(group)
        return float(self.rates[group])

    def report(self, rate: float, parent_errors: np.ndarray,
               child_errors: np.ndarray) -> None:
        group = self._pending.popleft()
        improvement = float(np.mean(parent_errors)) - float(np.mean(child_errors))
        self._improvements[group].append(improvement)

    def end_generation(self, rng: np.random.Generator) -> None:
        self.rates = gesmr_generation(self.rates, self._improvements, rng,
                                      self.truncation_size)


class LookaheadRates(RateController):
    """Oracle that re-picks a fixed rate every `lookahead` generations by
    simulating each candidate on a clone of the live run.

    Simulations draw from seed streams forked off `seed_seq`, never from
    the host run's generator, so the main trajectory is byte-identical
    whether or not any simulation executes.
    """

    def __init__(self, candidates=None, lookahead: int = 100,
                 seed_seq: np.random.SeedSequence | None = None):
        if candidates is None:
            candidates = np.logspace(-3.0, 0.0, 10)
        self.candidates = [float(c) for c in candidates]
        if not self.candidates or any(c <= 0 for c in self.candidates):
            raise ValueError("candidate rates must be a nonempty positive sequence")
        if lookahead < 1:
            raise ValueError("lookahead must be >= 1")
        self.lookahead = lookahead
        self.seed_seq = seed_seq if seed_seq is not None else np.random.SeedSequence(0)
        self.current_rate = self.candidates[0]
        self.history: list[tuple[int, float]] = []

    def begin_generation(self, run) -> None:
        if run.generation % self.lookahead == 0:
            self.current_rate = self._select(run)
            self.history.append((run.generation, self.current_rate))

    def _select(self, run) -> float:
        if len(self.candidates) == 1:
            return self.candidates[0]
        seeds = self.seed_seq.spawn(len(self.candidates))
        scores = []
        for rate, seed in zip(self.candidates, seeds):
            sim = run.clone_for_lookahead(
                FixedRate(rate), np.random.Generator(np.random.PCG64(seed)))
            for _ in range(self.lookahead):
                if sim.solved:
                    break
                sim.step()
            scores.append(min(ind.mean_error for ind in sim.population))
        return self.candidates[int(np.argmin(scores))]

    def sample(self, parent, rng: np.random.Generator) -> float:
        return self.current_rate


class BanditController(RateController):
    """Adapter that plugs a BanditEnsemble into the evolution loop.

    Sampled log-rates are queued so the report path feeds the exact
    sampled coordinate back to the ensemble instead of re-deriving it
    through log(exp(x)), which can round outside the search interval at
    its edges.
    """

    def __init__(self, ensemble: BanditEnsemble):
        self.ensemble = ensemble
        self._pending: deque[tuple[float, float]] = deque()

    @property
    def epsilon(self) -> float:
        return self.ensemble.epsilon

    def sample(self, parent, rng: np.random.Generator) -> float:
        drawn = self.ensemble.sample(rng)
        self._pending.append((drawn.rate, drawn.log_rate))
        return drawn.rate

    def report(self, rate: float, parent_errors: np.ndarray,
               child_errors: np.ndarray) -> None:
        if self._pending and self._pending[0][0] == rate:
            log_rate = self._pending.popleft()[1]
        else:
            log_rate = math.log(rate)
        self.ensemble.update_at_log(log_rate, parent_errors, child_errors)

    def end_generation(self, rng: np.random.Generator) -> None:
        self.ensemble.advance_generation()
