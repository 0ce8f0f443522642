"""Generational evolutionary loop with pluggable rate controllers.

Variation is mutation-only: each child has exactly one parent, selected by
the configured operator, mutated at a rate drawn from the controller, and
reported back to the controller immediately after evaluation so windowed
reward statistics fill within a generation.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from .reward import TransformConfig, transform_errors

__all__ = [
    "Individual", "LoopConfig", "GenerationRow", "RunResult", "EvolutionRun",
    "truncation_select", "lexicase_select", "epsilon_lexicase_select",
]


@dataclass(slots=True)
class Individual:
    """A candidate solution. Treated as immutable once constructed; the loop
    replaces individuals instead of editing them, so clones may share them."""

    genome: Any
    errors: np.ndarray
    rate: float | None = None
    mean_error: float = field(init=False)

    def __post_init__(self) -> None:
        self.mean_error = float(np.mean(self.errors))


# -- selection ---------------------------------------------------------------


def _ranked_indices(population: list[Individual]) -> np.ndarray:
    means = np.array([ind.mean_error for ind in population])
    return np.argsort(means, kind="stable")


def truncation_select(population: list[Individual], truncation_size: int,
                      rng: np.random.Generator) -> Individual:
    """Uniform draw from the best truncation_size individuals by mean error."""
    if not 1 <= truncation_size <= len(population):
        raise ValueError(f"truncation size {truncation_size} outside [1, {len(population)}]")
    ranked = _ranked_indices(population)[:truncation_size]
    return population[int(ranked[rng.integers(len(ranked))])]


def _lexicase_pick(errors: np.ndarray, rng: np.random.Generator,
                   epsilon: np.ndarray | None) -> int:
    """Filter candidates case by case in random order; returns a row index."""
    candidates = np.arange(errors.shape[0])
    for case in rng.permutation(errors.shape[1]):
        col = errors[candidates, case]
        tol = col.min()
        if epsilon is not None:
            tol += epsilon[case]
        candidates = candidates[col <= tol]
        if len(candidates) == 1:
            break
    return int(candidates[rng.integers(len(candidates))])


def lexicase_select(population: list[Individual],
                    rng: np.random.Generator) -> Individual:
    errors = np.stack([ind.errors for ind in population])
    return population[_lexicase_pick(errors, rng, None)]


def case_mad(errors: np.ndarray) -> np.ndarray:
    """Median absolute deviation of each case's errors across the population."""
    med = np.median(errors, axis=0)
    return np.median(np.abs(errors - med), axis=0)


def epsilon_lexicase_select(population: list[Individual],
                            rng: np.random.Generator,
                            epsilon: np.ndarray | None = None) -> Individual:
    """Lexicase with per-case tolerance; defaults to each case's MAD over
    the current population."""
    errors = np.stack([ind.errors for ind in population])
    if epsilon is None:
        epsilon = case_mad(errors)
    return population[_lexicase_pick(errors, rng, epsilon)]


SELECTION_NAMES = ("truncation", "lexicase", "epsilon-lexicase")


def _make_selector(name: str, population: list[Individual],
                   truncation_size: int) -> Callable[[np.random.Generator], Individual]:
    """Build a per-generation selector with shared precomputed state."""
    if name == "truncation":
        ranked = _ranked_indices(population)[:truncation_size]

        def pick(rng: np.random.Generator) -> Individual:
            return population[int(ranked[rng.integers(len(ranked))])]
        return pick

    errors = np.stack([ind.errors for ind in population])
    epsilon = case_mad(errors) if name == "epsilon-lexicase" else None
    if name not in SELECTION_NAMES:
        raise ValueError(f"unknown selection operator {name!r}")

    def pick(rng: np.random.Generator) -> Individual:
        return population[_lexicase_pick(errors, rng, epsilon)]
    return pick


# -- run bookkeeping ----------------------------------------------------------


@dataclass(frozen=True)
class LoopConfig:
    """Loop-level knobs for one evolutionary run."""

    population_size: int
    generations: int
    elites: int = 0
    selection: str = "truncation"
    truncation_size: int = 10
    transform: TransformConfig = TransformConfig()
    record_rates: bool = False

    def __post_init__(self) -> None:
        if self.population_size < 2:
            raise ValueError("population size must be >= 2")
        if self.generations < 1:
            raise ValueError("generation limit must be >= 1")
        if not 0 <= self.elites < self.population_size:
            raise ValueError("elite count must lie in [0, population size)")
        if self.selection not in SELECTION_NAMES:
            raise ValueError(f"unknown selection operator {self.selection!r}")


@dataclass(slots=True)
class GenerationRow:
    generation: int
    best_error: float
    best_transformed: float
    mean_log_rate: float
    epsilon: float | None
    solved: bool
    wall_clock: float
    rates: list[float] | None = None


@dataclass(slots=True)
class RunResult:
    rows: list[GenerationRow]
    solved: bool
    solve_generation: int | None
    final_best_error: float


class EvolutionRun:
    """One seeded evolutionary run binding a problem, loop config, and
    controller. Stepping is explicit so callers can stream per-generation
    rows to disk or clone mid-run for lookahead simulations."""

    def __init__(self, problem, config: LoopConfig, controller,
                 rng: np.random.Generator, observer=None):
        self.problem = problem
        self.config = config
        self.controller = controller
        self.rng = rng
        self.observer = observer
        self.generation = 0
        self.rows: list[GenerationRow] = []
        self.population = [
            Individual(g, self._evaluate(g, "init"))
            for g in problem.init_population(config.population_size, rng)
        ]
        controller.prepare(self.population, rng)
        self.solved = any(problem.is_solved(ind.errors) for ind in self.population)
        self.solve_generation = 0 if self.solved else None

    def _evaluate(self, genome, context: str) -> np.ndarray:
        try:
            return self.problem.evaluate(genome)
        except Exception as exc:
            raise RuntimeError(
                f"evaluation failed ({context}, generation {self.generation}): {exc}"
            ) from exc

    def step(self) -> GenerationRow:
        """Run one generation and append its row."""
        t0 = time.perf_counter()
        cfg = self.config
        self.controller.begin_generation(self)
        if self.observer is not None:
            self.observer.begin_generation(self)
        pop = self.population
        ranked = _ranked_indices(pop)
        elites = [pop[int(i)] for i in ranked[:cfg.elites]]
        select = _make_selector(cfg.selection, pop, cfg.truncation_size)

        children: list[Individual] = []
        rates_used: list[float] = []
        # Captured here: end_generation() below advances annealed schedules,
        # and the row must report the value the children were sampled under.
        epsilon_used = getattr(self.controller, "epsilon", None)
        solved_now = False
        attach = getattr(self.controller, "attaches_rates", False)
        for _ in range(cfg.population_size - cfg.elites):
            parent = select(self.rng)
            rate = self.controller.sample(parent, self.rng)
            genome = self.problem.mutate(parent.genome, rate, self.rng)
            child = Individual(genome, self._evaluate(genome, "child"),
                               rate if attach else None)
            self.controller.report(rate, parent.errors, child.errors)
            if self.observer is not None:
                self.observer.on_report(parent, child, rate)
            children.append(child)
            rates_used.append(rate)
            if self.problem.is_solved(child.errors):
                solved_now = True

        self.population = elites + children
        self.controller.end_generation(self.rng)
        if self.observer is not None:
            self.observer.after_generation(self)
        if solved_now:
            self.solved = True
            self.solve_generation = self.generation

        best_ind = min(self.population, key=lambda ind: ind.mean_error)
        best = best_ind.mean_error
        best_tr = float(np.mean(transform_errors(best_ind.errors, cfg.transform)))
        row = GenerationRow(
            generation=self.generation,
            best_error=best,
            best_transformed=best_tr,
            mean_log_rate=(float(np.mean([math.log(r) for r in rates_used]))
                           if rates_used else math.nan),
            epsilon=epsilon_used,
            solved=self.solved,
            wall_clock=time.perf_counter() - t0,
            rates=list(rates_used) if cfg.record_rates else None,
        )
        self.rows.append(row)
        self.generation += 1
        return row

    def run(self) -> RunResult:
        while self.generation < self.config.generations and not self.solved:
            self.step()
        final_best = (min(ind.mean_error for ind in self.population)
                      if self.population else math.nan)
        return RunResult(self.rows, self.solved, self.solve_generation, final_best)

    def clone_for_lookahead(self, controller, rng: np.random.Generator) -> "EvolutionRun":
        """Branch an isolated simulation from the current state.

        Individuals are immutable by convention, so the clone shares them;
        everything mutable (population list, controller, RNG) is fresh.
        """
        sim = object.__new__(EvolutionRun)
        sim.problem = self.problem
        sim.config = self.config
        sim.controller = controller
        sim.rng = rng
        sim.observer = None
        sim.generation = self.generation
        sim.rows = []
        sim.population = list(self.population)
        sim.solved = self.solved
        sim.solve_generation = self.solve_generation
        controller.prepare(sim.population, rng)
        return sim
