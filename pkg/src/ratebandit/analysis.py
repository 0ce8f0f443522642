"""Reward-landscape probing and the statistics behind result tables.

The probe shadows a live evolutionary run: each generation it draws extra
(parent, child) pairs at a fixed grid of mutation rates, scores them with
the same improvement reward the bandit sees, and keeps the results outside
the evolving population. Smoothing utilities (sliding max, EWMA) and the
significance tests used to compare controllers live here too.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np
import scipy.signal
import scipy.stats

from .evolution import _make_selector
from .reward import immediate_reward

__all__ = [
    "max_pool_1d", "ewma", "bootstrap_ci", "welch_t_statistic", "welch_t_test",
    "two_proportion_z", "two_proportion_z_test", "StatReport",
    "ProbeConfig", "LandscapeProbe", "PROBE_REWARD_KINDS",
]


def max_pool_1d(values, kernel: int) -> np.ndarray:
    """Sliding maximum with stride 1: out[i] = max(values[i : i + kernel])."""
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError("expected a 1-D sequence")
    if kernel < 1:
        raise ValueError("kernel must be >= 1")
    if arr.size < kernel:
        raise ValueError(f"sequence length {arr.size} shorter than kernel {kernel}")
    return np.lib.stride_tricks.sliding_window_view(arr, kernel).max(axis=1)


def ewma(values, alpha: float = 0.01) -> np.ndarray:
    """Exponentially weighted moving average seeded at the first element:
    y0 = x0, yi = (1 - alpha) * y(i-1) + alpha * xi."""
    if not 0 < alpha <= 1:
        raise ValueError("alpha must lie in (0, 1]")
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1:
        raise ValueError("expected a 1-D sequence")
    if arr.size == 0:
        return arr.copy()
    out, _ = scipy.signal.lfilter([alpha], [1.0, alpha - 1.0], arr,
                                  zi=[(1.0 - alpha) * arr[0]])
    return out


@dataclass(frozen=True)
class StatReport:
    """Point estimate with a bootstrap CI and, where relevant, a p-value."""

    estimate: float
    ci_low: float
    ci_high: float
    p_value: float | None = None


def bootstrap_ci(samples, statistic: Callable[[np.ndarray], float] | None = None,
                 resamples: int = 10000, level: float = 0.95,
                 rng: np.random.Generator | None = None) -> StatReport:
    """Percentile bootstrap CI for a statistic (mean by default).

    With rng omitted a fixed-seed generator is used, so repeated calls are
    reproducible; pass your own stream for independent replicates.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise ValueError("samples must be a nonempty 1-D sequence")
    if not 0 < level < 1:
        raise ValueError("confidence level must lie in (0, 1)")
    if rng is None:
        rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(0)))
    idx = rng.integers(0, arr.size, size=(resamples, arr.size))
    if statistic is None:
        estimate = float(arr.mean())
        stats = arr[idx].mean(axis=1)
    else:
        estimate = float(statistic(arr))
        stats = np.apply_along_axis(statistic, 1, arr[idx])
    tail = (1.0 - level) / 2.0
    lo, hi = np.quantile(stats, [tail, 1.0 - tail])
    return StatReport(estimate, float(lo), float(hi))


def welch_t_statistic(a, b) -> tuple[float, float]:
    """Unequal-variance t statistic and its Welch-Satterthwaite degrees of
    freedom. Requires at least two observations per sample."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size < 2 or b.size < 2:
        raise ValueError("each sample needs at least two observations")
    va, vb = a.var(ddof=1), b.var(ddof=1)
    sa, sb = va / a.size, vb / b.size
    if sa + sb == 0:
        return 0.0, float(a.size + b.size - 2)
    t = (a.mean() - b.mean()) / math.sqrt(sa + sb)
    df = (sa + sb) ** 2 / (sa ** 2 / (a.size - 1) + sb ** 2 / (b.size - 1))
    return float(t), float(df)


def welch_t_test(a, b, alternative: str = "two-sided") -> float:
    """Welch's t-test p-value.

    alternative: "two-sided", "less" (mean of a below mean of b), or
    "greater". Both samples constant and equal means 1.0; constant but
    different means 0.0.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    t, df = welch_t_statistic(a, b)
    if a.var(ddof=1) + b.var(ddof=1) == 0:
        if a.mean() == b.mean():
            return 1.0
        t = math.inf if a.mean() > b.mean() else -math.inf
    if alternative == "two-sided":
        return float(2.0 * scipy.stats.t.sf(abs(t), df))
    if alternative == "less":
        return float(scipy.stats.t.sf(-t, df))
    if alternative == "greater":
        return float(scipy.stats.t.sf(t, df))
    raise ValueError(f"unknown alternative {alternative!r}")


def two_proportion_z(successes_a: int, total_a: int,
                     successes_b: int, total_b: int) -> float:
    """Pooled two-proportion z statistic; 0 when the pooled variance is 0."""
    for s, n in ((successes_a, total_a), (successes_b, total_b)):
        if n < 1:
            raise ValueError("group totals must be >= 1")
        if not 0 <= s <= n:
            raise ValueError(f"success count {s} outside [0, {n}]")
    pa = successes_a / total_a
    pb = successes_b / total_b
    pooled = (successes_a + successes_b) / (total_a + total_b)
    var = pooled * (1.0 - pooled) * (1.0 / total_a + 1.0 / total_b)
    if var == 0:
        return 0.0
    return (pa - pb) / math.sqrt(var)


def two_proportion_z_test(successes_a: int, total_a: int,
                          successes_b: int, total_b: int) -> float:
    """Two-sided p-value for a difference of proportions under pooling."""
    z = two_proportion_z(successes_a, total_a, successes_b, total_b)
    return math.erfc(abs(z) / math.sqrt(2.0))


# -- landscape probe ----------------------------------------------------------

PROBE_REWARD_KINDS = ("immediate", "max_window")


@dataclass(frozen=True)
class ProbeConfig:
    """Shadow-sampling settings.

    samples_per_rate of None means "match the host population size". The
    pooling kernel mirrors the bandit's reward-window length.
    """

    rates: tuple[float, ...] = (0.01, 0.03, 0.1, 0.3, 1.0)
    samples_per_rate: int | None = None
    kernel: int = 100
    ewma_rate: float = 0.01

    def __post_init__(self) -> None:
        if not self.rates or any(r <= 0 for r in self.rates):
            raise ValueError("probe rates must be positive")
        if self.samples_per_rate is not None and self.samples_per_rate < 1:
            raise ValueError("samples per rate must be >= 1")
        if self.kernel < 1:
            raise ValueError("pooling kernel must be >= 1")
        if not 0 < self.ewma_rate <= 1:
            raise ValueError("EWMA rate must lie in (0, 1]")


class LandscapeProbe:
    """Run observer that measures per-rate reward statistics on the side.

    Intended for hosts with a fixed-rate controller. All sampling uses the
    probe's own generator, so attaching a probe never perturbs the host
    trajectory. Shadow parents come from the host's selection operator over
    the population that the generation's real children are about to be
    drawn from; shadow children are evaluated but discarded.

    record_real additionally keeps each real child's immediate reward,
    which is handy when comparing shadow and real streams.
    """

    def __init__(self, config: ProbeConfig, rng: np.random.Generator,
                 record_real: bool = False):
        self.config = config
        self.rng = rng
        self.record_real = record_real
        self.rewards: dict[float, list[float]] = {r: [] for r in config.rates}
        self.real_rewards: list[float] = []
        self.generations = 0
        self._samples: int | None = config.samples_per_rate
        self._transform = None

    def begin_generation(self, run) -> None:
        if self._samples is None:
            self._samples = run.config.population_size
        select = _make_selector(run.config.selection, run.population,
                                run.config.truncation_size)
        transform = self._transform = run.config.transform
        for rate in self.config.rates:
            bucket = self.rewards[rate]
            for _ in range(self._samples):
                parent = select(self.rng)
                genome = run.problem.mutate(parent.genome, rate, self.rng)
                child_errors = run.problem.evaluate(genome)
                bucket.append(immediate_reward(parent.errors, child_errors,
                                               transform))
        self.generations += 1

    def on_report(self, parent, child, rate: float) -> None:
        if self.record_real and self._transform is not None:
            self.real_rewards.append(
                immediate_reward(parent.errors, child.errors, self._transform))

    def after_generation(self, run) -> None:
        pass

    def traces(self) -> dict[float, dict[str, np.ndarray]]:
        """Smoothed per-rate streams over the whole run so far.

        "immediate" is the EWMA of raw rewards; "max_window" is the EWMA of
        the kernel-wide sliding maximum over the concatenated stream
        (crossing generation boundaries), empty until one full window fits.
        """
        cfg = self.config
        out: dict[float, dict[str, np.ndarray]] = {}
        for rate, stream in self.rewards.items():
            arr = np.asarray(stream, dtype=float)
            smoothed = ewma(arr, cfg.ewma_rate) if arr.size else arr.copy()
            if arr.size >= cfg.kernel:
                pooled = ewma(max_pool_1d(arr, cfg.kernel), cfg.ewma_rate)
            else:
                pooled = np.empty(0)
            out[rate] = {"immediate": smoothed, "max_window": pooled}
        return out

    def rows(self) -> Iterator[tuple[int, float, str, float]]:
        """CSV rows (generation, rate, reward_kind, smoothed_value).

        Each generation reports the smoothed value at its last sample. A
        max_window row appears only once the pooled stream has reached that
        generation, i.e. from the first generation where a full kernel fits.
        """
        if self._samples is None:
            return
        traces = self.traces()
        s = self._samples
        k = self.config.kernel
        for g in range(self.generations):
            last = (g + 1) * s - 1
            for rate in self.config.rates:
                yield g, rate, "immediate", float(traces[rate]["immediate"][last])
            pooled_idx = (g + 1) * s - k
            if pooled_idx >= 0:
                for rate in self.config.rates:
                    yield g, rate, "max_window", float(traces[rate]["max_window"][pooled_idx])
