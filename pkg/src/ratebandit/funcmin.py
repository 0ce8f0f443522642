"""Real-vector minimization problems with Gaussian mutation.

The controller's sampled rate is interpreted directly as the mutation
standard deviation. Errors are scalar (length-1 error vectors) and compared
untransformed.
"""
from __future__ import annotations

import logging
import math

import numpy as np

__all__ = ["FuncMinProblem", "FUNCMIN_NAMES"]

log = logging.getLogger(__name__)

_FLOAT_MAX = float(np.finfo(np.float64).max)
# exp(+-100) is finite, but meta-mutated baseline rates can leave that range
SIGMA_MIN = 1e-300
SIGMA_MAX = 1e300


def _ackley(x: np.ndarray) -> float:
    a, b, c = 20.0, 0.2, 2.0 * np.pi
    d = x.size
    return float(-a * np.exp(-b * np.sqrt(np.sum(x * x) / d))
                 - np.exp(np.sum(np.cos(c * x)) / d) + a + np.e)


def _griewank(x: np.ndarray) -> float:
    i = np.arange(1, x.size + 1, dtype=float)
    return float(np.sum(x * x) / 4000.0 - np.prod(np.cos(x / np.sqrt(i))) + 1.0)


def _rastrigin(x: np.ndarray) -> float:
    return float(10.0 * x.size + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x)))


def _rosenbrock(x: np.ndarray) -> float:
    return float(np.sum(100.0 * (x[1:] - x[:-1] ** 2) ** 2 + (1.0 - x[:-1]) ** 2))


def _sphere(x: np.ndarray) -> float:
    return float(np.sum(x * x))


def _linear(x: np.ndarray) -> float:
    return float(np.sum(x))


# name -> (function, init sigma)
_CATALOG = {
    "ackley": (_ackley, 10.0),
    "griewank": (_griewank, 1000.0),
    "rastrigin": (_rastrigin, 10.0),
    "rosenbrock": (_rosenbrock, 1.0),
    "sphere": (_sphere, 10.0),
    "linear": (_linear, 1.0),
}

FUNCMIN_NAMES = tuple(_CATALOG)


class FuncMinProblem:
    """One of the six scalar test functions over d-dimensional vectors."""

    domain = "funcmin"
    error_length = 1

    def __init__(self, name: str, dim: int = 100, init_sigma: float | None = None):
        if name not in _CATALOG:
            raise ValueError(f"unknown function {name!r}; choose from {FUNCMIN_NAMES}")
        if dim < 1:
            raise ValueError(f"dimension must be >= 1, got {dim}")
        self.name = name
        self.dim = int(dim)
        fn, default_sigma = _CATALOG[name]
        self._fn = fn
        self.init_sigma = float(init_sigma) if init_sigma is not None else default_sigma
        if self.init_sigma <= 0:
            raise ValueError("init_sigma must be positive")
        self._overflow_warned = False

    def init_population(self, n: int, rng: np.random.Generator) -> list[np.ndarray]:
        return [rng.normal(0.0, self.init_sigma, self.dim) for _ in range(n)]

    def evaluate(self, genome: np.ndarray) -> np.ndarray:
        if genome.size != self.dim:
            raise ValueError(f"genome has dimension {genome.size}, expected {self.dim}")
        with np.errstate(over="ignore", invalid="ignore"):
            value = self._fn(genome)
        if not math.isfinite(value):
            # clamp rather than let infinities poison reward statistics
            if not self._overflow_warned:
                log.warning("%s evaluation overflowed; clamping to largest finite value",
                            self.name)
                self._overflow_warned = True
            value = _FLOAT_MAX if (value > 0 or math.isnan(value)) else -_FLOAT_MAX
        return np.array([value])

    def mutate(self, genome: np.ndarray, rate: float,
               rng: np.random.Generator) -> np.ndarray:
        sigma = min(max(rate, SIGMA_MIN), SIGMA_MAX)
        return genome + rng.normal(0.0, sigma, genome.shape)

    def is_solved(self, errors: np.ndarray) -> bool:
        # minimization runs always go to the generation limit
        return False
