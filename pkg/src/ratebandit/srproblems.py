"""Symbolic regression over linear token genomes.

Programs are postfix token sequences executed on a single numeric stack.
An instruction without enough operands is a no-op; division by zero and
log of a non-positive value push 0.0; every pushed value is clamped to
[-1e6, 1e6]. The program's output is the top of the stack; a program that
leaves the stack empty scores the penalty error on every case.

Binary operators take the second-popped value as the left operand, so
[a, b, SUB] computes a - b.
"""
from __future__ import annotations

import math

import numpy as np

from .umad import umad_mutate, random_genome

__all__ = [
    "INPUT", "CONST_ONE", "ADD", "SUB", "MUL", "DIV", "SIN", "COS", "LOG",
    "INSTRUCTION_SET", "INSTRUCTION_NAMES", "execute", "nguyen_target",
    "SrProblem", "SR_NAMES",
]

INPUT, CONST_ONE, ADD, SUB, MUL, DIV, SIN, COS, LOG = range(9)
INSTRUCTION_SET = tuple(range(9))
INSTRUCTION_NAMES = ("input", "1.0", "add", "sub", "mul", "div", "sin", "cos", "log")

VALUE_CLAMP = 1.0e6
PENALTY_ERROR = 1.0e6
HIT_THRESHOLD = 0.01


def _clamp(v: float) -> float:
    if v > VALUE_CLAMP:
        return VALUE_CLAMP
    if v < -VALUE_CLAMP:
        return -VALUE_CLAMP
    return v


def execute(genome, x: float) -> float | None:
    """Run a program on one input; returns the output or None if the stack
    ends empty."""
    stack: list[float] = []
    for op in genome:
        if op == INPUT:
            stack.append(_clamp(float(x)))
        elif op == CONST_ONE:
            stack.append(1.0)
        elif op <= DIV:  # binary
            if len(stack) < 2:
                continue
            b = stack.pop()
            a = stack.pop()
            if op == ADD:
                v = a + b
            elif op == SUB:
                v = a - b
            elif op == MUL:
                v = a * b
            else:
                v = a / b if b != 0.0 else 0.0
            stack.append(_clamp(v))
        else:  # unary
            if not stack:
                continue
            a = stack.pop()
            if op == SIN:
                v = math.sin(a)
            elif op == COS:
                v = math.cos(a)
            else:
                v = math.log(a) if a > 0.0 else 0.0
            stack.append(_clamp(v))
    return stack[-1] if stack else None


def _execute_cases(genome, xs: np.ndarray, ones: np.ndarray) -> np.ndarray | None:
    """Vectorized execute across the whole input grid at once.

    xs must already lie within the value clamp; callers pass a pre-clamped
    grid so INPUT can push a shared array without copying.
    """
    stack: list[np.ndarray] = []
    pop = stack.pop
    push = stack.append
    for op in genome:
        if op == INPUT:
            push(xs)
        elif op == CONST_ONE:
            push(ones)
        elif op <= DIV:
            if len(stack) < 2:
                continue
            b = pop()
            a = pop()
            if op == ADD:
                v = a + b
            elif op == SUB:
                v = a - b
            elif op == MUL:
                v = a * b
            else:
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    v = np.where(b == 0.0, 0.0, a / b)
            push(np.clip(v, -VALUE_CLAMP, VALUE_CLAMP))
        else:
            if not stack:
                continue
            a = pop()
            if op == SIN:
                v = np.sin(a)
            elif op == COS:
                v = np.cos(a)
            else:
                v = np.where(a > 0.0, np.log(np.where(a > 0.0, a, 1.0)), 0.0)
            push(np.clip(v, -VALUE_CLAMP, VALUE_CLAMP))
    return stack[-1] if stack else None


def nguyen_target(number: int, x):
    """Closed-form target value for problems 1 through 8."""
    if number == 1:
        return x ** 3 + x ** 2 + x
    if number == 2:
        return x ** 4 + x ** 3 + x ** 2 + x
    if number == 3:
        return x ** 5 + x ** 4 + x ** 3 + x ** 2 + x
    if number == 4:
        return x ** 6 + x ** 5 + x ** 4 + x ** 3 + x ** 2 + x
    if number == 5:
        return np.sin(x ** 2) * np.cos(x) - 1.0
    if number == 6:
        return np.sin(x) + np.sin(x + x ** 2)
    if number == 7:
        return np.log(x + 1.0) + np.log(x ** 2 + 1.0)
    if number == 8:
        return np.sqrt(x)
    raise ValueError(f"unknown target number {number}")


SR_NAMES = tuple(f"nguyen{i}" for i in range(1, 9))


class SrProblem:
    """One Nguyen regression target over its evenly spaced input grid.

    Problems 1-6 use 81 inputs spanning [-4, 4]; 7 and 8 shift the grid to
    [0, 8] to stay inside the targets' domains. A run solves the problem
    when every case error is below the hit threshold.
    """

    domain = "sr"

    def __init__(self, name: str, max_len: int = 500,
                 init_len_low: int = 5, init_len_high: int = 50):
        if name not in SR_NAMES:
            raise ValueError(f"unknown problem {name!r}; choose from {SR_NAMES}")
        self.name = name
        self.number = int(name.removeprefix("nguyen"))
        if self.number <= 6:
            self.inputs = np.linspace(-4.0, 4.0, 81)
        else:
            self.inputs = np.linspace(0.0, 8.0, 81)
        self.targets = nguyen_target(self.number, self.inputs)
        self.error_length = len(self.inputs)
        self.instruction_set = INSTRUCTION_SET
        self.max_len = int(max_len)
        if not 1 <= init_len_low <= init_len_high:
            raise ValueError("need 1 <= init_len_low <= init_len_high")
        self.init_len_low = int(init_len_low)
        self.init_len_high = int(init_len_high)
        self._ones = np.ones_like(self.inputs)
        self._xs = np.clip(self.inputs, -VALUE_CLAMP, VALUE_CLAMP)
        self._penalty = np.full(self.error_length, PENALTY_ERROR)

    def init_population(self, n: int, rng: np.random.Generator) -> list[np.ndarray]:
        return [random_genome(int(rng.integers(self.init_len_low, self.init_len_high + 1)),
                              self.instruction_set, rng)
                for _ in range(n)]

    def evaluate(self, genome: np.ndarray) -> np.ndarray:
        out = _execute_cases(genome.tolist(), self._xs, self._ones)
        if out is None:
            return self._penalty.copy()
        return np.abs(out - self.targets)

    def mutate(self, genome: np.ndarray, rate: float,
               rng: np.random.Generator) -> np.ndarray:
        return umad_mutate(genome, rate, self.instruction_set, rng, self.max_len)

    def is_solved(self, errors: np.ndarray) -> bool:
        return bool(np.all(errors < HIT_THRESHOLD))
