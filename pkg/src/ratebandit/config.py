"""Experiment configuration: a flat key=value format with [section] headers.

The format is deliberately line-oriented so every diagnostic can point at
an exact line. Values layer in fixed precedence: built-in defaults, then
preset, then config file, then RATEBANDIT_* environment variables, then
command-line flags. Defaults that depend on the problem domain (noise,
log-rate interval, transform, selection, elites) are filled in last, only
where nothing explicit was given.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from .analysis import ProbeConfig
from .bandit import BanditEnsemble, EpsilonSchedule
from .controllers import (BanditController, FixedRate, GroupEliteRates,
                          LookaheadRates, SelfAdaptiveRates)
from .evolution import SELECTION_NAMES, LoopConfig
from .funcmin import FUNCMIN_NAMES, FuncMinProblem
from .reward import TransformConfig
from .srproblems import SR_NAMES, SrProblem

__all__ = [
    "ConfigError", "ExperimentSpec", "load_spec", "parse_config_text",
    "PRESET_NAMES", "CONTROLLER_NAMES", "ENV_PREFIX",
]

ENV_PREFIX = "RATEBANDIT_"
CONTROLLER_NAMES = ("fixed", "samr", "gesmr", "lamr", "bandit")
PRESET_NAMES = ("funcmin-desk", "sr-desk", "paper-full", "smoke")

# (type, static default); None default means domain-dependent or required.
# Types: int, float, bool, str, floatlist, optint (empty string -> None).
_SCHEMA: dict[str, dict[str, tuple[str, str | None]]] = {
    "run": {
        "problem": ("str", None),
        "controllers": ("str", "bandit"),
        "population": ("int", None),
        "elites": ("int", None),
        "generations": ("int", None),
        "selection": ("str", None),
        "truncation_size": ("int", "10"),
        "runs": ("int", "50"),
        "seed_base": ("int", "0"),
        "out": ("str", "results"),
        "probe": ("bool", "false"),
    },
    "problem": {
        "dim": ("int", "100"),
        "max_len": ("int", "500"),
        "init_len_low": ("int", "5"),
        "init_len_high": ("int", "50"),
    },
    "transform": {
        "identity": ("bool", None),
        "c": ("float", None),
    },
    "bandit": {
        "num_bandits": ("int", "5"),
        "log_low": ("float", None),
        "log_high": ("float", None),
        "resolution": ("float", "0.03"),
        "noise": ("float", None),
        "momentum": ("float", "0.9"),
        "num_codings": ("int", "20"),
        "len_history": ("int", "100"),
        "epsilon_start": ("float", "1.0"),
        "epsilon_end": ("float", "0.01"),
        "epsilon_anneal": ("int", "5"),
    },
    "fixed": {
        "rate": ("float", "0.1"),
    },
    "samr": {
        "meta_factor": ("float", "2.0"),
        "init_low": ("float", "1e-3"),
        "init_high": ("float", "1e3"),
    },
    "gesmr": {
        "num_rates": ("int", "10"),
        "truncation_size": ("int", "4"),
        "init_low": ("float", "1e-3"),
        "init_high": ("float", "1e3"),
    },
    "lamr": {
        "lookahead": ("int", "100"),
        "num_candidates": ("int", "10"),
        "low": ("float", "1e-3"),
        "high": ("float", "1.0"),
    },
    "probe": {
        "rates": ("floatlist", "0.01,0.03,0.1,0.3,1"),
        "samples_per_rate": ("optint", ""),
        "kernel": ("int", "100"),
        "ewma": ("float", "0.01"),
    },
}

# Domain-dependent defaults: (function minimization, symbolic regression).
_DOMAIN_DEFAULTS: dict[tuple[str, str], tuple[str, str]] = {
    ("run", "population"): ("101", "1000"),
    ("run", "elites"): ("1", "0"),
    ("run", "generations"): ("1000", "300"),
    ("run", "selection"): ("truncation", "epsilon-lexicase"),
    ("transform", "identity"): ("true", "false"),
    ("transform", "c"): ("1.0", "0.01"),
    ("bandit", "log_low"): ("-100", "-10"),
    ("bandit", "log_high"): ("100", "0"),
    ("bandit", "noise"): ("7", "3"),
}

_PRESETS: dict[str, dict[tuple[str, str], str]] = {
    # Desk scale: small enough for a laptop sweep, large enough for trends.
    "funcmin-desk": {
        ("run", "population"): "101",
        ("run", "elites"): "1",
        ("run", "generations"): "200",
        ("run", "runs"): "20",
        ("run", "selection"): "truncation",
        ("problem", "dim"): "100",
    },
    "sr-desk": {
        ("run", "population"): "500",
        ("run", "elites"): "0",
        ("run", "generations"): "150",
        ("run", "runs"): "10",
        ("run", "selection"): "epsilon-lexicase",
    },
    # Full scale is exactly the built-in domain defaults plus 50 runs.
    "paper-full": {
        ("run", "runs"): "50",
    },
    # Tiny end-to-end exercise, mainly for determinism checks.
    "smoke": {
        ("run", "problem"): "sphere",
        ("run", "population"): "12",
        ("run", "elites"): "1",
        ("run", "generations"): "10",
        ("run", "runs"): "2",
        ("run", "controllers"): "bandit",
        ("problem", "dim"): "5",
    },
}


class ConfigError(ValueError):
    """Carries one diagnostic line per problem found."""

    def __init__(self, diagnostics: list[str]):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(self.diagnostics))


def parse_config_text(text: str, source: str = "<config>") -> dict[tuple[str, str], tuple[str, str]]:
    """Parse the key=value format into {(section, key): (value, where)}.

    Keys before any [section] header belong to [run]. Full-line comments
    start with '#' or ';'. Raises ConfigError listing every bad line.
    """
    values: dict[tuple[str, str], tuple[str, str]] = {}
    diags: list[str] = []
    section = "run"
    section_ok = True
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        where = f"{source}:{lineno}"
        if not line or line.startswith(("#", ";")):
            continue
        if line.startswith("["):
            if not (line.endswith("]") and len(line) > 2):
                diags.append(f"{where}: malformed section header {line!r}")
                section_ok = False
                continue
            section = line[1:-1].strip().lower()
            section_ok = section in _SCHEMA
            if not section_ok:
                diags.append(f"{where}: unknown section [{section}]; expected one of "
                             + ", ".join(sorted(_SCHEMA)))
            continue
        if "=" not in line:
            diags.append(f"{where}: expected 'key = value', got {line!r}")
            continue
        if not section_ok:
            continue  # already reported the bad header once
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key not in _SCHEMA[section]:
            diags.append(f"{where}: unknown key '{key}' in section [{section}]")
            continue
        if (section, key) in values:
            diags.append(f"{where}: duplicate key '{key}' in section [{section}]")
            continue
        values[(section, key)] = (value, where)
    if diags:
        raise ConfigError(diags)
    return values


def _env_overrides(environ=None) -> dict[tuple[str, str], tuple[str, str]]:
    """Collect RATEBANDIT_<SECTION>_<KEY> variables; unknown names rejected."""
    if environ is None:
        environ = os.environ
    values: dict[tuple[str, str], tuple[str, str]] = {}
    diags: list[str] = []
    for name, value in sorted(environ.items()):
        if not name.startswith(ENV_PREFIX):
            continue
        rest = name[len(ENV_PREFIX):].lower()
        section, _, key = rest.partition("_")
        if section in _SCHEMA and key in _SCHEMA[section]:
            values[(section, key)] = (value.strip(), f"${name}")
        else:
            diags.append(f"${name}: does not name a known config key")
    if diags:
        raise ConfigError(diags)
    return values


def _convert(kind: str, raw: str, where: str, label: str):
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            val = float(raw)
            if math.isnan(val):
                raise ValueError("not a number")
            return val
        if kind == "bool":
            low = raw.lower()
            if low in ("true", "1", "yes", "on"):
                return True
            if low in ("false", "0", "no", "off"):
                return False
            raise ValueError("expected true/false")
        if kind == "floatlist":
            items = [p.strip() for p in raw.split(",") if p.strip()]
            if not items:
                raise ValueError("expected a comma-separated list of numbers")
            return tuple(float(p) for p in items)
        if kind == "optint":
            return int(raw) if raw else None
        if kind == "str":
            if not raw:
                raise ValueError("expected a value")
            return raw
    except ValueError as exc:
        raise ConfigError([f"{where}: {label}: {exc} (got {raw!r})"]) from None
    raise AssertionError(f"unhandled config type {kind}")


@dataclass(frozen=True)
class BanditParams:
    num_bandits: int
    log_low: float
    log_high: float
    resolution: float
    noise: float
    momentum: float
    num_codings: int
    len_history: int
    epsilon_start: float
    epsilon_end: float
    epsilon_anneal: int


@dataclass(frozen=True)
class ExperimentSpec:
    """Fully resolved, validated experiment description."""

    problem: str
    domain: str
    controllers: tuple[str, ...]
    population: int
    elites: int
    generations: int
    selection: str
    truncation_size: int
    runs: int
    seed_base: int
    out: str
    probe: bool
    dim: int
    max_len: int
    init_len_low: int
    init_len_high: int
    transform: TransformConfig
    bandit: BanditParams
    fixed_rate: float
    samr_meta_factor: float
    samr_init_low: float
    samr_init_high: float
    gesmr_num_rates: int
    gesmr_truncation: int
    gesmr_init_low: float
    gesmr_init_high: float
    lamr_lookahead: int
    lamr_candidates: int
    lamr_low: float
    lamr_high: float
    probe_rates: tuple[float, ...]
    probe_samples: int | None
    probe_kernel: int
    probe_ewma: float

    def make_problem(self):
        if self.domain == "funcmin":
            return FuncMinProblem(self.problem, dim=self.dim)
        return SrProblem(self.problem, max_len=self.max_len,
                         init_len_low=self.init_len_low,
                         init_len_high=self.init_len_high)

    def loop_config(self) -> LoopConfig:
        return LoopConfig(
            population_size=self.population,
            generations=self.generations,
            elites=self.elites,
            selection=self.selection,
            truncation_size=self.truncation_size,
            transform=self.transform,
        )

    def probe_config(self) -> ProbeConfig:
        return ProbeConfig(rates=self.probe_rates,
                           samples_per_rate=self.probe_samples,
                           kernel=self.probe_kernel,
                           ewma_rate=self.probe_ewma)

    def make_controller(self, name: str, seed_seq: np.random.SeedSequence):
        """Build a fresh controller; seed_seq feeds everything stochastic in
        its construction or its private simulation streams."""
        if name == "fixed":
            return FixedRate(self.fixed_rate)
        if name == "samr":
            return SelfAdaptiveRates(self.samr_meta_factor,
                                     self.samr_init_low, self.samr_init_high)
        if name == "gesmr":
            return GroupEliteRates(self.gesmr_num_rates, self.gesmr_truncation,
                                   self.gesmr_init_low, self.gesmr_init_high)
        if name == "lamr":
            candidates = np.logspace(math.log10(self.lamr_low),
                                     math.log10(self.lamr_high),
                                     self.lamr_candidates)
            return LookaheadRates(candidates, self.lamr_lookahead,
                                  seed_seq=seed_seq)
        if name == "bandit":
            rng = np.random.Generator(np.random.PCG64(seed_seq))
            b = self.bandit
            ensemble = BanditEnsemble.random(
                rng, num_bandits=b.num_bandits, log_low=b.log_low,
                log_high=b.log_high, resolution=b.resolution, noise=b.noise,
                momentum=b.momentum, num_codings=b.num_codings,
                history_len=b.len_history,
                schedule=EpsilonSchedule(b.epsilon_start, b.epsilon_end,
                                         b.epsilon_anneal),
                transform=self.transform)
            return BanditController(ensemble)
        raise ValueError(f"unknown controller {name!r}")

    def echo_lines(self) -> Iterator[str]:
        """Canonical rendering of every resolved key, schema order."""
        def fmt(val) -> str:
            if isinstance(val, bool):
                return "true" if val else "false"
            if isinstance(val, tuple):
                return ",".join(repr(v) for v in val)
            if val is None:
                return ""
            if isinstance(val, float):
                return repr(val)
            return str(val)

        flat = {
            ("run", "problem"): self.problem,
            ("run", "controllers"): ",".join(self.controllers),
            ("run", "population"): self.population,
            ("run", "elites"): self.elites,
            ("run", "generations"): self.generations,
            ("run", "selection"): self.selection,
            ("run", "truncation_size"): self.truncation_size,
            ("run", "runs"): self.runs,
            ("run", "seed_base"): self.seed_base,
            ("run", "out"): self.out,
            ("run", "probe"): self.probe,
            ("problem", "dim"): self.dim,
            ("problem", "max_len"): self.max_len,
            ("problem", "init_len_low"): self.init_len_low,
            ("problem", "init_len_high"): self.init_len_high,
            ("transform", "identity"): self.transform.identity,
            ("transform", "c"): self.transform.c,
            ("bandit", "num_bandits"): self.bandit.num_bandits,
            ("bandit", "log_low"): self.bandit.log_low,
            ("bandit", "log_high"): self.bandit.log_high,
            ("bandit", "resolution"): self.bandit.resolution,
            ("bandit", "noise"): self.bandit.noise,
            ("bandit", "momentum"): self.bandit.momentum,
            ("bandit", "num_codings"): self.bandit.num_codings,
            ("bandit", "len_history"): self.bandit.len_history,
            ("bandit", "epsilon_start"): self.bandit.epsilon_start,
            ("bandit", "epsilon_end"): self.bandit.epsilon_end,
            ("bandit", "epsilon_anneal"): self.bandit.epsilon_anneal,
            ("fixed", "rate"): self.fixed_rate,
            ("samr", "meta_factor"): self.samr_meta_factor,
            ("samr", "init_low"): self.samr_init_low,
            ("samr", "init_high"): self.samr_init_high,
            ("gesmr", "num_rates"): self.gesmr_num_rates,
            ("gesmr", "truncation_size"): self.gesmr_truncation,
            ("gesmr", "init_low"): self.gesmr_init_low,
            ("gesmr", "init_high"): self.gesmr_init_high,
            ("lamr", "lookahead"): self.lamr_lookahead,
            ("lamr", "num_candidates"): self.lamr_candidates,
            ("lamr", "low"): self.lamr_low,
            ("lamr", "high"): self.lamr_high,
            ("probe", "rates"): self.probe_rates,
            ("probe", "samples_per_rate"): self.probe_samples,
            ("probe", "kernel"): self.probe_kernel,
            ("probe", "ewma"): self.probe_ewma,
        }
        for section in _SCHEMA:
            yield f"[{section}]"
            for key in _SCHEMA[section]:
                yield f"{key} = {fmt(flat[(section, key)])}"


def _validate(v: dict[tuple[str, str], object], where: dict[tuple[str, str], str],
              domain: str) -> list[str]:
    diags: list[str] = []

    def bad(section: str, key: str, msg: str) -> None:
        loc = where.get((section, key), "<default>")
        diags.append(f"{loc}: [{section}] {key}: {msg}")

    if v[("run", "population")] < 2:
        bad("run", "population", "population size must be >= 2")
    else:
        if not 0 <= v[("run", "elites")] < v[("run", "population")]:
            bad("run", "elites", "elite count must lie in [0, population)")
        if not 1 <= v[("run", "truncation_size")] <= v[("run", "population")]:
            bad("run", "truncation_size", "must lie in [1, population]")
    if v[("run", "generations")] < 1:
        bad("run", "generations", "generation limit must be >= 1")
    if v[("run", "runs")] < 1:
        bad("run", "runs", "run count must be >= 1")
    if v[("run", "selection")] not in SELECTION_NAMES:
        bad("run", "selection", f"unknown operator; expected one of {SELECTION_NAMES}")
    controllers = tuple(c.strip() for c in str(v[("run", "controllers")]).split(",")
                        if c.strip())
    if not controllers:
        bad("run", "controllers", "expected at least one controller")
    for c in controllers:
        if c not in CONTROLLER_NAMES:
            bad("run", "controllers",
                f"unknown controller {c!r}; expected from {CONTROLLER_NAMES}")
    if v[("problem", "dim")] < 1:
        bad("problem", "dim", "dimension must be >= 1")
    if v[("problem", "max_len")] < 1:
        bad("problem", "max_len", "genome length cap must be >= 1")
    if not 1 <= v[("problem", "init_len_low")] <= v[("problem", "init_len_high")]:
        bad("problem", "init_len_low", "need 1 <= init_len_low <= init_len_high")
    if not v[("transform", "identity")] and v[("transform", "c")] <= 0:
        bad("transform", "c", "offset must be positive")
    if v[("bandit", "num_bandits")] < 1:
        bad("bandit", "num_bandits", "ensemble needs at least one member")
    if not v[("bandit", "log_low")] < v[("bandit", "log_high")]:
        bad("bandit", "log_low", "need log_low < log_high")
    if v[("bandit", "resolution")] <= 0:
        bad("bandit", "resolution", "base tile width must be positive")
    if v[("bandit", "noise")] <= 0:
        bad("bandit", "noise", "sampling noise must be positive")
    if not 0 <= v[("bandit", "momentum")] < 1:
        bad("bandit", "momentum", "momentum must lie in [0, 1)")
    if v[("bandit", "num_codings")] < 1:
        bad("bandit", "num_codings", "need at least one tile coding")
    if v[("bandit", "len_history")] < 1:
        bad("bandit", "len_history", "reward window length must be >= 1")
    if v[("bandit", "epsilon_anneal")] < 1:
        bad("bandit", "epsilon_anneal", "anneal span must be >= 1 generation")
    for name in ("epsilon_start", "epsilon_end"):
        if not 0 <= v[("bandit", name)] <= 1:
            bad("bandit", name, "exploration probability must lie in [0, 1]")
    if v[("fixed", "rate")] <= 0:
        bad("fixed", "rate", "rate must be positive")
    if v[("samr", "meta_factor")] <= 1:
        bad("samr", "meta_factor", "meta factor must exceed 1")
    for sec in ("samr", "gesmr"):
        if not 0 < v[(sec, "init_low")] <= v[(sec, "init_high")]:
            bad(sec, "init_low", "need 0 < init_low <= init_high")
    if v[("gesmr", "num_rates")] < 1:
        bad("gesmr", "num_rates", "rate population must be nonempty")
    elif not 1 <= v[("gesmr", "truncation_size")] <= v[("gesmr", "num_rates")]:
        bad("gesmr", "truncation_size", "must lie in [1, num_rates]")
    if v[("lamr", "lookahead")] < 1:
        bad("lamr", "lookahead", "lookahead must be >= 1")
    if v[("lamr", "num_candidates")] < 1:
        bad("lamr", "num_candidates", "need at least one candidate rate")
    if not 0 < v[("lamr", "low")] <= v[("lamr", "high")]:
        bad("lamr", "low", "need 0 < low <= high")
    if any(r <= 0 for r in v[("probe", "rates")]):
        bad("probe", "rates", "probe rates must be positive")
    sp = v[("probe", "samples_per_rate")]
    if sp is not None and sp < 1:
        bad("probe", "samples_per_rate", "must be >= 1 (or empty for population size)")
    if v[("probe", "kernel")] < 1:
        bad("probe", "kernel", "pooling kernel must be >= 1")
    if not 0 < v[("probe", "ewma")] <= 1:
        bad("probe", "ewma", "EWMA rate must lie in (0, 1]")
    if domain == "sr" and ("problem", "dim") in where:
        bad("problem", "dim", "applies only to function-minimization problems")
    if domain == "funcmin":
        for key in ("max_len", "init_len_low", "init_len_high"):
            if ("problem", key) in where:
                bad("problem", key, "applies only to symbolic-regression problems")
    return diags


def load_spec(config_text: str | None = None, source: str = "<config>",
              preset: str | None = None,
              flags: dict[tuple[str, str], str] | None = None,
              environ=None) -> ExperimentSpec:
    """Resolve one experiment from all layers; raises ConfigError with every
    diagnostic found rather than stopping at the first."""
    explicit: dict[tuple[str, str], tuple[str, str]] = {}
    if preset is not None:
        if preset not in _PRESETS:
            raise ConfigError(
                [f"unknown preset {preset!r}; expected one of {PRESET_NAMES}"])
        for sk, val in _PRESETS[preset].items():
            explicit[sk] = (val, f"<preset {preset}>")
    if config_text is not None:
        explicit.update(parse_config_text(config_text, source))
    explicit.update(_env_overrides(environ))
    if flags:
        for sk, val in flags.items():
            explicit[sk] = (val, "<flag>")

    problem_entry = explicit.get(("run", "problem"))
    if problem_entry is None:
        raise ConfigError(["missing problem id: set 'problem = <name>' in [run]; "
                           f"known: {', '.join(FUNCMIN_NAMES + SR_NAMES)}"])
    problem = problem_entry[0].lower()
    if problem in FUNCMIN_NAMES:
        domain = "funcmin"
    elif problem in SR_NAMES:
        domain = "sr"
    else:
        raise ConfigError([f"{problem_entry[1]}: unknown problem {problem!r}; "
                           f"known: {', '.join(FUNCMIN_NAMES + SR_NAMES)}"])

    merged: dict[tuple[str, str], object] = {}
    where: dict[tuple[str, str], str] = {}
    diags: list[str] = []
    domain_col = 0 if domain == "funcmin" else 1
    for section, keys in _SCHEMA.items():
        for key, (kind, default) in keys.items():
            sk = (section, key)
            if sk in explicit:
                raw, loc = explicit[sk]
                where[sk] = loc
            else:
                loc = "<default>"
                if sk == ("run", "generations") and problem == "linear":
                    # Unbounded descent direction; keep default runs short.
                    raw = "100"
                elif sk in _DOMAIN_DEFAULTS:
                    raw = _DOMAIN_DEFAULTS[sk][domain_col]
                else:
                    raw = default
            if raw is None:
                raise AssertionError(f"no default for {sk}")
            try:
                merged[sk] = _convert(kind, str(raw), loc, f"[{section}] {key}")
            except ConfigError as exc:
                diags.extend(exc.diagnostics)
    if diags:
        raise ConfigError(diags)
    merged[("run", "problem")] = problem

    diags = _validate(merged, where, domain)
    if diags:
        raise ConfigError(diags)

    b = BanditParams(
        num_bandits=merged[("bandit", "num_bandits")],
        log_low=merged[("bandit", "log_low")],
        log_high=merged[("bandit", "log_high")],
        resolution=merged[("bandit", "resolution")],
        noise=merged[("bandit", "noise")],
        momentum=merged[("bandit", "momentum")],
        num_codings=merged[("bandit", "num_codings")],
        len_history=merged[("bandit", "len_history")],
        epsilon_start=merged[("bandit", "epsilon_start")],
        epsilon_end=merged[("bandit", "epsilon_end")],
        epsilon_anneal=merged[("bandit", "epsilon_anneal")],
    )
    transform = TransformConfig(c=merged[("transform", "c")],
                                identity=merged[("transform", "identity")])
    controllers = tuple(c.strip() for c in str(merged[("run", "controllers")]).split(",")
                        if c.strip())
    return ExperimentSpec(
        problem=problem,
        domain=domain,
        controllers=controllers,
        population=merged[("run", "population")],
        elites=merged[("run", "elites")],
        generations=merged[("run", "generations")],
        selection=merged[("run", "selection")],
        truncation_size=merged[("run", "truncation_size")],
        runs=merged[("run", "runs")],
        seed_base=merged[("run", "seed_base")],
        out=merged[("run", "out")],
        probe=merged[("run", "probe")],
        dim=merged[("problem", "dim")],
        max_len=merged[("problem", "max_len")],
        init_len_low=merged[("problem", "init_len_low")],
        init_len_high=merged[("problem", "init_len_high")],
        transform=transform,
        bandit=b,
        fixed_rate=merged[("fixed", "rate")],
        samr_meta_factor=merged[("samr", "meta_factor")],
        samr_init_low=merged[("samr", "init_low")],
        samr_init_high=merged[("samr", "init_high")],
        gesmr_num_rates=merged[("gesmr", "num_rates")],
        gesmr_truncation=merged[("gesmr", "truncation_size")],
        gesmr_init_low=merged[("gesmr", "init_low")],
        gesmr_init_high=merged[("gesmr", "init_high")],
        lamr_lookahead=merged[("lamr", "lookahead")],
        lamr_candidates=merged[("lamr", "num_candidates")],
        lamr_low=merged[("lamr", "low")],
        lamr_high=merged[("lamr", "high")],
        probe_rates=merged[("probe", "rates")],
        probe_samples=merged[("probe", "samples_per_rate")],
        probe_kernel=merged[("probe", "kernel")],
        probe_ewma=merged[("probe", "ewma")],
    )
