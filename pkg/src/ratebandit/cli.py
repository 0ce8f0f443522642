"""Command-line experiment runner.

Subcommands: run (execute a batch and write CSVs), probe (fixed-rate run
with the landscape probe attached), stats (recompute the summary table from
a results directory), validate (resolve and echo a config).

Reproducibility: every run i derives its generator tree from a single
integer seed (seed_base + i) through numpy's SeedSequence, using the PCG64
algorithm explicitly so outputs are stable across platforms and numpy
builds. Run rows and generation rows are flushed as they are produced, so
an interrupted batch leaves valid, inspectable CSVs behind.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from .analysis import (LandscapeProbe, bootstrap_ci, two_proportion_z_test,
                       welch_t_test)
from .config import (PRESET_NAMES, ConfigError, ExperimentSpec, load_spec)
from .evolution import EvolutionRun, RunResult

RUNS_HEADER = ("run_id", "seed", "controller", "problem", "solved",
               "solve_generation", "final_best_error")
GENERATIONS_HEADER = ("run_id", "generation", "best_error", "mean_log_rate",
                      "epsilon")
PROBE_HEADER = ("generation", "rate", "reward_kind", "smoothed_value")


def _fmt(value) -> str:
    """Canonical cell text: shortest round-trip repr for floats, empty for
    None, lowercase booleans. Keeps CSV bytes platform-independent."""
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def run_single(spec: ExperimentSpec, controller_name: str, seed: int,
               with_probe: bool = False, on_generation=None):
    """Execute one seeded run; returns (EvolutionRun, RunResult, probe)."""
    root = np.random.SeedSequence(seed)
    ss_main, ss_controller, ss_probe = root.spawn(3)
    rng = np.random.Generator(np.random.PCG64(ss_main))
    controller = spec.make_controller(controller_name, ss_controller)
    probe = None
    if with_probe:
        probe = LandscapeProbe(spec.probe_config(),
                               np.random.Generator(np.random.PCG64(ss_probe)))
    run = EvolutionRun(spec.make_problem(), spec.loop_config(), controller,
                       rng, observer=probe)
    while run.generation < spec.generations and not run.solved:
        row = run.step()
        if on_generation is not None:
            on_generation(row)
    final_best = min(ind.mean_error for ind in run.population)
    return run, RunResult(run.rows, run.solved, run.solve_generation,
                          final_best), probe


def _summarize(per_controller: dict[str, dict], out=None) -> None:
    """Success counts, mean final errors with bootstrap CIs, pairwise tests."""
    if out is None:  # resolve late so redirected stdout is honoured
        out = sys.stdout
    names = list(per_controller)
    print("controller  solved  mean_final_error  ci95_low  ci95_high",
          file=out)
    for name in names:
        stats = per_controller[name]
        errors = stats["final_errors"]
        report = bootstrap_ci(errors)
        print(f"{name:<11} {stats['solved']}/{len(errors):<6}"
              f" {report.estimate:<17.6g} {report.ci_low:<9.6g}"
              f" {report.ci_high:.6g}", file=out)
    if len(names) > 1:
        print("pairwise: final-error Welch p (two-sided), solved-count z p",
              file=out)
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                sa, sb = per_controller[a], per_controller[b]
                welch = welch_t_test(sa["final_errors"], sb["final_errors"])
                zp = two_proportion_z_test(sa["solved"], len(sa["final_errors"]),
                                           sb["solved"], len(sb["final_errors"]))
                print(f"{a} vs {b}: welch_p={welch:.6g} solved_p={zp:.6g}",
                      file=out)


def _execute(spec: ExperimentSpec, force: bool) -> int:
    out_dir = Path(spec.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    targets = [out_dir / "runs.csv", out_dir / "generations.csv"]
    if spec.probe:
        targets.append(out_dir / "probe.csv")
    for path in targets:
        if path.exists() and not force:
            print(f"refusing to overwrite {path}; pass --force", file=sys.stderr)
            return 1

    per_controller: dict[str, dict] = {}
    with open(out_dir / "runs.csv", "w", newline="", encoding="utf-8") as runs_f, \
         open(out_dir / "generations.csv", "w", newline="",
              encoding="utf-8") as gens_f:
        probe_f = (open(out_dir / "probe.csv", "w", newline="",
                        encoding="utf-8") if spec.probe else None)
        try:
            runs_w = csv.writer(runs_f, lineterminator="\n")
            gens_w = csv.writer(gens_f, lineterminator="\n")
            runs_w.writerow(RUNS_HEADER)
            gens_w.writerow(GENERATIONS_HEADER)
            if probe_f is not None:
                probe_w = csv.writer(probe_f, lineterminator="\n")
                probe_w.writerow(PROBE_HEADER)
            for controller_name in spec.controllers:
                stats = per_controller.setdefault(
                    controller_name, {"solved": 0, "final_errors": []})
                for i in range(spec.runs):
                    seed = spec.seed_base + i
                    run_id = f"{controller_name}-{i:03d}"

                    def write_row(row, run_id=run_id):
                        gens_w.writerow([
                            run_id, _fmt(row.generation), _fmt(row.best_error),
                            _fmt(row.mean_log_rate), _fmt(row.epsilon)])
                        gens_f.flush()

                    _, result, probe = run_single(
                        spec, controller_name, seed, with_probe=spec.probe,
                        on_generation=write_row)
                    runs_w.writerow([
                        run_id, _fmt(seed), controller_name, spec.problem,
                        _fmt(result.solved), _fmt(result.solve_generation),
                        _fmt(result.final_best_error)])
                    runs_f.flush()
                    if probe_f is not None and probe is not None:
                        for gen, rate, kind, value in probe.rows():
                            probe_w.writerow([_fmt(gen), _fmt(rate), kind,
                                              _fmt(value)])
                        probe_f.flush()
                    stats["solved"] += int(result.solved)
                    stats["final_errors"].append(result.final_best_error)
        finally:
            if probe_f is not None:
                probe_f.close()
    _summarize(per_controller)
    return 0


def _stats_from_csv(out_dir: Path) -> int:
    path = out_dir / "runs.csv"
    if not path.exists():
        print(f"no runs.csv under {out_dir}", file=sys.stderr)
        return 1
    per_controller: dict[str, dict] = {}
    with open(path, newline="", encoding="utf-8") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames != list(RUNS_HEADER):
            print(f"{path}: unexpected header {reader.fieldnames}",
                  file=sys.stderr)
            return 1
        for row in reader:
            stats = per_controller.setdefault(
                row["controller"], {"solved": 0, "final_errors": []})
            stats["solved"] += int(row["solved"] == "true")
            stats["final_errors"].append(float(row["final_best_error"]))
    if not per_controller:
        print(f"{path}: no data rows", file=sys.stderr)
        return 1
    _summarize(per_controller)
    return 0


def _load_from_args(args) -> ExperimentSpec:
    config_text = None
    source = "<config>"
    if args.config is not None:
        path = Path(args.config)
        if not path.exists():
            raise ConfigError([f"config file not found: {path}"])
        config_text = path.read_text(encoding="utf-8")
        source = str(path)
    flags: dict[tuple[str, str], str] = {}
    if args.seed_base is not None:
        flags[("run", "seed_base")] = str(args.seed_base)
    if args.runs is not None:
        flags[("run", "runs")] = str(args.runs)
    if args.out is not None:
        flags[("run", "out")] = args.out
    if getattr(args, "force_probe", False):
        flags[("run", "probe")] = "true"
        flags[("run", "controllers")] = "fixed"
    return load_spec(config_text, source, preset=args.preset, flags=flags)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="path to a key=value config file")
    parser.add_argument("--preset", choices=PRESET_NAMES,
                        help="named preset applied beneath the config file")
    parser.add_argument("--seed-base", type=int, default=None,
                        help="seed for run 0; run i uses seed_base + i")
    parser.add_argument("--runs", type=int, default=None,
                        help="number of runs per controller")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--force", action="store_true",
                        help="overwrite existing CSV outputs")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="ratebandit",
        description="Seeded mutation-rate-control experiments with CSV output.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, blurb in (("run", "execute a batch of seeded runs"),
                        ("probe", "fixed-rate run with the landscape probe"),
                        ("stats", "summary table from an existing results dir"),
                        ("validate", "resolve a config and echo every value")):
        _add_common(sub.add_parser(name, help=blurb))

    args = parser.parse_args(argv)
    try:
        if args.command == "stats":
            return _stats_from_csv(Path(args.out if args.out else "results"))
        if args.command == "probe":
            args.force_probe = True
        spec = _load_from_args(args)
        if args.command == "validate":
            for line in spec.echo_lines():
                print(line)
            return 0
        return _execute(spec, args.force)
    except ConfigError as exc:
        for line in exc.diagnostics:
            print(line, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
