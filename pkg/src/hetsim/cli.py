"""Command-line front end.

Subcommands:

* run        -- run one scenario, write its CSV, print a summary
* compare    -- run a scenario with both strategies on the same seed
* oracle     -- analytic equilibrium shift vs the simulated one
* calibrate  -- check the performance-curve calibration conditions
* validate   -- report scenario config violations

Exit codes: 0 success, 1 semantic/config error, 2 I/O error. All
randomness flows from the scenario's seed (or the -s override).
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .domain import (
    ALL_NETWORKS,
    MeasurementMode,
    NetworkKind,
    ScenarioConfig,
    ScenarioFormatError,
    StrategyKind,
    load_scenario,
    validate_config,
)
from .engine import predict_equilibrium_shift, run_scenario
from .evaluation import meets_requirements
from .netmodel import ground_truth_eval, perf_at
from .report import (
    DEFAULT_THRESHOLD,
    DEFAULT_WINDOW,
    compare,
    format_comparison,
    format_summary,
    summarize,
    write_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_IO = 2


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hetsim",
        description="Heterogeneous vehicular network selection simulator.",
        epilog="Override precedence: command-line flags beat scenario file "
               "values, which beat built-in defaults.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, with_output: bool = True) -> None:
        p.add_argument("scenario", help="path to the scenario JSON file")
        p.add_argument("-s", "--seed", type=int, default=None,
                       help="override the scenario seed")
        p.add_argument("--strategy", choices=[k.value for k in StrategyKind],
                       default=None, help="override the strategy kind")
        p.add_argument("--num-cycles", type=int, default=None,
                       help="override the number of cycles")
        p.add_argument("--mode", choices=[m.value for m in MeasurementMode],
                       default=None, help="override the measurement mode")
        if with_output:
            p.add_argument("-o", "--output", default=None,
                           help="output CSV path (default: scenario stem)")
        p.add_argument("--convergence-threshold", type=int,
                       default=DEFAULT_THRESHOLD,
                       help="handoffs/cycle regarded as quiescent")
        p.add_argument("--convergence-window", type=int, default=DEFAULT_WINDOW,
                       help="quiescent cycles required for convergence")

    add_common(sub.add_parser("run", help="run a scenario and write its CSV"))
    add_common(sub.add_parser(
        "compare", help="run a scenario with both strategies, same seed"))
    add_common(sub.add_parser(
        "oracle", help="analytic vs simulated equilibrium shift"), with_output=False)

    cal = sub.add_parser("calibrate", help="check performance-curve calibration")
    cal.add_argument("scenario", help="path to the scenario JSON file")

    val = sub.add_parser("validate", help="list scenario config violations")
    val.add_argument("scenario", help="path to the scenario JSON file")

    return parser


def _load(path: str) -> ScenarioConfig:
    try:
        return load_scenario(path)
    except FileNotFoundError:
        raise _CliError(EXIT_IO, f"scenario file not found: {path}") from None
    except OSError as exc:
        raise _CliError(EXIT_IO, f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise _CliError(EXIT_CONFIG, f"{path} is not valid JSON: {exc}") from None
    except ScenarioFormatError as exc:
        raise _CliError(EXIT_CONFIG, f"{path}: {exc}") from None


def _apply_overrides(cfg: ScenarioConfig, args: argparse.Namespace) -> ScenarioConfig:
    changes: dict = {}
    if getattr(args, "seed", None) is not None:
        changes["seed"] = args.seed
    if getattr(args, "strategy", None) is not None:
        changes["strategy_kind"] = StrategyKind(args.strategy)
    if getattr(args, "num_cycles", None) is not None:
        changes["num_cycles"] = args.num_cycles
    if getattr(args, "mode", None) is not None:
        changes["measurement_mode"] = MeasurementMode(args.mode)
    return dataclasses.replace(cfg, **changes) if changes else cfg


def _check_valid(cfg: ScenarioConfig) -> None:
    violations = validate_config(cfg)
    if violations:
        listing = "\n".join(f"  - {v}" for v in violations)
        raise _CliError(EXIT_CONFIG, f"invalid scenario:\n{listing}")


def _output_path(args: argparse.Namespace, suffix: str = "") -> Path:
    if args.output is not None:
        base = Path(args.output)
        if suffix:
            return base.with_name(base.stem + suffix + ".csv")
        return base
    return Path(Path(args.scenario).stem + suffix + ".csv")


def _write(records, path: Path) -> None:
    try:
        write_csv(records, path)
    except OSError as exc:
        raise _CliError(EXIT_IO, str(exc)) from None


def cmd_run(args: argparse.Namespace) -> int:
    cfg = _apply_overrides(_load(args.scenario), args)
    _check_valid(cfg)
    records = run_scenario(cfg)
    out = _output_path(args)
    _write(records, out)
    summary = summarize(records, args.convergence_threshold, args.convergence_window)
    print(f"wrote {out}")
    print(format_summary(summary))
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    cfg = _apply_overrides(_load(args.scenario), args)
    summaries = {}
    for kind, suffix in ((StrategyKind.GAME, "_game"),
                         (StrategyKind.BASELINE_MCDM, "_baseline_mcdm")):
        variant = dataclasses.replace(cfg, strategy_kind=kind)
        _check_valid(variant)
        records = run_scenario(variant)
        out = _output_path(args, suffix)
        _write(records, out)
        print(f"wrote {out}")
        summaries[kind] = summarize(records, args.convergence_threshold,
                                    args.convergence_window)
    print(format_comparison(compare(summaries[StrategyKind.GAME],
                                    summaries[StrategyKind.BASELINE_MCDM])))
    return EXIT_OK


def cmd_oracle(args: argparse.Namespace) -> int:
    cfg = _apply_overrides(_load(args.scenario), args)
    if cfg.disturbance is None:
        raise _CliError(EXIT_CONFIG,
                        "scenario has no disturbance; nothing to predict")
    _check_valid(cfg)
    records = run_scenario(cfg)

    disturbed = cfg.disturbance.network
    start = cfg.disturbance.start_cycle
    if start == 0:
        pre_counts = dict(cfg.initial_assignment)
    else:
        pre_counts = records[start - 1].counts
    g = pre_counts[disturbed]
    # The switch destination: best-scoring alternative at pre-disturbance loads.
    others = [net for net in ALL_NETWORKS if net is not disturbed]
    partner = max(others, key=lambda net: ground_truth_eval(
        cfg.profiles[net], pre_counts[net], cfg.strategy))
    h = pre_counts[partner]

    s_predicted = predict_equilibrium_shift(
        lambda n: ground_truth_eval(cfg.profiles[disturbed], n, cfg.strategy),
        lambda n: ground_truth_eval(cfg.profiles[partner], n, cfg.strategy),
        g, h, cfg.disturbance.delta_e)

    tail = records[-min(30, len(records)):]
    mean_tail = sum(r.counts[disturbed] for r in tail) / len(tail)
    s_simulated = g - mean_tail

    print(f"disturbed network:       {disturbed.value} "
          f"(g={g}, partner {partner.value} h={h}, delta_e={cfg.disturbance.delta_e})")
    print(f"predicted shift:         {s_predicted}")
    print(f"simulated steady shift:  {s_simulated:.2f}")
    return EXIT_OK


def calibration_report(cfg: ScenarioConfig) -> list[tuple[str, bool, str]]:
    """Evaluate the curve-calibration conditions; (name, passed, detail) rows."""
    params = cfg.strategy
    total = cfg.total_terminals
    dsrc, lte, wifi = (cfg.profiles[n] for n in ALL_NETWORKS)

    def eva(profile, n):
        return ground_truth_eval(profile, n, params)

    rows: list[tuple[str, bool, str]] = []

    decreasing = all(
        eva(p, n + 1) < eva(p, n)
        for p in (dsrc, lte, wifi) for n in range(0, 200)
    )
    rows.append(("decreasing-evaluation", decreasing,
                 "every network's evaluation strictly decreases with load"))

    d1, l1, w1 = eva(dsrc, 1), eva(lte, 1), eva(wifi, 1)
    d_total = eva(dsrc, total)
    rows.append(("dsrc-best-then-overloaded",
                 d1 > l1 and d1 > w1 and d_total < l1 and d_total < w1,
                 f"dsrc {d1:.3f} tops lte {l1:.3f} / wifi {w1:.3f} at base load "
                 f"but drops to {d_total:.3f} at {total}"))

    rows.append(("lte-worst-at-base-load", l1 < d1 and l1 < w1,
                 f"lte {l1:.3f} below dsrc {d1:.3f} and wifi {w1:.3f} at load 1"))

    overloaded = all(
        not meets_requirements(*perf_at(p, total), params)
        for p in (dsrc, lte, wifi)
    )
    n_dsrc = min(params.n_exp, total)
    rest = total - n_dsrc
    split = {NetworkKind.DSRC: n_dsrc, NetworkKind.LTE: rest // 2,
             NetworkKind.WIFI: rest - rest // 2}
    shared = all(
        meets_requirements(*perf_at(cfg.profiles[net], split[net]), params)
        for net in ALL_NETWORKS
    )
    rows.append(("no-single-network-carries-all", overloaded,
                 f"each network alone fails requirements at {total} terminals"))
    rows.append(("coordinated-split-carries-all", shared,
                 "split " + "/".join(str(split[n]) for n in ALL_NETWORKS)
                 + " meets requirements everywhere"))
    return rows


def cmd_calibrate(args: argparse.Namespace) -> int:
    cfg = _load(args.scenario)
    _check_valid(cfg)
    rows = calibration_report(cfg)
    for name, passed, detail in rows:
        print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")
    return EXIT_OK if all(passed for _, passed, _ in rows) else EXIT_CONFIG


def cmd_validate(args: argparse.Namespace) -> int:
    cfg = _load(args.scenario)
    violations = validate_config(cfg)
    if violations:
        for v in violations:
            print(f"violation: {v}")
        return EXIT_CONFIG
    print("ok")
    return EXIT_OK


_COMMANDS = {
    "run": cmd_run,
    "compare": cmd_compare,
    "oracle": cmd_oracle,
    "calibrate": cmd_calibrate,
    "validate": cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
