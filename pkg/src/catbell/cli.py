"""Command-line front end: ``catbell run | sweep | list-scenarios | validate-config | self-test``."""

from __future__ import annotations

import argparse
import logging
import os
import sys
import time
from pathlib import Path
from typing import List, Optional, Sequence

from catbell.errors import CatBellError, ConfigInvalid
from catbell.inequalities import InequalityReport
from catbell.scenarios import (
    DESCRIPTIONS,
    SCENARIOS,
    ScenarioConfig,
    ScenarioResult,
    load_config,
    parse_number,
    run_scenario,
    sweep,
    sweep_curves,
    write_result,
)

EXIT_OK, EXIT_CONFIG, EXIT_UNCONVERGED, EXIT_INTERNAL = 0, 1, 2, 3
SYMBOLS = {"chsh": "B", "lg": "B_lg", "epr": "eps_M"}

log = logging.getLogger("catbell")


class _Parser(argparse.ArgumentParser):
    """Usage errors exit with the config-error code instead of argparse's 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_CONFIG)


def fmt(x: float) -> str:
    return f"{x:.4g}"


def summary_line(report: InequalityReport) -> str:
    sym = SYMBOLS[report.kind]
    verdict = "VIOLATED" if report.violated else "not violated"
    if report.converged is None:
        conv = "unchecked"
    else:
        conv = "converged" if report.converged else "NOT converged"
    return f"{sym} = {fmt(report.aggregate)} (bound {fmt(report.bound)}) {verdict} {conv}"


def _label(report: InequalityReport) -> str:
    init = report.settings.get("initial")
    return f"[{init}]" if init else ""


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="catbell", description="Bell and Leggett-Garg tests with entangled cat states.")
    verb = p.add_mutually_exclusive_group()
    verb.add_argument("-q", "--quiet", action="store_true", help="print only the summary lines")
    verb.add_argument("-v", "--verbose", action="store_true", help="log progress and diagnostics")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def with_config(sp):
        sp.add_argument("--config", required=True, help="path to a .cfg scenario file")
        sp.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE",
                        help="override a config key (repeatable)")

    run = sub.add_parser("run", help="run one scenario and write its datasets")
    with_config(run)
    run.add_argument("--out", help="output directory (fallback: $CATBELL_OUT)")

    sw = sub.add_parser("sweep", help="rerun a scenario over a list of parameter values")
    with_config(sw)
    sw.add_argument("--param", required=True, help="alpha, beta, amplitude (both), omega, c1 or grid_step")
    sw.add_argument("--values", required=True, help="comma-separated values, e.g. 0.5,1,1.5")
    sw.add_argument("--out", help="output directory (fallback: $CATBELL_OUT)")

    sub.add_parser("list-scenarios", help="list the available scenario ids")
    vc = sub.add_parser("validate-config", help="check a config file without running it")
    vc.add_argument("config")
    vc.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
    sub.add_parser("self-test", help="fast analytic consistency checks")
    return p


def output_dir(args, cfg: ScenarioConfig) -> Path:
    chosen = args.out or cfg.output_dir or os.environ.get("CATBELL_OUT")
    return Path(chosen) if chosen else Path("catbell_out") / cfg.scenario_id


def _print_reports(scenario: str, result: ScenarioResult) -> None:
    for rep in result.reports:
        print(f"{scenario}{_label(rep)}  {summary_line(rep)}")
    if not result.reports:
        print(f"{scenario}  no inequality reports; see diagnostics.json")


def _cmd_run(args) -> int:
    cfg = load_config(args.config, args.overrides)
    t0 = time.perf_counter()
    result = run_scenario(cfg)
    out = output_dir(args, cfg)
    files = write_result(result, out)
    log.info("ran %s in %.2f s", cfg.scenario_id, time.perf_counter() - t0)
    _print_reports(cfg.scenario_id, result)
    if not args.quiet:
        print(f"wrote {len(files)} files to {out}")
    return EXIT_OK if result.converged else EXIT_UNCONVERGED


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config, args.overrides)
    values = [parse_number(v) for v in args.values.split(",") if v.strip()]
    if not values:
        raise ConfigInvalid("--values is empty")
    results = sweep(cfg, args.param, values)
    curves = sweep_curves(results, args.param, values)
    out = output_dir(args, cfg)
    merged = ScenarioResult(cfg.scenario_id, reports=[r for res in results for r in res.reports])
    merged.diagnostics = {"parameter": args.param, "values": values,
                          "per_value": [res.diagnostics for res in results]}
    write_result(merged, out, extra=curves)
    for v, res in zip(values, results):
        for rep in res.reports:
            print(f"{args.param}={fmt(v)}{_label(rep)}  {summary_line(rep)}")
    if not args.quiet:
        print(f"wrote {len(curves)} curve(s) to {out}")
    return EXIT_OK if all(r.converged for r in results) else EXIT_UNCONVERGED


def _cmd_list() -> int:
    for sid in SCENARIOS:
        print(f"{sid:24s} {DESCRIPTIONS[sid]}")
    return EXIT_OK


def _cmd_validate(args) -> int:
    cfg = load_config(args.config, args.overrides)
    print(f"{args.config}: valid ({cfg.scenario_id})")
    return EXIT_OK


def _cmd_selftest(args) -> int:
    from catbell.selftest import run_checks

    results = run_checks()
    for r in results:
        if not args.quiet or not r.passed:
            print(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
    n_ok = sum(r.passed for r in results)
    print(f"{n_ok} passed, {len(results) - n_ok} failed")
    return EXIT_OK if n_ok == len(results) else EXIT_UNCONVERGED


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(message)s",
    )
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "list-scenarios":
            return _cmd_list()
        if args.command == "validate-config":
            return _cmd_validate(args)
        return _cmd_selftest(args)
    except CatBellError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as exc:  # keep tracebacks away from users; -v shows them
        log.debug("internal error", exc_info=True)
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        if args.verbose:
            import traceback

            traceback.print_exc()
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
