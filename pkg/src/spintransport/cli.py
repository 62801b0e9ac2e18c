"""Command-line entry point.

Exit status: 0 when every check passes, 1 on a check failure, 2 on a
configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .report import write_json
from .scenario import ConfigError, compare_pitch, execute, load_config, trace, write_outputs
from .verify import SUITES, verify

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2

# scenario kinds accepted by each run subcommand
_KINDS = {
    "trace": ("free", "circle", "helix"),
    "transport": ("free", "circle", "helix"),
    "oscillator": ("dirac_oscillator",),
    "em": ("em_helix", "em_grin"),
}


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="spintransport",
                                 description="Spin transport along classical relativistic rays.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, config_required=True):
        p.add_argument("--config", type=Path, required=config_required, help="scenario JSON file")
        p.add_argument("--out", type=Path, default=None, help="output directory for series and reports")
        p.add_argument("--seed", type=int, default=0, help="seed for random initial states")

    for name, help_ in [("trace", "integrate the classical ray of a scenario"),
                        ("transport", "ray plus spin transport with closed-form oracles"),
                        ("oscillator", "Dirac-oscillator discontinuity along its orbit"),
                        ("em", "optical ray with polarization transport"),
                        ("compare-pitch", "spin versus polarization rotation per helix pitch")]:
        common(sub.add_parser(name, help=help_))
    v = sub.add_parser("verify", help="run invariant suites")
    common(v, config_required=False)
    v.add_argument("--suite", default="all", choices=["all", *SUITES])
    v.add_argument("--perturb", action="store_true",
                   help="use a mis-signed precession generator (checks must fail)")
    v.add_argument("--json", action="store_true", help="print the JSON summary to stdout")
    return ap


def _emit(report) -> int:
    for c in report.checks:
        print(c.line())
    print(json.dumps(report.to_dict()["summary"], sort_keys=True))
    return EXIT_OK if report.passed else EXIT_FAIL


def _run(args) -> int:
    cfg = load_config(args.config)
    cmd = args.command
    if cmd == "compare-pitch":
        rep = compare_pitch(cfg)
        if args.out is not None:
            write_json(Path(args.out) / f"{cfg.label}_compare_pitch.json", rep.to_dict())
        return _emit(rep)
    if cfg.scenario not in _KINDS[cmd]:
        raise ConfigError(f"'{cmd}' does not run scenario {cfg.scenario!r}; "
                          f"expected one of {_KINDS[cmd]}")
    out = trace(cfg) if cmd == "trace" else execute(cfg, args.seed)
    if args.out is not None:
        write_outputs(out, cfg, args.out)
    return _emit(out.report)


def _verify(args) -> int:
    lines = []
    result = verify(args.suite, seed=args.seed, perturb=args.perturb, echo=print)
    summary = result.to_dict()
    if args.config is not None:
        out = execute(load_config(args.config), args.seed)
        for c in out.report.checks:
            print(c.line())
            lines.append(c)
        summary["scenario_checks"] = [c.to_dict() for c in lines]
        summary["passed"] = summary["passed"] and out.report.passed
    if args.out is not None:
        write_json(Path(args.out) / f"verify_{args.suite}.json", summary)
    if args.json:
        print(json.dumps(summary, sort_keys=True, indent=2))
    n_fail = summary["n_failed"] + sum(not c.passed for c in lines)
    print(f"verify {args.suite}: {summary['n_checks'] + len(lines)} checks, {n_fail} failed")
    return EXIT_OK if summary["passed"] else EXIT_FAIL


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        return _run(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
