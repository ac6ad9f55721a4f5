"""Command-line entry point.

Exit codes: 0 success, 1 invalid configuration, 2 verification failure, 3 I/O failure.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from cyclewalk.config import PRESETS, ConfigError, config_from_mapping, read_mapping
from cyclewalk.runner import run_experiment
from cyclewalk import verify

EXIT_OK, EXIT_CONFIG, EXIT_VERIFY, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("cyclewalk")


def _add_experiment_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="key = value config file; flags override it")
    p.add_argument("--n", help="number of cycle sites N")
    p.add_argument("--t", action="append", help="step count(s); repeat or use commas, lo:hi:step ranges")
    p.add_argument("--alpha", action="append", help="kick half-width(s) in radians, e.g. 0.3pi")
    p.add_argument("--axis", choices=["x", "y", "z"], help="kick axis (default y when alpha given)")
    p.add_argument("--initial", help="localized:N0 | superposition:N1,N2 | mixture:N1,N2 | momentum:K")
    p.add_argument("--coin", help="'unbiased' or Bloch components px,py,pz")
    p.add_argument("--engine", choices=["direct", "momentum", "superoperator", "montecarlo"])
    p.add_argument("--seed", help="64-bit seed for the montecarlo engine")
    p.add_argument("--samples", help="trajectory count for the montecarlo engine")
    p.add_argument("--format", action="append", choices=["csv", "txt", "pgm", "ppm"])
    p.add_argument("--label", help="prefix for output file names")
    p.add_argument("--out", type=Path, default=Path("out"), help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cyclewalk", description="Coined quantum walk on a cycle with coin decoherence")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("evolve", "position distributions"),
        ("wigner", "Wigner grids and pixmaps"),
        ("entropy", "linear entropy versus time for one alpha"),
        ("sweep", "linear entropy over a t x alpha grid"),
    ]:
        _add_experiment_flags(sub.add_parser(name, help=help_text))
    pv = sub.add_parser("verify", help="run the oracle cross-checks")
    pv.add_argument("--seed", type=int, default=0)
    pp = sub.add_parser("preset", help="reproduce a figure's data set")
    pp.add_argument("name", choices=sorted(PRESETS))
    pp.add_argument("--out", type=Path, default=Path("out"))
    sub.add_parser("presets", help="list presets")
    return parser


def config_from_args(args: argparse.Namespace):
    values: dict[str, list[str]] = {}
    if args.config is not None:
        values.update(read_mapping(args.config.read_text()))
    values["command"] = [args.command]
    if args.initial:
        kind, _, sites = args.initial.partition(":")
        values["initial"] = [kind]
        if sites:
            values["site"] = [sites]
    for key in ("n", "axis", "coin", "engine", "seed", "samples", "label"):
        val = getattr(args, key)
        if val is not None:
            values[key] = [str(val)]
    for key in ("t", "alpha", "format"):
        val = getattr(args, key)
        if val:
            values[key] = list(val)
    if "engine" not in values:
        noisy = any(v.strip() not in ("0", "0pi", "0.0") for v in values.get("alpha", []))
        values["engine"] = ["superoperator" if noisy else "momentum"]
    return config_from_mapping(values)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")

    if args.command == "verify":
        results = verify.run_all(args.seed)
        for r in results:
            print(r.line())
        return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY

    if args.command == "presets":
        for name in sorted(PRESETS):
            print(f"{name:<6} {PRESETS[name].description}")
        return EXIT_OK

    try:
        if args.command == "preset":
            preset = PRESETS[args.name]
            runs = [(cfg.validate(), f"manifest_{cfg.label}.json" if cfg.label else None) for cfg in preset.runs]
        else:
            runs = [(config_from_args(args), None)]
    except (ConfigError, ValueError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO

    status = EXIT_OK
    for cfg, manifest_name in runs:
        try:
            result = run_experiment(cfg, args.out, manifest_name)
        except (ConfigError, ValueError) as exc:
            print(f"invalid configuration: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except OSError as exc:
            print(f"I/O failure: {exc}", file=sys.stderr)
            return EXIT_IO
        for path in result.files:
            print(path)
        print(result.manifest)
        for check in result.engine_checks:
            if not check["passed"]:
                print(f"engine check failed: {check}", file=sys.stderr)
                status = EXIT_VERIFY
    return status


if __name__ == "__main__":
    sys.exit(main())
