"""Command-line entry point.

Subcommands: energy (print the breakdown), validate (oracle ladder),
scan-detuning, scan-density, scan-slab, scan-alignment.  Exit codes: 0 on
success, 1 on configuration errors, 2 on runtime/solver errors (scan rows
that failed are still written, carrying their status).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path
from typing import Optional, Sequence

from .config import parse_config
from .csvio import write_scan_csv
from .errors import CavityVdwError, ParseError, ValidationError
from .perturbation import total_breakdown
from .scans import run_scan

_SCAN_COMMANDS = {
    "scan-detuning": "detuning",
    "scan-density": "density",
    "scan-slab": "slab",
    "scan-alignment": "alignment",
    "validate": "validate",
}

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_RUNTIME = 2


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", required=True, help="path to the JSON run configuration")
    p.add_argument("--out", default=None, help="output CSV path (overrides config 'output')")
    p.add_argument("--oracle", choices=("on", "off"), default=None,
                   help="force the exact-diagonalization columns on or off")
    p.add_argument("--seed", type=int, default=None, help="override the config seed")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavityvdw",
        description="Cavity-modified van der Waals interactions: energies and scans.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("energy", "print the seven-term energy breakdown for the configured ensemble"),
        ("validate", "run the analytic-vs-exact coupling ladder"),
        ("scan-detuning", "3-body term vs cavity detuning"),
        ("scan-density", "collective terms vs molecule count"),
        ("scan-slab", "probe-slab coupling sums vs distance"),
        ("scan-alignment", "energy landscape vs dipole tilt angle"),
    ):
        _add_common(sub.add_parser(name, help=help_text))
    return parser


def _load_config(path_text: str):
    path = Path(path_text)
    if not path.exists():
        raise ParseError(f"config file not found: {path}")
    return parse_config(path.read_text(encoding="utf-8"))


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _load_config(args.config)
        if args.seed is not None:
            cfg = dataclasses.replace(cfg, seed=args.seed)
        if args.out is not None:
            cfg = dataclasses.replace(cfg, output=args.out)
    except (ParseError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    if args.command == "energy":
        try:
            ensemble = cfg.build_ensemble()
            breakdown = total_breakdown(ensemble, pole_epsilon=cfg.tolerances.pole_epsilon)
        except (ParseError, ValidationError) as exc:
            print(f"config error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
        except CavityVdwError as exc:
            print(f"runtime error: {exc}", file=sys.stderr)
            return EXIT_RUNTIME
        for name, value in breakdown.as_dict().items():
            print(f"{name:>8s} = {value:+.17g}")
        return EXIT_OK

    kind = _SCAN_COMMANDS[args.command]
    try:
        if cfg.scan is None:
            raise ValidationError("config has no scan section")
        if cfg.scan.kind != kind:
            raise ValidationError(
                f"config scan.kind is {cfg.scan.kind!r} but the subcommand expects {kind!r}"
            )
        if args.oracle is not None:
            cfg = dataclasses.replace(
                cfg, scan=dataclasses.replace(cfg.scan, oracle=args.oracle == "on")
            )
        spec = cfg.build_scan_spec()
    except (ParseError, ValidationError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CavityVdwError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    try:
        result = run_scan(spec)
    except CavityVdwError as exc:
        print(f"runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    out = cfg.output
    if out is None:
        print("config error: no output path (set 'output' or pass --out)", file=sys.stderr)
        return EXIT_CONFIG
    try:
        write_scan_csv(result, out)
    except OSError as exc:
        print(f"io error writing {out}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME

    if result.any_errors:
        bad = sum(1 for r in result.rows if r.get("status") != "ok")
        print(f"{bad} of {len(result.rows)} scan points failed; see status column in {out}",
              file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {len(result.rows)} rows to {out}")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
