"""
CLI tool for the cuspidal delta-bar computations.

Builds cusps, divisors, Delta-quotients, the delta-bar matrix and its
determinant certificate for X_0(p^r) over F_q(T), and emits them as JSON,
CSV or text.

Usage:
    python scripts/cuspforge.py cusps --q 3 --deg-p 1 --r 4
    python scripts/cuspforge.py det --r 6 --mode symbolic
    python scripts/cuspforge.py matrix --r 7 --mode numeric --format csv --at 3
    python scripts/cuspforge.py verify --q 3 --deg-p 1 --r 7 --out report.json   # under CUSPFORGE_OUTPUT_DIR
"""

import argparse
import logging
import sys
from typing import List, Optional

COMMANDS = ["cusps", "divisors", "gmap", "sigma", "matrix", "reduce", "det", "verify", "report"]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Cuspidal divisor class groups and delta-bar determinants for X_0(p^r)"
    )

    parser.add_argument(
        "command",
        choices=COMMANDS,
        help="Pipeline to run"
    )

    parser.add_argument("--q", type=int, default=3, help="Size of the constant field (default: 3)")
    parser.add_argument("--deg-p", type=int, default=1, help="Degree of the prime p (default: 1)")
    parser.add_argument("--r", type=int, default=2, help="Exponent of the level p^r (default: 2)")

    parser.add_argument(
        "--mode",
        choices=["symbolic", "numeric"],
        default="symbolic",
        help="Polynomials in P or their values (default: symbolic)"
    )

    parser.add_argument(
        "--format",
        choices=["json", "csv", "text"],
        default=None,
        help="Output format (default: CUSPFORGE_DEFAULT_FORMAT or json)"
    )

    parser.add_argument(
        "--at",
        type=int,
        help="Value of P for numeric output (default: |p|)"
    )

    parser.add_argument(
        "--variant",
        choices=["plain", "bold"],
        default="plain",
        help="Matrix variant for the matrix command (default: plain)"
    )

    parser.add_argument(
        "--out",
        "-o",
        help="Write the document to this file instead of stdout (relative to CUSPFORGE_OUTPUT_DIR)"
    )

    parser.add_argument(
        "--verbose",
        "-v",
        action="store_true",
        help="Enable verbose logging"
    )

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI function."""
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on bad usage; 2 is reserved for mismatches
        return 1 if e.code else 0

    from pydantic import ValidationError

    from config import settings
    from services.report_service import RunConfig, run

    level = logging.DEBUG if args.verbose else getattr(logging, settings.LOG_LEVEL, logging.INFO)
    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(levelname)s - %(message)s'
    )

    options = {
        "command": args.command,
        "q": args.q,
        "deg_p": args.deg_p,
        "r": args.r,
        "mode": args.mode,
        "at": args.at,
        "variant": args.variant,
        "output_path": settings.OUTPUT_DIR / args.out if args.out else None,
    }
    if args.format:
        options["format"] = args.format

    try:
        config = RunConfig(**options)
    except ValidationError as e:
        print(f"❌ Invalid arguments: {e}", file=sys.stderr)
        return 1

    print(f"\n{'='*60}", file=sys.stderr)
    print(f"🧮 cuspforge {config.command.value}", file=sys.stderr)
    print(f"{'='*60}", file=sys.stderr)
    print(f"q={config.q}  deg(p)={config.deg_p}  r={config.r}  mode={config.mode}", file=sys.stderr)
    print(f"{'='*60}\n", file=sys.stderr)

    try:
        result = run(config)
    except Exception as e:
        print(f"\n❌ Error: {e}", file=sys.stderr)
        if args.verbose:
            import traceback
            traceback.print_exc()
        return 1

    if result.error:
        print(f"❌ {result.error}", file=sys.stderr)
    if config.output_path is None or result.exit_code != 0:
        sys.stdout.write(result.document)
    else:
        print(f"💾 Saved to: {config.output_path}", file=sys.stderr)

    return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
