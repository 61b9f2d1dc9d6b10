"""
Command-line entry point for orbifrob
"""

import argparse
import json
import logging
import sys
from typing import Dict, List, Optional

from algebra.errors import CheckFailure, OrbifrobError, ResourceCapError
from cli.commands import COMMANDS
from cli.settings import load_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_RESOURCE_CAP = 3


class UsageError(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """argparse that raises instead of exiting, so usage errors come out as JSON"""

    def error(self, message: str):
        raise UsageError(message)


def _add_potential_options(parser: argparse.ArgumentParser):
    parser.add_argument("--orbifold", required=True, help="Orbifold orders, e.g. 2,2,3")
    parser.add_argument("--cutoff", type=int, default=None, help="Largest Q-degree (non-exact mode)")
    parser.add_argument("--exact", action="store_true", help="Use every admissible degree")
    parser.add_argument("--cap-mode", choices=["fixture", "solve"], default="fixture", help="Source of the caps")
    parser.add_argument("--use-cache", action="store_true", help="Read and extend the Hurwitz cache")
    parser.add_argument("--progress", action="store_true", help="Show a progress bar")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="orbifrob", description="Orbifold Gromov-Witten theory and tri-polynomial mirrors")
    parser.add_argument("--config", default=None, help="JSON settings file")
    parser.add_argument("--output", "-o", default=None, help="Write the JSON result to this file")
    parser.add_argument("--max-workers", type=int, default=None, help="Thread pool size")
    parser.add_argument("--seed", type=int, default=None, help="Seed for random sample points")
    parser.add_argument("--cache", default=None, help="Hurwitz cache path")
    parser.add_argument("--log-level", default=None, help="Logging level (default WARNING)")
    sub = parser.add_subparsers(dest="verb", required=True)

    classify = sub.add_parser("classify", help="Is the genus-0 potential polynomial?")
    classify.add_argument("orders", type=int, nargs="*", help="Orbifold orders")

    hurwitz = sub.add_parser("hurwitz", help="Hurwitz number")
    hurwitz.add_argument("--base-genus", type=int, default=0)
    hurwitz.add_argument("--genus", type=int, default=0, help="Cover genus")
    hurwitz.add_argument("-d", "--degree", type=int, required=True)
    hurwitz.add_argument("--profiles", default="", help='Profiles separated by ";", e.g. "(2);(2)"')
    hurwitz.add_argument("--disconnected", action="store_true")
    hurwitz.add_argument("--oracle", action="store_true", help="Brute-force count in S_d")
    hurwitz.add_argument("--use-cache", action="store_true")

    cap = sub.add_parser("cap", help="Orbifold cap potential")
    cap.add_argument("--order", type=int, required=True)
    cap.add_argument("--mode", choices=["fixture", "solve"], default="fixture")

    gw = sub.add_parser("gw-potential", help="Assemble a GW potential")
    _add_potential_options(gw)
    gw.add_argument("--genus", type=int, default=0)
    gw.add_argument("--compare-reference", action="store_true", help="Compare with the tabulated potential")

    wdvv = sub.add_parser("wdvv-check", help="WDVV residuals of a potential")
    _add_potential_options(wdvv)
    wdvv.add_argument("--source", choices=["reference", "assembled"], default="assembled")
    wdvv.add_argument("--show", type=int, default=5, help="Nonzero residuals to print")

    tripoly = sub.add_parser("tripoly", help="Frobenius structure of a tri-polynomial space")
    tripoly.add_argument("--degrees", required=True, help="p,q,r")
    tripoly.add_argument("--point", default=None, help='Coordinates, e.g. "a1=1,b1=2,c0=0,W=1"')
    tripoly.add_argument("--flat-method", choices=["series", "ansatz"], default=None)
    tripoly.add_argument("--pairing-method", choices=["critical-points", "trace"], default="trace")
    tripoly.add_argument("--check", action="store_true", help="Run the Frobenius property checks")
    tripoly.add_argument("--count", type=int, default=5, help="Random points for --check")

    mirror = sub.add_parser("mirror-check", help="Compare both sides of the mirror")
    mirror.add_argument("--degrees", required=True, help="p,q,r")
    mirror.add_argument("--count", type=int, default=3)
    mirror.add_argument("--cap-mode", choices=["fixture", "solve"], default="fixture")

    spectrum = sub.add_parser("u-spectrum", help="Spectrum of U at a tri-polynomial point")
    spectrum.add_argument("--degrees", required=True, help="p,q,r")
    spectrum.add_argument("--point", default=None)

    seifert = sub.add_parser("seifert", help="SFT Hamiltonian of a Seifert fibration")
    seifert.add_argument("--base", default="", help="Orbifold orders of the base; empty for P1")
    seifert.add_argument("--b", type=int, default=1, help="Chern class of the de-singularization")
    seifert.add_argument("--betas", default=None, help="Local invariants beta_i (default all 1)")
    seifert.add_argument("--c", default=None, help="Orbifold Chern class (overrides --b)")
    seifert.add_argument("--K", type=int, default=None, help="Fourier truncation")
    seifert.add_argument("--slice", default=None, help='Fiber class, e.g. "s=1" (default)')
    seifert.add_argument("--check", action="store_true", help="Quadrature, monotonicity and symmetry checks")

    fixtures = sub.add_parser("fixtures", help="Run the regression corpus")
    fixtures.add_argument("--report", default=None, help="CSV summary path")
    fixtures.add_argument("--with-mirror", action="store_true", help="Include the mirror pipelines")
    fixtures.add_argument("--progress", action="store_true")
    return parser


def _emit(payload: Dict, output: Optional[str]):
    text = json.dumps(payload, indent=2, sort_keys=True, default=str)
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    else:
        print(text)


def _fail(payload: Dict, code: int) -> int:
    print(json.dumps(payload, sort_keys=True, default=str), file=sys.stderr)
    return code


def run(argv: Optional[List[str]] = None) -> int:
    """
    Parse argv, run one verb and print its JSON

    Returns:
        0 on success, 1 on a failed check, 2 on a usage error, 3 when a resource cap is hit
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        settings = load_settings(args.config, {
            "max_workers": args.max_workers,
            "seed": args.seed,
            "cache_path": args.cache,
            "log_level": args.log_level,
        })
    except (UsageError, ValueError) as exc:
        return _fail({"error": "usage", "message": str(exc)}, EXIT_USAGE)

    logging.basicConfig(
        level=getattr(logging, settings.log_level.upper(), logging.WARNING),
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        stream=sys.stderr,
    )

    try:
        result = COMMANDS[args.verb](args, settings)
    except ResourceCapError as exc:
        logger.error(f"{args.verb}: {exc.message}")
        return _fail(exc.to_dict(), EXIT_RESOURCE_CAP)
    except CheckFailure as exc:
        return _fail(exc.to_dict(), EXIT_CHECK_FAILED)
    except OrbifrobError as exc:
        logger.error(f"{args.verb} failed: {exc.message}")
        return _fail(exc.to_dict(), EXIT_CHECK_FAILED)
    except (ValueError, KeyError) as exc:
        return _fail({"error": "usage", "message": str(exc)}, EXIT_USAGE)

    _emit(result.payload, args.output)
    return EXIT_OK if result.ok else EXIT_CHECK_FAILED


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
