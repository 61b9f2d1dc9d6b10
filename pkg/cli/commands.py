"""
Verb implementations: each maps parsed arguments and settings to a JSON-ready result
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import pandas as pd
from tqdm import tqdm

from algebra.errors import DegeneratePointError
from algebra.rational import format_rational, parse_rational
from cli.settings import Settings
from hurwitz.cache import HurwitzCache
from hurwitz.numbers import HurwitzQuery, hurwitz_number
from hurwitz.oracle import hurwitz_bruteforce_oracle
from hurwitz.partitions import BranchData, parse_partition
from mirror.pipeline import mirror_check_full
from orbigw.caps import CAP_FIXTURES, cap_potential, fixture_cap
from orbigw.classify import classify_polynomial, enumerate_profiles, max_exact_degree
from orbigw.fixtures import difference_from_reference, reference_orders, reference_potential
from orbigw.orbicurve import Orbicurve
from orbigw.potential import assemble_potential
from orbigw.solver import solve_cap
from orbigw.wdvv import all_vanish, wdvv_residual
from seifert.bundle import SeifertBundle, seifert_invariants
from seifert.hamiltonian import (base_polynomial, conjugation_symmetric, quadrature_check, sft_hamiltonian,
                                 slice_polynomial, truncation_monotone)
from tripoly.flat import flat_coordinate_system, flat_coordinates, pairing_deviation
from tripoly.jacobian import frobenius_point_data, invariance_error, jacobian_algebra
from tripoly.potentiality import potentiality_check
from tripoly.space import TriPolyPoint, TriPolySpace
from tripoly.spectrum import u_operator_spectrum

logger = logging.getLogger(__name__)

FROBENIUS_INVARIANCE_TOL = 1e-9
FLAT_PAIRING_TOL = 1e-8
POTENTIALITY_TOL = 1e-6


@dataclass
class CommandResult:
    """payload is printed as JSON; ok = False maps to exit code 1"""
    payload: Dict
    ok: bool = True
    table: Optional[List[Dict]] = field(default=None)


# Argument parsing helpers

def parse_orders(text: str) -> Tuple[int, ...]:
    """ "2,2,3" -> (2, 2, 3); empty text is the smooth P1"""
    text = (text or "").strip().strip("()[]")
    if not text:
        return ()
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError:
        raise ValueError(f"Unsupported order list: {text!r}")


def parse_degrees(text: str) -> Tuple[int, int, int]:
    degrees = parse_orders(text)
    if len(degrees) != 3:
        raise ValueError(f"Unsupported degrees {text!r}: expected p,q,r")
    return degrees


def parse_profiles(text: str) -> List:
    """ "(2);(2,1)" -> [Partition(2), Partition(2,1)]"""
    return [parse_partition(part) for part in (text or "").split(";") if part.strip()]


def parse_assignment(text: Optional[str]) -> Dict[str, Fraction]:
    """ "a1=1/2,W=2" -> {"a1": 1/2, "W": 2}"""
    values = {}
    for item in (text or "").split(","):
        if not item.strip():
            continue
        if "=" not in item:
            raise ValueError(f"Unsupported assignment {item!r}: expected name=value")
        name, value = item.split("=", 1)
        values[name.strip()] = parse_rational(value)
    return values


def _cache(args, settings: Settings) -> Optional[HurwitzCache]:
    return HurwitzCache(settings.cache_path) if getattr(args, "use_cache", False) else None


# Verbs

def cmd_classify(args, settings: Settings) -> CommandResult:
    orders = tuple(args.orders)
    classification = classify_polynomial(orders)
    payload = classification.to_dict()
    payload["orders"] = list(orders)
    if classification.polynomial:
        payload["max_degree"] = max_exact_degree(orders)
    else:
        # witnesses that the potential does not truncate
        payload["admissible_degrees"] = [d for d in range(1, settings.degree_cutoff + 1)
                                         if enumerate_profiles(orders, d)]
    return CommandResult(payload)


def cmd_hurwitz(args, settings: Settings) -> CommandResult:
    data = BranchData.of(args.degree, parse_profiles(args.profiles))
    query = HurwitzQuery(args.base_genus, args.genus, data, connected=not args.disconnected)
    if args.oracle:
        value = hurwitz_bruteforce_oracle(query, settings.oracle_cap_genus0, settings.oracle_cap_genus1)
    else:
        cache = _cache(args, settings)
        value = cache.get_or_compute(query) if cache else hurwitz_number(query, settings.max_character_degree)
    payload = query.to_record()
    payload["value"] = format_rational(value)
    payload["method"] = "oracle" if args.oracle else "characters"
    return CommandResult(payload)


def cmd_cap(args, settings: Settings) -> CommandResult:
    cap = solve_cap(args.order, settings.max_workers) if args.mode == "solve" else cap_potential(args.order)
    payload = cap.to_json()
    payload["mode"] = args.mode
    violations = cap.support_violations()
    payload["support_violations"] = violations
    return CommandResult(payload, ok=not violations)


def _potential(args, settings: Settings):
    curve = Orbicurve(0, parse_orders(args.orbifold))
    cutoff = args.cutoff
    exact = True if args.exact else None
    if cutoff is None and not classify_polynomial(curve.orders).polynomial:
        cutoff = settings.degree_cutoff
    return assemble_potential(curve, genus=getattr(args, "genus", 0), cutoff=cutoff, exact=exact,
                              cap_mode=args.cap_mode, cache=_cache(args, settings),
                              max_workers=settings.max_workers, progress=args.progress)


def cmd_gw_potential(args, settings: Settings) -> CommandResult:
    potential = _potential(args, settings)
    payload = potential.to_json()
    ok = True
    if args.compare_reference:
        diff = difference_from_reference(potential)
        payload["matches_reference"] = diff.is_zero()
        payload["difference"] = diff.to_json()
        ok = diff.is_zero()
    return CommandResult(payload, ok=ok)


def cmd_wdvv_check(args, settings: Settings) -> CommandResult:
    orders = parse_orders(args.orbifold)
    if args.source == "reference":
        potential = reference_potential(orders)
    else:
        potential = _potential(args, settings)
    residuals = wdvv_residual(potential.to_poly(), potential.grading, potential.truncation,
                              max_workers=settings.max_workers, include_zero=False)
    vanish = all_vanish(residuals)
    payload = {
        "orbifold": list(orders),
        "source": args.source,
        "residuals": len(residuals),
        "all_zero": vanish,
        "nonzero": [{"indices": list(r.indices), "poly": r.poly.to_json()} for r in residuals[:args.show]],
    }
    return CommandResult(payload, ok=vanish)


def _point(space: TriPolySpace, text: Optional[str]) -> TriPolyPoint:
    return TriPolyPoint.from_mapping(space, parse_assignment(text))


def _random_points(space: TriPolySpace, count: int, seed: int) -> List[TriPolyPoint]:
    """Random rational points, skipping those with degenerate critical points"""
    rng = random.Random(seed)
    points = []
    attempts = 0
    while len(points) < count:
        attempts += 1
        if attempts > 20 * count:
            raise DegeneratePointError(f"Could not draw {count} generic points of {space.name}")
        point = space.random_point(rng)
        try:
            jacobian_algebra(point)
        except DegeneratePointError:
            logger.warning(f"Resampling degenerate point {point.to_dict()}")
            continue
        points.append(point)
    return points


def frobenius_checks(space: TriPolySpace, count: int, seed: int, max_workers: int) -> Dict:
    """Invariance of the residue pairing, flatness of the pairing, and potentiality at random points"""
    points = _random_points(space, count, seed)
    invariance = max(invariance_error(frobenius_point_data(p)) for p in points)
    deviation = 0.0
    for point in points:
        data = frobenius_point_data(point)
        chart = flat_coordinates(space, point)
        deviation = max(deviation, pairing_deviation(chart.to_flat_pairing(data.pairing), space))
    potentiality = potentiality_check(points, max_workers=max_workers)
    return {
        "points": len(points),
        "invariance_error": invariance,
        "flat_pairing_deviation": deviation,
        "potentiality": potentiality.to_json(),
        "passed": invariance <= FROBENIUS_INVARIANCE_TOL and deviation <= FLAT_PAIRING_TOL
        and potentiality.passed(POTENTIALITY_TOL),
    }


def cmd_tripoly(args, settings: Settings) -> CommandResult:
    space = TriPolySpace(*parse_degrees(args.degrees))
    system = flat_coordinate_system(space, args.flat_method, settings.seed)
    payload = {"space": space.to_dict(), "flat_coordinates": system.to_dict()}
    ok = True
    if args.point is not None:
        point = _point(space, args.point)
        algebra = jacobian_algebra(point, settings.coefficient_bit_cap)
        data = frobenius_point_data(point, args.pairing_method, settings.seed)
        chart = system.chart(point)
        payload["point"] = point.to_dict()
        payload["superpotential"] = str(point.superpotential())
        payload["basis"] = algebra.basis_labels()
        payload["chart"] = chart.to_dict()
        payload["flat_pairing"] = [[format_rational(v) for v in row]
                                   for row in chart.to_flat_pairing(data.pairing)]
    if args.check:
        checks = frobenius_checks(space, args.count, settings.seed, settings.max_workers)
        payload["checks"] = checks
        ok = checks["passed"]
    return CommandResult(payload, ok=ok)


def cmd_mirror_check(args, settings: Settings) -> CommandResult:
    space = TriPolySpace(*parse_degrees(args.degrees))
    report = mirror_check_full(space, seed=settings.seed, count=args.count, cap_mode=args.cap_mode,
                               max_workers=settings.max_workers, eigen_tol=settings.eigen_tol)
    if not report.passed:
        logger.warning(f"Mirror check of {space.name} failed at stages {report.failed_stages()}")
    return CommandResult(report.to_json(), ok=report.passed)


def cmd_u_spectrum(args, settings: Settings) -> CommandResult:
    space = TriPolySpace(*parse_degrees(args.degrees))
    point = _point(space, args.point)
    spectrum = u_operator_spectrum(point, settings.seed, settings.eigen_tol)
    payload = spectrum.to_json()
    payload["point"] = point.to_dict()
    payload["distinct"] = spectrum.distinct
    return CommandResult(payload, ok=spectrum.matches_critical_values())


def _bundle(args) -> SeifertBundle:
    base = Orbicurve(0, parse_orders(args.base))
    betas = parse_orders(args.betas) if args.betas else (1,) * len(base.orders)
    if args.c is not None:
        return SeifertBundle(base, parse_rational(args.c), betas)
    return SeifertBundle.from_desingularization(base, args.b, betas)


def cmd_seifert(args, settings: Settings) -> CommandResult:
    bundle = _bundle(args)
    truncation = args.K or settings.fourier_modes
    f = slice_polynomial(base_polynomial(bundle), parse_assignment(args.slice) or None)
    result = sft_hamiltonian(bundle, f, truncation, settings.max_workers)
    payload = result.to_json()
    invariants = seifert_invariants(bundle)
    payload["invariants"] = {"c1": format_rational(invariants["c1"]), "N": invariants["N"],
                             "shifts": {k: format_rational(v) for k, v in invariants["shifts"].items()}}
    ok = True
    if args.check:
        quadrature = quadrature_check(bundle, f, truncation, seed=settings.seed)
        checks = {
            "quadrature": quadrature.to_json(),
            "monotone": truncation_monotone(bundle, f),
            "conjugation": conjugation_symmetric(bundle, f, truncation),
            "homogeneous": result.hamiltonian.is_homogeneous() if f.is_homogeneous() else None,
        }
        payload["checks"] = checks
        ok = quadrature.passed() and checks["monotone"] and checks["conjugation"] \
            and checks["homogeneous"] is not False
    return CommandResult(payload, ok=ok)


# Fixture corpus

def _corpus_items(settings: Settings, with_mirror: bool) -> List[Tuple[str, str, Callable[[], bool]]]:
    items: List[Tuple[str, str, Callable[[], bool]]] = []
    for orders in reference_orders():
        label = ",".join(str(a) for a in orders)
        items.append(("potential", label, lambda o=orders: difference_from_reference(
            assemble_potential(Orbicurve(0, o), exact=True, max_workers=settings.max_workers)).is_zero()))
        items.append(("wdvv", label, lambda o=orders: all_vanish(wdvv_residual(
            reference_potential(o).to_poly(), reference_potential(o).grading,
            max_workers=settings.max_workers, include_zero=False))))
    for alpha in sorted(CAP_FIXTURES):
        items.append(("cap", str(alpha), lambda a=alpha: solve_cap(a, settings.max_workers).to_json()
                      == fixture_cap(a).to_json()))
    for orders, family in (((2, 3, 5), "E"), ((2, 2, 7), "D"), ((3, 5), "A"), ((2, 3, 7), "none")):
        items.append(("classify", ",".join(map(str, orders)),
                      lambda o=orders, fam=family: classify_polynomial(o).family == fam))
    for name, bundle in (("prequantization", SeifertBundle(Orbicurve(0, ()), 1)),
                         ("p1_2_2_2", SeifertBundle.from_desingularization(Orbicurve(0, (2, 2, 2)), 0, (1, 1, 1)))):
        items.append(("seifert", name, lambda bdl=bundle: quadrature_check(bdl, seed=settings.seed).passed()))
    if with_mirror:
        for r in (2, 3, 4, 5):
            items.append(("mirror", f"2,2,{r}", lambda rr=r: mirror_check_full(
                TriPolySpace(2, 2, rr), seed=settings.seed, max_workers=settings.max_workers).passed))
        items.append(("mirror", "2,3,3", lambda: mirror_check_full(
            TriPolySpace(2, 3, 3), seed=settings.seed, max_workers=settings.max_workers).passed))
    return items


def cmd_fixtures(args, settings: Settings) -> CommandResult:
    rows = []
    items = _corpus_items(settings, args.with_mirror)
    for kind, label, check in tqdm(items, desc="Fixture corpus", disable=not args.progress):
        try:
            passed = bool(check())
            error = None
        except (ValueError, ArithmeticError) as exc:
            passed, error = False, str(exc)
        rows.append({"kind": kind, "case": label, "passed": passed, "error": error})
        logger.info(f"Fixture {kind} {label}: {'ok' if passed else 'FAILED'}")
    if args.report:
        pd.DataFrame(rows).to_csv(args.report, index=False)
        logger.info(f"Fixture report written to {args.report}")
    failed = [row for row in rows if not row["passed"]]
    payload = {"total": len(rows), "failed": len(failed), "results": rows}
    return CommandResult(payload, ok=not failed, table=rows)


COMMANDS: Dict[str, Callable] = {
    "classify": cmd_classify,
    "hurwitz": cmd_hurwitz,
    "cap": cmd_cap,
    "gw-potential": cmd_gw_potential,
    "wdvv-check": cmd_wdvv_check,
    "tripoly": cmd_tripoly,
    "mirror-check": cmd_mirror_check,
    "u-spectrum": cmd_u_spectrum,
    "seifert": cmd_seifert,
    "fixtures": cmd_fixtures,
}
