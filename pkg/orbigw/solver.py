"""
Determining unknown potential coefficients by WDVV
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import sympy

from algebra.errors import InconsistentSystemError, SolveError
from algebra.linear import solve_linear_exact
from algebra.rational import format_rational, to_fraction
from algebra.sparse_poly import SparsePoly, Variable, poly_sum
from hurwitz.cache import HurwitzCache, cached_hurwitz_number
from hurwitz.numbers import HurwitzQuery
from orbigw.caps import CapPotential, cap_ansatz
from orbigw.classify import enumerate_profiles
from orbigw.orbicurve import QUANTUM, Orbicurve, grading_and_euler
from orbigw.potential import (GWPotential, branch_contribution, classical_part, embedded_caps,
                              resolve_cutoff)
from orbigw.wdvv import wdvv_residual

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Equation:
    """A coefficient of a WDVV residual: a polynomial in the unknowns, tagged with its Q-degree"""
    poly: SparsePoly
    degree: int


@dataclass
class SolveResult:
    assignment: Dict[str, Fraction]
    potential: GWPotential
    verified: bool
    rounds: int = 0
    labels: Dict[str, str] = field(default_factory=dict)

    def to_json(self) -> Dict:
        return {
            "assignment": {k: format_rational(v) for k, v in sorted(self.assignment.items())},
            "labels": dict(sorted(self.labels.items())),
            "verified": self.verified,
            "rounds": self.rounds,
        }


def collect_equations(residual_polys: Sequence[SparsePoly], unknowns: Sequence[str]) -> List[Equation]:
    """Split residuals by monomials in the non-unknown variables; deduplicate up to scaling"""
    unknown_set = set(unknowns)
    unique: Dict[SparsePoly, Equation] = {}
    for poly in residual_polys:
        if poly.is_zero():
            continue
        others = [n for n in poly.names if n not in unknown_set]
        q_index = others.index(QUANTUM) if QUANTUM in others else None
        for exps, coeff in poly.collect(others).items():
            if coeff.is_zero():
                continue
            lead = coeff.sorted_terms()[0][1]
            normalized = coeff / lead
            degree = exps[q_index] if q_index is not None else 0
            existing = unique.get(normalized)
            if existing is None or existing.degree > degree:
                unique[normalized] = Equation(normalized, degree)
    return list(unique.values())


def _rational_root(poly: SparsePoly, name: str) -> Optional[Fraction]:
    symbol = sympy.Symbol(name)
    univariate = poly.drop_unused()
    roots = sympy.Poly(univariate.to_sympy([symbol]).as_expr(), symbol, domain=sympy.QQ).ground_roots()
    if len(roots) == 1:
        return to_fraction(next(iter(roots)))
    return None


def propagate(equations: List[Equation], unknowns: Sequence[str],
              degrees: Optional[Dict[str, int]] = None) -> Tuple[Dict[str, Fraction], int]:
    """
    Solve polynomial equations in the unknowns by repeated linear elimination

    Each round solves the linear equations exactly and fixes every unknown the
    solution pins down; when no linear equation helps, a univariate equation
    with a single rational root is used.

    Raises:
        SolveError: inconsistency, or no further progress (underdetermined)
    """
    assignment: Dict[str, Fraction] = {}
    degrees = degrees or {}
    rounds = 0
    while True:
        rounds += 1
        live = []
        for eq in equations:
            poly = eq.poly
            bound = {n: v for n, v in assignment.items() if n in poly.free_variables()}
            if bound:
                poly = poly.partial_evaluate(bound)
            if poly.is_zero():
                continue
            if poly.is_constant():
                logger.error(f"Inconsistent WDVV equation at degree {eq.degree}: {poly} = 0")
                raise SolveError(f"Inconsistent WDVV equation at Q-degree {eq.degree}",
                                 degree=eq.degree, residual=str(eq.poly))
            live.append(Equation(poly, eq.degree))
        equations = live
        remaining = [u for u in unknowns if u not in assignment]
        if not remaining:
            break
        if not equations:
            lowest = min((degrees.get(u, 0) for u in remaining), default=0)
            raise SolveError(f"Underdetermined: {len(remaining)} unknowns unconstrained",
                             degree=lowest, unknowns=remaining)

        progress = False
        linear = [eq for eq in equations if eq.poly.total_degree() == 1]
        if linear:
            columns = sorted({n for eq in linear for n in eq.poly.free_variables()})
            rows, rhs = [], []
            for eq in linear:
                rows.append([eq.poly.coefficient({n: 1}) for n in columns])
                rhs.append(-eq.poly.constant_term())
            try:
                solution = solve_linear_exact(rows, rhs)
            except InconsistentSystemError as e:
                lowest = min(eq.degree for eq in linear)
                raise SolveError(f"Inconsistent linear WDVV system (reduced row {e.row})",
                                 degree=lowest, residual=str(linear[0].poly))
            for c, name in enumerate(columns):
                if all(vec[c] == 0 for vec in solution.nullspace):
                    assignment[name] = solution.solution[c]
                    progress = True
        if not progress:
            for eq in sorted(equations, key=lambda e: e.degree):
                free = eq.poly.free_variables()
                if len(free) == 1:
                    root = _rational_root(eq.poly, free[0])
                    if root is not None:
                        assignment[free[0]] = root
                        progress = True
                        break
        if not progress:
            lowest = min(eq.degree for eq in equations)
            stuck = [eq for eq in equations if eq.degree == lowest][0]
            logger.error(f"WDVV solve stuck at degree {lowest} with {len(remaining)} unknowns")
            raise SolveError(f"Underdetermined WDVV system at Q-degree {lowest}",
                             degree=lowest, residual=str(stuck.poly), unknowns=remaining)
        logger.debug(f"Round {rounds}: {len(assignment)} unknowns fixed")
    return assignment, rounds


def unknown_degrees(potential: GWPotential) -> Dict[str, int]:
    degrees: Dict[str, int] = {}
    for name in potential.a_terms.free_variables():
        if name in potential.unknowns:
            degrees[name] = 0
    for d, poly in sorted(potential.quantum.items()):
        for name in poly.free_variables():
            if name in potential.unknowns and name not in degrees:
                degrees[name] = d
    return degrees


def solve_coefficients_by_wdvv(potential: GWPotential, max_workers: int = 4) -> SolveResult:
    """
    Fix every unknown coefficient of a genus-0 ansatz by WDVV

    Returns:
        SolveResult with the assignment, the solved potential and whether its
        residuals vanish identically
    """
    f = potential.to_poly()
    residuals = wdvv_residual(f, potential.grading, potential.truncation, max_workers=max_workers)
    if not potential.unknowns:
        verified = all(r.is_zero() for r in residuals)
        if not verified:
            worst = next(r for r in residuals if not r.is_zero())
            raise SolveError("Known potential violates WDVV", residual=str(worst.poly))
        return SolveResult({}, potential, True)

    equations = collect_equations([r.poly for r in residuals], potential.unknowns)
    logger.info(f"WDVV solve: {len(equations)} distinct equations in {len(potential.unknowns)} unknowns")
    assignment, rounds = propagate(equations, list(potential.unknowns), unknown_degrees(potential))
    solved = potential.with_assignment(assignment)
    check = wdvv_residual(solved.to_poly(), solved.grading, solved.truncation, max_workers=max_workers)
    verified = all(r.is_zero() for r in check)
    logger.info(f"WDVV solve finished in {rounds} rounds, verified={verified}")
    return SolveResult(assignment, solved, verified, rounds)


def hurwitz_ansatz(curve: Orbicurve, cutoff: Optional[int] = None, exact: Optional[bool] = None,
                   cap_mode: str = "fixture", cache: Optional[HurwitzCache] = None,
                   prefix: str = "h") -> Tuple[GWPotential, Dict[str, str]]:
    """
    Genus-0 potential with one unknown per branching configuration of degree >= 2

    Degree-1 coefficients keep their Hurwitz values: they fix the rescaling Q -> cQ,
    which preserves WDVV.

    Returns:
        (ansatz, unknown name -> branching configuration label)
    """
    if exact is None:
        exact = cutoff is None
    bound, truncation = resolve_cutoff(curve, exact, cutoff)
    grading = grading_and_euler(curve)
    embedded = embedded_caps(curve, cap_mode)
    b_hats = [b for _, b in embedded]

    jobs = [(d, data) for d in range(1, bound + 1) for data in enumerate_profiles(curve.orders, d)]
    unknown_names = [f"{prefix}{n}" for n in range(sum(1 for d, _ in jobs if d >= 2))]
    variables = grading.variables.all + tuple(Variable(u, 0) for u in unknown_names)
    names = iter(unknown_names)
    labels: Dict[str, str] = {}

    grouped: Dict[int, List[SparsePoly]] = {}
    for d, data in jobs:
        product = branch_contribution(data, b_hats, grading.variables.all).with_variables(variables)
        if d == 1:
            value = cached_hurwitz_number(HurwitzQuery(0, 0, data), cache)
            grouped.setdefault(d, []).append(product * value)
        else:
            name = next(names)
            labels[name] = str(data)
            grouped.setdefault(d, []).append(product * SparsePoly.variable(variables, name))

    ansatz = GWPotential(
        orbicurve=curve,
        genus=0,
        grading=grading,
        classical=classical_part(grading, 0).with_variables(variables),
        a_terms=poly_sum([a for a, _ in embedded], variables),
        quantum={d: poly_sum(polys, variables) for d, polys in grouped.items()},
        truncation=truncation,
        unknowns=tuple(unknown_names),
    )
    logger.info(f"Hurwitz ansatz for {curve.name}: {len(unknown_names)} unknowns up to degree {bound}")
    return ansatz, labels


def solve_hurwitz_ansatz(curve: Orbicurve, cutoff: Optional[int] = None, exact: Optional[bool] = None,
                         cap_mode: str = "fixture", cache: Optional[HurwitzCache] = None,
                         max_workers: int = 4) -> SolveResult:
    ansatz, labels = hurwitz_ansatz(curve, cutoff, exact, cap_mode, cache)
    result = solve_coefficients_by_wdvv(ansatz, max_workers=max_workers)
    result.labels = labels
    return result


def glued_cap_ansatz(cap: CapPotential) -> GWPotential:
    """
    Two copies of a cap glued into P^1_{alpha,alpha}:
    t0^2 s/2 + A(x) + A(y) + sum_{d <= alpha} Q^d B_d(x) B_d(y) / d
    """
    alpha = cap.order
    curve = Orbicurve(0, (alpha, alpha))
    grading = grading_and_euler(curve)
    variables = grading.variables.all + tuple(Variable(u, 0) for u in cap.unknowns)
    a_x, b_x = cap.embed(1)
    a_y, b_y = cap.embed(2)
    quantum = {}
    for d in range(1, alpha + 1):
        quantum[d] = b_x[d].with_variables(variables).multiply(b_y[d].with_variables(variables)) / d
    return GWPotential(
        orbicurve=curve,
        genus=0,
        grading=grading,
        classical=classical_part(grading, 0).with_variables(variables),
        a_terms=poly_sum([a_x, a_y], variables),
        quantum=quantum,
        truncation=None,
        unknowns=cap.unknowns,
    )


def solve_cap(alpha: int, max_workers: int = 4) -> CapPotential:
    """Cap of order alpha from the homogeneous ansatz, determined by WDVV on the glued P^1_{alpha,alpha}"""
    ansatz = cap_ansatz(alpha)
    glued = glued_cap_ansatz(ansatz)
    result = solve_coefficients_by_wdvv(glued, max_workers=max_workers)
    if not result.verified:
        raise SolveError(f"Solved cap of order {alpha} does not satisfy WDVV")
    cap = ansatz.with_assignment(result.assignment)
    logger.info(f"Solved cap of order {alpha} in {result.rounds} rounds")
    return cap
