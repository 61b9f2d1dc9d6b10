"""
Assembly of orbifold Gromov-Witten potentials from Hurwitz numbers and caps
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from tqdm import tqdm

from algebra.errors import MissingCapError
from algebra.sparse_poly import SparsePoly, Variable, poly_sum
from hurwitz.cache import HurwitzCache, cached_hurwitz_number
from hurwitz.numbers import HurwitzQuery
from hurwitz.partitions import BranchData
from orbigw.caps import CapPotential, cap_potential
from orbigw.classify import classify_polynomial, enumerate_profiles, max_exact_degree
from orbigw.orbicurve import DIVISOR, QUANTUM, UNIT, GradingData, Orbicurve, grading_and_euler

logger = logging.getLogger(__name__)

DEFAULT_DEGREE_CUTOFF = 12


@dataclass(frozen=True)
class GWPotential:
    """
    Genus-g potential: classical part, cap A-terms, and the coefficients of Q^d = e^{ds} z^d

    truncation is None for an exact (polynomial) potential, otherwise the
    largest Q-degree included.
    """
    orbicurve: Orbicurve
    genus: int
    grading: GradingData
    classical: SparsePoly
    a_terms: SparsePoly
    quantum: Dict[int, SparsePoly]
    truncation: Optional[int] = None
    unknowns: Tuple[str, ...] = ()
    flags: Tuple[str, ...] = field(default=())

    @property
    def variables(self) -> Tuple[Variable, ...]:
        return self.grading.variables.all + tuple(Variable(u, 0) for u in self.unknowns)

    def to_poly(self) -> SparsePoly:
        """The whole potential as one polynomial in (t0, twisted, s, Q, unknowns)"""
        variables = self.variables
        q = SparsePoly.variable(variables, QUANTUM)
        pieces = [self.classical, self.a_terms]
        for d, coeff in self.quantum.items():
            pieces.append(coeff.with_variables(variables) * q ** d)
        return poly_sum(pieces, variables)

    def degree_part(self, d: int) -> SparsePoly:
        return self.quantum.get(d, SparsePoly.zero(self.variables))

    def max_degree(self) -> int:
        return max((d for d, p in self.quantum.items() if not p.is_zero()), default=0)

    def homogeneity_violations(self, expected: Fraction = Fraction(-4)) -> List[Tuple[int, ...]]:
        """Exponent vectors of monomials whose grading degree differs from expected"""
        poly = self.to_poly()
        if self.genus != 0:
            return []
        bad = []
        for exps in poly.terms:
            if poly.graded_degree(exps) != expected:
                bad.append(exps)
        return bad

    def with_assignment(self, assignment: Dict[str, Fraction]) -> "GWPotential":
        """Substitute solved unknown coefficients"""
        remaining = tuple(u for u in self.unknowns if u not in assignment)
        variables = self.grading.variables.all + tuple(Variable(u, 0) for u in remaining)

        def bind(poly: SparsePoly) -> SparsePoly:
            present = {n: v for n, v in assignment.items() if n in poly.names}
            bound = poly.partial_evaluate(present) if present else poly
            return bound.with_variables(variables)

        return GWPotential(
            orbicurve=self.orbicurve,
            genus=self.genus,
            grading=self.grading,
            classical=bind(self.classical),
            a_terms=bind(self.a_terms),
            quantum={d: bind(p) for d, p in self.quantum.items()},
            truncation=self.truncation,
            unknowns=remaining,
            flags=self.flags,
        )

    def to_json(self) -> Dict:
        return {
            "orbifold": list(self.orbicurve.orders),
            "genus": self.genus,
            "classical": (self.classical + self.a_terms).to_json(),
            "quantum": [{"d": d, "poly": p.to_json()} for d, p in sorted(self.quantum.items()) if not p.is_zero()],
            "truncation": self.truncation,
            "flags": list(self.flags),
        }


def classical_part(grading: GradingData, genus: int) -> SparsePoly:
    variables = grading.variables.all
    if genus == 0:
        return SparsePoly.monomial(variables, {UNIT: 2, DIVISOR: 1}, Fraction(1, 2))
    if genus == 1:
        return SparsePoly.monomial(variables, {DIVISOR: 1}, Fraction(-1, 24))
    return SparsePoly.zero(variables)


def branch_contribution(data: BranchData, b_hats: List[Dict[int, SparsePoly]],
                        variables: Tuple[Variable, ...]) -> SparsePoly:
    """Product over points and parts j of the cap series B_j at that point"""
    result = SparsePoly.constant(variables, 1)
    for profile, series in zip(data.profiles, b_hats):
        for part in profile.parts:
            if part not in series:
                raise MissingCapError(f"Cap of order {max(series)} has no B_{part} series", part=part)
            result = result * series[part].with_variables(variables)
    return result


def embedded_caps(curve: Orbicurve, mode: str = "fixture",
                  caps: Optional[Dict[int, CapPotential]] = None) -> List[Tuple[SparsePoly, Dict[int, SparsePoly]]]:
    """Caps renamed onto each orbifold point, one entry per point"""
    caps = dict(caps or {})
    embedded = []
    for point, alpha in enumerate(curve.orders, 1):
        if alpha not in caps:
            caps[alpha] = cap_potential(alpha, mode)
        embedded.append(caps[alpha].embed(point))
    return embedded


def resolve_cutoff(curve: Orbicurve, exact: bool, cutoff: Optional[int]) -> Tuple[int, Optional[int]]:
    """(degree bound, truncation marker): exact mode picks the maximal admissible degree"""
    if exact:
        if curve.base_genus != 0 or not classify_polynomial(curve.orders).polynomial:
            raise ValueError(f"Unsupported exact mode for non-polynomial orbifold {curve.name}")
        return max_exact_degree(curve.orders), None
    bound = DEFAULT_DEGREE_CUTOFF if cutoff is None else cutoff
    if bound < 0:
        raise ValueError(f"Unsupported degree cutoff: {bound}")
    return bound, bound


def assemble_potential(curve: Orbicurve, genus: int = 0, cutoff: Optional[int] = None,
                       exact: Optional[bool] = None, cap_mode: str = "fixture",
                       cache: Optional[HurwitzCache] = None, max_workers: int = 4,
                       caps: Optional[Dict[int, CapPotential]] = None,
                       progress: bool = False) -> GWPotential:
    """
    Assemble the genus-g potential of a P^1-orbifold

    Args:
        curve: the orbicurve (base genus 0)
        genus: cover genus g
        cutoff: maximal Q-degree when not in exact mode
        exact: use the maximal admissible degree (defaults to True for polynomial orbifolds without a cutoff)
        cap_mode: "fixture" or "solve"
        cache: optional persistent Hurwitz table
        max_workers: thread pool size for the (degree, profile) sum
        caps: precomputed caps by order, overriding cap_mode

    Returns:
        GWPotential whose Q^d coefficient is sum_mu H_{g,d}(mu) prod B_j
    """
    if curve.base_genus != 0:
        raise ValueError(f"Unsupported base genus {curve.base_genus}: assembly covers P^1-orbifolds")
    if genus < 0:
        raise ValueError(f"Unsupported genus: {genus}")
    if exact is None:
        exact = cutoff is None and classify_polynomial(curve.orders).polynomial
    bound, truncation = resolve_cutoff(curve, exact, cutoff)

    grading = grading_and_euler(curve)
    variables = grading.variables.all
    embedded = embedded_caps(curve, cap_mode, caps)
    b_hats = [b for _, b in embedded]

    a_terms = SparsePoly.zero(variables)
    if genus == 0:
        a_terms = poly_sum([a.with_variables(variables) for a, _ in embedded], variables)

    jobs = [(d, data) for d in range(1, bound + 1) for data in enumerate_profiles(curve.orders, d, genus)]
    logger.info(f"Assembling {curve.name} genus {genus}: {len(jobs)} branching configurations up to degree {bound}")

    def contribution(job: Tuple[int, BranchData]) -> Tuple[int, SparsePoly]:
        d, data = job
        value = cached_hurwitz_number(HurwitzQuery(0, genus, data, connected=True), cache)
        if not value:
            return d, SparsePoly.zero(variables)
        return d, branch_contribution(data, b_hats, variables) * value

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        results = list(tqdm(executor.map(contribution, jobs), total=len(jobs),
                            disable=not progress, desc=f"assemble {curve.name}"))

    grouped: Dict[int, List[SparsePoly]] = {}
    for d, poly in results:
        grouped.setdefault(d, []).append(poly)
    quantum = {d: poly_sum(polys, variables) for d, polys in grouped.items()}
    quantum = {d: p for d, p in quantum.items() if not p.is_zero()}

    flags: Tuple[str, ...] = ()
    if genus >= 1:
        flags = ("unchecked closed-form",)
    potential = GWPotential(
        orbicurve=curve,
        genus=genus,
        grading=grading,
        classical=classical_part(grading, genus),
        a_terms=a_terms,
        quantum=quantum,
        truncation=truncation,
        flags=flags,
    )
    logger.info(f"Assembled {curve.name}: degrees {sorted(quantum)}")
    return potential
