"""
Orbifold cap potentials
Known caps for orders 2..5 and the homogeneous ansatz used to solve for the others
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Tuple

from algebra.errors import MissingCapError
from algebra.sparse_poly import SparsePoly, Variable
from orbigw.orbicurve import UNIT, twisted_name

logger = logging.getLogger(__name__)

# degree-zero part A and the p_j coefficients, stored as j * coeff(p_j)
CAP_FIXTURES = {
    2: {
        "a_terms": "t0*t1**2/4 - t1**4/96",
        "b_hat": {1: "t1", 2: "1"},
    },
    3: {
        # sextic term is in t2; the printed cap names t3, which the order-3 cap lacks
        "a_terms": "t0*t1*t2/3 + t1**3/18 - t1**2*t2**2/36 + t1*t2**4/648 - t2**6/19440",
        "b_hat": {1: "t1 + t2**2/6", 2: "t2", 3: "1"},
    },
    4: {
        "a_terms": (
            "-t3**8/4128768 + t2*t3**6/73728 - t1*t3**5/30720 - t2**2*t3**4/3072"
            " + t1*t2*t3**3/384 + t2**3*t3**2/384 - t1**2*t3**2/64 - t1*t2**2*t3/32"
            " + t0*t1*t3/4 - t2**4/192 + t0*t2**2/8 + t1**2*t2/8"
        ),
        "b_hat": {1: "t1 + t2*t3/4 + t3**3/96", 2: "t2 + t3**2/4", 3: "t3", 4: "1"},
    },
    5: {
        "a_terms": (
            "-7*t4**10/8100000000 + 7*t3*t4**8/90000000 - t2*t4**7/3150000"
            " - 13*t3**2*t4**6/4500000 + t1*t4**6/2250000 + t3**5/3000"
            " + 11*t2*t3*t4**5/375000 + 7*t3**3*t4**4/150000 - t2**2*t4**4/7500"
            " - t1*t3*t4**4/15000 - t1*t3**3/150 - t2*t3**2*t4**3/1500"
            " + t1*t2*t4**3/750 + t1*t2**2/10 - t2**2*t3**2/50 - 3*t3**4*t4**2/10000"
            " - t1**2*t4**2/100 + t1*t3**2*t4**2/500 + t2**2*t3*t4**2/250"
            " + t1**2*t3/10 + t0*t2*t3/5 - t2**3*t4/150 + t2*t3**3*t4/250"
            " + t0*t1*t4/5 - t1*t2*t3*t4/25"
        ),
        "b_hat": {
            1: "t1 + t2*t4/5 + t3**2/10 + t3*t4**2/50 + t4**4/3000",
            2: "t2 + 2*t3*t4/5 + 2*t4**3/75",
            3: "t3 + 3*t4**2/10",
            4: "t4",
            5: "1",
        },
    },
}


def cap_variables(alpha: int) -> Tuple[Variable, ...]:
    return (Variable(UNIT, -2),) + tuple(Variable(f"t{k}", Fraction(2 * k, alpha) - 2) for k in range(1, alpha))


def weight(alpha: int, exps: Tuple[int, ...]) -> int:
    """sum (alpha - k) i_k over twisted exponents (t_1..t_{alpha-1})"""
    return sum((alpha - k) * e for k, e in enumerate(exps, 1))


@dataclass(frozen=True)
class CapPotential:
    """
    Potential of an orbifold cap of order alpha

    a_terms: degree-zero part over (t0, t1..t_{alpha-1})
    b_hat: j -> j * (coefficient of p_j), a polynomial in t1..t_{alpha-1}
    unknowns: names of undetermined coefficients (solve mode only)
    """
    order: int
    a_terms: SparsePoly
    b_hat: Dict[int, SparsePoly]
    unknowns: Tuple[str, ...] = field(default=())

    def embed(self, point: int) -> Tuple[SparsePoly, Dict[int, SparsePoly]]:
        """Rename cap variables t_k to the twisted variables of the given orbifold point"""
        renames = {f"t{k}": twisted_name(point, k) for k in range(1, self.order)}

        def rename(poly: SparsePoly) -> SparsePoly:
            variables = [Variable(renames.get(v.name, v.name), v.degree) for v in poly.variables]
            return SparsePoly(variables, poly.terms)

        return rename(self.a_terms), {j: rename(p) for j, p in self.b_hat.items()}

    def support_violations(self) -> List[str]:
        """Monomials breaking the weight conditions (empty when the cap is homogeneous)"""
        alpha = self.order
        problems = []
        cap_names = [f"t{k}" for k in range(1, alpha)]
        for exps, _ in self.a_terms.collect(cap_names + [UNIT]).items():
            twisted, t0 = exps[:-1], exps[-1]
            if weight(alpha, twisted) + alpha * t0 != 2 * alpha:
                problems.append(f"A-term with exponents {exps}")
        for j, poly in self.b_hat.items():
            for exps in poly.collect(cap_names):
                if weight(alpha, exps) != alpha - j:
                    problems.append(f"B_{j} term with exponents {exps}")
        return problems

    def with_assignment(self, assignment: Dict[str, Fraction]) -> "CapPotential":
        bindings = {name: value for name, value in assignment.items() if name in self.unknowns}
        remaining = tuple(u for u in self.unknowns if u not in bindings)
        variables = cap_variables(self.order)

        def bind(poly: SparsePoly) -> SparsePoly:
            present = {n: v for n, v in bindings.items() if n in poly.names}
            result = poly.partial_evaluate(present) if present else poly
            return result.with_variables(variables) if not remaining else result

        return CapPotential(self.order, bind(self.a_terms),
                            {j: bind(p) for j, p in self.b_hat.items()}, remaining)

    def to_json(self) -> Dict:
        return {
            "order": self.order,
            "a_terms": self.a_terms.to_json(),
            "b_hat": {str(j): p.to_json() for j, p in sorted(self.b_hat.items())},
        }


def fixture_cap(alpha: int) -> CapPotential:
    if alpha not in CAP_FIXTURES:
        raise MissingCapError(f"No cap fixture for order {alpha}; use solve mode", order=alpha)
    data = CAP_FIXTURES[alpha]
    variables = cap_variables(alpha)
    a_terms = SparsePoly.from_expr(data["a_terms"], variables)
    b_hat = {j: SparsePoly.from_expr(text, variables) for j, text in data["b_hat"].items()}
    return CapPotential(alpha, a_terms, b_hat)


def _weighted_monomials(alpha: int, target: int) -> List[Tuple[int, ...]]:
    """Exponent vectors over t1..t_{alpha-1} of weight exactly target"""
    results = []

    def walk(k: int, remaining: int, exps: List[int]):
        if k == alpha:
            if remaining == 0:
                results.append(tuple(exps))
            return
        w = alpha - k
        for e in range(remaining // w, -1, -1):
            walk(k + 1, remaining - e * w, exps + [e])

    walk(1, target, [])
    return results


def cap_ansatz(alpha: int, prefix: str = "u") -> CapPotential:
    """
    Homogeneous cap with unknown coefficients

    The t0-part of A is fixed by the pairing; A-unknowns sit on pure twisted
    monomials of degree >= 3 and weight 2 alpha; B_j has its t_j coefficient
    normalized to 1 and B_alpha = 1.
    """
    if alpha < 2:
        raise ValueError(f"Unsupported cap order: {alpha}")
    base = cap_variables(alpha)
    a_monomials = [m for m in _weighted_monomials(alpha, 2 * alpha) if sum(m) >= 3]
    b_monomials = {j: [m for m in _weighted_monomials(alpha, alpha - j)
                       if not (sum(m) == 1 and m[j - 1] == 1)]
                   for j in range(1, alpha)}
    count = len(a_monomials) + sum(len(v) for v in b_monomials.values())
    unknown_names = [f"{prefix}{n}" for n in range(count)]
    variables = base + tuple(Variable(n, 0) for n in unknown_names)
    names = iter(unknown_names)

    def monomial(exps: Tuple[int, ...], unknown: str = None) -> SparsePoly:
        powers = {f"t{k}": e for k, e in enumerate(exps, 1) if e}
        if unknown:
            powers[unknown] = 1
        return SparsePoly.monomial(variables, powers)

    a_terms = SparsePoly.zero(variables)
    for k in range(1, alpha):
        if k < alpha - k:
            a_terms = a_terms + SparsePoly.monomial(variables, {UNIT: 1, f"t{k}": 1, f"t{alpha - k}": 1},
                                                    Fraction(1, alpha))
        elif k == alpha - k:
            a_terms = a_terms + SparsePoly.monomial(variables, {UNIT: 1, f"t{k}": 2}, Fraction(1, 2 * alpha))
    for exps in a_monomials:
        a_terms = a_terms + monomial(exps, next(names))

    b_hat = {alpha: SparsePoly.constant(variables, 1)}
    for j in range(1, alpha):
        poly = SparsePoly.variable(variables, f"t{j}")
        for exps in b_monomials[j]:
            poly = poly + monomial(exps, next(names))
        b_hat[j] = poly
    logger.info(f"Cap ansatz of order {alpha}: {count} unknown coefficients")
    return CapPotential(alpha, a_terms, b_hat, tuple(unknown_names))


def cap_potential(alpha: int, mode: str = "fixture") -> CapPotential:
    """
    Cap potential of order alpha

    Args:
        alpha: orbifold order (>= 2)
        mode: "fixture" for the tabulated caps (alpha <= 5), "solve" to
            determine the ansatz by WDVV on two glued caps
    """
    if alpha < 2:
        raise ValueError(f"Unsupported cap order: {alpha}")
    if mode == "fixture":
        return fixture_cap(alpha)
    if mode == "solve":
        from orbigw.solver import solve_cap
        return solve_cap(alpha)
    raise ValueError(f"Unsupported cap mode: {mode}")
