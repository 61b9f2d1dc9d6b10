"""
Orbifold curves, graded variables, Euler field and Poincare pairing
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from algebra.sparse_poly import Variable

logger = logging.getLogger(__name__)

UNIT = "t0"
DIVISOR = "s"
QUANTUM = "Q"
HBAR = "hbar"


def twisted_name(point: int, k: int) -> str:
    """Twisted-sector variable t_(k,i) at orbifold point i (1-based)"""
    return f"t{point}_{k}"


@dataclass(frozen=True)
class Orbicurve:
    """A genus-g' curve with orbifold points of the given orders"""
    base_genus: int = 0
    orders: Tuple[int, ...] = ()

    def __post_init__(self):
        orders = tuple(int(a) for a in self.orders)
        if self.base_genus < 0:
            raise ValueError(f"Unsupported base genus: {self.base_genus}")
        if any(a < 2 for a in orders):
            raise ValueError(f"Unsupported orbifold orders {orders}: every order must be at least 2")
        object.__setattr__(self, "orders", orders)

    @property
    def euler_characteristic(self) -> Fraction:
        return 2 - 2 * self.base_genus - sum(1 - Fraction(1, a) for a in self.orders)

    @property
    def name(self) -> str:
        label = "P1" if self.base_genus == 0 else f"C{self.base_genus}"
        return label + ("_" + ",".join(str(a) for a in self.orders) if self.orders else "")

    def twisted_sectors(self) -> List[Tuple[int, int, str]]:
        """(point, k, name) for every twisted sector, ordered by point then k"""
        return [(i, k, twisted_name(i, k))
                for i, a in enumerate(self.orders, 1) for k in range(1, a)]

    @property
    def dimension(self) -> int:
        """Rank of the orbifold cohomology: 2 + sum(alpha_i - 1)"""
        return 2 + sum(a - 1 for a in self.orders)


@dataclass(frozen=True)
class GradedVarSet:
    """
    Variables of the genus-0 potential with their degrees

    flat: the coordinates [t0, twisted..., s] in basis order
    quantum: Q = e^s z, carrying degree -2 chi per unit
    """
    flat: Tuple[Variable, ...]
    quantum: Variable
    hbar: Variable

    @property
    def all(self) -> Tuple[Variable, ...]:
        return self.flat + (self.quantum,)

    @property
    def flat_names(self) -> List[str]:
        return [v.name for v in self.flat]

    def degree(self, name: str) -> Fraction:
        for v in self.all + (self.hbar,):
            if v.name == name:
                return v.degree
        raise KeyError(name)


@dataclass(frozen=True)
class GradingData:
    """Gradings, Euler field and Poincare pairing of an orbicurve"""
    orbicurve: Orbicurve
    variables: GradedVarSet
    euler_linear: Dict[str, Fraction]
    euler_constant: Dict[str, Fraction]
    pairing: Dict[Tuple[str, str], Fraction]
    inverse_pairing: Dict[Tuple[str, str], Fraction]

    def dual(self, name: str) -> Tuple[str, Fraction]:
        """The unique n with eta^{name n} != 0, and that entry"""
        for (a, b), value in self.inverse_pairing.items():
            if a == name:
                return b, value
        raise KeyError(name)

    def pairing_matrix(self) -> List[List[Fraction]]:
        names = self.variables.flat_names
        return [[self.pairing.get((a, b), Fraction(0)) for b in names] for a in names]

    def euler_vector(self, point: Dict[str, Fraction]) -> Dict[str, Fraction]:
        """Components of E at a point of the flat coordinates"""
        return {name: self.euler_linear.get(name, Fraction(0)) * point.get(name, 0)
                + self.euler_constant.get(name, Fraction(0))
                for name in self.variables.flat_names}


def grading_and_euler(curve: Orbicurve) -> GradingData:
    """
    Degrees, Euler field E = t0 d_t0 + sum (1 - k/alpha) t d_t + chi d_s and pairing eta

    eta(t0, s) = 1 and eta(t_(k,i), t_(alpha_i - k, i)) = 1/alpha_i
    """
    chi = curve.euler_characteristic
    flat = [Variable(UNIT, Fraction(-2))]
    euler_linear = {UNIT: Fraction(1)}
    pairing = {(UNIT, DIVISOR): Fraction(1), (DIVISOR, UNIT): Fraction(1)}
    inverse = {(UNIT, DIVISOR): Fraction(1), (DIVISOR, UNIT): Fraction(1)}
    for point, k, name in curve.twisted_sectors():
        alpha = curve.orders[point - 1]
        flat.append(Variable(name, Fraction(2 * k, alpha) - 2))
        euler_linear[name] = 1 - Fraction(k, alpha)
        partner = twisted_name(point, alpha - k)
        pairing[(name, partner)] = Fraction(1, alpha)
        inverse[(name, partner)] = Fraction(alpha)
    flat.append(Variable(DIVISOR, Fraction(0)))
    euler_linear[DIVISOR] = Fraction(0)
    variables = GradedVarSet(
        flat=tuple(flat),
        quantum=Variable(QUANTUM, -2 * chi),
        hbar=Variable(HBAR, Fraction(-4)),
    )
    logger.debug(f"Grading of {curve.name}: chi={chi}, {len(flat)} flat variables")
    return GradingData(
        orbicurve=curve,
        variables=variables,
        euler_linear=euler_linear,
        euler_constant={DIVISOR: chi},
        pairing=pairing,
        inverse_pairing=inverse,
    )
