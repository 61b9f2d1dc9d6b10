"""
Seifert fibrations over P1-orbifolds: Chern classes, period and degree shifts
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Dict, List, Sequence, Tuple

from algebra.rational import format_rational, to_fraction
from orbigw.orbicurve import DIVISOR, UNIT, Orbicurve, twisted_name

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BasisInfo:
    """Cohomology basis labels with their degree shifts: 0 for 1 and [omega], l/alpha_i for (i, l)"""
    labels: Tuple[str, ...]
    shifts: Dict[str, Fraction]

    def shift(self, label: str) -> Fraction:
        return self.shifts[label]


@dataclass(frozen=True)
class SeifertBundle:
    """
    Circle bundle over an orbicurve with orbifold Chern class c and local invariants beta_i

    The de-singularization has Chern class b = c - sum beta_i/alpha_i, an integer.
    """
    base: Orbicurve
    c: Fraction
    betas: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "c", to_fraction(self.c))
        object.__setattr__(self, "betas", tuple(int(beta) for beta in self.betas))
        if self.base.base_genus != 0:
            raise ValueError(f"Unsupported base {self.base.name}: Seifert Hamiltonians need a P1-orbifold")
        if len(self.betas) != len(self.base.orders):
            raise ValueError(f"Unsupported invariants {self.betas}: expected one beta per orbifold point "
                             f"of {self.base.name}")
        b = self.desingularized_chern
        if b.denominator != 1:
            raise ValueError(f"Unsupported Chern class {self.c}: c - sum beta/alpha = {b} is not an integer")

    @classmethod
    def from_desingularization(cls, base: Orbicurve, b: int, betas: Sequence[int] = ()) -> "SeifertBundle":
        c = Fraction(b) + sum((Fraction(beta, alpha) for beta, alpha in zip(betas, base.orders)), Fraction(0))
        return cls(base, c, tuple(betas))

    @property
    def desingularized_chern(self) -> Fraction:
        return self.c - sum((Fraction(beta, alpha) for beta, alpha in zip(self.betas, self.base.orders)),
                            Fraction(0))

    @property
    def period(self) -> int:
        """N = alpha_1 ... alpha_a; every Fourier exponent lies in (1/N) Z"""
        return prod(self.base.orders)

    def basis(self) -> BasisInfo:
        shifts = {UNIT: Fraction(0), DIVISOR: Fraction(0)}
        for point, k, name in self.base.twisted_sectors():
            shifts[name] = Fraction(k, self.base.orders[point - 1])
        labels = (UNIT,) + tuple(name for _, _, name in self.base.twisted_sectors()) + (DIVISOR,)
        return BasisInfo(labels, shifts)

    def to_dict(self) -> Dict:
        return {
            "base": list(self.base.orders),
            "c1": format_rational(self.c),
            "betas": list(self.betas),
            "b": int(self.desingularized_chern),
        }


def seifert_invariants(bundle: SeifertBundle) -> Dict:
    basis = bundle.basis()
    return {
        "c1": bundle.c,
        "N": bundle.period,
        "b": int(bundle.desingularized_chern),
        "shifts": {label: basis.shift(label) for label in basis.labels},
    }


def section_constraint(k_list: Sequence[int], m_list: Sequence[int], deg: int, bundle: SeifertBundle) -> bool:
    """sum k_i / m_i == deg * c_1 exactly"""
    if len(k_list) != len(m_list):
        raise ValueError(f"Unsupported lists: {len(k_list)} multiplicities for {len(m_list)} orders")
    if any(m < 1 for m in m_list):
        raise ValueError(f"Unsupported orders {list(m_list)}: every m_i must be positive")
    total = sum((Fraction(k, m) for k, m in zip(k_list, m_list)), Fraction(0))
    return total == deg * bundle.c


def shipped_bundles() -> List[Tuple[str, SeifertBundle]]:
    """Prequantization of P1 and the b = 0 bundle over P1_{2,2,2}"""
    return [
        ("prequantization", SeifertBundle(Orbicurve(0, ()), 1)),
        ("p1_2_2_2", SeifertBundle.from_desingularization(Orbicurve(0, (2, 2, 2)), 0, (1, 1, 1))),
    ]


def twisted_label(point: int, l: int) -> str:
    return twisted_name(point, l)
