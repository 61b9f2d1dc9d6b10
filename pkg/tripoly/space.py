"""
Spaces of tri-polynomials F = -xyz + P1(x) + P2(y) + P3(W z), W = e^dlog
"""

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

from algebra.rational import format_rational, to_fraction
from algebra.sparse_poly import SparsePoly, Variable

logger = logging.getLogger(__name__)

X, Y, Z = "x", "y", "z"
SCALE = "W"
DLOG = "dlog"
EXCEPTIONAL_R = (3, 4, 5)


@dataclass(frozen=True)
class TriPolySpace:
    """
    The family of tri-polynomials of degrees (p, q, r), normalized by a_p = b_q = c_r = 1

    Coordinates: a_1..a_{p-1}, b_1..b_{q-1}, c_0..c_{r-1}, dlog
    """
    p: int
    q: int
    r: int

    def __post_init__(self):
        for value in (self.p, self.q, self.r):
            if int(value) < 1:
                raise ValueError(f"Unsupported degrees {(self.p, self.q, self.r)}: every degree must be positive")
        if Fraction(1, self.p) + Fraction(1, self.q) + Fraction(1, self.r) <= 1:
            raise ValueError(f"Unsupported degrees {(self.p, self.q, self.r)}: need 1/p + 1/q + 1/r > 1")
        self.family

    @property
    def degrees(self) -> Tuple[int, int, int]:
        return self.p, self.q, self.r

    @property
    def family(self) -> str:
        if self.r == 1:
            return "A"
        if self.p == 2 and self.q == 2:
            return "D"
        if self.p == 2 and self.q == 3 and self.r in EXCEPTIONAL_R:
            return "E"
        raise ValueError(f"Unsupported degrees {self.degrees}: use (p, q, 1), (2, 2, r) or (2, 3, r) with r in 3..5")

    @property
    def name(self) -> str:
        return f"M_{self.p},{self.q},{self.r}"

    @property
    def dimension(self) -> int:
        return self.p + self.q + self.r - 1

    @property
    def chi(self) -> Fraction:
        """Weight of W = e^dlog under the Euler field"""
        return -1 + Fraction(1, self.p) + Fraction(1, self.q) + Fraction(1, self.r)

    @property
    def a_names(self) -> List[str]:
        return [f"a{i}" for i in range(1, self.p)]

    @property
    def b_names(self) -> List[str]:
        return [f"b{j}" for j in range(1, self.q)]

    @property
    def c_names(self) -> List[str]:
        return [f"c{k}" for k in range(self.r)]

    @property
    def coordinate_names(self) -> List[str]:
        return self.a_names + self.b_names + self.c_names + [DLOG]

    def weights(self) -> Dict[str, Fraction]:
        """Euler-field coefficients: E = sum w_v v d/dv + chi d/d(dlog)"""
        weights = {f"a{i}": 1 - Fraction(i, self.p) for i in range(1, self.p)}
        weights.update({f"b{j}": 1 - Fraction(j, self.q) for j in range(1, self.q)})
        weights.update({f"c{k}": 1 - Fraction(k, self.r) for k in range(self.r)})
        weights[DLOG] = Fraction(0)
        return weights

    def grading_degrees(self) -> Dict[str, Fraction]:
        """deg a_i = -2 + 2i/p, deg b_j = -2 + 2j/q, deg c_k = -2 + 2k/r, deg dlog = 0"""
        return {name: -2 * w for name, w in self.weights().items()}

    def parameter_variables(self) -> Tuple[Variable, ...]:
        """Polynomial parameters (a, b, c, W) weighted by the Euler field"""
        weights = self.weights()
        params = [Variable(n, weights[n]) for n in self.a_names + self.b_names + self.c_names]
        return tuple(params) + (Variable(SCALE, self.chi),)

    def space_variables(self) -> Tuple[Variable, ...]:
        return (Variable(X, Fraction(1, self.p)), Variable(Y, Fraction(1, self.q)),
                Variable(Z, Fraction(1, self.r) - self.chi))

    def superpotential(self) -> SparsePoly:
        """F over (x, y, z, a, b, c, W); homogeneous of weight 1"""
        variables = self.space_variables() + self.parameter_variables()
        x, y, z, w = (SparsePoly.variable(variables, n) for n in (X, Y, Z, SCALE))
        f = -(x * y * z) + x ** self.p + y ** self.q + (w * z) ** self.r
        for i in range(1, self.p):
            f = f + SparsePoly.variable(variables, f"a{i}") * x ** i
        for j in range(1, self.q):
            f = f + SparsePoly.variable(variables, f"b{j}") * y ** j
        for k in range(self.r):
            f = f + SparsePoly.variable(variables, f"c{k}") * (w * z) ** k
        return f

    def tangent_images(self) -> Dict[str, SparsePoly]:
        """Kodaira-Spencer images dF/dv; the dlog direction acts as W d/dW"""
        f = self.superpotential()
        images = {name: f.derivative(name) for name in self.a_names + self.b_names + self.c_names}
        images[DLOG] = f.euler_derivative(SCALE)
        return images

    def random_point(self, rng: Optional[random.Random] = None, span: int = 3,
                     denominators: Sequence[int] = (1, 2, 3)) -> "TriPolyPoint":
        rng = rng or random.Random()

        def draw() -> Fraction:
            return Fraction(rng.randint(-span, span), rng.choice(denominators))

        w = Fraction(rng.randint(1, span), rng.choice(denominators))
        return TriPolyPoint(self, tuple(draw() for _ in self.a_names), tuple(draw() for _ in self.b_names),
                            tuple(draw() for _ in self.c_names), w)

    def to_dict(self) -> Dict:
        return {"degrees": list(self.degrees), "family": self.family, "dimension": self.dimension}


@dataclass(frozen=True)
class TriPolyPoint:
    """A point of a tri-polynomial space with exact rational coordinates and W = e^dlog > 0"""
    space: TriPolySpace
    a: Tuple[Fraction, ...]
    b: Tuple[Fraction, ...]
    c: Tuple[Fraction, ...]
    w: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(to_fraction(v) for v in self.a))
        object.__setattr__(self, "b", tuple(to_fraction(v) for v in self.b))
        object.__setattr__(self, "c", tuple(to_fraction(v) for v in self.c))
        object.__setattr__(self, "w", to_fraction(self.w))
        space = self.space
        if (len(self.a), len(self.b), len(self.c)) != (space.p - 1, space.q - 1, space.r):
            raise ValueError(f"Unsupported point for {space.name}: expected {space.p - 1} a, "
                             f"{space.q - 1} b and {space.r} c coordinates")
        if self.w <= 0:
            raise ValueError(f"Unsupported scale W = {self.w}: e^dlog must be a positive rational")

    @classmethod
    def from_mapping(cls, space: TriPolySpace, values: Mapping[str, object]) -> "TriPolyPoint":
        """Build from {a1: .., b1: .., c0: .., W: ..}; missing coordinates are 0 and W defaults to 1"""
        known = set(space.a_names + space.b_names + space.c_names + [SCALE])
        extra = [n for n in values if n not in known]
        if extra:
            raise ValueError(f"Unsupported coordinates {extra} for {space.name}")
        get = lambda n: to_fraction(values.get(n, 0))
        return cls(space, tuple(get(n) for n in space.a_names), tuple(get(n) for n in space.b_names),
                   tuple(get(n) for n in space.c_names), to_fraction(values.get(SCALE, 1)))

    @property
    def dlog(self) -> float:
        return math.log(self.w)

    def parameter_values(self) -> Dict[str, Fraction]:
        values = dict(zip(self.space.a_names, self.a))
        values.update(zip(self.space.b_names, self.b))
        values.update(zip(self.space.c_names, self.c))
        values[SCALE] = self.w
        return values

    def shifted(self, name: str, h) -> "TriPolyPoint":
        """The point with parameter `name` (a, b, c or W) moved by h"""
        values = self.parameter_values()
        if name not in values:
            raise ValueError(f"Unsupported direction {name}")
        values[name] = values[name] + to_fraction(h)
        return TriPolyPoint.from_mapping(self.space, values)

    def superpotential(self) -> SparsePoly:
        """F at this point, over (x, y, z)"""
        return self.space.superpotential().partial_evaluate(self.parameter_values())

    def tangent_images(self) -> Dict[str, SparsePoly]:
        values = self.parameter_values()
        return {n: img.partial_evaluate({k: v for k, v in values.items() if k in img.names})
                .with_variables(self.space.space_variables())
                for n, img in self.space.tangent_images().items()}

    def to_dict(self) -> Dict:
        data = {n: format_rational(v) for n, v in self.parameter_values().items()}
        data[DLOG] = self.dlog
        return data
