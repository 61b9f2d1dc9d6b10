"""
Flat coordinates of the residue pairing on a tri-polynomial space
A and D families use expansions at infinity; E families use a graded ansatz
"""

import logging
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from algebra.errors import DegeneratePointError, InconsistentSystemError, SolveError, StructuralError
from algebra.linear import exact_inverse, matrix_to_json, solve_linear_exact
from algebra.rational import format_rational
from algebra.series import FractionalSeries, puiseux_at_infinity
from algebra.sparse_poly import SparsePoly, Variable
from tripoly.jacobian import residue_pairing
from tripoly.space import DLOG, SCALE, X, Y, TriPolyPoint, TriPolySpace

logger = logging.getLogger(__name__)

ZETA = "zeta"
FLAT_PREFIX = {"a": "alpha", "b": "beta", "c": "gamma"}
ANSATZ_CHECK_POINTS = 4
ANSATZ_EXTRA_SAMPLES = 6

# closed forms for (2,3,3); gamma0 is given on the slice b = c = 0
E6_CLOSED_FORMS: Dict[str, str] = {
    "alpha1": "a1 + 8*W**3",
    "beta1": "b1 - b2**2/6 + 3*c2*W**2",
    "beta2": "b2",
    "gamma1": "c1 - c2**2/6 + 3*b2*W**2",
    "gamma2": "c2",
}
E6_GAMMA0_SLICE = "c0 + 6*a1*W**3 + 30*W**6"


def flat_name(coordinate: str) -> str:
    """a2 -> alpha2, c0 -> gamma0; dlog is its own flat coordinate"""
    if coordinate == DLOG:
        return DLOG
    return FLAT_PREFIX[coordinate[0]] + coordinate[1:]


def flat_names(space: TriPolySpace) -> List[str]:
    return [flat_name(n) for n in space.coordinate_names]


def expected_pairing(space: TriPolySpace) -> List[List[Fraction]]:
    """Constant pairing in flat coordinates: 1/p, 1/q, 1/r between complementary indices, (gamma0, dlog) = 1"""
    names = flat_names(space)
    index = {n: i for i, n in enumerate(names)}
    n = len(names)
    g = [[Fraction(0)] * n for _ in range(n)]

    def put(a: str, b: str, value: Fraction):
        g[index[a]][index[b]] = g[index[b]][index[a]] = value

    for i in range(1, space.p):
        put(f"alpha{i}", f"alpha{space.p - i}", Fraction(1, space.p))
    for j in range(1, space.q):
        put(f"beta{j}", f"beta{space.q - j}", Fraction(1, space.q))
    for k in range(1, space.r):
        put(f"gamma{k}", f"gamma{space.r - k}", Fraction(1, space.r))
    put("gamma0", DLOG, Fraction(1))
    return g


def directional(poly: SparsePoly, coordinate: str) -> SparsePoly:
    """Derivative along a coordinate field; d/d(dlog) acts as W d/dW"""
    if coordinate == DLOG:
        return poly.euler_derivative(SCALE)
    if coordinate not in poly.names:
        return SparsePoly.zero(poly.variables)
    return poly.derivative(coordinate)


# Expansions at infinity

def _edge_coordinates(space: TriPolySpace, variable: str, prefix: str, degree: int) -> Dict[str, SparsePoly]:
    """(n/(n-i)) [v^0] P(v)^{1-i/n} for the edge polynomial P of degree n"""
    params = space.parameter_variables()
    v = SparsePoly.variable((Variable(variable, 0),) + params, variable)
    poly = v ** degree
    for i in range(1, degree):
        poly = poly + SparsePoly.variable(v.variables, f"{prefix}{i}") * v ** i
    result = {}
    for i in range(1, degree):
        series = puiseux_at_infinity(poly, variable, 1 - Fraction(i, degree), 1)
        coeff = series.coefficient(0) * Fraction(degree, degree - i)
        result[f"{FLAT_PREFIX[prefix]}{i}"] = coeff.with_variables(params)
    return result


def gamma_from_log_expansion(space: TriPolySpace) -> Dict[str, SparsePoly]:
    """
    gamma_0..gamma_{r-1} from the expansion of log(zeta + sqrt(zeta^2 - 4W^2)) in lambda^{-1/r}

    Inverts lambda = c_0 + c_1 zeta + ... + zeta^r near infinity as zeta = u^{-1} s(u),
    u = lambda^{-1/r}, by fixed-point iteration; each step fixes one more order of s.
    """
    r = space.r
    params = space.parameter_variables()
    order = r + 1
    one = FractionalSeries.one("1/u", 1, order, params)
    c = [SparsePoly.variable(params, f"c{k}") for k in range(r)]
    w = SparsePoly.variable(params, SCALE)
    s = one
    for _ in range(r + 1):
        inner = one
        for k in range(r):
            inner = inner + (s.power(k - r) * c[k]).shift(r - k)
        s = inner.power(Fraction(-1, r))
    expansion = s.log()
    for n in range(1, r // 2 + 1):
        coeff = -Fraction(math.comb(2 * n, n), 2 * n)
        expansion = expansion + (s.power(-2 * n) * (w ** (2 * n) * coeff)).shift(2 * n)
    return {f"gamma{r - k}": (expansion.coefficient(k) * (-r)).with_variables(params) for k in range(1, r + 1)}


def gamma_from_residue(space: TriPolySpace, k: int) -> SparsePoly:
    """(r/(r-k)) [zeta^-1] lambda^{1-k/r} (zeta^2 - 4W^2)^{-1/2} for 1 <= k < r, lambda = F(0,0,zeta/W)"""
    r = space.r
    if not 1 <= k < r:
        raise ValueError(f"Unsupported index {k}: the residue formula covers 1 <= k < {r}")
    params = space.parameter_variables()
    variables = (Variable(ZETA, 0),) + params
    zeta = SparsePoly.variable(variables, ZETA)
    lam = zeta ** r
    for j in range(r):
        lam = lam + SparsePoly.variable(variables, f"c{j}") * zeta ** j
    w = SparsePoly.variable(variables, SCALE)
    root = puiseux_at_infinity(lam, ZETA, 1 - Fraction(k, r), 2)
    damping = puiseux_at_infinity(zeta ** 2 - w ** 2 * 4, ZETA, Fraction(-1, 2), r - k + 2)
    return ((root * damping).coefficient(1) * Fraction(r, r - k)).with_variables(params)


def check_gamma_residues(space: TriPolySpace, gammas: Dict[str, SparsePoly]) -> None:
    """
    Compare gamma_1..gamma_{r-1} of the log expansion with the residue formula

    Raises:
        StructuralError: the two normalizations disagree for some k
    """
    for k in range(1, space.r):
        name = f"gamma{k}"
        residue = gamma_from_residue(space, k)
        if residue != gammas[name]:
            logger.error(f"{name} of {space.name}: residue {residue} vs log expansion {gammas[name]}")
            raise StructuralError(f"Residue and log-expansion forms of {name} disagree on {space.name}")


def series_flat_polynomials(space: TriPolySpace) -> Dict[str, SparsePoly]:
    if space.family == "E":
        raise ValueError(f"Unsupported family E for {space.name}: use the ansatz solver")
    polys = _edge_coordinates(space, X, "a", space.p)
    polys.update(_edge_coordinates(space, Y, "b", space.q))
    gammas = gamma_from_log_expansion(space)
    check_gamma_residues(space, gammas)
    polys.update(gammas)
    return polys


# Graded ansatz

def graded_monomials(variables: Sequence[Variable], target: Fraction) -> List[Dict[str, int]]:
    """Exponent maps of every monomial of weighted degree `target`; all weights must be positive"""
    target = Fraction(target)
    if target < 0:
        return []
    result: List[Dict[str, int]] = []

    def walk(i: int, remaining: Fraction, current: Dict[str, int]):
        if remaining == 0:
            result.append(dict(current))
            return
        if i == len(variables):
            return
        v = variables[i]
        e = 0
        while e * v.degree <= remaining:
            if e:
                current[v.name] = e
            walk(i + 1, remaining - e * v.degree, current)
            e += 1
        current.pop(v.name, None)

    if any(v.degree <= 0 for v in variables):
        raise ValueError("Unsupported grading: monomial enumeration needs positive weights")
    walk(0, target, {})
    return result


def _sample_points(space: TriPolySpace, count: int, rng: random.Random) -> List[Tuple[TriPolyPoint, List[List]]]:
    samples = []
    attempts = 0
    while len(samples) < count:
        attempts += 1
        if attempts > 20 * count:
            raise SolveError(f"Could not find {count} non-degenerate sample points on {space.name}")
        point = space.random_point(rng)
        try:
            samples.append((point, residue_pairing(point, method="trace")))
        except DegeneratePointError:
            continue
    return samples


def interpolate_pairing(space: TriPolySpace, seed: int = 0) -> Dict[Tuple[int, int], SparsePoly]:
    """
    Entries g_ij of the residue pairing as weighted-homogeneous polynomials

    g_ij has weight 1 - w_i - w_j in (a, b, c_1.., W) and does not depend on c_0.
    """
    weights = space.weights()
    names = space.coordinate_names
    variables = tuple(v for v in space.parameter_variables() if v.name != "c0")
    shapes = {}
    for i in range(len(names)):
        for j in range(i, len(names)):
            target = 1 - weights[names[i]] - weights[names[j]]
            shapes[(i, j)] = [SparsePoly.monomial(variables, m) for m in graded_monomials(variables, target)]
    needed = max(len(m) for m in shapes.values()) + ANSATZ_EXTRA_SAMPLES
    samples = _sample_points(space, needed, random.Random(seed))
    logger.info(f"Interpolating the pairing of {space.name} from {needed} sample points")

    entries: Dict[Tuple[int, int], SparsePoly] = {}
    for (i, j), monomials in shapes.items():
        if not monomials:
            if any(g[i][j] != 0 for _, g in samples):
                raise StructuralError(f"Pairing entry ({names[i]}, {names[j]}) of negative weight is nonzero")
            entries[(i, j)] = SparsePoly.zero(variables)
            continue
        rows = [[m.evaluate(point.parameter_values()) for m in monomials] for point, _ in samples]
        rhs = [g[i][j] for _, g in samples]
        try:
            solution = solve_linear_exact(rows, rhs)
        except InconsistentSystemError:
            raise StructuralError(f"Pairing entry ({names[i]}, {names[j]}) is not a polynomial of weight "
                                  f"{1 - weights[names[i]] - weights[names[j]]}")
        if solution.nullspace:
            raise StructuralError(f"Samples do not determine pairing entry ({names[i]}, {names[j]})")
        entry = SparsePoly.zero(variables)
        for coeff, m in zip(solution.solution, monomials):
            entry = entry + m * coeff
        entries[(i, j)] = entry
    return entries


def _christoffel(space: TriPolySpace, entries: Dict[Tuple[int, int], SparsePoly],
                 values: Dict[str, Fraction]) -> List[List[List[Fraction]]]:
    """Gamma[k][i][j] of the Levi-Civita connection of g at a point"""
    names = space.coordinate_names
    n = len(names)
    g = lambda i, j: entries[(min(i, j), max(i, j))]
    metric = [[g(i, j).evaluate(values) for j in range(n)] for i in range(n)]
    inverse = exact_inverse(metric)
    dg = [[[directional(g(i, j), names[l]).evaluate(values) for l in range(n)] for j in range(n)]
          for i in range(n)]
    gamma = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            lowered = [(dg[j][l][i] + dg[i][l][j] - dg[i][j][l]) / 2 for l in range(n)]
            for k in range(n):
                value = sum(inverse[k][l] * lowered[l] for l in range(n))
                gamma[k][i][j] = gamma[k][j][i] = value
    return gamma


def _hessian_row(poly: SparsePoly, names: Sequence[str], gamma, values: Dict[str, Fraction],
                 i: int, j: int) -> Fraction:
    first = [directional(poly, name).evaluate(values) for name in names]
    second = directional(directional(poly, names[i]), names[j]).evaluate(values)
    return second - sum(gamma[k][i][j] * first[k] for k in range(len(names)))


def ansatz_flat_polynomials(space: TriPolySpace, seed: int = 0) -> Dict[str, SparsePoly]:
    """
    Flat coordinates as weighted-homogeneous polynomials: leading coordinate plus
    unknown multiples of the other monomials of its weight

    The unknowns are fixed by the flatness equations D_i D_j t = Gamma^k_ij D_k t
    at random points. Linear monomials of other coordinates are left out so that
    each flat coordinate is unique.

    Raises:
        SolveError: no polynomial of the ansatz shape is flat
    """
    entries = interpolate_pairing(space, seed)
    names = space.coordinate_names
    weights = space.weights()
    params = space.parameter_variables()
    rng = random.Random(seed + 1)
    checks = []
    for _ in range(ANSATZ_CHECK_POINTS):
        values = space.random_point(rng).parameter_values()
        checks.append((values, _christoffel(space, entries, values)))

    coordinate_set = set(names)
    polys = {}
    for coordinate in names:
        if coordinate == DLOG:
            continue
        lead = SparsePoly.variable(params, coordinate)
        monomials = []
        for exps in graded_monomials(params, weights[coordinate]):
            linear = len(exps) == 1 and list(exps.values()) == [1]
            if linear and next(iter(exps)) in coordinate_set:
                continue
            monomials.append(SparsePoly.monomial(params, exps))
        if not monomials:
            polys[flat_name(coordinate)] = lead
            continue
        rows, rhs = [], []
        for values, gamma in checks:
            for i in range(len(names)):
                for j in range(i, len(names)):
                    rows.append([_hessian_row(m, names, gamma, values, i, j) for m in monomials])
                    rhs.append(-_hessian_row(lead, names, gamma, values, i, j))
        try:
            solution = solve_linear_exact(rows, rhs)
        except InconsistentSystemError as e:
            logger.error(f"No flat coordinate with leading term {coordinate} on {space.name}")
            raise SolveError(f"No flat coordinate with leading term {coordinate}",
                             residual=f"reduced row {e.row}")
        if solution.nullspace:
            raise SolveError(f"Flat coordinate with leading term {coordinate} is not unique",
                             unknowns=[str(monomials[f]) for f in solution.free_variables])
        poly = lead
        for coeff, m in zip(solution.solution, monomials):
            poly = poly + m * coeff
        polys[flat_name(coordinate)] = poly
        logger.debug(f"{flat_name(coordinate)} = {poly}")
    return polys


@dataclass(frozen=True)
class FlatCoordinateSystem:
    """Flat coordinates of a space as polynomials in (a, b, c, W); dlog is flat on its own"""
    space: TriPolySpace
    polynomials: Dict[str, SparsePoly]
    method: str

    @property
    def names(self) -> List[str]:
        return flat_names(self.space)

    def chart(self, point: TriPolyPoint) -> "FlatChart":
        values = point.parameter_values()
        coordinates = self.space.coordinate_names
        flat_values: Dict[str, object] = {}
        jacobian = []
        for coordinate, name in zip(coordinates, self.names):
            if name == DLOG:
                flat_values[name] = point.dlog
                jacobian.append([Fraction(int(c == DLOG)) for c in coordinates])
                continue
            poly = self.polynomials[name]
            flat_values[name] = poly.evaluate(values)
            jacobian.append([directional(poly, c).evaluate(values) for c in coordinates])
        return FlatChart(point, self.names, flat_values, jacobian)

    def to_dict(self) -> Dict:
        return {
            "space": self.space.to_dict(),
            "method": self.method,
            "coordinates": {n: str(p.drop_unused()) for n, p in self.polynomials.items()},
        }


@dataclass(frozen=True)
class FlatChart:
    """
    Flat coordinate values at a point with the Jacobian d(flat)/d(a, b, c, dlog)

    jacobian[a][i]: derivative of flat coordinate a along coordinate i
    """
    point: TriPolyPoint
    names: List[str]
    values: Dict[str, object]
    jacobian: List[List[Fraction]]

    def inverse_jacobian(self) -> List[List[Fraction]]:
        return exact_inverse(self.jacobian)

    def to_flat_pairing(self, pairing: Sequence[Sequence]) -> List[List]:
        """g in the flat frame: J^{-T} g J^{-1}"""
        inv = self.inverse_jacobian()
        n = len(self.names)
        half = [[sum(pairing[i][k] * inv[k][b] for k in range(n)) for b in range(n)] for i in range(n)]
        return [[sum(inv[i][a] * half[i][b] for i in range(n)) for b in range(n)] for a in range(n)]

    def to_flat_vector(self, vector: Sequence) -> List:
        return [sum(row[i] * vector[i] for i in range(len(vector))) for row in self.jacobian]

    def to_dict(self) -> Dict:
        return {
            "point": self.point.to_dict(),
            "values": {n: format_rational(v) if isinstance(v, Fraction) else v for n, v in self.values.items()},
            "jacobian": matrix_to_json(self.jacobian),
        }


@lru_cache(maxsize=16)
def flat_coordinate_system(space: TriPolySpace, method: Optional[str] = None, seed: int = 0) -> FlatCoordinateSystem:
    """
    Args:
        space: tri-polynomial space
        method: "series" (A and D families) or "ansatz" (any family); default by family
        seed: seed of the ansatz sample points
    """
    method = method or ("ansatz" if space.family == "E" else "series")
    if method == "series":
        polys = series_flat_polynomials(space)
    elif method == "ansatz":
        polys = ansatz_flat_polynomials(space, seed)
    else:
        raise ValueError(f"Unsupported flat-coordinate method: {method}")
    logger.info(f"Flat coordinates of {space.name} via {method}")
    return FlatCoordinateSystem(space, polys, method)


def flat_coordinates(space: TriPolySpace, point: TriPolyPoint, method: Optional[str] = None) -> FlatChart:
    if point.space != space:
        raise ValueError(f"Unsupported point of {point.space.name} for {space.name}")
    return flat_coordinate_system(space, method).chart(point)


def pairing_deviation(flat_pairing: Sequence[Sequence], space: TriPolySpace) -> float:
    """max |g_flat - expected| entrywise"""
    expected = expected_pairing(space)
    return max(abs(float(flat_pairing[i][j]) - float(expected[i][j]))
               for i in range(len(expected)) for j in range(len(expected)))


def e6_closed_forms(space: TriPolySpace) -> Dict[str, SparsePoly]:
    if space.degrees != (2, 3, 3):
        raise ValueError(f"Unsupported space {space.name}: closed forms exist for M_2,3,3 only")
    params = space.parameter_variables()
    return {name: SparsePoly.from_expr(text, params) for name, text in E6_CLOSED_FORMS.items()}


def e6_gamma0_slice(space: TriPolySpace) -> SparsePoly:
    return SparsePoly.from_expr(E6_GAMMA0_SLICE, space.parameter_variables())
