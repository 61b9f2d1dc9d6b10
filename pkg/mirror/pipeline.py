"""
Mirror check between QH*_orb(P1_{p,q,r}) and the tri-polynomial Frobenius manifold M_{p,q,r}
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.linear import DEFAULT_EIGEN_TOL, eigenvalues_numeric, minimal_gap, to_sympy_matrix
from algebra.rational import format_rational, to_fraction
from algebra.sparse_poly import SparsePoly
from mirror.compare import (compare_algebras, matrix_mismatch, reorder, structure_mismatch,
                            vector_mismatch)
from mirror.presentation import mirror_point, presentation_relations, quantum_presentation
from orbigw.fixtures import REFERENCE_POTENTIALS, reference_potential
from orbigw.orbicurve import DIVISOR, UNIT, Orbicurve, twisted_name
from orbigw.potential import GWPotential, assemble_potential
from orbigw.quantum import QuantumStructure, corner_entries, quantum_structure
from tripoly.flat import FLAT_PREFIX, FlatChart, flat_coordinates
from tripoly.jacobian import frobenius_point_data, jacobian_algebra
from tripoly.space import DLOG, X, Y, Z, TriPolyPoint, TriPolySpace
from tripoly.spectrum import (CRITICAL_VALUE_TOL, DISTINCT_GAP, TRACE_TOL, critical_values, matched_distance,
                              u_operator)

logger = logging.getLogger(__name__)

SPECTRUM_TOL = 1e-7
DEFAULT_D_SAMPLES = ((1, 2), (Fraction(1, 3), -2), (0, 0))
PERTURBATION_RANGE = (1e-4, 1e-2)


@dataclass
class StageResult:
    name: str
    passed: bool
    detail: Dict = field(default_factory=dict)

    def to_json(self) -> Dict:
        return {"passed": self.passed, **self.detail}


@dataclass
class MirrorReport:
    degrees: Tuple[int, int, int]
    stages: Dict[str, StageResult] = field(default_factory=dict)
    samples: List[Dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(stage.passed for stage in self.stages.values())

    def failed_stages(self) -> List[str]:
        return [name for name, stage in self.stages.items() if not stage.passed]

    def to_json(self) -> Dict:
        return {
            "degrees": list(self.degrees),
            "passed": self.passed,
            "stages": {name: stage.to_json() for name, stage in self.stages.items()},
            "samples": self.samples,
        }


def orbifold_orders(space: TriPolySpace) -> Tuple[int, ...]:
    return tuple(d for d in space.degrees if d >= 2)


def basis_identification(space: TriPolySpace) -> Dict[str, str]:
    """A-side basis name -> flat coordinate name: t0 -> gamma0, s -> dlog, t(i)_k -> alpha/beta/gamma k"""
    if space.p > space.q:
        raise ValueError(f"Unsupported degree order {space.degrees}: expected p <= q")
    mapping = {UNIT: "gamma0", DIVISOR: DLOG}
    point = 0
    for degree, prefix in zip(space.degrees, ("a", "b", "c")):
        if degree < 2:
            continue
        point += 1
        for k in range(1, degree):
            mapping[twisted_name(point, k)] = f"{FLAT_PREFIX[prefix]}{k}"
    return mapping


def gw_side_potential(space: TriPolySpace, cap_mode: str = "fixture", max_workers: int = 4) -> GWPotential:
    """Reference potential when one is tabulated, the exact assembly otherwise"""
    orders = orbifold_orders(space)
    if orders in REFERENCE_POTENTIALS:
        return reference_potential(orders)
    return assemble_potential(Orbicurve(0, orders), exact=True, cap_mode=cap_mode, max_workers=max_workers)


@dataclass(frozen=True)
class BSideFlatData:
    """Product, pairing, Euler vector and U of M_{p,q,r} at a point, all in the flat frame"""
    names: List[str]
    c_upper: List[List[List[Fraction]]]
    pairing: List[List[Fraction]]
    euler: List[Fraction]
    U: List[List[Fraction]]


def b_side_flat_data(point: TriPolyPoint, chart: Optional[FlatChart] = None) -> BSideFlatData:
    chart = chart or flat_coordinates(point.space, point)
    data = frobenius_point_data(point, method="trace")
    j = to_sympy_matrix(chart.jacobian)
    j_inv = j.inv()
    n = len(data.names)
    constants = data.structure_constants()
    conjugated = []
    for i in range(n):
        m_i = to_sympy_matrix([[constants[i][col][row] for col in range(n)] for row in range(n)])
        conjugated.append(j * m_i * j_inv)
    c_upper = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for a in range(n):
        total = sum((conjugated[i] * j_inv[i, a] for i in range(n)), to_sympy_matrix([[0] * n] * n))
        for b in range(n):
            for m in range(n):
                c_upper[a][b][m] = to_fraction(total[m, b])

    weights = point.space.weights()
    values = point.parameter_values()
    euler_orig = [point.space.chi if name == DLOG else weights[name] * values[name] for name in data.names]
    euler = chart.to_flat_vector(euler_orig)
    return BSideFlatData(chart.names, c_upper, chart.to_flat_pairing(data.pairing), euler,
                         u_operator(point, chart, data.algebra))


def a_side_point(chart: FlatChart, mapping: Dict[str, str]) -> Dict[str, Fraction]:
    """Flat values carried to the A-side coordinates; s stays 0 and Q takes the value of W"""
    return {name: chart.values[flat] for name, flat in mapping.items() if name != DIVISOR}


def _sample_points(space: TriPolySpace, samples, seed: int, count: int) -> List[TriPolyPoint]:
    if space.family == "D":
        return [mirror_point(space.r, a, b, 1).point for a, b in (samples or DEFAULT_D_SAMPLES)]
    if samples:
        return [TriPolyPoint.from_mapping(space, s) for s in samples]
    rng = random.Random(seed)
    points = []
    for _ in range(count):
        drawn = space.random_point(rng)
        points.append(TriPolyPoint(space, drawn.a, drawn.b, drawn.c, 1))
    return points


def compare_at_point(point: TriPolyPoint, potential: GWPotential, seed: int = 0,
                     eigen_tol: float = DEFAULT_EIGEN_TOL) -> Dict:
    """Flat-frame comparison of one B-side point with the A-side at the identified point"""
    space = point.space
    mapping = basis_identification(space)
    chart = flat_coordinates(space, point)
    b_side = b_side_flat_data(point, chart)
    a_values = a_side_point(chart, mapping)
    structure = quantum_structure(potential, a_values, q=point.w)
    order = reorder(structure.names, b_side.names, mapping)

    product_gap, worst = structure_mismatch(structure.c_upper, b_side.c_upper, order)
    pairing_gap = matrix_mismatch(potential.grading.pairing_matrix(), b_side.pairing, order)
    euler_a = potential.grading.euler_vector(a_values)
    euler_gap = vector_mismatch([euler_a[n] for n in structure.names], b_side.euler, order)
    u_gap = matrix_mismatch(structure.U, b_side.U, order)
    spectrum_a = eigenvalues_numeric(structure.U, eigen_tol)
    spectrum_b = eigenvalues_numeric(b_side.U, eigen_tol)
    spectrum_gap = matched_distance(spectrum_a, spectrum_b)
    values = critical_values(point, seed=seed) if minimal_gap(spectrum_b) > DISTINCT_GAP else None
    critical_gap = trace_gap = None
    if values is not None:
        critical_gap = matched_distance(spectrum_b, values)
        trace = sum((b_side.U[i][i] for i in range(len(b_side.U))), Fraction(0))
        trace_gap = abs(complex(float(trace)) - sum(values))
    return {
        "point": point.to_dict(),
        "a_point": {n: format_rational(v) for n, v in a_values.items()},
        "product_mismatch": product_gap,
        "worst_product": [structure.names[i] for i in worst] if worst else None,
        "pairing_mismatch": pairing_gap,
        "euler_mismatch": euler_gap,
        "u_mismatch": u_gap,
        "spectrum_mismatch": spectrum_gap,
        "critical_value_mismatch": critical_gap,
        "trace_mismatch": trace_gap,
        "gap": minimal_gap(spectrum_a),
        "eigenvalues": [[round(v.real, 12), round(v.imag, 12)] for v in spectrum_a],
    }


def relation_in_ring(structure: QuantumStructure, relation: SparsePoly, generators: Dict[str, List]) -> List:
    """Evaluate a polynomial in x, y, z inside the quantum ring"""
    n = len(structure.names)
    unit = [Fraction(int(name == UNIT)) for name in structure.names]
    total = [Fraction(0)] * n
    for exps, coeff in relation.terms.items():
        vector = unit
        for name, e in zip(relation.names, exps):
            for _ in range(e):
                vector = structure.product(vector, generators[name])
        total = [t + coeff * v for t, v in zip(total, vector)]
    return total


def lemma_product_check(potential: GWPotential, r: int, a, b, q=1) -> Dict[str, bool]:
    """Presentation relations evaluated in the quantum ring of the potential at t = a t1_1 + b t2_1"""
    a, b, q = to_fraction(a), to_fraction(b), to_fraction(q)
    structure = quantum_structure(potential, {twisted_name(1, 1): a, twisted_name(2, 1): b}, q=q)
    basis = lambda name: [Fraction(int(n == name)) for n in structure.names]
    generators = {X: basis(twisted_name(1, 1)), Y: basis(twisted_name(2, 1)), Z: basis(twisted_name(3, 1))}
    labels = ("xy", "xz", "yz")
    results = {}
    for label, relation in zip(labels, presentation_relations(r, a, b, q)):
        results[label] = all(v == 0 for v in relation_in_ring(structure, relation, generators))
    return results


def perturbation_slope(u0: Sequence[Sequence], v: Sequence[Sequence], epsilons: Optional[Sequence[float]] = None
                       ) -> Dict:
    """Minimal eigenvalue gap of U0 + eps V and its log-log slope in eps"""
    epsilons = list(epsilons or np.geomspace(*PERTURBATION_RANGE, num=5))
    base = np.array([[float(x) for x in row] for row in u0])
    step = np.array([[float(x) for x in row] for row in v])
    gaps = [minimal_gap(list(np.linalg.eigvals(base + eps * step))) for eps in epsilons]
    slope = None
    if all(g > 0 for g in gaps):
        slope = float(np.polyfit(np.log(epsilons), np.log(gaps), 1)[0])
    return {"epsilons": [float(e) for e in epsilons], "gaps": [float(g) for g in gaps], "slope": slope}


def d_family_fixtures(potential: GWPotential, r: int, a, b, q=1) -> Dict:
    """U0 corners, the diagonal of V = U(a, b) - U0 and the perturbation slope"""
    a, b = to_fraction(a), to_fraction(b)
    u0 = quantum_structure(potential, {}, q=q)
    moved = quantum_structure(potential, {twisted_name(1, 1): a, twisted_name(2, 1): b}, q=q)
    n = len(u0.names)
    v = [[moved.U[i][j] - u0.U[i][j] for j in range(n)] for i in range(n)]
    x, y = u0.index(twisted_name(1, 1)), u0.index(twisted_name(2, 1))
    corners = corner_entries(u0)
    pattern = [[int(v[i][j] != 0) for j in range(n)] for i in range(n)]
    return {
        "corners": {k: format_rational(val) for k, val in corners.items()},
        "corners_ok": corners["t0_s"] == 4 * r and corners["s_t0"] == Fraction(1, r),
        "v_diagonal_ok": v[x][x] == -a * a / 4 and v[y][y] == -b * b / 4,
        "v_pattern": pattern,
        "perturbation": perturbation_slope(u0.U, v),
    }


def mirror_check_full(space: TriPolySpace, samples=None, seed: int = 0, count: int = 3,
                      potential: Optional[GWPotential] = None, cap_mode: str = "fixture",
                      max_workers: int = 4, eigen_tol: float = DEFAULT_EIGEN_TOL) -> MirrorReport:
    """
    Stage-by-stage comparison of the two Frobenius manifolds

    Stages: algebra (presentation vs Jacobian algebra for (2,2,r), structure constants in
    flat frames for every family), pairing, euler, spectrum, and for (2,2,r) the U0/V fixtures.

    Args:
        space: tri-polynomial space M_{p,q,r}
        samples: (a, b) pairs for (2,2,r); coordinate mappings otherwise
        seed: seed for random sample points
        count: number of random sample points outside the D family
        potential: A-side genus-0 potential; tabulated or assembled by default
    """
    report = MirrorReport(space.degrees)
    potential = potential or gw_side_potential(space, cap_mode, max_workers)
    points = _sample_points(space, samples, seed, count)
    logger.info(f"Mirror check of {space.name} at {len(points)} points")

    rows = [compare_at_point(point, potential, seed, eigen_tol) for point in points]
    report.samples = rows

    algebra_detail: Dict = {"product_mismatch": max(row["product_mismatch"] for row in rows)}
    algebra_ok = algebra_detail["product_mismatch"] == 0
    if space.family == "D":
        comparisons = []
        lemma = []
        for point in points:
            a, b = point.a[0], point.b[0]
            mirror = mirror_point(space.r, a, b, point.w)
            presentation = quantum_presentation(space.r, a, b, point.w)
            comparison = compare_algebras(presentation.algebra, jacobian_algebra(mirror.point),
                                          mirror.generator_map())
            comparisons.append(comparison.to_json())
            lemma.append(lemma_product_check(potential, space.r, a, b, point.w))
        algebra_detail["presentation"] = comparisons
        algebra_detail["lemma_products"] = lemma
        algebra_ok = algebra_ok and all(c["equal"] for c in comparisons) and all(
            all(v.values()) for v in lemma)
    report.stages["algebra"] = StageResult("algebra", algebra_ok, algebra_detail)

    pairing = max(row["pairing_mismatch"] for row in rows)
    report.stages["pairing"] = StageResult("pairing", pairing == 0, {"mismatch": pairing})
    euler = max(row["euler_mismatch"] for row in rows)
    report.stages["euler"] = StageResult("euler", euler == 0, {"mismatch": euler})

    spectrum = max(row["spectrum_mismatch"] for row in rows)
    gaps = [row["gap"] for row in rows]
    distinct = [g > DISTINCT_GAP for g in gaps]
    critical = [row["critical_value_mismatch"] for row in rows if row["critical_value_mismatch"] is not None]
    traces = [row["trace_mismatch"] for row in rows if row["trace_mismatch"] is not None]
    spectrum_ok = (spectrum < SPECTRUM_TOL and bool(critical)
                   and max(critical) <= CRITICAL_VALUE_TOL and max(traces) <= TRACE_TOL)
    if space.family == "D":
        # the first D sample is the generic one
        spectrum_ok = spectrum_ok and distinct[0]
    report.stages["spectrum"] = StageResult("spectrum", spectrum_ok, {
        "mismatch": spectrum,
        "u_mismatch": max(row["u_mismatch"] for row in rows),
        "critical_value_mismatch": max(critical, default=None),
        "trace_mismatch": max(traces, default=None),
        "gaps": gaps,
        "distinct": distinct,
    })

    if space.family == "D":
        point = points[0]
        fixtures = d_family_fixtures(potential, space.r, point.a[0], point.b[0], point.w)
        report.stages["fixtures"] = StageResult("fixtures", fixtures["corners_ok"] and fixtures["v_diagonal_ok"],
                                                fixtures)
    logger.info(f"Mirror check of {space.name}: failed stages {report.failed_stages()}")
    return report
