"""
Rational SFT Hamiltonians of Seifert fibrations by Fourier zero-mode extraction
"""

import logging
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from algebra.rational import to_fraction
from algebra.sparse_poly import SparsePoly, Variable, poly_sum
from orbigw.fixtures import REFERENCE_POTENTIALS, reference_polynomial
from orbigw.orbicurve import DIVISOR, QUANTUM, UNIT, GradingData, grading_and_euler
from orbigw.potential import assemble_potential
from orbigw.wdvv import flat_derivative
from seifert.bundle import SeifertBundle
from seifert.fourier import FourierSeriesPoly

logger = logging.getLogger(__name__)

DEFAULT_TRUNCATION = 5
QUADRATURE_POINTS = 2048
QUADRATURE_TOL = 1e-8

_MODE = re.compile(r"^([pq])\[(\d+),(.+)\]$")


def t_name(label: str) -> str:
    return f"t[{label}]"


def mode_name(kind: str, k: int, label: str) -> str:
    return f"{kind}[{k},{label}]"


def mode_index(name: str) -> Optional[int]:
    """Fourier index k of a p/q variable, None for the t variables"""
    match = _MODE.match(name)
    return int(match.group(2)) if match else None


def base_polynomial(bundle: SeifertBundle) -> SparsePoly:
    """Genus-0 potential of the base over (flat variables, Q)"""
    orders = tuple(sorted(bundle.base.orders))
    grading = grading_and_euler(bundle.base)
    variables = grading.variables.all
    if not orders:
        # P1: t0^2 s / 2 + e^s z
        return (SparsePoly.monomial(variables, {UNIT: 2, DIVISOR: 1}, Fraction(1, 2))
                + SparsePoly.variable(variables, QUANTUM))
    if orders != bundle.base.orders:
        raise ValueError(f"Unsupported base {bundle.base.name}: orbifold orders must be ascending")
    if orders in REFERENCE_POTENTIALS:
        return reference_polynomial(orders)
    return assemble_potential(bundle.base, exact=True).to_poly()


def slice_polynomial(potential: SparsePoly, combination: Optional[Mapping[str, object]] = None) -> SparsePoly:
    """
    f^j = sum_n w_n d f / d t_n for the fiber class j = sum_n w_n Delta_n

    Defaults to the d/ds slice.
    """
    combination = combination or {DIVISOR: 1}
    pieces = [flat_derivative(potential, name) * to_fraction(weight) for name, weight in combination.items()]
    return poly_sum(pieces, potential.variables)


@dataclass(frozen=True)
class ModeLayout:
    """Hamiltonian variables t[n], p[k,n], q[k,n] with degrees and Fourier exponents"""
    bundle: SeifertBundle
    truncation: int
    labels: Tuple[str, ...]
    variables: Tuple[Variable, ...]
    exponents: Dict[Tuple[str, int], Fraction]

    @property
    def names(self) -> List[str]:
        return [v.name for v in self.variables]


def mode_exponent(bundle: SeifertBundle, label: str, k: int) -> Fraction:
    """k for untwisted sectors, k * l/alpha_i for the twisted sector (i, l)"""
    shift = bundle.basis().shift(label)
    return Fraction(k) if shift == 0 else k * shift


def mode_layout(bundle: SeifertBundle, truncation: int = DEFAULT_TRUNCATION,
                grading: Optional[GradingData] = None) -> ModeLayout:
    """
    Variables of the Hamiltonian

    e^{-i c x} stands for z and so carries the degree of Q; with deg e^{i nu x} = 2 chi nu / c,
    deg q[k,n] = deg t_n + 2 chi nu/c and deg p[k,n] = deg t_n - 2 chi nu/c.
    """
    if truncation < 1:
        raise ValueError(f"Unsupported truncation K = {truncation}: need K >= 1")
    grading = grading or grading_and_euler(bundle.base)
    chi = bundle.base.euler_characteristic
    labels = tuple(v.name for v in grading.variables.flat)
    variables = [Variable(t_name(v.name), v.degree) for v in grading.variables.flat]
    exponents = {}
    for v in grading.variables.flat:
        for k in range(1, truncation + 1):
            nu = mode_exponent(bundle, v.name, k)
            exponents[(v.name, k)] = nu
            weight = 2 * chi * nu / bundle.c if bundle.c else Fraction(0)
            variables.append(Variable(mode_name("p", k, v.name), v.degree - weight))
            variables.append(Variable(mode_name("q", k, v.name), v.degree + weight))
    return ModeLayout(bundle, truncation, labels, tuple(variables), exponents)


def _substituted_series(layout: ModeLayout, label: str, sign: int) -> FourierSeriesPoly:
    """t_n + sum_k (q_k e^{-i k iota x} + p_k e^{i k iota x})"""
    period = layout.bundle.period
    series = FourierSeriesPoly.constant(period, SparsePoly.variable(layout.variables, t_name(label)))
    for k in range(1, layout.truncation + 1):
        nu = layout.exponents[(label, k)] * sign
        series = series + FourierSeriesPoly.mode(period, -nu, SparsePoly.variable(layout.variables,
                                                                                  mode_name("q", k, label)))
        series = series + FourierSeriesPoly.mode(period, nu, SparsePoly.variable(layout.variables,
                                                                                 mode_name("p", k, label)))
    return series


def _check_slice(f: SparsePoly, layout: ModeLayout):
    allowed = set(layout.labels) | {QUANTUM}
    unknown = [n for n in f.free_variables() if n not in allowed]
    if unknown:
        raise ValueError(f"Unsupported slice: variables {unknown} are not flat coordinates of "
                         f"{layout.bundle.base.name} or Q")


class _Expander:
    """Per-monomial Fourier expansion with cached powers of the substituted series"""

    def __init__(self, f: SparsePoly, layout: ModeLayout, mode_sign: int = 1, fiber_sign: int = 1):
        self.f = f
        self.layout = layout
        self.fiber_sign = fiber_sign
        self.series = {label: _substituted_series(layout, label, mode_sign)
                       for label in layout.labels if label in f.names}
        self._powers: Dict[Tuple[str, int], FourierSeriesPoly] = {}

    def power(self, label: str, e: int) -> FourierSeriesPoly:
        key = (label, e)
        if key not in self._powers:
            self._powers[key] = self.series[label] ** e
        return self._powers[key]

    def term(self, exps: Tuple[int, ...], coeff: Fraction) -> FourierSeriesPoly:
        layout = self.layout
        period = layout.bundle.period
        d = 0
        result = FourierSeriesPoly.constant(period, SparsePoly.constant(layout.variables, coeff))
        for name, e in zip(self.f.names, exps):
            if not e:
                continue
            if name == QUANTUM:
                d = e
            else:
                result = result * self.power(name, e)
        if d:
            # z^d -> e^{-i c d x}
            shift = FourierSeriesPoly.mode(period, -self.fiber_sign * layout.bundle.c * d,
                                           SparsePoly.constant(layout.variables, 1))
            result = result * shift
        return result


def fourier_expansion(bundle: SeifertBundle, f: SparsePoly, truncation: int = DEFAULT_TRUNCATION,
                      mode_sign: int = 1, fiber_sign: int = 1) -> FourierSeriesPoly:
    """The substituted slice as a full Fourier series; a sign of -1 negates the mode or the fiber exponents"""
    layout = mode_layout(bundle, truncation)
    _check_slice(f, layout)
    expander = _Expander(f, layout, mode_sign, fiber_sign)
    total = FourierSeriesPoly(bundle.period, layout.variables)
    for exps, coeff in f.terms.items():
        total = total + expander.term(exps, coeff)
    return total


@dataclass(frozen=True)
class HamiltonianResult:
    bundle: SeifertBundle
    truncation: int
    slice: SparsePoly
    hamiltonian: SparsePoly
    boundary_terms: int

    def to_json(self) -> Dict:
        return {
            "bundle": self.bundle.to_dict(),
            "K": self.truncation,
            "slice": str(self.slice),
            "hamiltonian": self.hamiltonian.to_json(),
            "variables": list(self.hamiltonian.names),
            "boundary_terms": self.boundary_terms,
        }


def zero_mode_polynomial(bundle: SeifertBundle, f: SparsePoly, truncation: int = DEFAULT_TRUNCATION,
                         mode_sign: int = 1, fiber_sign: int = 1, max_workers: int = 4) -> SparsePoly:
    layout = mode_layout(bundle, truncation)
    _check_slice(f, layout)
    expander = _Expander(f, layout, mode_sign, fiber_sign)
    # fill the shared power cache before fanning out
    for exps in f.terms:
        for name, e in zip(f.names, exps):
            if e and name != QUANTUM:
                expander.power(name, e)
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        modes = list(executor.map(lambda item: expander.term(*item).zero_mode(), f.terms.items()))
    return poly_sum(modes, layout.variables)


def sft_hamiltonian(bundle: SeifertBundle, f: Optional[SparsePoly] = None,
                    truncation: int = DEFAULT_TRUNCATION, max_workers: int = 4) -> HamiltonianResult:
    """
    Average of f(t_n + u_n(x); e^{-i c x}) over [0, 2 pi N]

    Args:
        bundle: Seifert bundle over a P1-orbifold
        f: slice of the base potential over (flat variables, Q); defaults to the d/ds slice
        truncation: largest Fourier index K in every u_n
        max_workers: threads over the monomials of f

    Returns:
        HamiltonianResult; boundary_terms counts monomials that involve a mode of index K
    """
    f = f if f is not None else slice_polynomial(base_polynomial(bundle))
    hamiltonian = zero_mode_polynomial(bundle, f, truncation, max_workers=max_workers)
    boundary = 0
    for exps in hamiltonian.terms:
        if any(e and mode_index(name) == truncation for name, e in zip(hamiltonian.names, exps)):
            boundary += 1
    logger.info(f"Seifert Hamiltonian over {bundle.base.name} (c = {bundle.c}, K = {truncation}): "
                f"{len(hamiltonian.terms)} terms, {boundary} at the truncation boundary")
    return HamiltonianResult(bundle, truncation, f, hamiltonian, boundary)


def swap_pq(poly: SparsePoly) -> SparsePoly:
    """Exchange p[k,n] and q[k,n]"""
    def partner(name: str) -> str:
        match = _MODE.match(name)
        if not match:
            return name
        kind = "q" if match.group(1) == "p" else "p"
        return mode_name(kind, int(match.group(2)), match.group(3))

    order = [poly.index(partner(name)) for name in poly.names]
    terms = {tuple(exps[i] for i in order): coeff for exps, coeff in poly.terms.items()}
    return SparsePoly(poly.variables, terms)


def conjugation_symmetric(bundle: SeifertBundle, f: SparsePoly, truncation: int = DEFAULT_TRUNCATION) -> bool:
    """
    Negating every Fourier exponent (x -> -x) keeps the zero mode, and negating only the
    mode exponents is undone by exchanging p and q
    """
    forward = zero_mode_polynomial(bundle, f, truncation)
    reversed_fiber = zero_mode_polynomial(bundle, f, truncation, mode_sign=-1, fiber_sign=-1)
    flipped_modes = zero_mode_polynomial(bundle, f, truncation, mode_sign=-1)
    return reversed_fiber == forward and swap_pq(flipped_modes) == forward


def truncation_monotone(bundle: SeifertBundle, f: SparsePoly, truncations: Sequence[int] = (3, 4, 5, 6)) -> bool:
    """Raising K keeps every coefficient and only adds terms with a mode of the new index"""
    previous, previous_k = None, None
    for k in sorted(truncations):
        current = zero_mode_polynomial(bundle, f, k)
        if previous is not None:
            lifted = previous.with_variables(current.variables)
            for exps, coeff in lifted.terms.items():
                if current.terms.get(exps) != coeff:
                    logger.warning(f"Coefficient of {exps} changed from K = {previous_k} to K = {k}")
                    return False
            for exps in current.terms:
                if exps in lifted.terms:
                    continue
                indices = [mode_index(n) for n, e in zip(current.names, exps) if e]
                if not any(i is not None and i > previous_k for i in indices):
                    return False
        previous, previous_k = current, k
    return True


def _substituted_grid(layout: ModeLayout, label: str, values: Mapping[str, complex], xs: np.ndarray) -> np.ndarray:
    grid = np.full(xs.shape, complex(values[t_name(label)]))
    for k in range(1, layout.truncation + 1):
        nu = float(layout.exponents[(label, k)])
        grid = grid + complex(values[mode_name("q", k, label)]) * np.exp(-1j * nu * xs)
        grid = grid + complex(values[mode_name("p", k, label)]) * np.exp(1j * nu * xs)
    return grid


def quadrature_average(bundle: SeifertBundle, f: SparsePoly, values: Mapping[str, complex],
                       truncation: int = DEFAULT_TRUNCATION, points: int = QUADRATURE_POINTS) -> complex:
    """Trapezoidal average of the substituted slice over [0, 2 pi N]"""
    layout = mode_layout(bundle, truncation)
    _check_slice(f, layout)
    xs = np.linspace(0.0, 2 * np.pi * bundle.period, points, endpoint=False)
    grids = {label: _substituted_grid(layout, label, values, xs) for label in layout.labels if label in f.names}
    if QUANTUM in f.names:
        grids[QUANTUM] = np.exp(-1j * float(bundle.c) * xs)
    total = np.zeros(xs.shape, dtype=complex)
    for exps, coeff in f.terms.items():
        term = np.full(xs.shape, complex(float(coeff)))
        for name, e in zip(f.names, exps):
            if e:
                term = term * grids[name] ** e
        total = total + term
    return complex(total.mean())


@dataclass(frozen=True)
class QuadratureReport:
    samples: int
    max_relative_error: float

    def passed(self, tol: float = QUADRATURE_TOL) -> bool:
        return self.max_relative_error < tol

    def to_json(self) -> Dict:
        return {"samples": self.samples, "max_relative_error": self.max_relative_error}


def quadrature_check(bundle: SeifertBundle, f: Optional[SparsePoly] = None, truncation: int = DEFAULT_TRUNCATION,
                     samples: int = 10, seed: int = 0) -> QuadratureReport:
    """Zero mode against the quadrature oracle at random real assignments of t, p, q"""
    f = f if f is not None else slice_polynomial(base_polynomial(bundle))
    hamiltonian = zero_mode_polynomial(bundle, f, truncation)
    layout = mode_layout(bundle, truncation)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        values = {name: float(rng.uniform(-1.0, 1.0)) for name in layout.names}
        exact = complex(float(hamiltonian.evaluate(values)) if hamiltonian.terms else 0.0)
        oracle = quadrature_average(bundle, f, values, truncation)
        error = abs(exact - oracle) / max(abs(oracle), 1.0)
        worst = max(worst, error)
    logger.info(f"Quadrature check over {bundle.base.name}: max relative error {worst:.3e}")
    return QuadratureReport(samples, worst)
