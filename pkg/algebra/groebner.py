"""
Zero-dimensional quotient algebras via Groebner bases
Standard-monomial basis, normal forms and multiplication matrices
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence, Tuple

import sympy
from sympy.polys.orderings import monomial_key

from algebra.errors import PositiveDimensionalIdealError, ResourceCapError
from algebra.rational import bit_size, to_fraction, to_sympy
from algebra.sparse_poly import SparsePoly, Variable, as_variables, merge_variables

logger = logging.getLogger(__name__)

DEFAULT_ORDER = "grevlex"
DEFAULT_BIT_CAP = 10 ** 6

Monomial = Tuple[int, ...]


def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


@dataclass(frozen=True)
class QuotientAlgebra:
    """
    Finite-dimensional algebra Q[x_1..x_n]/I with its Groebner data

    mult_matrices[i] is the matrix of multiplication by the i-th generator
    in the standard-monomial basis; column j is the normal form of
    x_i * basis[j].
    """
    variables: Tuple[Variable, ...]
    ideal_generators: Tuple[SparsePoly, ...]
    groebner_basis: Tuple[SparsePoly, ...]
    monomial_basis: Tuple[Monomial, ...]
    mult_matrices: Tuple[sympy.ImmutableMatrix, ...]
    order: str = DEFAULT_ORDER
    _basis: sympy.GroebnerBasis = field(default=None, repr=False, compare=False)

    @property
    def dimension(self) -> int:
        return len(self.monomial_basis)

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def symbols(self) -> List[sympy.Symbol]:
        return [sympy.Symbol(n) for n in self.names]

    def matrix(self, name: str) -> sympy.ImmutableMatrix:
        return self.mult_matrices[self.names.index(name)]

    def basis_labels(self) -> List[str]:
        labels = []
        for exps in self.monomial_basis:
            parts = [n if e == 1 else f"{n}^{e}" for n, e in zip(self.names, exps) if e]
            labels.append("*".join(parts) or "1")
        return labels

    def unit_vector(self) -> sympy.ImmutableMatrix:
        vec = [0] * self.dimension
        vec[self.monomial_basis.index((0,) * len(self.variables))] = 1
        return sympy.ImmutableMatrix(vec)

    def normal_form(self, poly: SparsePoly) -> SparsePoly:
        """Remainder of poly on division by the Groebner basis"""
        poly = poly.with_variables(self.variables)
        if poly.is_zero():
            return poly
        _, remainder = self._basis.reduce(poly.to_sympy(self.symbols()).as_expr())
        remainder_poly = sympy.Poly(remainder, *self.symbols(), domain=sympy.QQ)
        return SparsePoly.from_sympy(remainder_poly, self.variables)

    def coordinates(self, poly: SparsePoly) -> List[Fraction]:
        """Normal form as a coordinate vector on the monomial basis"""
        nf = self.normal_form(poly)
        index = {m: i for i, m in enumerate(self.monomial_basis)}
        vec = [Fraction(0)] * self.dimension
        for exps, coeff in nf.terms.items():
            vec[index[exps]] = coeff
        return vec

    def contains(self, poly: SparsePoly) -> bool:
        return self.normal_form(poly).is_zero()

    def element_vector(self, poly: SparsePoly) -> sympy.ImmutableMatrix:
        """
        Class of poly computed by applying multiplication matrices to the unit

        Agrees with `coordinates` exactly; much cheaper for large inputs
        since no polynomial division is performed.
        """
        poly = poly.with_variables(self.variables)
        cache: Dict[Monomial, sympy.Matrix] = {(0,) * len(self.variables): self.unit_vector()}

        def vector(exps: Monomial) -> sympy.Matrix:
            if exps not in cache:
                i = next(k for k, e in enumerate(exps) if e)
                lower = list(exps)
                lower[i] -= 1
                cache[exps] = self.mult_matrices[i] * vector(tuple(lower))
            return cache[exps]

        total = sympy.zeros(self.dimension, 1)
        for exps, coeff in poly.terms.items():
            total += to_sympy(coeff) * vector(exps)
        return sympy.ImmutableMatrix(total)

    def multiplication_operator(self, poly: SparsePoly) -> sympy.ImmutableMatrix:
        """Matrix of multiplication by poly, as poly evaluated at the generator matrices"""
        poly = poly.with_variables(self.variables)
        result = sympy.zeros(self.dimension, self.dimension)
        powers: Dict[Tuple[int, int], sympy.Matrix] = {}
        for exps, coeff in poly.terms.items():
            term = sympy.eye(self.dimension)
            for i, e in enumerate(exps):
                if e:
                    key = (i, e)
                    if key not in powers:
                        powers[key] = self.mult_matrices[i] ** e
                    term = term * powers[key]
            result += to_sympy(coeff) * term
        return sympy.ImmutableMatrix(result)

    def structure_constants(self) -> List[List[List[Fraction]]]:
        """c[i][j][k]: coefficient of basis[k] in basis[i] * basis[j]"""
        names = self.names
        vectors = []
        for exps in self.monomial_basis:
            vectors.append(self.element_vector(SparsePoly.monomial(self.variables, dict(zip(names, exps)))))
        table = []
        for i, exps in enumerate(self.monomial_basis):
            op = self.multiplication_operator(SparsePoly.monomial(self.variables, dict(zip(names, exps))))
            row = []
            for j in range(self.dimension):
                product_vec = op * vectors[j]
                row.append([to_fraction(product_vec[k]) for k in range(self.dimension)])
            table.append(row)
        return table

    def matrices_commute(self) -> bool:
        for a in self.mult_matrices:
            for b in self.mult_matrices:
                if a * b != b * a:
                    return False
        return True


def _check_bit_cap(polys: Sequence[SparsePoly], bit_cap: int, where: str) -> None:
    for p in polys:
        for coeff in p.terms.values():
            if bit_size(coeff) > bit_cap:
                logger.error(f"{where} coefficient {coeff} exceeds {bit_cap} bits")
                raise ResourceCapError(f"{where} coefficient exceeds the {bit_cap}-bit cap", bit_cap=bit_cap)


def groebner_quotient(generators: Sequence[SparsePoly], order: str = DEFAULT_ORDER,
                      variables: Optional[Sequence] = None,
                      bit_cap: int = DEFAULT_BIT_CAP) -> QuotientAlgebra:
    """
    Compute the quotient algebra of a zero-dimensional ideal

    Args:
        generators: ideal generators over rational coefficients
        order: monomial order tag understood by sympy (default grevlex)
        variables: ring generators in order (x > y > z); defaults to the
            union of the generators' variable lists
        bit_cap: maximal bit size of any input or Groebner basis coefficient

    Returns:
        QuotientAlgebra with basis, standard monomials and multiplication matrices

    Raises:
        ResourceCapError: an input coefficient exceeds bit_cap (checked before the
            Buchberger run) or a basis coefficient does (checked after it; the sympy
            run itself is not interrupted)
    """
    if variables is None:
        merged: Tuple[Variable, ...] = ()
        for g in generators:
            merged = merge_variables(merged, g.variables)
        variables = merged
    variables = as_variables(variables)
    _check_bit_cap(generators, bit_cap, "input")
    symbols = [sympy.Symbol(v.name) for v in variables]
    polys = [g.with_variables(variables).to_sympy(symbols) for g in generators]

    logger.debug(f"Computing {order} Groebner basis of {len(polys)} generators in {len(symbols)} variables")
    basis = sympy.groebner([p.as_expr() for p in polys], *symbols, order=order, domain=sympy.QQ)

    gb_polys = [SparsePoly.from_sympy(sympy.Poly(g, *symbols, domain=sympy.QQ), variables) for g in basis.exprs]
    _check_bit_cap(gb_polys, bit_cap, "Groebner basis")

    key = monomial_key(order)
    leading = []
    for g in basis.exprs:
        monoms = sympy.Poly(g, *symbols, domain=sympy.QQ).monoms()
        leading.append(max(monoms, key=key))

    n = len(symbols)
    bounds = []
    for i, v in enumerate(variables):
        pure = [m[i] for m in leading if all(e == 0 for j, e in enumerate(m) if j != i) and m[i] > 0]
        if not pure and not any(not any(m) for m in leading):
            logger.error(f"Ideal is positive-dimensional in direction {v.name}")
            raise PositiveDimensionalIdealError(v.name)
        bounds.append(min(pure) if pure else 0)

    standard = []
    if not any(not any(m) for m in leading):
        for exps in product(*(range(b) for b in bounds)):
            if not any(_divides(m, exps) for m in leading):
                standard.append(tuple(exps))
    standard.sort(key=key)
    index = {m: i for i, m in enumerate(standard)}

    def nf_vector(expr) -> List:
        _, remainder = basis.reduce(expr)
        vec = [0] * len(standard)
        for monom, coeff in sympy.Poly(remainder, *symbols, domain=sympy.QQ).terms():
            if coeff:
                vec[index[monom]] = coeff
        return vec

    matrices = []
    for i, x in enumerate(symbols):
        columns = []
        for exps in standard:
            monomial = x * sympy.Mul(*(s ** e for s, e in zip(symbols, exps)))
            columns.append(nf_vector(monomial))
        if columns:
            matrix = sympy.ImmutableMatrix(len(standard), len(standard), lambda r, c: columns[c][r])
        else:
            matrix = sympy.ImmutableMatrix(0, 0, [])
        matrices.append(matrix)

    algebra = QuotientAlgebra(
        variables=variables,
        ideal_generators=tuple(generators),
        groebner_basis=tuple(gb_polys),
        monomial_basis=tuple(standard),
        mult_matrices=tuple(matrices),
        order=order,
        _basis=basis,
    )
    logger.info(f"Quotient algebra of dimension {algebra.dimension} over {[v.name for v in variables]}")
    return algebra
