"""
Sparse multivariate polynomials over the rationals
Terms are stored as a map from exponent tuples to Fraction coefficients,
over an ordered list of graded variables
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from operator import add
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import sympy

from algebra.errors import UnknownVariableError
from algebra.rational import format_rational, to_fraction, to_sympy

logger = logging.getLogger(__name__)

Exponents = Tuple[int, ...]


@dataclass(frozen=True)
class Variable:
    """A named indeterminate with its rational grading degree"""
    name: str
    degree: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "degree", to_fraction(self.degree))


def as_variables(variables: Iterable[Union[Variable, str]]) -> Tuple[Variable, ...]:
    result = tuple(v if isinstance(v, Variable) else Variable(v) for v in variables)
    names = [v.name for v in result]
    if len(set(names)) != len(names):
        raise ValueError(f"Duplicate variable names in {names}")
    return result


def merge_variables(first: Sequence[Variable], second: Sequence[Variable]) -> Tuple[Variable, ...]:
    """Union of two variable lists, keeping the order of `first` then new names of `second`"""
    known = {v.name: v for v in first}
    merged = list(first)
    for v in second:
        if v.name in known:
            if known[v.name].degree != v.degree:
                raise ValueError(f"Variable {v.name} carries conflicting degrees "
                                 f"{known[v.name].degree} and {v.degree}")
            continue
        merged.append(v)
        known[v.name] = v
    return tuple(merged)


class SparsePoly:
    """
    Immutable sparse polynomial with Fraction coefficients

    No zero coefficient is ever stored; every exponent tuple has the length of
    the variable list. Arithmetic between polynomials over different variable
    lists works over the union of the lists.
    """

    __slots__ = ("variables", "terms", "_index", "_hash")

    def __init__(self, variables: Iterable[Union[Variable, str]], terms: Optional[Mapping[Exponents, object]] = None):
        self.variables = as_variables(variables)
        self._index = {v.name: i for i, v in enumerate(self.variables)}
        n = len(self.variables)
        cleaned: Dict[Exponents, Fraction] = {}
        for exps, coeff in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n:
                raise ValueError(f"Exponent vector {exps} does not match {n} variables")
            if any(e < 0 for e in exps):
                raise ValueError(f"Negative exponent in {exps}")
            c = to_fraction(coeff)
            if c:
                cleaned[exps] = cleaned.get(exps, Fraction(0)) + c
                if not cleaned[exps]:
                    del cleaned[exps]
        self.terms = cleaned
        self._hash = None

    @classmethod
    def _raw(cls, variables: Tuple[Variable, ...], terms: Dict[Exponents, Fraction]) -> "SparsePoly":
        # trusted constructor: terms already clean
        poly = cls.__new__(cls)
        poly.variables = variables
        poly._index = {v.name: i for i, v in enumerate(variables)}
        poly.terms = terms
        poly._hash = None
        return poly

    # Constructors

    @classmethod
    def zero(cls, variables) -> "SparsePoly":
        return cls(variables)

    @classmethod
    def constant(cls, variables, value) -> "SparsePoly":
        variables = as_variables(variables)
        return cls(variables, {(0,) * len(variables): value})

    @classmethod
    def variable(cls, variables, name: str) -> "SparsePoly":
        variables = as_variables(variables)
        names = [v.name for v in variables]
        if name not in names:
            raise UnknownVariableError(name)
        exps = tuple(1 if n == name else 0 for n in names)
        return cls(variables, {exps: 1})

    @classmethod
    def monomial(cls, variables, exps: Mapping[str, int], coeff=1) -> "SparsePoly":
        variables = as_variables(variables)
        names = [v.name for v in variables]
        for name in exps:
            if name not in names:
                raise UnknownVariableError(name)
        return cls(variables, {tuple(int(exps.get(n, 0)) for n in names): coeff})

    @classmethod
    def from_expr(cls, text: Union[str, sympy.Expr], variables) -> "SparsePoly":
        """Parse a polynomial expression (sympy syntax) over the given variables"""
        variables = as_variables(variables)
        symbols = [sympy.Symbol(v.name) for v in variables]
        expr = sympy.sympify(text, locals={s.name: s for s in symbols}) if isinstance(text, str) else text
        extra = expr.free_symbols - set(symbols)
        if extra:
            raise UnknownVariableError(sorted(str(s) for s in extra)[0])
        poly = sympy.Poly(expr, *symbols, domain=sympy.QQ) if symbols else None
        if poly is None:
            return cls.constant(variables, to_fraction(sympy.Rational(expr)))
        return cls.from_sympy(poly, variables)

    @classmethod
    def from_sympy(cls, poly: sympy.Poly, variables) -> "SparsePoly":
        variables = as_variables(variables)
        return cls(variables, {monom: to_fraction(coeff) for monom, coeff in poly.terms()})

    # Basic accessors

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(name)

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * len(self.variables), Fraction(0))

    def coefficient(self, exps: Mapping[str, int]) -> Fraction:
        for name in exps:
            self.index(name)
        key = tuple(int(exps.get(n, 0)) for n in self.names)
        return self.terms.get(key, Fraction(0))

    def free_variables(self) -> List[str]:
        used = [False] * len(self.variables)
        for exps in self.terms:
            for i, e in enumerate(exps):
                if e:
                    used[i] = True
        return [v.name for v, u in zip(self.variables, used) if u]

    def degree_in(self, name: str) -> int:
        i = self.index(name)
        return max((exps[i] for exps in self.terms), default=0)

    def total_degree(self) -> int:
        return max((sum(exps) for exps in self.terms), default=0)

    def graded_degree(self, exps: Exponents) -> Fraction:
        return sum((v.degree * e for v, e in zip(self.variables, exps)), Fraction(0))

    def graded_degrees(self) -> List[Fraction]:
        return sorted({self.graded_degree(exps) for exps in self.terms})

    def is_homogeneous(self, degree: Optional[Fraction] = None) -> bool:
        degrees = self.graded_degrees()
        if not degrees:
            return True
        if degree is not None:
            return degrees == [to_fraction(degree)]
        return len(degrees) == 1

    def sorted_terms(self) -> List[Tuple[Exponents, Fraction]]:
        return sorted(self.terms.items(), key=lambda item: (sum(item[0]), item[0]), reverse=True)

    # Variable list management

    def with_variables(self, variables) -> "SparsePoly":
        """Re-embed into another variable list containing every variable in use"""
        variables = as_variables(variables)
        target = {v.name: i for i, v in enumerate(variables)}
        for name in self.free_variables():
            if name not in target:
                raise UnknownVariableError(name)
        moves = [(i, target.get(v.name)) for i, v in enumerate(self.variables)]
        n = len(variables)
        terms = {}
        for exps, coeff in self.terms.items():
            new = [0] * n
            for i, j in moves:
                if exps[i]:
                    new[j] = exps[i]
            terms[tuple(new)] = coeff
        return SparsePoly._raw(variables, terms)

    def drop_unused(self) -> "SparsePoly":
        keep = set(self.free_variables())
        return self.with_variables([v for v in self.variables if v.name in keep])

    def _aligned(self, other: "SparsePoly") -> Tuple["SparsePoly", "SparsePoly"]:
        if self.variables == other.variables:
            return self, other
        merged = merge_variables(self.variables, other.variables)
        return self.with_variables(merged), other.with_variables(merged)

    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            return other
        return SparsePoly.constant(self.variables, to_fraction(other))

    # Arithmetic

    def __add__(self, other) -> "SparsePoly":
        a, b = self._aligned(self._coerce(other))
        terms = dict(a.terms)
        for exps, coeff in b.terms.items():
            c = terms.get(exps, 0) + coeff
            if c:
                terms[exps] = c
            else:
                terms.pop(exps, None)
        return SparsePoly._raw(a.variables, terms)

    __radd__ = __add__

    def __neg__(self) -> "SparsePoly":
        return SparsePoly._raw(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other) -> "SparsePoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "SparsePoly":
        return self._coerce(other) + (-self)

    def scale(self, factor) -> "SparsePoly":
        factor = to_fraction(factor)
        if not factor:
            return SparsePoly.zero(self.variables)
        return SparsePoly._raw(self.variables, {e: c * factor for e, c in self.terms.items()})

    def __mul__(self, other) -> "SparsePoly":
        if not isinstance(other, SparsePoly):
            return self.scale(other)
        return self.multiply(other)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "SparsePoly":
        return self.scale(Fraction(1) / to_fraction(other))

    def multiply(self, other: "SparsePoly", truncate: Optional[Tuple[str, int]] = None) -> "SparsePoly":
        """Product, optionally dropping terms whose exponent in `truncate[0]` exceeds `truncate[1]`"""
        a, b = self._aligned(other)
        cut = None
        if truncate is not None:
            cut = (a.index(truncate[0]), truncate[1])
        terms: Dict[Exponents, Fraction] = {}
        for ea, ca in a.terms.items():
            for eb, cb in b.terms.items():
                if cut is not None and ea[cut[0]] + eb[cut[0]] > cut[1]:
                    continue
                e = tuple(map(add, ea, eb))
                terms[e] = terms.get(e, 0) + ca * cb
        return SparsePoly._raw(a.variables, {e: c for e, c in terms.items() if c})

    def __pow__(self, n: int) -> "SparsePoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError(f"Unsupported exponent: {n!r}")
        result = SparsePoly.constant(self.variables, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparsePoly):
            try:
                other = self._coerce(other)
            except ValueError:
                return NotImplemented
        a, b = self._aligned(other)
        return a.terms == b.terms

    def __hash__(self) -> int:
        if self._hash is None:
            trimmed = self.drop_unused()
            self._hash = hash((trimmed.names, frozenset(trimmed.terms.items())))
        return self._hash

    # Calculus and structure

    def derivative(self, name: str) -> "SparsePoly":
        i = self.index(name)
        terms = {}
        for exps, coeff in self.terms.items():
            e = exps[i]
            if e:
                new = list(exps)
                new[i] = e - 1
                terms[tuple(new)] = coeff * e
        return SparsePoly._raw(self.variables, terms)

    def euler_derivative(self, name: str) -> "SparsePoly":
        """name * d/d(name): multiplies each term by its exponent in `name`"""
        i = self.index(name)
        return SparsePoly._raw(self.variables,
                               {exps: coeff * exps[i] for exps, coeff in self.terms.items() if exps[i]})

    def truncate(self, name: str, max_exponent: int) -> "SparsePoly":
        i = self.index(name)
        return SparsePoly._raw(self.variables,
                               {e: c for e, c in self.terms.items() if e[i] <= max_exponent})

    def map_coefficients(self, fn: Callable[[Fraction], Fraction]) -> "SparsePoly":
        return SparsePoly(self.variables, {e: fn(c) for e, c in self.terms.items()})

    def collect(self, names: Sequence[str]) -> Dict[Exponents, "SparsePoly"]:
        """
        Group terms by their exponents in `names`

        Returns:
            Map from exponent tuples (in the order of `names`) to the
            coefficient polynomial over the remaining variables
        """
        idx = [self.index(n) for n in names]
        rest = [i for i in range(len(self.variables)) if i not in set(idx)]
        rest_vars = tuple(self.variables[i] for i in rest)
        groups: Dict[Exponents, Dict[Exponents, Fraction]] = {}
        for exps, coeff in self.terms.items():
            key = tuple(exps[i] for i in idx)
            groups.setdefault(key, {})[tuple(exps[i] for i in rest)] = coeff
        return {k: SparsePoly._raw(rest_vars, v) for k, v in groups.items()}

    def substitute(self, bindings: Mapping[str, object]) -> "SparsePoly":
        """
        Simultaneous substitution of variables by polynomials or rationals

        Args:
            bindings: variable name -> SparsePoly or rational value

        Returns:
            Polynomial over the union of this variable list and those of the
            substituted polynomials; unbound variables are untouched
        """
        for name in bindings:
            self.index(name)
        values: Dict[str, SparsePoly] = {}
        variables = self.variables
        for name, value in bindings.items():
            if isinstance(value, SparsePoly):
                variables = merge_variables(variables, value.variables)
        for name, value in bindings.items():
            if isinstance(value, SparsePoly):
                values[name] = value.with_variables(variables)
            else:
                values[name] = SparsePoly.constant(variables, to_fraction(value))
        bound = [(self.index(n), n) for n in values]
        bound_idx = {i for i, _ in bound}
        power_cache: Dict[Tuple[str, int], SparsePoly] = {}

        def power(name: str, e: int) -> SparsePoly:
            key = (name, e)
            if key not in power_cache:
                power_cache[key] = values[name] ** e
            return power_cache[key]

        result_terms: Dict[Exponents, Fraction] = {}
        grouped: Dict[Tuple[int, ...], Dict[Exponents, Fraction]] = {}
        for exps, coeff in self.terms.items():
            key = tuple(exps[i] for i, _ in bound)
            grouped.setdefault(key, {})[exps] = coeff
        for key, group in grouped.items():
            factor = SparsePoly.constant(variables, 1)
            for (i, name), e in zip(bound, key):
                if e:
                    factor = factor * power(name, e)
            remainder_terms = {}
            for exps, coeff in group.items():
                stripped = tuple(0 if i in bound_idx else e for i, e in enumerate(exps))
                remainder_terms[stripped] = coeff
            remainder = SparsePoly._raw(self.variables, remainder_terms).with_variables(variables)
            for e, c in (remainder * factor).terms.items():
                value = result_terms.get(e, 0) + c
                if value:
                    result_terms[e] = value
                else:
                    result_terms.pop(e, None)
        return SparsePoly._raw(variables, result_terms)

    def evaluate(self, values: Mapping[str, object]):
        """
        Evaluate at a point; values may be Fractions, floats or complex numbers

        Every variable occurring in the polynomial must be bound.
        """
        used = self.free_variables()
        missing = [n for n in used if n not in values]
        if missing:
            raise ValueError(f"Missing values for variables: {missing}")
        point = [values.get(v.name, 0) for v in self.variables]
        total = 0
        for exps, coeff in self.terms.items():
            term = coeff
            for x, e in zip(point, exps):
                if e:
                    term = term * x ** e
            total = total + term
        return total

    def partial_evaluate(self, values: Mapping[str, object]) -> "SparsePoly":
        """Bind some variables to rationals and drop them from the variable list"""
        reduced = self.substitute({n: to_fraction(v) for n, v in values.items()})
        return reduced.with_variables([v for v in reduced.variables if v.name not in values])

    # Conversion

    def to_sympy(self, symbols: Optional[Sequence[sympy.Symbol]] = None) -> sympy.Poly:
        symbols = list(symbols) if symbols is not None else [sympy.Symbol(n) for n in self.names]
        rep = {exps: to_sympy(c) for exps, c in self.terms.items()}
        if not rep:
            return sympy.Poly(0, *symbols, domain=sympy.QQ)
        return sympy.Poly.from_dict(rep, *symbols, domain=sympy.QQ)

    def to_json(self) -> List[Dict]:
        data = []
        for exps, coeff in self.sorted_terms():
            data.append({
                "coeff": format_rational(coeff),
                "exps": {name: e for name, e in zip(self.names, exps) if e},
            })
        return data

    @classmethod
    def from_json(cls, data: Sequence[Mapping], variables) -> "SparsePoly":
        variables = as_variables(variables)
        names = [v.name for v in variables]
        terms: Dict[Exponents, Fraction] = {}
        for entry in data:
            exps = entry.get("exps", {})
            for name in exps:
                if name not in names:
                    raise UnknownVariableError(name)
            key = tuple(int(exps.get(n, 0)) for n in names)
            terms[key] = terms.get(key, Fraction(0)) + to_fraction(entry["coeff"])
        return cls(variables, terms)

    def __repr__(self) -> str:
        return f"SparsePoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for exps, coeff in self.sorted_terms():
            monomial = "*".join(
                name if e == 1 else f"{name}^{e}" for name, e in zip(self.names, exps) if e
            )
            if not monomial:
                pieces.append(format_rational(coeff) if coeff.denominator != 1 else str(coeff.numerator))
            elif coeff == 1:
                pieces.append(monomial)
            elif coeff == -1:
                pieces.append(f"-{monomial}")
            else:
                pieces.append(f"{coeff}*{monomial}")
        return " + ".join(pieces).replace("+ -", "- ")


def substitute(p: SparsePoly, bindings: Mapping[str, object]) -> SparsePoly:
    """Functional form of SparsePoly.substitute"""
    return p.substitute(bindings)


def poly_sum(polys: Iterable[SparsePoly], variables) -> SparsePoly:
    """Sum of many polynomials without quadratic re-copying"""
    variables = as_variables(variables)
    terms: Dict[Exponents, Fraction] = {}
    for p in polys:
        if p.variables != variables:
            p = p.with_variables(variables)
        for e, c in p.terms.items():
            terms[e] = terms.get(e, 0) + c
    return SparsePoly._raw(variables, {e: c for e, c in terms.items() if c})
