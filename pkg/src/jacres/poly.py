"""Fields, rings, polynomials and arcs.

Polynomials are sympy ``PolyElement`` values: sparse maps from exponent
tuples to nonzero coefficients of an exact domain (``QQ`` or ``GF(p)``),
stored in graded-lexicographic order. This module adds what the rest of the
package needs on top of them: canonical printing, truncation, Jacobian and
Hessian determinants, and substitution of polynomial arcs.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Any

from sympy import Symbol, isprime
from sympy.polys.domains import GF, QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from . import linalg
from .errors import InvalidInputError

Monomial = tuple[int, ...]
Polynomial = PolyElement

ARC_VARIABLE = "t"


class FieldKind(str, Enum):
    """Coefficient field kinds."""
    RATIONALS = "rationals"
    PRIME = "prime-field"


@dataclass(frozen=True)
class Field:
    """Q (characteristic 0) or F_p."""
    characteristic: int = 0

    def __post_init__(self) -> None:
        p = self.characteristic
        if p < 0 or (p and not isprime(p)):
            raise InvalidInputError(f"characteristic must be 0 or a prime, got {p}")

    @property
    def kind(self) -> FieldKind:
        return FieldKind.RATIONALS if self.characteristic == 0 else FieldKind.PRIME

    @cached_property
    def domain(self) -> Any:
        if self.characteristic == 0:
            return QQ
        return GF(self.characteristic, symmetric=False)

    def element(self, value: Fraction | int) -> Any:
        """Domain element for an exact rational; the denominator must be invertible."""
        value = Fraction(value)
        if self.characteristic == 0:
            return QQ(value.numerator, value.denominator)
        K = self.domain
        den = K(value.denominator)
        if not den:
            raise InvalidInputError(f"{value} is not defined in {self}")
        return K(value.numerator) / den

    def __str__(self) -> str:
        return "Q" if self.characteristic == 0 else f"F{self.characteristic}"

    @classmethod
    def of(cls, domain: Any) -> Field:
        return cls(int(domain.characteristic()))


@dataclass(frozen=True)
class Ring:
    """Ordered variables over a field."""
    variables: tuple[str, ...]
    field: Field = Field()

    def __post_init__(self) -> None:
        if not self.variables:
            raise InvalidInputError("a ring needs at least one variable")
        if len(set(self.variables)) != len(self.variables):
            raise InvalidInputError(f"duplicate variable names in {list(self.variables)}")

    @property
    def n(self) -> int:
        return len(self.variables)

    @cached_property
    def poly_ring(self) -> PolyRing:
        return PolyRing([Symbol(v) for v in self.variables], self.field.domain, grlex)

    @property
    def gens(self) -> tuple[PolyElement, ...]:
        return tuple(self.poly_ring.gens)

    def extend(self, extra: Sequence[str]) -> Ring:
        return Ring(tuple(self.variables) + tuple(extra), self.field)

    def from_terms(self, terms: dict[Monomial, Fraction | int]) -> PolyElement:
        """Polynomial from exact rational coefficients."""
        return self.poly_ring.from_dict({m: self.field.element(c) for m, c in terms.items()})

    def __str__(self) -> str:
        return f"{self.field}[{','.join(self.variables)}]"

    @classmethod
    def of(cls, p: PolyElement | PolyRing) -> Ring:
        R = p if isinstance(p, PolyRing) else p.ring
        return cls(tuple(str(s) for s in R.symbols), Field.of(R.domain))


def variable_names(p: PolyElement | PolyRing) -> tuple[str, ...]:
    R = p if isinstance(p, PolyRing) else p.ring
    return tuple(str(s) for s in R.symbols)


def characteristic(p: PolyElement) -> int:
    return int(p.ring.domain.characteristic())


# -- coefficients ----------------------------------------------------------------

def to_fraction(c: Any, domain: Any) -> Fraction:
    """Exact rational value of a domain element (residues in [0, p) for GF(p))."""
    value = domain.to_sympy(c)
    return Fraction(int(value.p), int(value.q))


def format_coefficient(c: Any, domain: Any) -> str:
    return str(to_fraction(c, domain))


# -- monomials and polynomials -----------------------------------------------------

def monomial_degree(m: Monomial) -> int:
    return sum(m)


def total_degree(p: PolyElement) -> int:
    """Largest total degree of a term; -1 for the zero polynomial."""
    return max((sum(m) for m in p.itermonoms()), default=-1)


def order(p: PolyElement) -> float | int:
    """Smallest total degree of a term (the m-adic order); inf for zero."""
    return min((sum(m) for m in p.itermonoms()), default=math.inf)


def constant_term(p: PolyElement) -> Any:
    return p.get(p.ring.zero_monom, p.ring.domain.zero)


def truncate(p: PolyElement, precision: int) -> PolyElement:
    """Drop every term of total degree >= precision."""
    R = p.ring
    return R.from_dict({m: c for m, c in p.items() if sum(m) < precision})


def linear_part(p: PolyElement) -> PolyElement:
    R = p.ring
    return R.from_dict({m: c for m, c in p.items() if sum(m) == 1})


def is_term(p: PolyElement) -> bool:
    """A nonzero scalar multiple of a single monomial."""
    return len(p) == 1


def monomial(ring: PolyRing, exponents: Monomial) -> PolyElement:
    return ring.term_new(tuple(exponents), ring.domain.one)


def monomials_of_degree(n: int, degree: int) -> list[Monomial]:
    """All exponent vectors of length n and the given total degree."""
    if n == 1:
        return [(degree,)]
    out: list[Monomial] = []
    for first in range(degree, -1, -1):
        for rest in monomials_of_degree(n - 1, degree - first):
            out.append((first,) + rest)
    return out


def monomials_below(n: int, degree: int) -> list[Monomial]:
    """All exponent vectors of length n with total degree < degree."""
    return [m for d in range(degree) for m in monomials_of_degree(n, d)]


def format_poly(p: PolyElement) -> str:
    """Canonical text form: graded-lex order, ``^`` exponents, exact coefficients."""
    if not p:
        return "0"
    names = variable_names(p)
    domain = p.ring.domain
    parts: list[str] = []
    for m, c in p.terms():
        value = to_fraction(c, domain)
        negative = value < 0
        magnitude = -value if negative else value
        factors = [
            name if e == 1 else f"{name}^{e}"
            for name, e in zip(names, m)
            if e
        ]
        if not factors:
            body = str(magnitude)
        elif magnitude == 1:
            body = "*".join(factors)
        else:
            body = "*".join([str(magnitude)] + factors)
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    return " ".join(parts)


def embed(p: PolyElement, target: PolyRing) -> PolyElement:
    """Map p into a ring whose variables include all of p's variables, by name."""
    source = variable_names(p)
    names = variable_names(target)
    index = {name: i for i, name in enumerate(names)}
    try:
        positions = [index[name] for name in source]
    except KeyError as exc:
        raise InvalidInputError(f"variable {exc.args[0]} is not in {list(names)}") from None
    terms = {}
    for m, c in p.items():
        image = [0] * len(names)
        for pos, e in zip(positions, m):
            image[pos] = e
        terms[tuple(image)] = c
    return target.from_dict(terms)


def restrict(p: PolyElement, target: PolyRing) -> PolyElement:
    """Set every variable of p that is missing from ``target`` to zero and map the rest by name."""
    source = variable_names(p)
    names = set(variable_names(target))
    keep = [i for i, name in enumerate(source) if name in names]
    index = {name: i for i, name in enumerate(variable_names(target))}
    terms = {}
    for m, c in p.items():
        if any(e for i, e in enumerate(m) if i not in keep):
            continue
        image = [0] * target.ngens
        for i in keep:
            image[index[source[i]]] = m[i]
        terms[tuple(image)] = c
    return target.from_dict(terms)


def permute_variables(p: PolyElement, target: PolyRing) -> PolyElement:
    """Rewrite p in a ring with the same variables in a different order."""
    if set(variable_names(p)) != set(variable_names(target)):
        raise InvalidInputError("permutation target must have the same variables")
    return embed(p, target)


def ring_with_order(ring: PolyRing, perm: Sequence[int]) -> PolyRing:
    """Ring with variables reordered so that position i holds old variable perm[i]."""
    if sorted(perm) != list(range(ring.ngens)):
        raise InvalidInputError(f"{list(perm)} is not a permutation of the variables")
    symbols = [ring.symbols[i] for i in perm]
    return PolyRing(symbols, ring.domain, grlex)


# -- determinants ---------------------------------------------------------------

def determinant(matrix: Sequence[Sequence[PolyElement]], ring: PolyRing) -> PolyElement:
    """Cofactor expansion along the first row."""
    size = len(matrix)
    if size == 0:
        return ring.one
    if size == 1:
        return matrix[0][0]
    if size == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = ring.zero
    for j, entry in enumerate(matrix[0]):
        if not entry:
            continue
        sub = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = entry * determinant(sub, ring)
        total = total + term if j % 2 == 0 else total - term
    return total


def minor(matrix: Sequence[Sequence[PolyElement]], i: int, j: int, ring: PolyRing) -> PolyElement:
    sub = [row[:j] + row[j + 1:] for k, row in enumerate(matrix) if k != i]
    return determinant(sub, ring)


@dataclass(frozen=True)
class JacobianData:
    """Jacobian matrix, determinant, (i, j) minors and rank at the origin."""
    matrix: tuple[tuple[PolyElement, ...], ...]
    det: PolyElement
    minors: tuple[tuple[PolyElement, ...], ...]
    rank0: int

    def cofactor(self, i: int, j: int) -> PolyElement:
        sign = 1 if (i + j) % 2 == 0 else -1
        return self.minors[i][j] * sign


def _check_same_ring(polys: Sequence[PolyElement]) -> PolyRing:
    if not polys:
        raise InvalidInputError("expected at least one polynomial")
    ring = polys[0].ring
    if any(p.ring != ring for p in polys):
        raise InvalidInputError("polynomials belong to different rings")
    return ring


def _rank_at_origin(matrix: Sequence[Sequence[PolyElement]], ring: PolyRing) -> int:
    rows = [[constant_term(e) for e in row] for row in matrix]
    return linalg.rank(linalg.dense(rows, ring.domain, len(rows[0]) if rows else 0))


def jacobian_data(
    generators: Sequence[PolyElement],
    variables: Sequence[int] | None = None,
) -> JacobianData:
    """Jacobian data of n generators with respect to n variables.

    ``variables`` selects the differentiation variables by position; by default
    all ring variables are used.
    """
    ring = _check_same_ring(generators)
    cols = list(range(ring.ngens)) if variables is None else list(variables)
    if len(generators) != len(cols):
        raise InvalidInputError(
            f"need as many generators as variables: got {len(generators)} for {len(cols)}"
        )
    gens = ring.gens
    matrix = [[f.diff(gens[j]) for j in cols] for f in generators]
    det = determinant(matrix, ring)
    size = len(matrix)
    minors = tuple(
        tuple(minor(matrix, i, j, ring) for j in range(size)) for i in range(size)
    )
    return JacobianData(
        matrix=tuple(tuple(row) for row in matrix),
        det=det,
        minors=minors,
        rank0=_rank_at_origin(matrix, ring),
    )


def hessian_matrix(f: PolyElement) -> list[list[PolyElement]]:
    gens = f.ring.gens
    first = [f.diff(x) for x in gens]
    return [[d.diff(x) for x in gens] for d in first]


def hessian_det(f: PolyElement) -> PolyElement:
    """Determinant of the matrix of second partials."""
    return determinant(hessian_matrix(f), f.ring)


def hessian_rank0(f: PolyElement) -> int:
    return _rank_at_origin(hessian_matrix(f), f.ring)


# -- arcs ------------------------------------------------------------------------

def arc_ring(field: Field | Any) -> PolyRing:
    """Univariate ring in t over the given field (or domain)."""
    domain = field.domain if isinstance(field, Field) else field
    return PolyRing([Symbol(ARC_VARIABLE)], domain, grlex)


def order_t(q: PolyElement) -> float | int:
    """t-adic order of a univariate polynomial; inf for zero."""
    return order(q)


@dataclass(frozen=True)
class Arc:
    """A polynomial arc t -> (phi_1(t), ..., phi_n(t)) through the origin."""
    components: tuple[PolyElement, ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise InvalidInputError("an arc needs at least one component")
        ring = self.components[0].ring
        if ring.ngens != 1 or any(c.ring != ring for c in self.components):
            raise InvalidInputError("arc components must be univariate polynomials in t")
        for i, c in enumerate(self.components, start=1):
            if constant_term(c):
                raise InvalidInputError(f"arc component {i} has a nonzero constant term")
        if not any(self.components):
            raise InvalidInputError("an arc needs at least one nonzero component")

    @property
    def ring(self) -> PolyRing:
        return self.components[0].ring

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def order(self) -> int:
        """Smallest order of a component."""
        return min(order_t(c) for c in self.components)

    def derivative(self) -> tuple[PolyElement, ...]:
        t = self.ring.gens[0]
        return tuple(c.diff(t) for c in self.components)

    @classmethod
    def monomial(cls, field: Field, weights: Sequence[int], coefficients: Sequence[int]) -> Arc:
        T = arc_ring(field)
        K = T.domain
        return cls(tuple(
            T.term_new((w,), K(c)) if c else T.zero
            for w, c in zip(weights, coefficients)
        ))

    def __str__(self) -> str:
        return "(" + ", ".join(format_poly(c) for c in self.components) + ")"


def compose_arc(p: PolyElement, arc: Arc) -> tuple[PolyElement, float | int]:
    """Substitute the arc into p; returns p(phi(t)) and its t-adic order."""
    if p.ring.ngens != arc.n:
        raise InvalidInputError(
            f"arc has {arc.n} components but the polynomial has {p.ring.ngens} variables"
        )
    T = arc.ring
    if T.domain != p.ring.domain:
        raise InvalidInputError("arc and polynomial are over different fields")
    powers: list[dict[int, PolyElement]] = [{0: T.one} for _ in range(arc.n)]

    def power(i: int, e: int) -> PolyElement:
        cache = powers[i]
        if e not in cache:
            cache[e] = power(i, e - 1) * arc.components[i]
        return cache[e]

    result = T.zero
    for m, c in p.items():
        term = T.ground_new(c)
        for i, e in enumerate(m):
            if e:
                term = term * power(i, e)
                if not term:
                    break
        result += term
    return result, order_t(result)
