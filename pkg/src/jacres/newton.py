"""Newton polyhedra of monomial ideals.

The facets of NP(E) = conv(E) + R^n_{>=0} that are not coordinate hyperplanes
are read off the vertices of the blocking polyhedron
``Q = {l >= 0 : <l, e> >= 1 for e in E}``. Vertices are found by basis
enumeration: every n-subset of constraints is solved exactly and kept when
feasible. The asymptotic Samuel function of a monomial is then the least
normalised facet value.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from itertools import combinations

from sympy.polys.domains import QQ
from sympy.polys.rings import PolyElement

from . import linalg
from .errors import InvalidInputError
from .local import minimal_monomials
from .poly import Monomial, is_term, to_fraction

logger = logging.getLogger(__name__)

MAX_VARIABLES = 4
MAX_GENERATORS = 12


@dataclass(frozen=True)
class Facet:
    """``<normal, v> >= rhs`` with a primitive integer normal."""
    normal: tuple[int, ...]
    rhs: int

    def value(self, a: Sequence[int]) -> Fraction:
        return Fraction(sum(l * x for l, x in zip(self.normal, a)), self.rhs)

    def __str__(self) -> str:
        return f"{list(self.normal)}.v >= {self.rhs}"


@dataclass(frozen=True)
class NewtonPolyhedron:
    """Newton polyhedron of a monomial ideal with its non-coordinate facets."""
    exponents: tuple[Monomial, ...]
    facets: tuple[Facet, ...]

    @property
    def n(self) -> int:
        return len(self.exponents[0])

    def value(self, a: Sequence[int]) -> Fraction:
        """v(x^a) = max{theta : a in theta * NP} = min over facets of <l, a>/c."""
        return min(f.value(a) for f in self.facets)

    def contains(self, a: Sequence[int], theta: Fraction | int = 1) -> bool:
        return self.value(a) >= theta

    @classmethod
    def from_exponents(cls, exponents: Iterable[Sequence[int]]) -> NewtonPolyhedron:
        E = tuple(tuple(int(x) for x in e) for e in exponents)
        if not E:
            raise InvalidInputError("a monomial ideal needs at least one generator")
        n = len(E[0])
        if any(len(e) != n for e in E):
            raise InvalidInputError("exponent vectors have different lengths")
        if n > MAX_VARIABLES:
            raise InvalidInputError(f"Newton polyhedra are limited to {MAX_VARIABLES} variables")
        E = minimal_monomials(E)
        if len(E) > MAX_GENERATORS:
            raise InvalidInputError(f"Newton polyhedra are limited to {MAX_GENERATORS} generators")
        if tuple([0] * n) in E:
            raise InvalidInputError("the unit ideal has no Newton polyhedron facets")
        return cls(exponents=E, facets=_facets(E, n))


def _primitive(l: Sequence[Fraction]) -> tuple[tuple[int, ...], int]:
    """Scale ``<l, v> >= 1`` to a primitive integer normal and integer right-hand side."""
    denominator = reduce(math.lcm, (x.denominator for x in l), 1)
    normal = [int(x * denominator) for x in l]
    g = reduce(math.gcd, normal, 0)
    # <normal, e> = denominator / g on a tight lattice point e, so g divides it
    return tuple(x // g for x in normal), denominator // g


def _facets(E: Sequence[Monomial], n: int) -> tuple[Facet, ...]:
    constraints: list[tuple[tuple[int, ...], int]] = []
    for i in range(n):
        constraints.append((tuple(1 if j == i else 0 for j in range(n)), 0))
    for e in E:
        constraints.append((tuple(e), 1))
    vertices: set[tuple[Fraction, ...]] = set()
    for subset in combinations(constraints, n):
        matrix = linalg.dense([[QQ(x) for x in row] for row, _ in subset], QQ, n)
        if linalg.rank(matrix) < n:
            continue
        solution = linalg.solve(matrix, [QQ(rhs) for _, rhs in subset])
        if solution is None:
            continue
        point = tuple(to_fraction(x, QQ) for x in solution)
        if any(x < 0 for x in point):
            continue
        if all(sum(a * x for a, x in zip(e, point)) >= 1 for e in E):
            vertices.add(point)
    facets = sorted({Facet(*_primitive(v)) for v in vertices}, key=lambda f: (f.rhs, f.normal))
    logger.debug("newton polyhedron of %s: facets %s", list(E), [str(f) for f in facets])
    return tuple(facets)


def monomial_exponents(F: Sequence[PolyElement]) -> tuple[Monomial, ...]:
    """Exponents of a monomial ideal; every nonzero generator must be a single term."""
    exponents = []
    for i, f in enumerate(F, start=1):
        if not f:
            continue
        if not is_term(f):
            raise InvalidInputError(f"generator {i} is not a monomial")
        exponents.append(next(iter(f.itermonoms())))
    if not exponents:
        raise InvalidInputError("all generators are zero")
    return tuple(exponents)


def is_monomial_ideal(F: Sequence[PolyElement]) -> bool:
    return any(F) and all(not f or is_term(f) for f in F)


def newton_polyhedron(F: Sequence[PolyElement]) -> NewtonPolyhedron:
    return NewtonPolyhedron.from_exponents(monomial_exponents(F))


def samuel_monomial(E: Iterable[Sequence[int]] | NewtonPolyhedron, a: Sequence[int]) -> Fraction:
    """Asymptotic Samuel function of x^a for the monomial ideal with exponents E."""
    polyhedron = E if isinstance(E, NewtonPolyhedron) else NewtonPolyhedron.from_exponents(E)
    if len(a) != polyhedron.n:
        raise InvalidInputError(f"exponent {list(a)} has the wrong length")
    return polyhedron.value(a)


def samuel_polynomial(polyhedron: NewtonPolyhedron, u: PolyElement) -> Fraction | float:
    """Least value over the terms of u; inf for u == 0."""
    if not u:
        return math.inf
    return min(polyhedron.value(m) for m in u.itermonoms())


def integral_closure_monomial(E: Iterable[Sequence[int]] | NewtonPolyhedron) -> tuple[Monomial, ...]:
    """Minimal generators of the integral closure: lattice points of NP, kept minimal.

    A minimal generator a has a_i <= max over E of e_i, so the box suffices.
    """
    polyhedron = E if isinstance(E, NewtonPolyhedron) else NewtonPolyhedron.from_exponents(E)
    bounds = [max(e[i] for e in polyhedron.exponents) for i in range(polyhedron.n)]
    points: list[Monomial] = [()]
    for b in bounds:
        points = [p + (x,) for p in points for x in range(b + 1)]
    inside = [p for p in points if polyhedron.contains(p)]
    return minimal_monomials(inside)


def is_integrally_closed(E: Iterable[Sequence[int]] | NewtonPolyhedron) -> bool:
    polyhedron = E if isinstance(E, NewtonPolyhedron) else NewtonPolyhedron.from_exponents(E)
    closure = integral_closure_monomial(polyhedron)
    return all(
        any(all(g >= e for g, e in zip(gen, exp)) for exp in polyhedron.exponents)
        for gen in closure
    )
