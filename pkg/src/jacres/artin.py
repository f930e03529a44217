"""The Artinian quotient P = k[[X]]/I of an m-primary ideal.

P has the standard monomials as basis. The section sigma sends a polynomial
to its representative supported on the basis; it is computed from a table of
reductions of all monomials of degree < s, where m^s lies in I.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction
from typing import Any

from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, PolyRing

from . import linalg
from .config import DEFAULT_LIMITS, ComputeLimits
from .errors import InvalidInputError, InvariantViolation
from .local import (
    StandardBasis,
    containment_index,
    ideal_member,
    normal_form,
    quotient_dimension,
    standard_basis,
)
from .models import JacobianVerdict
from .poly import (
    Monomial,
    characteristic,
    constant_term,
    format_poly,
    jacobian_data,
    monomial,
    monomials_below,
    permute_variables,
    ring_with_order,
    to_fraction,
    truncate,
)

logger = logging.getLogger(__name__)

Coordinates = dict[int, Any]


@dataclass(frozen=True)
class ArtinAlgebra:
    """Finite-dimensional quotient with its standard-monomial basis and reducer."""
    generators: tuple[PolyElement, ...]
    basis: tuple[Monomial, ...]
    s: int
    table: dict[Monomial, Coordinates]
    standard: StandardBasis

    @property
    def ring(self) -> PolyRing:
        return self.generators[0].ring

    @property
    def domain(self) -> Any:
        return self.ring.domain

    @property
    def dim(self) -> int:
        return len(self.basis)

    @cached_property
    def index(self) -> dict[Monomial, int]:
        return {m: i for i, m in enumerate(self.basis)}

    @cached_property
    def basis_elements(self) -> tuple[PolyElement, ...]:
        return tuple(monomial(self.ring, m) for m in self.basis)

    def sparse_coordinates(self, p: PolyElement) -> Coordinates:
        out: Coordinates = {}
        for m, c in p.items():
            if sum(m) >= self.s:
                continue
            for i, v in self.table[m].items():
                value = out.get(i, self.domain.zero) + c * v
                if value:
                    out[i] = value
                else:
                    out.pop(i, None)
        return out

    def coordinates(self, p: PolyElement) -> list[Any]:
        """Coordinates of sigma(p) in the basis."""
        sparse = self.sparse_coordinates(p)
        return [sparse.get(i, self.domain.zero) for i in range(self.dim)]

    def element(self, coords: Sequence[Any]) -> PolyElement:
        """Polynomial supported on the basis with the given coordinates."""
        return self.ring.from_dict({self.basis[i]: c for i, c in enumerate(coords) if c})

    def reduce(self, p: PolyElement) -> PolyElement:
        """sigma(p): the representative of p modulo I supported on the basis."""
        return self.element(self.coordinates(p))

    def multiply(self, a: PolyElement, b: PolyElement) -> PolyElement:
        return self.reduce(truncate(a * b, self.s))

    def is_zero(self, p: PolyElement) -> bool:
        return not self.sparse_coordinates(p)


def _reduction_table(
    basis_monomials: Sequence[Monomial],
    s: int,
    standard: StandardBasis,
    limits: ComputeLimits,
) -> dict[Monomial, Coordinates]:
    """sigma(x^a) for every monomial of degree < s."""
    ring = standard.ring
    index = {m: i for i, m in enumerate(basis_monomials)}
    table: dict[Monomial, Coordinates] = {m: {i: ring.domain.one} for m, i in index.items()}
    for exps in monomials_below(ring.ngens, s):
        if exps in table:
            continue
        remainder, _ = normal_form(monomial(ring, exps), standard, limits=limits)
        # the normal form is supported on the standard monomials
        table[exps] = {index[m]: c for m, c in remainder.items()}
    return table


def build_quotient(
    F: Sequence[PolyElement],
    basis: StandardBasis | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> ArtinAlgebra:
    """Basis, containment index and reducer of k[[X]]/(F)."""
    if basis is None:
        basis = standard_basis(F, limits=limits)
    qd = quotient_dimension(F, basis=basis, limits=limits)
    if not qd.finite:
        raise InvalidInputError(f"the quotient is infinite-dimensional (no pure power of {qd.witness})")
    if qd.dim == 0:
        raise InvalidInputError("the ideal is the whole ring")
    s = containment_index(F, basis=basis, limits=limits)
    table = _reduction_table(qd.standard_monomials, s, basis, limits)
    logger.debug("quotient of dimension %d, containment index %d", qd.dim, s)
    return ArtinAlgebra(
        generators=tuple(F),
        basis=qd.standard_monomials,
        s=s,
        table=table,
        standard=basis,
    )


@dataclass(frozen=True)
class MultOperator:
    """Multiplication by an element of P in the standard-monomial basis."""
    element: PolyElement
    matrix: DomainMatrix

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def trace(self) -> Any:
        return linalg.trace(self.matrix)

    def is_nilpotent(self) -> bool:
        return linalg.is_zero(self.matrix ** self.dim) if self.dim else True

    def rows(self) -> list[list[Any]]:
        return linalg.to_rows(self.matrix)


def mult_matrix(A: ArtinAlgebra, g: PolyElement) -> MultOperator:
    """Column j holds the coordinates of sigma(g * b_j)."""
    columns = [A.coordinates(truncate(g * b, A.s)) for b in A.basis_elements]
    return MultOperator(element=g, matrix=linalg.from_columns(columns, A.domain, A.dim))


def trace_residue(A: ArtinAlgebra, r: PolyElement) -> Any:
    """Tr(p_r), the residue of r df_1 ^ ... ^ df_n over (f_1, ..., f_n)."""
    return mult_matrix(A, r).trace()


@dataclass(frozen=True)
class Socle:
    basis: tuple[PolyElement, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_simple(self) -> bool:
        return self.dim == 1


def socle(A: ArtinAlgebra) -> Socle:
    """Common kernel of multiplication by the variables."""
    stacked: list[list[Any]] = []
    for x in A.ring.gens:
        stacked.extend(mult_matrix(A, x).rows())
    kernel = linalg.nullspace(linalg.dense(stacked, A.domain, A.dim))
    return Socle(tuple(A.element(v) for v in kernel))


def in_span(A: ArtinAlgebra, vectors: Sequence[PolyElement], p: PolyElement) -> bool:
    rows = [A.coordinates(v) for v in vectors]
    return linalg.in_row_span(linalg.dense(rows, A.domain, A.dim), A.coordinates(p))


def permuted_quotient(
    F: Sequence[PolyElement],
    perm: Sequence[int],
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> tuple[ArtinAlgebra, tuple[PolyElement, ...]]:
    """The quotient rebuilt with the variables reordered; returns it and the rewritten F."""
    target = ring_with_order(F[0].ring, perm)
    moved = tuple(permute_variables(f, target) for f in F)
    return build_quotient(moved, limits=limits), moved


def jacobian_test(
    F: Sequence[PolyElement],
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> JacobianVerdict:
    """Jacobian membership against positive dimension, with socle generation when finite.

    In characteristic 0 the equivalence and the socle statement are asserted.
    In characteristic p they are asserted only when the quotient is finite of
    dimension prime to p; otherwise ``char_caveat`` is set.
    """
    F = tuple(F)
    for i, f in enumerate(F, start=1):
        if constant_term(f):
            raise InvalidInputError(f"generator {i} does not vanish at 0: the ideal is the whole ring")
    data = jacobian_data(F)
    J = data.det
    ring = J.ring
    p = characteristic(J)
    basis = standard_basis(F, limits=limits)
    qd = quotient_dimension(F, basis=basis, limits=limits)
    member, cert = ideal_member(J, F, basis=basis, limits=limits)
    socle_generated = annihilates = socle_dim = None
    if qd.finite:
        A = build_quotient(F, basis=basis, limits=limits)
        annihilates = all(ideal_member(J * x, F, basis=basis, limits=limits)[0] for x in ring.gens)
        sc = socle(A)
        socle_dim = sc.dim
        socle_generated = sc.is_simple and annihilates and not A.is_zero(J)
    caveat = None
    if p == 0:
        if qd.dim_positive != member:
            raise InvariantViolation(
                f"dim>0 is {qd.dim_positive} but J={format_poly(J)} in I is {member}"
            )
        if qd.finite and not socle_generated:
            raise InvariantViolation(f"J={format_poly(J)} does not generate the socle")
    elif qd.finite and qd.dim % p != 0:
        if member or not socle_generated:
            raise InvariantViolation(
                f"dimension {qd.dim} is prime to p={p} but J={format_poly(J)} does not generate the socle"
            )
    elif qd.finite:
        caveat = f"p={p} divides dim={qd.dim}; nothing asserted"
    else:
        caveat = f"positive dimension in characteristic {p}; nothing asserted"
    logger.debug("jacobian test: dim=%s J in I=%s", qd.dim, member)
    return JacobianVerdict(
        dim_finite=qd.finite,
        dim=qd.dim,
        jacobian=J,
        jacobian_in_ideal=member,
        certificate=cert,
        socle_generated=socle_generated,
        annihilates_maximal_ideal=annihilates,
        socle_dim=socle_dim,
        witness=qd.witness,
        char_caveat=caveat,
    )


def trace_value(A: ArtinAlgebra, value: Any) -> Fraction:
    return to_fraction(value, A.domain)
