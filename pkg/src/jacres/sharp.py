"""f-adic expansions, sharp residues and the Bezoutian residue functional.

For an m-primary complete intersection F = (f_1, ..., f_n) every r has a
unique expansion ``r = sum(sigma(r_a) * f^a)`` in the completion. Expanding
``r * b`` for each basis element b of P gives the endomorphism coefficients
gamma_a of r; the trace of gamma_(m-1) is the residue of ``r df`` over the
powers ``f^m``. General residues ``Res[g dX / f]`` come from the Bezoutian of
the divided-difference matrix.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from sympy import Symbol
from sympy.polys.matrices import DomainMatrix
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing

from . import linalg
from .artin import ArtinAlgebra, build_quotient, mult_matrix
from .config import DEFAULT_LIMITS, ComputeLimits
from .errors import InvalidInputError, InvariantViolation
from .local import ideal_member, normal_form, standard_basis, unit_inverse
from .models import NondegeneracyVerdict, ProbeResult
from .poly import Monomial, characteristic, format_poly, jacobian_data, truncate, variable_names

logger = logging.getLogger(__name__)

MultiIndex = tuple[int, ...]


def _check_bound(beta: Sequence[int], n: int) -> MultiIndex:
    beta = tuple(int(b) for b in beta)
    if len(beta) != n or any(b < 0 for b in beta):
        raise InvalidInputError(f"bound {list(beta)} must be {n} nonnegative integers")
    return beta


def _below(alpha: MultiIndex, beta: MultiIndex) -> bool:
    return all(a <= b for a, b in zip(alpha, beta))


def _f_power(F: Sequence[PolyElement], alpha: MultiIndex) -> PolyElement:
    out = F[0].ring.one
    for f, a in zip(F, alpha):
        if a:
            out *= f ** a
    return out


@dataclass(frozen=True)
class FAdicExpansion:
    """``r == sum(coefficients[a] * f^a)`` modulo (f_1^(b_1+1), ..., f_n^(b_n+1))."""
    element: PolyElement
    generators: tuple[PolyElement, ...]
    bound: MultiIndex
    coefficients: dict[MultiIndex, PolyElement]

    def coefficient(self, alpha: Sequence[int]) -> PolyElement:
        return self.coefficients.get(tuple(alpha), self.element.ring.zero)

    def residual(self) -> PolyElement:
        total = self.element
        for alpha, c in self.coefficients.items():
            if c:
                total -= c * _f_power(self.generators, alpha)
        return total

    def verify(self, limits: ComputeLimits = DEFAULT_LIMITS) -> bool:
        """The residual lies in (f_1^(b_1+1), ..., f_n^(b_n+1))."""
        powers = [f ** (b + 1) for f, b in zip(self.generators, self.bound)]
        member, _ = ideal_member(self.residual(), powers, limits=limits)
        return member


def f_adic_expand(
    r: PolyElement,
    F: Sequence[PolyElement],
    beta: Sequence[int],
    algebra: ArtinAlgebra | None = None,
    generator_order: Sequence[int] | None = None,
    syzygy: PolyElement | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> FAdicExpansion:
    """Expand r level by level: ``p = sigma(p) + sum(a_i * f_i)``, then expand each a_i.

    ``generator_order`` computes the division certificates with the generators
    listed in another order; ``syzygy`` q adds the Koszul syzygy
    ``q*f_2*e_1 - q*f_1*e_2`` to every division. Neither changes the result.
    """
    F = tuple(F)
    ring = r.ring
    n = len(F)
    beta = _check_bound(beta, n)
    A = algebra if algebra is not None else build_quotient(F, limits=limits)
    precision = A.s * (sum(beta) + 1)
    order = list(range(n)) if generator_order is None else list(generator_order)
    if sorted(order) != list(range(n)):
        raise InvalidInputError(f"{order} is not a permutation of the generators")
    ordered = tuple(F[i] for i in order)
    basis = A.standard if generator_order is None else standard_basis(ordered, limits=limits)
    buckets: dict[MultiIndex, PolyElement] = {tuple([0] * n): truncate(r, precision)}
    coefficients: dict[MultiIndex, PolyElement] = {}
    for level in range(sum(beta) + 1):
        for alpha in sorted(a for a in buckets if sum(a) == level):
            p = buckets.pop(alpha)
            head = A.reduce(p)
            if head:
                coefficients[alpha] = head
            rest = p - head
            if not rest:
                continue
            remainder, cert = normal_form(rest, basis, limits=limits)
            if remainder:
                raise InvariantViolation(f"{format_poly(rest)} should lie in the ideal")
            inverse = unit_inverse(cert.unit, precision)
            cofactors = [ring.zero] * n
            for pos, i in enumerate(order):
                cofactors[i] = cert.cofactors[pos]
            if syzygy is not None and n >= 2:
                cofactors[0] += syzygy * F[1]
                cofactors[1] -= syzygy * F[0]
            for i, c in enumerate(cofactors):
                child = tuple(a + (1 if j == i else 0) for j, a in enumerate(alpha))
                if not c or not _below(child, beta):
                    continue
                a_i = truncate(inverse * c, precision)
                if a_i:
                    buckets[child] = buckets.get(child, ring.zero) + a_i
    logger.debug("f-adic expansion to %s: %d nonzero coefficients", beta, len(coefficients))
    return FAdicExpansion(element=r, generators=F, bound=beta, coefficients=coefficients)


@dataclass(frozen=True)
class EndoSeries:
    """Endomorphisms gamma_a of P: column j is the a-coefficient of r * b_j."""
    element: PolyElement
    bound: MultiIndex
    matrices: dict[MultiIndex, DomainMatrix]
    dim: int

    def gamma(self, alpha: Sequence[int]) -> DomainMatrix | None:
        return self.matrices.get(tuple(alpha))

    def trace(self, alpha: Sequence[int]) -> Any:
        matrix = self.gamma(alpha)
        if matrix is None:
            return None
        return linalg.trace(matrix)


def sharp_series(
    r: PolyElement,
    F: Sequence[PolyElement],
    beta: Sequence[int],
    algebra: ArtinAlgebra | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> EndoSeries:
    """The coefficients gamma_a, a <= beta, of r as endomorphisms of P."""
    F = tuple(F)
    A = algebra if algebra is not None else build_quotient(F, limits=limits)
    beta = _check_bound(beta, len(F))
    columns: dict[MultiIndex, list[list[Any]]] = {}
    zero_column = [A.domain.zero] * A.dim
    for j, b in enumerate(A.basis_elements):
        expansion = f_adic_expand(r * b, F, beta, algebra=A, limits=limits)
        for alpha, c in expansion.coefficients.items():
            cols = columns.setdefault(alpha, [list(zero_column) for _ in range(A.dim)])
            cols[j] = A.coordinates(c)
    matrices = {alpha: linalg.from_columns(cols, A.domain, A.dim) for alpha, cols in columns.items()}
    return EndoSeries(element=r, bound=beta, matrices=matrices, dim=A.dim)


def residue_power(
    r: PolyElement,
    F: Sequence[PolyElement],
    m: Sequence[int],
    algebra: ArtinAlgebra | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> Any:
    """Res[r df_1 ^ ... ^ df_n / f_1^m_1, ..., f_n^m_n] = Tr(gamma_(m-1))."""
    m = tuple(int(v) for v in m)
    if len(m) != len(F) or any(v < 1 for v in m):
        raise InvalidInputError(f"powers {list(m)} must be {len(F)} positive integers")
    beta = tuple(v - 1 for v in m)
    series = sharp_series(r, F, beta, algebra=algebra, limits=limits)
    value = series.trace(beta)
    return r.ring.domain.zero if value is None else value


def doubled_ring(ring: PolyRing) -> PolyRing:
    """k[X, Y] with Y_j named ``x_j'``."""
    names = variable_names(ring)
    symbols = [Symbol(v) for v in names] + [Symbol(f"{v}'") for v in names]
    return PolyRing(symbols, ring.domain, grlex)


def _divided_differences(
    f: PolyElement,
    R2: PolyRing,
    order: Sequence[int],
) -> list[PolyElement]:
    """Row (a_i1, ..., a_in) with f(Y) - f(X) = sum(a_ij * (Y_j - X_j)).

    Y replaces X one variable at a time, in ``order``.
    """
    n = f.ring.ngens
    position = {j: t for t, j in enumerate(order)}
    row = [R2.zero] * n
    for a, c in f.items():
        for j in range(n):
            if not a[j]:
                continue
            t = position[j]
            terms = {}
            for k in range(a[j]):
                exps = [0] * (2 * n)
                for l in range(n):
                    if l == j:
                        exps[l] = a[j] - 1 - k
                        exps[n + l] = k
                    elif position[l] < t:
                        exps[n + l] = a[l]
                    else:
                        exps[l] = a[l]
                terms[tuple(exps)] = c
            row[j] += R2.from_dict(terms)
    return row


def _bitruncate(p: PolyElement, n: int, s: int) -> PolyElement:
    """Drop terms of X-degree >= s or Y-degree >= s (they vanish in P (x) P)."""
    return p.ring.from_dict({
        m: c for m, c in p.items() if sum(m[:n]) < s and sum(m[n:]) < s
    })


def _truncated_det(matrix: list[list[PolyElement]], n: int, s: int) -> PolyElement:
    size = len(matrix)
    if size == 1:
        return _bitruncate(matrix[0][0], n, s)
    R2 = matrix[0][0].ring
    total = R2.zero
    for j, entry in enumerate(matrix[0]):
        if not entry:
            continue
        sub = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = _bitruncate(entry * _truncated_det(sub, n, s), n, s)
        total = total + term if j % 2 == 0 else total - term
    return total


@dataclass(frozen=True)
class ResidueFunctional:
    """The residue functional l on P and the reduced Bezoutian sum C[i][k] b_i (x) b_k."""
    algebra: ArtinAlgebra
    values: tuple[Any, ...]
    bezoutian: tuple[tuple[Any, ...], ...]
    order: tuple[int, ...] = field(default=())

    def __call__(self, g: PolyElement) -> Any:
        A = self.algebra
        total = A.domain.zero
        for i, c in A.sparse_coordinates(g).items():
            total += c * self.values[i]
        return total

    @cached_property
    def pairing(self) -> DomainMatrix:
        """T[i][j] = l(sigma(b_i * b_j))."""
        A = self.algebra
        rows = [[self(bi * bj) for bj in A.basis_elements] for bi in A.basis_elements]
        return linalg.dense(rows, A.domain, A.dim)

    def identity_check(self, g: PolyElement) -> bool:
        """sum(C[i][k] * l(g * b_i) * b_k) == sigma(g)."""
        A = self.algebra
        coords = [A.domain.zero] * A.dim
        for i, b in enumerate(A.basis_elements):
            value = self(g * b)
            if not value:
                continue
            for k, c in enumerate(self.bezoutian[i]):
                if c:
                    coords[k] += c * value
        return coords == A.coordinates(g)


def residue_functional(
    F: Sequence[PolyElement],
    algebra: ArtinAlgebra | None = None,
    variable_order: Sequence[int] | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> ResidueFunctional:
    """Res[g dX / f] through the Bezoutian, normalised by sum(l(b_i) * c_i) = 1."""
    F = tuple(F)
    A = algebra if algebra is not None else build_quotient(F, limits=limits)
    ring = A.ring
    n = ring.ngens
    if len(F) != n:
        raise InvalidInputError(f"need {n} generators for {n} variables, got {len(F)}")
    order = tuple(range(n)) if variable_order is None else tuple(variable_order)
    if sorted(order) != list(range(n)):
        raise InvalidInputError(f"{list(order)} is not a permutation of the variables")
    R2 = doubled_ring(ring)
    matrix = [_divided_differences(f, R2, order) for f in F]
    delta = _truncated_det(matrix, n, A.s)
    domain = A.domain
    C = [[domain.zero] * A.dim for _ in range(A.dim)]
    for m, c in delta.items():
        x_part: Monomial = m[:n]
        y_part: Monomial = m[n:]
        for i, u in A.table[x_part].items():
            for k, v in A.table[y_part].items():
                C[i][k] += c * u * v
    logger.debug("bezoutian: %d terms, quotient dimension %d", len(delta), A.dim)
    transposed = linalg.dense([[C[i][k] for i in range(A.dim)] for k in range(A.dim)], domain, A.dim)
    unit_index = A.index[ring.zero_monom]
    rhs = [domain.one if k == unit_index else domain.zero for k in range(A.dim)]
    values = linalg.solve(transposed, rhs)
    if values is None:
        raise InvariantViolation("the reduced Bezoutian does not represent 1; F is not a complete intersection")
    return ResidueFunctional(
        algebra=A,
        values=tuple(values),
        bezoutian=tuple(tuple(row) for row in C),
        order=order,
    )


def trace_cross_check(
    F: Sequence[PolyElement],
    g: PolyElement,
    functional: ResidueFunctional | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> tuple[Any, Any]:
    """(l(J * g), Tr(p_g)); the two agree."""
    ell = functional if functional is not None else residue_functional(F, limits=limits)
    J = jacobian_data(tuple(F)).det
    return ell(J * g), mult_matrix(ell.algebra, g).trace()


def nondegeneracy_check(
    F: Sequence[PolyElement],
    probes: Sequence[PolyElement],
    functional: ResidueFunctional | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> NondegeneracyVerdict:
    """Assert the pairing is invertible and that its kernel is I on every probe."""
    F = tuple(F)
    if characteristic(F[0]) != 0:
        raise InvalidInputError("the non-degeneracy check needs characteristic 0")
    ell = functional if functional is not None else residue_functional(F, limits=limits)
    A = ell.algebra
    invertible = linalg.is_invertible(ell.pairing)
    if not invertible:
        raise InvariantViolation("the residue pairing is degenerate")
    results = []
    for r in probes:
        vanish = all(not ell(r * b) for b in A.basis_elements)
        member, _ = ideal_member(r, F, basis=A.standard, limits=limits)
        if vanish != member:
            raise InvariantViolation(
                f"probe {format_poly(r)}: pairings vanish is {vanish} but membership is {member}"
            )
        results.append(ProbeResult(probe=r, pairings_vanish=vanish, in_ideal=member))
    return NondegeneracyVerdict(pairing_invertible=invertible, probes=tuple(results))
