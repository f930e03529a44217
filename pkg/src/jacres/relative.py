"""Coefficient rings beyond a field.

A system with a ``coeff:`` clause lives in k[[X, U]]: the generators F may
involve the coefficient variables U, and the relations H of A = k[U]/(H) are
added to the ideal. Membership over A is membership in the flattened ideal
I+ = (F) + (H). For A = k[U] the trace over A is computed in the truncation
k[[U]]/(U)^K, K = ``relative_precision``.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement, PolyRing

from . import linalg
from .artin import ArtinAlgebra, build_quotient, jacobian_test, socle, trace_residue
from .config import DEFAULT_LIMITS, ComputeLimits
from .errors import InvalidInputError, InvariantViolation
from .local import MembershipCertificate, StandardBasis, ideal_member, quotient_dimension, standard_basis
from .models import Outcome, RelativeTrace, RadicalVerdict, NonArtinianReport, WitnessCheck
from .poly import (
    Field,
    Monomial,
    Ring,
    characteristic,
    constant_term,
    embed,
    format_poly,
    jacobian_data,
    monomial,
    monomials_below,
    monomials_of_degree,
    restrict,
    total_degree,
    variable_names,
)

logger = logging.getLogger(__name__)


class CoeffKind(str, Enum):
    FIELD = "field"
    DOMAIN_POLYNOMIAL = "domain-polynomial"
    ARTINIAN_QUOTIENT = "artinian-quotient"


@dataclass(frozen=True)
class CoeffRingSpec:
    """A = k, k[U] or the local Artinian quotient k[[U]]/(H)."""
    field: Field
    variables: tuple[str, ...] = ()
    relations: tuple[PolyElement, ...] = ()
    apolar: PolyElement | None = None

    @property
    def kind(self) -> CoeffKind:
        if not self.variables:
            return CoeffKind.FIELD
        if not self.relations:
            return CoeffKind.DOMAIN_POLYNOMIAL
        return CoeffKind.ARTINIAN_QUOTIENT

    @property
    def is_domain(self) -> bool:
        return self.kind is not CoeffKind.ARTINIAN_QUOTIENT

    @property
    def ring(self) -> Ring:
        if not self.variables:
            raise InvalidInputError("a field has no coefficient variables")
        return Ring(self.variables, self.field)

    def truncated_relations(self, limits: ComputeLimits = DEFAULT_LIMITS) -> tuple[PolyElement, ...]:
        """H for a quotient, all monomials of degree K for k[U], nothing for a field."""
        if self.kind is CoeffKind.DOMAIN_POLYNOMIAL:
            R = self.ring.poly_ring
            return tuple(
                monomial(R, m) for m in monomials_of_degree(len(self.variables), limits.relative_precision)
            )
        return self.relations

    def validate(self, limits: ComputeLimits = DEFAULT_LIMITS) -> None:
        """Relations vanish at 0 and cut out a finite quotient in the U variables."""
        if self.kind is not CoeffKind.ARTINIAN_QUOTIENT:
            return
        for i, h in enumerate(self.relations, start=1):
            if constant_term(h):
                raise InvalidInputError(f"relation {i} ({format_poly(h)}) does not vanish at 0")
        qd = quotient_dimension(self.relations, limits=limits)
        if not qd.finite:
            raise InvalidInputError(
                f"the relations are not primary to (U): no pure power of {qd.witness}"
            )

    def algebra(self, limits: ComputeLimits = DEFAULT_LIMITS) -> ArtinAlgebra | None:
        """The finite k-algebra A (truncated for k[U]); None for a field."""
        if self.kind is CoeffKind.FIELD:
            return None
        return build_quotient(self.truncated_relations(limits), limits=limits)

    def is_gorenstein(self, limits: ComputeLimits = DEFAULT_LIMITS) -> bool:
        A = self.algebra(limits)
        return A is None or socle(A).is_simple

    def __str__(self) -> str:
        if self.kind is CoeffKind.FIELD:
            return str(self.field)
        base = str(self.ring)
        if self.apolar is not None:
            return f"{base}/apolar({format_poly(self.apolar)})"
        if self.relations:
            return f"{base}/({', '.join(format_poly(h) for h in self.relations)})"
        return base


def _differentiate(p: PolyElement, alpha: Monomial) -> PolyElement:
    gens = p.ring.gens
    for x, e in zip(gens, alpha):
        for _ in range(e):
            p = p.diff(x)
            if not p:
                return p
    return p


def apolar_coefficient_ring(
    uring: Ring,
    delta: PolyElement,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> CoeffRingSpec:
    """k[[U]]/Ann(delta) with U acting on delta by differentiation.

    Ann(delta) contains every monomial of degree deg(delta) + 1; below that it
    is the kernel of h -> h(d/dU) delta on polynomials of degree <= deg(delta).
    The quotient is Gorenstein with a one-dimensional socle.
    """
    if not delta:
        raise InvalidInputError("apolar(...) needs a nonzero polynomial")
    if uring.field.characteristic:
        raise InvalidInputError("apolar coefficient rings need characteristic 0")
    R = uring.poly_ring
    q = uring.n
    top = total_degree(delta)
    inputs = monomials_below(q, top + 1)
    rows = {m: i for i, m in enumerate(inputs)}
    columns = []
    for alpha in inputs:
        image = _differentiate(delta, alpha)
        col = [R.domain.zero] * len(inputs)
        for m, c in image.items():
            col[rows[m]] = c
        columns.append(col)
    kernel = linalg.nullspace(linalg.from_columns(columns, R.domain, len(inputs)))
    relations = [R.from_dict({inputs[i]: c for i, c in enumerate(v) if c}) for v in kernel]
    relations.extend(monomial(R, m) for m in monomials_of_degree(q, top + 1))
    spec = CoeffRingSpec(uring.field, uring.variables, tuple(relations), apolar=delta)
    spec.validate(limits=limits)
    logger.debug("apolar ring of %s: %d relations", format_poly(delta), len(relations))
    return spec


# -- flattening ------------------------------------------------------------------------------

def _x_variables(ambient: PolyRing, A: CoeffRingSpec) -> tuple[str, ...]:
    coeff = set(A.variables)
    return tuple(name for name in variable_names(ambient) if name not in coeff)


def flatten(
    F: Sequence[PolyElement],
    A: CoeffRingSpec,
    truncate_domain: bool = False,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> tuple[PolyElement, ...]:
    """F followed by the relations of A mapped into the ring of F."""
    ambient = F[0].ring
    relations = A.truncated_relations(limits) if truncate_domain else A.relations
    return tuple(F) + tuple(embed(h, ambient) for h in relations)


def specialize(p: PolyElement, A: CoeffRingSpec) -> PolyElement:
    """p with the coefficient variables set to 0, in the ring of the X variables."""
    x_ring = Ring(_x_variables(p.ring, A), Field.of(p.ring.domain))
    return restrict(p, x_ring.poly_ring)


def relative_member(
    g: PolyElement,
    F: Sequence[PolyElement],
    A: CoeffRingSpec,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> tuple[bool, MembershipCertificate]:
    """g in (F) A[[X]], decided in the flattened ideal (F) + (H) of k[[U, X]]."""
    return ideal_member(g, flatten(F, A), limits=limits)


@dataclass(frozen=True)
class RelativeQuotient:
    """P+ = k[[X, U]]/I+ with the lifted A-basis and the freeness verdict."""
    coefficient: CoeffRingSpec
    generators: tuple[PolyElement, ...]
    algebra: ArtinAlgebra
    coefficient_basis: tuple[PolyElement, ...]
    a_basis: tuple[PolyElement, ...]
    free: bool
    precision: int | None = None
    change_of_basis: DomainMatrix | None = field(default=None, repr=False, compare=False)

    @property
    def rank(self) -> int:
        return len(self.a_basis)

    def matrix_over_A(self, g: PolyElement) -> list[list[PolyElement]]:
        """Entry (i, j): the coefficient in A of the i-th basis element in g * e_j."""
        if not self.free:
            raise InvalidInputError("P is not free over A")
        P = self.algebra
        a = len(self.coefficient_basis)
        ring = P.ring
        out = [[ring.zero] * self.rank for _ in range(self.rank)]
        for j, e in enumerate(self.a_basis):
            coords = linalg.matvec(self.change_of_basis, P.coordinates(g * e))
            for i in range(self.rank):
                entry = ring.zero
                for k, u in enumerate(self.coefficient_basis):
                    c = coords[i * a + k]
                    if c:
                        entry += u * c
                out[i][j] = entry
        return out


def relative_quotient(
    F: Sequence[PolyElement],
    A: CoeffRingSpec,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> RelativeQuotient:
    """Flattened quotient with the A-basis lifted from a basis of P/m_A P.

    P is free over A exactly when dim_k P+ = rank * dim_k A and the products
    of the lifted basis with the basis of A span P+.
    """
    F = tuple(F)
    ambient = F[0].ring
    flat = flatten(F, A, truncate_domain=True, limits=limits)
    basis = standard_basis(flat, limits=limits)
    qd = quotient_dimension(flat, basis=basis, limits=limits)
    if not qd.finite:
        raise InvalidInputError(f"the flattened quotient is infinite (no pure power of {qd.witness})")
    P = build_quotient(flat, basis=basis, limits=limits)
    specialized = [specialize(f, A) for f in F]
    fibre = quotient_dimension(specialized, limits=limits)
    x_names = _x_variables(ambient, A)
    a_basis = tuple(embed(monomial(specialized[0].ring, m), ambient) for m in fibre.standard_monomials)
    A_alg = A.algebra(limits)
    if A_alg is None:
        coefficient_basis: tuple[PolyElement, ...] = (ambient.one,)
    else:
        coefficient_basis = tuple(embed(b, ambient) for b in A_alg.basis_elements)
    products = [P.coordinates(e * u) for e in a_basis for u in coefficient_basis]
    change = linalg.from_columns(products, P.domain, P.dim)
    free = len(products) == P.dim and linalg.is_invertible(change)
    logger.debug(
        "relative quotient over %s: dim %d, rank %d over A of dim %d, free=%s, X=%s",
        A, P.dim, len(a_basis), len(coefficient_basis), free, list(x_names),
    )
    return RelativeQuotient(
        coefficient=A,
        generators=flat,
        algebra=P,
        coefficient_basis=coefficient_basis,
        a_basis=a_basis,
        free=free,
        precision=limits.relative_precision if A.kind is CoeffKind.DOMAIN_POLYNOMIAL else None,
        change_of_basis=linalg.inverse(change) if free else None,
    )


def trace_over_A(
    F: Sequence[PolyElement],
    A: CoeffRingSpec,
    g: PolyElement,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> RelativeTrace:
    """Tr_{P/A}(g) as a polynomial in U supported on the basis of A."""
    rq = relative_quotient(F, A, limits=limits)
    if not rq.free:
        raise InvalidInputError(
            f"not free: dim {rq.algebra.dim} over k is not rank {rq.rank} times dim {len(rq.coefficient_basis)} of A"
        )
    matrix = rq.matrix_over_A(g)
    trace = g.ring.zero
    for i in range(rq.rank):
        trace += matrix[i][i]
    return RelativeTrace(element=g, trace=trace, rank=rq.rank, precision=rq.precision)


def _jacobian_over_A(F: Sequence[PolyElement], A: CoeffRingSpec) -> PolyElement:
    ambient = F[0].ring
    names = variable_names(ambient)
    x_positions = [i for i, name in enumerate(names) if name not in set(A.variables)]
    return jacobian_data(F, variables=x_positions).det


def _fibre_rank(F: Sequence[PolyElement], A: CoeffRingSpec, limits: ComputeLimits) -> int | None:
    qd = quotient_dimension([specialize(f, A) for f in F], limits=limits)
    return qd.dim if qd.finite else None


def _radical_power(
    w: PolyElement,
    flat: Sequence[PolyElement],
    basis: StandardBasis,
    limits: ComputeLimits,
) -> int:
    power = w
    for k in range(1, limits.radical_cap + 1):
        if ideal_member(power, flat, basis=basis, limits=limits)[0]:
            return k
        power = power * w
    raise InvalidInputError(
        f"witness {format_poly(w)} has no power w^k in I with k <= {limits.radical_cap}"
    )


def theorem31_check(
    F: Sequence[PolyElement],
    A: CoeffRingSpec,
    radical_witnesses: Sequence[PolyElement],
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> RadicalVerdict:
    """J * sqrt(I) in I and J not in I.

    Asserted when A is a field or k[U] and P has a rank over A that is nonzero
    in k; reported without assertion for an Artinian A.
    """
    F = tuple(F)
    flat = flatten(F, A)
    basis = standard_basis(flat, limits=limits)
    J = _jacobian_over_A(F, A)
    p = characteristic(J)
    checks = []
    for w in radical_witnesses:
        k = _radical_power(w, flat, basis, limits)
        member, _ = ideal_member(J * w, flat, basis=basis, limits=limits)
        checks.append(WitnessCheck(witness=w, power=k, jw_in_ideal=member))
    j_member, _ = ideal_member(J, flat, basis=basis, limits=limits)
    rank = _fibre_rank(F, A, limits)
    applicable = rank is not None and (p == 0 or rank % p != 0)
    holds = all(c.jw_in_ideal for c in checks) and not j_member
    asserted = A.is_domain and applicable
    if asserted and not holds:
        failing = [format_poly(c.witness) for c in checks if not c.jw_in_ideal]
        raise InvariantViolation(
            f"J={format_poly(J)}: J in I is {j_member}, J*w not in I for {failing}"
        )
    if not applicable:
        outcome = Outcome.NOT_APPLICABLE
    else:
        outcome = Outcome.OBSERVED if holds else Outcome.NOT_OBSERVED
    return RadicalVerdict(
        coefficient_kind=A.kind.value,
        asserted=asserted,
        jacobian=J,
        witnesses=tuple(checks),
        jacobian_in_ideal=j_member,
        rank=rank,
        outcome=outcome,
    )


def theorem33_probe(
    F: Sequence[PolyElement],
    A: CoeffRingSpec,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> NonArtinianReport:
    """Whether J lies in I when R/I is not Artinian, for Artinian Gorenstein A.

    Never asserts for an Artinian A. Field coefficients go through
    :func:`jacobian_test`, which does assert.
    """
    F = tuple(F)
    if A.kind is CoeffKind.DOMAIN_POLYNOMIAL:
        raise InvalidInputError("the non-Artinian probe needs a field or an Artinian coefficient ring")
    if A.kind is CoeffKind.FIELD:
        verdict = jacobian_test(F, limits=limits)
        artinian = verdict.dim_finite
        if verdict.char_caveat:
            equivalence = Outcome.NOT_APPLICABLE
        else:
            equivalence = Outcome.OBSERVED
        non_artinian = Outcome.NOT_APPLICABLE if artinian else (
            Outcome.OBSERVED if verdict.jacobian_in_ideal else Outcome.NOT_OBSERVED
        )
        return NonArtinianReport(
            coefficient_kind=A.kind.value,
            artinian=artinian,
            jacobian=verdict.jacobian,
            jacobian_in_ideal=verdict.jacobian_in_ideal,
            non_artinian_outcome=non_artinian,
            equivalence_outcome=equivalence,
            note=verdict.char_caveat,
        )
    if A.field.characteristic:
        raise InvalidInputError("the non-Artinian probe needs characteristic 0")
    if not A.is_gorenstein(limits):
        raise InvalidInputError(f"the coefficient ring {A} is not Gorenstein (its socle is not simple)")
    flat = flatten(F, A)
    basis = standard_basis(flat, limits=limits)
    artinian = quotient_dimension(flat, basis=basis, limits=limits).finite
    J = _jacobian_over_A(F, A)
    member, _ = ideal_member(J, flat, basis=basis, limits=limits)
    if artinian:
        non_artinian = Outcome.NOT_APPLICABLE
    else:
        non_artinian = Outcome.OBSERVED if member else Outcome.NOT_OBSERVED
    equivalence = Outcome.OBSERVED if (not artinian) == member else Outcome.NOT_OBSERVED
    note = None
    if Outcome.NOT_OBSERVED in (non_artinian, equivalence):
        note = (
            f"R/I is {'Artinian' if artinian else 'not Artinian'} "
            f"and J={format_poly(J)} is {'in' if member else 'not in'} I"
        )
    logger.debug("non-Artinian probe over %s: %s / %s", A, non_artinian.value, equivalence.value)
    return NonArtinianReport(
        coefficient_kind=A.kind.value,
        artinian=artinian,
        jacobian=J,
        jacobian_in_ideal=member,
        non_artinian_outcome=non_artinian,
        equivalence_outcome=equivalence,
        note=note,
    )


def specialized_trace(
    F: Sequence[PolyElement],
    A: CoeffRingSpec,
    g: PolyElement,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> Any:
    """Tr(p_g) of the system with U = 0, over the residue field."""
    specialized = [specialize(f, A) for f in F]
    return trace_residue(build_quotient(specialized, limits=limits), specialize(g, A))
