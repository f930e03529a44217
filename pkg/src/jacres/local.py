"""Standard bases in the local ring k[[X]] for polynomial generators.

The order is the anti-graded reverse lexicographic order: 1 is the largest
monomial, lower total degree beats higher degree, and ties are broken
reverse-lexicographically. Reduction is Mora's weak normal form followed by a
reduction of the tail; every answer carries an exact certificate
``u*(g - r) = sum(a_i*f_i)`` with ``u(0) != 0``.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations_with_replacement

from sympy.polys.monomials import monomial_div, monomial_divides, monomial_lcm
from sympy.polys.rings import PolyElement, PolyRing

from .config import DEFAULT_LIMITS, ComputeLimits
from .errors import InconclusiveError, InvalidInputError, InvariantViolation
from .poly import (
    Monomial,
    constant_term,
    format_poly,
    monomial,
    monomials_of_degree,
    order,
    total_degree,
    truncate,
)

logger = logging.getLogger(__name__)


class LocalOrder:
    """Anti-graded reverse lexicographic order on exponent vectors."""

    @staticmethod
    def key(m: Monomial) -> tuple[int, tuple[int, ...]]:
        """Sort key; the larger key is the larger monomial."""
        return -sum(m), tuple(-a for a in reversed(m))

    @classmethod
    def leading_monomial(cls, p: PolyElement) -> Monomial:
        if not p:
            raise InvalidInputError("the zero polynomial has no leading monomial")
        return max(p.itermonoms(), key=cls.key)

    @classmethod
    def leading_term(cls, p: PolyElement) -> tuple[Monomial, object]:
        m = cls.leading_monomial(p)
        return m, p[m]

    @classmethod
    def ecart(cls, p: PolyElement) -> int:
        """Largest degree minus the degree of the leading monomial."""
        return total_degree(p) - sum(cls.leading_monomial(p))

    @classmethod
    def sorted_desc(cls, monomials: Sequence[Monomial]) -> list[Monomial]:
        return sorted(monomials, key=cls.key, reverse=True)


def minimal_monomials(monomials: Sequence[Monomial]) -> tuple[Monomial, ...]:
    """Minimal generators of the monomial ideal spanned by ``monomials``."""
    unique = sorted(set(monomials), key=lambda m: (sum(m), m))
    kept: list[Monomial] = []
    for m in unique:
        if not any(monomial_divides(k, m) for k in kept):
            kept.append(m)
    return tuple(sorted(kept, key=LocalOrder.key, reverse=True))


@dataclass(frozen=True)
class MembershipCertificate:
    """``unit * (element - remainder) == sum(cofactors[i] * generators[i])``."""
    element: PolyElement
    generators: tuple[PolyElement, ...]
    unit: PolyElement
    cofactors: tuple[PolyElement, ...]
    remainder: PolyElement

    @property
    def is_member(self) -> bool:
        return not self.remainder

    def verify(self) -> bool:
        """Re-multiply the identity exactly and check the unit."""
        if not constant_term(self.unit):
            return False
        rhs = self.element.ring.zero
        for a, f in zip(self.cofactors, self.generators):
            if a:
                rhs += a * f
        return self.unit * (self.element - self.remainder) == rhs


@dataclass(frozen=True)
class StandardBasis:
    """Standard basis G of (F) k[[X]] with ``units[k] * G[k] == sum(cofactors[k][i] * F[i])``."""
    generators: tuple[PolyElement, ...]
    elements: tuple[PolyElement, ...]
    units: tuple[PolyElement, ...]
    cofactors: tuple[tuple[PolyElement, ...], ...]

    @property
    def ring(self) -> PolyRing:
        return self.generators[0].ring

    @cached_property
    def leading(self) -> tuple[Monomial, ...]:
        return tuple(LocalOrder.leading_monomial(g) for g in self.elements)

    @cached_property
    def leading_monomials(self) -> tuple[Monomial, ...]:
        """Minimal generators of the leading ideal."""
        return minimal_monomials(self.leading)

    @property
    def is_unit_ideal(self) -> bool:
        return self.ring.zero_monom in self.leading_monomials

    @property
    def min_order(self) -> int:
        """Order of the ideal: least degree of a leading monomial."""
        return min(sum(m) for m in self.leading_monomials)

    @cached_property
    def containment_bound(self) -> int | None:
        """One more than the largest degree of a standard monomial; None for an infinite quotient."""
        if self.is_unit_ideal:
            return 0
        powers = pure_powers(self.leading_monomials, self.ring.ngens)
        if any(p is None for p in powers):
            return None
        return max(sum(m) for m in standard_monomials_in_box(self.leading_monomials, powers)) + 1

    def is_reducible(self, m: Monomial) -> bool:
        return any(monomial_divides(lm, m) for lm in self.leading_monomials)

    def verify(self) -> bool:
        for g, u, row in zip(self.elements, self.units, self.cofactors):
            if not constant_term(u):
                return False
            rhs = self.ring.zero
            for a, f in zip(row, self.generators):
                if a:
                    rhs += a * f
            if u * g != rhs:
                return False
        return True


@dataclass
class _Reducer:
    """An entry of Mora's set T: ``unit * g == sum(coeffs * G) + poly`` for earlier h."""
    poly: PolyElement
    lm: Monomial
    ecart: int
    unit: PolyElement | None = None
    coeffs: list[PolyElement] | None = None
    basis_index: int | None = None


@dataclass
class _WeakNormalForm:
    """``unit * g == sum(coeffs[k] * G[k]) + remainder``."""
    remainder: PolyElement
    unit: PolyElement
    coeffs: list[PolyElement]
    steps: int = 0


def _scaled_quotient(ring: PolyRing, lt_h: tuple[Monomial, object], lt_t: tuple[Monomial, object]) -> PolyElement:
    m = monomial_div(lt_h[0], lt_t[0])
    return ring.term_new(m, lt_h[1] / lt_t[1])


def _weak_normal_form(
    g: PolyElement,
    elements: Sequence[PolyElement],
    leading: Sequence[Monomial],
    limits: ComputeLimits,
) -> _WeakNormalForm:
    """Mora's weak normal form of g with respect to ``elements``."""
    ring = g.ring
    zero = ring.zero
    T = [
        _Reducer(poly=p, lm=lm, ecart=LocalOrder.ecart(p), basis_index=k)
        for k, (p, lm) in enumerate(zip(elements, leading))
    ]
    h = g
    unit = ring.one
    coeffs = [zero] * len(elements)
    steps = 0
    while h:
        lt_h = LocalOrder.leading_term(h)
        candidates = [i for i, t in enumerate(T) if monomial_divides(t.lm, lt_h[0])]
        if not candidates:
            break
        steps += 1
        if steps > limits.max_steps:
            raise InconclusiveError(
                f"normal form did not finish within {limits.max_steps} reduction steps",
                cap="max_steps",
            )
        chosen = min(candidates, key=lambda i: (T[i].ecart, i))
        t = T[chosen]
        ecart_h = total_degree(h) - sum(lt_h[0])
        if t.ecart > ecart_h:
            T.append(_Reducer(poly=h, lm=lt_h[0], ecart=ecart_h, unit=unit, coeffs=list(coeffs)))
        m = _scaled_quotient(ring, lt_h, (t.lm, t.poly[t.lm]))
        h = h - m * t.poly
        if t.basis_index is not None:
            coeffs[t.basis_index] += m
        else:
            unit = unit - m * t.unit
            coeffs = [a - m * b if b else a for a, b in zip(coeffs, t.coeffs)]
    return _WeakNormalForm(remainder=h, unit=unit, coeffs=coeffs, steps=steps)


def _unit_product(units: Sequence[PolyElement], ring: PolyRing) -> PolyElement:
    product = ring.one
    for u in units:
        if u != ring.one:
            product *= u
    return product


def _lift_to_generators(
    coeffs: Sequence[PolyElement],
    basis: StandardBasis,
) -> tuple[PolyElement, list[PolyElement]]:
    """Rewrite ``sum(coeffs[k] * G[k])`` over F.

    Returns ``(W, c)`` with ``W * sum(coeffs[k] * G[k]) == sum(c[i] * F[i])``, where W
    is the product of the basis units involved.
    """
    ring = basis.ring
    involved = [k for k, a in enumerate(coeffs) if a]
    W = _unit_product([basis.units[k] for k in involved], ring)
    lifted = [ring.zero] * len(basis.generators)
    for k in involved:
        W_k = _unit_product([basis.units[l] for l in involved if l != k], ring)
        factor = coeffs[k] * W_k
        for i, A in enumerate(basis.cofactors[k]):
            if A:
                lifted[i] += factor * A
    return W, lifted


def standard_basis(
    F: Sequence[PolyElement],
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> StandardBasis:
    """Standard basis of the ideal generated by F in k[[X]]."""
    generators = tuple(F)
    if not generators:
        raise InvalidInputError("expected at least one generator")
    ring = generators[0].ring
    if any(f.ring != ring for f in generators):
        raise InvalidInputError("generators belong to different rings")
    if not any(generators):
        raise InvalidInputError("all generators are zero")
    zero = ring.zero
    k = len(generators)
    elements: list[PolyElement] = []
    units: list[PolyElement] = []
    cofactors: list[tuple[PolyElement, ...]] = []
    for i, f in enumerate(generators):
        if f:
            elements.append(f)
            units.append(ring.one)
            cofactors.append(tuple(ring.one if j == i else zero for j in range(k)))
    leading = [LocalOrder.leading_monomial(g) for g in elements]
    pairs = [(i, j) for j in range(len(elements)) for i in range(j)]
    total_steps = 0
    while pairs:
        i, j = pairs.pop(0)
        lt_i = LocalOrder.leading_term(elements[i])
        lt_j = LocalOrder.leading_term(elements[j])
        lcm = monomial_lcm(lt_i[0], lt_j[0])
        m_i = ring.term_new(monomial_div(lcm, lt_i[0]), ring.domain.one / lt_i[1])
        m_j = ring.term_new(monomial_div(lcm, lt_j[0]), ring.domain.one / lt_j[1])
        spoly = m_i * elements[i] - m_j * elements[j]
        current = StandardBasis(generators, tuple(elements), tuple(units), tuple(cofactors))
        nf = _weak_normal_form(spoly, elements, leading, limits)
        total_steps += nf.steps + 1
        if total_steps > limits.max_steps:
            raise InconclusiveError(
                f"standard basis did not finish within {limits.max_steps} steps", cap="max_steps"
            )
        h = nf.remainder
        if not h:
            continue
        # h = u*m_i*G_i - u*m_j*G_j - sum(a_k*G_k)
        combo = [-a for a in nf.coeffs]
        combo[i] += nf.unit * m_i
        combo[j] -= nf.unit * m_j
        W, lifted = _lift_to_generators(combo, current)
        new_index = len(elements)
        elements.append(h)
        units.append(W)
        cofactors.append(tuple(lifted))
        leading.append(LocalOrder.leading_monomial(h))
        pairs.extend((p, new_index) for p in range(new_index))
        logger.debug("standard basis: added element %d with leading monomial %s", new_index, leading[-1])
    basis = StandardBasis(generators, tuple(elements), tuple(units), tuple(cofactors))
    logger.debug(
        "standard basis of %d generators: %d elements, leading ideal %s",
        k, len(elements), list(basis.leading_monomials),
    )
    return basis


def _reduce_tail(g: PolyElement, basis: StandardBasis, limits: ComputeLimits) -> PolyElement:
    """g minus an element of I, with no term below the degree bound in the leading ideal.

    With a finite quotient the bound is s and terms of degree >= s are dropped.
    Otherwise members are dropped and every other reducible term is divided out,
    largest first, up to max_degree.
    """
    ring = g.ring
    bound = basis.containment_bound
    finite = bound is not None
    if not finite:
        bound = limits.max_degree + 1
    h = truncate(g, bound) if finite else g
    members: dict[Monomial, bool] = {}
    steps = 0
    while True:
        reducible = [m for m in h.itermonoms() if sum(m) < bound and basis.is_reducible(m)]
        if not reducible:
            break
        steps += 1
        if steps > limits.max_steps:
            raise InconclusiveError(
                f"normal form did not finish within {limits.max_steps} reduction steps", cap="max_steps"
            )
        t = max(reducible, key=LocalOrder.key)
        c = h[t]
        if not finite:
            if t not in members:
                members[t] = not _weak_normal_form(monomial(ring, t), basis.elements, basis.leading, limits).remainder
            if members[t]:
                h -= ring.term_new(t, c)
                continue
        k = next(i for i, lm in enumerate(basis.leading) if monomial_divides(lm, t))
        G, lm = basis.elements[k], basis.leading[k]
        h -= ring.term_new(monomial_div(t, lm), c / G[lm]) * G
        if finite:
            h = truncate(h, bound)
    if any(basis.is_reducible(m) for m in h.itermonoms()):
        raise InconclusiveError(
            f"the tail of the normal form is still reducible beyond max_degree={limits.max_degree}",
            cap="max_degree",
        )
    return h


def normal_form(
    g: PolyElement,
    basis: StandardBasis,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> tuple[PolyElement, MembershipCertificate]:
    """Normal form of g: no term of the remainder lies in the leading ideal.

    For a finite quotient the remainder is the representative of g supported on
    the standard monomials. The certificate ``u*(g - r) == sum(a_i*f_i)`` is
    expressed over the original generators of the basis.
    """
    if g.ring != basis.ring:
        raise InvalidInputError("polynomial and standard basis belong to different rings")
    remainder = _reduce_tail(g, basis, limits)
    nf = _weak_normal_form(g - remainder, basis.elements, basis.leading, limits)
    if nf.remainder:
        raise InvariantViolation(f"{format_poly(g - remainder)} should lie in the ideal")
    W, lifted = _lift_to_generators(nf.coeffs, basis)
    cert = MembershipCertificate(
        element=g,
        generators=basis.generators,
        unit=W * nf.unit,
        cofactors=tuple(lifted),
        remainder=remainder,
    )
    return remainder, cert


def ideal_member(
    g: PolyElement,
    F: Sequence[PolyElement],
    basis: StandardBasis | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> tuple[bool, MembershipCertificate]:
    """Decide g in (F) k[[X]]; the certificate re-multiplies exactly.

    The weak normal form decides. A non-member carries its normal form, or
    g itself when the tail of the normal form does not end below max_degree.
    """
    if basis is None:
        basis = standard_basis(F, limits=limits)
    if g.ring != basis.ring:
        raise InvalidInputError("polynomial and standard basis belong to different rings")
    nf = _weak_normal_form(g, basis.elements, basis.leading, limits)
    if nf.remainder:
        try:
            _, cert = normal_form(g, basis, limits=limits)
        except InconclusiveError as exc:
            if exc.cap != "max_degree":
                raise
            logger.debug("membership: %s", exc)
            zero = g.ring.zero
            cert = MembershipCertificate(
                element=g,
                generators=basis.generators,
                unit=g.ring.one,
                cofactors=tuple(zero for _ in basis.generators),
                remainder=g,
            )
        return False, cert
    W, lifted = _lift_to_generators(nf.coeffs, basis)
    cert = MembershipCertificate(
        element=g,
        generators=basis.generators,
        unit=W * nf.unit,
        cofactors=tuple(lifted),
        remainder=g.ring.zero,
    )
    return True, cert


@dataclass(frozen=True)
class QuotientDimension:
    """dim_k k[[X]]/I: finite with its standard monomials, or infinite with a witness."""
    finite: bool
    dim: int | None = None
    standard_monomials: tuple[Monomial, ...] = ()
    witness: str | None = None
    leading_monomials: tuple[Monomial, ...] = field(default=(), repr=False)

    @property
    def dim_positive(self) -> bool:
        return not self.finite


def pure_powers(leading: Sequence[Monomial], n: int) -> list[int | None]:
    """Exponent of the pure power of each variable in the leading ideal, or None."""
    out: list[int | None] = []
    for i in range(n):
        exps = [m[i] for m in leading if all(e == 0 for j, e in enumerate(m) if j != i)]
        out.append(min(exps) if exps else None)
    return out


def standard_monomials_in_box(leading: Sequence[Monomial], bounds: Sequence[int]) -> list[Monomial]:
    """Monomials below the box bounds that are not in the leading ideal, largest first."""
    out: list[Monomial] = [()]
    for b in bounds:
        out = [m + (e,) for m in out for e in range(b)]
    kept = [m for m in out if not any(monomial_divides(l, m) for l in leading)]
    return LocalOrder.sorted_desc(kept)


def quotient_dimension(
    F: Sequence[PolyElement],
    basis: StandardBasis | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> QuotientDimension:
    """Finite with the standard monomials iff every variable has a pure power in the leading ideal."""
    if basis is None:
        basis = standard_basis(F, limits=limits)
    ring = basis.ring
    leading = basis.leading_monomials
    if basis.is_unit_ideal:
        return QuotientDimension(finite=True, dim=0, leading_monomials=leading)
    powers = pure_powers(leading, ring.ngens)
    for name, power in zip(ring.symbols, powers):
        if power is None:
            logger.debug("quotient is infinite: no pure power of %s", name)
            return QuotientDimension(finite=False, witness=str(name), leading_monomials=leading)
    monomials = standard_monomials_in_box(leading, powers)
    logger.debug("quotient dimension %d", len(monomials))
    return QuotientDimension(
        finite=True,
        dim=len(monomials),
        standard_monomials=tuple(monomials),
        leading_monomials=leading,
    )


@dataclass(frozen=True)
class IdealOrders:
    """Containment index s (m^s in I) and ord_I(g)."""
    s: int | None
    order: int | float | None = None
    capped: bool = False


def power_generators(F: Sequence[PolyElement], k: int) -> list[PolyElement]:
    """Products of k generators: generators of I^k."""
    nonzero = [f for f in F if f]
    return [
        _product(combo, nonzero[0].ring)
        for combo in combinations_with_replacement(nonzero, k)
    ]


def _product(factors: Sequence[PolyElement], ring: PolyRing) -> PolyElement:
    out = ring.one
    for f in factors:
        out *= f
    return out


def containment_index(
    F: Sequence[PolyElement],
    basis: StandardBasis | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> int:
    """Least s with every degree-s monomial in I; requires a finite quotient.

    s is one more than the largest degree of a standard monomial: the standard
    monomials are independent modulo I, and every monomial of higher degree lies
    in I + m^(d+1), hence in I by Nakayama. The degree-s monomials are checked.
    """
    if basis is None:
        basis = standard_basis(F, limits=limits)
    qd = quotient_dimension(F, basis=basis, limits=limits)
    if not qd.finite:
        raise InvalidInputError(f"the quotient is infinite (no pure power of {qd.witness})")
    if qd.dim == 0:
        return 0
    s = basis.containment_bound
    if s > limits.max_degree:
        raise InconclusiveError(f"containment index exceeds max_degree={limits.max_degree}", cap="max_degree")
    ring = basis.ring
    for exps in monomials_of_degree(ring.ngens, s):
        member, _ = ideal_member(monomial(ring, exps), F, basis=basis, limits=limits)
        if not member:
            raise InconclusiveError(f"monomial {exps} of degree {s} did not reduce to zero")
    return s


def ideal_order(
    g: PolyElement,
    F: Sequence[PolyElement],
    basis: StandardBasis | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
    power_bases: dict[int, StandardBasis] | None = None,
) -> tuple[int | float, bool]:
    """ord_I(g) = largest k <= order_cap with g in I^k; returns (k, capped).

    inf for g == 0. g in I^k forces ord(g) >= k * ord(I), which bounds the search.
    ``power_bases`` caches the standard bases of I^k across calls.
    """
    if not g:
        return math.inf, False
    if basis is None:
        basis = standard_basis(F, limits=limits)
    if basis.is_unit_ideal:
        return limits.order_cap, True
    min_order = basis.min_order
    bound = order(g) // min_order
    best = 0
    for k in range(1, min(bound, limits.order_cap) + 1):
        if k == 1:
            power_basis = basis
        elif power_bases is not None and k in power_bases:
            power_basis = power_bases[k]
        else:
            power_basis = standard_basis(power_generators(F, k), limits=limits)
            if power_bases is not None:
                power_bases[k] = power_basis
        member, _ = ideal_member(g, power_basis.generators, basis=power_basis, limits=limits)
        if not member:
            break
        best = k
    capped = best == limits.order_cap
    logger.debug("ord_I = %s%s", best, " (capped)" if capped else "")
    return best, capped


def ideal_orders(
    F: Sequence[PolyElement],
    g: PolyElement | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> IdealOrders:
    """Containment index of I (None when the quotient is infinite) and ord_I(g)."""
    basis = standard_basis(F, limits=limits)
    qd = quotient_dimension(F, basis=basis, limits=limits)
    s = containment_index(F, basis=basis, limits=limits) if qd.finite else None
    if g is None:
        return IdealOrders(s=s)
    value, capped = ideal_order(g, F, basis=basis, limits=limits)
    return IdealOrders(s=s, order=value, capped=capped)


def unit_inverse(u: PolyElement, precision: int) -> PolyElement:
    """Inverse of a unit of k[[X]] modulo m^precision (truncated geometric series)."""
    c = constant_term(u)
    if not c:
        raise InvalidInputError("not a unit: the constant term is zero")
    ring = u.ring
    c_inv = ring.domain.one / c
    v = ring.one - u * c_inv
    result = ring.one
    power = ring.one
    for _ in range(1, precision):
        power = truncate(power * v, precision)
        if not power:
            break
        result += power
    return truncate(result * c_inv, precision)
