"""Integral closure orders, arc checks, Lojasiewicz certificates and the Hessian criterion.

The asymptotic Samuel function of u with respect to I is exact for monomial
ideals (Newton polyhedron) and bracketed otherwise: ``ord_I(u^m)/m`` bounds it
from below and ``ord(u o phi) / min_i ord(f_i o phi)`` along any arc bounds it
from above.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from fractions import Fraction
from itertools import product

from sympy.polys.rings import PolyElement

from .config import DEFAULT_LIMITS, ComputeLimits
from .errors import InvalidInputError, InvariantViolation
from .local import (
    StandardBasis,
    containment_index,
    ideal_member,
    ideal_order,
    quotient_dimension,
    standard_basis,
)
from .models import ArcReport, HessianVerdict, LojaCase, LojaCertificate, SamuelBounds
from .newton import (
    NewtonPolyhedron,
    is_integrally_closed,
    is_monomial_ideal,
    monomial_exponents,
    newton_polyhedron,
    samuel_polynomial,
)
from .poly import (
    Arc,
    Field,
    Ring,
    characteristic,
    compose_arc,
    constant_term,
    format_poly,
    hessian_det,
    hessian_rank0,
    is_term,
    jacobian_data,
    linear_part,
    order,
    restrict,
)

logger = logging.getLogger(__name__)


def _ratio(numerator: float | int, denominator: float | int) -> Fraction | float | None:
    if denominator == math.inf or denominator == 0:
        return None
    if numerator == math.inf:
        return math.inf
    return Fraction(int(numerator), int(denominator))


def arc_report(
    F: Sequence[PolyElement],
    arc: Arc,
    u: PolyElement | None = None,
) -> ArcReport:
    """Orders of the f_i and of u along the arc (u defaults to the Jacobian).

    ``cramer_ok`` checks ``phi_j' * J(phi) == sum((-1)^(i+j) * D_ij(phi) * (f_i o phi)')``
    exactly for every j; it is None for a non-square system.
    """
    F = tuple(F)
    ring = F[0].ring
    square = len(F) == ring.ngens
    data = jacobian_data(F) if square else None
    if u is None:
        if data is None:
            raise InvalidInputError("the Jacobian needs as many generators as variables")
        u = data.det
    composites = [compose_arc(f, arc) for f in F]
    orders = tuple(o for _, o in composites)
    min_order = min(orders)
    _, u_order = compose_arc(u, arc)
    cramer_ok = None
    if data is not None:
        t = arc.ring.gens[0]
        J_phi, _ = compose_arc(data.det, arc)
        derivatives = [c.diff(t) for c, _ in composites]
        minors = [[compose_arc(data.minors[i][j], arc)[0] for j in range(ring.ngens)] for i in range(len(F))]
        cramer_ok = True
        for j, phi_prime in enumerate(arc.derivative()):
            rhs = arc.ring.zero
            for i in range(len(F)):
                term = minors[i][j] * derivatives[i]
                rhs = rhs + term if (i + j) % 2 == 0 else rhs - term
            if phi_prime * J_phi != rhs:
                cramer_ok = False
                break
    return ArcReport(
        arc=str(arc),
        generator_orders=orders,
        min_order=min_order,
        u_order=u_order,
        ratio=_ratio(u_order, min_order),
        cramer_ok=cramer_ok,
    )


def default_arcs(
    n: int,
    field: Field,
    limits: ComputeLimits = DEFAULT_LIMITS,
    polyhedron: NewtonPolyhedron | None = None,
) -> list[Arc]:
    """Monomial arcs (c_1 t^w_1, ..., c_n t^w_n) with weights up to max_arc_weight.

    The coefficients are fixed and distinct; facet normals of the Newton
    polyhedron are added as weights when one is given.
    """
    p = field.characteristic
    coefficients = [((i + 1) % p or 1) if p else i + 1 for i in range(n)]
    weights: list[tuple[int, ...]] = []
    for w in product(range(1, limits.max_arc_weight + 1), repeat=n):
        if math.gcd(*w) == 1:
            weights.append(tuple(w))
    if polyhedron is not None:
        for facet in polyhedron.facets:
            w = tuple(max(1, x) for x in facet.normal)
            if w not in weights:
                weights.append(w)
    return [Arc.monomial(field, w, coefficients) for w in weights]


def samuel_bounds(
    F: Sequence[PolyElement],
    u: PolyElement,
    arcs: Sequence[Arc] = (),
    mcap: int | None = None,
    basis: StandardBasis | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> SamuelBounds:
    """lower = max over m <= mcap of ord_I(u^m)/m, upper = least arc ratio, exact for monomial I."""
    F = tuple(F)
    mcap = limits.mcap if mcap is None else mcap
    if mcap < 1:
        raise InvalidInputError("mcap must be at least 1")
    if basis is None:
        basis = standard_basis(F, limits=limits)
    if not u:
        return SamuelBounds(lower=math.inf, upper=math.inf, exact=math.inf, arcs_used=len(arcs))
    lower: Fraction = Fraction(0)
    lower_power = None
    power_bases: dict[int, StandardBasis] = {}
    power = u.ring.one
    for m in range(1, mcap + 1):
        power = power * u
        k, _ = ideal_order(power, F, basis=basis, limits=limits, power_bases=power_bases)
        candidate = Fraction(k, m) if k != math.inf else math.inf
        if lower_power is None or candidate > lower:
            lower, lower_power = candidate, m
    upper: Fraction | float = math.inf
    for arc in arcs:
        report = arc_report(F, arc, u=u)
        if report.ratio is not None and report.ratio < upper:
            upper = report.ratio
    exact = None
    if is_monomial_ideal(F):
        exact = samuel_polynomial(newton_polyhedron(F), u)
    if lower > upper:
        raise InvariantViolation(f"Samuel bounds out of order: lower {lower} > upper {upper}")
    if exact is not None and not lower <= exact <= upper:
        raise InvariantViolation(f"exact value {exact} outside the bounds [{lower}, {upper}]")
    logger.debug("samuel bounds for %s: [%s, %s] exact=%s", format_poly(u), lower, upper, exact)
    return SamuelBounds(lower=lower, upper=upper, exact=exact, lower_power=lower_power, arcs_used=len(arcs))


def _coordinate_reduction(F: Sequence[PolyElement], rank0: int) -> tuple[list[int], list[PolyElement], Ring]:
    """Variables eliminated by coordinate generators c*X_j, and the reduced system on the rest."""
    ring = F[0].ring
    n = ring.ngens
    eliminated: dict[int, int] = {}
    for i, f in enumerate(F):
        if is_term(f):
            m = next(iter(f.itermonoms()))
            if sum(m) == 1:
                j = m.index(1)
                if j not in eliminated.values():
                    eliminated[i] = j
    if len(eliminated) != rank0:
        raise InvalidInputError(
            "reduction required: the rank at 0 does not come from coordinate generators"
        )
    names = [str(s) for s in ring.symbols]
    kept = [j for j in range(n) if j not in eliminated.values()]
    reduced_ring = Ring(tuple(names[j] for j in kept), Field.of(ring.domain))
    reduced = [restrict(f, reduced_ring.poly_ring) for i, f in enumerate(F) if i not in eliminated]
    if any(linear_part(g) for g in reduced):
        raise InvalidInputError(
            "reduction required: a remaining generator keeps a linear part after setting the coordinates to 0"
        )
    return sorted(eliminated.values()), reduced, reduced_ring


def loja_certificate(
    F: Sequence[PolyElement],
    arcs: Sequence[Arc] | None = None,
    mcap: int | None = None,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> LojaCertificate:
    """Lower bound theta with J in the closure of I^theta, from the Cramer argument.

    With m the rank of the Jacobian matrix at 0: no statement when n-m <= 1;
    theta = 1 when n-m = 2 (1 + 1/s when every generator has order >= 3);
    theta = 1 + 1/s when n-m >= 3. Rank coming from coordinate generators is
    reduced away first.
    """
    F = tuple(F)
    ring = F[0].ring
    n = ring.ngens
    if characteristic(F[0]) != 0:
        raise InvalidInputError("the Lojasiewicz certificate needs characteristic 0")
    for i, f in enumerate(F, start=1):
        if constant_term(f):
            raise InvalidInputError(f"generator {i} does not vanish at 0")
    data = jacobian_data(F)
    rank0 = data.rank0
    if n - rank0 <= 1:
        return LojaCertificate(
            n=n, rank0=rank0, case=LojaCase.NO_STATEMENT,
            note="no statement when n-m <= 1",
        )
    case = LojaCase.TWO if n - rank0 == 2 else LojaCase.HIGHER
    reduced_vars: tuple[str, ...] = ()
    G = list(F)
    if rank0 > 0:
        eliminated, G, reduced_ring = _coordinate_reduction(F, rank0)
        reduced_vars = tuple(str(ring.symbols[j]) for j in eliminated)
        if jacobian_data(G).rank0 != 0:
            raise InvalidInputError("reduction required: the reduced system has nonzero rank at 0")
    basis = standard_basis(G, limits=limits)
    if not quotient_dimension(G, basis=basis, limits=limits).finite:
        raise InvalidInputError("the ideal is not m-primary")
    s = containment_index(G, basis=basis, limits=limits)
    reduced = jacobian_data(G)
    min_order = min(order(g) for g in G)
    strict = min_order >= 3
    n_reduced = len(G)
    if n_reduced >= 3 or strict:
        theta_lb = 1 + Fraction(1, s)
    else:
        theta_lb = Fraction(1)
    minor_orders = [order(d) for row in reduced.minors for d in row if d]
    theta_refined = None
    if minor_orders:
        delta = min(minor_orders)
        theta_refined = max(Fraction(1), 1 + Fraction(delta - 1, s))
    if arcs is None or rank0 > 0:
        polyhedron = newton_polyhedron(G) if is_monomial_ideal(G) else None
        arcs = default_arcs(n_reduced, Field.of(ring.domain), limits, polyhedron)
    bounds = samuel_bounds(G, reduced.det, arcs, mcap=mcap, basis=basis, limits=limits)
    in_closure = None
    if bounds.lower >= 1 or (bounds.exact is not None and bounds.exact >= 1):
        in_closure = True
    if (bounds.exact is not None and bounds.exact < 1) or bounds.upper < 1:
        raise InvariantViolation(f"J={format_poly(reduced.det)} is not in the integral closure of I")
    for name, theta in (("theta_lb", theta_lb), ("theta_refined", theta_refined)):
        if theta is None:
            continue
        if bounds.exact is not None and theta > bounds.exact:
            raise InvariantViolation(f"{name}={theta} exceeds the exact value {bounds.exact}")
        if theta > bounds.upper:
            raise InvariantViolation(f"{name}={theta} exceeds the arc upper bound {bounds.upper}")
    logger.debug("loja: case %s, s=%d, theta_lb=%s", case.value, s, theta_lb)
    return LojaCertificate(
        n=n,
        rank0=rank0,
        case=case,
        s=s,
        min_order=min_order,
        strict=strict,
        theta_lb=theta_lb,
        theta_refined=theta_refined,
        jacobian_in_closure=in_closure,
        bounds=bounds,
        reduced_variables=reduced_vars,
    )


def hessian_criterion(
    f: PolyElement,
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> HessianVerdict:
    """Isolated singularity iff the Hessian is outside the Jacobian ideal.

    Closedness of the Jacobian ideal is computed only when it is monomial; for
    an isolated singularity it holds exactly for the type z_1^2 + ... + z_n^k,
    i.e. when the Hessian has rank >= n-1 at 0.
    """
    if not f:
        raise InvalidInputError("the zero polynomial has no isolated singularity")
    if characteristic(f) != 0:
        raise InvalidInputError("the Hessian criterion needs characteristic 0")
    if constant_term(f):
        raise InvalidInputError("f must vanish at 0")
    if linear_part(f):
        raise InvalidInputError("f is smooth at 0: its Jacobian ideal is the whole ring")
    ring = f.ring
    gradient = [f.diff(x) for x in ring.gens]
    basis = standard_basis(gradient, limits=limits)
    qd = quotient_dimension(gradient, basis=basis, limits=limits)
    H = hessian_det(f)
    member, _ = ideal_member(H, gradient, basis=basis, limits=limits)
    if qd.finite == member:
        raise InvariantViolation(
            f"isolated is {qd.finite} but the Hessian {format_poly(H)} in the Jacobian ideal is {member}"
        )
    closed = None
    if is_monomial_ideal(gradient):
        closed = is_integrally_closed(monomial_exponents(gradient))
    rank = hessian_rank0(f)
    morse_type = ring.ngens - rank <= 1
    if qd.finite and closed is not None and closed != morse_type:
        raise InvariantViolation(
            f"the Jacobian ideal is {'closed' if closed else 'not closed'} but the Hessian rank at 0 is {rank}"
        )
    return HessianVerdict(
        isolated=qd.finite,
        hessian=H,
        hessian_in_jacobian_ideal=member,
        milnor_number=qd.dim if qd.finite else None,
        jacobian_ideal_closed=closed,
        hessian_rank0=rank,
        morse_type=morse_type,
    )

