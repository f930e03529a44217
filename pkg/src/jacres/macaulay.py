"""Macaulay-matrix oracle, independent of the standard-basis engine.

Rows are the multiples ``m*f_i`` truncated modulo m^N, columns are the
monomials of degree < N listed from the largest to the smallest in the local
order. Everything here is plain exact linear algebra.
"""

from __future__ import annotations

import logging
from collections.abc import Sequence

from sympy.polys.matrices import DomainMatrix
from sympy.polys.rings import PolyElement

from . import linalg
from .config import DEFAULT_LIMITS, ComputeLimits
from .errors import InconclusiveError, InvalidInputError
from .local import LocalOrder
from .poly import Monomial, monomials_below, order, total_degree

logger = logging.getLogger(__name__)


def _columns(n: int, N: int) -> tuple[list[Monomial], dict[Monomial, int]]:
    cols = LocalOrder.sorted_desc(monomials_below(n, N))
    return cols, {m: j for j, m in enumerate(cols)}


def macaulay_matrix(F: Sequence[PolyElement], N: int) -> tuple[DomainMatrix, list[Monomial]]:
    """Sparse matrix of the truncated multiples of F modulo m^N, and its column monomials."""
    if not F:
        raise InvalidInputError("expected at least one generator")
    ring = F[0].ring
    n = ring.ngens
    cols, index = _columns(n, N)
    rows: dict[int, dict[int, object]] = {}
    r = 0
    for f in F:
        if not f or order(f) >= N:
            continue
        for shift in monomials_below(n, N - order(f)):
            entries = {}
            for m, c in f.items():
                image = tuple(a + b for a, b in zip(m, shift))
                if sum(image) < N:
                    entries[index[image]] = c
            if entries:
                rows[r] = entries
                r += 1
    return linalg.sparse(rows, (r, len(cols)), ring.domain), cols


def macaulay_corank(F: Sequence[PolyElement], N: int) -> int:
    """dim_k k[[X]] / (I + m^N)."""
    matrix, cols = macaulay_matrix(F, N)
    return len(cols) - linalg.rank(matrix)


def containment_index(
    F: Sequence[PolyElement],
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> int:
    """Least d with corank(d+1) == corank(d), i.e. m^d in I + m^(d+1), hence m^d in I."""
    previous = macaulay_corank(F, 0)
    for d in range(limits.max_degree + 1):
        current = macaulay_corank(F, d + 1)
        if current == previous:
            logger.debug("macaulay: containment index %d, corank %d", d, current)
            return d
        previous = current
    raise InconclusiveError(
        f"coranks did not stabilise below max_degree={limits.max_degree}; the ideal may not be m-primary",
        cap="max_degree",
    )


def macaulay_dimension(F: Sequence[PolyElement], limits: ComputeLimits = DEFAULT_LIMITS) -> int:
    """dim_k of the quotient by an m-primary ideal, read off the stable corank."""
    s = containment_index(F, limits=limits)
    return macaulay_corank(F, s)


def macaulay_member(
    g: PolyElement,
    F: Sequence[PolyElement],
    limits: ComputeLimits = DEFAULT_LIMITS,
) -> bool:
    """Decide g in I for m-primary I by a rank test modulo m^N, N = s + deg g + 1."""
    if not g:
        return True
    s = containment_index(F, limits=limits)
    N = s + total_degree(g) + 1
    matrix, cols = macaulay_matrix(F, N)
    index = {m: j for j, m in enumerate(cols)}
    vector = [g.ring.domain.zero] * len(cols)
    for m, c in g.items():
        if sum(m) < N:
            vector[index[m]] = c
    return linalg.in_row_span(matrix, vector)


def macaulay_leading_monomials(F: Sequence[PolyElement], N: int) -> set[Monomial]:
    """Leading monomials of degree < N of elements of I, from the pivots of the rref."""
    matrix, cols = macaulay_matrix(F, N)
    _, pivots = linalg.rref(matrix)
    return {cols[j] for j in pivots}
