"""Exact linear algebra over QQ and GF(p) on top of sympy's DomainMatrix.

Vectors are plain lists of domain elements. Matrices are DomainMatrix
instances; the sparse constructor is used for Macaulay matrices, the dense
one for the small multiplication and pairing matrices.
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from typing import Any

from sympy.polys.matrices import DomainMatrix

Vector = list[Any]


def dense(rows: Sequence[Sequence[Any]], domain: Any, ncols: int | None = None) -> DomainMatrix:
    """Dense matrix from a list of rows of domain elements."""
    rows = [list(r) for r in rows]
    width = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    return DomainMatrix(rows, (len(rows), width), domain)


def from_columns(columns: Sequence[Sequence[Any]], domain: Any, nrows: int) -> DomainMatrix:
    """Dense matrix whose j-th column is ``columns[j]``."""
    rows = [[col[i] for col in columns] for i in range(nrows)]
    return DomainMatrix(rows, (nrows, len(columns)), domain)


def sparse(
    entries: Mapping[int, Mapping[int, Any]],
    shape: tuple[int, int],
    domain: Any,
) -> DomainMatrix:
    """Sparse matrix from a dict-of-dicts ``{row: {col: value}}`` with no zero values."""
    clean = {i: dict(row) for i, row in entries.items() if row}
    return DomainMatrix(clean, shape, domain)


def identity(n: int, domain: Any) -> DomainMatrix:
    return DomainMatrix.eye(n, domain)


def zeros(n: int, m: int, domain: Any) -> DomainMatrix:
    return DomainMatrix.zeros((n, m), domain)


def to_rows(matrix: DomainMatrix) -> list[list[Any]]:
    """Entries as a list of rows."""
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return [[] for _ in range(rows)]
    return matrix.to_list()


def column(matrix: DomainMatrix, j: int) -> Vector:
    return [row[j] for row in to_rows(matrix)]


def rank(matrix: DomainMatrix) -> int:
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return 0
    return matrix.rank()


def rref(matrix: DomainMatrix) -> tuple[list[list[Any]], tuple[int, ...]]:
    """Reduced row echelon form as rows, and the pivot columns."""
    rows, cols = matrix.shape
    if rows == 0 or cols == 0:
        return [], ()
    reduced, pivots = matrix.rref()
    return to_rows(reduced), tuple(pivots)


def nullspace(matrix: DomainMatrix) -> list[Vector]:
    """Basis of the right kernel, one vector per free column (free entry set to 1)."""
    domain = matrix.domain
    _, cols = matrix.shape
    reduced, pivots = rref(matrix)
    pivot_set = set(pivots)
    basis: list[Vector] = []
    for free in range(cols):
        if free in pivot_set:
            continue
        vec = [domain.zero] * cols
        vec[free] = domain.one
        for row, pivot in zip(reduced, pivots):
            vec[pivot] = -row[free]
        basis.append(vec)
    return basis


def solve(matrix: DomainMatrix, rhs: Sequence[Any]) -> Vector | None:
    """One solution of ``matrix * x = rhs``, or None when the system is inconsistent."""
    domain = matrix.domain
    rows, cols = matrix.shape
    augmented = [list(r) + [rhs[i]] for i, r in enumerate(to_rows(matrix))]
    if rows == 0:
        return [domain.zero] * cols
    reduced, pivots = rref(dense(augmented, domain, cols + 1))
    if cols in pivots:
        return None
    solution = [domain.zero] * cols
    for row, pivot in zip(reduced, pivots):
        solution[pivot] = row[cols]
    return solution


def in_row_span(matrix: DomainMatrix, vector: Sequence[Any]) -> bool:
    """Whether ``vector`` is a linear combination of the rows of ``matrix``."""
    rows, cols = matrix.shape
    if not any(vector):
        return True
    if rows == 0:
        return False
    extended = matrix.vstack(dense([vector], matrix.domain, cols))
    return rank(extended) == rank(matrix)


def trace(matrix: DomainMatrix) -> Any:
    domain = matrix.domain
    total = domain.zero
    for i, row in enumerate(to_rows(matrix)):
        total += row[i]
    return total


def matvec(matrix: DomainMatrix, vector: Sequence[Any]) -> Vector:
    domain = matrix.domain
    out = []
    for row in to_rows(matrix):
        acc = domain.zero
        for a, b in zip(row, vector):
            if a and b:
                acc += a * b
        out.append(acc)
    return out


def is_zero(matrix: DomainMatrix) -> bool:
    return all(not x for row in to_rows(matrix) for x in row)


def is_invertible(matrix: DomainMatrix) -> bool:
    rows, cols = matrix.shape
    return rows == cols and rank(matrix) == rows


def inverse(matrix: DomainMatrix) -> DomainMatrix:
    return matrix.inv()
