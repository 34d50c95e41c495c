"""Dense exact linear algebra over GaussianRational.

Matrices are lists of row lists.  Everything here is exact: pivots are
chosen as the first nonzero entry, division is field division, and the
results carry no rounding.  Sizes stay tiny (a few dozen columns), so
plain Gauss-Jordan is the right tool.
"""

from __future__ import annotations

from .exact import GR_ONE, GR_ZERO, GaussianRational, _as_scalar


def _copy(rows) -> list:
    return [[_as_scalar(x) for x in row] for row in rows]


def rref(rows) -> tuple[list, list]:
    """Reduced row echelon form; returns (matrix, pivot column indices)."""
    m = _copy(rows)
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    row = 0
    for col in range(ncols):
        pivot = next((i for i in range(row, len(m)) if m[i][col]), None)
        if pivot is None:
            continue
        m[row], m[pivot] = m[pivot], m[row]
        inv = m[row][col].inverse()
        m[row] = [x * inv for x in m[row]]
        for i in range(len(m)):
            if i != row and m[i][col]:
                f = m[i][col]
                m[i] = [a - f * b for a, b in zip(m[i], m[row])]
        pivots.append(col)
        row += 1
        if row == len(m):
            break
    return m, pivots


def rank(rows) -> int:
    return len(rref(rows)[1])


def kernel(rows, ncols: int) -> list:
    """Basis of the exact null space, one vector per free column.

    The basis vector for free column f has a 1 in slot f and the
    back-substituted pivot entries elsewhere; vectors are ordered by
    ascending free column (deterministic).
    """
    if not rows:
        return [[GR_ONE if i == j else GR_ZERO for i in range(ncols)] for j in range(ncols)]
    red, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [GR_ZERO] * ncols
        v[f] = GR_ONE
        for prow, pcol in enumerate(pivots):
            v[pcol] = -red[prow][f]
        basis.append(v)
    return basis


def det(rows) -> GaussianRational:
    """Determinant of a square matrix by fraction-exact elimination."""
    m = _copy(rows)
    n = len(m)
    if any(len(row) != n for row in m):
        raise ValueError("determinant needs a square matrix")
    out = GR_ONE
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col]), None)
        if pivot is None:
            return GR_ZERO
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            out = -out
        out = out * m[col][col]
        inv = m[col][col].inverse()
        for i in range(col + 1, n):
            if m[i][col]:
                f = m[i][col] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[col])]
    return out


def matvec(rows, vec) -> list:
    return [sum((a * b for a, b in zip(row, vec)), GR_ZERO) for row in rows]
