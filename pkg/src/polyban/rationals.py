"""Exact rational scalars and small dense linear algebra over them.

Every quantity in the library is a rational number; no floating point
appears anywhere. gmpy2.mpq is used when available (much faster), with
fractions.Fraction as a drop-in fallback. Both normalize eagerly and
serialize as "p/q" / "p".
"""

from __future__ import annotations

from typing import Iterable, Sequence

try:
    from gmpy2 import mpq as Q  # type: ignore
except ImportError:  # pragma: no cover - gmpy2 present in normal installs
    from fractions import Fraction as Q  # type: ignore

ZERO = Q(0)
ONE = Q(1)

Vec = tuple  # tuple of Q
Mat = tuple  # tuple of rows, each a tuple of Q


def rat(value) -> "Q":
    """Coerce ints, strings like '-3/4', or rationals to Q."""
    if isinstance(value, str):
        return Q(value.strip())
    return Q(value)


def rat_str(q) -> str:
    return str(q)


def vec(entries: Iterable) -> Vec:
    return tuple(rat(e) for e in entries)


def mat(rows: Iterable[Iterable]) -> Mat:
    return tuple(vec(r) for r in rows)


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def identity(n: int) -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def vec_add(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v: Vec) -> Vec:
    return tuple(c * a for a in v)


def vec_neg(v: Vec) -> Vec:
    return tuple(-a for a in v)


def dot(u: Sequence, v: Sequence):
    s = ZERO
    for a, b in zip(u, v):
        s += a * b
    return s


def mat_vec(m: Mat, v: Vec) -> Vec:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    if a and b:
        assert len(a[0]) == len(b)
    bt = transpose(b)
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def mat_add(a: Mat, b: Mat) -> Mat:
    return tuple(vec_add(r, s) for r, s in zip(a, b))


def mat_sub(a: Mat, b: Mat) -> Mat:
    return tuple(vec_sub(r, s) for r, s in zip(a, b))


def mat_scale(c, a: Mat) -> Mat:
    return tuple(vec_scale(c, r) for r in a)


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def hstack(a: Mat, b: Mat) -> Mat:
    if not a:
        return b
    if not b:
        return a
    return tuple(ra + rb for ra, rb in zip(a, b))


def kron(a: Mat, b: Mat) -> Mat:
    """Kronecker product (row-major block layout)."""
    if not a or not b:
        return ()
    return tuple(
        tuple(a[i][j] * b[k][l] for j in range(len(a[0])) for l in range(len(b[0])))
        for i in range(len(a))
        for k in range(len(b))
    )


def rref(rows: Iterable[Sequence]):
    """Reduced row echelon form. Returns (rows, pivot_columns).

    Zero rows are dropped; the returned rows are a basis of the row space.
    """
    m = [list(vec(r)) for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(m)):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        inv = ONE / m[r][c]
        m[r] = [inv * x for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return [tuple(row) for row in m[:r]], pivots


def rank(rows: Iterable[Sequence]) -> int:
    return len(rref(rows)[0])


def nullspace(m: Mat):
    """Basis of {x : m @ x = 0} as a list of vectors."""
    if not m:
        return []
    ncols = len(m[0])
    rows, pivots = rref(m)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        x = [ZERO] * ncols
        x[fc] = ONE
        for row, pc in zip(rows, pivots):
            x[pc] = -row[fc]
        basis.append(tuple(x))
    return basis


def solve(a: Mat, b: Vec):
    """One exact solution of a @ x = b, or None if inconsistent.

    Free coordinates are set to zero.
    """
    if not a:
        return None if any(x != 0 for x in b) else ()
    ncols = len(a[0])
    aug = [list(row) + [bb] for row, bb in zip(a, b)]
    rows, pivots = rref(aug)
    x = [ZERO] * ncols
    for row, pc in zip(rows, pivots):
        if pc == ncols:
            return None  # pivot in the constant column: inconsistent
        # with free variables at zero, the rref row reads x[pc] = row[-1]
        x[pc] = row[ncols]
    return tuple(x)


def column_space_pivots(columns: Sequence[Vec]):
    """Indices of a maximal linearly independent subset of the given columns."""
    _, pivots = rref(transpose(mat(columns)) if columns else [])
    return pivots
