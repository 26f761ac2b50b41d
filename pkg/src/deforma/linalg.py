"""Exact rational matrix routines.

Matrices are lists of rows, entries are ``fractions.Fraction``.  Everything
here is dense and deterministic: pivoting is always "leftmost column, first
usable row", so identical inputs give identical outputs.
"""

from __future__ import annotations

from fractions import Fraction

Q = Fraction

Vector = list[Fraction]
Matrix = list[list[Fraction]]


def zeros(rows: int, cols: int) -> Matrix:
    return [[Q(0)] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Q(1)
    return m


def copy(a: Matrix) -> Matrix:
    return [row[:] for row in a]


def shape(a: Matrix) -> tuple[int, int]:
    return (len(a), len(a[0]) if a else 0)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    n, k = shape(a)
    k2, m = shape(b)
    if not a or not b:
        # empty matrices carry no column count; the product is empty or zero
        return zeros(n, m)
    if k != k2:
        raise ValueError(f"shape mismatch: {n}x{k} @ {k2}x{m}")
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if c:
                bt = b[t]
                for j in range(m):
                    if bt[j]:
                        oi[j] += c * bt[j]
    return out


def matvec(a: Matrix, v: Vector) -> Vector:
    n, k = shape(a)
    if n == 0:
        return []
    if k != len(v):
        raise ValueError(f"shape mismatch: {n}x{k} @ vec {len(v)}")
    return [sum((a[i][t] * v[t] for t in range(k) if v[t]), Q(0)) for i in range(n)]


def add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(c: Fraction, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def transpose(a: Matrix) -> Matrix:
    n, m = shape(a)
    return [[a[i][j] for i in range(n)] for j in range(m)]


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def rref(a: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = copy(a)
    rows, cols = shape(m)
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pivot = next((i for i in range(r, rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = Q(1) / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


def nullspace(a: Matrix) -> list[Vector]:
    """Basis of the kernel, one vector per free column, deterministic order."""
    rows, cols = shape(a)
    red, pivots = rref(a)
    pivot_set = set(pivots)
    basis: list[Vector] = []
    for free in range(cols):
        if free in pivot_set:
            continue
        v = [Q(0)] * cols
        v[free] = Q(1)
        for r, pc in enumerate(pivots):
            v[pc] = -red[r][free]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Vector) -> Vector | None:
    """One solution of a x = b, or None if inconsistent.

    Free variables are set to zero (deterministic particular solution).
    """
    rows, cols = shape(a)
    if rows != len(b):
        raise ValueError("rhs length mismatch")
    aug = [a[i][:] + [b[i]] for i in range(rows)]
    red, pivots = rref(aug)
    if cols in pivots:
        return None
    x = [Q(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def column_space_basis(a: Matrix) -> list[Vector]:
    """Deterministic basis of the column space (the pivot columns of a)."""
    _, pivots = rref(a)
    at = transpose(a)
    return [at[c][:] for c in pivots]


def columns_matrix(vectors: list[Vector], dim: int) -> Matrix:
    """Stack vectors as columns of a dim x len(vectors) matrix."""
    m = zeros(dim, len(vectors))
    for j, v in enumerate(vectors):
        if len(v) != dim:
            raise ValueError("vector length mismatch")
        for i in range(dim):
            m[i][j] = v[i]
    return m


def in_span(vectors: list[Vector], v: Vector) -> bool:
    if not vectors:
        return all(not x for x in v)
    return solve(columns_matrix(vectors, len(v)), v) is not None


def extend_to_complement(span: list[Vector], dim: int) -> list[int]:
    """Indices of standard basis vectors completing ``span`` to all of K^dim.

    Chosen greedily in index order, so the result is deterministic.
    """
    chosen: list[int] = []
    current = [v[:] for v in span]
    for i in range(dim):
        e = [Q(0)] * dim
        e[i] = Q(1)
        if not in_span(current, e):
            current.append(e)
            chosen.append(i)
    return chosen
