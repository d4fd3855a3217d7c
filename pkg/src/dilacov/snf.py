"""Exact integer linear algebra: Smith and Hermite normal forms, kernels.

All arithmetic is done on Python ints, so entry growth is never an issue.
Matrices are lists of rows.
"""

from __future__ import annotations

from math import prod


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(A, B, inner: int | None = None) -> list[list[int]]:
    """Product of two integer matrices given as row lists.

    ``inner`` is only needed when ``A`` has no rows and ``B`` no columns
    cannot be inferred; it is otherwise read off the operands.
    """
    if not A:
        return []
    n_inner = len(A[0]) if inner is None else inner
    if n_inner == 0:
        cols = len(B[0]) if B else 0
        return [[0] * cols for _ in A]
    cols = len(B[0])
    Bt = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, Bt[j])) for j in range(cols)] for row in A]


def matvec(A, x) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A, ncols: int | None = None) -> list[list[int]]:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(c) for c in zip(*A)]


def smith_normal_form(M, ncols: int | None = None):
    """Return ``(S, U, V)`` with ``S == U @ M @ V``.

    ``U`` and ``V`` are unimodular, ``S`` is diagonal with a nonnegative
    divisibility chain ``s1 | s2 | ...`` (zeros last).  ``ncols`` gives the
    column count when ``M`` has no rows.

    >>> smith_normal_form([[4, 0], [0, 6]])[0]
    [[2, 0], [0, 12]]
    """
    A = [[int(x) for x in row] for row in M]
    m = len(A)
    n = len(A[0]) if m else (ncols or 0)
    if ncols is not None and m and len(A[0]) != ncols:
        raise ValueError("column count mismatch")
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        # row_dst += c * row_src
        A[dst] = [a + c * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + c * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, c):
        for row in A:
            row[dst] += c * row[src]
        for row in V:
            row[dst] += c * row[src]

    for t in range(min(m, n)):
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if A[i][j] and (pivot is None or abs(A[i][j]) < abs(A[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            changed = False
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    if A[i][t]:
                        swap_rows(i, t)
                        changed = True
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    if A[t][j]:
                        swap_cols(j, t)
                        changed = True
            if changed:
                continue
            p = A[t][t]
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return A, U, V


def diagonal(S) -> list[int]:
    return [S[i][i] for i in range(min(len(S), len(S[0]) if S else 0))]


def invariant_factors(M, ncols: int | None = None) -> list[int]:
    """Nontrivial invariant factors (entries != 1) of the cokernel of ``M``.

    Zero entries stand for free summands and are kept.
    """
    m = len(M)
    S, _, _ = smith_normal_form(M, ncols)
    d = diagonal(S) if m else []
    d = d + [0] * (m - len(d))
    return [x for x in d if x != 1]


def integer_kernel(M, ncols: int | None = None) -> list[list[int]]:
    """A Z-basis of ``{x : M x = 0}``, returned as a list of column vectors."""
    m = len(M)
    n = len(M[0]) if m else (ncols or 0)
    if m == 0:
        return [[int(i == j) for i in range(n)] for j in range(n)]
    S, _, V = smith_normal_form(M, n)
    rank = sum(1 for x in diagonal(S) if x)
    return [[V[i][j] for i in range(n)] for j in range(rank, n)]


def hermite_rows(vectors, dim: int) -> tuple[tuple[int, ...], ...]:
    """Row Hermite normal form of the lattice spanned by ``vectors``.

    Result rows are upper-echelon with positive pivots, and each entry
    above a pivot lies in ``[0, pivot)``.  The form is unique per lattice.
    """
    rows = [list(map(int, v)) for v in vectors if any(v)]
    r = 0
    for col in range(dim):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][col]]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(rows[i][col]))
            rows[r], rows[i0] = rows[i0], rows[r]
            clean = True
            for i in range(r + 1, len(rows)):
                if rows[i][col]:
                    q = rows[i][col] // rows[r][col]
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
                    if rows[i][col]:
                        clean = False
            if clean:
                break
        if r < len(rows) and rows[r][col]:
            if rows[r][col] < 0:
                rows[r] = [-a for a in rows[r]]
            p = rows[r][col]
            for i in range(r):
                q = rows[i][col] // p
                if q:
                    rows[i] = [a - q * b for a, b in zip(rows[i], rows[r])]
            r += 1
        rows = rows[:r] + [row for row in rows[r:] if any(row)]
    return tuple(tuple(row) for row in rows[:r])


def cokernel_order(M, ncols: int | None = None) -> int:
    """Order of ``Z^m / M Z^n``; 0 when the cokernel is infinite."""
    f = invariant_factors(M, ncols)
    return 0 if 0 in f else prod(f)


def unimodular_inverse(U) -> list[list[int]]:
    """Exact inverse of a square integer matrix with determinant +-1."""
    from fractions import Fraction

    n = len(U)
    A = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(U)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            raise ValueError("matrix is singular")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    out = [[x for x in row[n:]] for row in A]
    if any(x.denominator != 1 for row in out for x in row):
        raise ValueError("matrix is not unimodular")
    return [[int(x) for x in row] for row in out]


def solve_in_lattice(basis_rows, v) -> list[int]:
    """Integer coefficients ``c`` with ``sum c_i * basis_rows[i] == v``.

    ``basis_rows`` must be a square nonsingular basis (e.g. from hermite_rows).
    """
    from fractions import Fraction

    n = len(basis_rows)
    # solve B^T c = v
    A = [[Fraction(basis_rows[j][i]) for j in range(n)] + [Fraction(v[i])] for i in range(n)]
    for c in range(n):
        p = next((r for r in range(c, n) if A[r][c]), None)
        if p is None:
            raise ValueError("basis is singular")
        A[c], A[p] = A[p], A[c]
        piv = A[c][c]
        A[c] = [x / piv for x in A[c]]
        for r in range(n):
            if r != c and A[r][c]:
                f = A[r][c]
                A[r] = [x - f * y for x, y in zip(A[r], A[c])]
    sol = [A[i][n] for i in range(n)]
    if any(x.denominator != 1 for x in sol):
        raise ValueError("vector is not in the lattice")
    return [int(x) for x in sol]
