"""Exact integer and rational matrix helpers.

Matrices are plain lists of rows.  Entries are ``int`` or ``Fraction``; nothing
here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import List, Sequence, Tuple

Matrix = List[List[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(M: Sequence[Sequence]) -> list:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> list:
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence], v: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in A]


def gcd_list(values) -> int:
    g = 0
    for v in values:
        g = gcd(g, int(v))
    return g


def primitive(v: Sequence[int]) -> List[int]:
    """Divide an integer vector by the gcd of its entries."""
    g = gcd_list(v)
    if g == 0:
        return list(v)
    return [x // g for x in v]


def _echelon(M: Sequence[Sequence]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form over Q; returns (rows, pivot columns)."""
    if all(type(x) is int for row in M for x in row):
        return _echelon_int(M)
    A = [[Fraction(x) for x in row] for row in M]
    pivots: List[int] = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = 1 / A[r][c]
        A[r] = [x * inv for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[r])]
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    return A, pivots


def _echelon_int(M: Sequence[Sequence[int]]) -> Tuple[List[List[Fraction]], List[int]]:
    # fraction-free elimination on integer rows, normalized only at the end
    A = [list(row) for row in M]
    pivots: List[int] = []
    r = 0
    ncols = len(A[0]) if A else 0
    for c in range(ncols):
        p = next((i for i in range(r, len(A)) if A[i][c] != 0), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        pr = A[r]
        a = pr[c]
        for i in range(len(A)):
            if i != r and A[i][c] != 0:
                f = A[i][c]
                row = [a * x - f * y for x, y in zip(A[i], pr)]
                g = gcd_list(row)
                A[i] = [x // g for x in row] if g > 1 else row
        pivots.append(c)
        r += 1
        if r == len(A):
            break
    out = []
    for i, row in enumerate(A):
        if i < len(pivots):
            d = row[pivots[i]]
            out.append([Fraction(x, d) for x in row])
        else:
            out.append([Fraction(x) for x in row])
    return out, pivots


def rank(M: Sequence[Sequence]) -> int:
    if not M or not M[0]:
        return 0
    return len(_echelon(M)[1])


def det(M: Sequence[Sequence]):
    """Determinant by fraction-free Bareiss elimination (exact for ints)."""
    n = len(M)
    if n == 0:
        return 1
    if n == 1:
        return M[0][0]
    if n == 2:
        return M[0][0] * M[1][1] - M[0][1] * M[1][0]
    if n == 3:
        (a, b, c), (d, e, f), (g, h, i) = M
        return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            p = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if p is None:
                return 0
            A[k], A[p] = A[p], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = A[i][j] * A[k][k] - A[i][k] * A[k][j]
                A[i][j] = num / prev if isinstance(num, Fraction) else num // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def solve(A: Sequence[Sequence], b: Sequence) -> List[Fraction]:
    """Unique solution of a square nonsingular system over Q."""
    n = len(A)
    aug = [list(row) + [b[i]] for i, row in enumerate(A)]
    R, piv = _echelon(aug)
    if piv[:n] != list(range(n)) or len(piv) > n:
        raise ValueError("singular or inconsistent system")
    return [R[i][n] for i in range(n)]


def inverse(A: Sequence[Sequence]) -> List[List[Fraction]]:
    n = len(A)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(A)]
    R, piv = _echelon(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("singular matrix")
    return [row[n:] for row in R[:n]]


def nullspace(M: Sequence[Sequence]) -> List[List[int]]:
    """Basis of the rational right kernel of M, each vector scaled to a primitive integer vector."""
    ncols = len(M[0])
    R, piv = _echelon(M)
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, c in enumerate(piv):
            v[c] = -R[i][f]
        den = 1
        for x in v:
            den = den * x.denominator // gcd(den, x.denominator)
        basis.append(primitive([int(x * den) for x in v]))
    return basis


def smith_normal_form(M: Sequence[Sequence[int]]) -> Tuple[Matrix, Matrix, Matrix]:
    """Smith normal form ``U @ M @ V == D`` with U, V unimodular.

    The diagonal of D is non-negative and satisfies d_1 | d_2 | ... .
    """
    U, D, V, _ = smith_normal_form_with_inverse(M)
    return U, D, V


def smith_normal_form_with_inverse(M: Sequence[Sequence[int]]):
    """As :func:`smith_normal_form` but also returns ``V^{-1}``."""
    m = len(M)
    n = len(M[0]) if m else 0
    A = [[int(x) for x in row] for row in M]
    U = identity(m)
    V = identity(n)
    Vi = identity(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(dst, src, q):  # row_dst += q * row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col_dst += q * col_src
        for row in A:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]
        Vi[src] = [a - q * b for a, b in zip(Vi[src], Vi[dst])]

    for t in range(min(m, n)):
        while True:
            cands = [(abs(A[i][j]), i, j) for i in range(t, m) for j in range(t, n) if A[i][j]]
            if not cands:
                return U, A, V, Vi
            _, i, j = min(cands)
            if i != t:
                swap_rows(t, i)
            if j != t:
                swap_cols(t, j)
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // A[t][t]))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // A[t][t]))
                    clean = clean and A[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if A[i][j] % A[t][t]),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
            U[t] = [-x for x in U[t]]
    return U, A, V, Vi


def invariant_factors(M: Sequence[Sequence[int]]) -> List[int]:
    """Nonzero diagonal entries of the Smith normal form."""
    _, D, _ = smith_normal_form(M)
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0)) if D[i][i]]


def saturated_row_basis(M: Sequence[Sequence[int]]) -> List[List[int]]:
    """Integer basis of (row space of M) intersected with Z^n."""
    _, D, _, Vi = smith_normal_form_with_inverse(M)
    r = len(invariant_factors(M))
    return [list(Vi[i]) for i in range(r)]


def charpoly(M: Sequence[Sequence]) -> List:
    """Coefficients of det(t*I - M), highest degree first.

    Reduction to upper Hessenberg form over Q followed by the usual
    three-term recurrence.  Returned entries are ints when integral.
    """
    n = len(M)
    H = [[Fraction(x) for x in row] for row in M]
    for k in range(1, n - 1):
        p = next((i for i in range(k, n) if H[i][k - 1] != 0), None)
        if p is None:
            continue
        if p != k:
            H[k], H[p] = H[p], H[k]
            for row in H:
                row[k], row[p] = row[p], row[k]
        for i in range(k + 1, n):
            if H[i][k - 1] == 0:
                continue
            f = H[i][k - 1] / H[k][k - 1]
            H[i] = [a - f * b for a, b in zip(H[i], H[k])]
            for row in H:
                row[k] += f * row[i]
    # p_m as coefficient lists, lowest degree first
    polys = [[Fraction(1)]]
    for m in range(1, n + 1):
        prev = polys[m - 1]
        cur = [Fraction(0)] + prev  # t * p_{m-1}
        for i, c in enumerate(prev):
            cur[i] -= H[m - 1][m - 1] * c
        prod = Fraction(1)
        for i in range(m - 1, 0, -1):
            prod *= H[i][i - 1]
            coeff = H[i - 1][m - 1] * prod
            if coeff:
                for d, c in enumerate(polys[i - 1]):
                    cur[d] -= coeff * c
        polys.append(cur)
    out = [int(c) if c.denominator == 1 else c for c in reversed(polys[n])]
    return out
