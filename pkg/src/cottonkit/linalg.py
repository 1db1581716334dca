"""Small exact linear algebra over Fractions.

Everything here works on lists of lists of Fractions and is sized for the
3x3 / small-n matrices this toolkit handles; no pivoting heuristics needed
because arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd

Matrix = list[list[Fraction]]
Vector = list[Fraction]


def mat(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]


def mat_vec(m: Matrix, v) -> Vector:
    return [sum((row[j] * Fraction(v[j]) for j in range(len(v))), Fraction(0))
            for row in m]


def dot(u, v) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))


def bilinear(m: Matrix, u, v) -> Fraction:
    return dot(mat_vec(m, v), u)


def det(m: Matrix) -> Fraction:
    """Determinant by fraction-free elimination on a copy."""
    n = len(m)
    a = [row[:] for row in m]
    sign = 1
    result = Fraction(1)
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            sign = -sign
        pivot = a[col][col]
        result *= pivot
        for r in range(col + 1, n):
            factor = a[r][col] / pivot
            for c in range(col, n):
                a[r][c] -= factor * a[col][c]
    return result * sign


def rref(m: Matrix) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot column list."""
    a = [row[:] for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        pivot = a[r][c]
        a[r] = [x / pivot for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c] != 0:
                factor = a[i][c]
                a[i] = [x - factor * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


def nullspace(m: Matrix) -> list[Vector]:
    """Basis of {x : m x = 0}, exact, one canonicalized vector per free column."""
    if not m:
        return []
    cols = len(m[0])
    reduced, pivots = rref(m)
    free = [c for c in range(cols) if c not in pivots]
    basis: list[Vector] = []
    for fc in free:
        vec = [Fraction(0)] * cols
        vec[fc] = Fraction(1)
        for r, pc in enumerate(pivots):
            vec[pc] = -reduced[r][fc]
        basis.append(canonicalize(vec))
    return basis


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def in_span(basis: list[Vector], target) -> bool:
    """Exact membership of target in the span of basis vectors."""
    target = [Fraction(x) for x in target]
    if all(x == 0 for x in target):
        return True
    if not basis:
        return False
    stacked = [list(v) for v in basis]
    return rank(stacked) == rank(stacked + [target])


def solve(m: Matrix, rhs) -> Vector | None:
    """One exact solution of m x = rhs, or None if inconsistent."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    augmented = [list(m[i]) + [Fraction(rhs[i])] for i in range(rows)]
    reduced, pivots = rref(augmented)
    if cols in pivots:
        return None
    x = [Fraction(0)] * cols
    for r, pc in enumerate(pivots):
        x[pc] = reduced[r][cols]
    return x


def canonicalize(vec) -> Vector:
    """Scale to coprime integers with positive leading nonzero component."""
    vec = [Fraction(x) for x in vec]
    nonzero = [x for x in vec if x != 0]
    if not nonzero:
        return vec
    denom_lcm = 1
    for x in nonzero:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [x * denom_lcm for x in vec]
    num_gcd = 0
    for x in ints:
        num_gcd = gcd(num_gcd, abs(x.numerator))
    scaled = [x / num_gcd for x in ints]
    lead = next(x for x in scaled if x != 0)
    if lead < 0:
        scaled = [-x for x in scaled]
    return scaled


def signature(m: Matrix) -> tuple[int, int, int]:
    """(positives, negatives, zeros) of a symmetric matrix.

    Exact symmetric Gaussian reduction (congruence diagonalization): no
    eigenvalue solving, Sylvester-invariant.  Zero-diagonal blocks are handled
    by the classic add-row-and-column trick, valid in characteristic 0.
    """
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    pos = neg = zero = 0
    for k in range(n):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][i] != 0), None)
            if swap is not None:
                # congruence by the (k, swap) permutation
                a[k], a[swap] = a[swap], a[k]
                for row in a:
                    row[k], row[swap] = row[swap], row[k]
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    zero += 1
                    continue
                # add row/col j into k: new a[k][k] = 2 a[k][j] != 0
                for c in range(n):
                    a[k][c] += a[j][c]
                for r in range(n):
                    a[r][k] += a[r][j]
        pivot = a[k][k]
        if pivot > 0:
            pos += 1
        else:
            neg += 1
        for r in range(k + 1, n):
            factor = a[r][k] / pivot
            if factor == 0:
                continue
            for c in range(n):
                a[r][c] -= factor * a[k][c]
            for rr in range(n):
                a[rr][r] -= factor * a[rr][k]
    return pos, neg, zero
