"""Integer lattice utilities: Hermite reduction, unimodular completions,
Smith normal form.  Used for quotient-lattice coordinates of star fans and
for resolving non-unimodular cones.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def _unimodular_row_reduce(mat: list[list[int]]) -> tuple[list[list[int]], list[list[int]], list[int]]:
    """Bring ``mat`` to row-Hermite form H = U * mat with U unimodular.

    Returns (U, H, pivot_rows-by-column list).  Pivots are positive; entries
    above each pivot are reduced modulo the pivot.
    """
    rows = len(mat)
    cols = len(mat[0]) if rows else 0
    h = [row[:] for row in mat]
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        # gcd elimination below row r in column c
        while True:
            nz = [i for i in range(r, rows) if h[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(h[i][c]))
            h[r], h[i0] = h[i0], h[r]
            u[r], u[i0] = u[i0], u[r]
            done = True
            for i in range(r + 1, rows):
                if h[i][c] != 0:
                    q = h[i][c] // h[r][c]
                    h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[r])]
                    if h[i][c] != 0:
                        done = False
            if done:
                break
        if r < rows and h[r][c] != 0:
            if h[r][c] < 0:
                h[r] = [-a for a in h[r]]
                u[r] = [-a for a in u[r]]
            for i in range(r):
                q = h[i][c] // h[r][c]
                if q:
                    h[i] = [a - q * b for a, b in zip(h[i], h[r])]
                    u[i] = [a - q * b for a, b in zip(u[i], u[r])]
            pivots.append(r)
            r += 1
            if r == rows:
                break
    return u, h, pivots


def quotient_projection(generators: Sequence[Sequence[int]], n: int) -> tuple[list[list[int]], list[list[int]]]:
    """Coordinates for the quotient lattice Z^n / <generators>.

    The generators must form part of a lattice basis (they do for unimodular
    cones).  Returns (proj, duals): ``proj`` is a (n-k) x n integer matrix
    whose rows give coordinates on the quotient; ``duals`` is a k x n matrix
    whose row i is an integral functional taking value 1 on generator i and 0
    on the other generators.
    """
    k = len(generators)
    if k == 0:
        ident = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        return ident, []
    mat = [[generators[j][i] for j in range(k)] for i in range(n)]  # n x k
    u, h, pivots = _unimodular_row_reduce(mat)
    if len(pivots) != k or any(h[i][j] != (1 if i == j else 0) for i in range(k) for j in range(k)):
        raise ValueError("generators do not form part of a lattice basis")
    duals = [u[i] for i in range(k)]
    proj = [u[i] for i in range(k, n)]
    return proj, duals


def smith_normal_form(mat: Sequence[Sequence[int]]):
    """Smith normal form D = U * mat * V with U, V unimodular.

    Returns (U, D, V) as integer row-lists.
    """
    a = [list(map(int, row)) for row in mat]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [[1 if i == j else 0 for j in range(rows)] for i in range(rows)]
    v = [[1 if i == j else 0 for j in range(cols)] for i in range(cols)]

    def row_op(i, j, q):
        a[i] = [x - q * y for x, y in zip(a[i], a[j])]
        u[i] = [x - q * y for x, y in zip(u[i], u[j])]

    def col_op(i, j, q):
        for r in range(rows):
            a[r][i] -= q * a[r][j]
        for r in range(cols):
            v[r][i] -= q * v[r][j]

    t = 0
    while t < min(rows, cols):
        # find a nonzero pivot in the trailing block
        pivot = next(
            ((i, j) for i in range(t, rows) for j in range(t, cols) if a[i][j] != 0), None
        )
        if pivot is None:
            break
        i0, j0 = pivot
        a[t], a[i0] = a[i0], a[t]
        u[t], u[i0] = u[i0], u[t]
        for r in range(rows):
            a[r][t], a[r][j0] = a[r][j0], a[r][t]
        for r in range(cols):
            v[r][t], v[r][j0] = v[r][j0], v[r][t]
        while True:
            reduced = True
            for i in range(t + 1, rows):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    row_op(i, t, q)
                    if a[i][t] != 0:
                        a[t], a[i] = a[i], a[t]
                        u[t], u[i] = u[i], u[t]
                        reduced = False
            for j in range(t + 1, cols):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    col_op(j, t, q)
                    if a[t][j] != 0:
                        for r in range(rows):
                            a[r][t], a[r][j] = a[r][j], a[r][t]
                        for r in range(cols):
                            v[r][t], v[r][j] = v[r][j], v[r][t]
                        reduced = False
            if reduced:
                break
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    # enforce divisibility d_i | d_{i+1}
    changed = True
    while changed:
        changed = False
        for i in range(t - 1):
            if a[i][i] != 0 and a[i + 1][i + 1] % a[i][i] != 0:
                # standard 2x2 fix: add column i+1 to column i and re-reduce
                for r in range(rows):
                    a[r][i] += a[r][i + 1]
                for r in range(cols):
                    v[r][i] += v[r][i + 1]
                g = _gcd2x2_fix(a, u, v, i, rows, cols)
                changed = changed or g
    return u, a, v


def _gcd2x2_fix(a, u, v, t, rows, cols):
    moved = False
    while True:
        reduced = True
        for i in range(t + 1, rows):
            if a[i][t] != 0:
                q = a[i][t] // a[t][t]
                a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                if a[i][t] != 0:
                    a[t], a[i] = a[i], a[t]
                    u[t], u[i] = u[i], u[t]
                    reduced = False
                    moved = True
        for j in range(t + 1, cols):
            if a[t][j] != 0:
                q = a[t][j] // a[t][t]
                for r in range(rows):
                    a[r][j] -= q * a[r][t]
                for r in range(cols):
                    v[r][j] -= q * v[r][t]
                if a[t][j] != 0:
                    for r in range(rows):
                        a[r][t], a[r][j] = a[r][j], a[r][t]
                    for r in range(cols):
                        v[r][t], v[r][j] = v[r][j], v[r][t]
                    reduced = False
                    moved = True
        if reduced:
            return moved


def interior_lattice_witness(generators: Sequence[Sequence[int]]) -> tuple[int, ...] | None:
    """A lattice point in the half-open parallelepiped of a simplicial cone
    that is not in the Z-span of the generators, or None if the cone is
    already unimodular.  Used to drive multiplicity-reducing blow-ups.
    """
    k = len(generators)
    n = len(generators[0])
    mat = [[generators[j][i] for j in range(k)] for i in range(n)]  # n x k
    _, d, v = smith_normal_form(mat)
    idx = next((i for i in range(k) if d[i][i] not in (0, 1)), None)
    if idx is None:
        return None
    di = d[idx][idx]
    # c = V e_idx / d_idx gives A c = U^{-1} e_idx; reduce c into [0, 1)
    c = [Fraction(v[r][idx], di) for r in range(k)]
    c = [x - (x.numerator // x.denominator) for x in c]  # fractional parts
    point = [Fraction(0)] * n
    for j in range(k):
        if c[j]:
            for i in range(n):
                point[i] += c[j] * generators[j][i]
    assert any(p != 0 for p in point)
    assert all(p.denominator == 1 for p in point)
    return tuple(int(p) for p in point)
