"""Exact linear algebra over the rationals.

Everything downstream (Chow rings, cohomology ranks, LP certificates,
signatures) is built on the routines here.  Scalars are ``fractions.Fraction``
throughout; there is no floating point anywhere in the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Iterable, Optional, Sequence

Q = Fraction

Vector = tuple[Fraction, ...]


class NotSymmetric(ValueError):
    """Raised when a symmetric-matrix operation receives a non-symmetric input."""


def qvec(entries: Iterable) -> Vector:
    return tuple(Fraction(e) for e in entries)


def dot(u: Sequence[Fraction], v: Sequence[Fraction]) -> Fraction:
    assert len(u) == len(v)
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


def vec_add(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))

def vec_sub(u: Sequence[Fraction], v: Sequence[Fraction]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))

def vec_scale(c, u: Sequence[Fraction]) -> Vector:
    c = Fraction(c)
    return tuple(c * a for a in u)


def is_zero_vector(u: Sequence[Fraction]) -> bool:
    return all(a == 0 for a in u)


def primitive_vector(u: Sequence) -> tuple[int, ...]:
    """Scale a nonzero rational vector to its primitive integer representative.

    The sign is preserved (the result is a positive multiple of the input).
    """
    fr = [Fraction(a) for a in u]
    if all(a == 0 for a in fr):
        raise ValueError("zero vector has no primitive representative")
    denom_lcm = 1
    for a in fr:
        denom_lcm = denom_lcm * a.denominator // gcd(denom_lcm, a.denominator)
    ints = [int(a * denom_lcm) for a in fr]
    g = 0
    for a in ints:
        g = gcd(g, abs(a))
    return tuple(a // g for a in ints)


@dataclass(frozen=True)
class Signature:
    """Sylvester signature (n_plus, n_minus, n_zero) of a symmetric form."""

    n_plus: int
    n_minus: int
    n_zero: int

    @property
    def dimension(self) -> int:
        return self.n_plus + self.n_minus + self.n_zero

    @property
    def index(self) -> int:
        """The signed signature n_plus - n_minus."""
        return self.n_plus - self.n_minus

    def is_positive_definite(self) -> bool:
        return self.n_minus == 0 and self.n_zero == 0


class QMatrix:
    """Immutable dense matrix over Q."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, data: Iterable[Iterable], cols: Optional[int] = None):
        rows = tuple(tuple(Fraction(e) for e in row) for row in data)
        self.data = rows
        self.rows = len(rows)
        self.cols = len(rows[0]) if rows else (cols or 0)
        if any(len(r) != self.cols for r in rows):
            raise ValueError("ragged rows")

    # -- constructors -------------------------------------------------

    @staticmethod
    def identity(n: int) -> "QMatrix":
        return QMatrix([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @staticmethod
    def zero(r: int, c: int) -> "QMatrix":
        return QMatrix([[0] * c for _ in range(r)], cols=c)

    @staticmethod
    def from_columns(cols: Sequence[Sequence]) -> "QMatrix":
        if not cols:
            return QMatrix.zero(0, 0)
        n = len(cols[0])
        return QMatrix([[cols[j][i] for j in range(len(cols))] for i in range(n)])

    # -- basic accessors ----------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i: int) -> Vector:
        return self.data[i]

    def column(self, j: int) -> Vector:
        return tuple(self.data[i][j] for i in range(self.rows))

    def __eq__(self, other) -> bool:
        return isinstance(other, QMatrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        return f"QMatrix({[[str(e) for e in row] for row in self.data]})"

    # -- arithmetic ----------------------------------------------------

    def transpose(self) -> "QMatrix":
        return QMatrix([[self.data[i][j] for i in range(self.rows)] for j in range(self.cols)])

    def __add__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix([vec_add(a, b) for a, b in zip(self.data, other.data)], cols=self.cols)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix([vec_sub(a, b) for a, b in zip(self.data, other.data)], cols=self.cols)

    def __mul__(self, other):
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise ValueError("dimension mismatch")
            cols = [other.column(j) for j in range(other.cols)]
            return QMatrix([[dot(row, col) for col in cols] for row in self.data], cols=other.cols)
        if isinstance(other, (tuple, list)):
            return self.apply(other)
        return QMatrix([[Fraction(other) * e for e in row] for row in self.data])

    __rmul__ = __mul__

    def apply(self, v: Sequence) -> Vector:
        v = qvec(v)
        if len(v) != self.cols:
            raise ValueError("dimension mismatch")
        return tuple(dot(row, v) for row in self.data)

    def stack_rows(self, other: "QMatrix") -> "QMatrix":
        if self.rows and other.rows and self.cols != other.cols:
            raise ValueError("dimension mismatch")
        return QMatrix(list(self.data) + list(other.data))

    def is_symmetric(self) -> bool:
        return self.rows == self.cols and all(
            self.data[i][j] == self.data[j][i] for i in range(self.rows) for j in range(i)
        )

    def is_integral(self) -> bool:
        return all(e.denominator == 1 for row in self.data for e in row)

    # -- elimination ----------------------------------------------------

    def rref(self) -> tuple["QMatrix", tuple[int, ...]]:
        """Reduced row-echelon form and the pivot columns."""
        m = [list(row) for row in self.data]
        pivots = []
        r = 0
        for c in range(self.cols):
            pivot_row = next((i for i in range(r, self.rows) if m[i][c] != 0), None)
            if pivot_row is None:
                continue
            m[r], m[pivot_row] = m[pivot_row], m[r]
            pv = m[r][c]
            m[r] = [e / pv for e in m[r]]
            for i in range(self.rows):
                if i != r and m[i][c] != 0:
                    f = m[i][c]
                    m[i] = [a - f * b for a, b in zip(m[i], m[r])]
            pivots.append(c)
            r += 1
            if r == self.rows:
                break
        return QMatrix(m), tuple(pivots)

    def rank(self) -> int:
        if self.rows == 0 or self.cols == 0:
            return 0
        if self.is_integral():
            return _rank_bareiss([[int(e) for e in row] for row in self.data])
        return len(self.rref()[1])

    def kernel_basis(self) -> list[Vector]:
        """Basis of the right null space; empty iff full column rank."""
        red, pivots = self.rref()
        pivot_set = set(pivots)
        free = [c for c in range(self.cols) if c not in pivot_set]
        basis = []
        for fc in free:
            v = [Fraction(0)] * self.cols
            v[fc] = Fraction(1)
            for r, pc in enumerate(pivots):
                v[pc] = -red.data[r][fc]
            basis.append(tuple(v))
        return basis

    def solve(self, b: Sequence) -> Optional[Vector]:
        """One exact solution of ``self @ x = b``, or None if inconsistent."""
        b = qvec(b)
        if len(b) != self.rows:
            raise ValueError("dimension mismatch")
        aug = QMatrix([list(row) + [bb] for row, bb in zip(self.data, b)] or [[Fraction(0)]])
        if self.rows == 0:
            return tuple(Fraction(0) for _ in range(self.cols))
        red, pivots = aug.rref()
        if self.cols in pivots:
            return None
        x = [Fraction(0)] * self.cols
        for r, pc in enumerate(pivots):
            x[pc] = red.data[r][self.cols]
        return tuple(x)

    def column_space_pivots(self) -> tuple[int, ...]:
        return self.rref()[1]

    def signature(self) -> Signature:
        return signature(self)

    def det(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        m = [list(row) for row in self.data]
        det = Fraction(1)
        for c in range(n):
            pr = next((i for i in range(c, n) if m[i][c] != 0), None)
            if pr is None:
                return Fraction(0)
            if pr != c:
                m[c], m[pr] = m[pr], m[c]
                det = -det
            det *= m[c][c]
            inv = 1 / m[c][c]
            for i in range(c + 1, n):
                if m[i][c] != 0:
                    f = m[i][c] * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[c])]
        return det


def _rank_bareiss(m: list[list[int]]) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    rows, cols = len(m), len(m[0])
    m = [row[:] for row in m]
    prev = 1
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        for i in range(r + 1, rows):
            for j in range(c + 1, cols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == rows:
            break
    return r


def rank(m: QMatrix) -> int:
    return m.rank()


def kernel_basis(m: QMatrix) -> list[Vector]:
    return m.kernel_basis()


def solve(m: QMatrix, b: Sequence) -> Optional[Vector]:
    return m.solve(b)


def signature(q: QMatrix) -> Signature:
    """Sylvester signature of a symmetric rational matrix.

    Symmetric congruence diagonalization with exact pivoting: the largest
    absolute-value diagonal entry is used as pivot; when the remaining
    diagonal vanishes, a hyperbolic 2x2 block is split by an explicit
    congruence (row/column addition).
    """
    if not q.is_symmetric():
        raise NotSymmetric("signature requires a symmetric matrix")
    n = q.rows
    m = [list(row) for row in q.data]
    active = list(range(n))
    n_plus = n_minus = n_zero = 0

    def sym_add(i, j, c):
        # row_i += c*row_j, then col_i += c*col_j
        for k in range(n):
            m[i][k] += c * m[j][k]
        for k in range(n):
            m[k][i] += c * m[k][j]

    while active:
        pivot = max((i for i in active if m[i][i] != 0), key=lambda i: abs(m[i][i]), default=None)
        if pivot is None:
            pair = next(
                ((i, j) for i in active for j in active if i < j and m[i][j] != 0),
                None,
            )
            if pair is None:
                n_zero += len(active)
                break
            i, j = pair
            sym_add(i, j, Fraction(1))  # makes m[i][i] = 2*m[i][j] != 0
            continue
        d = m[pivot][pivot]
        if d > 0:
            n_plus += 1
        else:
            n_minus += 1
        active.remove(pivot)
        for i in active:
            if m[i][pivot] != 0:
                sym_add(i, pivot, -m[i][pivot] / d)
    return Signature(n_plus, n_minus, n_zero)


def _int_minor_det(m: list[list[int]], row_idx, col_idx) -> int:
    """Integer determinant of a square submatrix, by Bareiss."""
    k = len(row_idx)
    sub = [[m[i][j] for j in col_idx] for i in row_idx]
    prev = 1
    sign = 1
    for c in range(k):
        pr = next((i for i in range(c, k) if sub[i][c] != 0), None)
        if pr is None:
            return 0
        if pr != c:
            sub[c], sub[pr] = sub[pr], sub[c]
            sign = -sign
        for i in range(c + 1, k):
            for j in range(c + 1, k):
                sub[i][j] = (sub[c][c] * sub[i][j] - sub[i][c] * sub[c][j]) // prev
            sub[i][c] = 0
        prev = sub[c][c]
    return sign * sub[k - 1][k - 1]


def smith_gcd_minors(m: Sequence[Sequence[int]], k: int) -> int:
    """gcd of all k x k minors of an integer matrix (0 if they all vanish)."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    if k > min(rows, cols):
        raise ValueError("k exceeds matrix dimensions")
    if k == 0:
        return 1
    mm = [[int(e) for e in row] for row in m]
    g = 0
    for ri in combinations(range(rows), k):
        for cj in combinations(range(cols), k):
            g = gcd(g, abs(_int_minor_det(mm, ri, cj)))
            if g == 1:
                return 1
    return g


# -- subspace utilities (used heavily by the cohomology modules) -------


def row_space_basis(vectors: Sequence[Sequence[Fraction]]) -> list[Vector]:
    """A basis of the span of the given vectors (rref rows, canonical)."""
    vecs = [qvec(v) for v in vectors if not is_zero_vector(v)]
    if not vecs:
        return []
    red, pivots = QMatrix(vecs).rref()
    return [red.row(i) for i in range(len(pivots))]


def in_span(vectors: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> bool:
    base = row_space_basis(vectors)
    if not base:
        return is_zero_vector(v)
    return QMatrix(base).transpose().solve(v) is not None


def coordinates_in_basis(basis: Sequence[Sequence[Fraction]], v: Sequence[Fraction]) -> Optional[Vector]:
    """Coordinates of v in the given (independent) spanning set, or None."""
    if not basis:
        return () if is_zero_vector(v) else None
    return QMatrix(basis).transpose().solve(v)


def intersect_row_spaces(a: Sequence[Sequence[Fraction]], b: Sequence[Sequence[Fraction]]) -> list[Vector]:
    """Basis of the intersection of two row spans."""
    ab = row_space_basis(a)
    bb = row_space_basis(b)
    if not ab or not bb:
        return []
    stacked = QMatrix(list(ab) + list(bb)).transpose()
    out = []
    for kv in stacked.kernel_basis():
        coeffs = kv[: len(ab)]
        vec = [Fraction(0)] * len(ab[0])
        for c, w in zip(coeffs, ab):
            vec = [x + c * y for x, y in zip(vec, w)]
        if not is_zero_vector(vec):
            out.append(tuple(vec))
    return row_space_basis(out)
