"""Exact rational linear programming by the simplex method.

Problems are solved in the computational standard form

    maximize c.x   subject to   A x = b,  x >= 0,

with a two-phase simplex using Bland's pivoting rule, so every run terminates
and every verdict (optimal value, unboundedness, infeasibility) is an exact
certificate.  A convenience layer accepts free variables and inequality rows.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

Q = Fraction

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass
class LPResult:
    status: str
    x: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None
    # Farkas certificate for infeasibility: y with y.A <= 0 (componentwise)
    # and y.b > 0, proving Ax = b, x >= 0 has no solution.
    farkas: Optional[tuple[Fraction, ...]] = None
    # Dual optimal solution y (A^T y >= c, value = y.b) when status == OPTIMAL.
    dual: Optional[tuple[Fraction, ...]] = None


def _simplex_phase(tab, basis, m, n):
    """Run Bland simplex on tableau rows 0..m-1 with objective in row m.

    tab has m+1 rows and n+1 columns (last column = rhs).  Maximization with
    reduced costs stored negated in the objective row (standard tableau).
    Returns "optimal" or "unbounded" (entering column recorded on tab).
    """
    while True:
        enter = next((j for j in range(n) if tab[m][j] < 0), None)
        if enter is None:
            return OPTIMAL, None
        best = None
        for i in range(m):
            if tab[i][enter] > 0:
                ratio = tab[i][n] / tab[i][enter]
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED, enter
        _, leave = best
        piv = tab[leave][enter]
        tab[leave] = [e / piv for e in tab[leave]]
        for i in range(m + 1):
            if i != leave and tab[i][enter] != 0:
                f = tab[i][enter]
                tab[i] = [a - f * b for a, b in zip(tab[i], tab[leave])]
        basis[leave] = enter


def solve_standard(A: Sequence[Sequence], b: Sequence, c: Sequence) -> LPResult:
    """maximize c.x s.t. A x = b, x >= 0 (all data rational)."""
    m = len(A)
    n = len(A[0]) if m else len(c)
    A = [[Q(e) for e in row] for row in A]
    b = [Q(e) for e in b]
    c = [Q(e) for e in c]
    # normalize to b >= 0
    for i in range(m):
        if b[i] < 0:
            A[i] = [-e for e in A[i]]
            b[i] = -b[i]

    # phase 1: artificial variables, maximize -sum(artificials)
    total = n + m
    tab = [A[i] + [Q(1) if j == i else Q(0) for j in range(m)] + [b[i]] for i in range(m)]
    basis = [n + i for i in range(m)]
    obj = [Q(0)] * (total + 1)
    for j in range(n, total):
        obj[j] = Q(1)
    tab.append(obj)
    # price out the artificial basis
    for i in range(m):
        tab[m] = [a - bb for a, bb in zip(tab[m], tab[i])]
    _simplex_phase(tab, basis, m, total)
    phase1_value = -tab[m][total]
    if phase1_value > 0:
        # infeasible; read the Farkas vector off the final objective row
        # (final row = initial row + lambda^T [A|I|b]; y = -lambda)
        y = tuple(1 - tab[m][n + i] for i in range(m))
        # verify exactly against the (sign-normalized) data
        assert sum(yi * bi for yi, bi in zip(y, b)) > 0
        for j in range(n):
            assert sum(y[i] * A[i][j] for i in range(m)) <= 0
        return LPResult(INFEASIBLE, farkas=y)

    # drive leftover artificial variables out of the basis
    for i in range(m):
        if basis[i] >= n:
            enter = next((j for j in range(n) if tab[i][j] != 0), None)
            if enter is None:
                continue  # redundant row
            piv = tab[i][enter]
            tab[i] = [e / piv for e in tab[i]]
            for k in range(m + 1):
                if k != i and tab[k][enter] != 0:
                    f = tab[k][enter]
                    tab[k] = [a - f * bb for a, bb in zip(tab[k], tab[i])]
            basis[i] = enter

    # phase 2
    cols = [j for j in range(n)] + [total]
    tab2 = [[tab[i][j] for j in cols] for i in range(m)]
    obj2 = [-cj for cj in c] + [Q(0)]
    tab2.append(obj2)
    basis2 = basis[:]
    for i in range(m):
        if basis2[i] < n and tab2[m][basis2[i]] != 0:
            f = tab2[m][basis2[i]]
            tab2[m] = [a - f * bb for a, bb in zip(tab2[m], tab2[i])]
    status, _ = _simplex_phase(tab2, basis2, m, n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Q(0)] * n
    for i in range(m):
        if basis2[i] < n:
            x[basis2[i]] = tab2[i][n]
    value = sum(ci * xi for ci, xi in zip(c, x))
    return LPResult(OPTIMAL, x=tuple(x), value=value)


@dataclass
class LinearProgram:
    """maximize c.x over free rational variables subject to:

    - equality rows:   a.x == rhs
    - inequality rows: a.x >= rhs

    Free variables are handled by the x = x+ - x- split before calling the
    standard-form solver.
    """

    n_vars: int
    eq_rows: list[tuple[tuple[Fraction, ...], Fraction]] = field(default_factory=list)
    ge_rows: list[tuple[tuple[Fraction, ...], Fraction]] = field(default_factory=list)
    objective: Optional[tuple[Fraction, ...]] = None

    def add_eq(self, coeffs: Sequence, rhs) -> None:
        self.eq_rows.append((tuple(Q(e) for e in coeffs), Q(rhs)))

    def add_ge(self, coeffs: Sequence, rhs) -> None:
        self.ge_rows.append((tuple(Q(e) for e in coeffs), Q(rhs)))

    def set_objective(self, coeffs: Sequence) -> None:
        self.objective = tuple(Q(e) for e in coeffs)

    def solve(self) -> LPResult:
        n = self.n_vars
        c = self.objective or tuple(Q(0) for _ in range(n))
        # variables: x+ (n), x- (n), slacks for >= rows
        n_ge = len(self.ge_rows)
        A, b = [], []
        for coeffs, rhs in self.eq_rows:
            A.append(list(coeffs) + [-e for e in coeffs] + [Q(0)] * n_ge)
            b.append(rhs)
        for k, (coeffs, rhs) in enumerate(self.ge_rows):
            slack = [Q(0)] * n_ge
            slack[k] = Q(-1)
            A.append(list(coeffs) + [-e for e in coeffs] + slack)
            b.append(rhs)
        cc = list(c) + [-e for e in c] + [Q(0)] * n_ge
        res = solve_standard(A, b, cc)
        if res.status != OPTIMAL:
            return res
        x = tuple(res.x[i] - res.x[n + i] for i in range(n))
        return LPResult(OPTIMAL, x=x, value=res.value, dual=res.dual)


def max_margin(
    n_vars: int,
    eqs: Sequence[tuple[Sequence, object]],
    ges: Sequence[tuple[Sequence, object]],
    cap: object = 1,
) -> tuple[Fraction, Optional[tuple[Fraction, ...]]]:
    """Maximize t subject to eq rows (in the n_vars variables) and rows
    ``a.x - t >= rhs``; t is capped above by ``cap`` so the LP is bounded.

    Returns (optimal t, optimizing x).  The margin system is always feasible
    (t can go to -infinity), so the result is never infeasible.
    """
    lp = LinearProgram(n_vars + 1)
    for coeffs, rhs in eqs:
        lp.add_eq(list(coeffs) + [0], rhs)
    for coeffs, rhs in ges:
        lp.add_ge(list(coeffs) + [-1], rhs)
    lp.add_ge([0] * n_vars + [-1], -Q(cap))  # t <= cap
    lp.set_objective([0] * n_vars + [1])
    res = lp.solve()
    assert res.status == OPTIMAL, res.status
    return res.x[n_vars], res.x[:n_vars]
