from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from trophodge.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, max_margin, solve_standard


def test_standard_optimal():
    # max x+y s.t. x+2y+s1=4, 3x+y+s2=6 -> vertex x=8/5, y=6/5
    res = solve_standard([[1, 2, 1, 0], [3, 1, 0, 1]], [4, 6], [1, 1, 0, 0])
    assert res.status == OPTIMAL
    assert res.value == Fraction(14, 5)


def test_standard_infeasible_with_certificate():
    # x1 + x2 = -1 with x >= 0 is infeasible
    res = solve_standard([[1, 1]], [-1], [0, 0])
    assert res.status == INFEASIBLE
    assert res.farkas is not None  # exact verification happens inside


def test_standard_unbounded():
    res = solve_standard([[1, -1]], [0], [1, 0])
    assert res.status == UNBOUNDED


def test_free_variable_lp():
    # max t s.t. a - t >= 0, -a - t >= -2  (so t <= a <= 2 -t, best t = 1)
    lp = LinearProgram(2)
    lp.add_ge([1, -1], 0)
    lp.add_ge([-1, -1], -2)
    lp.set_objective([0, 1])
    res = lp.solve()
    assert res.status == OPTIMAL and res.value == 1


def test_max_margin_square_vertex():
    # separating the origin vertex of the unit square: variables (a, b, c),
    # rows mean a*px + b*py + c - t >= 0; the cap t <= 1 binds
    t, _ = max_margin(
        3,
        eqs=[([0, 0, 1], 0)],
        ges=[([1, 0, 1], 0), ([0, 1, 1], 0), ([1, 1, 1], 0)],
    )
    assert t == 1


def test_max_margin_no_separation():
    # l(x) = a*x with a - t >= 0 and -a - t >= 0 forces t <= 0
    t, _ = max_margin(1, eqs=[], ges=[([1], 0), ([-1], 0)])
    assert t == 0


small = st.integers(min_value=-4, max_value=4)


@given(st.lists(st.tuples(small, small, small), min_size=1, max_size=5))
@settings(max_examples=40, deadline=None)
def test_lp_verdicts_are_certified(rows):
    # max x0 s.t. a*x0 + b*x1 >= r rows; solver output is checked exactly
    lp = LinearProgram(2)
    for a, b, r in rows:
        lp.add_ge([a, b], r)
    lp.add_ge([-1, 0], -3)  # x0 <= 3 keeps it bounded in the objective direction
    lp.set_objective([1, 0])
    res = lp.solve()
    if res.status == OPTIMAL:
        for a, b, r in rows:
            assert a * res.x[0] + b * res.x[1] >= r
        assert res.value == res.x[0]
    else:
        assert res.status in (INFEASIBLE, UNBOUNDED)
