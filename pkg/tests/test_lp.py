"""Dense two-phase simplex solver."""

import pytest

from frugal.errors import SizeCapError
from frugal.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, LinearProgram, LPResult, solve_lp


def test_single_variable_box():
    lp = LinearProgram(objective=(1.0,), a_ub=((1.0,),), b_ub=(5.0,))
    res = solve_lp(lp)
    assert res.status == OPTIMAL
    assert res.x[0] == pytest.approx(5.0)
    assert res.objective == pytest.approx(5.0)


def test_infeasible():
    # x >= 1 and x <= 0.
    lp = LinearProgram(objective=(1.0,), a_ub=((-1.0,), (1.0,)), b_ub=(-1.0, 0.0))
    assert solve_lp(lp).status == INFEASIBLE


def test_unbounded():
    lp = LinearProgram(objective=(1.0,))
    assert solve_lp(lp).status == UNBOUNDED


def test_diamond_payment_cap_lp():
    # maximize b1 + b3 with b1 >= 1, b3 >= 3, b1 + b3 <= 6
    lp = LinearProgram(
        objective=(1.0, 1.0),
        a_ub=((1.0, 1.0),),
        b_ub=(6.0,),
        lower_bounds=(1.0, 3.0),
    )
    res = solve_lp(lp)
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(6.0)


def test_equality_rows():
    lp = LinearProgram(
        objective=(1.0, 0.0),
        a_ub=((1.0, 0.0),),
        b_ub=(3.0,),
        a_eq=((1.0, 1.0),),
        b_eq=(4.0,),
    )
    res = solve_lp(lp)
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(3.0)
    assert res.x[1] == pytest.approx(1.0)


def test_negative_lower_bounds():
    lp = LinearProgram(
        objective=(-1.0,),
        lower_bounds=(-2.0,),
        a_ub=((1.0,),),
        b_ub=(10.0,),
    )
    res = solve_lp(lp)
    assert res.status == OPTIMAL
    assert res.x[0] == pytest.approx(-2.0)
    assert res.objective == pytest.approx(2.0)


def test_weak_duality_spot_check():
    # maximize 3x + 2y s.t. x + y <= 4, x + 3y <= 6.
    lp = LinearProgram(
        objective=(3.0, 2.0),
        a_ub=((1.0, 1.0), (1.0, 3.0)),
        b_ub=(4.0, 6.0),
    )
    res = solve_lp(lp)
    assert res.status == OPTIMAL
    # y = (3, 0) is dual feasible: A^T y = (3, 3) >= (3, 2); bound b.y = 12.
    assert res.objective <= 12.0 + 1e-9
    assert res.objective == pytest.approx(12.0)


def test_degenerate_cycling_guard():
    # A classic degenerate LP; Bland's rule must terminate.
    lp = LinearProgram(
        objective=(0.75, -150.0, 0.02, -6.0),
        a_ub=(
            (0.25, -60.0, -0.04, 9.0),
            (0.5, -90.0, -0.02, 3.0),
            (0.0, 0.0, 1.0, 0.0),
        ),
        b_ub=(0.0, 0.0, 1.0),
    )
    res = solve_lp(lp)
    assert res.status == OPTIMAL
    assert res.objective == pytest.approx(0.05)


def test_determinism():
    lp = LinearProgram(
        objective=(1.0, 2.0, 0.5),
        a_ub=((1.0, 1.0, 0.0), (0.0, 1.0, 1.0)),
        b_ub=(4.0, 5.0),
        a_eq=((1.0, 0.0, 1.0),),
        b_eq=(3.0,),
    )
    a = solve_lp(lp)
    b = solve_lp(lp)
    assert repr(a) == repr(b)
    assert a.x == b.x


def test_size_caps():
    with pytest.raises(SizeCapError):
        solve_lp(LinearProgram(objective=tuple([1.0] * 501)))


def test_solution_satisfies_constraints():
    lp = LinearProgram(
        objective=(2.0, 1.0),
        a_ub=((1.0, 2.0), (3.0, 1.0)),
        b_ub=(6.0, 9.0),
        lower_bounds=(0.5, 0.0),
    )
    res = solve_lp(lp)
    assert res.status == OPTIMAL
    x = res.x
    assert x[0] + 2 * x[1] <= 6.0 + 1e-7
    assert 3 * x[0] + x[1] <= 9.0 + 1e-7
    assert x[0] >= 0.5 - 1e-7


def test_result_shape():
    res = solve_lp(LinearProgram(objective=()))
    assert res == LPResult(OPTIMAL, (), 0.0)
