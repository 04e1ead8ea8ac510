"""Small dense linear programs: maximize c.x subject to A x <= b, E x = f, x >= lb.

Two-phase tableau simplex with Bland's anti-cycling rule.  Sizes are
capped because the intended problems have a handful of variables;
auditability beats speed here.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import NumericalError, SizeCapError, ValidationError

MAX_VARS = 500
MAX_ROWS = 2000
REDUCED_COST_TOL = 1e-9
FEAS_TOL = 1e-7

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """Maximization problem with inequality rows, equality rows and lower bounds."""

    objective: tuple[float, ...]
    a_ub: tuple[tuple[float, ...], ...] = ()
    b_ub: tuple[float, ...] = ()
    a_eq: tuple[tuple[float, ...], ...] = ()
    b_eq: tuple[float, ...] = ()
    lower_bounds: tuple[float, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        n = len(self.objective)
        if self.lower_bounds is None:
            object.__setattr__(self, "lower_bounds", tuple(0.0 for _ in range(n)))
        if len(self.lower_bounds) != n:
            raise ValidationError("lower bound vector has the wrong length")
        for rows, rhs, name in ((self.a_ub, self.b_ub, "inequality"),
                                (self.a_eq, self.b_eq, "equality")):
            if len(rows) != len(rhs):
                raise ValidationError(f"{name} rows and rhs differ in length")
            for row in rows:
                if len(row) != n:
                    raise ValidationError(f"{name} row has the wrong arity")
        values = list(self.objective) + list(self.lower_bounds) + list(self.b_ub) + list(self.b_eq)
        values += [x for row in self.a_ub for x in row]
        values += [x for row in self.a_eq for x in row]
        if not np.all(np.isfinite(values)):
            raise ValidationError("linear program contains non-finite coefficients")


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[tuple[float, ...]]
    objective: Optional[float]


def _pivot(tab: np.ndarray, basis: list[int], row: int, col: int):
    piv = tab[row, col]
    if abs(piv) < 1e-11:
        raise NumericalError("pivot element too small; basis is ill-conditioned")
    tab[row] /= piv
    for r in range(tab.shape[0]):
        if r != row and abs(tab[r, col]) > 0.0:
            tab[r] -= tab[r, col] * tab[row]
    basis[row] = col


def _bland_entering(obj_row: np.ndarray, n_cols: int) -> Optional[int]:
    for j in range(n_cols):
        if obj_row[j] > REDUCED_COST_TOL:
            return j
    return None


def _bland_leaving(tab: np.ndarray, basis: list[int], col: int, n_rows: int) -> Optional[int]:
    best_ratio = None
    best_row = None
    for i in range(n_rows):
        a = tab[i, col]
        if a > REDUCED_COST_TOL:
            ratio = tab[i, -1] / a
            if (best_ratio is None or ratio < best_ratio - 1e-12
                    or (abs(ratio - best_ratio) <= 1e-12 and basis[i] < basis[best_row])):
                best_ratio = ratio
                best_row = i
    return best_row


def _run_simplex(tab: np.ndarray, basis: list[int], n_cols: int) -> str:
    n_rows = tab.shape[0] - 1
    for _ in range(200_000):
        col = _bland_entering(tab[-1], n_cols)
        if col is None:
            return OPTIMAL
        row = _bland_leaving(tab, basis, col, n_rows)
        if row is None:
            return UNBOUNDED
        _pivot(tab, basis, row, col)
    raise NumericalError("simplex did not terminate; Bland's rule should prevent this")


def solve_lp(lp: LinearProgram) -> LPResult:
    """Solve a small dense LP, reporting optimal / infeasible / unbounded."""
    n = len(lp.objective)
    m_ub, m_eq = len(lp.a_ub), len(lp.a_eq)
    if n > MAX_VARS:
        raise SizeCapError(f"{n} variables exceeds the cap of {MAX_VARS}")
    if m_ub + m_eq > MAX_ROWS:
        raise SizeCapError(f"{m_ub + m_eq} rows exceeds the cap of {MAX_ROWS}")
    if n == 0:
        return LPResult(OPTIMAL, (), 0.0)

    lb = np.asarray(lp.lower_bounds, dtype=float)
    c = np.asarray(lp.objective, dtype=float)
    rows = []
    rhs = []
    kinds = []  # "ub" rows first, then "eq"
    if m_ub:
        a = np.asarray(lp.a_ub, dtype=float)
        b = np.asarray(lp.b_ub, dtype=float) - a @ lb
        rows.extend(a)
        rhs.extend(b)
        kinds.extend(["ub"] * m_ub)
    if m_eq:
        a = np.asarray(lp.a_eq, dtype=float)
        b = np.asarray(lp.b_eq, dtype=float) - a @ lb
        rows.extend(a)
        rhs.extend(b)
        kinds.extend(["eq"] * m_eq)

    m = len(rows)
    # Columns: structural | slacks (one per ub row) | artificials (as needed).
    n_slack = m_ub
    art_rows = []
    for i in range(m):
        if kinds[i] == "eq" or rhs[i] < 0:
            art_rows.append(i)
    n_art = len(art_rows)
    total = n + n_slack + n_art
    tab = np.zeros((m + 1, total + 1))
    basis = [-1] * m
    art_of_row = {}
    for idx, i in enumerate(art_rows):
        art_of_row[i] = n + n_slack + idx

    slack_idx = 0
    for i in range(m):
        row = np.asarray(rows[i], dtype=float)
        b = rhs[i]
        sign = 1.0
        if b < 0:
            sign = -1.0
            row = -row
            b = -b
        tab[i, :n] = row
        tab[i, -1] = b
        if kinds[i] == "ub":
            tab[i, n + slack_idx] = sign
            if i in art_of_row:
                tab[i, art_of_row[i]] = 1.0
                basis[i] = art_of_row[i]
            else:
                basis[i] = n + slack_idx
            slack_idx += 1
        else:
            tab[i, art_of_row[i]] = 1.0
            basis[i] = art_of_row[i]

    if n_art:
        # Phase 1: maximize -sum(artificials).
        tab[-1, :] = 0.0
        tab[-1, n + n_slack:total] = -1.0
        for i in range(m):
            if basis[i] >= n + n_slack:
                tab[-1] += tab[i]
        tab[-1, n + n_slack:total] = 0.0
        status = _run_simplex(tab, basis, total)
        if status != OPTIMAL:
            raise NumericalError("phase 1 cannot be unbounded")
        if tab[-1, -1] > FEAS_TOL:
            return LPResult(INFEASIBLE, None, None)
        # Drive any remaining artificial out of the basis.
        for i in range(m):
            if basis[i] >= n + n_slack:
                pivoted = False
                for j in range(n + n_slack):
                    if abs(tab[i, j]) > 1e-9:
                        _pivot(tab, basis, i, j)
                        pivoted = True
                        break
                if not pivoted:
                    tab[i, :] = 0.0  # redundant row
        tab[:, n + n_slack:total] = 0.0

    # Phase 2 objective.
    tab[-1, :] = 0.0
    tab[-1, :n] = c
    for i in range(m):
        if basis[i] >= 0 and abs(tab[-1, basis[i]]) > 0.0:
            tab[-1] -= tab[-1, basis[i]] * tab[i]
    status = _run_simplex(tab, basis, n + n_slack)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED, None, None)

    x_shift = np.zeros(n)
    for i in range(m):
        if 0 <= basis[i] < n:
            x_shift[basis[i]] = tab[i, -1]
    x = x_shift + lb
    obj = float(c @ x_shift + c @ lb)
    _validate_solution(lp, x)
    return LPResult(OPTIMAL, tuple(float(v) for v in x), obj)


def _validate_solution(lp: LinearProgram, x: np.ndarray):
    for row, b in zip(lp.a_ub, lp.b_ub):
        if float(np.dot(row, x)) > b + FEAS_TOL:
            raise NumericalError("optimal point violates an inequality row")
    for row, b in zip(lp.a_eq, lp.b_eq):
        if abs(float(np.dot(row, x)) - b) > FEAS_TOL:
            raise NumericalError("optimal point violates an equality row")
    if np.any(x < np.asarray(lp.lower_bounds) - FEAS_TOL):
        raise NumericalError("optimal point violates a lower bound")
