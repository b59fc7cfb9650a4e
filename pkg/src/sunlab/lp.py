"""Exact rational linear programming.

A dense two-phase tableau simplex over :class:`fractions.Fraction` using
Bland's lowest-index rule for both the entering and leaving variable, so it
terminates on degenerate problems and pivots deterministically.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .numerics import ZERO, SunlabError, as_scalar

LE, GE, EQ = "<=", ">=", "=="


class MalformedProblem(SunlabError, ValueError):
    pass


@dataclass
class LpProblem:
    """minimize ``objective . x`` subject to ``rows[i] . x (senses[i]) rhs[i]``.

    Each variable has bounds ``lower[k] <= x_k <= upper[k]``; ``None`` means
    unbounded on that side.  Missing bounds default to ``x_k >= 0``.
    """

    objective: list
    rows: list = field(default_factory=list)
    senses: list = field(default_factory=list)
    rhs: list = field(default_factory=list)
    lower: list | None = None
    upper: list | None = None

    def __post_init__(self):
        n = len(self.objective)
        if self.lower is None:
            self.lower = [ZERO] * n
        if self.upper is None:
            self.upper = [None] * n
        if not (len(self.rows) == len(self.senses) == len(self.rhs)):
            raise MalformedProblem("rows, senses and rhs must have equal length")
        if len(self.lower) != n or len(self.upper) != n:
            raise MalformedProblem("bounds must match the number of variables")
        for row in self.rows:
            if len(row) != n:
                raise MalformedProblem(f"constraint row has {len(row)} coefficients, expected {n}")
        for s in self.senses:
            if s not in (LE, GE, EQ):
                raise MalformedProblem(f"unknown constraint sense {s!r}")


@dataclass(frozen=True)
class LpResult:
    status: str  # "optimal" | "infeasible" | "unbounded"
    value: Fraction | None = None
    x: tuple | None = None

    @property
    def optimal(self) -> bool:
        return self.status == "optimal"


class LpBuilder:
    """Incremental construction of an :class:`LpProblem` with sparse rows."""

    def __init__(self):
        self.lower: list = []
        self.upper: list = []
        self._rows: list[tuple[dict, str, Fraction]] = []

    def var(self, lower=ZERO, upper=None) -> int:
        self.lower.append(None if lower is None else as_scalar(lower))
        self.upper.append(None if upper is None else as_scalar(upper))
        return len(self.lower) - 1

    def free_var(self) -> int:
        return self.var(None, None)

    def add(self, coeffs: Mapping[int, object], sense: str, rhs) -> None:
        self._rows.append(({k: as_scalar(v) for k, v in coeffs.items()}, sense, as_scalar(rhs)))

    def problem(self, objective: Mapping[int, object]) -> LpProblem:
        n = len(self.lower)
        obj = [ZERO] * n
        for k, v in objective.items():
            obj[k] = as_scalar(v)
        rows = []
        for coeffs, _, _ in self._rows:
            row = [ZERO] * n
            for k, v in coeffs.items():
                row[k] += v
            rows.append(row)
        return LpProblem(
            objective=obj,
            rows=rows,
            senses=[s for _, s, _ in self._rows],
            rhs=[b for _, _, b in self._rows],
            lower=list(self.lower),
            upper=list(self.upper),
        )

    def minimize(self, objective: Mapping[int, object]) -> LpResult:
        return lp_solve(self.problem(objective))

    def maximize(self, objective: Mapping[int, object]) -> LpResult:
        res = lp_solve(self.problem({k: -as_scalar(v) for k, v in objective.items()}))
        if res.optimal:
            return LpResult("optimal", -res.value, res.x)
        return res

    def feasible_point(self) -> tuple | None:
        res = self.minimize({})
        return res.x if res.optimal else None


def lp_solve(problem: LpProblem) -> LpResult:
    """Solve ``problem`` exactly.  Returns optimal value and an optimal vertex."""
    n = len(problem.objective)
    # Substitute every original variable by nonnegative standard variables:
    # x_k = offset_k + sum(coef * s_idx).
    subst: list[tuple[Fraction, list[tuple[int, int]]]] = []
    n_std = 0
    extra_rows: list[tuple[dict, str, Fraction]] = []
    for k in range(n):
        lo, hi = problem.lower[k], problem.upper[k]
        if lo is not None:
            subst.append((as_scalar(lo), [(n_std, 1)]))
            if hi is not None:
                if hi < lo:
                    return LpResult("infeasible")
                extra_rows.append(({n_std: Fraction(1)}, LE, as_scalar(hi) - lo))
            n_std += 1
        elif hi is not None:
            subst.append((as_scalar(hi), [(n_std, -1)]))
            n_std += 1
        else:
            subst.append((ZERO, [(n_std, 1), (n_std + 1, -1)]))
            n_std += 2

    rows: list[tuple[dict, str, Fraction]] = []
    for row, sense, b in zip(problem.rows, problem.senses, problem.rhs):
        coeffs: dict[int, Fraction] = {}
        b = as_scalar(b)
        for k, a in enumerate(row):
            if not a:
                continue
            offset, parts = subst[k]
            b -= a * offset
            for idx, c in parts:
                coeffs[idx] = coeffs.get(idx, ZERO) + a * c
        rows.append((coeffs, sense, b))
    rows.extend(extra_rows)

    cost = [ZERO] * n_std
    const = ZERO
    for k, a in enumerate(problem.objective):
        if not a:
            continue
        offset, parts = subst[k]
        const += a * offset
        for idx, c in parts:
            cost[idx] += a * c

    # slack columns
    n_slack = sum(1 for _, s, _ in rows if s != EQ)
    m = len(rows)
    width = n_std + n_slack + m  # + artificials
    tableau: list[list[Fraction]] = []
    slack_col = n_std
    for i, (coeffs, sense, b) in enumerate(rows):
        r = [ZERO] * (width + 1)
        for idx, c in coeffs.items():
            r[idx] = c
        if sense == LE:
            r[slack_col] = Fraction(1)
            slack_col += 1
        elif sense == GE:
            r[slack_col] = Fraction(-1)
            slack_col += 1
        r[width] = b
        if b < 0:
            r = [-v for v in r]
        r[n_std + n_slack + i] = Fraction(1)
        tableau.append(r)
    basis = [n_std + n_slack + i for i in range(m)]
    n_real = n_std + n_slack

    # phase 1: minimize the sum of artificials
    phase1_cost = [ZERO] * n_real + [Fraction(1)] * m
    status = _simplex(tableau, basis, phase1_cost, allowed=width)
    assert status == "optimal"
    infeas = sum((tableau[i][width] for i in range(m) if basis[i] >= n_real), ZERO)
    if infeas > 0:
        return LpResult("infeasible")

    # drive zero-level artificials out of the basis, dropping redundant rows
    i = 0
    while i < len(tableau):
        if basis[i] >= n_real:
            pivot_col = next((j for j in range(n_real) if tableau[i][j] != 0), None)
            if pivot_col is None:
                del tableau[i]
                del basis[i]
                continue
            _pivot(tableau, i, pivot_col)
            basis[i] = pivot_col
        i += 1

    full_cost = cost + [ZERO] * (width - n_std)
    status = _simplex(tableau, basis, full_cost, allowed=n_real)
    if status == "unbounded":
        return LpResult("unbounded")

    std = [ZERO] * width
    for r, bvar in zip(tableau, basis):
        std[bvar] = r[width]
    x = []
    for offset, parts in subst:
        x.append(offset + sum((c * std[idx] for idx, c in parts), ZERO))
    value = const + sum((a * v for a, v in zip(problem.objective, x)), ZERO)
    return LpResult("optimal", value, tuple(x))


def _pivot(tableau: list[list[Fraction]], r: int, c: int) -> None:
    prow = tableau[r]
    pv = prow[c]
    if pv != 1:
        prow[:] = [v / pv for v in prow]
    nz = [j for j, v in enumerate(prow) if v]
    for i, row in enumerate(tableau):
        if i == r:
            continue
        f = row[c]
        if f:
            for j in nz:
                row[j] -= f * prow[j]


def _simplex(tableau, basis, cost, allowed: int) -> str:
    """Bland's-rule primal simplex on a tableau already in canonical form."""
    if not tableau:
        # no rows: every column is a free ray
        return "unbounded" if any(cost[j] < 0 for j in range(allowed)) else "optimal"
    width = len(tableau[0]) - 1
    while True:
        # reduced costs d_j = c_j - c_B . column_j
        entering = None
        for j in range(allowed):
            if j in basis:
                continue
            d = cost[j]
            for row, b in zip(tableau, basis):
                cb = cost[b]
                if cb and row[j]:
                    d -= cb * row[j]
            if d < 0:
                entering = j
                break
        if entering is None:
            return "optimal"
        leave = None
        best = None
        for i, row in enumerate(tableau):
            a = row[entering]
            if a > 0:
                ratio = row[width] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best, leave = ratio, i
        if leave is None:
            return "unbounded"
        _pivot(tableau, leave, entering)
        basis[leave] = entering


def lp_feasible(builder: LpBuilder) -> bool:
    return builder.feasible_point() is not None


__all__ = ["LpProblem", "LpResult", "LpBuilder", "lp_solve", "lp_feasible", "MalformedProblem", "LE", "GE", "EQ"]

