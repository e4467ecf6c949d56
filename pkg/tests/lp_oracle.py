"""Brute-force vertex-enumeration oracle for small LPs.

Completely independent of the simplex implementation: enumerates every
basic point (intersection of d active hyperplanes chosen among constraint
boundaries and coordinate planes), keeps the feasible ones, and optimizes
over that finite vertex set.  For non-negative variable models the feasible
region is pointed, so "no feasible vertex" is exactly "infeasible", and on
bounded models the vertex optimum is the LP optimum.

Intended for models up to ~10 variables / ~12 constraints.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from bellbounds.ratlp import LpModel

ZERO = Fraction(0)


def _solve_square(rows: list[list[Fraction]], rhs: list[Fraction]):
    """Gaussian elimination; returns None when singular."""
    n = len(rows)
    a = [row[:] + [rhs[i]] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return None
        a[col], a[pivot] = a[pivot], a[col]
        inv = 1 / a[col][col]
        a[col] = [x * inv for x in a[col]]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] for i in range(n)]


def _rows_of(model: LpModel):
    eq_rows, ineq_rows = [], []
    d = model.variable_count
    for con in model.constraints:
        row = [ZERO] * d
        for idx, coeff in con.lhs.terms.items():
            row[idx] = coeff
        rhs = con.rhs - con.lhs.constant
        if con.relation == "=":
            eq_rows.append((row, rhs))
        else:
            ineq_rows.append((row, rhs, con.relation))
    return eq_rows, ineq_rows


def enumerate_vertices(model: LpModel) -> list[tuple[Fraction, ...]]:
    if not model.non_negative:
        raise ValueError("oracle assumes non-negative variables")
    d = model.variable_count
    eq_rows, ineq_rows = _rows_of(model)

    # candidate active sets: all equalities plus enough boundaries to pin a point
    boundaries: list[tuple[list[Fraction], Fraction]] = [
        (row, rhs) for row, rhs, _ in ineq_rows
    ]
    for i in range(d):
        axis = [ZERO] * d
        axis[i] = Fraction(1)
        boundaries.append((axis, ZERO))

    need = d - len(eq_rows)
    if need < 0:
        need = 0
    vertices = set()
    for chosen in itertools.combinations(boundaries, need):
        rows = [row for row, _ in eq_rows] + [row for row, _ in chosen]
        rhs = [b for _, b in eq_rows] + [b for _, b in chosen]
        if len(rows) != d:
            continue
        point = _solve_square(rows, rhs)
        if point is None:
            continue
        if any(x < 0 for x in point):
            continue
        ok = True
        for row, b, rel in ineq_rows:
            lhs = sum(c * x for c, x in zip(row, point))
            if rel == "<=" and lhs > b:
                ok = False
                break
            if rel == ">=" and lhs < b:
                ok = False
                break
        if ok and all(
            sum(c * x for c, x in zip(row, point)) == b for row, b in eq_rows
        ):
            vertices.add(tuple(point))
    return sorted(vertices)


def optimum_by_enumeration(model: LpModel):
    """(status, value) with status 'optimal' or 'infeasible'.

    Only valid as a full oracle when the feasible set is bounded (callers
    arrange that, e.g. with box constraints).
    """
    vertices = enumerate_vertices(model)
    if not vertices:
        return "infeasible", None
    values = [model.objective.evaluate(v) for v in vertices]
    return "optimal", (max(values) if model.sense == "maximize" else min(values))
