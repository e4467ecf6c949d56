"""Exact rational linear programming.

All model data and results are `fractions.Fraction`; nothing in the solve
path ever touches floating point, so optima come back as exact rationals
together with an exact optimal vertex and a dual certificate.

The solver is a dense two-phase primal simplex with Bland's smallest-index
rule for both the entering and the leaving variable, which guarantees
termination on degenerate models.  The models this package builds are tiny
(at most a few hundred variables and ~80 rows) but heavily degenerate, so
anti-cycling matters far more than pivot-count heuristics.

Internally the tableau is kept in `gmpy2.mpq`, which performs the same
exact normalized-fraction arithmetic as `Fraction` roughly an order of
magnitude faster; results are converted back to `Fraction` at the edge.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from gmpy2 import mpq

RationalLike = Union[int, str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value: RationalLike) -> Fraction:
    """Coerce ints, fraction strings like ``'3/4'`` and Fractions to Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(f"not an exact rational: {value!r}")


class ModelError(ValueError):
    """A structurally malformed model (e.g. dangling variable index)."""


class PivotLimitError(RuntimeError):
    """The per-solve pivot cap was hit; signals a termination failure."""


@dataclass(frozen=True)
class LinExpr:
    """A sparse linear expression: sum(coeff_i * x_i) + constant.

    ``terms`` maps variable index -> nonzero Fraction coefficient.
    """

    terms: Mapping[int, Fraction] = field(default_factory=dict)
    constant: Fraction = ZERO

    def __post_init__(self) -> None:
        cleaned = {}
        for idx, coeff in self.terms.items():
            c = as_rational(coeff)
            if c != 0:
                cleaned[int(idx)] = c
        object.__setattr__(self, "terms", cleaned)
        object.__setattr__(self, "constant", as_rational(self.constant))

    @classmethod
    def variable(cls, index: int, coeff: RationalLike = 1) -> "LinExpr":
        return cls({index: as_rational(coeff)})

    @classmethod
    def constant_expr(cls, value: RationalLike) -> "LinExpr":
        return cls({}, as_rational(value))

    def __add__(self, other: "LinExpr") -> "LinExpr":
        terms = dict(self.terms)
        for idx, coeff in other.terms.items():
            terms[idx] = terms.get(idx, ZERO) + coeff
        return LinExpr(terms, self.constant + other.constant)

    def __sub__(self, other: "LinExpr") -> "LinExpr":
        return self + (-other)

    def __neg__(self) -> "LinExpr":
        return LinExpr({i: -c for i, c in self.terms.items()}, -self.constant)

    def scaled(self, factor: RationalLike) -> "LinExpr":
        f = as_rational(factor)
        return LinExpr({i: c * f for i, c in self.terms.items()}, self.constant * f)

    def evaluate(self, values: Sequence[Fraction]) -> Fraction:
        total = self.constant
        for idx, coeff in self.terms.items():
            total += coeff * values[idx]
        return total

    def max_index(self) -> int:
        return max(self.terms, default=-1)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, LinExpr):
            return NotImplemented
        return self.terms == other.terms and self.constant == other.constant


RELATIONS = ("=", "<=", ">=")


@dataclass(frozen=True)
class Constraint:
    """lhs REL rhs with REL one of ``=``, ``<=``, ``>=`` and rational rhs."""

    lhs: LinExpr
    relation: str
    rhs: Fraction

    def __post_init__(self) -> None:
        if self.relation not in RELATIONS:
            raise ModelError(f"unknown relation {self.relation!r}")
        object.__setattr__(self, "rhs", as_rational(self.rhs))

    def satisfied_by(self, values: Sequence[Fraction]) -> bool:
        lhs = self.lhs.evaluate(values)
        if self.relation == "=":
            return lhs == self.rhs
        if self.relation == "<=":
            return lhs <= self.rhs
        return lhs >= self.rhs


SENSES = ("maximize", "minimize")


@dataclass(frozen=True)
class LpModel:
    """A linear program over variables x_0 .. x_{variable_count-1}.

    ``non_negative`` applies x_i >= 0 to every variable; the scenario
    builders always set it (probabilities), but free variables are
    supported via sign splitting.
    """

    variable_count: int
    constraints: tuple[Constraint, ...]
    objective: LinExpr
    sense: str = "maximize"
    non_negative: bool = True

    def __post_init__(self) -> None:
        if self.sense not in SENSES:
            raise ModelError(f"unknown sense {self.sense!r}")
        object.__setattr__(self, "constraints", tuple(self.constraints))

    def validate(self) -> None:
        hi = self.objective.max_index()
        for con in self.constraints:
            hi = max(hi, con.lhs.max_index())
        if hi >= self.variable_count:
            raise ModelError(
                f"variable index {hi} out of range for {self.variable_count} variables"
            )
        if self.variable_count < 0:
            raise ModelError("negative variable count")


@dataclass(frozen=True)
class LpSolution:
    """Solver output; ``value``/``vertex`` are set iff status == 'optimal'.

    ``dual`` carries the simplex multipliers of the standardized equality
    system so that :func:`certify` can check optimality independently of
    the pivot path that produced the solution.
    """

    status: str
    value: Fraction | None = None
    vertex: tuple[Fraction, ...] | None = None
    dual: tuple[Fraction, ...] | None = None


# --- standard form ----------------------------------------------------------

_Q0 = mpq(0)
_Q1 = mpq(1)


def _to_mpq(x: Fraction) -> mpq:
    return mpq(x.numerator, x.denominator)


def _to_fraction(x) -> Fraction:
    return Fraction(int(x.numerator), int(x.denominator))


@dataclass
class _Standard:
    """min cost.x  s.t.  rows.x = rhs, x >= 0, rhs >= 0 (row-normalized)."""

    rows: list[list[mpq]]
    rhs: list[mpq]
    cost: list[mpq]
    n_cols: int
    obj_negated: bool
    obj_constant: Fraction
    split_vars: bool
    variable_count: int


def _standardize(model: LpModel) -> _Standard:
    model.validate()
    split = not model.non_negative
    n_var_cols = 2 * model.variable_count if split else model.variable_count

    n_slack = sum(1 for c in model.constraints if c.relation != "=")
    n_cols = n_var_cols + n_slack

    rows: list[list[mpq]] = []
    rhs: list[mpq] = []
    slack_at = n_var_cols
    for con in model.constraints:
        row = [_Q0] * n_cols
        for idx in sorted(con.lhs.terms):
            coeff = _to_mpq(con.lhs.terms[idx])
            if split:
                row[2 * idx] = coeff
                row[2 * idx + 1] = -coeff
            else:
                row[idx] = coeff
        if con.relation == "<=":
            row[slack_at] = _Q1
            slack_at += 1
        elif con.relation == ">=":
            row[slack_at] = -_Q1
            slack_at += 1
        b = _to_mpq(con.rhs - con.lhs.constant)
        if b < 0:
            row = [-x for x in row]
            b = -b
        rows.append(row)
        rhs.append(b)

    cost = [_Q0] * n_cols
    negated = model.sense == "maximize"
    for idx in sorted(model.objective.terms):
        coeff = _to_mpq(model.objective.terms[idx])
        if negated:
            coeff = -coeff
        if split:
            cost[2 * idx] = coeff
            cost[2 * idx + 1] = -coeff
        else:
            cost[idx] = coeff

    return _Standard(
        rows=rows,
        rhs=rhs,
        cost=cost,
        n_cols=n_cols,
        obj_negated=negated,
        obj_constant=model.objective.constant,
        split_vars=split,
        variable_count=model.variable_count,
    )


# --- simplex ----------------------------------------------------------------


class _Tableau:
    """Dense simplex tableau with one artificial column per row.

    Artificial columns are kept (never re-entering) through phase two so the
    final reduced costs expose the dual multipliers of every row.
    """

    def __init__(self, std: _Standard) -> None:
        self.std = std
        self.m = len(std.rows)
        self.n_struct = std.n_cols
        self.n_total = std.n_cols + self.m
        self.rows: list[list[mpq]] = []
        for i, row in enumerate(std.rows):
            full = list(row) + [_Q0] * self.m + [std.rhs[i]]
            full[self.n_struct + i] = _Q1
            self.rows.append(full)
        self.basis: list[int] = [self.n_struct + i for i in range(self.m)]
        self.inert_rows: set[int] = set()
        self.cost_row: list[mpq] = []
        self.pivots = 0

    # -- plumbing

    def _pivot(self, r: int, c: int) -> None:
        self.pivots += 1
        prow = self.rows[r]
        piv = prow[c]
        if piv != 1:
            inv = 1 / piv
            prow = [x * inv for x in prow]
            self.rows[r] = prow
        for i, row in enumerate(self.rows):
            if i == r:
                continue
            f = row[c]
            if f != 0:
                self.rows[i] = [a - f * b for a, b in zip(row, prow)]
        f = self.cost_row[c]
        if f != 0:
            self.cost_row = [a - f * b for a, b in zip(self.cost_row, prow)]
        self.basis[r] = c

    def _init_cost_row(self, cost: list[mpq]) -> None:
        # reduced costs: start from raw costs, cancel the basic columns
        self.cost_row = list(cost) + [_Q0]
        for i, bj in enumerate(self.basis):
            cb = self.cost_row[bj]
            if cb != 0:
                row = self.rows[i]
                self.cost_row = [a - cb * b for a, b in zip(self.cost_row, row)]

    def _entering(self) -> int | None:
        # Bland: smallest structural index with negative reduced cost
        cr = self.cost_row
        for j in range(self.n_struct):
            if cr[j] < 0:
                return j
        return None

    def _leaving(self, c: int) -> int | None:
        best_ratio = None
        best_row = None
        best_basis = None
        last = self.n_total
        for i, row in enumerate(self.rows):
            a = row[c]
            if a > 0:
                ratio = row[last] / a
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and self.basis[i] < best_basis)
                ):
                    best_ratio = ratio
                    best_row = i
                    best_basis = self.basis[i]
        return best_row

    def _run(self, max_pivots: int) -> str:
        while True:
            c = self._entering()
            if c is None:
                return "optimal"
            r = self._leaving(c)
            if r is None:
                return "unbounded"
            if self.pivots >= max_pivots:
                raise PivotLimitError(f"pivot cap {max_pivots} exceeded")
            self._pivot(r, c)

    # -- phases

    def phase_one(self, max_pivots: int) -> bool:
        cost = [_Q0] * self.n_struct + [_Q1] * self.m
        self._init_cost_row(cost)
        status = self._run(max_pivots)
        assert status == "optimal"  # phase-one objective is bounded below by 0
        objective = -self.cost_row[self.n_total]
        if objective != 0:
            return False
        self._expel_artificials(max_pivots)
        return True

    def _expel_artificials(self, max_pivots: int) -> None:
        # basic artificials sit at value 0 here; pivot them out on any
        # structural column, or mark the row inert when it is all zeros
        for i in range(self.m):
            if self.basis[i] < self.n_struct:
                continue
            row = self.rows[i]
            col = next((j for j in range(self.n_struct) if row[j] != 0), None)
            if col is None:
                self.inert_rows.add(i)
            else:
                if self.pivots >= max_pivots:
                    raise PivotLimitError(f"pivot cap {max_pivots} exceeded")
                self._pivot(i, col)

    def phase_two(self, max_pivots: int) -> str:
        cost = list(self.std.cost) + [_Q0] * self.m
        self._init_cost_row(cost)
        return self._run(max_pivots)

    # -- extraction

    def structural_values(self) -> list[mpq]:
        values = [_Q0] * self.n_struct
        last = self.n_total
        for i, bj in enumerate(self.basis):
            if bj < self.n_struct:
                values[bj] = self.rows[i][last]
        return values

    def dual_values(self) -> list[Fraction]:
        # phase-two artificial costs are 0, so y_i = -reduced_cost(artificial_i)
        return [
            _to_fraction(-self.cost_row[self.n_struct + i]) for i in range(self.m)
        ]


DEFAULT_PIVOT_CAP = 200_000


def solve(model: LpModel, *, max_pivots: int = DEFAULT_PIVOT_CAP) -> LpSolution:
    """Solve the model exactly; deterministic for identical input.

    Raises :class:`ModelError` on malformed models and
    :class:`PivotLimitError` if the anti-cycling cap is ever hit.
    """
    std = _standardize(model)
    tab = _Tableau(std)

    if not tab.phase_one(max_pivots):
        return LpSolution(status="infeasible")
    status = tab.phase_two(max_pivots)
    if status == "unbounded":
        return LpSolution(status="unbounded")

    struct = tab.structural_values()
    if std.split_vars:
        vertex = tuple(
            _to_fraction(struct[2 * i] - struct[2 * i + 1])
            for i in range(model.variable_count)
        )
    else:
        vertex = tuple(_to_fraction(struct[i]) for i in range(model.variable_count))

    raw = sum(
        (c * x for c, x in zip(std.cost, struct) if c != 0),
        _Q0,
    )
    raw_frac = _to_fraction(raw)
    value = (-raw_frac if std.obj_negated else raw_frac) + std.obj_constant
    return LpSolution(
        status="optimal",
        value=value,
        vertex=vertex,
        dual=tuple(tab.dual_values()),
    )


def _feasible(model: LpModel, vertex: Sequence[Fraction]) -> bool:
    if len(vertex) != model.variable_count:
        return False
    if model.non_negative and any(x < 0 for x in vertex):
        return False
    return all(con.satisfied_by(vertex) for con in model.constraints)


def _dual_certifies(model: LpModel, solution: LpSolution) -> bool:
    std = _standardize(model)
    y = solution.dual
    if y is None or len(y) != len(std.rows):
        return False
    # dual feasibility for min{c.x : Ax=b, x>=0}: c_j - y.A_j >= 0 for all j
    for j in range(std.n_cols):
        reduced = std.cost[j] - sum(
            _to_mpq(y[i]) * std.rows[i][j] for i in range(len(std.rows))
        )
        if reduced < 0:
            return False
    strong = sum(
        (_to_mpq(y[i]) * std.rhs[i] for i in range(len(std.rows))), _Q0
    )
    target = solution.value - std.obj_constant
    if std.obj_negated:
        target = -target
    return _to_fraction(strong) == target


def certify(model: LpModel, solution: LpSolution) -> bool:
    """True iff the solution's vertex is exactly feasible and its value is
    provably optimal.

    Optimality is confirmed by the dual certificate carried in the solution
    when present, and otherwise by an exact re-solve; either way no floating
    point or tolerance enters the check.
    """
    if solution.status != "optimal" or solution.value is None or solution.vertex is None:
        return False
    if not _feasible(model, solution.vertex):
        return False
    if model.objective.evaluate(solution.vertex) != solution.value:
        return False
    if solution.dual is not None and _dual_certifies(model, solution):
        return True
    check = solve(model)
    return check.status == "optimal" and check.value == solution.value
