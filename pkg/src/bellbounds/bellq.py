"""Bell quantities as linear functionals over scenario variables.

The four summary statistics are

* ``S``: the four-correlation two-channel statistic,
* ``delta-prime``: the single-channel statistic built from ++ joint
  probabilities and two singles,
* ``delta``: its removable-analyzers variant, replacing the singles by
  joint detections with a removed analyzer on the other arm,
* ``delta-f``: (max delta - min delta) / 4, derived from two optima rather
  than a single LP objective.

Normalized variants divide by the detection-efficiency square (symmetric
families) or by the product of the two arms' efficiencies.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from . import qtforms
from .outcomes import Pattern, marginal_expr
from .ratlp import LinExpr, as_rational
from .scenarios import Family, Params, ScenarioModel, table_var

ZERO = Fraction(0)


class BellKind(str, enum.Enum):
    S = "S"
    DELTA_PRIME = "delta-prime"
    DELTA = "delta"
    DELTA_F = "delta-f"


@dataclass(frozen=True)
class BellQuantity:
    kind: BellKind
    normalized: bool = False

    def label(self) -> str:
        return self.kind.value + ("-normalized" if self.normalized else "")


S = BellQuantity(BellKind.S)
S_N = BellQuantity(BellKind.S, normalized=True)
DELTA_PRIME = BellQuantity(BellKind.DELTA_PRIME)
DELTA = BellQuantity(BellKind.DELTA)
DELTA_N = BellQuantity(BellKind.DELTA, normalized=True)
DELTA_F = BellQuantity(BellKind.DELTA_F)
DELTA_F_N = BellQuantity(BellKind.DELTA_F, normalized=True)


class QuantityError(ValueError):
    """Quantity and scenario family are incompatible."""


_FIXED_JOINT = (Family.IDEAL_LR, Family.FS_FIXED, Family.PCCD_FIXED, Family.ASYM_FIXED)
_REMOVABLE = (Family.FS_REMOVABLE, Family.PCCD_REMOVABLE, Family.ASYM_REMOVABLE)

# setting pair -> (A-arm record position, B-arm record position)
_FIXED_PAIRS = {"AB": (0, 2), "AB'": (0, 3), "A'B": (1, 2), "A'B'": (1, 3)}
_SIGNS = {"AB": 1, "AB'": -1, "A'B": 1, "A'B'": 1}


def _joint_pattern(size: int, assignments: dict[int, str]) -> str:
    chars = ["*"] * size
    for pos, letter in assignments.items():
        chars[pos] = letter
    return "".join(chars)


def _pattern_expr(model: ScenarioModel, assignments: dict[int, str]) -> LinExpr:
    indexer = model.indexer
    text = _joint_pattern(len(indexer.spec), assignments)
    return marginal_expr(indexer, Pattern.parse(text, indexer.spec))


def _s_on_joint(model: ScenarioModel) -> LinExpr:
    expr = LinExpr()
    for pair, (pa, pb) in _FIXED_PAIRS.items():
        sign = _SIGNS[pair]
        for i in ("+", "-"):
            for j in ("+", "-"):
                outcome_sign = 1 if i == j else -1
                term = _pattern_expr(model, {pa: i, pb: j})
                expr = expr + term.scaled(sign * outcome_sign)
    return expr


def _delta_prime_on_joint(model: ScenarioModel) -> LinExpr:
    expr = LinExpr()
    for pair, (pa, pb) in _FIXED_PAIRS.items():
        term = _pattern_expr(model, {pa: "+", pb: "+"})
        expr = expr + term.scaled(_SIGNS[pair])
    singles = _pattern_expr(model, {1: "+"}) + _pattern_expr(model, {2: "+"})
    return expr - singles


def _delta_on_removable(model: ScenarioModel) -> LinExpr:
    # record order (A, A', A'', B, B', B'')
    plus = [
        ({0: "+", 3: "+"}, 1),   # A  B
        ({0: "+", 4: "+"}, -1),  # A  B'
        ({1: "+", 3: "+"}, 1),   # A' B
        ({1: "+", 4: "+"}, 1),   # A' B'
        ({1: "+", 5: "+"}, -1),  # A' B''
        ({2: "+", 3: "+"}, -1),  # A'' B
    ]
    expr = LinExpr()
    for assignment, sign in plus:
        expr = expr + _pattern_expr(model, assignment).scaled(sign)
    return expr


def _delta_on_pccd_fixed(model: ScenarioModel) -> LinExpr:
    # Perfectly correlated counterfactual detection makes a removed-analyzer
    # record detect exactly when its side's fixed records do, so the two
    # removed-analyzer joint detections reduce to detection marginals
    # within the four-record space.
    plus = [
        ({0: "+", 2: "+"}, 1),   # A  B
        ({0: "+", 3: "+"}, -1),  # A  B'
        ({1: "+", 2: "+"}, 1),   # A' B
        ({1: "+", 3: "+"}, 1),   # A' B'
        ({1: "+", 2: "~"}, -1),  # A' with B-side detection
        ({0: "~", 2: "+"}, -1),  # B with A-side detection
    ]
    expr = LinExpr()
    for assignment, sign in plus:
        expr = expr + _pattern_expr(model, assignment).scaled(sign)
    return expr


def _s_on_tables(offset: int) -> LinExpr:
    terms: dict[int, Fraction] = {}
    for t, pair in enumerate(("AB", "AB'", "A'B", "A'B'")):
        sign = _SIGNS[pair]
        for e, entry in enumerate(("++", "+-", "-+", "--")):
            outcome_sign = 1 if entry[0] == entry[1] else -1
            terms[table_var(t, e, offset)] = Fraction(sign * outcome_sign)
    return LinExpr(terms)


def _delta_prime_on_tables(offset: int) -> LinExpr:
    terms: dict[int, Fraction] = {}
    for t, pair in enumerate(("AB", "AB'", "A'B", "A'B'")):
        terms[table_var(t, 0, offset)] = Fraction(_SIGNS[pair])
    expr = LinExpr(terms)
    # singles: + marginal of A' from the A'B table, of B from the AB table
    a_prime_plus = LinExpr(
        {table_var(2, 0, offset): Fraction(1), table_var(2, 1, offset): Fraction(1)}
    )
    b_plus = LinExpr(
        {table_var(0, 0, offset): Fraction(1), table_var(0, 2, offset): Fraction(1)}
    )
    return expr - a_prime_plus - b_plus


def objective(q: BellQuantity, model: ScenarioModel) -> LinExpr:
    """The raw (unnormalized) linear functional of ``q`` over the model.

    ``delta-f`` is not a single objective; use :func:`delta_from_extrema`
    on the two ``delta`` optima instead.

    With ideal detection the removed-analyzer records detect with
    certainty, so ``delta`` on the ideal families coincides with the
    single-channel statistic built from plain singles; that reduction is
    applied here.
    """
    if q.kind is BellKind.DELTA_F:
        raise QuantityError("delta-f derives from two delta optima, not one LP")

    family = model.scenario.family

    if family is Family.CROSSTALK:
        if q.kind is not BellKind.S:
            raise QuantityError(f"{q.kind.value} not defined on the crosstalk model")
        return _s_on_tables(model.observed_offset)

    if family is Family.IDEAL_APPARENT_LOCALITY:
        if q.kind is BellKind.S:
            return _s_on_tables(0)
        if q.kind in (BellKind.DELTA_PRIME, BellKind.DELTA):
            return _delta_prime_on_tables(0)
        raise QuantityError(f"{q.kind.value} not defined on observed tables")

    if family in _FIXED_JOINT:
        if q.kind is BellKind.S:
            return _s_on_joint(model)
        if q.kind is BellKind.DELTA_PRIME:
            return _delta_prime_on_joint(model)
        if q.kind is BellKind.DELTA and family is Family.IDEAL_LR:
            return _delta_prime_on_joint(model)
        if q.kind is BellKind.DELTA and family is Family.PCCD_FIXED:
            return _delta_on_pccd_fixed(model)
        raise QuantityError(
            f"{q.kind.value} needs the removable-analyzers space, not {family.value}"
        )

    if family in _REMOVABLE:
        if q.kind is BellKind.DELTA:
            return _delta_on_removable(model)
        raise QuantityError(
            f"{q.kind.value} is defined on the fixed-analyzers space, not {family.value}"
        )

    raise QuantityError(f"unsupported family {family}")  # pragma: no cover


def delta_from_extrema(delta_max: Fraction, delta_min: Fraction) -> Fraction:
    """The spread statistic (max - min) / 4 of the removable-analyzers
    quantity."""
    delta_max, delta_min = as_rational(delta_max), as_rational(delta_min)
    if delta_max < delta_min:
        raise ValueError(f"extrema out of order: {delta_max} < {delta_min}")
    return (delta_max - delta_min) / 4


def normalization_factor(params: Params) -> Fraction:
    if params.eta is not None:
        return params.eta * params.eta
    if params.eta_a is not None and params.eta_b is not None:
        return params.eta_a * params.eta_b
    return Fraction(1)


def normalize(value: Fraction, q: BellQuantity, params: Params) -> Fraction:
    """Divide by the efficiency square (or the two-arm product)."""
    factor = normalization_factor(params)
    if factor == 0:
        raise ValueError("normalization undefined at zero detection efficiency")
    return as_rational(value) / factor


@dataclass(frozen=True)
class QtBound:
    """Exact quantum-theory interval for a quantity at given parameters.

    ``delta-f`` style one-sided bounds leave ``lower`` as None.
    """

    quantity: BellQuantity
    lower: qtforms.Sqrt2 | None
    upper: qtforms.Sqrt2 | None

    def decimals(self, digits: int = 15):
        lo = None if self.lower is None else self.lower.to_decimal(digits)
        hi = None if self.upper is None else self.upper.to_decimal(digits)
        return lo, hi


def qt_bound(q: BellQuantity, params: Params) -> QtBound:
    """Quantum-theory closed-form bounds, exact in the sqrt(2) ring.

    Symmetric parameters use the fair-sampling forms (ideal at efficiency
    one); asymmetric parameters only have published forms for S and for the
    normalized efficiency-free quantities.
    """
    name = q.kind.value

    def lookup(side: str, kind: str, at: Fraction) -> qtforms.Sqrt2 | None:
        try:
            return qtforms.qt_formula(name, side, kind).evaluate(at)
        except qtforms.FormulaLookupError:
            return None

    if params.eta_a is not None or params.eta_b is not None:
        if q.normalized:
            kind, at = "normalized", Fraction(1)
        elif q.kind is BellKind.S:
            kind, at = "asymmetric-S", params.eta_a * params.eta_b
        else:
            raise qtforms.FormulaLookupError(
                f"no published asymmetric unnormalized bound for {name}"
            )
    elif q.normalized:
        kind, at = "normalized", Fraction(1)
    elif params.eta is not None:
        kind, at = "fs-symmetric", params.eta
    else:
        kind, at = "ideal", Fraction(1)

    lower = lookup("lower", kind, at)
    upper = lookup("upper", kind, at)
    if lower is None and upper is None:
        raise qtforms.FormulaLookupError(f"no registered bounds for {name} / {kind}")
    return QtBound(q, lower, upper)
