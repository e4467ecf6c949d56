"""Constraint-set builders for every analyzed experiment family.

Each family turns a parameter binding (detection efficiencies, crosstalk
probability) into an exact list of linear constraints over either

* a joint-probability space of outcome tuples (local-realistic families), or
* per-setting observed tables (apparent-locality and crosstalk families),

with non-negativity implied globally by the LP layer.  The equality lists
are transcribed verbatim, one row per displayed member, including members
that are implied by others; the solver tolerates the redundancy.

The fair-sampling families come in three nested constraint levels:

* ``marginal-only``: totals and single-record detection marginals,
* ``factual-independence``: adds cross-arm independence of the factual
  detections,
* ``full``: adds independence of every factual/counterfactual detection
  combination, up to the all-records product.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

from .outcomes import (
    Alphabet,
    JointIndexer,
    Pattern,
    fixed_space,
    marginal_expr,
    removable_space,
)
from .ratlp import Constraint, LinExpr, as_rational

ZERO = Fraction(0)
ONE = Fraction(1)


class Family(str, enum.Enum):
    IDEAL_APPARENT_LOCALITY = "ideal-apparent-locality"
    IDEAL_LR = "ideal-lr"
    FS_FIXED = "fs-fixed"
    FS_REMOVABLE = "fs-removable"
    PCCD_FIXED = "pccd-fixed"
    PCCD_REMOVABLE = "pccd-removable"
    ASYM_FIXED = "asym-fixed"
    ASYM_REMOVABLE = "asym-removable"
    CROSSTALK = "crosstalk"


class Level(str, enum.Enum):
    MARGINAL_ONLY = "marginal-only"
    FACTUAL_INDEPENDENCE = "factual-independence"
    FULL = "full"


_LEVELED_FAMILIES = (Family.FS_FIXED, Family.FS_REMOVABLE)


class ParamError(ValueError):
    """Parameters invalid or irrelevant for the requested family."""


@dataclass(frozen=True)
class ScenarioId:
    family: Family
    level: Level = Level.FULL

    def __post_init__(self) -> None:
        if self.level is not Level.FULL and self.family not in _LEVELED_FAMILIES:
            raise ParamError(
                f"constraint level {self.level.value} only applies to "
                f"{[f.value for f in _LEVELED_FAMILIES]}"
            )

    def label(self) -> str:
        if self.family in _LEVELED_FAMILIES and self.level is not Level.FULL:
            return f"{self.family.value}/{self.level.value}"
        return self.family.value


def _check_unit(name: str, value: Fraction) -> Fraction:
    value = as_rational(value)
    if not ZERO <= value <= ONE:
        raise ParamError(f"{name} = {value} outside [0, 1]")
    return value


@dataclass(frozen=True)
class Params:
    """Parameter binding; only the fields a family uses may be set."""

    eta: Fraction | None = None
    eta_a: Fraction | None = None
    eta_b: Fraction | None = None
    p_crosstalk: Fraction | None = None
    apparent_locality: bool = False

    def __post_init__(self) -> None:
        for name in ("eta", "eta_a", "eta_b", "p_crosstalk"):
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, _check_unit(name, value))

    def _set_fields(self) -> set[str]:
        fields = {
            name
            for name in ("eta", "eta_a", "eta_b", "p_crosstalk")
            if getattr(self, name) is not None
        }
        if self.apparent_locality:
            fields.add("apparent_locality")
        return fields

    def require(self, family: Family) -> None:
        wanted = {
            Family.IDEAL_APPARENT_LOCALITY: set(),
            Family.IDEAL_LR: set(),
            Family.FS_FIXED: {"eta"},
            Family.FS_REMOVABLE: {"eta"},
            Family.PCCD_FIXED: {"eta"},
            Family.PCCD_REMOVABLE: {"eta"},
            Family.ASYM_FIXED: {"eta_a", "eta_b"},
            Family.ASYM_REMOVABLE: {"eta_a", "eta_b"},
            Family.CROSSTALK: {"p_crosstalk"},
        }[family]
        have = self._set_fields()
        optional = {"apparent_locality"} if family is Family.CROSSTALK else set()
        if not wanted <= have or have - wanted - optional:
            raise ParamError(
                f"family {family.value} needs exactly {sorted(wanted) or 'no'} "
                f"parameters, got {sorted(have) or 'none'}"
            )


@dataclass(frozen=True)
class ScenarioModel:
    """A bound scenario: constraint list plus a variable catalog.

    ``indexer`` is present for joint-space families and None for the pure
    observed-table one (ideal apparent locality).  The crosstalk family has
    both: joint variables first, then 16 observed-table variables.
    """

    scenario: ScenarioId
    params: Params
    indexer: JointIndexer | None
    constraints: tuple[Constraint, ...]
    variable_names: tuple[str, ...]
    observed_offset: int | None = None

    @property
    def variable_count(self) -> int:
        return len(self.variable_names)


# --- observed-table helpers ---------------------------------------------------

TABLES = ("AB", "AB'", "A'B", "A'B'")
ENTRIES = ("++", "+-", "-+", "--")


def table_var(table: int, entry: int, offset: int = 0) -> int:
    return offset + 4 * table + entry


def _table_names(offset_names: list[str]) -> None:
    for table in TABLES:
        for entry in ENTRIES:
            offset_names.append(f"q[{table}]({entry[0]},{entry[1]})")


def _table_totals(offset: int) -> list[Constraint]:
    return [
        Constraint(
            LinExpr({table_var(t, e, offset): ONE for e in range(4)}), "=", ONE
        )
        for t in range(4)
    ]


def _row_marginal(t: int, sign: str, offset: int) -> LinExpr:
    # p^{XY}_{sign,pm}: sum over the second outcome
    entries = (0, 1) if sign == "+" else (2, 3)
    return LinExpr({table_var(t, e, offset): ONE for e in entries})


def _col_marginal(t: int, sign: str, offset: int) -> LinExpr:
    # p^{XY}_{pm,sign}: sum over the first outcome
    entries = (0, 2) if sign == "+" else (1, 3)
    return LinExpr({table_var(t, e, offset): ONE for e in entries})


def apparent_locality_rows(offset: int = 0) -> list[Constraint]:
    """Marginals of each arm equal across the other arm's setting choice.

    One of the four displayed column equalities is a tautology as printed;
    it is transcribed by symmetric intent (AB vs A'B on the '-' column),
    mirroring its three well-formed siblings.
    """
    t_ab, t_abp, t_apb, t_apbp = 0, 1, 2, 3
    rows: list[Constraint] = []
    for sign in ("+", "-"):
        rows.append(
            Constraint(
                _row_marginal(t_ab, sign, offset) - _row_marginal(t_abp, sign, offset),
                "=",
                ZERO,
            )
        )
    for sign in ("+", "-"):
        rows.append(
            Constraint(
                _row_marginal(t_apb, sign, offset)
                - _row_marginal(t_apbp, sign, offset),
                "=",
                ZERO,
            )
        )
    for sign in ("+", "-"):
        rows.append(
            Constraint(
                _col_marginal(t_ab, sign, offset) - _col_marginal(t_apb, sign, offset),
                "=",
                ZERO,
            )
        )
    for sign in ("+", "-"):
        rows.append(
            Constraint(
                _col_marginal(t_abp, sign, offset)
                - _col_marginal(t_apbp, sign, offset),
                "=",
                ZERO,
            )
        )
    return rows


# --- equality lists over joint spaces ----------------------------------------
#
# Each entry is (pattern text, rhs exponent): symmetric families use a single
# exponent k meaning eta**k; asymmetric families use (i, j) meaning
# eta_a**i * eta_b**j.  Chained display equalities appear as one row per
# member, all with the shared right-hand side.

FS_FIXED_MARGINAL = (
    ("****", 0),
    ("~***", 1),
    ("*~**", 1),
    ("**~*", 1),
    ("***~", 1),
)

FS_FIXED_FACTUAL = (
    ("~*~*", 2),
    ("~**~", 2),
    ("*~~*", 2),
    ("*~*~", 2),
)

FS_FIXED_FULL = (
    ("~~**", 2),
    ("**~~", 2),
    ("~*~~", 3),
    ("*~~~", 3),
    ("~~~*", 3),
    ("~~*~", 3),
    ("~~~~", 4),
)

FS_REMOVABLE_MARGINAL = (
    ("******", 0),
    ("~*****", 1),
    ("*~****", 1),
    ("***~**", 1),
    ("****~*", 1),
    ("**+***", 1),
    ("*****+", 1),
)

FS_REMOVABLE_FACTUAL = (
    ("~**~**", 2),
    ("~***~*", 2),
    ("~****+", 2),
    ("*~*~**", 2),
    ("*~**~*", 2),
    ("*~***+", 2),
    ("**+~**", 2),
    ("**+*~*", 2),
    ("**+**+", 2),
)

FS_REMOVABLE_FULL = (
    ("~~****", 2),
    ("~*+***", 2),
    ("*~+***", 2),
    ("***~~*", 2),
    ("***~*+", 2),
    ("****~+", 2),
    ("~~+***", 3),
    ("~~*~**", 3),
    ("~~**~*", 3),
    ("~~***+", 3),
    ("~*+~**", 3),
    ("~*+*~*", 3),
    ("~*+**+", 3),
    ("~**~~*", 3),
    ("~**~*+", 3),
    ("~***~+", 3),
    ("*~+~**", 3),
    ("*~+*~*", 3),
    ("*~+**+", 3),
    ("*~*~~*", 3),
    ("*~*~*+", 3),
    ("*~**~+", 3),
    ("**+~~*", 3),
    ("**+~*+", 3),
    ("**+*~+", 3),
    ("***~~+", 3),
    ("~~+~**", 4),
    ("~~+*~*", 4),
    ("~~+**+", 4),
    ("~~*~~*", 4),
    ("~~*~*+", 4),
    ("~~**~+", 4),
    ("~*+~~*", 4),
    ("~*+~*+", 4),
    ("~*+*~+", 4),
    ("~**~~+", 4),
    ("*~+~~*", 4),
    ("*~+~*+", 4),
    ("*~+*~+", 4),
    ("*~*~~+", 4),
    ("**+~~+", 4),
    ("~~+~~*", 5),
    ("~~+~*+", 5),
    ("~~+*~+", 5),
    ("~~*~~+", 5),
    ("~*+~~+", 5),
    ("*~+~~+", 5),
    ("~~+~~+", 6),
)

PCCD_FIXED = (
    ("****", 0),
    ("~***", 1),
    ("*~**", 1),
    ("**~*", 1),
    ("***~", 1),
    ("~*~*", 2),
    ("~**~", 2),
    ("*~~*", 2),
    ("*~*~", 2),
    ("~~**", 1),
    ("**~~", 1),
    ("~*~~", 2),
    ("*~~~", 2),
    ("~~~*", 2),
    ("~~*~", 2),
    ("~~~~", 2),
)

PCCD_REMOVABLE = (
    ("******", 0),
    ("~*****", 1),
    ("*~****", 1),
    ("**+***", 1),
    ("***~**", 1),
    ("****~*", 1),
    ("*****+", 1),
    ("~**~**", 2),
    ("~***~*", 2),
    ("~****+", 2),
    ("*~*~**", 2),
    ("*~**~*", 2),
    ("*~***+", 2),
    ("**+~**", 2),
    ("**+*~*", 2),
    ("**+**+", 2),
    ("~~****", 1),
    ("~*+***", 1),
    ("*~+***", 1),
    ("***~~*", 1),
    ("***~*+", 1),
    ("****~+", 1),
    ("~~*~**", 2),
    ("~~**~*", 2),
    ("~~***+", 2),
    ("~*+~**", 2),
    ("~*+*~*", 2),
    ("~*+**+", 2),
    ("~**~~*", 2),
    ("~**~*+", 2),
    ("~***~+", 2),
    ("*~+~**", 2),
    ("*~+*~*", 2),
    ("*~+**+", 2),
    ("*~*~~*", 2),
    ("*~*~*+", 2),
    ("*~**~+", 2),
    ("**+~~*", 2),
    ("**+~*+", 2),
    ("**+*~+", 2),
    ("~~+***", 1),
    ("***~~+", 1),
    ("~~+~**", 2),
    ("~~+*~*", 2),
    ("~~+**+", 2),
    ("~~*~~*", 2),
    ("~~*~*+", 2),
    ("~~**~+", 2),
    ("~*+~~*", 2),
    ("~*+~*+", 2),
    ("~*+*~+", 2),
    ("~**~~+", 2),
    ("*~+~~*", 2),
    ("*~+~*+", 2),
    ("*~+*~+", 2),
    ("*~*~~+", 2),
    ("**+~~+", 2),
    ("~~+~~*", 2),
    ("~~+~*+", 2),
    ("~~+*~+", 2),
    ("~~*~~+", 2),
    ("~*+~~+", 2),
    ("*~+~~+", 2),
    ("~~+~~+", 2),
)

ASYM_FIXED = (
    ("****", (0, 0)),
    ("~***", (1, 0)),
    ("*~**", (1, 0)),
    ("**~*", (0, 1)),
    ("***~", (0, 1)),
    ("~*~*", (1, 1)),
    ("~**~", (1, 1)),
    ("*~~*", (1, 1)),
    ("*~*~", (1, 1)),
    ("~~**", (2, 0)),
    ("**~~", (0, 2)),
    ("~*~~", (1, 2)),
    ("*~~~", (1, 2)),
    ("~~~*", (2, 1)),
    ("~~*~", (2, 1)),
    ("~~~~", (2, 2)),
)

ASYM_REMOVABLE = (
    ("******", (0, 0)),
    ("~*****", (1, 0)),
    ("*~****", (1, 0)),
    ("**+***", (1, 0)),
    ("***~**", (0, 1)),
    ("****~*", (0, 1)),
    ("*****+", (0, 1)),
    ("~**~**", (1, 1)),
    ("~***~*", (1, 1)),
    ("~****+", (1, 1)),
    ("*~*~**", (1, 1)),
    ("*~**~*", (1, 1)),
    ("*~***+", (1, 1)),
    ("**+~**", (1, 1)),
    ("**+*~*", (1, 1)),
    ("**+**+", (1, 1)),
    ("~~****", (2, 0)),
    ("~*+***", (2, 0)),
    ("*~+***", (2, 0)),
    ("***~~*", (0, 2)),
    ("***~*+", (0, 2)),
    ("****~+", (0, 2)),
    ("~~*~**", (2, 1)),
    ("~~**~*", (2, 1)),
    ("~~***+", (2, 1)),
    ("~*+~**", (2, 1)),
    ("~*+*~*", (2, 1)),
    ("~*+**+", (2, 1)),
    ("~**~~*", (1, 2)),
    ("~**~*+", (1, 2)),
    ("~***~+", (1, 2)),
    ("*~+~**", (2, 1)),
    ("*~+*~*", (2, 1)),
    ("*~+**+", (2, 1)),
    ("*~*~~*", (1, 2)),
    ("*~*~*+", (1, 2)),
    ("*~**~+", (1, 2)),
    ("**+~~*", (1, 2)),
    ("**+~*+", (1, 2)),
    ("**+*~+", (1, 2)),
    ("~~+***", (3, 0)),
    ("***~~+", (0, 3)),
    ("~~+~**", (3, 1)),
    ("~~+*~*", (3, 1)),
    ("~~+**+", (3, 1)),
    ("~~*~~*", (2, 2)),
    ("~~*~*+", (2, 2)),
    ("~~**~+", (2, 2)),
    ("~*+~~*", (2, 2)),
    ("~*+~*+", (2, 2)),
    ("~*+*~+", (2, 2)),
    ("~**~~+", (1, 3)),
    ("*~*~~+", (1, 3)),
    ("**+~~+", (1, 3)),
    ("*~+~~*", (2, 2)),
    ("*~+~*+", (2, 2)),
    ("*~+*~+", (2, 2)),
    ("~~+~~*", (3, 2)),
    ("~~+~*+", (3, 2)),
    ("~~+*~+", (3, 2)),
    ("~~*~~+", (2, 3)),
    ("~*+~~+", (2, 3)),
    ("*~+~~+", (2, 3)),
    ("~~+~~+", (3, 3)),
)


def _joint_constraints(indexer, rows, rhs_of) -> list[Constraint]:
    constraints = []
    for pattern_text, exponent in rows:
        pattern = Pattern.parse(pattern_text, indexer.spec)
        constraints.append(
            Constraint(marginal_expr(indexer, pattern), "=", rhs_of(exponent))
        )
    return constraints


def _symmetric_rhs(eta: Fraction):
    return lambda k: eta**k

def _asym_rhs(eta_a: Fraction, eta_b: Fraction):
    return lambda ij: eta_a ** ij[0] * eta_b ** ij[1]


# --- builders -----------------------------------------------------------------


def _fs_level_rows(family: Family, level: Level):
    if family is Family.FS_FIXED:
        rows = list(FS_FIXED_MARGINAL)
        if level in (Level.FACTUAL_INDEPENDENCE, Level.FULL):
            rows += FS_FIXED_FACTUAL
        if level is Level.FULL:
            rows += FS_FIXED_FULL
        return rows
    rows = list(FS_REMOVABLE_MARGINAL)
    if level in (Level.FACTUAL_INDEPENDENCE, Level.FULL):
        rows += FS_REMOVABLE_FACTUAL
    if level is Level.FULL:
        rows += FS_REMOVABLE_FULL
    return rows


def build(scenario: ScenarioId, params: Params) -> ScenarioModel:
    """Build the exact constraint set of a family at bound parameters."""
    family = scenario.family
    params.require(family)

    if family is Family.IDEAL_LR:
        indexer = JointIndexer(fixed_space(Alphabet.BINARY_IDEAL))
        total = Pattern.parse("****", indexer.spec)
        constraints = [Constraint(marginal_expr(indexer, total), "=", ONE)]
        names = tuple(indexer.variable_name(i) for i in range(indexer.size))
        return ScenarioModel(scenario, params, indexer, tuple(constraints), names)

    if family is Family.IDEAL_APPARENT_LOCALITY:
        names: list[str] = []
        _table_names(names)
        constraints = _table_totals(0) + apparent_locality_rows(0)
        return ScenarioModel(scenario, params, None, tuple(constraints), tuple(names))

    if family in (Family.FS_FIXED, Family.PCCD_FIXED, Family.ASYM_FIXED):
        indexer = JointIndexer(fixed_space())
    elif family in (Family.FS_REMOVABLE, Family.PCCD_REMOVABLE, Family.ASYM_REMOVABLE):
        indexer = JointIndexer(removable_space())
    elif family is Family.CROSSTALK:
        return _build_crosstalk(scenario, params)
    else:  # pragma: no cover
        raise ParamError(f"unknown family {family}")

    if family in (Family.FS_FIXED, Family.FS_REMOVABLE):
        rows = _fs_level_rows(family, scenario.level)
        rhs = _symmetric_rhs(params.eta)
    elif family is Family.PCCD_FIXED:
        rows = PCCD_FIXED
        rhs = _symmetric_rhs(params.eta)
    elif family is Family.PCCD_REMOVABLE:
        rows = PCCD_REMOVABLE
        rhs = _symmetric_rhs(params.eta)
    elif family is Family.ASYM_FIXED:
        rows = ASYM_FIXED
        rhs = _asym_rhs(params.eta_a, params.eta_b)
    else:
        rows = ASYM_REMOVABLE
        rhs = _asym_rhs(params.eta_a, params.eta_b)

    constraints = _joint_constraints(indexer, rows, rhs)
    names = tuple(indexer.variable_name(i) for i in range(indexer.size))
    return ScenarioModel(scenario, params, indexer, tuple(constraints), names)


def _crosstalk_marginal_pattern(table: int, entry: int) -> str:
    """Joint-space marginal matching observed entry (i, j) of a table."""
    i, j = ENTRIES[entry][0], ENTRIES[entry][1]
    if table == 0:  # AB
        return f"{i}~{j}~"
    if table == 1:  # AB'
        return f"{i}~~{j}"
    if table == 2:  # A'B
        return f"~{i}{j}~"
    return f"~{i}~{j}"  # A'B'


def _build_crosstalk(scenario: ScenarioId, params: Params) -> ScenarioModel:
    """Joint distribution plus observed tables within p_crosstalk of its
    marginals; optionally with apparent-locality equalities on the tables."""
    indexer = JointIndexer(fixed_space(Alphabet.BINARY_IDEAL))
    offset = indexer.size
    names = [indexer.variable_name(i) for i in range(indexer.size)]
    _table_names(names)

    total = Pattern.parse("****", indexer.spec)
    constraints = [Constraint(marginal_expr(indexer, total), "=", ONE)]
    constraints += _table_totals(offset)

    pc = params.p_crosstalk
    for t in range(4):
        for e in range(4):
            observed = LinExpr({table_var(t, e, offset): ONE})
            marginal = marginal_expr(
                indexer, Pattern.parse(_crosstalk_marginal_pattern(t, e), indexer.spec)
            )
            deviation = observed - marginal
            constraints.append(Constraint(deviation, "<=", pc))
            constraints.append(Constraint(deviation.scaled(-1), "<=", pc))

    if params.apparent_locality:
        constraints += apparent_locality_rows(offset)

    return ScenarioModel(
        scenario,
        params,
        indexer,
        tuple(constraints),
        tuple(names),
        observed_offset=offset,
    )


# --- feasibility witnesses ----------------------------------------------------


def _record_measure(alphabet: Alphabet, eta: Fraction) -> dict[str, Fraction]:
    """Detection with probability eta, split evenly over the detection
    letters; no detection otherwise."""
    letters = alphabet.detection_letters
    share = eta / len(letters)
    measure = {letter: share for letter in letters}
    if "0" in alphabet.letters:
        measure["0"] = ONE - eta
    return measure


def _product_witness(indexer: JointIndexer, etas: list[Fraction]) -> tuple[Fraction, ...]:
    measures = [
        _record_measure(alphabet, eta)
        for (_, alphabet), eta in zip(indexer.spec.records, etas)
    ]
    values = []
    for outcome in indexer.tuples():
        mass = ONE
        for letter, measure in zip(outcome, measures):
            mass *= measure.get(letter, ZERO)
        values.append(mass)
    return tuple(values)


def _side_token_witness(indexer: JointIndexer, eta: Fraction) -> tuple[Fraction, ...]:
    """Witness for the correlated-counterfactual-detection families: a
    per-side 'detectability' token makes all of a side's records detect
    together (each detecting record then uniform over {+, -})."""
    spec = indexer.spec
    half = len(spec) // 2
    values = [ZERO] * indexer.size
    side_states = []
    for detect in (True, False):
        side_states.append((detect, eta if detect else ONE - eta))
    for a_detect, a_mass in side_states:
        for b_detect, b_mass in side_states:
            mass_base = a_mass * b_mass
            if mass_base == 0:
                continue
            choices = []
            for pos, (_, alphabet) in enumerate(spec.records):
                detect = a_detect if pos < half else b_detect
                if detect:
                    letters = alphabet.detection_letters
                    choices.append([(l, Fraction(1, len(letters))) for l in letters])
                else:
                    choices.append([("0", ONE)])
            stack = [((), ONE)]
            for options in choices:
                stack = [
                    (prefix + (letter,), mass * share)
                    for prefix, mass in stack
                    for letter, share in options
                ]
            for outcome, mass in stack:
                values[indexer.index_of(outcome)] += mass_base * mass
    return tuple(values)


def feasibility_witness(scenario: ScenarioId, params: Params) -> tuple[Fraction, ...]:
    """An explicit assignment satisfying every constraint of ``build``."""
    family = scenario.family
    params.require(family)

    if family is Family.IDEAL_LR:
        indexer = JointIndexer(fixed_space(Alphabet.BINARY_IDEAL))
        return tuple([Fraction(1, indexer.size)] * indexer.size)

    if family is Family.IDEAL_APPARENT_LOCALITY:
        return tuple([Fraction(1, 4)] * 16)

    if family in (Family.FS_FIXED, Family.ASYM_FIXED):
        indexer = JointIndexer(fixed_space())
        if family is Family.FS_FIXED:
            etas = [params.eta] * 4
        else:
            etas = [params.eta_a, params.eta_a, params.eta_b, params.eta_b]
        return _product_witness(indexer, etas)

    if family in (Family.FS_REMOVABLE, Family.ASYM_REMOVABLE):
        indexer = JointIndexer(removable_space())
        if family is Family.FS_REMOVABLE:
            etas = [params.eta] * 6
        else:
            ea, eb = params.eta_a, params.eta_b
            etas = [ea, ea, ea, eb, eb, eb]
        return _product_witness(indexer, etas)

    if family is Family.PCCD_FIXED:
        return _side_token_witness(JointIndexer(fixed_space()), params.eta)

    if family is Family.PCCD_REMOVABLE:
        return _side_token_witness(JointIndexer(removable_space()), params.eta)

    # crosstalk: uniform joint distribution, observed tables equal to its
    # marginals (deviation 0 <= p_crosstalk always)
    indexer = JointIndexer(fixed_space(Alphabet.BINARY_IDEAL))
    joint = [Fraction(1, indexer.size)] * indexer.size
    observed = []
    for t in range(4):
        for e in range(4):
            pattern = Pattern.parse(_crosstalk_marginal_pattern(t, e), indexer.spec)
            observed.append(marginal_expr(indexer, pattern).evaluate(joint))
    return tuple(joint + observed)
