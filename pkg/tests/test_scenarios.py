"""Scenario construction: transcription audits, witnesses, level nesting."""

from fractions import Fraction as F

import pytest

from bellbounds.bellq import S, objective
from bellbounds.ratlp import LinExpr, LpModel, solve
from bellbounds.scenarios import (
    Family,
    Level,
    ParamError,
    Params,
    ScenarioId,
    build,
    feasibility_witness,
)
from bellbounds.serialize import parse_scenario_text, scenario_text

GRID = (F(0), F(1, 4), F(1, 2), F(3, 4), F(1))


def count_by_relation(model):
    counts = {"=": 0, "<=": 0, ">=": 0}
    for con in model.constraints:
        counts[con.relation] += 1
    return counts


# expected row counts transcribe the displayed equality lists one-to-one
# (each chained equality expanded to one row per member)
AUDIT = [
    (ScenarioId(Family.IDEAL_LR), Params(), {"=": 1, "<=": 0}),
    (ScenarioId(Family.IDEAL_APPARENT_LOCALITY), Params(), {"=": 12, "<=": 0}),
    (ScenarioId(Family.FS_FIXED, Level.MARGINAL_ONLY), Params(eta=F(1, 2)), {"=": 5, "<=": 0}),
    (ScenarioId(Family.FS_FIXED, Level.FACTUAL_INDEPENDENCE), Params(eta=F(1, 2)), {"=": 9, "<=": 0}),
    (ScenarioId(Family.FS_FIXED), Params(eta=F(1, 2)), {"=": 16, "<=": 0}),
    (ScenarioId(Family.FS_REMOVABLE, Level.MARGINAL_ONLY), Params(eta=F(1, 2)), {"=": 7, "<=": 0}),
    (ScenarioId(Family.FS_REMOVABLE, Level.FACTUAL_INDEPENDENCE), Params(eta=F(1, 2)), {"=": 16, "<=": 0}),
    (ScenarioId(Family.FS_REMOVABLE), Params(eta=F(1, 2)), {"=": 64, "<=": 0}),
    (ScenarioId(Family.PCCD_FIXED), Params(eta=F(1, 2)), {"=": 16, "<=": 0}),
    (ScenarioId(Family.PCCD_REMOVABLE), Params(eta=F(1, 2)), {"=": 64, "<=": 0}),
    (ScenarioId(Family.ASYM_FIXED), Params(eta_a=F(1, 2), eta_b=F(1, 3)), {"=": 16, "<=": 0}),
    (ScenarioId(Family.ASYM_REMOVABLE), Params(eta_a=F(1, 2), eta_b=F(1, 3)), {"=": 64, "<=": 0}),
    (ScenarioId(Family.CROSSTALK), Params(p_crosstalk=F(1, 16)), {"=": 5, "<=": 32}),
    (
        ScenarioId(Family.CROSSTALK),
        Params(p_crosstalk=F(1, 16), apparent_locality=True),
        {"=": 13, "<=": 32},
    ),
]


@pytest.mark.parametrize("scenario,params,expected", AUDIT)
def test_transcription_audit(scenario, params, expected):
    model = build(scenario, params)
    counts = count_by_relation(model)
    assert counts["="] == expected["="]
    assert counts["<="] == expected["<="]
    assert counts[">="] == 0


@pytest.mark.parametrize("scenario,params,expected", AUDIT)
def test_variable_catalog_covers_constraints(scenario, params, expected):
    model = build(scenario, params)
    hi = max(
        (max(con.lhs.terms, default=-1) for con in model.constraints), default=-1
    )
    assert hi < model.variable_count == len(model.variable_names)


def test_detection_model_lists_share_left_hand_sides():
    # the three removable-space lists (and the three fixed-space lists)
    # constrain the same marginal patterns, differing only in right-hand
    # sides; any transcription slip would break the multiset equality
    from bellbounds import scenarios as sc

    removable = [
        [p for p, _ in sc.PCCD_REMOVABLE],
        [p for p, _ in sc.FS_REMOVABLE_MARGINAL + sc.FS_REMOVABLE_FACTUAL + sc.FS_REMOVABLE_FULL],
        [p for p, _ in sc.ASYM_REMOVABLE],
    ]
    assert [sorted(r) for r in removable] == [sorted(removable[0])] * 3
    assert len(set(removable[0])) == len(removable[0]) == 64
    fixed = [
        [p for p, _ in sc.PCCD_FIXED],
        [p for p, _ in sc.FS_FIXED_MARGINAL + sc.FS_FIXED_FACTUAL + sc.FS_FIXED_FULL],
        [p for p, _ in sc.ASYM_FIXED],
    ]
    assert [sorted(r) for r in fixed] == [sorted(fixed[0])] * 3
    assert len(set(fixed[0])) == len(fixed[0]) == 16


def witness_cases():
    for family in (Family.IDEAL_LR, Family.IDEAL_APPARENT_LOCALITY):
        yield ScenarioId(family), Params()
    for family in (Family.FS_FIXED, Family.FS_REMOVABLE):
        for level in Level:
            for eta in GRID:
                yield ScenarioId(family, level), Params(eta=eta)
    for family in (Family.PCCD_FIXED, Family.PCCD_REMOVABLE):
        for eta in GRID:
            yield ScenarioId(family), Params(eta=eta)
    for a in GRID:
        yield ScenarioId(Family.ASYM_FIXED), Params(eta_a=a, eta_b=F(1, 3))
        yield ScenarioId(Family.ASYM_REMOVABLE), Params(eta_a=F(2, 3), eta_b=a)
    for pc in GRID:
        yield ScenarioId(Family.CROSSTALK), Params(p_crosstalk=pc)


@pytest.mark.parametrize(
    "scenario,params", list(witness_cases()), ids=lambda v: str(v)
)
def test_feasibility_witness_satisfies_all_constraints(scenario, params):
    model = build(scenario, params)
    witness = feasibility_witness(scenario, params)
    assert len(witness) == model.variable_count
    assert all(x >= 0 for x in witness)
    for con in model.constraints:
        assert con.satisfied_by(witness), con


def test_witness_values_fair_sampling_half():
    # at efficiency 1/2 every all-detection sign tuple carries (1/4)^4
    scenario = ScenarioId(Family.FS_FIXED)
    witness = feasibility_witness(scenario, Params(eta=F(1, 2)))
    model = build(scenario, Params(eta=F(1, 2)))
    indexer = model.indexer
    signs = [
        witness[indexer.index_of(t)]
        for t in indexer.tuples()
        if all(letter in "+-" for letter in t)
    ]
    assert len(signs) == 16
    assert all(v == F(1, 256) for v in signs)
    assert sum(signs) == F(1, 16)  # the all-detection mass, efficiency^4


def test_witness_asym_dead_arm():
    scenario = ScenarioId(Family.ASYM_FIXED)
    params = Params(eta_a=F(1), eta_b=F(0))
    model = build(scenario, params)
    witness = feasibility_witness(scenario, params)
    indexer = model.indexer
    for t in indexer.tuples():
        if t[2] in "+-" or t[3] in "+-":
            assert witness[indexer.index_of(t)] == 0
    # every constraint whose pattern needs a B-side detection has rhs 0
    for con in model.constraints:
        assert con.satisfied_by(witness)


def _opt(model, sense, q=S):
    lp = LpModel(model.variable_count, model.constraints, objective(q, model), sense)
    sol = solve(lp)
    assert sol.status == "optimal"
    return sol.value


def test_level_nesting_monotone():
    for eta in (F(1, 4), F(1, 2), F(3, 4), F(1)):
        values = [
            _opt(build(ScenarioId(Family.FS_FIXED, level), Params(eta=eta)), "maximize")
            for level in (Level.MARGINAL_ONLY, Level.FACTUAL_INDEPENDENCE, Level.FULL)
        ]
        assert values[0] >= values[1] >= values[2]


def test_full_level_at_unit_efficiency_matches_ideal():
    model = build(ScenarioId(Family.FS_FIXED), Params(eta=F(1)))
    assert _opt(model, "maximize") == 2
    assert _opt(model, "minimize") == -2
    # no-detection outcomes are forced off the support
    indexer = model.indexer
    zero_tuples = [t for t in indexer.tuples() if "0" in t]
    for t in zero_tuples[:5] + zero_tuples[-5:]:
        lp = LpModel(
            model.variable_count,
            model.constraints,
            LinExpr({indexer.index_of(t): F(1)}),
            "maximize",
        )
        assert solve(lp).value == 0


def test_asym_diagonal_specializes_to_symmetric():
    for eta in (F(1, 2), F(3, 4), F(1)):
        sym = _opt(build(ScenarioId(Family.FS_FIXED), Params(eta=eta)), "maximize")
        asym = _opt(
            build(ScenarioId(Family.ASYM_FIXED), Params(eta_a=eta, eta_b=eta)),
            "maximize",
        )
        assert sym == asym


def test_crosstalk_zero_recovers_ideal_bounds():
    model = build(ScenarioId(Family.CROSSTALK), Params(p_crosstalk=F(0)))
    assert _opt(model, "maximize") == 2
    assert _opt(model, "minimize") == -2
    # deviation rows collapse to equalities: observed minus marginal is 0
    obs = model.observed_offset
    joint = model.indexer
    from bellbounds.outcomes import Pattern, marginal_expr
    from bellbounds.scenarios import _crosstalk_marginal_pattern

    gap = LinExpr({obs: F(1)}) - marginal_expr(
        joint, Pattern.parse(_crosstalk_marginal_pattern(0, 0), joint.spec)
    )
    for sense in ("maximize", "minimize"):
        lp = LpModel(model.variable_count, model.constraints, gap, sense)
        assert solve(lp).value == 0


def test_param_validation():
    with pytest.raises(ParamError):
        build(ScenarioId(Family.FS_FIXED), Params())  # missing eta
    with pytest.raises(ParamError):
        build(ScenarioId(Family.IDEAL_LR), Params(eta=F(1, 2)))  # irrelevant
    with pytest.raises(ParamError):
        build(ScenarioId(Family.CROSSTALK), Params(p_crosstalk=F(1, 4), eta=F(1)))
    with pytest.raises(ParamError):
        Params(eta=F(3, 2))  # outside [0, 1]
    with pytest.raises(ParamError):
        ScenarioId(Family.PCCD_FIXED, Level.MARGINAL_ONLY)  # level not staged


def test_descriptor_round_trip():
    cases = [
        (ScenarioId(Family.FS_FIXED, Level.FACTUAL_INDEPENDENCE), Params(eta=F(3, 4))),
        (ScenarioId(Family.ASYM_REMOVABLE), Params(eta_a=F(1, 3), eta_b=F(7, 8))),
        (
            ScenarioId(Family.CROSSTALK),
            Params(p_crosstalk=F(9, 2000), apparent_locality=True),
        ),
        (ScenarioId(Family.IDEAL_LR), Params()),
    ]
    for scenario, params in cases:
        text = scenario_text(scenario, params)
        back_id, back_params = parse_scenario_text(text)
        assert back_id == scenario
        assert back_params == params
        assert scenario_text(back_id, back_params) == text
