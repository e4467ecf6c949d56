"""Bell-quantity functionals, normalization and quantum closed forms."""

from fractions import Fraction as F

import pytest

from bellbounds.bellq import (
    DELTA,
    DELTA_F,
    DELTA_PRIME,
    S,
    BellKind,
    BellQuantity,
    QuantityError,
    delta_from_extrema,
    normalize,
    objective,
    qt_bound,
)
from bellbounds.outcomes import Pattern, marginal_expr
from bellbounds.qtforms import Sqrt2
from bellbounds.scenarios import Family, Params, ScenarioId, build


def test_s_functional_on_ideal_lr():
    model = build(ScenarioId(Family.IDEAL_LR), Params())
    expr = objective(S, model)
    assert len(expr.terms) == 16  # every joint tuple contributes
    # unit mass on the all-plus strategy: agreements on all four pairs
    values = [F(0)] * 16
    values[model.indexer.index_of(("+", "+", "+", "+"))] = F(1)
    assert expr.evaluate(values) == 2


def test_s_antisymmetric_under_one_arm_relabel():
    model = build(ScenarioId(Family.IDEAL_LR), Params())
    expr = objective(S, model)
    indexer = model.indexer
    flip = {"+": "-", "-": "+"}
    for outcome in indexer.tuples():
        flipped = (outcome[0], outcome[1], flip[outcome[2]], flip[outcome[3]])
        assert expr.terms[indexer.index_of(outcome)] == -expr.terms[
            indexer.index_of(flipped)
        ]


def test_delta_prime_functional_matches_manual_patterns():
    model = build(ScenarioId(Family.FS_FIXED), Params(eta=F(1, 2)))
    indexer = model.indexer

    def pat(text):
        return marginal_expr(indexer, Pattern.parse(text, indexer.spec))

    manual = (
        pat("+*+*") - pat("+**+") + pat("*++*") + pat("*+*+") - pat("*+**") - pat("**+*")
    )
    assert objective(DELTA_PRIME, model) == manual


def test_delta_functional_on_removable_matches_manual_patterns():
    model = build(ScenarioId(Family.FS_REMOVABLE), Params(eta=F(1, 2)))
    indexer = model.indexer

    def pat(text):
        return marginal_expr(indexer, Pattern.parse(text, indexer.spec))

    manual = (
        pat("+**+**")
        - pat("+***+*")
        + pat("*+*+**")
        + pat("*+**+*")
        - pat("*+***+")
        - pat("**++**")
    )
    assert objective(DELTA, model) == manual


def test_s_on_crosstalk_uniform_tables_vanishes():
    model = build(ScenarioId(Family.CROSSTALK), Params(p_crosstalk=F(1, 16)))
    expr = objective(S, model)
    values = [F(0)] * model.variable_count
    for i in range(16, 32):
        values[i] = F(1, 4)
    assert expr.evaluate(values) == 0


def test_quantity_family_compatibility():
    fs_fixed = build(ScenarioId(Family.FS_FIXED), Params(eta=F(1, 2)))
    with pytest.raises(QuantityError):
        objective(DELTA, fs_fixed)  # needs removable records
    removable = build(ScenarioId(Family.FS_REMOVABLE), Params(eta=F(1, 2)))
    with pytest.raises(QuantityError):
        objective(S, removable)
    crosstalk = build(ScenarioId(Family.CROSSTALK), Params(p_crosstalk=F(0)))
    with pytest.raises(QuantityError):
        objective(DELTA_PRIME, crosstalk)
    with pytest.raises(QuantityError):
        objective(DELTA_F, fs_fixed)


def test_delta_from_extrema():
    assert delta_from_extrema(F(0), F(-1)) == F(1, 4)
    assert delta_from_extrema(F(1, 2), F(-3, 2)) == F(1, 2)
    assert delta_from_extrema(F(5, 7), F(5, 7)) == 0
    with pytest.raises(ValueError):
        delta_from_extrema(F(-1), F(0))


def test_normalize():
    assert normalize(F(207, 128), S, Params(eta=F(3, 4))) == F(23, 8)
    assert F(23, 8) == -2 * F(3, 4) ** 2 + 4  # cross-check the closed form
    assert normalize(F(5, 9), S, Params(eta=F(1))) == F(5, 9)
    assert normalize(F(1, 3), S, Params(eta_a=F(1), eta_b=F(1, 2))) == F(2, 3)
    with pytest.raises(ValueError):
        normalize(F(1), S, Params(eta=F(0)))


def test_qt_bound_ideal_and_normalized():
    ideal = qt_bound(S, Params())
    assert ideal.upper == Sqrt2(0, 2)
    assert ideal.lower == Sqrt2(0, -2)
    normalized = qt_bound(BellQuantity(BellKind.DELTA_F, normalized=True), Params(eta=F(1, 2)))
    assert normalized.lower is None
    assert normalized.upper == Sqrt2(0, F(1, 4))


def test_qt_bound_vanishes_at_single_channel_threshold():
    # upper bound (1+sqrt2)/2 eta^2 - eta has its root at 2(sqrt2 - 1)
    root = Sqrt2(-2, 2)
    from bellbounds.qtforms import qt_formula

    formula = qt_formula("delta-prime", "upper", "fs-symmetric")
    # evaluate symbolically: c2*root^2 + c1*root where root = -2 + 2*sqrt2
    c1, c2 = formula.coefficients[1], formula.coefficients[2]
    value = c2 * root * root + c1 * root
    assert value.sign() == 0


def test_qt_bound_asym_s_and_restriction():
    bound = qt_bound(S, Params(eta_a=F(1), eta_b=F(1, 2)))
    assert bound.upper == Sqrt2(0, 1)  # 2*sqrt2 * 1/2
    with pytest.raises(LookupError):
        qt_bound(DELTA, Params(eta_a=F(1), eta_b=F(1, 2)))
    normalized = qt_bound(
        BellQuantity(BellKind.DELTA, normalized=True), Params(eta_a=F(1), eta_b=F(1, 2))
    )
    assert normalized.upper == Sqrt2(F(-1, 2), F(1, 2))


def test_qt_lr_interval_containment_at_unit_efficiency():
    # local-realistic interval [-2, 2] sits inside quantum [-2*sqrt2, 2*sqrt2],
    # which sits inside the apparent-locality interval [-4, 4]
    qt = qt_bound(S, Params())
    assert Sqrt2(2) < qt.upper < Sqrt2(4)
    assert Sqrt2(-4) < qt.lower < Sqrt2(-2)
