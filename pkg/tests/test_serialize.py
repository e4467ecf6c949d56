"""Round trips for descriptors, CSV and piecewise-bound text."""

from fractions import Fraction as F

import pytest

from bellbounds.scenarios import Family, Params, ScenarioId
from bellbounds.serialize import (
    bivariate_csv,
    decimal_text,
    parse_exact_param,
    parse_fraction,
    parse_piecewise_text,
    parse_scenario_text,
    parse_sweep_csv,
    piecewise_text,
    scenario_text,
    sweep_csv,
)
from bellbounds.sweep import (
    BivariateBoundGrid,
    BivariateSample,
    SweepResult,
    SweepSample,
    two_segments,
)
from bellbounds.bellq import S


def test_decimal_text_significant_digits():
    assert decimal_text(F(207, 128)) == "1.6171875"
    assert decimal_text(F(1, 3)) == "0.333333333333"
    assert decimal_text(F(2)) == "2"


def test_parse_exact_param_rejects_decimals():
    assert parse_exact_param("3/4") == F(3, 4)
    assert parse_exact_param(" 2 ") == 2
    with pytest.raises(ValueError):
        parse_exact_param("0.75")
    with pytest.raises(ValueError):
        parse_exact_param("1e-3")


def test_sweep_csv_round_trip():
    samples = (
        SweepSample(Params(eta=F(0)), F(0)),
        SweepSample(Params(eta=F(3, 4)), F(207, 128)),
        SweepSample(Params(eta=F(1)), F(2)),
    )
    result = SweepResult(ScenarioId(Family.FS_FIXED), S, "maximize", samples)
    text = sweep_csv(result)
    rows = parse_sweep_csv(text)
    assert rows == [
        ((F(0),), F(0)),
        ((F(3, 4),), F(207, 128)),
        ((F(1),), F(2)),
    ]
    assert "1.6171875" in text


def test_bivariate_csv_columns():
    grid = BivariateBoundGrid(
        ScenarioId(Family.ASYM_FIXED),
        S,
        "maximize",
        (BivariateSample(F(1), F(1, 2), F(3, 2)),),
    )
    text = bivariate_csv(grid)
    lines = text.strip().splitlines()
    assert lines[0] == "param,param2,value_num,value_den,value_decimal"
    assert lines[1] == "1,1/2,3,2,1.5"


def test_piecewise_text_round_trip():
    bound = two_segments((0, 0, 4), F(2, 3), (0, 4, -2))
    text = piecewise_text(bound)
    back = parse_piecewise_text(text)
    assert back == bound
    assert piecewise_text(back) == text


def test_scenario_text_round_trip_exactness():
    scenario = ScenarioId(Family.FS_REMOVABLE, level=scenario_level())
    params = Params(eta=F(123456789, 987654321))
    text = scenario_text(scenario, params)
    back_id, back_params = parse_scenario_text(text)
    assert back_id == scenario
    assert back_params.eta == params.eta


def scenario_level():
    from bellbounds.scenarios import Level

    return Level.MARGINAL_ONLY


def test_parse_fraction_is_exact():
    assert parse_fraction("105191220119/137438953472") == F(
        105191220119, 137438953472
    )
