"""Solver unit tests: exactness vs brute force, certification, anti-cycling."""

import random
from fractions import Fraction as F

import pytest

from bellbounds.ratlp import (
    Constraint,
    LinExpr,
    LpModel,
    LpSolution,
    ModelError,
    PivotLimitError,
    certify,
    solve,
)
from lp_oracle import enumerate_vertices, optimum_by_enumeration


def box_model():
    return LpModel(
        1,
        (Constraint(LinExpr({0: F(1)}), "<=", F(1)),),
        LinExpr({0: F(1)}),
        "maximize",
    )


def test_single_variable_box():
    sol = solve(box_model())
    assert sol.status == "optimal"
    assert sol.value == 1
    assert sol.vertex == (F(1),)


def test_contradictory_box_infeasible():
    model = LpModel(
        1,
        (
            Constraint(LinExpr({0: F(1)}), ">=", F(2)),
            Constraint(LinExpr({0: F(1)}), "<=", F(1)),
        ),
        LinExpr({0: F(1)}),
        "maximize",
    )
    assert solve(model).status == "infeasible"


def test_unbounded():
    model = LpModel(2, (), LinExpr({0: F(1), 1: F(1)}), "maximize")
    assert solve(model).status == "unbounded"


def test_dangling_variable_index_is_structural_error():
    model = LpModel(
        1, (Constraint(LinExpr({3: F(1)}), "<=", F(1)),), LinExpr({0: F(1)})
    )
    with pytest.raises(ModelError):
        solve(model)


def test_objective_constant_carried():
    model = LpModel(
        1,
        (Constraint(LinExpr({0: F(1)}), "<=", F(2)),),
        LinExpr({0: F(1)}, F(5)),
        "maximize",
    )
    assert solve(model).value == 7


def test_free_variables_via_splitting():
    # min x with -3 <= x <= 1, x unrestricted in sign
    model = LpModel(
        1,
        (
            Constraint(LinExpr({0: F(1)}), ">=", F(-3)),
            Constraint(LinExpr({0: F(1)}), "<=", F(1)),
        ),
        LinExpr({0: F(1)}),
        "minimize",
        non_negative=False,
    )
    sol = solve(model)
    assert sol.value == -3
    assert sol.vertex == (F(-3),)


def test_certify_accepts_solver_output_and_rejects_tampering():
    model = box_model()
    sol = solve(model)
    assert certify(model, sol)
    tampered = LpSolution("optimal", F(3), sol.vertex, sol.dual)
    assert not certify(model, tampered)
    # feasible but suboptimal vertex with consistent value
    sub = LpSolution("optimal", F(0), (F(0),), None)
    assert not certify(model, sub)
    assert not certify(model, LpSolution("infeasible"))


def test_certify_without_dual_falls_back_to_resolve():
    model = box_model()
    sol = solve(model)
    assert certify(model, LpSolution("optimal", sol.value, sol.vertex, None))


def test_certify_apparent_locality_optimum():
    # the two-channel statistic reaches 4 under apparent locality alone,
    # and that optimum certifies
    from bellbounds.bellq import S, objective
    from bellbounds.scenarios import Family, Params, ScenarioId, build

    scenario = build(ScenarioId(Family.IDEAL_APPARENT_LOCALITY), Params())
    model = LpModel(
        scenario.variable_count,
        scenario.constraints,
        objective(S, scenario),
        "maximize",
    )
    sol = solve(model)
    assert sol.value == 4
    assert certify(model, sol)


def test_determinism_bit_identical():
    model = beale_cycling_model()
    assert solve(model) == solve(model)


def beale_cycling_model():
    # classic degenerate example that cycles under naive pivoting
    return LpModel(
        4,
        (
            Constraint(
                LinExpr({0: F(1, 4), 1: F(-60), 2: F(-1, 25), 3: F(9)}), "<=", F(0)
            ),
            Constraint(
                LinExpr({0: F(1, 2), 1: F(-90), 2: F(-1, 50), 3: F(3)}), "<=", F(0)
            ),
            Constraint(LinExpr({2: F(1)}), "<=", F(1)),
        ),
        LinExpr({0: F(3, 4), 1: F(-150), 2: F(1, 50), 3: F(-6)}),
        "maximize",
    )


def test_anti_cycling_on_degenerate_model():
    sol = solve(beale_cycling_model(), max_pivots=1000)
    assert sol.status == "optimal"
    assert sol.value == F(1, 20)
    status, value = optimum_by_enumeration(beale_cycling_model())
    assert (status, value) == ("optimal", F(1, 20))


def test_pivot_cap_raises():
    with pytest.raises(PivotLimitError):
        solve(beale_cycling_model(), max_pivots=1)


def test_scaling_invariance_of_vertex():
    model = beale_cycling_model()
    base = solve(model)
    for factor in (F(3), F(1, 7), F(22, 5)):
        scaled = LpModel(
            model.variable_count,
            model.constraints,
            model.objective.scaled(factor),
            model.sense,
        )
        sol = solve(scaled)
        assert sol.value == base.value * factor
        assert sol.vertex == base.vertex


def _random_model(rng: random.Random) -> LpModel:
    n = rng.randint(2, 5)
    m = rng.randint(2, 6)
    constraints = []
    for _ in range(m):
        terms = {
            i: F(rng.randint(-4, 4), rng.randint(1, 3))
            for i in rng.sample(range(n), rng.randint(1, n))
        }
        terms = {i: c for i, c in terms.items() if c != 0}
        if not terms:
            continue
        relation = rng.choice(("<=", ">=", "="))
        rhs = F(rng.randint(-3, 6), rng.randint(1, 2))
        constraints.append(Constraint(LinExpr(terms), relation, rhs))
    # box keeps the region bounded so vertex enumeration is a complete oracle
    for i in range(n):
        constraints.append(Constraint(LinExpr({i: F(1)}), "<=", F(rng.randint(1, 4))))
    objective = LinExpr({i: F(rng.randint(-5, 5)) for i in range(n)})
    return LpModel(n, tuple(constraints), objective, rng.choice(("maximize", "minimize")))


def test_matches_vertex_enumeration_on_random_small_lps():
    rng = random.Random(987123)
    seen_infeasible = 0
    for _ in range(60):
        model = _random_model(rng)
        expected = optimum_by_enumeration(model)
        sol = solve(model)
        assert sol.status == expected[0]
        if sol.status == "optimal":
            assert sol.value == expected[1]
            assert certify(model, sol)
        else:
            seen_infeasible += 1
    assert seen_infeasible > 0  # the generator should exercise both statuses


def test_moderate_size_against_oracle():
    rng = random.Random(5)
    n, m = 7, 8
    constraints = [
        Constraint(
            LinExpr({i: F(rng.randint(-3, 3)) for i in range(n)}),
            rng.choice(("<=", ">=")),
            F(rng.randint(0, 5)),
        )
        for _ in range(m)
    ]
    constraints += [
        Constraint(LinExpr({i: F(1)}), "<=", F(2)) for i in range(n)
    ]
    model = LpModel(
        n,
        tuple(constraints),
        LinExpr({i: F(rng.randint(-4, 4)) for i in range(n)}),
        "maximize",
    )
    expected = optimum_by_enumeration(model)
    sol = solve(model)
    assert (sol.status, sol.value) == expected


def test_redundant_constraints_tolerated():
    rows = (
        Constraint(LinExpr({0: F(1), 1: F(1)}), "=", F(1)),
        Constraint(LinExpr({0: F(1), 1: F(1)}), "=", F(1)),
        Constraint(LinExpr({0: F(2), 1: F(2)}), "=", F(2)),
        Constraint(LinExpr({0: F(1)}), "<=", F(1)),
    )
    model = LpModel(2, rows, LinExpr({0: F(1)}), "maximize")
    sol = solve(model)
    assert sol.status == "optimal"
    assert sol.value == 1
    assert certify(model, sol)


def test_vertex_is_exactly_feasible_on_degenerate_scenario_like_model():
    # equality-rich, redundancy-rich model with a fractional optimum
    rows = (
        Constraint(LinExpr({0: F(1), 1: F(1), 2: F(1)}), "=", F(1)),
        Constraint(LinExpr({0: F(1), 1: F(1)}), "=", F(2, 3)),
        Constraint(LinExpr({1: F(1), 2: F(1)}), "=", F(5, 7)),
    )
    model = LpModel(3, rows, LinExpr({0: F(1), 2: F(3)}), "maximize")
    sol = solve(model)
    assert sol.status == "optimal"
    assert all(con.satisfied_by(sol.vertex) for con in rows)
    assert sum(sol.vertex) == 1
    assert certify(model, sol)
    status, value = optimum_by_enumeration(model)
    assert (status, value) == ("optimal", sol.value)


def test_enumeration_helper_finds_simplex_vertices():
    model = LpModel(
        3,
        (Constraint(LinExpr({0: F(1), 1: F(1), 2: F(1)}), "=", F(1)),),
        LinExpr({0: F(1)}),
        "maximize",
    )
    vertices = enumerate_vertices(model)
    assert set(vertices) == {
        (F(1), F(0), F(0)),
        (F(0), F(1), F(0)),
        (F(0), F(0), F(1)),
    }
