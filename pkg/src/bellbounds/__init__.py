"""Exact-arithmetic LP engine for local-realistic Bell-quantity bounds.

Derives the bounds that local realism (with or without detection-model
side hypotheses) places on the CHSH, single-channel and spread statistics
of EPRB experiments: constraint sets are built over joint outcome spaces,
optimized with an exact rational simplex, swept over detection-efficiency
grids, reconstructed into exact piecewise polynomials, and compared against
quantum theory's closed forms to locate critical efficiency and crosstalk
thresholds.
"""

from .bellq import (
    DELTA,
    DELTA_F,
    DELTA_PRIME,
    S,
    BellKind,
    BellQuantity,
    delta_from_extrema,
    normalize,
    objective,
    qt_bound,
)
from .outcomes import (
    Alphabet,
    JointIndexer,
    Pattern,
    RecordSpec,
    fixed_space,
    marginal_expr,
    match_count,
    removable_space,
    space_size,
)
from .ratlp import (
    Constraint,
    LinExpr,
    LpModel,
    LpSolution,
    ModelError,
    certify,
    solve,
)
from .scenarios import (
    Family,
    Level,
    Params,
    ScenarioId,
    ScenarioModel,
    build,
    feasibility_witness,
)
from .sweep import (
    BivariateBoundGrid,
    PiecewiseBound,
    SweepResult,
    bound_at,
    eta_grid,
    reconstruct,
    sweep,
    sweep2,
    verify_closed_form,
)

__all__ = [
    "Alphabet",
    "BellKind",
    "BellQuantity",
    "BivariateBoundGrid",
    "Constraint",
    "DELTA",
    "DELTA_F",
    "DELTA_PRIME",
    "Family",
    "JointIndexer",
    "Level",
    "LinExpr",
    "LpModel",
    "LpSolution",
    "ModelError",
    "Params",
    "Pattern",
    "PiecewiseBound",
    "RecordSpec",
    "S",
    "ScenarioId",
    "ScenarioModel",
    "SweepResult",
    "bound_at",
    "build",
    "certify",
    "delta_from_extrema",
    "eta_grid",
    "feasibility_witness",
    "fixed_space",
    "marginal_expr",
    "match_count",
    "normalize",
    "objective",
    "qt_bound",
    "reconstruct",
    "removable_space",
    "solve",
    "space_size",
    "sweep",
    "sweep2",
    "verify_closed_form",
]

__version__ = "0.1.0"
