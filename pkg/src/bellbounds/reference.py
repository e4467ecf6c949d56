"""Audited registry of the local-realistic closed-form bounds.

Everything the LP engine is expected to reproduce lives here as exact
rational data: the ideal-detection constants, the fair-sampling and
correlated-counterfactual-detection polynomial bounds in the symmetric
detection efficiency, the intermediate (factual-independence-only)
two-segment bound, the asymmetric bivariate forms, and the crosstalk cap.

Keeping the forms in one place means every comparison in the test-suite,
the threshold analysis and the reproduction CLI cites a single source.

Univariate forms are :class:`~bellbounds.sweep.PiecewiseBound` values over
the efficiency in [0, 1]; bivariate forms are mappings
``(i, j) -> coefficient`` for the monomials ``eta_a**i * eta_b**j``.
"""

from __future__ import annotations

from fractions import Fraction

from .bellq import BellKind
from .sweep import single_segment, two_segments

F = Fraction


def _interval(lower, upper) -> dict[str, Fraction | None]:
    return {
        "lower": None if lower is None else F(lower),
        "upper": None if upper is None else F(upper),
    }


# ideal detection: exact constant intervals (delta-f is one-sided)
IDEAL_APPARENT_LOCALITY_BOUNDS = {
    BellKind.S: _interval(-4, 4),
    BellKind.DELTA_PRIME: _interval(F(-3, 2), F(1, 2)),
    BellKind.DELTA: _interval(F(-3, 2), F(1, 2)),
    BellKind.DELTA_F: _interval(None, F(1, 2)),
}

IDEAL_LR_BOUNDS = {
    BellKind.S: _interval(-2, 2),
    BellKind.DELTA_PRIME: _interval(-1, 0),
    BellKind.DELTA: _interval(-1, 0),
    BellKind.DELTA_F: _interval(None, F(1, 4)),
}


# local realism + fair-sampling detection, symmetric efficiency
LRFSD = {
    (BellKind.S, "upper"): single_segment((0, 0, 4, 0, -2)),
    (BellKind.S, "lower"): single_segment((0, 0, -4, 0, 2)),
    (BellKind.DELTA_PRIME, "upper"): single_segment((0,)),
    (BellKind.DELTA_PRIME, "lower"): single_segment((0, -2, 0, 2, -1)),
    (BellKind.DELTA, "upper"): single_segment((0, 0, 3, -4, 2, -2, 1)),
    (BellKind.DELTA, "lower"): single_segment((0, 0, -3, 0, 3, 0, -1)),
    (BellKind.DELTA_F, "upper"): single_segment(
        (0, 0, F(3, 2), -1, F(-1, 4), F(-1, 2), F(1, 2))
    ),
}

LRFSD_NORMALIZED = {
    (BellKind.S, "upper"): single_segment((4, 0, -2)),
    (BellKind.S, "lower"): single_segment((-4, 0, 2)),
    (BellKind.DELTA, "upper"): single_segment((3, -4, 2, -2, 1)),
    (BellKind.DELTA, "lower"): single_segment((-3, 0, 3, 0, -1)),
    (BellKind.DELTA_F, "upper"): single_segment(
        (F(3, 2), -1, F(-1, 4), F(-1, 2), F(1, 2))
    ),
}


# intermediate level: only factual detections independent across arms.
# The S bound then has a kink at efficiency 2/3 (normalized: constant 4,
# then 4/eta - 2).
FACTUAL_INDEPENDENCE_S = {
    "upper": two_segments((0, 0, 4), F(2, 3), (0, 4, -2)),
    "lower": two_segments((0, 0, -4), F(2, 3), (0, -4, 2)),
}


# local realism + perfectly correlated counterfactual detection
LRPCCD = {
    (BellKind.S, "upper"): single_segment((0, 0, 2)),
    (BellKind.S, "lower"): single_segment((0, 0, -2)),
    (BellKind.DELTA_PRIME, "upper"): single_segment((0,)),
    (BellKind.DELTA_PRIME, "lower"): single_segment((0, -2, 1)),
    (BellKind.DELTA, "upper"): single_segment((0,)),
    (BellKind.DELTA, "lower"): single_segment((0, 0, -1)),
    (BellKind.DELTA_F, "upper"): single_segment((0, 0, F(1, 4))),
}

LRPCCD_NORMALIZED_BOUNDS = {
    BellKind.S: _interval(-2, 2),
    BellKind.DELTA: _interval(-1, 0),
    BellKind.DELTA_F: _interval(None, F(1, 4)),
}


# asymmetric arms: bivariate monomial maps (i, j) -> coeff of a^i b^j.
#
# The lower bound of the single-channel statistic is stated here with its
# two trailing degree-one terms (-a - b); the corresponding display in the
# source text drops them, which cannot be right: without them the "lower"
# bound at ideal efficiencies evaluates to +1, above the upper bound 0,
# and the symmetric specialization misses -eta^4 + 2 eta^3 - 2 eta.  The
# LP optima confirm the restored form on the full validation grid.
ASYM = {
    (BellKind.S, "upper"): {(2, 2): F(-2), (1, 1): F(4)},
    (BellKind.S, "lower"): {(2, 2): F(2), (1, 1): F(-4)},
    (BellKind.DELTA_PRIME, "upper"): {},
    (BellKind.DELTA_PRIME, "lower"): {
        (2, 2): F(-1),
        (2, 1): F(1),
        (1, 2): F(1),
        (1, 0): F(-1),
        (0, 1): F(-1),
    },
    (BellKind.DELTA, "upper"): {
        (3, 3): F(1),
        (3, 2): F(-1),
        (2, 3): F(-1),
        (3, 1): F(1),
        (1, 3): F(1),
        (2, 1): F(-2),
        (1, 2): F(-2),
        (1, 1): F(3),
    },
    (BellKind.DELTA, "lower"): {(3, 3): F(-1), (2, 2): F(3), (1, 1): F(-3)},
    (BellKind.DELTA_F, "upper"): {
        (3, 3): F(1, 2),
        (3, 2): F(-1, 4),
        (2, 3): F(-1, 4),
        (2, 2): F(-3, 4),
        (3, 1): F(1, 4),
        (1, 3): F(1, 4),
        (2, 1): F(-1, 2),
        (1, 2): F(-1, 2),
        (1, 1): F(3, 2),
    },
}

ASYM_NORMALIZED = {
    (BellKind.S, "upper"): {(1, 1): F(-2), (0, 0): F(4)},
    (BellKind.S, "lower"): {(1, 1): F(2), (0, 0): F(-4)},
    (BellKind.DELTA, "upper"): {
        (2, 2): F(1),
        (2, 1): F(-1),
        (1, 2): F(-1),
        (2, 0): F(1),
        (0, 2): F(1),
        (1, 0): F(-2),
        (0, 1): F(-2),
        (0, 0): F(3),
    },
    (BellKind.DELTA, "lower"): {(2, 2): F(-1), (1, 1): F(3), (0, 0): F(-3)},
    (BellKind.DELTA_F, "upper"): {
        (2, 2): F(1, 2),
        (2, 1): F(-1, 4),
        (1, 2): F(-1, 4),
        (1, 1): F(-3, 4),
        (2, 0): F(1, 4),
        (0, 2): F(1, 4),
        (1, 0): F(-1, 2),
        (0, 1): F(-1, 2),
        (0, 0): F(3, 2),
    },
}


def crosstalk_s_cap(p_crosstalk: Fraction) -> Fraction:
    """Largest |S| compatible with local realism and ideal detection when
    observed tables may deviate from the joint marginals by at most
    ``p_crosstalk``: 2 + 16 p, saturating at the algebraic maximum 4."""
    return min(2 + 16 * F(p_crosstalk), F(4))


# printed four-decimal critical efficiencies, for reproduction checks
CRITICAL_EFFICIENCY_DECIMALS = {
    ("S", "upper"): "0.7654",
    ("delta-prime", "upper"): "0.8284",
    ("delta-prime", "lower"): "0.8452",
    ("delta", "upper"): "0.9047",
    ("delta", "lower"): "0.9077",
    ("delta-f", "upper"): "0.9062",
}
