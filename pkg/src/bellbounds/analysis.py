"""Critical thresholds, crosstalk statistics and an independent LHV oracle.

Critical detection efficiencies are roots of (local-realistic bound minus
quantum-theory bound).  The local-realistic side is an exact rational
polynomial, the quantum side lives in the sqrt(2) ring, so the sign of the
slack is exactly computable at any rational efficiency; bisection therefore
yields a certified enclosure, with decimals produced only for reporting.

The LHV oracle is deliberately independent of the LP machinery: it samples
random local deterministic outcome strategies and computes each strategy's
exact expected Bell quantity analytically over the detection randomness
(independent per-record detection for fair sampling, a shared per-side
detectability token for correlated counterfactual detection).  No sampled
expectation may ever exceed the LP-derived bound.
"""

from __future__ import annotations

import decimal
import random
from dataclasses import dataclass
from fractions import Fraction
from statistics import NormalDist

from .bellq import BellKind, BellQuantity
from .poly import refine_sign_change
from .qtforms import SQRT2, QtFormula, Sqrt2, qt_formula
from .ratlp import as_rational
from .scenarios import Family, Params, ScenarioId
from .sweep import PiecewiseBound, bound_at

ZERO = Fraction(0)
ONE = Fraction(1)

_ENCLOSURE_WIDTH = Fraction(1, 10**8)
_PROBE = Fraction(1, 1024)


class ThresholdError(RuntimeError):
    """No certified sign change of the bound slack inside (0, 1)."""


@dataclass(frozen=True)
class CriticalThreshold:
    """A certified root enclosure of (local-realistic - quantum) slack."""

    quantity: BellQuantity
    side: str
    enclosure: tuple[Fraction, Fraction]
    eta_critical: decimal.Decimal

    def decimal_str(self, places: int = 4) -> str:
        quantum = decimal.Decimal(1).scaleb(-places)
        return str(self.eta_critical.quantize(quantum))


def _midpoint_decimal(lo: Fraction, hi: Fraction, digits: int = 12) -> decimal.Decimal:
    mid = (lo + hi) / 2
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        return +(decimal.Decimal(mid.numerator) / decimal.Decimal(mid.denominator))


def critical_efficiency(
    q: BellQuantity,
    side: str,
    lr_bound: PiecewiseBound,
    qt_form: QtFormula,
) -> CriticalThreshold:
    """Efficiency at which the quantum bound crosses the local-realistic one.

    The slack is oriented so it is positive where quantum theory stays
    inside the local-realistic interval (below threshold) and negative
    above; a unique sign change in (0, 1) is asserted by probes near both
    ends before bisecting to an enclosure of width <= 1e-8.
    """
    if side not in ("upper", "lower"):
        raise ValueError(f"unknown side {side!r}")

    def slack_sign(eta: Fraction) -> int:
        lr = Sqrt2(lr_bound.evaluate(eta))
        qt = qt_form.evaluate(eta)
        gap = lr - qt if side == "upper" else qt - lr
        return gap.sign()

    if slack_sign(_PROBE) <= 0 or slack_sign(ONE) >= 0:
        raise ThresholdError(
            f"no critical threshold in (0, 1) for {q.label()}/{side}"
        )
    lo, hi = refine_sign_change(slack_sign, _PROBE, ONE, _ENCLOSURE_WIDTH)
    return CriticalThreshold(q, side, (lo, hi), _midpoint_decimal(lo, hi))


def critical_efficiency_table() -> list[CriticalThreshold]:
    """The six critical efficiencies of the symmetric fair-sampling bounds.

    The two-channel statistic has one threshold (its two sides mirror each
    other); both single-channel statistics split by side; the spread
    statistic is one-sided.
    """
    from . import reference  # deferred: reference imports sweep

    rows: list[tuple[BellQuantity, str]] = [
        (BellQuantity(BellKind.S), "upper"),
        (BellQuantity(BellKind.DELTA_PRIME), "upper"),
        (BellQuantity(BellKind.DELTA_PRIME), "lower"),
        (BellQuantity(BellKind.DELTA), "upper"),
        (BellQuantity(BellKind.DELTA), "lower"),
        (BellQuantity(BellKind.DELTA_F), "upper"),
    ]
    return [
        critical_efficiency(
            q,
            side,
            reference.LRFSD[(q.kind, side)],
            qt_formula(q.kind.value, side, "fs-symmetric"),
        )
        for q, side in rows
    ]


def asym_critical_product() -> tuple[Sqrt2, decimal.Decimal]:
    """Efficiency product below which quantum theory stays within the
    normalized two-channel bound: the root of (4 - 2x) - 2*sqrt(2)."""
    product = Sqrt2(Fraction(2)) - SQRT2  # 2 - sqrt(2)
    return product, product.to_decimal(12)


# --- crosstalk ------------------------------------------------------------


def crosstalk_floor(delta_p: Fraction) -> Fraction:
    """Least possible crosstalk probability given the largest observed
    marginal-probability mismatch ``delta_p``."""
    delta_p = as_rational(delta_p)
    if not ZERO <= delta_p <= ONE:
        raise ValueError(f"marginal mismatch {delta_p} outside [0, 1]")
    return delta_p / 4


def crosstalk_s_bound(p_crosstalk: Fraction) -> Fraction:
    """Closed-form |S| cap under crosstalk; equals the LP optimum of the
    crosstalk scenario (a cross-module identity the tests enforce)."""
    p_crosstalk = as_rational(p_crosstalk)
    if not ZERO <= p_crosstalk <= ONE:
        raise ValueError(f"crosstalk probability {p_crosstalk} outside [0, 1]")
    return min(2 + 16 * p_crosstalk, Fraction(4))


def crosstalk_critical() -> tuple[Sqrt2, decimal.Decimal]:
    """Crosstalk probability where the cap meets the ideal quantum bound:
    root of 2 + 16 p = 2*sqrt(2), i.e. (sqrt(2) - 1) / 8."""
    critical = Sqrt2(Fraction(-1, 8), Fraction(1, 8))
    return critical, critical.to_decimal(12)


@dataclass(frozen=True)
class CrosstalkReport:
    """Comparison of a measured S against the crosstalk-limited cap."""

    s_upper_mean: Fraction
    s_upper_sigma: Fraction
    z_score: float | None
    alpha_two_sided: float | None
    verdict: str  # 'z-test' | 'exact-compliance' | 'exact-exceedance'
    p_c_floor: Fraction | None = None


def crosstalk_ztest(
    s_exp: Fraction,
    sig_exp: Fraction,
    pc_mean: Fraction,
    pc_sig: Fraction,
    delta_p: Fraction | None = None,
) -> CrosstalkReport:
    """Two-sided normal test of measured S against the cap 2 + 16 p.

    Inputs arrive as exact decimals (Fractions); the cap mean and sigma are
    propagated exactly, and only the final z and two-sided alpha use
    double-precision arithmetic (the standard normal CDF is accurate to
    well below 1e-9).  Zero combined variance with a nonzero gap is
    reported as an exact verdict instead of dividing by zero.
    """
    s_exp, sig_exp = as_rational(s_exp), as_rational(sig_exp)
    pc_mean, pc_sig = as_rational(pc_mean), as_rational(pc_sig)
    if not ZERO <= pc_mean <= Fraction(1, 8):
        raise ValueError(
            f"crosstalk mean {pc_mean} outside the linear regime [0, 1/8]; "
            "the cap saturates at 4 beyond it"
        )
    ub_mean = 2 + 16 * pc_mean
    ub_sigma = 16 * pc_sig
    floor = None if delta_p is None else crosstalk_floor(delta_p)

    gap = s_exp - ub_mean
    variance = sig_exp * sig_exp + ub_sigma * ub_sigma
    if variance == 0:
        if gap == 0:
            return CrosstalkReport(ub_mean, ub_sigma, 0.0, 1.0, "exact-compliance", floor)
        return CrosstalkReport(
            ub_mean, ub_sigma, None, 0.0, "exact-exceedance", floor
        )
    z = float(gap) / float(variance) ** 0.5
    alpha = 2 * (1 - NormalDist().cdf(abs(z)))
    return CrosstalkReport(ub_mean, ub_sigma, z, alpha, "z-test", floor)


# --- LHV oracle -------------------------------------------------------------


@dataclass(frozen=True)
class LhvSampleReport:
    scenario: ScenarioId
    quantity: BellQuantity
    strategies: int
    seed: int
    min_observed: Fraction
    max_observed: Fraction
    bound_lower: Fraction
    bound_upper: Fraction

    @property
    def sound(self) -> bool:
        return self.bound_lower <= self.min_observed and (
            self.max_observed <= self.bound_upper
        )


_ORACLE_FAMILIES = (
    Family.IDEAL_LR,
    Family.FS_FIXED,
    Family.FS_REMOVABLE,
    Family.PCCD_FIXED,
    Family.PCCD_REMOVABLE,
)


def _strategy_expectation(
    kind: BellKind, strategy: tuple[str, str, str, str], eta: Fraction
) -> Fraction:
    """Exact expected value of one deterministic outcome strategy.

    Both detection layers (independent per-record sampling and per-side
    detectability tokens) give the same cross-arm pair detection
    probability eta^2 and single detection probability eta, which is all
    these functionals see; the hypotheses differ only in which mixtures of
    strategies they allow.
    """
    a, ap, b, bp = strategy
    e2 = eta * eta

    def agree(x: str, y: str) -> int:
        return 1 if x == y else -1

    def both_plus(x: str, y: str) -> int:
        return 1 if x == "+" and y == "+" else 0

    if kind is BellKind.S:
        return e2 * (agree(a, b) - agree(a, bp) + agree(ap, b) + agree(ap, bp))
    joint = (
        both_plus(a, b) - both_plus(a, bp) + both_plus(ap, b) + both_plus(ap, bp)
    )
    singles = (1 if ap == "+" else 0) + (1 if b == "+" else 0)
    if kind is BellKind.DELTA_PRIME:
        return e2 * joint - eta * singles
    if kind is BellKind.DELTA:
        return e2 * (joint - singles)
    raise ValueError(f"oracle does not sample {kind.value}")


def lhv_oracle(
    scenario: ScenarioId,
    q: BellQuantity,
    n_strategies: int,
    seed: int,
    params: Params | None = None,
) -> LhvSampleReport:
    """Sample local deterministic strategies and report exact extremal
    expectations next to the scenario's LP-derived bounds."""
    if scenario.family not in _ORACLE_FAMILIES:
        raise ValueError(f"no LHV sampling model for {scenario.family.value}")
    if params is None:
        params = Params()
    if scenario.family is Family.IDEAL_LR:
        eta = ONE
    else:
        if params.eta is None:
            raise ValueError("symmetric detection efficiency required")
        eta = params.eta

    factor = ONE
    if q.normalized:
        if eta == 0:
            raise ValueError("normalization undefined at zero efficiency")
        factor = eta * eta

    rng = random.Random(seed)
    cache: dict[tuple[str, str, str, str], Fraction] = {}
    lo = hi = None
    for _ in range(n_strategies):
        strategy = tuple(rng.choice("+-") for _ in range(4))
        value = cache.get(strategy)
        if value is None:
            value = _strategy_expectation(q.kind, strategy, eta) / factor
            cache[strategy] = value
        if lo is None or value < lo:
            lo = value
        if hi is None or value > hi:
            hi = value

    bound_hi = bound_at(scenario, q, "maximize", params)
    bound_lo = bound_at(scenario, q, "minimize", params)
    return LhvSampleReport(
        scenario, q, n_strategies, seed, lo, hi, bound_lo, bound_hi
    )
