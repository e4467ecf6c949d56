"""Parametric bound computation and exact piecewise reconstruction.

A sweep solves one certified LP per grid point.  Reconstruction fits exact
polynomials to contiguous runs of samples (degree-capped Newton
interpolation, every non-interpolation sample validated by rational
equality), then localizes each breakpoint as the root of the difference of
the two adjacent polynomials: the true bound is continuous, so the
breakpoint is exactly where the active polynomials cross.  The root is
bracketed by sign bisection to width 2**-20 and snapped to the smallest
denominator (<= 64) rational in the bracket that solves the crossing
exactly.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import poly
from .bellq import (
    BellKind,
    BellQuantity,
    QuantityError,
    delta_from_extrema,
    normalize,
    objective,
)
from .ratlp import LpModel, certify, solve
from .scenarios import Params, ScenarioId, build

ZERO = Fraction(0)
ONE = Fraction(1)


class ScenarioInfeasibleError(RuntimeError):
    """The scenario's constraint set is empty at these parameters."""


class CertificationError(RuntimeError):
    """An LP optimum failed its independent exactness certificate."""


class ReconstructionError(RuntimeError):
    """Samples do not fit piecewise polynomials under the degree cap."""


def lp_for(scenario: ScenarioId, q: BellQuantity, sense: str, params: Params):
    model = build(scenario, params)
    obj = objective(q, model)
    return LpModel(model.variable_count, model.constraints, obj, sense)


def _certified_value(model: LpModel, label: str) -> Fraction:
    solution = solve(model)
    if solution.status == "infeasible":
        raise ScenarioInfeasibleError(label)
    if solution.status != "optimal":
        raise RuntimeError(f"{label}: {solution.status}")
    if not certify(model, solution):
        raise CertificationError(label)
    return solution.value


def bound_at(
    scenario: ScenarioId,
    q: BellQuantity,
    sense: str,
    params: Params,
) -> Fraction:
    """Exact certified optimum of ``q`` over the scenario at ``params``.

    ``delta-f`` performs the two underlying delta solves; it only has a
    maximization form.
    """
    if sense not in ("maximize", "minimize"):
        raise ValueError(f"unknown sense {sense!r}")
    label = f"{scenario.label()}/{q.label()}/{sense}"
    if q.kind is BellKind.DELTA_F:
        if sense != "maximize":
            raise QuantityError("delta-f has no minimization form")
        delta = BellQuantity(BellKind.DELTA)
        hi = _certified_value(lp_for(scenario, delta, "maximize", params), label)
        lo = _certified_value(lp_for(scenario, delta, "minimize", params), label)
        value = delta_from_extrema(hi, lo)
    else:
        value = _certified_value(lp_for(scenario, q, sense, params), label)
    if q.normalized:
        value = normalize(value, q, params)
    return value


@dataclass(frozen=True)
class SweepSample:
    params: Params
    value: Fraction


@dataclass(frozen=True)
class SweepResult:
    scenario: ScenarioId
    quantity: BellQuantity
    sense: str
    samples: tuple[SweepSample, ...]
    errors: tuple[tuple[Params, str], ...] = ()


def _param_key(params: Params):
    return tuple(
        v
        for v in (params.eta, params.eta_a, params.eta_b, params.p_crosstalk)
        if v is not None
    )


def eta_grid(denominator: int = 64) -> list[Params]:
    """The default dyadic efficiency grid 0, 1/den, ..., 1."""
    return [Params(eta=Fraction(k, denominator)) for k in range(denominator + 1)]


def _solve_point(args) -> tuple[Params, Fraction | None, str | None]:
    scenario, q, sense, params = args
    try:
        return params, bound_at(scenario, q, sense, params), None
    except Exception as exc:  # collected, not fatal: sweeps report per-point
        return params, None, f"{type(exc).__name__}: {exc}"


def sweep(
    scenario: ScenarioId,
    q: BellQuantity,
    sense: str,
    grid: Iterable[Params],
    jobs: int = 1,
) -> SweepResult:
    """One certified optimum per grid point; per-point failures are
    collected in ``errors`` rather than aborting the sweep."""
    tasks = [(scenario, q, sense, params) for params in grid]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            outcomes = list(pool.map(_solve_point, tasks, chunksize=4))
    else:
        outcomes = [_solve_point(t) for t in tasks]
    samples = []
    errors = []
    for params, value, err in outcomes:
        if err is None:
            samples.append(SweepSample(params, value))
        else:
            errors.append((params, err))
    samples.sort(key=lambda s: _param_key(s.params))
    errors.sort(key=lambda e: _param_key(e[0]))
    return SweepResult(scenario, q, sense, tuple(samples), tuple(errors))


# --- piecewise reconstruction ---------------------------------------------


@dataclass(frozen=True)
class Segment:
    lo: Fraction
    hi: Fraction
    coefficients: poly.Poly

    def evaluate(self, at: Fraction) -> Fraction:
        return poly.evaluate(self.coefficients, at)


@dataclass(frozen=True)
class PiecewiseBound:
    """Contiguous exact polynomial segments of one bound curve."""

    variable: str
    segments: tuple[Segment, ...]

    def validate(self, max_degree: int = 6) -> None:
        if not self.segments:
            raise ValueError("empty piecewise bound")
        for seg in self.segments:
            if seg.lo >= seg.hi:
                raise ValueError(f"degenerate segment [{seg.lo}, {seg.hi}]")
            if poly.degree(seg.coefficients) > max_degree:
                raise ValueError("segment degree exceeds cap")
        for left, right in zip(self.segments, self.segments[1:]):
            if left.hi != right.lo:
                raise ValueError("segments not contiguous")
            if left.evaluate(left.hi) != right.evaluate(right.lo):
                raise ValueError(f"discontinuity at {left.hi}")

    @property
    def lo(self) -> Fraction:
        return self.segments[0].lo

    @property
    def hi(self) -> Fraction:
        return self.segments[-1].hi

    def evaluate(self, at: Fraction) -> Fraction:
        if not self.lo <= at <= self.hi:
            raise ValueError(f"{at} outside [{self.lo}, {self.hi}]")
        for seg in self.segments:
            if at <= seg.hi:
                return seg.evaluate(at)
        return self.segments[-1].evaluate(at)

    def breakpoints(self) -> tuple[Fraction, ...]:
        return tuple(seg.hi for seg in self.segments[:-1])


def single_segment(coefficients, lo=ZERO, hi=ONE, variable: str = "eta") -> PiecewiseBound:
    trimmed = poly.trim([Fraction(c) for c in coefficients])
    return PiecewiseBound(variable, (Segment(lo, hi, trimmed),))


def two_segments(coeffs_left, breakpoint, coeffs_right, lo=ZERO, hi=ONE,
                 variable: str = "eta") -> PiecewiseBound:
    bp = Fraction(breakpoint)
    return PiecewiseBound(
        variable,
        (
            Segment(lo, bp, poly.trim([Fraction(c) for c in coeffs_left])),
            Segment(bp, hi, poly.trim([Fraction(c) for c in coeffs_right])),
        ),
    )


_BISECTION_WIDTH = Fraction(1, 2**20)
_SNAP_DENOMINATOR = 64


def _snap_breakpoint(diff: poly.Poly, lo: Fraction, hi: Fraction) -> Fraction:
    """Smallest-denominator rational in [lo, hi] where the adjacent
    polynomials cross exactly; reconstruction fails (reporting the bracket)
    if none exists up to the denominator cap."""
    for den in range(1, _SNAP_DENOMINATOR + 1):
        num = -(-lo.numerator * den // lo.denominator)  # ceil(lo * den)
        while Fraction(num, den) <= hi:
            candidate = Fraction(num, den)
            if candidate >= lo and poly.evaluate(diff, candidate) == 0:
                return candidate
            num += 1
    raise ReconstructionError(
        f"breakpoint not a small rational; certified bracket [{lo}, {hi}]"
    )


def _locate_breakpoint(p_left: poly.Poly, p_right: poly.Poly,
                       lo: Fraction, hi: Fraction) -> Fraction:
    diff = poly.sub(p_left, p_right)
    sign_lo = poly.evaluate(diff, lo)
    sign_hi = poly.evaluate(diff, hi)
    if sign_lo == 0 and sign_hi == 0:
        raise ReconstructionError(
            f"adjacent polynomials agree on both ends of [{lo}, {hi}]"
        )
    if sign_lo == 0:
        return lo
    if sign_hi == 0:
        return hi

    def sign_at(x: Fraction) -> int:
        v = poly.evaluate(diff, x)
        return (v > 0) - (v < 0)

    blo, bhi = poly.refine_sign_change(sign_at, lo, hi, _BISECTION_WIDTH)
    if blo == bhi:
        return blo
    return _snap_breakpoint(diff, blo, bhi)


def _sample_points(result: SweepResult) -> list[tuple[Fraction, Fraction]]:
    points = []
    for sample in result.samples:
        if sample.params.eta is None:
            raise ReconstructionError(
                "piecewise reconstruction is defined over the symmetric "
                "detection efficiency only"
            )
        points.append((sample.params.eta, sample.value))
    return points


def reconstruct(result: SweepResult, max_degree: int = 6) -> PiecewiseBound:
    """Exact piecewise-polynomial fit of a sweep.

    Needs at least 2*(max_degree+1) samples per underlying segment so a
    clean interpolation window always exists; every sample must land
    exactly on its segment's polynomial.
    """
    points = _sample_points(result)
    d = max_degree
    if len(points) < 2 * (d + 1):
        raise ReconstructionError(
            f"{len(points)} samples cannot pin degree-{d} segments; "
            f"need at least {2 * (d + 1)}"
        )

    runs: list[tuple[int, int, poly.Poly]] = []
    start = 0
    n = len(points)
    while start < n:
        if n - start < d + 1:
            raise ReconstructionError(
                f"trailing run of {n - start} samples from {points[start][0]} "
                f"is too short to pin a degree-{d} polynomial"
            )
        fit = poly.interpolate(points[start : start + d + 1])
        end = start + d
        while end + 1 < n and poly.evaluate(fit, points[end + 1][0]) == points[end + 1][1]:
            end += 1
        runs.append((start, end, fit))
        start = end + 1

    boundaries = [points[0][0]]
    for (s1, e1, p1), (s2, e2, p2) in zip(runs, runs[1:]):
        boundaries.append(_locate_breakpoint(p1, p2, points[e1][0], points[s2][0]))
    boundaries.append(points[-1][0])

    segments = tuple(
        Segment(lo, hi, fit)
        for (lo, hi), (_, _, fit) in zip(zip(boundaries, boundaries[1:]), runs)
    )
    bound = PiecewiseBound("eta", segments)
    bound.validate(max_degree=d)
    # reconstruction soundness: every sample reproduced exactly
    for x, v in points:
        if bound.evaluate(x) != v:
            raise ReconstructionError(f"sample at {x} not reproduced: {v}")
    return bound


def verify_closed_form(bound: PiecewiseBound, reference: PiecewiseBound) -> bool:
    """True iff the two piecewise bounds are identical as rational data."""
    if bound.variable != reference.variable:
        return False
    if len(bound.segments) != len(reference.segments):
        return False
    return all(
        a.lo == b.lo and a.hi == b.hi and a.coefficients == b.coefficients
        for a, b in zip(bound.segments, reference.segments)
    )


def normalized_form(bound: PiecewiseBound) -> PiecewiseBound:
    """Divide every segment polynomial exactly by the efficiency square.

    Valid whenever the unnormalized bound vanishes to second order at zero
    efficiency, which every fair-sampling bound here does.
    """
    return PiecewiseBound(
        bound.variable,
        tuple(
            Segment(seg.lo, seg.hi, poly.divide_by_power(seg.coefficients, 2))
            for seg in bound.segments
        ),
    )


# --- bivariate sweeps ---------------------------------------------------------


@dataclass(frozen=True)
class BivariateSample:
    eta_a: Fraction
    eta_b: Fraction
    value: Fraction


@dataclass(frozen=True)
class BivariateBoundGrid:
    scenario: ScenarioId
    quantity: BellQuantity
    sense: str
    samples: tuple[BivariateSample, ...]
    closed_form: Mapping[tuple[int, int], Fraction] | None = None
    mismatches: tuple[BivariateSample, ...] = ()
    errors: tuple[tuple[Params, str], ...] = ()

    @property
    def validated(self) -> bool:
        return self.closed_form is not None and not self.mismatches


def eval_bivariate(form: Mapping[tuple[int, int], Fraction],
                   eta_a: Fraction, eta_b: Fraction) -> Fraction:
    return sum(
        (coeff * eta_a**i * eta_b**j for (i, j), coeff in form.items()),
        ZERO,
    )


def sweep2(
    scenario: ScenarioId,
    q: BellQuantity,
    sense: str,
    grid_a: Sequence[Fraction],
    grid_b: Sequence[Fraction],
    closed_form: Mapping[tuple[int, int], Fraction] | None = None,
    jobs: int = 1,
) -> BivariateBoundGrid:
    """Certified optima over the efficiency product grid, optionally
    validated sample-by-sample against an exact bivariate closed form."""
    grid = [
        Params(eta_a=Fraction(a), eta_b=Fraction(b))
        for a in grid_a
        for b in grid_b
    ]
    result = sweep(scenario, q, sense, grid, jobs=jobs)
    samples = tuple(
        BivariateSample(s.params.eta_a, s.params.eta_b, s.value)
        for s in result.samples
    )
    mismatches = ()
    if closed_form is not None:
        mismatches = tuple(
            s
            for s in samples
            if eval_bivariate(closed_form, s.eta_a, s.eta_b) != s.value
        )
    return BivariateBoundGrid(
        scenario, q, sense, samples, closed_form, mismatches, result.errors
    )
