"""Text and CSV serialization: scenario descriptors, sweeps, bounds.

All parameter and value columns that feed back into computations are exact
fraction strings or integer numerator/denominator pairs; decimal columns
exist only for plotting and are never parsed back.
"""

from __future__ import annotations

import csv
import decimal
import io
from fractions import Fraction
from pathlib import Path
from .scenarios import Family, Level, Params, ScenarioId
from .sweep import BivariateBoundGrid, PiecewiseBound, Segment, SweepResult


def fraction_text(value: Fraction) -> str:
    return str(value)


def parse_fraction(text: str) -> Fraction:
    return Fraction(text.strip())


def parse_exact_param(text: str) -> Fraction:
    """Parse an LP-path parameter; decimal notation is refused so no value
    silently passes through float rounding."""
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(
            f"{text!r}: LP parameters must be exact fractions like 3/4"
        )
    return Fraction(text)


def decimal_text(value: Fraction, digits: int = 12) -> str:
    with decimal.localcontext() as ctx:
        ctx.prec = digits
        d = decimal.Decimal(value.numerator) / decimal.Decimal(value.denominator)
    return str(d)


# --- scenario descriptors ---------------------------------------------------


def scenario_text(scenario: ScenarioId, params: Params) -> str:
    lines = [f"family = {scenario.family.value}"]
    if scenario.family in (Family.FS_FIXED, Family.FS_REMOVABLE):
        lines.append(f"level = {scenario.level.value}")
    for key, value in (
        ("eta", params.eta),
        ("eta_a", params.eta_a),
        ("eta_b", params.eta_b),
        ("p_crosstalk", params.p_crosstalk),
    ):
        if value is not None:
            lines.append(f"{key} = {fraction_text(value)}")
    if params.apparent_locality:
        lines.append("apparent_locality = true")
    return "\n".join(lines) + "\n"


def parse_scenario_text(text: str) -> tuple[ScenarioId, Params]:
    pairs: dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        if not _:
            raise ValueError(f"bad descriptor line: {raw!r}")
        pairs[key.strip()] = value.strip()
    family = Family(pairs.pop("family"))
    level = Level(pairs.pop("level")) if "level" in pairs else Level.FULL
    kwargs = {}
    for key in ("eta", "eta_a", "eta_b", "p_crosstalk"):
        if key in pairs:
            kwargs[key] = parse_fraction(pairs.pop(key))
    if pairs.pop("apparent_locality", "false").lower() in ("true", "1", "yes"):
        kwargs["apparent_locality"] = True
    if pairs:
        raise ValueError(f"unknown descriptor keys: {sorted(pairs)}")
    return ScenarioId(family, level), Params(**kwargs)


# --- sweep CSV ----------------------------------------------------------------


def _param_columns(params: Params) -> list[Fraction]:
    return [
        v
        for v in (params.eta, params.eta_a, params.eta_b, params.p_crosstalk)
        if v is not None
    ]


def sweep_csv(result: SweepResult, digits: int = 12) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    width = max((len(_param_columns(s.params)) for s in result.samples), default=1)
    header = ["param"] if width == 1 else ["param", "param2"]
    writer.writerow(header + ["value_num", "value_den", "value_decimal"])
    for sample in result.samples:
        cols = [fraction_text(p) for p in _param_columns(sample.params)]
        writer.writerow(
            cols
            + [
                sample.value.numerator,
                sample.value.denominator,
                decimal_text(sample.value, digits),
            ]
        )
    return buffer.getvalue()


def parse_sweep_csv(text: str) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """Exact round-trip of the fraction columns of a sweep CSV."""
    rows = list(csv.reader(io.StringIO(text)))
    header, body = rows[0], rows[1:]
    n_params = header.index("value_num")
    out = []
    for row in body:
        params = tuple(parse_fraction(c) for c in row[:n_params])
        value = Fraction(int(row[n_params]), int(row[n_params + 1]))
        out.append((params, value))
    return out


def bivariate_csv(grid: BivariateBoundGrid, digits: int = 12) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["param", "param2", "value_num", "value_den", "value_decimal"])
    for s in grid.samples:
        writer.writerow(
            [
                fraction_text(s.eta_a),
                fraction_text(s.eta_b),
                s.value.numerator,
                s.value.denominator,
                decimal_text(s.value, digits),
            ]
        )
    return buffer.getvalue()


# --- piecewise bounds -----------------------------------------------------------


def piecewise_text(bound: PiecewiseBound) -> str:
    lines = [f"variable = {bound.variable}"]
    for seg in bound.segments:
        coeffs = ", ".join(fraction_text(c) for c in seg.coefficients) or "0"
        lines.append(
            f"segment = [{fraction_text(seg.lo)}, {fraction_text(seg.hi)}] ; "
            f"coeffs = {coeffs}"
        )
    return "\n".join(lines) + "\n"


def parse_piecewise_text(text: str) -> PiecewiseBound:
    variable = "eta"
    segments: list[Segment] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, _, value = line.partition("=")
        key = key.strip()
        if key == "variable":
            variable = value.strip()
        elif key == "segment":
            interval_part, _, coeff_part = value.partition(";")
            interval = interval_part.strip().strip("[]")
            lo_text, hi_text = interval.split(",")
            _, _, coeff_list = coeff_part.partition("=")
            coeffs = tuple(
                parse_fraction(c) for c in coeff_list.split(",") if c.strip()
            )
            while coeffs and coeffs[-1] == 0:
                coeffs = coeffs[:-1]
            segments.append(
                Segment(parse_fraction(lo_text), parse_fraction(hi_text), coeffs)
            )
        else:
            raise ValueError(f"bad piecewise line: {raw!r}")
    return PiecewiseBound(variable, tuple(segments))


def write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
