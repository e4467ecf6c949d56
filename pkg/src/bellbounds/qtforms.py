"""Quantum-theory closed-form bounds, kept in one audited registry.

Every bound the engine compares against quantum theory lives here as a
polynomial whose coefficients are exact elements a + b*sqrt(2) of the
quadratic ring Q[sqrt(2)].  Sign analysis in that ring is exact (compare
a^2 against 2 b^2), so threshold equations can be isolated to arbitrary
precision without floating point; decimals appear only at the reporting
edge.

Registry keys are (quantity, side, kind) with

* quantity in {"S", "delta-prime", "delta", "delta-f"},
* side in {"upper", "lower"},
* kind in {"ideal", "fs-symmetric", "normalized", "asymmetric-S"}.

"fs-symmetric" formulas are polynomials in the common detection efficiency;
"asymmetric-S" is a polynomial in the product of the two arms' efficiencies
(that is the only asymmetric quantity with a published unnormalized form);
"ideal" and "normalized" are constants.
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from fractions import Fraction

from .ratlp import as_rational

ZERO = Fraction(0)


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


@dataclass(frozen=True)
class Sqrt2:
    """a + b*sqrt(2) with rational a, b; closed under ring arithmetic."""

    a: Fraction = ZERO
    b: Fraction = ZERO

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", as_rational(self.a))
        object.__setattr__(self, "b", as_rational(self.b))

    @classmethod
    def of(cls, a, b=0) -> "Sqrt2":
        return cls(as_rational(a), as_rational(b))

    def __add__(self, other: "Sqrt2") -> "Sqrt2":
        other = _coerce(other)
        return Sqrt2(self.a + other.a, self.b + other.b)

    __radd__ = __add__

    def __sub__(self, other: "Sqrt2") -> "Sqrt2":
        other = _coerce(other)
        return Sqrt2(self.a - other.a, self.b - other.b)

    def __rsub__(self, other) -> "Sqrt2":
        return _coerce(other) - self

    def __neg__(self) -> "Sqrt2":
        return Sqrt2(-self.a, -self.b)

    def __mul__(self, other) -> "Sqrt2":
        other = _coerce(other)
        return Sqrt2(
            self.a * other.a + 2 * self.b * other.b,
            self.a * other.b + self.b * other.a,
        )

    __rmul__ = __mul__

    def sign(self) -> int:
        sa, sb = _sign(self.a), _sign(self.b)
        if sb == 0:
            return sa
        if sa == 0:
            return sb
        if sa == sb:
            return sa
        # opposite signs never cancel exactly (sqrt(2) is irrational)
        return sa * _sign(self.a * self.a - 2 * self.b * self.b)

    def __lt__(self, other) -> bool:
        return (self - _coerce(other)).sign() < 0

    def __le__(self, other) -> bool:
        return (self - _coerce(other)).sign() <= 0

    def __gt__(self, other) -> bool:
        return (self - _coerce(other)).sign() > 0

    def __ge__(self, other) -> bool:
        return (self - _coerce(other)).sign() >= 0

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def to_decimal(self, digits: int = 30) -> decimal.Decimal:
        if self.a == 0 and self.b == 0:
            return decimal.Decimal(0)
        with decimal.localcontext() as ctx:
            ctx.prec = digits + 10
            root2 = decimal.Decimal(2).sqrt()
            value = (
                decimal.Decimal(self.a.numerator) / self.a.denominator
                + (decimal.Decimal(self.b.numerator) / self.b.denominator) * root2
            )
            return +value

    def __float__(self) -> float:
        return float(self.a) + float(self.b) * 2 ** 0.5

    def __str__(self) -> str:
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*sqrt(2)"
        return f"{self.a} + {self.b}*sqrt(2)"


def _coerce(value) -> Sqrt2:
    if isinstance(value, Sqrt2):
        return value
    return Sqrt2(as_rational(value), ZERO)


SQRT2 = Sqrt2(ZERO, Fraction(1))


class FormulaLookupError(LookupError):
    """No quantum-theory closed form is registered for that combination."""


@dataclass(frozen=True)
class QtFormula:
    """A registered closed-form bound: polynomial coefficients (degree
    ascending, Sqrt2 ring) in the efficiency variable named by ``kind``."""

    quantity: str
    side: str
    kind: str
    coefficients: tuple[Sqrt2, ...]

    def evaluate(self, at: Fraction) -> Sqrt2:
        at = as_rational(at)
        total = Sqrt2()
        power = Fraction(1)
        for coeff in self.coefficients:
            total = total + coeff * power
            power *= at
        return total


def _c(*coeffs) -> tuple[Sqrt2, ...]:
    return tuple(c if isinstance(c, Sqrt2) else _coerce(c) for c in coeffs)


_HALF = Fraction(1, 2)

# constants of the ideal two-setting experiment
_S_IDEAL = Sqrt2(0, 2)                      # 2*sqrt(2)
_CH_UPPER_IDEAL = Sqrt2(-_HALF, _HALF)      # (sqrt(2)-1)/2
_CH_LOWER_IDEAL = Sqrt2(-_HALF, -_HALF)     # -(1+sqrt(2))/2
_FREEDMAN_IDEAL = Sqrt2(0, Fraction(1, 4))  # sqrt(2)/4

_REGISTRY: dict[tuple[str, str, str], QtFormula] = {}


def _register(quantity: str, side: str, kind: str, coeffs) -> None:
    key = (quantity, side, kind)
    _REGISTRY[key] = QtFormula(quantity, side, kind, _c(*coeffs))


# ideal detection: constants
_register("S", "upper", "ideal", (_S_IDEAL,))
_register("S", "lower", "ideal", (-_S_IDEAL,))
_register("delta-prime", "upper", "ideal", (_CH_UPPER_IDEAL,))
_register("delta-prime", "lower", "ideal", (_CH_LOWER_IDEAL,))
_register("delta", "upper", "ideal", (_CH_UPPER_IDEAL,))
_register("delta", "lower", "ideal", (_CH_LOWER_IDEAL,))
_register("delta-f", "upper", "ideal", (_FREEDMAN_IDEAL,))

# symmetric fair-sampling detection: polynomials in the common efficiency
_register("S", "upper", "fs-symmetric", (0, 0, _S_IDEAL))
_register("S", "lower", "fs-symmetric", (0, 0, -_S_IDEAL))
_register("delta-prime", "upper", "fs-symmetric", (0, -1, Sqrt2(_HALF, _HALF)))
_register("delta-prime", "lower", "fs-symmetric", (0, -1, Sqrt2(_HALF, -_HALF)))
_register("delta", "upper", "fs-symmetric", (0, 0, _CH_UPPER_IDEAL))
_register("delta", "lower", "fs-symmetric", (0, 0, _CH_LOWER_IDEAL))
_register("delta-f", "upper", "fs-symmetric", (0, 0, _FREEDMAN_IDEAL))

# normalized quantities: efficiency-free constants
_register("S", "upper", "normalized", (_S_IDEAL,))
_register("S", "lower", "normalized", (-_S_IDEAL,))
_register("delta", "upper", "normalized", (_CH_UPPER_IDEAL,))
_register("delta", "lower", "normalized", (_CH_LOWER_IDEAL,))
_register("delta-f", "upper", "normalized", (_FREEDMAN_IDEAL,))

# asymmetric arms: S in the efficiency product
_register("S", "upper", "asymmetric-S", (0, _S_IDEAL))
_register("S", "lower", "asymmetric-S", (0, -_S_IDEAL))


def qt_formula(quantity: str, side: str, kind: str) -> QtFormula:
    """Look up a registered closed form; raises FormulaLookupError else."""
    try:
        return _REGISTRY[(quantity, side, kind)]
    except KeyError:
        raise FormulaLookupError(
            f"no registered bound for ({quantity}, {side}, {kind})"
        ) from None


def registered_keys() -> tuple[tuple[str, str, str], ...]:
    return tuple(sorted(_REGISTRY))


def evaluate(formula: QtFormula, at: Fraction = Fraction(1), digits: int = 30):
    """Exact Sqrt2 value plus a Decimal rendering to >= 12 significant digits."""
    exact = formula.evaluate(at)
    return exact, exact.to_decimal(digits)
