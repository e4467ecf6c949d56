"""Small exact polynomial toolkit for bound reconstruction.

Polynomials are tuples of Fraction coefficients, lowest degree first, with
trailing zeros trimmed so equal polynomials compare equal as data.  Newton
interpolation through exact rational points is the workhorse: a degree-d
bound segment is pinned by d+1 samples and then validated on the rest.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Sequence

Poly = tuple[Fraction, ...]

ZERO = Fraction(0)


def trim(coeffs: Sequence[Fraction]) -> Poly:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def degree(p: Poly) -> int:
    return len(p) - 1


def evaluate(p: Poly, at: Fraction) -> Fraction:
    total = ZERO
    for coeff in reversed(p):
        total = total * at + coeff
    return total


def add(p: Poly, q: Poly) -> Poly:
    n = max(len(p), len(q))
    return trim(
        [
            (p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO)
            for i in range(n)
        ]
    )


def neg(p: Poly) -> Poly:
    return tuple(-c for c in p)


def sub(p: Poly, q: Poly) -> Poly:
    return add(p, neg(q))


def scale(p: Poly, factor: Fraction) -> Poly:
    return trim([c * factor for c in p])


def mul(p: Poly, q: Poly) -> Poly:
    if not p or not q:
        return ()
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return trim(out)


def divide_by_power(p: Poly, k: int) -> Poly:
    """Exact division by x**k; raises if p has a nonzero low-order part."""
    if any(c != 0 for c in p[:k]):
        raise ValueError(f"{p} not divisible by x^{k}")
    return tuple(p[k:])


def interpolate(points: Sequence[tuple[Fraction, Fraction]]) -> Poly:
    """Newton interpolation through distinct exact points."""
    xs = [x for x, _ in points]
    if len(set(xs)) != len(xs):
        raise ValueError("interpolation nodes must be distinct")
    # divided differences
    coeffs = [y for _, y in points]
    for order in range(1, len(points)):
        for i in range(len(points) - 1, order - 1, -1):
            coeffs[i] = (coeffs[i] - coeffs[i - 1]) / (xs[i] - xs[i - order])
    # expand the Newton form to monomial coefficients
    poly: Poly = ()
    basis: Poly = (Fraction(1),)
    for i, c in enumerate(coeffs):
        poly = add(poly, scale(basis, c))
        basis = mul(basis, (-xs[i], Fraction(1)))
    return poly


def to_text(p: Poly, variable: str = "eta") -> str:
    if not p:
        return "0"
    parts = []
    for power, coeff in enumerate(p):
        if coeff == 0:
            continue
        if power == 0:
            parts.append(str(coeff))
        elif power == 1:
            parts.append(f"{coeff}*{variable}")
        else:
            parts.append(f"{coeff}*{variable}^{power}")
    return " + ".join(parts).replace("+ -", "- ")


def refine_sign_change(
    sign_at: Callable[[Fraction], int],
    lo: Fraction,
    hi: Fraction,
    max_width: Fraction,
) -> tuple[Fraction, Fraction]:
    """Shrink a sign-change bracket by bisection to the requested width.

    ``sign_at`` must be exact (-1, 0, +1); a zero at a midpoint collapses
    the bracket onto that point.
    """
    slo, shi = sign_at(lo), sign_at(hi)
    if slo == 0:
        return lo, lo
    if shi == 0:
        return hi, hi
    if slo == shi:
        raise ValueError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > max_width:
        mid = (lo + hi) / 2
        smid = sign_at(mid)
        if smid == 0:
            return mid, mid
        if smid == slo:
            lo = mid
        else:
            hi = mid
    return lo, hi
