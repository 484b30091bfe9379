"""Exact polynomials and interval-checked inequalities involving logarithms."""

from __future__ import annotations

import re
from contextlib import contextmanager
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from mpmath import iv
from mpmath.libmp import to_rational

# 80 bits keeps every interval used here far narrower than 1e-12.
INTERVAL_PREC = 80
MAX_INTERVAL_WIDTH = Fraction(1, 10**12)


@contextmanager
def _precision():
    saved = iv.prec
    iv.prec = max(saved, INTERVAL_PREC)
    try:
        yield
    finally:
        iv.prec = saved


@dataclass(frozen=True)
class PolySpec:
    """Polynomial with exact rational coefficients, lowest degree first."""

    coefficients: tuple[Fraction, ...]

    def __post_init__(self):
        coeffs = tuple(Fraction(c) for c in self.coefficients)
        while len(coeffs) > 1 and coeffs[-1] == 0:
            coeffs = coeffs[:-1]
        if not coeffs:
            coeffs = (Fraction(0),)
        object.__setattr__(self, "coefficients", coeffs)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence) -> "PolySpec":
        return cls(tuple(coeffs))

    @classmethod
    def parse(cls, text: str) -> "PolySpec":
        return parse_poly(text)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coefficients):
            acc = acc * x + _lift(c, x)
        return acc

    def derivative(self) -> "PolySpec":
        if self.degree == 0:
            return PolySpec((Fraction(0),))
        return PolySpec(tuple(i * c for i, c in enumerate(self.coefficients) if i > 0))

    def __str__(self) -> str:
        terms = []
        for i, c in reversed(list(enumerate(self.coefficients))):
            if c == 0:
                continue
            coef = str(c)
            if i > 0 and abs(c) == 1:
                coef = "" if c > 0 else "-"
            var = "" if i == 0 else ("n" if i == 1 else f"n^{i}")
            terms.append(f"{coef}{var}")
        return "+".join(terms).replace("+-", "-") or "0"


def _lift(c: Fraction, x):
    if isinstance(x, iv.mpf):
        return to_interval(c)
    return c


_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(?:\*?(n)(?:\^(\d+))?)?")


def parse_poly(text: str) -> PolySpec:
    """Parse ``"3n^2+2n+1"``, ``"n+4"`` or a comma list of coefficients ``"1,10"``.

    Anything that is not a finite sum of ``c*n^d`` terms is rejected.
    """
    body = text.replace(" ", "").lower().replace("x", "n").replace("**", "^")
    if not body:
        raise ValueError("empty polynomial")
    if re.fullmatch(r"[+-]?\d+(?:/\d+)?(?:,[+-]?\d+(?:/\d+)?)*", body) and "," in body:
        return PolySpec(tuple(Fraction(p) for p in body.split(",")))
    coeffs: dict[int, Fraction] = {}
    pos = 0
    while pos < len(body):
        m = _TERM.match(body, pos)
        if not m or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"not a polynomial in n: {text!r}")
        sign = -1 if m.group(1) == "-" else 1
        if pos > 0 and not m.group(1):
            raise ValueError(f"not a polynomial in n: {text!r}")
        c = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        if m.group(3):
            d = int(m.group(4)) if m.group(4) else 1
        else:
            d = 0
        coeffs[d] = coeffs.get(d, Fraction(0)) + sign * c
        pos = m.end()
    top = max(coeffs)
    return PolySpec(tuple(coeffs.get(i, Fraction(0)) for i in range(top + 1)))


def to_interval(q) -> "iv.mpf":
    with _precision():
        q = Fraction(q)
        return iv.mpf(q.numerator) / iv.mpf(q.denominator)


def adequacy_lambda(k: int) -> "iv.mpf":
    """Enclosure of ``2 * log_k(k + 1)``."""
    with _precision():
        return 2 * iv.log(iv.mpf(k + 1)) / iv.log(iv.mpf(k))


def half_log2() -> "iv.mpf":
    """Enclosure of ``|ln(1/sqrt(2))| = ln(2)/2``."""
    with _precision():
        return iv.log(iv.mpf(2)) / 2


def width(x) -> Fraction:
    lo, hi = interval_bounds(x)
    return hi - lo


def interval_bounds(x) -> tuple[Fraction, Fraction]:
    # endpoints are binary floats, hence exact rationals
    lo, hi = x._mpi_
    return Fraction(*to_rational(lo)), Fraction(*to_rational(hi))


def leq(lhs, rhs) -> Optional[bool]:
    """``lhs <= rhs`` decided only when the enclosures do not overlap; ``None`` otherwise."""
    lo_l, hi_l = _bounds(lhs)
    lo_r, hi_r = _bounds(rhs)
    if hi_l <= lo_r:
        return True
    if lo_l > hi_r:
        return False
    return None


def _bounds(x) -> tuple[Fraction, Fraction]:
    if isinstance(x, iv.mpf):
        lo, hi = interval_bounds(x)
        if hi - lo > MAX_INTERVAL_WIDTH:
            raise ArithmeticError(f"interval too wide to decide: [{float(lo)}, {float(hi)}]")
        return lo, hi
    q = Fraction(x)
    return q, q


def midpoint(x) -> float:
    if isinstance(x, iv.mpf):
        lo, hi = interval_bounds(x)
        return float((lo + hi) / 2)
    return float(x)
