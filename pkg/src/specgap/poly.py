"""Exact-coefficient polynomials on [0, 1].

Coefficients are stored as :class:`fractions.Fraction` in ascending degree so
that derivative bounds, compositions and integrals can be computed without
rounding.  Numerical evaluation goes through numpy (float64 or longdouble).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from numbers import Rational
from typing import Iterable, Sequence

import numpy as np


def as_fraction(value) -> Fraction:
    """Exact conversion; strings such as ``"1/3"`` are accepted."""
    if isinstance(value, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, (float, np.floating)):
        if not np.isfinite(value):
            raise ValueError(f"non-finite coefficient {value!r}")
        return Fraction(float(value))
    if isinstance(value, np.integer):
        return Fraction(int(value))
    raise TypeError(f"cannot use {value!r} as an exact coefficient")


def _trim(coeffs: Sequence[Fraction]) -> tuple[Fraction, ...]:
    c = list(coeffs)
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return tuple(c) if c else (Fraction(0),)


@dataclass(frozen=True)
class Poly:
    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = (0,)):
        object.__setattr__(self, "coeffs", _trim([as_fraction(c) for c in coeffs]))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return self.coeffs == (Fraction(0),)

    # --- arithmetic -------------------------------------------------------
    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (Fraction(0),) * (n - len(self.coeffs))
        b = other.coeffs + (Fraction(0),) * (n - len(other.coeffs))
        return Poly(x + y for x, y in zip(a, b))

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            s = as_fraction(other)
            return Poly(c * s for c in self.coeffs)
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def compose(self, inner: "Poly") -> "Poly":
        """self(inner(x)) by Horner's scheme."""
        out = Poly([self.coeffs[-1]])
        for c in reversed(self.coeffs[:-1]):
            out = out * inner + Poly([c])
        return out

    def deriv(self) -> "Poly":
        if self.degree == 0:
            return Poly([0])
        return Poly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def integral01(self) -> Fraction:
        return sum((c / (i + 1) for i, c in enumerate(self.coeffs)), Fraction(0))

    # --- evaluation -------------------------------------------------------
    def exact(self, x) -> Fraction:
        x = as_fraction(x)
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __call__(self, x, dtype=np.float64):
        x = np.asarray(x, dtype=dtype)
        coeffs = [_to_dtype(c, dtype) for c in self.coeffs]
        acc = np.zeros_like(x) + coeffs[-1]
        for c in reversed(coeffs[:-1]):
            acc = acc * x + c
        return acc

    def to_list(self) -> list:
        """JSON-friendly coefficients: ints, exact floats, or ``"p/q"`` strings."""
        return [_json_coeff(c) for c in self.coeffs]

    # --- certified range --------------------------------------------------
    def bernstein(self) -> list[Fraction]:
        n = self.degree
        a = self.coeffs
        return [
            sum((Fraction(comb(k, i), comb(n, i)) * a[i] for i in range(k + 1)), Fraction(0))
            for k in range(n + 1)
        ]

    def range01(self, max_depth: int = 40) -> tuple[Fraction, Fraction]:
        """Certified enclosure of ``{p(x) : x in [0, 1]}``.

        Uses the convex-hull property of the Bernstein form with de Casteljau
        subdivision.  The returned interval always contains the true range and
        is exact whenever the extrema are attained at subdivision endpoints
        (in particular for every monotone polynomial).
        """
        return _bernstein_range(self.bernstein(), max_depth)


def _json_coeff(c: Fraction):
    if c.denominator == 1:
        return int(c)
    f = float(c)
    return f if Fraction(f) == c else f"{c.numerator}/{c.denominator}"


def _to_dtype(c: Fraction, dtype):
    if c.denominator == 1:
        return dtype(c.numerator) if abs(c.numerator) < 2**62 else dtype(float(c))
    return dtype(c.numerator) / dtype(c.denominator)


def _split(b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    n = len(b) - 1
    left, right = [b[0]], [b[-1]]
    work = list(b)
    for r in range(1, n + 1):
        work = [(work[i] + work[i + 1]) / 2 for i in range(n - r + 1)]
        left.append(work[0])
        right.append(work[-1])
    return left, right[::-1]


def _bernstein_range(b: list[Fraction], max_depth: int) -> tuple[Fraction, Fraction]:
    # Endpoint values are attained exactly; interior coefficients only enclose.
    lo_known = min(b[0], b[-1])
    hi_known = max(b[0], b[-1])
    lo_enc, hi_enc = lo_known, hi_known
    stack = [(b, 0)]
    while stack:
        piece, depth = stack.pop()
        lo_known = min(lo_known, piece[0], piece[-1])
        hi_known = max(hi_known, piece[0], piece[-1])
        pmin, pmax = min(piece), max(piece)
        need_lo = pmin < lo_known
        need_hi = pmax > hi_known
        if not (need_lo or need_hi):
            continue
        if depth >= max_depth:
            lo_enc = min(lo_enc, pmin)
            hi_enc = max(hi_enc, pmax)
            continue
        left, right = _split(piece)
        stack.append((left, depth + 1))
        stack.append((right, depth + 1))
    return min(lo_enc, lo_known), max(hi_enc, hi_known)
