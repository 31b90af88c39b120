"""Polyhomogeneous phases and the eigenphase spectra of their quantum maps.

A phase is ``Phi(x, N) = phi(x) + phi_m1(x)/N + phi_m2(x)/N**2 (+ ...)`` on the
action interval ``[0, 1]``.  The quantum map ``U_{t,N}`` has eigenvalues
``e(t N Phi(j/N, N))`` for ``j = 1..N`` with ``e(y) = exp(2 pi i y)``; the
unit-mean-spacing eigenphases are ``N * frac(t N Phi(j/N, N))`` on the circle
of circumference ``N``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .poly import Poly, as_fraction

Interval = tuple[Fraction, Fraction]


def _interval(bounds) -> Interval:
    lo, hi = (as_fraction(b) for b in bounds)
    if lo > hi:
        raise ValueError(f"empty interval [{lo}, {hi}]")
    return lo, hi


def _scale_interval(iv: Interval, a: Fraction, b: Fraction = Fraction(0)) -> Interval:
    lo, hi = a * iv[0], a * iv[1]
    if lo > hi:
        lo, hi = hi, lo
    return lo + b, hi + b


def _excludes_zero(iv: Interval) -> bool:
    return iv[0] > 0 or iv[1] < 0


@dataclass(frozen=True, eq=False)
class Phase:
    """Classical Hamiltonian ``H = Phi(I)`` with certified derivative bounds.

    Use :meth:`polynomial` for the exact representation (bounds are then
    computed, never sampled) or :meth:`from_callable` for tabulated/spline
    symbols with user-certified bounds.
    """

    phi: Poly | Callable
    lower: tuple = ()
    d1_bounds: Interval = (Fraction(0), Fraction(0))
    d2_bounds: Interval = (Fraction(0), Fraction(0))
    dphi: Optional[Callable] = None
    d2phi: Optional[Callable] = None
    name: str = ""

    # --- constructors -----------------------------------------------------
    @classmethod
    def polynomial(cls, phi, phi_m1=None, phi_m2=None, *, extra=(), name: str = "") -> "Phase":
        p = phi if isinstance(phi, Poly) else Poly(phi)
        lower = [q if isinstance(q, Poly) else Poly(q if q is not None else [0]) for q in (phi_m1, phi_m2)]
        lower += [q if isinstance(q, Poly) else Poly(q) for q in extra]
        while lower and lower[-1].is_zero():
            lower.pop()
        d1 = p.deriv()
        return cls(
            phi=p,
            lower=tuple(lower),
            d1_bounds=d1.range01(),
            d2_bounds=d1.deriv().range01(),
            name=name or _poly_name(p),
        )

    @classmethod
    def from_callable(cls, phi, dphi, d1_bounds, d2_bounds, *, d2phi=None, lower=(), name="custom"):
        """Phase from vectorized callables.  Bounds are trusted as certified."""
        return cls(
            phi=phi,
            lower=tuple(lower),
            d1_bounds=_interval(d1_bounds),
            d2_bounds=_interval(d2_bounds),
            dphi=dphi,
            d2phi=d2phi,
            name=name,
        )

    @classmethod
    def linear(cls, beta=1) -> "Phase":
        return cls.polynomial([0, beta])

    @classmethod
    def from_json(cls, obj) -> "Phase":
        if isinstance(obj, str):
            obj = json.loads(obj)
        unknown = set(obj) - {"phi", "phi_m1", "phi_m2"}
        if unknown:
            raise ValueError(f"unknown phase fields: {sorted(unknown)}")
        if "phi" not in obj:
            raise ValueError("phase needs a 'phi' coefficient list")
        return cls.polynomial(obj["phi"], obj.get("phi_m1"), obj.get("phi_m2"))

    def to_json(self) -> dict:
        if not self.is_polynomial:
            raise TypeError("only polynomial phases serialize")
        out = {"phi": self.phi.to_list()}
        for key, q in zip(("phi_m1", "phi_m2"), self.lower):
            out[key] = q.to_list()
        if len(self.lower) > 2:
            raise TypeError("serialization covers phi_m1 and phi_m2 only")
        return out

    # --- evaluation -------------------------------------------------------
    @property
    def is_polynomial(self) -> bool:
        return isinstance(self.phi, Poly) and all(isinstance(q, Poly) for q in self.lower)

    @property
    def phi_m1(self):
        return self.lower[0] if len(self.lower) > 0 else Poly([0])

    @property
    def phi_m2(self):
        return self.lower[1] if len(self.lower) > 1 else Poly([0])

    def principal(self, x, dtype=np.float64):
        if isinstance(self.phi, Poly):
            return self.phi(x, dtype=dtype)
        return np.asarray(self.phi(np.asarray(x, dtype=np.float64)), dtype=dtype)

    def derivative(self, x):
        if isinstance(self.phi, Poly):
            return self.phi.deriv()(x)
        return np.asarray(self.dphi(np.asarray(x, dtype=float)), dtype=float)

    def second_derivative(self, x):
        if isinstance(self.phi, Poly):
            return self.phi.deriv().deriv()(x)
        if self.d2phi is None:
            raise PreconditionError("phase has no second derivative")
        return np.asarray(self.d2phi(np.asarray(x, dtype=float)), dtype=float)

    def full(self, x, n: int, order: Optional[int] = 2, dtype=np.float64):
        """``Phi(x, n)`` truncated after ``order`` lower-order symbols (None = all)."""
        terms = self.lower if order is None else self.lower[:order]
        out = self.principal(x, dtype=dtype)
        scale = dtype(1)
        for q in terms:
            scale = scale / dtype(n)
            vals = q(x, dtype=dtype) if isinstance(q, Poly) else np.asarray(q(np.asarray(x, float)), dtype=dtype)
            out = out + vals * scale
        return out

    # --- preconditions ----------------------------------------------------
    def require_monotone(self) -> None:
        if not _excludes_zero(self.d1_bounds):
            raise PreconditionError(
                f"certified phi' bounds {_fmt(self.d1_bounds)} do not exclude 0"
            )

    def require_nondegenerate(self) -> None:
        if not _excludes_zero(self.d2_bounds):
            raise PreconditionError(
                f"certified phi'' bounds {_fmt(self.d2_bounds)} do not exclude 0"
            )

    def require_invertible_derivative(self) -> None:
        """phi' strictly monotone: phi'' certified semi-definite and not identically 0.

        A polynomial phi'' that keeps one sign can only vanish at isolated
        points, so phi' is still strictly monotone; callables need a strict bound.
        """
        lo, hi = self.d2_bounds
        if _excludes_zero(self.d2_bounds):
            return
        if self.is_polynomial and (lo >= 0 or hi <= 0) and not self.phi.deriv().deriv().is_zero():
            return
        raise PreconditionError(f"phi' is not certified invertible (phi'' bounds {_fmt(self.d2_bounds)})")

    @property
    def min_abs_d1(self) -> Fraction:
        lo, hi = self.d1_bounds
        return Fraction(0) if lo <= 0 <= hi else min(abs(lo), abs(hi))

    @property
    def max_abs_d1(self) -> Fraction:
        return max(abs(self.d1_bounds[0]), abs(self.d1_bounds[1]))

    def __repr__(self) -> str:
        return f"Phase({self.name}, d1={_fmt(self.d1_bounds)}, d2={_fmt(self.d2_bounds)})"


def _fmt(iv: Interval) -> str:
    return f"[{float(iv[0]):g}, {float(iv[1]):g}]"


def _poly_name(p: Poly) -> str:
    parts = []
    for i, c in enumerate(p.coeffs):
        if c == 0:
            continue
        mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
        coef = str(c) if (c != 1 or i == 0) else ""
        parts.append(f"{coef}{'*' if coef and mono else ''}{mono}")
    return " + ".join(parts) or "0"


@dataclass(frozen=True)
class FamilyPoint:
    alpha: float
    beta: float
    base: Phase


def family_phase(point: FamilyPoint) -> Phase:
    """The phase ``x -> alpha*phi(x) + beta*x`` with bounds by interval arithmetic."""
    base = point.base
    a, b = as_fraction(point.alpha), as_fraction(point.beta)
    d1 = _scale_interval(base.d1_bounds, a, b)
    d2 = _scale_interval(base.d2_bounds, a)
    name = f"{float(a):g}*({base.name}) + {float(b):g}*x"
    if base.is_polynomial:
        phi = base.phi * a + Poly([0, b])
        return Phase(phi=phi, lower=tuple(q * a for q in base.lower), d1_bounds=d1, d2_bounds=d2, name=name)
    af, bf = float(a), float(b)
    lower = tuple((lambda q: (lambda x: af * np.asarray(q(x))))(q) for q in base.lower)
    d2phi = None if base.d2phi is None else (lambda x: af * np.asarray(base.d2phi(x)))
    return Phase(
        phi=lambda x: af * np.asarray(base.principal(x)) + bf * np.asarray(x),
        lower=lower,
        d1_bounds=d1,
        d2_bounds=d2,
        dphi=lambda x: af * np.asarray(base.derivative(x)) + bf,
        d2phi=d2phi,
        name=name,
    )


def eval_phase(phase: Phase, x: float, n: int, order: Optional[int] = 0) -> float:
    """``phi(x) + [order>=1] phi_m1(x)/n + [order>=2] phi_m2(x)/n**2``."""
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x = {x} outside [0, 1]")
    if n < 1:
        raise DomainError("n must be >= 1")
    return float(phase.full(np.array([x]), n, order)[0])


def cycle_phases(phase: Phase, t: float, n: int, order: Optional[int] = 2) -> np.ndarray:
    """``frac(t * n * Phi(j/n, n))`` for j = 1..n, reduced in extended precision."""
    ld = np.longdouble
    j = np.arange(1, n + 1, dtype=ld)
    x = j / ld(n)
    y = ld(t) * ld(n) * phase.full(x, n, order, dtype=ld)
    return y - np.floor(y)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """N eigenphases on the circle [0, N), stored sorted."""

    n: int
    points: np.ndarray
    t: Optional[float] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        pts = np.sort(np.asarray(self.points, dtype=np.float64) % self.n)
        pts[pts >= self.n] -= self.n
        pts = np.sort(pts)
        if pts.shape != (self.n,):
            raise ValueError(f"expected {self.n} points, got {pts.size}")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @classmethod
    def from_points(cls, points: Sequence[float], n: Optional[int] = None, **meta) -> "Spectrum":
        points = np.asarray(points, dtype=float)
        return cls(n=n if n is not None else points.size, points=points, meta=meta)


def picket_fence(n: int) -> Spectrum:
    return Spectrum(n=n, points=np.arange(n, dtype=float), meta={"kind": "picket_fence"})


def spectrum(phase: Phase, t: float, n: int, order: Optional[int] = 2) -> Spectrum:
    """Sorted eigenphases ``x_j = N * frac(t N Phi(j/N, N))``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    theta = cycle_phases(phase, t, n, order)
    pts = np.asarray(np.longdouble(n) * theta, dtype=np.float64)
    return Spectrum(n=n, points=pts, t=t, meta={"phase": phase.name, "order": order})


def mean_value_point(phase: Phase, j: int, k: int, n: int, tol: float = 1e-12) -> float:
    """``xi`` in [0, n] with ``phi(j/n) - phi(k/n) = phi'(xi/n) (j - k) / n``.

    phi' is inverted by bisection on the bracket [min(j,k)/n, max(j,k)/n]
    followed by Newton polishing.
    """
    if not (1 <= j <= n and 1 <= k <= n) or j == k:
        raise DomainError("need 1 <= j, k <= n and j != k")
    phase.require_invertible_derivative()
    if phase.is_polynomial:
        slope = float(n * (phase.phi.exact(Fraction(j, n)) - phase.phi.exact(Fraction(k, n))) / (j - k))
    else:
        pj, pk = phase.principal(np.array([j / n, k / n]), dtype=np.longdouble)
        slope = float((pj - pk) * n / (j - k))

    def g(u):
        return float(phase.derivative(np.array([u]))[0]) - slope

    lo, hi = min(j, k) / n, max(j, k) / n
    increasing = phase.d2_bounds[0] >= 0
    utol = tol / (4 * n)
    while hi - lo > utol:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0:
            lo = hi = mid
            break
        if (gm < 0) == increasing:
            lo = mid
        else:
            hi = mid
    u = 0.5 * (lo + hi)
    a, b = min(j, k) / n, max(j, k) / n
    for _ in range(3):
        d2 = float(phase.second_derivative(np.array([u]))[0])
        if d2 == 0:
            break
        step = g(u) / d2
        cand = u - step
        if not a <= cand <= b or abs(step) < 1e-17:
            break
        u = cand
    return n * u
