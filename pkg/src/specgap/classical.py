"""Classical limit of the pair correlation for ``H = phi(I)`` with monotone ``phi``.

In the 1-periodic action convention the flow at action ``x`` has period
``T = 1/|phi'(x)|``.  The limiting pair correlation is

    V fhat(0) + sum_{k != 0} int_0^1 fhat(k / |phi'(x)|) / |phi'(x)| dx,

with correlation volume ``V = int_0^1 dx / |phi'(x)|``.  The ``k = 0`` term
would repeat ``V fhat(0)``; it is available only through ``include_k0`` so the
alternative can be tested against the empirical eigenvalue statistic.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy import integrate, optimize

from ._reduce import dsum
from .errors import DomainError, PreconditionError
from .phase import Phase
from .windows import Window


@dataclass(frozen=True)
class ClassicalPCF:
    v: float
    k_terms: list  # [(k, value)], k = -k_max..k_max without 0
    total: float

    def to_json(self) -> dict:
        return {
            "v": self.v,
            "terms": [{"k": k, "value": val} for k, val in self.k_terms],
            "total": self.total,
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def period(phase: Phase, i: float) -> float:
    if not 0.0 <= i <= 1.0:
        raise DomainError(f"action {i} outside [0, 1]")
    phase.require_monotone()
    return 1.0 / abs(float(phase.derivative(np.array([i]))[0]))


def _dphi(phase: Phase, x: float) -> float:
    return abs(float(phase.derivative(np.array([x]))[0]))


def correlation_volume(phase: Phase) -> float:
    """``int_0^1 dx / |phi'(x)|``; closed form when phi' is affine."""
    phase.require_monotone()
    if phase.is_polynomial and phase.phi.degree <= 2:
        d = phase.phi.deriv()
        c0 = d.coeffs[0]
        c1 = d.coeffs[1] if d.degree >= 1 else Fraction(0)
        if c1 == 0:
            return 1.0 / abs(float(c0))
        # same sign on [0, 1], so the log argument is positive
        return (math.log(abs(c0 + c1)) - math.log(abs(c0))) / float(c1)
    val, _ = integrate.quad(lambda x: 1.0 / _dphi(phase, x), 0.0, 1.0, epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


def _k_needed(phase: Phase, window: Window) -> int:
    """Largest k with a nonzero term: k/|phi'| < R somewhere, i.e. k < R max|phi'|."""
    r = window.effective_radius
    if not math.isfinite(r):
        raise PreconditionError("window needs a finite (effective) support radius")
    rm = Fraction(r) * phase.max_abs_d1
    return max(math.ceil(rm) - 1, 0)


def _breakpoints(phase: Phase, level: float, grid: int = 1024) -> list[float]:
    """Points in (0, 1) where |phi'| crosses ``level`` (kinks of fhat(k/|phi'|))."""
    xs = np.linspace(0.0, 1.0, grid + 1)
    g = np.abs(phase.derivative(xs)) - level
    if np.all(g == 0):
        return []
    pts = []
    for i in range(grid):
        if g[i] == 0 and 0 < xs[i] < 1:
            pts.append(float(xs[i]))
        elif g[i] * g[i + 1] < 0:
            pts.append(optimize.brentq(lambda x: _dphi(phase, x) - level, xs[i], xs[i + 1], xtol=1e-15))
    return pts


def _term(phase: Phase, window: Window, k: int) -> float:
    def integrand(x):
        d = _dphi(phase, x)
        return float(window.fhat(k / d)) / d

    pts = []
    if math.isfinite(window.support_radius):
        pts = _breakpoints(phase, k / window.support_radius)
    val, _ = integrate.quad(integrand, 0.0, 1.0, points=pts or None, epsabs=1e-12, epsrel=1e-10, limit=400)
    return val


def theorem_a_pcf(phase: Phase, window: Window, k_max: int, include_k0: bool = False) -> ClassicalPCF:
    phase.require_monotone()
    if k_max < 1:
        raise DomainError("k_max must be >= 1")
    need = _k_needed(phase, window)
    if k_max < need:
        raise PreconditionError(f"k_max = {k_max} misses nonzero terms up to |k| = {need}")
    v = correlation_volume(phase)
    pos = [_term(phase, window, k) for k in range(1, k_max + 1)]
    terms = [(-k, pos[k - 1]) for k in range(k_max, 0, -1)] + [(k, pos[k - 1]) for k in range(1, k_max + 1)]
    if include_k0:
        terms.insert(k_max, (0, _term(phase, window, 0)))
    total = v * window.fhat0 + float(dsum(np.array([val for _, val in terms])))
    return ClassicalPCF(v=v, k_terms=terms, total=total)


def hamiltonian_pcf_empirical(
    phase: Phase, n: int, window: Window, n_max: int = 2000, order: Optional[int] = 2
) -> float:
    """``(1/N) sum_{i,j} f(N (Phi(i/N) - Phi(j/N)))`` on the real line.

    After sorting, pairs more than ``n_max`` places apart are dropped; for a
    monotone phase their separation is at least ``n_max * min|phi'|``.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    if n_max < 1:
        raise DomainError("n_max must be >= 1")
    ld = np.longdouble
    x = np.arange(1, n + 1, dtype=ld) / ld(n)
    y = np.sort(np.asarray(ld(n) * phase.full(x, n, order, dtype=ld), dtype=np.float64))
    w = min(n - 1, n_max)
    partial = np.zeros(w + 1)
    partial[0] = n * window.f0
    for m in range(1, w + 1):
        partial[m] = 2.0 * dsum(window.f(y[m:] - y[:-m]))
    return float(dsum(partial)) / n
