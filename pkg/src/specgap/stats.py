"""Pair correlation, number variance, density of states and gap spectra.

Spectra live on the circle [0, N) with unit mean spacing.  The pair
correlation of a window ``f`` is

    rho(f) = (1/N) sum_{j,k} sum_n f(x_j - x_k + n N)
           = (1/N^2) sum_l fhat(l/N) |Tr U^l|^2

(Poisson summation with ``fhat(xi) = int f(x) e(-x xi) dx``); its Poisson
value is ``f(0) + fhat(0)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import integrate

from ._reduce import dsum
from .errors import DomainError, PreconditionError
from .expsum import TraceTable
from .phase import Phase, Spectrum
from .poly import Poly
from .windows import Window


@dataclass(frozen=True)
class StatisticEstimate:
    value: float
    kind: str  # pcf | nv | dos | gap
    params: dict = field(default_factory=dict)

    def to_record(self) -> dict:
        return {"kind": self.kind, "value": self.value, **self.params}


def poisson_reference(window: Window) -> float:
    return window.f0 + window.fhat0


def pcf_spectral(traces: TraceTable, window: Window) -> float:
    """Pair correlation from a trace table; exact for compactly supported fhat."""
    n = traces.n
    need = window.ell_needed(n)
    if traces.ell_max < need:
        raise PreconditionError(
            f"ell_max = {traces.ell_max} < {need} needed to cover supp fhat at N = {n}"
        )
    ell = np.arange(traces.ell_max + 1)
    w = np.asarray(window.fhat(ell / n), dtype=float)
    w[1:] *= 2.0  # conjugate symmetry folds l < 0 onto l > 0
    return float(dsum(w * traces.abs2())) / n**2


def pcf_direct(spec: Spectrum, window: Window, n_max: int = 8, rows: int = 256) -> float:
    """``(1/N) sum_{j,k} sum_{|n| <= n_max} f(x_j - x_k + n N)``."""
    if n_max < 0:
        raise DomainError("n_max must be >= 0")
    x = spec.points
    n = spec.n
    shifts = np.arange(-n_max, n_max + 1) * float(n)
    row_totals = np.empty(n)
    for lo in range(0, n, rows):
        d = x[lo : lo + rows, None] - x[None, :]
        vals = window.f(d[:, None, :] + shifts[None, :, None])
        row_totals[lo : lo + rows] = dsum(vals.reshape(vals.shape[0], -1))
    return float(dsum(row_totals)) / n


def number_variance_direct(spec: Spectrum, L: float) -> float:
    """Exact ``(1/N) int_0^N (n_L(x) - L)^2 dx`` for windows ``(x - L/2, x + L/2]``.

    The counting function is piecewise constant; it jumps at ``x_j - L/2``
    (+1) and ``x_j + L/2`` (-1), so the integral is a finite sum over the
    merged breakpoints.
    """
    n = spec.n
    if not 0 <= L <= n:
        raise DomainError(f"L = {L} outside [0, N]")
    if L == 0 or L == n:
        return 0.0
    x = spec.points
    enter = np.mod(x - L / 2, n)
    leave = np.mod(x + L / 2, n)
    # windows that straddle x = 0 are already counted at the left end
    count0 = int(np.count_nonzero(enter > leave))
    pos = np.concatenate([enter, leave])
    step = np.concatenate([np.ones(n, dtype=np.int64), -np.ones(n, dtype=np.int64)])
    order = np.argsort(pos, kind="stable")
    pos, step = pos[order], step[order]
    counts = count0 + np.cumsum(step)
    edges = np.concatenate([[0.0], pos, [float(n)]])
    levels = np.concatenate([[count0], counts]).astype(float)
    lengths = np.diff(edges)
    return float(dsum(lengths * (levels - L) ** 2)) / n


class NVSpectral(NamedTuple):
    value: float
    tail_bound: float


def number_variance_spectral(traces: TraceTable, L: float) -> NVSpectral:
    """Partial sum ``(2/pi^2) sum_{l<=ell_max} sin^2(pi l L/N) |Tr U^l|^2 / l^2`` and its tail bound."""
    n = traces.n
    if traces.ell_max < 1:
        return NVSpectral(0.0, math.inf)
    ell = np.arange(1, traces.ell_max + 1)
    u = np.longdouble(L) / np.longdouble(n) * ell.astype(np.longdouble)
    u = np.asarray(u - np.floor(u), dtype=float)
    s2 = np.sin(np.pi * u) ** 2
    terms = s2 / ell.astype(float) ** 2 * traces.abs2()[1:]
    value = 2.0 / np.pi**2 * float(dsum(terms))
    tail = 2.0 / np.pi**2 * n**2 / traces.ell_max
    return NVSpectral(value, tail)


def _as_poly(g) -> Poly:
    return g if isinstance(g, Poly) else Poly(g)


def dos_empirical(phase: Phase, n: int, g) -> float:
    """``(1/N) sum_{j=1}^{N} g(phi(j/N))``."""
    g = _as_poly(g)
    if g.degree > 8:
        raise DomainError("test polynomial degree must be <= 8")
    x = np.arange(1, n + 1) / n
    return float(dsum(g(phase.principal(x)))) / n


def dos_limit(phase: Phase, g) -> float:
    """``int_0^1 g(phi(x)) dx``; exact rational arithmetic for polynomial phi."""
    g = _as_poly(g)
    if g.degree > 8:
        raise DomainError("test polynomial degree must be <= 8")
    if isinstance(phase.phi, Poly):
        return float(g.compose(phase.phi).integral01())
    val, _ = integrate.quad(lambda x: float(g(phase.principal(np.array([x])))[0]), 0.0, 1.0,
                            epsabs=1e-13, epsrel=1e-12, limit=200)
    return val


class Gap(NamedTuple):
    value: float
    count: int


def gap_spectrum(spec: Spectrum, tol: Optional[float] = None) -> list[Gap]:
    """Distinct circular nearest-neighbour gaps with multiplicities.

    Gaps whose sorted neighbours differ by at most ``tol`` (default 1e-9 N)
    form one cluster, represented by its mean.
    """
    n = spec.n
    tol = 1e-9 * n if tol is None else tol
    if not tol > 0:
        raise DomainError("tol must be positive")
    x = spec.points
    gaps = np.sort(np.append(np.diff(x), x[0] + n - x[-1]))
    breaks = np.flatnonzero(np.diff(gaps) > tol) + 1
    return [Gap(float(dsum(c)) / c.size, int(c.size)) for c in np.split(gaps, breaks)]
