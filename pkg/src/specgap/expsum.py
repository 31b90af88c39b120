"""Exponential sums ``S_t(N, l) = sum_j e(t l N Phi(j/N, N))`` and Gauss sums.

Terms are formed as ``e(l0 * theta_j) * e(r * theta_j)`` with
``l = l0 + r``, ``l0`` a multiple of :data:`BLOCK`, and
``theta_j = frac(t N Phi(j/N, N))`` reduced in extended precision.  Both
factors come from the same one-dimensional kernel whether a single sum or a
whole table is requested, so :func:`exp_sum` and :func:`trace_table` agree
bit for bit.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from ._reduce import dsum
from .errors import DomainError
from .phase import Phase, Spectrum, cycle_phases

BLOCK = 64
TWO_PI = 2.0 * np.pi


def _circ(theta: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    """cos and sin of ``2 pi k theta``; the product is reduced mod 1 in longdouble."""
    if k == 0:
        return np.ones(theta.shape), np.zeros(theta.shape)
    u = np.longdouble(k) * theta
    u = np.asarray(u - np.round(u), dtype=np.float64)
    ang = TWO_PI * u
    return np.cos(ang), np.sin(ang)


def _terms(c0, s0, cr, sr):
    # explicit real arithmetic keeps the rounding independent of array shape
    return c0 * cr - s0 * sr, c0 * sr + s0 * cr


def _single(theta: np.ndarray, ell: int) -> complex:
    n = theta.size
    if ell == 0:
        return complex(n, 0.0)
    k = abs(ell)
    c0, s0 = _circ(theta, k - k % BLOCK)
    cr, sr = _circ(theta, k % BLOCK)
    re, im = _terms(c0, s0, cr, sr)
    val = complex(dsum(re), dsum(im))
    return val if ell > 0 else val.conjugate()


def _table(theta: np.ndarray, ell_max: int, threads: int = 1) -> np.ndarray:
    n = theta.size
    out = np.empty(ell_max + 1, dtype=np.complex128)
    out[0] = complex(n, 0.0)
    if ell_max == 0:
        return out
    r_hi = min(BLOCK, ell_max + 1)
    facs = [_circ(theta, r) for r in range(r_hi)]
    CR = np.stack([f[0] for f in facs])
    SR = np.stack([f[1] for f in facs])

    def block(l0: int) -> None:
        lo = max(l0, 1)
        hi = min(l0 + BLOCK, ell_max + 1)
        c0, s0 = _circ(theta, l0)
        rs = slice(lo - l0, hi - l0)
        re, im = _terms(c0[None, :], s0[None, :], CR[rs], SR[rs])
        out[lo:hi].real = dsum(re)
        out[lo:hi].imag = dsum(im)

    starts = range(0, ell_max + 1, BLOCK)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(block, starts))
    else:
        for l0 in starts:
            block(l0)
    return out


def exp_sum(phase: Phase, t: float, n: int, ell: int, order: Optional[int] = 2) -> complex:
    """``sum_{j=1}^{n} e(t * ell * n * Phi(j/n, n))``."""
    if n < 1:
        raise DomainError("n must be >= 1")
    return _single(cycle_phases(phase, t, n, order), int(ell))


@dataclass(frozen=True, eq=False)
class TraceTable:
    """``values[l] = Tr U^l`` for l = 0..ell_max."""

    n: int
    t: Optional[float]
    ell_max: int
    values: np.ndarray
    source: str = ""

    def __post_init__(self):
        self.values.setflags(write=False)

    def abs2(self) -> np.ndarray:
        return self.values.real**2 + self.values.imag**2

    def to_csv(self, path=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["ell", "re", "im", "abs2"])
        a2 = self.abs2()
        for ell in range(self.ell_max + 1):
            v = self.values[ell]
            w.writerow([ell, repr(float(v.real)), repr(float(v.imag)), repr(float(a2[ell]))])
        text = buf.getvalue()
        if path is not None:
            with open(path, "w", newline="") as fh:
                fh.write(text)
        return text


def trace_table(
    phase: Phase, t: float, n: int, ell_max: int, order: Optional[int] = 2, threads: int = 1
) -> TraceTable:
    if ell_max < 0:
        raise DomainError("ell_max must be >= 0")
    if n < 1:
        raise DomainError("n must be >= 1")
    theta = cycle_phases(phase, t, n, order)
    return TraceTable(n=n, t=t, ell_max=ell_max, values=_table(theta, ell_max, threads), source=phase.name)


def spectrum_traces(spec: Spectrum, ell_max: int, threads: int = 1) -> TraceTable:
    """``sum_j e(l x_j / N)`` for an arbitrary spectrum on the circle [0, N)."""
    theta = np.asarray(spec.points, dtype=np.longdouble) / np.longdouble(spec.n)
    return TraceTable(n=spec.n, t=spec.t, ell_max=ell_max, values=_table(theta, ell_max, threads), source="spectrum")


def gauss_sum_exact(ell: int, n: int) -> tuple[float, int]:
    """``|G(ell, 0, n)|`` from the residue-class table and gcd reduction.

    Returns ``(magnitude, g)`` with ``g = gcd(ell, n)``.
    """
    if ell < 1 or n < 1:
        raise DomainError("ell and n must be positive")
    g = math.gcd(ell, n)
    m = n // g
    if m % 2 == 1:
        mag = math.sqrt(m)
    elif m % 4 == 0:
        mag = math.sqrt(2 * m)
    else:
        mag = 0.0
    return g * mag, g


def gauss_sum_direct(ell: int, n: int, start: int = 1) -> complex:
    """``sum_{j=start}^{start+n-1} e(ell j^2 / n)`` in exact residue arithmetic."""
    j = np.arange(start, start + n, dtype=np.int64)
    r = (ell * (j * j % n)) % n
    ang = TWO_PI * (r / n)
    return complex(dsum(np.cos(ang)), dsum(np.sin(ang)))


class HilbertAverage(NamedTuple):
    average: float
    bound: float


def hilbert_average(
    phase: Phase, n: int, ell: int, a: float, b: float, order: Optional[int] = 2
) -> HilbertAverage:
    """Exact mean of ``|S_t(N, ell)|^2`` over ``t in [a, b]`` and its Hilbert bound.

    The average is ``N + sum_{j != k} K(mu_j - mu_k)`` with ``mu_j = ell N Phi(j/N, N)``
    and ``K(d) = (1/(b-a)) int_a^b e(t d) dt``.  The bound is
    ``N + (3/2) / (b - a) * sum_j 1/delta_j`` (Montgomery-Vaughan);
    it is infinite when two frequencies coincide.
    """
    if not a < b:
        raise DomainError("need a < b")
    if ell == 0:
        raise DomainError("ell must be nonzero")
    phase.require_monotone()
    ld = np.longdouble
    x = np.arange(1, n + 1, dtype=ld) / ld(n)
    mu = ld(ell) * ld(n) * phase.full(x, n, order, dtype=ld)
    width = b - a
    partial = np.zeros(max(n - 1, 0))
    for h in range(1, n):
        d = mu[h:] - mu[:-h]
        ub = ld(b) * d
        ua = ld(a) * d
        sb = np.sin(TWO_PI * np.asarray(ub - np.round(ub), dtype=np.float64))
        sa = np.sin(TWO_PI * np.asarray(ua - np.round(ua), dtype=np.float64))
        df = np.asarray(d, dtype=np.float64)
        with np.errstate(divide="ignore", invalid="ignore"):
            k = (sb - sa) / (TWO_PI * width * df)
        k[df == 0] = 1.0
        partial[h - 1] = 2.0 * dsum(k)
    average = float(n + dsum(partial))

    if n == 1:
        return HilbertAverage(average, float(n))
    gaps = np.asarray(np.diff(np.sort(mu)), dtype=np.float64)
    delta = np.minimum(np.r_[np.inf, gaps], np.r_[gaps, np.inf])
    if np.any(delta == 0):
        return HilbertAverage(average, math.inf)
    bound = float(n + 1.5 / width * dsum(1.0 / delta))
    return HilbertAverage(average, bound)
