"""Averages of spectral statistics over the time parameter ``t``.

The pair correlation at time ``t`` is

    rho_t = fhat(0) + (1/N^2) sum_{l != 0} fhat(l/N) (N + sum_{j != k} e(t l D_jk))

with ``D_jk = N (Phi(j/N) - Phi(k/N))``.  Averaging ``e(t y)`` over
``[a, b]`` gives a sinc kernel, and after pairing ``l`` with ``-l`` and
``(j, k)`` with ``(k, j)`` the mean deviation from Poisson is

    (1/N) sum_{l != 0} fhat(l/N) - f(0)
      + (1/N^2) sum_{j < k} 2 / ((b - a) D) * (P(b D) - P(a D)),

    P(y) = sum_{l >= 1} fhat(l/N) sin(2 pi l y) / (pi l).

For a polynomial phase with rational coefficients and rational ``a, b`` every
``a D`` and ``b D`` lies on a grid ``r / Q``, so ``P`` is tabulated once by an
FFT of length ``Q`` and the pair sum costs ``O(N^2)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from ._reduce import dsum
from .errors import DomainError, SizeError
from .expsum import trace_table
from .phase import Phase, spectrum
from .poly import as_fraction
from .stats import number_variance_direct, pcf_spectral, poisson_reference
from .windows import Window

# largest FFT grid used by the exact path (complex128: 64 MiB)
MAX_GRID = 1 << 22
# largest N^2 * ell_max accepted by the direct fallback
MAX_DIRECT_WORK = 2 * 10**8


@dataclass(frozen=True)
class TimeAverage:
    mean: float
    deviation: float
    n: int
    a: float
    b: float
    method: str

    def to_record(self) -> dict:
        return {
            "n": self.n, "a": self.a, "b": self.b, "method": self.method,
            "mean": self.mean, "deviation": self.deviation,
        }


def gauss_legendre_rule(a: float, b: float, panels: int = 64, nodes: int = 4):
    """Composite Gauss-Legendre nodes and weights on ``[a, b]`` (weights sum to ``b - a``)."""
    if panels < 1 or nodes < 1:
        raise DomainError("panels and nodes must be >= 1")
    x, w = np.polynomial.legendre.leggauss(nodes)
    edges = np.linspace(a, b, panels + 1)
    half = np.diff(edges) / 2
    mid = (edges[:-1] + edges[1:]) / 2
    pts = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    return pts, wts


def gauss_legendre_average(func: Callable[[float], float], a: float, b: float,
                           panels: int = 64, nodes: int = 4) -> float:
    """``(1/(b-a)) int_a^b func(t) dt`` by composite Gauss-Legendre."""
    if not a < b:
        raise DomainError("need a < b")
    pts, wts = gauss_legendre_rule(a, b, panels, nodes)
    vals = np.array([func(float(t)) for t in pts])
    return float(dsum(wts * vals)) / (b - a)


def _window_coeffs(window: Window, n: int) -> tuple[np.ndarray, np.ndarray]:
    ell = np.arange(1, window.ell_needed(n) + 1)
    fh = np.asarray(window.fhat(ell / n), dtype=float)
    keep = fh != 0
    return ell[keep], fh[keep]


def _exact_numerators(phase: Phase, n: int, order: Optional[int]):
    """Integers ``M_j`` and ``D`` with ``N Phi(j/N, N) = M_j / D``, or None if unsuitable."""
    if not phase.is_polynomial:
        return None
    terms = [phase.phi, *(phase.lower if order is None else phase.lower[:order])]
    mus = []
    for j in range(1, n + 1):
        x = Fraction(j, n)
        mus.append(sum((q.exact(x) / Fraction(n) ** i for i, q in enumerate(terms)), Fraction(0)) * n)
    d = 1
    for m in mus:
        d = math.lcm(d, m.denominator)
    nums = [m.numerator * (d // m.denominator) for m in mus]
    return nums, d


def _pair_sum_exact(nums, d, a: Fraction, b: Fraction, ell, fh) -> Optional[float]:
    q = math.lcm(a.denominator, b.denominator) * d
    if q > MAX_GRID:
        return None
    if max(abs(v) for v in nums) >= 2**52:
        return None
    # P on the grid r/Q; l is folded mod Q because sin(2 pi l r / Q) only sees l mod Q
    c = np.zeros(q)
    np.add.at(c, ell % q, fh / (np.pi * ell))
    table = -np.fft.fft(c).imag
    sa = int(a * q / d) % q
    sb = int(b * q / d) % q
    m = np.array(nums, dtype=np.int64)
    mr = m % q
    width = float(b - a)
    zero_pair = 4.0 * float(dsum(fh))
    n = m.size
    partial = np.zeros(max(n - 1, 0))
    for h in range(1, n):
        dm = m[h:] - m[:-h]
        dr = (mr[h:] - mr[:-h]) % q
        pb = table[(sb * dr) % q]
        pa = table[(sa * dr) % q]
        delta = dm.astype(float) / d
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = 2.0 / (width * delta) * (pb - pa)
        terms[dm == 0] = zero_pair
        partial[h - 1] = dsum(terms)
    return float(dsum(partial))


def _pair_sum_direct(phase: Phase, n: int, order, a: float, b: float, ell, fh) -> float:
    if n * n * ell.size > MAX_DIRECT_WORK:
        raise SizeError(
            f"direct time average needs N^2 * ell_max = {n * n * ell.size} > {MAX_DIRECT_WORK}; "
            "use a polynomial phase with rational a, b"
        )
    ld = np.longdouble
    x = np.arange(1, n + 1, dtype=ld) / ld(n)
    mu = ld(n) * phase.full(x, n, order, dtype=ld)
    c = fh / (np.pi * ell)
    ell_ld = ell.astype(ld)
    width = b - a
    zero_pair = 4.0 * float(dsum(fh))

    def P(y):
        u = ell_ld[:, None] * y[None, :]
        u = np.asarray(u - np.round(u), dtype=float)
        return dsum(c[:, None] * np.sin(2 * np.pi * u), axis=0)

    partial = np.zeros(max(n - 1, 0))
    for h in range(1, n):
        dmu = mu[h:] - mu[:-h]
        delta = np.asarray(dmu, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            terms = 2.0 / (width * delta) * (P(ld(b) * dmu) - P(ld(a) * dmu))
        terms[delta == 0] = zero_pair
        partial[h - 1] = dsum(terms)
    return float(dsum(partial))


def time_averaged_pcf(
    phase: Phase, n: int, window: Window, a=1, b=2, order: Optional[int] = 2,
    method: str = "exact", panels: int = 64, nodes: int = 4,
) -> TimeAverage:
    """Mean of ``pcf_spectral`` over ``t in [a, b]``.

    ``method="exact"`` evaluates the closed form above (rational grid when
    possible, otherwise a direct ``O(N^2 ell_max)`` sum); ``"gauss-legendre"``
    samples the pair correlation at composite Gauss-Legendre nodes.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    a, b = as_fraction(a), as_fraction(b)
    if not a < b:
        raise DomainError("need a < b")
    phase.require_monotone()
    ref = poisson_reference(window)
    if method == "gauss-legendre":
        ell_max = window.ell_needed(n)
        mean = gauss_legendre_average(
            lambda t: pcf_spectral(trace_table(phase, t, n, ell_max, order), window),
            float(a), float(b), panels, nodes,
        )
        return TimeAverage(mean, mean - ref, n, float(a), float(b), method)
    if method != "exact":
        raise DomainError(f"unknown averaging method {method!r}")

    riemann, pairs, used = averaged_parts(phase, n, window, a, b, order)
    dev = riemann + pairs
    return TimeAverage(ref + dev, dev, n, float(a), float(b), used)


def averaged_parts(phase: Phase, n: int, window: Window, a, b, order: Optional[int] = 2):
    """``(diagonal, off_diagonal, method)`` of the mean deviation over ``[a, b]``.

    ``diagonal = (1/N) sum_{l != 0} fhat(l/N) - f(0)`` does not depend on t;
    ``off_diagonal`` is the averaged pair sum divided by ``N^2``.
    """
    a, b = as_fraction(a), as_fraction(b)
    if not a < b:
        raise DomainError("need a < b")
    ell, fh = _window_coeffs(window, n)
    diagonal = 2.0 * float(dsum(fh)) / n - window.f0
    pairs = None
    used = "exact-grid"
    ex = _exact_numerators(phase, n, order)
    if ex is not None:
        pairs = _pair_sum_exact(ex[0], ex[1], a, b, ell, fh)
    if pairs is None:
        used = "exact-direct"
        pairs = _pair_sum_direct(phase, n, order, float(a), float(b), ell, fh)
    return diagonal, pairs / n**2, used


def time_averaged_nv(
    phase: Phase, n: int, L: float, a: float = 1.0, b: float = 2.0, order: Optional[int] = 2,
    panels: int = 64, nodes: int = 4,
) -> float:
    """Composite Gauss-Legendre mean of ``number_variance_direct`` over ``t in [a, b]``."""
    return gauss_legendre_average(
        lambda t: number_variance_direct(spectrum(phase, t, n, order), L), a, b, panels, nodes
    )
