"""Family sweeps, the sparse Planck subsequence, lattice counts and quadratic-case sequences."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from ._reduce import CHUNK, dsum
from .averaging import averaged_parts
from .errors import DomainError, PreconditionError, SizeError
from .expsum import trace_table
from .phase import FamilyPoint, Phase, family_phase
from .poly import as_fraction
from .stats import pcf_spectral, poisson_reference
from .windows import Window

RNG_ALGORITHM = "philox4x64-10"
ALPHA_FLOOR = 1e-12
QUADRATIC = Phase.polynomial([0, 0, 1], name="x^2")


# --- parameter-family sweeps ---------------------------------------------------

@dataclass(frozen=True)
class SweepResult:
    n: int
    t: float
    window: dict
    num_samples: int
    seed: int
    deviations: list  # [(alpha, beta, rho - poisson)]
    variance: float
    metadata: dict = field(default_factory=dict)

    def records(self) -> list[dict]:
        out = [
            {"record": "sample", "i": i, "alpha": a, "beta": b, "deviation": d}
            for i, (a, b, d) in enumerate(self.deviations)
        ]
        out.append({
            "record": "summary", "n": self.n, "t": self.t, "window": self.window,
            "num_samples": self.num_samples, "seed": self.seed, "variance": self.variance,
            **self.metadata,
        })
        return out

    def to_jsonl(self, path=None) -> str:
        text = "".join(json.dumps(r, sort_keys=True) + "\n" for r in self.records())
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text)
        return text


def sample_rng(seed: int, i: int) -> np.random.Generator:
    """Independent stream for sample ``i``: Philox keyed by ``(seed, i)``."""
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, i], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def _draw(seed: int, i: int, T: float) -> tuple[float, float, int]:
    rng = sample_rng(seed, i)
    redraws = 0
    while True:
        alpha, beta = rng.uniform(-T, T, size=2)
        if abs(alpha) >= ALPHA_FLOOR:
            return float(alpha), float(beta), redraws
        redraws += 1


def param_sweep(
    base: Phase, t: float, n: int, T: float, num_samples: int, seed: int, window: Window,
    threads: int = 1, points: Optional[Sequence[tuple[float, float]]] = None, order: Optional[int] = 2,
) -> SweepResult:
    """Pair-correlation deviations over ``(alpha, beta)`` uniform on ``[-T, T]^2``.

    Sample ``i`` is the phase ``alpha*phi + beta*x`` with ``(alpha, beta)``
    drawn from its own counter-based stream, so results do not depend on
    ``threads``.  ``points`` overrides the random draws.
    """
    if t == 0:
        raise DomainError("t must be nonzero")
    if not T > 0:
        raise DomainError("T must be positive")
    base.require_nondegenerate()
    if points is not None:
        draws = [(float(a), float(b), 0) for a, b in points]
        num_samples = len(draws)
    else:
        draws = [_draw(seed, i, T) for i in range(num_samples)]
    if num_samples < 1:
        raise DomainError("num_samples must be >= 1")
    ref = poisson_reference(window)
    ell_max = window.ell_needed(n)

    def one(d):
        phase = family_phase(FamilyPoint(d[0], d[1], base))
        return pcf_spectral(trace_table(phase, t, n, ell_max, order), window) - ref

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            devs = list(pool.map(one, draws))
    else:
        devs = [one(d) for d in draws]
    dev = np.array(devs)
    variance = float(dsum(dev * dev)) / dev.size
    meta = {
        "rng": RNG_ALGORITHM,
        "rng_key": "(seed, sample index)",
        "alpha_resampled": sum(d[2] for d in draws),
        "alpha_floor": ALPHA_FLOOR,
        "reduction": f"pairwise-twosum, chunk {CHUNK}",
        "ell_max": ell_max,
        "base": base.name,
    }
    return SweepResult(
        n=n, t=t, window=window.spec(), num_samples=num_samples, seed=seed,
        deviations=[(d[0], d[1], float(v)) for d, v in zip(draws, devs)],
        variance=variance, metadata=meta,
    )


def planck_subsequence(m: int) -> int:
    """``max(2, floor(m (ln m)^4))``."""
    if isinstance(m, bool) or not isinstance(m, (int, np.integer)):
        raise DomainError("m must be an integer")
    if m < 2:
        raise DomainError("m must be >= 2")
    return max(2, math.floor(m * math.log(m) ** 4))


# --- lattice counts ----------------------------------------------------------------

@dataclass(frozen=True)
class LatticeCount:
    n: int
    ell1: int
    ell2: int
    delta: float
    count: int
    homogeneous: int
    inhomogeneous: int

    @property
    def split(self) -> tuple[int, int]:
        return self.homogeneous, self.inhomogeneous

    def row(self) -> list:
        return [self.n, self.ell1, self.ell2, repr(float(self.delta)), self.count, self.homogeneous, self.inhomogeneous]


LATTICE_HEADER = ["N", "ell1", "ell2", "delta", "total", "hom", "inhom"]


def lattice_csv(rows: Sequence[LatticeCount], path=None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(LATTICE_HEADER)
    for r in rows:
        w.writerow(r.row())
    text = buf.getvalue()
    if path is not None:
        with open(path, "w", newline="") as fh:
            fh.write(text)
    return text


def _check_lattice_args(n, ell1, ell2, delta):
    if n < 1:
        raise DomainError("n must be >= 1")
    if ell1 == 0 or ell2 == 0:
        raise DomainError("ell1 and ell2 must be nonzero")
    if not delta > 0:
        raise DomainError("delta must be positive")


def lattice_count_bruteforce(n: int, ell1: int, ell2: int, delta: float = 0.5, phase: Phase | str = "quadratic") -> LatticeCount:
    """Exhaustive count of ``(j1, k1, j2, k2)`` in ``[1, N]^4`` with ``j_i != k_i`` and

    ``|l1 h1 - l2 h2| <= delta`` (``h = j - k``) and either
    ``|l1 (j1^2 - k1^2) - l2 (j2^2 - k2^2)| <= delta N`` (quadratic) or
    ``|l1 (phi(j1/N) - phi(k1/N)) - l2 (phi(j2/N) - phi(k2/N))| <= delta / N``.
    """
    _check_lattice_args(n, ell1, ell2, delta)
    if n > 128:
        raise SizeError("bruteforce lattice count is limited to n <= 128")
    j, k = np.meshgrid(np.arange(1, n + 1), np.arange(1, n + 1), indexing="ij")
    off = j != k
    j, k = j[off].astype(np.int64), k[off].astype(np.int64)
    h, m = j - k, j + k
    fd = Fraction(delta)
    lin_tol = math.floor(fd)
    if isinstance(phase, str):
        if phase != "quadratic":
            raise DomainError(f"unknown phase {phase!r}")
        q = h * m  # j^2 - k^2
        quad_tol = math.floor(fd * n)
    else:
        x = np.arange(1, n + 1) / n
        vals = phase.principal(x, dtype=np.longdouble)
        q = vals[j - 1] - vals[k - 1]
        quad_tol = np.longdouble(delta) / n
    total = hom = 0
    lh2 = ell2 * h
    lq2 = ell2 * q
    for lo in range(0, h.size, CHUNK):
        sl = slice(lo, lo + CHUNK)
        lh1 = ell1 * h[sl, None]
        ok = np.abs(lh1 - lh2[None, :]) <= lin_tol
        ok &= np.abs(ell1 * q[sl, None] - lq2[None, :]) <= quad_tol
        total += int(np.count_nonzero(ok))
        same = (lh1 == lh2[None, :]) & (m[sl, None] == m[None, :])
        hom += int(np.count_nonzero(ok & same))
    return LatticeCount(n, ell1, ell2, float(delta), total, hom, total - hom)


def _pairs_within(a1: int, n1: int, a2: int, n2: int, dmax: int) -> tuple[int, int]:
    """Pairs (m1, m2), m_i = a_i + 2 u_i with 0 <= u_i < n_i, and |m1 - m2| <= dmax.

    Also returns the number of those pairs with m1 == m2.
    """
    d = a1 - a2
    wlo = -((dmax + d) // 2)          # ceil((-dmax - d) / 2)
    whi = (dmax - d) // 2             # floor((dmax - d) / 2)
    wlo, whi = max(wlo, -(n2 - 1)), min(whi, n1 - 1)
    if wlo > whi:
        return 0, 0
    w = np.arange(wlo, whi + 1, dtype=np.int64)
    cnt = np.minimum(n1, n2 + w) - np.maximum(0, w)
    total = int(np.clip(cnt, 0, None).sum())
    same = 0
    if d % 2 == 0 and wlo <= -d // 2 <= whi:
        w0 = -d // 2
        same = max(0, min(n1, n2 + w0) - max(0, w0))
    return total, same


def lattice_count_fast(n: int, ell1: int, ell2: int, delta: float = 0.5) -> LatticeCount:
    """Quadratic lattice count through ``h = j - k`` and ``m = j + k``.

    For ``delta < 1`` the linear condition forces ``l1 h1 = l2 h2``, so
    ``h1 = s l2/g`` and ``h2 = s l1/g`` with ``g = gcd(l1, l2)``.  The
    quadratic condition becomes ``|m1 - m2| <= delta N / (lcm(l1, l2) |s|)``
    and, for fixed ``h``, ``m`` runs over ``|h| + 2, |h| + 4, ..., 2N - |h|``.
    """
    _check_lattice_args(n, ell1, ell2, delta)
    if delta >= 1:
        raise PreconditionError("the (h, m) shortcut needs delta < 1")
    if n > 10**5:
        raise SizeError("n must be <= 1e5")
    g = math.gcd(ell1, ell2)
    p1, p2 = abs(ell2) // g, abs(ell1) // g  # |h1| = p1 |s|, |h2| = p2 |s|
    lcm = abs(ell1 * ell2) // g
    bound = Fraction(delta) * n
    total = hom = 0
    s = 1
    while p1 * s <= n - 1 and p2 * s <= n - 1:
        h1, h2 = p1 * s, p2 * s
        dmax = math.floor(bound / (lcm * s))
        t, same = _pairs_within(h1 + 2, n - h1, h2 + 2, n - h2, dmax)
        total += t
        hom += same
        s += 1
    # the sign of s flips both h1 and h2; the m-ranges depend on |h| only
    total, hom = 2 * total, 2 * hom
    return LatticeCount(n, ell1, ell2, float(delta), total, hom, total - hom)


# --- quadratic-case sequences ------------------------------------------------------

def gauss_abs2_table(n: int, ell: np.ndarray) -> np.ndarray:
    """``|G(l, 0, N)|^2 = g N`` (odd ``N/g``), ``2 g N`` (``4 | N/g``) or 0, with ``g = gcd(l, N)``."""
    g = np.gcd(ell.astype(np.int64), n)
    m = n // g
    factor = np.where(m % 2 == 1, 1, np.where(m % 4 == 0, 2, 0))
    return (g * factor).astype(float) * n


def quadratic_IN(n: int, window: Window) -> float:
    """``(1/N^2) sum_{l != 0} fhat(l/N) |G(l, 0, N)|^2`` for the quadratic phase."""
    if n < 1:
        raise DomainError("n must be >= 1")
    if not math.isfinite(window.support_radius):
        raise PreconditionError("quadratic_IN needs a compactly supported fhat")
    ell = np.arange(1, window.ell_needed(n) + 1)
    fh = np.asarray(window.fhat(ell / n), dtype=float)
    return 2.0 * float(dsum(fh * gauss_abs2_table(n, ell))) / n**2


def quadratic_time_average(n: int, window: Window, T: float = 1.0) -> float:
    """Off-diagonal pair-correlation term for ``phi = x^2`` averaged over ``t in [-T, T]``.

    Each cross term ``e(t l (j^2 - k^2)/N)`` averages to a sinc; the
    ``t``-independent diagonal ``(1/N) sum_{l != 0} fhat(l/N) - f(0)`` is
    not included.
    """
    if not T > 0:
        raise DomainError("T must be positive")
    if n < 1:
        raise DomainError("n must be >= 1")
    T = as_fraction(T)
    _, off, _ = averaged_parts(QUADRATIC, n, window, -T, T)
    return off
