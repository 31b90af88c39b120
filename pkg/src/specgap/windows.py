"""Test-function pairs ``(f, fhat)`` with ``fhat(xi) = int f(x) e(-x xi) dx``."""
from __future__ import annotations

import math
from functools import lru_cache
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

# |fhat| below this is treated as zero when sizing truncated sums
TAIL = 1e-16


@dataclass(frozen=True, eq=False)
class Window:
    kind: str
    c: float
    f: Callable
    fhat: Callable
    f0: float
    fhat0: float
    support_radius: float
    effective_radius: float

    def spec(self) -> dict:
        return {"kind": self.kind, "c": self.c} if self.kind == "fejer" else {"kind": self.kind}

    def ell_needed(self, n: int) -> int:
        """Smallest ell_max that captures every nonzero ``fhat(l/n)`` (or all above TAIL)."""
        return math.ceil(self.effective_radius * n)

    def __repr__(self) -> str:
        return f"Window({self.kind}, c={self.c:g})"


def fejer(c: float) -> Window:
    """Triangle ``fhat(xi) = max(0, 1 - |xi|/c)``, ``f(x) = c sinc^2(c x)``."""
    if not c > 0:
        raise ValueError("fejer window needs c > 0")
    return _fejer(float(c))


@lru_cache(maxsize=64)
def _fejer(c: float) -> Window:
    return _checked(Window(
        kind="fejer",
        c=c,
        f=lambda x: c * np.sinc(c * np.asarray(x, dtype=float)) ** 2,
        fhat=lambda xi: np.maximum(0.0, 1.0 - np.abs(np.asarray(xi, dtype=float)) / c),
        f0=c,
        fhat0=1.0,
        support_radius=c,
        effective_radius=c,
    ))


@lru_cache(maxsize=1)
def gaussian() -> Window:
    """Self-dual ``exp(-pi x^2)``; for oracles only (fhat has no compact support)."""
    return _checked(Window(
        kind="gaussian",
        c=1.0,
        f=lambda x: np.exp(-np.pi * np.asarray(x, dtype=float) ** 2),
        fhat=lambda xi: np.exp(-np.pi * np.asarray(xi, dtype=float) ** 2),
        f0=1.0,
        fhat0=1.0,
        support_radius=math.inf,
        effective_radius=math.sqrt(-math.log(TAIL) / math.pi),
    ))


def custom(f, fhat, support_radius=math.inf, effective_radius=None, c: float = 1.0, tol: float = 1e-8) -> Window:
    """User pair, checked on a probe grid before use.

    Compactly supported ``fhat`` is checked by inverting it over its support;
    otherwise ``fhat`` is compared with the forward Fourier integral of ``f``.
    Both must be real and even.
    """
    if effective_radius is None:
        if not math.isfinite(support_radius):
            raise ValueError("non-compact fhat needs an effective_radius")
        effective_radius = support_radius
    w = Window(
        kind="custom",
        c=float(c),
        f=f,
        fhat=fhat,
        f0=float(np.asarray(f(0.0))),
        fhat0=float(np.asarray(fhat(0.0))),
        support_radius=float(support_radius),
        effective_radius=float(effective_radius),
    )
    return _checked(w, tol)


def _checked(w: Window, tol: float = 1e-8) -> Window:
    err = verify_pair(w)
    if err > tol:
        raise ValueError(f"f and fhat are not a transform pair (max error {err:.3g})")
    return w


def verify_pair(w: Window, probes=None) -> float:
    """Max abs discrepancy of the transform pair on a probe grid."""
    if probes is None:
        probes = np.array([0.0, 0.13, 0.37, 0.5, 0.91, 1.4, 2.2])
    errs = []
    if math.isfinite(w.support_radius):
        r = w.support_radius
        for x in probes:
            val, _ = integrate.quad(
                lambda u: float(w.fhat(u)), 0.0, r, weight="cos", wvar=2 * np.pi * x, limit=200
            )
            errs.append(abs(2 * val - float(np.asarray(w.f(x)))))
    else:
        for xi in probes:
            if xi == 0:
                val, _ = integrate.quad(lambda u: float(w.f(u)), 0.0, np.inf, epsabs=1e-13, limit=200)
            else:
                val, _ = integrate.quad(lambda u: float(w.f(u)), 0.0, np.inf, weight="cos", wvar=2 * np.pi * xi)
            errs.append(abs(2 * val - float(np.asarray(w.fhat(xi)))))
    return max(errs)


def from_spec(spec: dict) -> Window:
    kind = spec.get("kind")
    if kind == "fejer":
        return fejer(spec["c"])
    if kind == "gaussian":
        return gaussian()
    raise ValueError(f"unknown window kind {kind!r}")
