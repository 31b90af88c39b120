"""Deterministic compensated summation.

Every reduction in the package goes through :func:`dsum`: inputs are cut into
fixed chunks of ``CHUNK`` entries, each chunk is reduced by a balanced pairwise
tree (entry i meets entry i + half at every level) that carries TwoSum error terms, and the chunk partials are combined by
the same tree.  The schedule depends only on the length of the summed axis,
so the result is bit-identical across runs, array shapes and thread counts.
"""
from __future__ import annotations

import numpy as np

CHUNK = 4096


def _next_pow2(n: int) -> int:
    return 1 if n <= 1 else 1 << (n - 1).bit_length()


def _tree(s: np.ndarray, e: np.ndarray | None) -> tuple[np.ndarray, np.ndarray]:
    # s has a power-of-two trailing axis; entry i is paired with i + half
    while s.shape[-1] > 1:
        half = s.shape[-1] // 2
        a, b = s[..., :half], s[..., half:]
        t = a + b
        bp = t - a
        err = (a - (t - bp)) + (b - bp)
        e = err if e is None else e[..., :half] + e[..., half:] + err
        s = t
    if e is None:
        e = np.zeros_like(s)
    return s[..., 0], e[..., 0]


def _real_sum(x: np.ndarray) -> np.ndarray:
    n = x.shape[-1]
    lead = x.shape[:-1]
    if n == 0:
        return np.zeros(lead)
    width = min(CHUNK, _next_pow2(n))
    nchunk = -(-n // width)
    padded = np.zeros(lead + (nchunk * width,))
    padded[..., :n] = x
    s, e = _tree(padded.reshape(lead + (nchunk, width)), None)
    if nchunk > 1:
        m = _next_pow2(nchunk)
        ps = np.zeros(lead + (m,))
        pe = np.zeros(lead + (m,))
        ps[..., :nchunk] = s
        pe[..., :nchunk] = e
        s, e = _tree(ps, pe)
    else:
        s, e = s[..., 0], e[..., 0]
    return s + e


def dsum(x, axis: int = -1):
    """Sum ``x`` along ``axis`` with the fixed compensated pairwise schedule."""
    x = np.asarray(x)
    x = np.moveaxis(x, axis, -1)
    if np.iscomplexobj(x):
        re = _real_sum(np.ascontiguousarray(x.real, dtype=np.float64))
        out = np.empty(re.shape, dtype=np.complex128)
        out.real = re
        out.imag = _real_sum(np.ascontiguousarray(x.imag, dtype=np.float64))
    else:
        out = _real_sum(np.asarray(x, dtype=np.float64))
    return out[()] if np.ndim(out) == 0 else out
