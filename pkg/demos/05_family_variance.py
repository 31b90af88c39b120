"""Most members of a two-parameter family look Poisson.

Add alpha x^2 + beta x to a base phase and draw (alpha, beta) from [-T, T]^2.
Individual draws scatter around the Poisson value, but the mean-square
deviation falls roughly like (log N)^2 / N.  Samples come from a counter-based
generator keyed by (seed, sample index), so the numbers below do not depend on
the thread count.
"""
import math
import time

from specgap import Phase, fejer
from specgap.experiments import param_sweep

w = fejer(0.8)
for base in (Phase.polynomial([0, 0, 1]), Phase.polynomial([0, 0, 1, 1])):
    print(f"base {base.name}")
    for n in (64, 256, 1024):
        start = time.perf_counter()
        r = param_sweep(base, 1.0, n, 1.0, 60, 0, w, threads=2)
        print(f"  N = {n:5d}: variance {r.variance:.5f}, "
              f"variance N / log^2 N = {r.variance * n / math.log(n) ** 2:.4f} "
              f"({time.perf_counter() - start:.1f}s)")
