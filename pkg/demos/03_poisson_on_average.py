"""Averaging over the time parameter t washes out arithmetic.

For phi(x) = x + x^2/2 a single t can give a pair correlation far from the
Poisson value f(0) + fhat(0).  Averaged over t in [1, 2] the deviation shrinks
like 1/N.  The average here is computed in closed form: every pair of
eigenphases contributes a sine integral that is tabulated on the rational grid
of the phase values, so no quadrature error hides the trend.

A Gauss-Legendre rule with a fixed number of panels tells a different story:
the integrand oscillates on a scale of 1/N^2 in t, so the sampled average stalls
at the level of its own noise.
"""
import time

import numpy as np

from specgap import Phase, fejer, time_averaged_pcf

phase = Phase.polynomial([0, 1, "1/2"])
w = fejer(0.8)
ns = [256, 512, 1024, 2048, 4096]
devs = []
for n in ns:
    start = time.perf_counter()
    exact = time_averaged_pcf(phase, n, w)
    devs.append(abs(exact.deviation))
    print(f"N = {n:5d}: mean {exact.mean:.6f}, deviation {exact.deviation:+.3e}, "
          f"{exact.method}, {time.perf_counter() - start:.2f}s")
print("log-log slope:", np.polyfit(np.log(ns), np.log(devs), 1)[0])

print("\nsampled with 64 Gauss-Legendre panels")
for n in (256, 512):
    sampled = time_averaged_pcf(phase, n, w, method="gauss-legendre", panels=64, nodes=4)
    print(f"N = {n:5d}: deviation {sampled.deviation:+.3e}")
