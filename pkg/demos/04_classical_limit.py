"""Pair correlation of the classical energies.

Instead of quantum eigenphases take the N values N phi(j/N) on the real line.
Their pair correlation converges to an integral over the action variable: a
volume term V fhat(0) with V the mean period, plus one term for each nonzero
winding k.  Repeating the k = 0 term would double count the volume, which the
comparison below makes visible.
"""
import math

from specgap import Phase, fejer
from specgap.classical import hamiltonian_pcf_empirical, theorem_a_pcf

phase = Phase.polynomial([0, 1, "1/2"])
w = fejer(3)
res = theorem_a_pcf(phase, w, 5)
alt = theorem_a_pcf(phase, w, 5, include_k0=True)
print(f"V = {res.v:.12f} (ln 2 = {math.log(2):.12f})")
for k, val in res.k_terms:
    if k > 0:
        print(f"  k = +-{k}: {val:.6f}")
print(f"limit {res.total:.6f}; with k = 0 repeated {alt.total:.6f}")
for n in (10**3, 10**4, 10**5):
    print(f"  N = {n:6d}: empirical {hamiltonian_pcf_empirical(phase, n, w):.6f}")
