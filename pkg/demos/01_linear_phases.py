"""Linear phases: a rigid lattice, and at most three gaps.

With phi(x) = x and t = 1/N every eigenphase lands on an integer, so the
spectrum is the picket fence {1, ..., N}.  Its pair correlation with the
Fejer window is exactly 1 and its number variance at L = 1/2 is 1/4.

Moving t away from 1/N gives the points N frac(t j), which are rotations of the
circle.  However irrational t is, the gaps between neighbours take at most three
distinct values.
"""
import numpy as np

from specgap import Phase, fejer, gap_spectrum, number_variance_direct, pcf_spectral, spectrum
from specgap.expsum import spectrum_traces

n = 256
w = fejer(0.8)
pf = spectrum(Phase.linear(), 1 / n, n)
print("first eigenphases:", pf.points[:6])
print("pair correlation:", pcf_spectral(spectrum_traces(pf, w.ell_needed(n)), w))
print("number variance at L=1/2:", number_variance_direct(pf, 0.5))
print("gaps:", gap_spectrum(pf))

print("\nrotation by t, N = 1000")
golden = (np.sqrt(5) - 1) / 2
for t in (golden, np.sqrt(2) - 1, np.pi - 3, 0.123456789):
    gaps = gap_spectrum(spectrum(Phase.linear(), t, 1000), 1e-9 * 1000)
    print(f"  t = {t:.9f}: " + ", ".join(f"{g.value:.4f} x{g.count}" for g in gaps))
