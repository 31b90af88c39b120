"""The quadratic phase x^2 and its Gauss sums.

For phi(x) = x^2 the traces S_l are quadratic Gauss sums, whose size depends
only on N mod 4 and g = gcd(l, N):

    |G| = sqrt(g N)        if N/g is odd
          0                if N/g = 2 mod 4
          sqrt(2 g N)      if N/g = 0 mod 4

The pair correlation I_N built from them swings between extremes depending on
the arithmetic of N.  For a prime every |S_l|^2 equals N, so I_N is a Riemann
sum for the integral of fhat, which is f(0) = C.  For N divisible by a high
power of a small prime, large gcds inflate it.
"""
from specgap import fejer
from specgap.experiments import quadratic_IN
from specgap.expsum import gauss_sum_direct, gauss_sum_exact

print(" N  l  |direct|   exact   gcd")
for n in (8, 9, 10, 12):
    for ell in (1, 2, 3, 4):
        mag, g = gauss_sum_exact(ell, n)
        print(f"{n:2d} {ell:2d} {abs(gauss_sum_direct(ell, n)):8.4f} {mag:8.4f} {g:4d}")

w = fejer(0.8)
print("\nI_N with the Fejer window, C = 0.8")
for n in (9973, 10007, 10009, 2 * 5003, 4 * 2503, 3**9, 2**14):
    print(f"  N = {n:6d} (N mod 4 = {n % 4}): {quadratic_IN(n, w):.5f}")
