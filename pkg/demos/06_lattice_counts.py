"""Counting near-solutions of the lattice system behind the variance bound.

Quadruples (j1, k1, j2, k2) where both the linear and the quadratic combinations
nearly cancel split into a homogeneous part, where the two differences match
exactly, and an inhomogeneous remainder.  The fast counter enumerates arithmetic
progressions instead of all N^4 quadruples; it agrees with brute force exactly.
"""
import math
import time

from specgap.experiments import lattice_count_bruteforce, lattice_count_fast

for n in (8, 16, 32):
    a, b = lattice_count_fast(n, 2, 3), lattice_count_bruteforce(n, 2, 3)
    print(f"N = {n:3d}: fast {a.split}, brute force {b.split}")

print("\ngrowth with l1 = l2 = 1")
for n in (64, 256, 1024, 4096):
    start = time.perf_counter()
    c = lattice_count_fast(n, 1, 1)
    print(f"N = {n:5d}: hom / N^3 log^3 N = {c.homogeneous / (n**3 * math.log(n) ** 3):.2e}, "
          f"inhom / N^2 log N = {c.inhomogeneous / (n**2 * math.log(n)):.3f} "
          f"({time.perf_counter() - start:.2f}s)")
