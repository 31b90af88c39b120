"""Acceptance criteria 1-12, each at its stated tolerance.

Every test reports a single PASS/FAIL line (collected again in the terminal
summary).  Criteria that cannot hold as literally stated are still checked as
stated and left failing; the companion tests next to them pin what does hold.
"""
import json
import math

import numpy as np
import pytest

from specgap.averaging import time_averaged_nv, time_averaged_pcf
from specgap.classical import hamiltonian_pcf_empirical, theorem_a_pcf
from specgap.cli import run
from specgap.experiments import (
    lattice_count_bruteforce, lattice_count_fast, param_sweep, quadratic_IN,
)
from specgap.expsum import gauss_sum_direct, gauss_sum_exact, spectrum_traces, trace_table
from specgap.phase import Phase, Spectrum, picket_fence, spectrum
from specgap.stats import (
    dos_empirical, dos_limit, gap_spectrum, number_variance_direct, pcf_direct,
    pcf_spectral, poisson_reference,
)
from specgap.windows import fejer, gaussian

from _configs import SMALL_CONFIGS

MIXED = Phase.polynomial([0, 1, "1/2"])
AVG_NS = [256, 512, 1024, 2048, 4096, 8192]


def _slope(ns, vals):
    return float(np.polyfit(np.log(ns), np.log(vals), 1)[0])


def _primes_near(center, count):
    def is_prime(k):
        return k > 1 and all(k % p for p in range(2, math.isqrt(k) + 1))

    cands = sorted((abs(k - center), k) for k in range(center - 200, center + 200) if is_prime(k))
    return sorted(k for _, k in cands[:count])


def test_criterion_01_gauss_sum_exactness(report):
    worst, classes, mult = 0.0, set(), 0.0
    for n in range(1, 513):
        j = np.arange(n)
        for ell in range(1, 65):
            direct = gauss_sum_direct(ell, n)
            mag, g = gauss_sum_exact(ell, n)
            worst = max(worst, abs(abs(direct) - mag) / n)
            classes.add(n % 4)
            if g > 1:
                # the sum over N terms is g copies of the reduced sum
                red = np.exp(2j * np.pi * ((ell // g) * (j[: n // g] ** 2) % (n // g)) / (n // g)).sum()
                mult = max(mult, abs(direct - g * red) / n)
    ok = worst <= 1e-9 and mult <= 1e-9 and classes == {0, 1, 2, 3}
    report(ok, f"max |direct|-exact| / N = {worst:.2e}, multiplicativity {mult:.2e}")


def test_criterion_02_estimator_equivalence(report):
    w = gaussian()
    rng = np.random.default_rng(2024)
    worst = 0.0
    for n in (16, 64, 256):
        spectra = [Spectrum.from_points(rng.uniform(0, n, n), n=n) for _ in range(20)]
        for ph in (Phase.linear(), Phase.polynomial([0, 0, 1]), MIXED):
            spectra += [spectrum(ph, t, n) for t in (1.0, 1.3)]
        for s in spectra:
            a = pcf_spectral(spectrum_traces(s, w.ell_needed(n)), w)
            worst = max(worst, abs(a - pcf_direct(s, w, 8)))
    report(worst <= 1e-8, f"max |spectral - direct| = {worst:.2e}")


def test_criterion_03_picket_fence(report):
    w = fejer(0.8)
    errs = []
    for n in (16, 256, 1000):
        pf = picket_fence(n)
        errs.append(abs(pcf_spectral(spectrum_traces(pf, w.ell_needed(n)), w) - 1.0) <= 1e-9)
        errs.append(abs(number_variance_direct(pf, 0.5) - 0.25) <= 1e-10)
        errs.append([g.value for g in gap_spectrum(pf)] == [1.0])
    report(all(errs), f"{sum(errs)}/{len(errs)} picket-fence checks hold")


def test_criterion_04_three_gap(report):
    rng = np.random.default_rng(4)
    thetas = rng.uniform(0, 1, 50)
    failures = 0
    for n in (100, 1000, 4096):
        for theta in thetas:
            # x_j = N frac(theta j): slope-1 phase at t = theta
            failures += len(gap_spectrum(spectrum(Phase.linear(), float(theta), n), 1e-9 * n)) > 3
    report(failures == 0, f"{failures} of 150 spectra exceed three gaps")


def test_criterion_05_poisson_on_average(report):
    # exact t-average on [1, 2]; see the literal variant below for the sampled rule
    w = fejer(0.8)
    devs = [abs(time_averaged_pcf(MIXED, n, w).deviation) for n in AVG_NS]
    slope = _slope(AVG_NS, devs)
    ok = all(b < a for a, b in zip(devs, devs[1:])) and slope <= -0.7 and devs[-1] <= 0.01
    report(ok, f"|e(N)| = {[f'{d:.2e}' for d in devs]}, slope {slope:.3f}")


def test_criterion_05_literal_64_panel_gauss_legendre(report):
    # the sampled 64-panel rule, checked as stated; stops at the first broken monotonicity
    w = fejer(0.8)
    devs = []
    for n in AVG_NS:
        devs.append(abs(time_averaged_pcf(MIXED, n, w, method="gauss-legendre", panels=64, nodes=4).deviation))
        if len(devs) > 1 and devs[-1] >= devs[-2]:
            break
    ok = len(devs) == len(AVG_NS) and all(b < a for a, b in zip(devs, devs[1:]))
    ok = ok and _slope(AVG_NS, devs) <= -0.7 and devs[-1] <= 0.01
    report(ok, f"|e(N)| over N = {AVG_NS[:len(devs)]}: {[f'{d:.2e}' for d in devs]}")


def test_criterion_06_number_variance_on_average(report):
    rel = [abs(time_averaged_nv(MIXED, 4096, L, panels=64, nodes=4) - L) / L for L in (1.0, 2.0, 5.0)]
    report(max(rel) <= 0.05, f"relative errors {[f'{r:.4f}' for r in rel]}")


def test_criterion_07_mean_square_poisson(report):
    # K is frozen from oracle runs (largest observed ratio 0.155)
    K = 0.5
    ns = [256, 1024, 4096]
    w = fejer(0.8)
    lines, ok = [], True
    for base in (Phase.polynomial([0, 0, 1]), Phase.polynomial([0, 0, 1, 1])):
        base.require_nondegenerate()
        var = [param_sweep(base, 1.0, n, 1.0, 200, 0, w).variance for n in ns]
        ratios = [v * n / math.log(n) ** 2 for v, n in zip(var, ns)]
        slope = _slope(ns, var)
        ok = ok and max(ratios) <= K and slope <= -0.8
        lines.append(f"{base.name}: ratios {[f'{r:.3f}' for r in ratios]} slope {slope:.3f}")
    report(ok, "; ".join(lines))


def test_criterion_08_lattice_oracle(report):
    mismatches = 0
    for n in (8, 16, 24, 32, 48):
        for l1 in range(1, 9):
            for l2 in range(1, 9):
                for delta in (0.5, 0.99):
                    mismatches += lattice_count_fast(n, l1, l2, delta) != lattice_count_bruteforce(n, l1, l2, delta)
    # growth ratios on the grid where the bounds are stated, default delta; constants frozen from oracle runs
    hom_ratio = inhom_ratio = 0.0
    for n in (16, 32, 48, 64, 96, 128):
        hom_ratio = max(hom_ratio, lattice_count_fast(n, 1, 1).homogeneous / (n**3 * math.log(n) ** 3))
        for l1 in range(1, 9):
            for l2 in range(1, 9):
                c = lattice_count_fast(n, l1, l2)
                inhom_ratio = max(inhom_ratio, c.inhomogeneous * l1 / (n**2 * math.log(n)))
    ok = mismatches == 0 and hom_ratio <= 0.01 and inhom_ratio <= 1.0
    report(ok, f"{mismatches} mismatches of 640; hom ratio {hom_ratio:.4f}, inhom ratio {inhom_ratio:.3f}")


def test_criterion_09_theorem_a(report):
    w = fejer(3)
    res = theorem_a_pcf(MIXED, w, 5)
    alt = theorem_a_pcf(MIXED, w, 5, include_k0=True)
    emp = hamiltonian_pcf_empirical(MIXED, 200_000, w)
    rel = abs(res.total - emp) / emp
    alt_rel = abs(alt.total - emp) / emp
    alt_gap = alt.total - emp
    ok = (rel <= 0.02 and abs(res.v - math.log(2)) <= 1e-10 and alt_rel > 0.02
          and abs(alt_gap - res.v * w.fhat0) <= 0.02 * res.v)
    report(ok, f"theory {res.total:.6f} vs empirical {emp:.6f} (rel {rel:.2e}); "
               f"with k=0 off by {alt_gap:.4f} vs V = {res.v:.6f}")


def test_criterion_10_prime_dichotomy(report):
    w = fejer(0.8)
    primes = _primes_near(10**4, 10)
    prime_err = max(abs(quadratic_IN(p, w) - 1.0) for p in primes)
    two_mod_four = {n: quadratic_IN(n, w) for n in (2, 6, 10, 1002, 10002)}
    cube = quadratic_IN(3**9, w)
    ok = prime_err <= 0.02 and all(v == 0.0 for v in two_mod_four.values()) and cube >= 2
    report(ok, f"primes: max |I_p - 1| = {prime_err:.4f}; N = 2 mod 4: "
               f"{ {n: round(v, 4) for n, v in two_mod_four.items()} }; I(3^9) = {cube:.4f}")


def test_criterion_10_companion_what_holds(report):
    # primes approach f(0) = C rather than 1; for N = 2 mod 4 only the odd-l terms drop out
    w = fejer(0.8)
    primes = _primes_near(10**4, 10)
    prime_err = max(abs(quadratic_IN(p, w) - w.f0) for p in primes)
    ok = prime_err <= 0.02 and quadratic_IN(2, w) == 0.0 and quadratic_IN(3**9, w) >= 2
    for n in (6, 10, 1002, 10002):
        ell = np.arange(2, w.ell_needed(n) + 1, 2)
        g = np.gcd(ell, n)
        m = n // g
        fac = np.where(m % 2 == 1, 1.0, np.where(m % 4 == 0, 2.0, 0.0))
        want = 2 * np.sum(w.fhat(ell / n) * g * n * fac) / n**2
        ok = ok and abs(quadratic_IN(n, w) - want) <= 1e-12 * max(1.0, want)
    report(ok, f"max |I_p - C| = {prime_err:.4f}; N = 2 mod 4 equals its even-l sum")


def test_criterion_11_density_of_states(report):
    worst = 0.0
    for ph in (Phase.linear(), Phase.polynomial([0, 0, 1]), MIXED):
        for d in range(4):
            g = [0] * d + [1]
            lim = dos_limit(ph, g)
            for n in (100, 1000, 10000):
                worst = max(worst, abs(dos_empirical(ph, n, g) - lim) * n)
    report(worst <= 5, f"max N |empirical - limit| = {worst:.3f}")


def test_criterion_12_determinism(report, tmp_path):
    bad = []
    for name, cfg in sorted(SMALL_CONFIGS.items()):
        outs = []
        for threads in (1, 2, 4):
            out = tmp_path / f"{name}_{threads}"
            assert run(json.dumps(cfg), str(out), threads) == 0
            outs.append({p.name: p.read_bytes() for p in out.iterdir() if p.name != "metadata.json"})
        if not outs[0] or any(o != outs[0] for o in outs[1:]):
            bad.append(name)
    report(not bad, f"{len(SMALL_CONFIGS) - len(bad)}/{len(SMALL_CONFIGS)} experiments byte-identical across threads")
