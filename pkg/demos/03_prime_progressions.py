#!/usr/bin/env python3
"""Counting prime progressions against the Hardy-Littlewood prediction.

Counts k-term progressions of primes p_1 < ... < p_k <= N exactly and
compares with both prediction modes: the log-power form
beta_inf prod beta_p / log^k N and the integral refinement
prod beta_p * sum_K prod 1/log psi_i.  Run with --big for N = 10^6
(about a minute).
"""

import sys
import time

from affprimes import arith, counting, forms, geometry

big = "--big" in sys.argv
scales = [10**4, 10**5] + ([10**6] if big else [])
tables = arith.build_tables(max(scales))

print(f"{'k':>2} {'N':>8} {'count':>12} {'pred(int)':>12} "
      f"{'ratio(int)':>10} {'ratio(log)':>10} {'secs':>6}")
for k in (3, 4):
    sysk = forms.ap_system(k)
    for n in scales:
        body = geometry.ConvexBody(
            2, [((-1, 0), -1), ((0, -(k - 1)), -(k - 1)), ((1, k - 1), n)], n
        )
        t0 = time.time()
        rep = counting.compare(sysk, body, 10**6, tables)
        print(
            f"{k:>2} {n:>8} {rep.empirical:>12.0f} {rep.predicted_integral:>12.0f} "
            f"{rep.ratio_integral:>10.4f} {rep.ratio_log_power:>10.4f} "
            f"{time.time()-t0:>6.1f}"
        )

print()
print("The integral-refined ratio tightens toward 1 as N grows; the crude")
print("log-power mode overshoots because 1/log psi is larger than 1/log N")
print("on most of the body (same effect as li(x) vs x/log x).")

print()
print("=== twin primes (for contrast: this is the infinite-complexity case;")
print("    the prediction is still the classical 2 C_2 heuristic) ===")
twin = forms.system([[1], [1]], [0, 2])
for n in scales:
    body = geometry.ConvexBody.box(1, 1, n - 2, box_bound=n)
    rep = counting.compare(twin, body, 10**6, tables)
    print(f"  N={n:>8}: {rep.empirical:>9.0f} twins, ratio(int) = {rep.ratio_integral:.4f}")
