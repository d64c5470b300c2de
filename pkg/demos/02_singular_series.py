#!/usr/bin/env python3
"""Local factors and singular series.

Reproduces the classical constants: the 4-term progression constant
(3/4) prod_{p>=5} (1 - (3p-1)/(p-1)^3) ~ 0.4764 and the shifted-difference
constant prod_{p>=3} (1 - (p^2-4p+1)/(p-1)^4) ~ 1.0481, plus the twin
constant 2 C_2, with exact local factors at small primes.
"""

import time

from affprimes import forms, localfactors as lf

ap4 = forms.ap_system(4)
print("=== exact local factors of AP4 ===")
for p in (2, 3, 5, 7, 11, 13):
    b = lf.local_factor(ap4, p)
    print(f"  beta_{p} = {b} = {float(b):.6f}")

print()
t0 = time.time()
s1 = lf.singular_series(ap4, 10**6, min_prime=5)
print(f"(3/4) prod_(p>=5) beta_p = {0.75 * s1.truncated_product:.6f}"
      f"   [{time.time()-t0:.3f}s, tail bound {s1.tail_log_bound:.1e}]")

ex19 = forms.system([[1, 0], [0, 1], [1, 1], [1, 2]], [0, 0, -1, -2])
s2 = lf.singular_series(ex19, 10**6, min_prime=3)
print(f"prod_(p>=3) beta_p (progression with shifted difference) = "
      f"{s2.truncated_product:.6f}")

twin = forms.system([[1], [1]], [0, 2])
st = lf.singular_series(twin, 10**6)
print(f"twin singular product 2 C_2 = {st.truncated_product:.6f}")

print()
print("=== vanishing series: consecutive integers ===")
consec = forms.system([[1], [1]], [0, 1])
sv = lf.singular_series(consec, 10**4)
print(f"  beta_2 = {lf.local_factor(consec, 2)}, vanishing = {sv.vanishing}")

print()
print("=== local densities of x1 + x2 + x3 = N ===")
n = 10**6 + 1
for p in (2, 3, 5, 7):
    print(f"  alpha_{p} = {lf.alpha_p([[1, 1, 1]], [n], p)}")

print()
print("=== exceptional primes ===")
for name, sys in [("twin", twin), ("AP4", ap4), ("identity d=3", forms.identity_system(3))]:
    e = lf.exceptional_primes(sys)
    print(f"  {name}: {e.primes}  X = {e.X:.4f}")
