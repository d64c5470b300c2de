#!/usr/bin/env python3
"""Mobius and Liouville correlations along linear systems.

The correlations come with no singular series: cancellation is expected for
every finite-complexity system.  The 4-term progression correlation of mu is
the model case whose o(1) bound needs the full quadratic (s = 2) machinery.
"""

from affprimes import arith, counting, forms, geometry

tables = arith.build_tables(10**6)

print("=== E mu(x) mu(x+d) mu(x+2d) mu(x+3d) over x, d <= N ===")
ap4 = forms.ap_system(4)
for n in (10**3, 10**4, 10**5):
    body = geometry.ConvexBody.box(2, 1, n)
    v = counting.mobius_correlation(ap4, body, tables)
    print(f"  N = {n:>6}: {v:+.6f}")

print()
print("=== single Mobius mean (Mertens-level) ===")
one = forms.system([[1]])
for n in (10**4, 10**6):
    body = geometry.ConvexBody.box(1, 1, n, box_bound=n)
    v = counting.mobius_correlation(one, body, tables)
    print(f"  E_(n<={n}) mu(n) = {v:+.6f}")

print()
print("=== Liouville along 3-term progressions ===")
ap3 = forms.ap_system(3)
for n in (10**3, 10**4):
    body = geometry.ConvexBody.box(2, 1, n)
    v = counting.mobius_correlation(ap3, body, tables, func="liouville")
    print(f"  N = {n:>6}: {v:+.6f}")

print()
print("=== Chowla-type check: lambda(y1 y2 (y1+y2) (y1+2y2)) ===")
factors = [
    forms.AffineForm((1, 0)),
    forms.AffineForm((0, 1)),
    forms.AffineForm((1, 1)),
    forms.AffineForm((1, 2)),
]
for n in (500, 3000):
    v = counting.chowla_check(factors, n, tables)
    print(f"  N = {n:>5}: {v:+.6f}")
print("  (a perfect-square product would be rejected: lambda(y1^2) = 1 identically)")
