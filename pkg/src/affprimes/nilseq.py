"""Explicit nilmanifold computations on the Heisenberg group.

Elements are the upper unitriangular matrices [[1, x, z], [0, 1, y], [0, 0, 1]],
stored as coordinate triples.  Exact-rational mode (Fraction coordinates) is
the default for constraint checks: the group law, fundamental-domain
reduction and Host-Kra factorization are then identities with no tolerance.
Float mode is used only for bulk correlation sums.
"""

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np


@dataclass(frozen=True)
class HeisenbergElement:
    x: object
    y: object
    z: object

    def __mul__(self, other):
        # matrix product: z picks up x * y'
        return HeisenbergElement(
            self.x + other.x, self.y + other.y, self.z + other.z + self.x * other.y
        )

    def inverse(self):
        return HeisenbergElement(-self.x, -self.y, -self.z + self.x * self.y)

    def power(self, n):
        """g^n = (n x, n y, n z + C(n,2) x y); valid for negative n as well."""
        binom = n * (n - 1) // 2 if isinstance(n, int) else n * (n - 1) / 2
        return HeisenbergElement(n * self.x, n * self.y, n * self.z + binom * self.x * self.y)

    def is_identity(self):
        return self.x == 0 and self.y == 0 and self.z == 0

    def in_center(self):
        return self.x == 0 and self.y == 0

    @classmethod
    def identity(cls):
        return cls(0, 0, 0)

    @classmethod
    def exact(cls, x, y, z):
        return cls(Fraction(x), Fraction(y), Fraction(z))

    def commutator(self, other):
        return self * other * self.inverse() * other.inverse()


@dataclass(frozen=True)
class NilPoint:
    x: object
    y: object
    z: object

    def __post_init__(self):
        for c in (self.x, self.y, self.z):
            if not (-Fraction(1, 2) < Fraction(c) <= Fraction(1, 2)):
                raise ValueError("NilPoint coordinates must lie in (-1/2, 1/2]")


def _centered(t):
    """(t - k, k) with the shifted value in (-1/2, 1/2]."""
    k = math.ceil((t - Fraction(1, 2)) if isinstance(t, Fraction) else (t - 0.5))
    return t - k, k


def reduce_to_fundamental_domain(g):
    """Right-multiply by gamma in Gamma to land in (-1/2, 1/2]^3.

    Order matters: normalise y first (which feeds x*b into z), then x, then z.
    Returns (NilPoint, gamma) with g * gamma exactly the reduced element.
    """
    y1, b = _centered(g.y)
    b = -b
    g1 = g * HeisenbergElement(0, b, 0)
    x1, a = _centered(g1.x)
    a = -a
    g2 = g1 * HeisenbergElement(a, 0, 0)
    z1, c = _centered(g2.z)
    c = -c
    g3 = g2 * HeisenbergElement(0, 0, c)
    gamma = HeisenbergElement(0, b, 0) * HeisenbergElement(a, 0, 0) * HeisenbergElement(0, 0, c)
    return NilPoint(g3.x, g3.y, g3.z), gamma


def quadratic_phase_orbit(theta, n):
    """Reduced orbit point of g = [[1, -theta, -theta], [0, 1, 2], [0, 0, 1]].

    In exact mode the result equals ({-n theta}, 0, {n^2 theta}) with
    fractional parts in (-1/2, 1/2]; the equality is asserted.
    """
    theta = Fraction(theta)
    g = HeisenbergElement(-theta, Fraction(2), -theta)
    gn = g.power(int(n))
    pt, _ = reduce_to_fundamental_domain(gn)
    expect_x, _ = _centered(-n * theta)
    expect_z, _ = _centered(n * n * theta)
    if not (pt.x == expect_x and pt.y == 0 and pt.z == expect_z):
        raise AssertionError(
            f"orbit point {pt} differs from closed form ({expect_x}, 0, {expect_z})"
        )
    return pt


# ---------------------------------------------------------------------------
# torus helpers and parallelepiped constraints


def torus_distance(a, b):
    """Distance on R/Z (works on floats, Fractions and numpy arrays)."""
    if isinstance(a, (tuple, list)):
        return max(torus_distance(ai, bi) for ai, bi in zip(a, b))
    d = a - b
    if isinstance(d, Fraction):
        d -= round(d)
        return abs(d)
    d = np.asarray(d, dtype=float)
    d = d - np.round(d)
    return float(np.max(np.abs(d)))


def abelian_constraint(points):
    """Residual of y00 = y01 + y10 - y11 for 2-dimensional parallelepipeds.

    points: mapping omega-pair -> group element of (R/Z)^k (tuple or scalar).
    """
    y00, y10, y01, y11 = (points[w] for w in ((0, 0), (1, 0), (0, 1), (1, 1)))
    if isinstance(y00, (tuple, list)):
        pred = tuple(a + b - c for a, b, c in zip(y01, y10, y11))
    else:
        pred = y01 + y10 - y11
    return torus_distance(y00, pred)


def abelian_orbit_parallelepiped(g, x, n, h1, h2):
    """(x + (n + w.h) g)_{w in {0,1}^2} on (R/Z)^k."""
    k = len(g) if isinstance(g, (tuple, list)) else None

    def pt(m):
        if k is None:
            return x + m * g
        return tuple(xi + m * gi for xi, gi in zip(x, g))

    return {
        (w1, w2): pt(n + w1 * h1 + w2 * h2) for w1 in (0, 1) for w2 in (0, 1)
    }


@dataclass
class SkewCheck:
    x_residuals: tuple
    prediction: tuple
    residual: object        # None when no true vertex was supplied


def skew_constraint(points, true_vertex=None):
    """Constraint check for 3-parallelepipeds of the skew shift (x,y) -> (x+a, y+x).

    points: mapping omega in {0,1}^3 \\ {0} -> (x, y).  The alternating sum
    -sum (-1)^{|w|} (x_w, y_w) predicts the missing vertex; the three linear
    identities among the x-coordinates are reported as residuals (with
    x_000 taken from the prediction).
    """
    omegas = [w for w in itertools.product((0, 1), repeat=3) if w != (0, 0, 0)]
    if set(points) != set(omegas):
        raise ValueError("need exactly the seven non-zero vertices")
    px = py = 0
    for w in omegas:
        sgn = -((-1) ** (sum(w)))
        px += sgn * points[w][0]
        py += sgn * points[w][1]
    x_res = (
        torus_distance(px + points[(0, 1, 1)][0], points[(0, 1, 0)][0] + points[(0, 0, 1)][0]),
        torus_distance(px + points[(1, 0, 1)][0], points[(0, 0, 1)][0] + points[(1, 0, 0)][0]),
        torus_distance(px + points[(1, 1, 0)][0], points[(1, 0, 0)][0] + points[(0, 1, 0)][0]),
    )
    residual = None if true_vertex is None else torus_distance((px, py), true_vertex)
    return SkewCheck(x_residuals=x_res, prediction=(px, py), residual=residual)


@dataclass
class SkewShiftState:
    """State of the skew shift (x, y) -> (x + alpha, y + x) on (R/Z)^2."""

    alpha: object
    x: object
    y: object

    def __post_init__(self):
        self.x = self._reduce(self.x)
        self.y = self._reduce(self.y)

    @staticmethod
    def _reduce(t):
        if isinstance(t, Fraction):
            return t - (t.__floor__() if hasattr(t, "__floor__") else math.floor(t))
        return t - math.floor(t)

    def step(self):
        return SkewShiftState(self.alpha, self.x + self.alpha, self.y + self.x)

    def point(self):
        return (self.x, self.y)


def skew_orbit_point(alpha, x, y, m):
    """m-th point of the skew-shift orbit: (x + m a, y + m(m+1)/2 a + m x)."""
    if isinstance(alpha, Fraction) or isinstance(x, Fraction):
        half = Fraction(m * (m + 1), 2)
    else:
        half = m * (m + 1) / 2
    return (x + m * alpha, y + half * alpha + m * x)


def skew_orbit_parallelepiped(alpha, x, y, n, h):
    """All eight vertices (x_w, y_w) for w in {0,1}^3 of the orbit cube."""
    return {
        w: skew_orbit_point(alpha, x, y, n + sum(wi * hi for wi, hi in zip(w, h)))
        for w in itertools.product((0, 1), repeat=3)
    }


# ---------------------------------------------------------------------------
# Host-Kra factorization for the Heisenberg group, s = 2


def _lower_faces_decreasing():
    """Lower faces of {0,1}^3 ordered by decreasing |max(F)|, then lexicographic.

    A lower face is determined by its maximal vertex m: F = {w : w <= m}.
    Bigger faces come first, so the order is decreasing in the paper's sense.
    """
    ms = sorted(
        itertools.product((0, 1), repeat=3), key=lambda m: (-sum(m), m)
    )
    return ms


def _face_members(m):
    return [w for w in itertools.product((0, 1), repeat=3) if all(wi <= mi for wi, mi in zip(w, m))]


@dataclass
class HKFactorization:
    taus: list              # (max_vertex, HeisenbergElement) in peel order
    success: bool
    failures: list


def hk_factorize_heisenberg(cube):
    """Peel a {0,1}^3-indexed tuple of group elements into face-group factors.

    Faces are processed in the fixed decreasing order; the factor for face F
    is read off the residual's max(F) coordinate.  Success requires each
    factor to lie in the correct term of the lower central series: arbitrary
    for codimension <= 1, central for codimension 2, identity for
    codimension 3.  The reconstruction prod tau_i = cube holds by
    construction whenever success is True (and is re-checked).
    """
    cube = dict(cube)
    omegas = list(itertools.product((0, 1), repeat=3))
    if set(cube) != set(omegas):
        raise ValueError("need all eight vertices")
    residual = dict(cube)
    taus = []
    failures = []
    for m in _lower_faces_decreasing():
        codim = 3 - sum(m)
        tau = residual[m]
        if codim == 2 and not tau.in_center():
            failures.append((m, "not central"))
        if codim == 3 and not tau.is_identity():
            failures.append((m, "not identity"))
        taus.append((m, tau))
        inv = tau.inverse()
        for w in _face_members(m):
            residual[w] = inv * residual[w]
    success = not failures and all(residual[w].is_identity() for w in omegas)
    if success:
        # reconstruct and compare exactly
        rebuilt = {w: HeisenbergElement.identity() for w in omegas}
        for m, tau in taus:
            for w in _face_members(m):
                rebuilt[w] = rebuilt[w] * tau
        if any(
            rebuilt[w].x != cube[w].x or rebuilt[w].y != cube[w].y or rebuilt[w].z != cube[w].z
            for w in omegas
        ):
            raise AssertionError("reconstruction mismatch despite successful peel")
    return HKFactorization(taus=taus, success=success, failures=failures)


def orbit_parallelepiped(g, x0, n, h):
    """(g^{n + w.h} x0)_{w in {0,1}^3} as group elements."""
    return {
        w: g.power(n + sum(wi * hi for wi, hi in zip(w, h))) * x0
        for w in itertools.product((0, 1), repeat=3)
    }


# ---------------------------------------------------------------------------
# Mobius-nilsequence correlation


def heisenberg_orbit_coords(g, x0, n_max):
    """Fundamental-domain coordinates of g^n x0 for n = 1..n_max, vectorised.

    Uses the closed-form power law and the same y-then-x-then-z reduction as
    the exact path, in float arithmetic.
    """
    n = np.arange(1, n_max + 1, dtype=np.float64)
    gx, gy, gz = float(g.x), float(g.y), float(g.z)
    xx = n * gx
    yy = n * gy
    zz = n * gz + n * (n - 1) / 2.0 * gx * gy
    # multiply by x0 on the right: (a,b,c) * (x0)
    x0x, x0y, x0z = float(x0.x), float(x0.y), float(x0.z)
    zz = zz + x0z + xx * x0y
    xx = xx + x0x
    yy = yy + x0y

    def centered(t):
        k = np.ceil(t - 0.5)
        return t - k, k

    yy, b = centered(yy)
    b = -b
    zz = zz + xx * b
    xx, _ = centered(xx)
    zz, _ = centered(zz)
    return xx, yy, zz


def smooth_cell_function(center_x, center_y, width=0.25):
    """Lipschitz bump chi(x - cx) chi(y - cy) e(z), continuous on the quotient.

    The bump is supported well inside one period, so the function extends
    continuously across the fundamental-domain gluing.
    """

    def bump(t):
        t = np.abs(t - np.round(t))
        u = np.clip(1.0 - (t / (width / 2.0)) ** 2, 0.0, None)
        return u * u

    def f(x, y, z):
        return (
            bump(np.asarray(x) - center_x)
            * bump(np.asarray(y) - center_y)
            * np.exp(2j * np.pi * np.asarray(z))
        )

    return f


def mobius_nil_correlation(n_max, g, x0, func, tables):
    """E_{n <= N} mu(n) F(g^n x0) along the Heisenberg orbit."""
    if tables.mobius is None or tables.n_max < n_max:
        raise ValueError("need a mobius table up to N")
    xx, yy, zz = heisenberg_orbit_coords(g, x0, n_max)
    vals = func(xx, yy, zz)
    mu = tables.mobius[1: n_max + 1].astype(np.float64)
    return complex(np.mean(mu * vals))


def mobius_phase_correlation(n_max, alpha, tables):
    """E_{n <= N} mu(n) e(alpha n): the s = 1 specialisation."""
    n = np.arange(1, n_max + 1, dtype=np.float64)
    mu = tables.mobius[1: n_max + 1].astype(np.float64)
    return complex(np.mean(mu * np.exp(2j * np.pi * alpha * n)))
