"""Bounded rational polytopes and exact lattice-point enumeration.

Bodies are intersections of halfspaces a.x <= c together with the box
[-N, N]^d, so everything is bounded.  Halfspaces are cleared to integer
coefficients at construction; the enumerator walks coordinates in ascending
index order (x1 outermost), bounding each coordinate by Fourier-Motzkin
elimination of the later ones.  All bound computations are exact integer
arithmetic.
"""

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

import numpy as np

ENUM_DIM_GUARD = 6


def _clear_halfspace(a, c):
    """Scale (a, c) to integers with content 1."""
    fr = [Fraction(x) for x in a] + [Fraction(c)]
    den = 1
    for x in fr:
        den = den * x.denominator // gcd(den, x.denominator)
    iv = [int(x * den) for x in fr]
    g = 0
    for x in iv[:-1]:
        g = gcd(g, abs(x))
    g = gcd(g, abs(iv[-1]))
    if g > 1:
        iv = [x // g for x in iv]
    return tuple(iv[:-1]), iv[-1]


@dataclass
class ConvexBody:
    dim: int
    halfspaces: list          # list of (a: tuple of ints, c: int), a.x <= c
    box_bound: int

    def __init__(self, dim, halfspaces, box_bound):
        self.dim = int(dim)
        self.box_bound = int(box_bound)
        hs = []
        for a, c in halfspaces:
            if len(a) != self.dim:
                raise ValueError("halfspace dimension mismatch")
            a, c = _clear_halfspace(a, c)
            if not any(a):
                if c < 0:
                    hs.append((tuple([0] * self.dim), -1))   # infeasible marker
                continue
            hs.append((a, c))
        for j in range(self.dim):
            e = [0] * self.dim
            e[j] = 1
            hs.append((tuple(e), self.box_bound))
            e[j] = -1
            hs.append((tuple(e), self.box_bound))
        # dedupe, keep tightest bound per direction
        best = {}
        for a, c in hs:
            if a in best:
                best[a] = min(best[a], c)
            else:
                best[a] = c
        self.halfspaces = sorted(best.items())
        self._chain = None

    # -- construction helpers -------------------------------------------------

    @classmethod
    def box(cls, dim, lo, hi, box_bound=None):
        """Axis box prod [lo_j, hi_j]."""
        lo = list(lo) if hasattr(lo, "__len__") else [lo] * dim
        hi = list(hi) if hasattr(hi, "__len__") else [hi] * dim
        bb = box_bound if box_bound is not None else max(
            [abs(x) for x in lo] + [abs(x) for x in hi] + [1]
        )
        hs = []
        for j in range(dim):
            e = [0] * dim
            e[j] = 1
            hs.append((tuple(e), hi[j]))
            e[j] = -1
            hs.append((tuple(e), -lo[j]))
        return cls(dim, hs, bb)

    @classmethod
    def from_form_bounds(cls, sys, lower, upper, box_bound):
        """Body {n : lower_i <= psi_i(n) <= upper_i}, None meaning unbounded."""
        hs = []
        for f, lo, hi in zip(sys.forms, lower, upper):
            a = f.linear_coeffs
            if hi is not None:
                hs.append((a, hi - f.constant))
            if lo is not None:
                hs.append((tuple(-c for c in a), f.constant - lo))
        return cls(sys.d, hs, box_bound)

    def intersect(self, halfspaces):
        return ConvexBody(self.dim, list(self.halfspaces) + list(halfspaces), self.box_bound)

    def with_positive_forms(self, sys, threshold=1):
        """Intersect with {psi_i >= threshold for all i} (integer positivity)."""
        hs = [
            (tuple(-c for c in f.linear_coeffs), f.constant - threshold) for f in sys.forms
        ]
        return self.intersect(hs)

    # -- membership ------------------------------------------------------------

    def contains(self, point):
        if len(point) != self.dim:
            raise ValueError("point dimension mismatch")
        return all(
            sum(ai * xi for ai, xi in zip(a, point)) <= c for a, c in self.halfspaces
        )

    # -- Fourier-Motzkin chain ---------------------------------------------------

    def _fm_chain(self):
        """chain[k] = integer halfspaces on (x1..x_{k+1}) after eliminating the rest."""
        if self._chain is not None:
            return self._chain
        chain = [None] * self.dim
        cur = [(list(a), c) for a, c in self.halfspaces]
        chain[self.dim - 1] = cur
        for k in range(self.dim - 1, 0, -1):
            nxt = {}

            def add(a, c):
                a = tuple(a)
                aa, cc = _clear_halfspace(a, c)
                if not any(aa):
                    if cc < 0:
                        nxt[tuple([0] * k)] = -1
                    return
                if aa in nxt:
                    nxt[aa] = min(nxt[aa], cc)
                else:
                    nxt[aa] = cc

            pos = [(a, c) for a, c in cur if a[k] > 0]
            neg = [(a, c) for a, c in cur if a[k] < 0]
            for a, c in cur:
                if a[k] == 0:
                    add(a[:k], c)
            for (ap, cp), (an, cn) in itertools.product(pos, neg):
                # eliminate x_{k+1}: an[k]*(combined) removes the variable
                mult_p, mult_n = -an[k], ap[k]
                comb = [mult_p * ap[j] + mult_n * an[j] for j in range(k)]
                add(comb, mult_p * cp + mult_n * cn)
            cur = [(list(a), c) for a, c in sorted(nxt.items())]
            chain[k - 1] = cur
        self._chain = chain
        return chain

    def is_empty(self):
        chain = self._fm_chain()
        for level in chain:
            for a, c in level:
                if not any(a) and c < 0:
                    return True
        lo, hi = _coord_bounds(chain[0], [], 0)
        return lo > hi

    # -- enumeration --------------------------------------------------------------

    def runs(self):
        """Yield (prefix, lo, hi): integer ranges of the last coordinate.

        prefix is a tuple of the first dim-1 coordinates; the run is the
        segment {(prefix, x) : lo <= x <= hi}, lo/hi inclusive ints.
        """
        if self.dim > ENUM_DIM_GUARD:
            raise ValueError(f"enumeration limited to dimension <= {ENUM_DIM_GUARD}")
        chain = self._fm_chain()

        def rec(prefix, k):
            lo, hi = _coord_bounds(chain[k], prefix, k)
            if lo > hi:
                return
            if k == self.dim - 1:
                yield tuple(prefix), lo, hi
                return
            for x in range(lo, hi + 1):
                prefix.append(x)
                yield from rec(prefix, k + 1)
                prefix.pop()

        yield from rec([], 0)

    def lattice_points(self):
        for prefix, lo, hi in self.runs():
            for x in range(lo, hi + 1):
                yield prefix + (x,)

    def lattice_point_count(self):
        return sum(hi - lo + 1 for _, lo, hi in self.runs())

    def outer_values_and_bounds(self):
        """Vectorized runs for dim == 2: (x1 array, lo array, hi array)."""
        if self.dim != 2:
            raise ValueError("vectorized runs require dim == 2")
        chain = self._fm_chain()
        lo1, hi1 = _coord_bounds(chain[0], [], 0)
        if lo1 > hi1:
            return (np.zeros(0, np.int64),) * 3
        x1 = np.arange(lo1, hi1 + 1, dtype=np.int64)
        lo = np.full(x1.shape, -(2**62), np.int64)
        hi = np.full(x1.shape, 2**62, np.int64)
        for (a0, a1), c in chain[1]:
            if a1 == 0:
                continue
            num = c - a0 * x1
            if a1 > 0:
                np.minimum(hi, _floor_div(num, a1), out=hi)
            else:
                np.maximum(lo, _ceil_div(num, a1), out=lo)
        keep = lo <= hi
        return x1[keep], lo[keep], hi[keep]


def _floor_div(num, den):
    return np.floor_divide(num, den)


def _ceil_div(num, den):
    return -np.floor_divide(-num, den)


def _coord_bounds(level, prefix, k):
    """Integer [lo, hi] for x_{k+1} given the first k coordinates."""
    lo, hi = None, None
    for a, c in level:
        ak = a[k]
        if ak == 0:
            if not any(a) and c < 0:
                return 1, 0
            continue
        rest = c - sum(a[j] * prefix[j] for j in range(k))
        if ak > 0:
            bound = rest // ak
            hi = bound if hi is None else min(hi, bound)
        else:
            bound = -((-rest) // ak)        # ceil(rest/ak), ak < 0
            lo = bound if lo is None else max(lo, bound)
    if lo is None or hi is None:
        raise RuntimeError("unbounded direction; box constraint missing")
    return lo, hi


# ---------------------------------------------------------------------------
# archimedean factor and boundary shells


def archimedean_factor(body, sys):
    """Lattice-point count of K intersected with {psi_i > 0 for all i}.

    Returns (count, count / N^dim).  The count approximates the archimedean
    volume factor to O(N^{dim-1}).
    """
    pos = body.with_positive_forms(sys, threshold=1)
    count = pos.lattice_point_count()
    return count, count / float(body.box_bound) ** body.dim


def volume_simplex(vertices):
    """Exact volume |det| / d! of a simplex given d+1 rational vertices."""
    d = len(vertices) - 1
    rows = [
        [Fraction(vertices[i + 1][j]) - Fraction(vertices[0][j]) for j in range(d)]
        for i in range(d)
    ]
    det = _det(rows)
    fact = 1
    for i in range(2, d + 1):
        fact *= i
    return abs(det) / fact


def _det(rows):
    m = [row[:] for row in rows]
    n = len(m)
    det = Fraction(1)
    for c in range(n):
        pr = next((i for i in range(c, n) if m[i][c] != 0), None)
        if pr is None:
            return Fraction(0)
        if pr != c:
            m[c], m[pr] = m[pr], m[c]
            det = -det
        det *= m[c][c]
        inv = 1 / m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return det


def simplex_body(vertices, box_bound):
    """ConvexBody for the simplex with the given rational vertices (full-dim)."""
    d = len(vertices) - 1
    verts = [[Fraction(x) for x in v] for v in vertices]
    hs = []
    for drop in range(d + 1):
        face = [verts[i] for i in range(d + 1) if i != drop]
        # normal via nullspace of difference vectors
        diffs = [[face[i + 1][j] - face[0][j] for j in range(d)] for i in range(d - 1)]
        from . import linalg

        normal = linalg.nullspace(diffs, n_cols=d)[0]
        c = sum(n * x for n, x in zip(normal, face[0]))
        inside = sum(n * x for n, x in zip(normal, verts[drop]))
        if inside > c:
            normal = [-x for x in normal]
            c = -c
        hs.append((normal, c))
    return ConvexBody(d, hs, box_bound)


def _dist2_point_to_faces(point, body):
    """Exact squared distance from a point to the boundary of the body.

    Minimizes over all faces: project onto each face's affine span and keep
    projections that satisfy the remaining constraints.  Exact rationals.
    """
    from . import linalg

    d = body.dim
    hs = body.halfspaces
    p = [Fraction(x) for x in point]
    best = None
    for r in range(1, d + 1):
        for subset in itertools.combinations(range(len(hs)), r):
            rows = [list(hs[i][0]) for i in subset]
            if linalg.rank(rows) != r:
                continue
            rhs = [hs[i][1] for i in subset]
            # project p onto {x: rows x = rhs}: x = p + rows^T mu with rows x = rhs
            gram = [[sum(a * b for a, b in zip(rows[i], rows[j])) for j in range(r)] for i in range(r)]
            target = [rhs[i] - sum(a * b for a, b in zip(rows[i], p)) for i in range(r)]
            mu = linalg.solve([list(map(Fraction, g)) for g in gram], target)
            if mu is None:
                continue
            proj = [
                p[j] + sum(mu[i] * rows[i][j] for i in range(r)) for j in range(d)
            ]
            ok = all(
                sum(a * x for a, x in zip(hs[i][0], proj)) <= hs[i][1]
                for i in range(len(hs))
                if i not in subset
            )
            if not ok:
                continue
            d2 = sum((a - b) ** 2 for a, b in zip(p, proj))
            if best is None or d2 < best:
                best = d2
    return best


def _face_list(body):
    """Rank-r constraint subsets with their in-face check indices."""
    from . import linalg

    hs = body.halfspaces
    faces = []
    for r in range(1, body.dim + 1):
        for subset in itertools.combinations(range(len(hs)), r):
            rows = [list(hs[i][0]) for i in subset]
            if linalg.rank(rows) != r:
                continue
            faces.append(subset)
    return faces


def boundary_shell_count(body, eps):
    """Lattice points at distance strictly less than eps*N from the boundary.

    Candidates in the inflated bounding box are projected onto every face in
    float arithmetic (vectorised); points within 1e-9 of the threshold are
    confirmed with exact rationals.
    """
    if not 0 < eps <= 1:
        raise ValueError("eps must lie in (0, 1]")
    if body.dim > 3:
        raise ValueError("boundary shell counting limited to dimension <= 3")
    if body.is_empty():
        return 0
    n = body.box_bound
    eps = Fraction(eps).limit_denominator(10**6)
    radius = eps * n
    r2 = float(radius) ** 2
    pad = int(radius) + 1
    grids = np.meshgrid(
        *[np.arange(-n - pad, n + pad + 1) for _ in range(body.dim)], indexing="ij"
    )
    pts = np.stack([g.ravel() for g in grids], axis=1).astype(np.float64)
    hs = body.halfspaces
    a_mat = np.array([list(a) for a, _ in hs], dtype=np.float64)
    c_vec = np.array([c for _, c in hs], dtype=np.float64)
    slack = c_vec[None, :] - pts @ a_mat.T          # >= 0 inside each halfspace
    best = np.full(len(pts), np.inf)
    for subset in _face_list(body):
        rows = a_mat[list(subset)]
        rhs = c_vec[list(subset)]
        gram = rows @ rows.T
        try:
            gram_inv = np.linalg.inv(gram)
        except np.linalg.LinAlgError:
            continue
        mu = (rhs[None, :] - pts @ rows.T) @ gram_inv.T
        proj = pts + mu @ rows
        others = [i for i in range(len(hs)) if i not in subset]
        ok = np.ones(len(pts), dtype=bool)
        if others:
            ok = np.all(proj @ a_mat[others].T <= c_vec[others][None, :] + 1e-9, axis=1)
        d2 = np.sum((proj - pts) ** 2, axis=1)
        best = np.where(ok, np.minimum(best, d2), best)
    inside = np.abs(best - r2) <= 1e-9 * max(r2, 1.0)
    count = int(np.count_nonzero((best < r2) & ~inside))
    # exact confirmation on the borderline points
    for idx in np.nonzero(inside)[0]:
        d2 = _dist2_point_to_faces(tuple(int(x) for x in pts[idx]), body)
        if d2 is not None and d2 < radius * radius:
            count += 1
    return count


# ---------------------------------------------------------------------------
# JSON schema


def _parse_rational(x, n_scale):
    if isinstance(x, dict):
        if set(x) != {"times_N"}:
            raise ValueError(f"bad rational spec {x!r}")
        if n_scale is None:
            raise ValueError("times_N used but no scale N available")
        return Fraction(x["times_N"]) * n_scale
    if isinstance(x, str):
        return Fraction(x)
    return Fraction(x)


def convex_body_from_json(obj, n_scale=None):
    n = obj.get("N", n_scale)
    if n is None:
        raise ValueError("body JSON must carry N (or a scale must be supplied)")
    hs = []
    for h in obj.get("halfspaces", []):
        a = [_parse_rational(x, n) for x in h["a"]]
        c = _parse_rational(h["c"], n)
        hs.append((a, c))
    return ConvexBody(obj["dim"], hs, n)


def convex_body_to_json(body):
    return {
        "dim": body.dim,
        "halfspaces": [{"a": list(a), "c": c} for a, c in body.halfspaces],
        "N": body.box_bound,
    }
