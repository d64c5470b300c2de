"""Gowers box norms, cyclic and local uniformity norms, and the
Cauchy-Schwarz inequality battery.

Three evaluation routes are kept side by side: the naive defining average
(the oracle), the recursive reduction, and an FFT route for U^2.  The fast
paths must agree with the naive one at small sizes; tests enforce this.
Complex inputs are supported with the conjugation pattern C^{|omega|}.
"""

import itertools
import math
from dataclasses import dataclass

import numpy as np

NAIVE_WORK_GUARD = 10**9


@dataclass
class GowersResult:
    raw_power_average: float
    norm: float
    method: str
    order: int          # 2^{|A|} or 2^{s+1}: the power of the defining average


def _finalize(raw, method, order):
    raw_real = float(np.real(raw))
    if raw_real < 0:
        norm = 0.0 if raw_real > -1e-9 else float("nan")
    else:
        norm = raw_real ** (1.0 / order)
    return GowersResult(raw_power_average=raw_real, norm=norm, method=method, order=order)


@dataclass
class BoxInput:
    axes: tuple
    values: np.ndarray

    def __init__(self, values):
        arr = np.asarray(values, dtype=complex)
        self.values = arr
        self.axes = arr.shape


# ---------------------------------------------------------------------------
# box norms over products of finite sets


def _box_raw_naive(f):
    """Defining average: E_{x0, x1} prod_omega C^{|omega|} f(x^{(omega)})."""
    k = f.ndim
    sizes = f.shape
    total = 0.0 + 0.0j
    ranges0 = [range(s) for s in sizes]
    ranges1 = [range(s) for s in sizes]
    for x0 in itertools.product(*ranges0):
        for x1 in itertools.product(*ranges1):
            prod = 1.0 + 0.0j
            for omega in itertools.product((0, 1), repeat=k):
                idx = tuple(x1[i] if omega[i] else x0[i] for i in range(k))
                v = f[idx]
                if sum(omega) % 2:
                    v = np.conj(v)
                prod *= v
            total += prod
    denom = 1
    for s in sizes:
        denom *= s * s
    return total / denom


def _box_raw_recursive(f):
    """Recursive route: average over pairs in the last axis, recurse on f g-bar."""
    if f.ndim == 0:
        raise ValueError("box norm needs at least one axis")
    if f.ndim == 1:
        m = f.mean()
        return m * np.conj(m)
    n = f.shape[-1]
    total = 0.0 + 0.0j
    for a in range(n):
        for b in range(n):
            total += _box_raw_recursive(f[..., a] * np.conj(f[..., b]))
    return total / (n * n)


def box_norm(f, method="recursive"):
    """Gowers box norm of a multi-axis array; method in {naive, recursive}."""
    if isinstance(f, BoxInput):
        f = f.values
    f = np.asarray(f, dtype=complex)
    work = 1
    for s in f.shape:
        work *= s * s
    if work > NAIVE_WORK_GUARD:
        raise ValueError("work guard exceeded for box norm")
    if method == "naive":
        raw = _box_raw_naive(f)
    elif method == "recursive":
        raw = _box_raw_recursive(f)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _finalize(raw, method, 2 ** f.ndim)


# ---------------------------------------------------------------------------
# cyclic uniformity norms U^{s+1}(Z_N)


def _cyclic_raw_naive(f, s):
    n = len(f)
    if n ** (s + 2) > NAIVE_WORK_GUARD:
        raise ValueError("work guard exceeded for naive cyclic norm")
    idx = np.arange(n)
    total = 0.0 + 0.0j
    for h in itertools.product(range(n), repeat=s + 1):
        prod = np.ones(n, dtype=complex)
        for omega in itertools.product((0, 1), repeat=s + 1):
            shift = sum(o * hh for o, hh in zip(omega, h)) % n
            v = f[(idx + shift) % n]
            if sum(omega) % 2:
                v = np.conj(v)
            prod = prod * v
        total += prod.sum()
    return total / n ** (s + 2)


def _cyclic_raw_fourier_u2(f):
    """U^2(Z_N)^4 = sum_xi |f_hat(xi)|^4 with f_hat = E-normalised FFT."""
    fh = np.fft.fft(f) / len(f)
    return float(np.sum(np.abs(fh) ** 4))


def _cyclic_raw_recursive(f, s):
    n = len(f)
    if s == 1:
        return _cyclic_raw_fourier_u2(f)
    total = 0.0
    for h in range(n):
        g = f * np.conj(np.roll(f, -h))
        total += np.real(_cyclic_raw_recursive(g, s - 1))
    return total / n


def gowers_norm_cyclic(f, s, method="recursive"):
    """U^{s+1}(Z_N) norm; methods: naive, recursive, fourier (s=1 only)."""
    if s < 1:
        raise ValueError("s must be >= 1")
    f = np.asarray(f, dtype=complex)
    n = len(f)
    if method == "naive":
        raw = _cyclic_raw_naive(f, s)
    elif method == "fourier":
        if s != 1:
            raise ValueError("fourier route only computes U^2")
        raw = _cyclic_raw_fourier_u2(f)
    elif method == "recursive":
        raw = _cyclic_raw_recursive(f, s)
    else:
        raise ValueError(f"unknown method {method!r}")
    return _finalize(raw, method, 2 ** (s + 1))


# ---------------------------------------------------------------------------
# local norms U^{s+1}(A) on integer intervals


def _local_raw_naive(f, s):
    """Average over (x, h) with every vertex x + omega.h inside the interval."""
    n = len(f)
    if n ** (s + 2) > NAIVE_WORK_GUARD:
        raise ValueError("work guard exceeded for naive local norm")
    total = 0.0 + 0.0j
    count = 0
    for x in range(n):
        for h in itertools.product(range(-n + 1, n), repeat=s + 1):
            vs = []
            ok = True
            for omega in itertools.product((0, 1), repeat=s + 1):
                pos = x + sum(o * hh for o, hh in zip(omega, h))
                if not 0 <= pos < n:
                    ok = False
                    break
                vs.append((pos, sum(omega) % 2))
            if not ok:
                continue
            count += 1
            prod = 1.0 + 0.0j
            for pos, conj in vs:
                prod *= np.conj(f[pos]) if conj else f[pos]
            total += prod
    if count == 0:
        raise ValueError("empty constraint set")
    return total / count


def gowers_norm_local(f, s, method="embed"):
    """U^{s+1} norm on an interval, intrinsic normalisation.

    The fast route embeds the interval in Z_M with M > 2|I| (a Freiman
    isomorphism for parallelepipeds) and uses
    ||f||_{U(I)} = ||f 1_I||_{U(Z_M)} / ||1_I||_{U(Z_M)}.
    """
    f = np.asarray(f, dtype=complex)
    n = len(f)
    if n < 1:
        raise ValueError("empty interval")
    if method == "naive":
        raw = _local_raw_naive(f, s)
        return _finalize(raw, method, 2 ** (s + 1))
    if method != "embed":
        raise ValueError(f"unknown method {method!r}")
    m = 2 * n + 1
    fe = np.zeros(m, dtype=complex)
    fe[:n] = f
    ie = np.zeros(m, dtype=complex)
    ie[:n] = 1.0
    num = gowers_norm_cyclic(fe, s).raw_power_average
    den = gowers_norm_cyclic(ie, s).raw_power_average
    raw = num / den
    return _finalize(raw, method, 2 ** (s + 1))


# ---------------------------------------------------------------------------
# inequality checks


def gcs_check(family, s=None, tol=1e-9):
    """Gowers-Cauchy-Schwarz over Z_N: |E prod C^{|w|} f_w(x + w.h)| <= prod ||f_w||.

    `family` maps each omega in {0,1}^{s+1} (tuple) to an array over Z_N, or
    is a flat list in lexicographic omega order.  Returns (lhs, rhs, holds).
    """
    if isinstance(family, dict):
        some = next(iter(family.values()))
        k = len(next(iter(family.keys())))
    else:
        k = int(math.log2(len(family)))
        family = {
            omega: family[i]
            for i, omega in enumerate(itertools.product((0, 1), repeat=k))
        }
        some = next(iter(family.values()))
    if s is not None and s + 1 != k:
        raise ValueError("family size does not match s")
    n = len(some)
    if n ** (k + 1) > NAIVE_WORK_GUARD:
        raise ValueError("work guard exceeded")
    fs = {w: np.asarray(v, dtype=complex) for w, v in family.items()}
    idx = np.arange(n)
    total = 0.0 + 0.0j
    for h in itertools.product(range(n), repeat=k):
        prod = np.ones(n, dtype=complex)
        for omega, fv in fs.items():
            shift = sum(o * hh for o, hh in zip(omega, h)) % n
            v = fv[(idx + shift) % n]
            if sum(omega) % 2:
                v = np.conj(v)
            prod = prod * v
        total += prod.sum()
    lhs = abs(total / n ** (k + 1))
    rhs = 1.0
    for fv in fs.values():
        rhs *= gowers_norm_cyclic(fv, k - 1).norm
    return lhs, rhs, lhs <= rhs + tol


def gcs_box_check(family, tol=1e-9):
    """Box-norm Gowers-Cauchy-Schwarz: 2^{|A|} functions on a common product set."""
    k = int(math.log2(len(family)))
    fs = [np.asarray(v, dtype=complex) for v in family]
    sizes = fs[0].shape
    omegas = list(itertools.product((0, 1), repeat=k))
    total = 0.0 + 0.0j
    for x0 in itertools.product(*[range(s) for s in sizes]):
        for x1 in itertools.product(*[range(s) for s in sizes]):
            prod = 1.0 + 0.0j
            for fi, omega in zip(fs, omegas):
                idx = tuple(x1[i] if omega[i] else x0[i] for i in range(k))
                v = fi[idx]
                if sum(omega) % 2:
                    v = np.conj(v)
                prod *= v
            total += prod
    denom = 1
    for s_ in sizes:
        denom *= s_ * s_
    lhs = abs(total / denom)
    rhs = 1.0
    for fi in fs:
        rhs *= box_norm(fi).norm
    return lhs, rhs, lhs <= rhs + tol


def second_gcs_check(fb, tol=1e-9):
    """Second Gowers-Cauchy-Schwarz (one function per subset B of the axes).

    fb maps frozenset B -> array over X_B (axes in sorted order); the full
    set A is the largest key.  Checks
    |E prod f_B(x_B)| <= prod ||f_B^{bar2^{|A|-|B|}}||_{box(X_B)}^{1/2^{|A|-|B|}}.
    """
    full = max(fb.keys(), key=len)
    k = len(full)
    axes = sorted(full)
    sizes = fb[frozenset(full)].shape
    # lhs
    total = 0.0 + 0.0j
    for x in itertools.product(*[range(s) for s in sizes]):
        prod = 1.0 + 0.0j
        for b, arr in fb.items():
            idx = tuple(x[axes.index(a)] for a in sorted(b))
            prod *= arr[idx] if idx else complex(arr)
        total += prod
    denom = 1
    for s_ in sizes:
        denom *= s_
    lhs = abs(total / denom)
    # rhs
    rhs = 1.0
    for b, arr in fb.items():
        gap = k - len(b)
        if len(b) == 0:
            rhs *= abs(complex(arr)) ** (1.0 / 2**gap)
            continue
        g = arr if gap == 0 else np.abs(arr) ** (2**gap)
        rhs *= box_norm(g).norm ** (1.0 / 2**gap)
    return lhs, rhs, lhs <= rhs + tol


# ---------------------------------------------------------------------------
# weighted box norms


def weighted_box_norm(g, nu_family, method="direct"):
    """||g||_{box^B(nu; X_B)} with weights nu_C for proper subsets C of the axes.

    nu_family maps frozenset C (axis indices) -> nonnegative array over X_C.
    Missing subsets default to the constant 1.  The defining average runs
    over pairs (x0, x1) with the product of nu_C over all omega_C patterns.
    """
    if isinstance(g, BoxInput):
        g = g.values
    g = np.asarray(g, dtype=complex)
    k = g.ndim
    sizes = g.shape
    work = 1
    for s_ in sizes:
        work *= s_ * s_
    if work > NAIVE_WORK_GUARD:
        raise ValueError("work guard exceeded")
    axes = list(range(k))
    subsets = [frozenset(c) for r in range(k) for c in itertools.combinations(axes, r)]
    total = 0.0 + 0.0j
    for x0 in itertools.product(*[range(s) for s in sizes]):
        for x1 in itertools.product(*[range(s) for s in sizes]):
            prod = 1.0 + 0.0j
            for omega in itertools.product((0, 1), repeat=k):
                idx = tuple(x1[i] if omega[i] else x0[i] for i in range(k))
                v = g[idx]
                if sum(omega) % 2:
                    v = np.conj(v)
                prod *= v
            wt = 1.0
            for c in subsets:
                nu = nu_family.get(c)
                if nu is None:
                    continue
                cl = sorted(c)
                for omega_c in itertools.product((0, 1), repeat=len(cl)):
                    idx = tuple(
                        x1[a] if o else x0[a] for a, o in zip(cl, omega_c)
                    )
                    wt *= float(nu[idx]) if idx else float(nu)
            total += prod * wt
    denom = 1
    for s_ in sizes:
        denom *= s_ * s_
    raw = total / denom
    res = _finalize(raw, method, 2**k)
    if res.raw_power_average < -1e-9 * max(1.0, float(np.abs(g).max()) ** (2**k)):
        raise ValueError("weighted raw average significantly negative: bad weights?")
    return res


def weighted_gvn_check(f_family, nu_family, tol=1e-9):
    """Weighted generalised von Neumann inequality on |A| axes.

    f_family maps frozenset B -> array on X_B with |f_B| <= nu_B pointwise
    (B over all subsets; the full-set function is the main one).  Checks
    |E prod f_B| <= ||f_A||_{box(nu)} prod_{B proper} ||nu_B||_{box(nu)}^{1/2^{|A|-|B|}}.
    """
    full = max(f_family.keys(), key=len)
    k = len(full)
    axes = sorted(full)
    sizes = f_family[frozenset(full)].shape
    total = 0.0 + 0.0j
    for x in itertools.product(*[range(s) for s in sizes]):
        prod = 1.0 + 0.0j
        for b, arr in f_family.items():
            idx = tuple(x[axes.index(a)] for a in sorted(b))
            prod *= arr[idx] if idx else complex(arr)
        total += prod
    denom = 1
    for s_ in sizes:
        denom *= s_
    lhs = abs(total / denom)

    def restricted_weights(b):
        return {c: nu_family[c] for c in nu_family if c < b}

    fa = f_family[frozenset(full)]
    rhs = weighted_box_norm(fa, restricted_weights(frozenset(full))).norm
    for b in f_family:
        if len(b) == k or len(b) == 0:
            continue
        nub = nu_family[b]
        gap = k - len(b)
        # norm over the axes in b only
        val = weighted_box_norm(nub, restricted_weights(b)).norm
        rhs *= val ** (1.0 / 2**gap)
    return lhs, rhs, lhs <= rhs + tol


def nu_self_consistency(nu_family, full, tol=1e-12):
    """||nu_B||_{box(nu)} two ways: general definition vs the direct product display."""
    b = frozenset(full)
    nub = nu_family[b]
    via_general = weighted_box_norm(nub, {c: nu_family[c] for c in nu_family if c < b})
    # direct: E_{x0,x1} prod_{C subseteq B} prod_{omega_C} nu_C(x_C^{(omega_C)})
    k = len(full)
    sizes = nub.shape
    total = 0.0
    for x0 in itertools.product(*[range(s) for s in sizes]):
        for x1 in itertools.product(*[range(s) for s in sizes]):
            wt = 1.0
            for r in range(k + 1):
                for c in itertools.combinations(range(k), r):
                    nu = nu_family.get(frozenset(c)) if r < k else nub
                    if nu is None:
                        continue
                    for omega_c in itertools.product((0, 1), repeat=r):
                        idx = tuple(x1[a] if o else x0[a] for a, o in zip(c, omega_c))
                        wt *= float(nu[idx]) if idx else float(nu)
            total += wt
    denom = 1
    for s_ in sizes:
        denom *= s_ * s_
    direct = (total / denom) ** (1.0 / 2**k)
    return via_general.norm, direct, abs(via_general.norm - direct) <= tol * max(1.0, direct)


# ---------------------------------------------------------------------------
# dual norm witnesses


def dual_norm_lower_bound(big_f, witnesses, s):
    """max_w |E conj(f_w) F| over witnesses scaled to ||f_w||_{U^{s+1}[N]} = 1.

    A certified lower bound for the dual norm ||F||_{U^{s+1}[N]*}: the norm
    is conjugation-invariant, so pairing against conj(f) ranges over the same
    unit ball.
    """
    big_f = np.asarray(big_f, dtype=complex)
    if not witnesses:
        raise ValueError("empty witness list")
    best = 0.0
    for w in witnesses:
        w = np.asarray(w, dtype=complex)
        nn = gowers_norm_local(w, s).norm
        if nn <= 0:
            continue
        val = abs(np.mean(np.conj(w) / nn * big_f))
        best = max(best, val)
    return best
