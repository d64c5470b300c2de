"""Truncated divisor sums, sieve factors, the sharp/flat split of the von
Mangoldt function, and the enveloping sieve with its pseudorandomness checks.

Cutoff functions are piecewise polynomial with closed-form derivatives:

* normalized_bump: even, supported on [-1,1], chi(0) = 1, built by smoothing
  the tent 1-|x| over a width eps at both ends.  Cauchy-Schwarz forces
  int_0^1 |chi'|^2 >= 1 for any such chi with equality only for the
  (non-smooth) tent itself, so chi(0)=1 and c_{chi,2}=1 cannot hold exactly
  at the same time; with the default eps the gap is ~8e-7.
* tent_taper: the tent smoothed only near the support edge; its derivative
  at 0+ is -1 (we adopt the right-derivative in c_{chi,1} = -chi'(0)), which
  makes it the natural cutoff for a = 1 experiments.
* sharp/flat split pieces of the identity function chi(x) = x, transitioning
  on [1/2, 1] through a fixed quintic smoothstep.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad

from . import counting, gowers, linalg
from .arith import w_trick


def _smoothstep(u):
    """Quintic C^2 step: 0 -> 1 on [0, 1]."""
    u = np.clip(u, 0.0, 1.0)
    return u**3 * (10.0 - 15.0 * u + 6.0 * u * u)


def _smoothstep_int(u):
    """int_0^u smoothstep."""
    u = np.clip(u, 0.0, 1.0)
    return u**4 * (2.5 - 3.0 * u + u * u)


_SMOOTHSTEP_SQ_INT = 0.39177489177489176      # int_0^1 s(u)^2 du = 36/11-18+345/9-75/2+100/7


@dataclass
class SmoothCutoff:
    family_id: str
    evaluator: object           # chi(x), vectorised over numpy arrays
    derivative: object          # chi'(x) for x > 0 (right-derivative at 0)
    support_radius: float = 1.0
    breakpoints: tuple = ()
    smooth_at_zero: bool = True

    def __call__(self, x):
        return self.evaluator(x)


def normalized_bump(eps=1e-6):
    """Smoothed tent: chi(0) = 1 exactly, c_{chi,2} = 1 + eps(2q - eps)/(1-eps)^2."""
    if not 0 < eps <= 0.5:
        raise ValueError("eps must lie in (0, 1/2]")
    scale = 1.0 / (1.0 - eps)

    def deriv(x):
        x = np.abs(np.asarray(x, dtype=float))
        out = np.zeros_like(x)
        ramp0 = x < eps
        mid = (x >= eps) & (x <= 1 - eps)
        ramp1 = (x > 1 - eps) & (x <= 1)
        out[ramp0] = -scale * _smoothstep(x[ramp0] / eps)
        out[mid] = -scale
        out[ramp1] = -scale * (1.0 - _smoothstep((x[ramp1] - 1 + eps) / eps))
        return out

    def chi(x):
        x = np.abs(np.asarray(x, dtype=float))
        out = np.zeros_like(x)
        ramp0 = x < eps
        mid = (x >= eps) & (x <= 1 - eps)
        ramp1 = (x > 1 - eps) & (x <= 1)
        out[ramp0] = 1.0 - scale * eps * _smoothstep_int(x[ramp0] / eps)
        out[mid] = 1.0 - scale * (x[mid] - eps / 2.0)
        u = (x[ramp1] - 1 + eps) / eps
        out[ramp1] = 1.0 - scale * (
            1.0 - 1.5 * eps + (x[ramp1] - 1 + eps) - eps * _smoothstep_int(u)
        )
        return out

    return SmoothCutoff(
        family_id=f"normalized_bump(eps={eps:g})",
        evaluator=chi,
        derivative=deriv,
        breakpoints=(eps, 1 - eps, 1.0),
        smooth_at_zero=True,
    )


def normalized_bump_c2_exact(eps=1e-6):
    """Closed-form c_{chi,2} of the normalized bump."""
    q = _SMOOTHSTEP_SQ_INT
    return (1 - 2 * eps + 2 * eps * q) / (1 - eps) ** 2


def tent_taper(delta=0.1):
    """Tent 1-|x| smoothed only near |x| = 1; right-derivative at 0 is -1.

    The taper is delta*g(u) with the quintic g matching value delta, slope -1
    and curvature 0 at the joint and a C^2 zero at the support edge.
    """
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")

    def g(u):
        return 1.0 - u - 4.0 * u**3 + 7.0 * u**4 - 3.0 * u**5

    def gp(u):
        return -1.0 - 12.0 * u**2 + 28.0 * u**3 - 15.0 * u**4

    def chi(x):
        x = np.abs(np.asarray(x, dtype=float))
        out = np.zeros_like(x)
        lin = x <= 1 - delta
        taper = (x > 1 - delta) & (x <= 1)
        out[lin] = 1.0 - x[lin]
        out[taper] = delta * g((x[taper] - 1 + delta) / delta)
        return out

    def deriv(x):
        x = np.abs(np.asarray(x, dtype=float))
        out = np.zeros_like(x)
        lin = x <= 1 - delta
        taper = (x > 1 - delta) & (x <= 1)
        out[lin] = -1.0
        out[taper] = gp((x[taper] - 1 + delta) / delta)
        return out

    return SmoothCutoff(
        family_id=f"tent_taper(delta={delta:g})",
        evaluator=chi,
        derivative=deriv,
        breakpoints=(1 - delta, 1.0),
        smooth_at_zero=False,       # kink at 0: derivative means the x>0 branch
    )


def split_sharp_flat():
    """The sharp/flat split of the identity chi(x) = x on x >= 0.

    chi_sharp(x) vanishes for x >= 1 and equals x for x <= 1/2; chi_flat is
    the complement (x - chi_sharp), vanishing for x <= 1/2 and unbounded.
    """

    def sharp(x):
        x = np.asarray(x, dtype=float)
        out = np.where(np.abs(x) >= 1.0, 0.0, x)
        trans = (np.abs(x) > 0.5) & (np.abs(x) < 1.0)
        out = np.where(trans, x * (1.0 - _smoothstep(2.0 * np.abs(x) - 1.0)), out)
        return out

    def sharp_deriv(x):
        x = np.asarray(x, dtype=float)
        s = _smoothstep(2.0 * np.abs(x) - 1.0)
        ds = np.where(
            (np.abs(x) > 0.5) & (np.abs(x) < 1.0),
            30.0 * (2 * np.abs(x) - 1) ** 2 * (1 - (2 * np.abs(x) - 1)) ** 2 * 2.0,
            0.0,
        )
        inner = np.where(np.abs(x) < 1.0, 1.0 - s - x * np.sign(x) * ds, 0.0)
        return np.where(np.abs(x) <= 0.5, 1.0, inner)

    def flat(x):
        x = np.asarray(x, dtype=float)
        return x - sharp(x)

    chi_s = SmoothCutoff(
        family_id="sharp_identity",
        evaluator=sharp,
        derivative=sharp_deriv,
        breakpoints=(0.5, 1.0),
        smooth_at_zero=True,
    )
    return chi_s, flat


# ---------------------------------------------------------------------------
# truncated divisor sums


def truncated_divisor_sum(n, chi, big_r, a, tables):
    """Lambda_{chi,R,a}(n) = log R (sum_{d|n} mu(d) chi(log d / log R))^a.

    Extended to negative n through |n| (the sum only sees divisors).
    """
    if n == 0:
        raise ValueError("n = 0 rejected")
    if big_r <= 1:
        raise ValueError("R must exceed 1")
    log_r = math.log(big_r)
    acc = 0.0
    for d, sign in tables.squarefree_divisors(abs(int(n))):
        if d > chi.support_radius * big_r + 1:
            break
        acc += sign * float(chi(math.log(d) / log_r))
    return log_r * acc**a


def divisor_sum_core_array(chi, big_r, n_max, tables):
    """Array of D(n) = sum_{d|n, d squarefree} mu(d) chi(log d/log R), n <= n_max."""
    log_r = math.log(big_r)
    d_hi = int(min(n_max, math.floor(chi.support_radius * big_r)))
    core = np.zeros(n_max + 1)
    core[1:] = float(chi(0.0))
    if tables.mobius is None or tables.n_max < d_hi:
        raise ValueError("need a mobius table up to R")
    for d in range(2, d_hi + 1):
        mu = int(tables.mobius[d])
        if mu == 0:
            continue
        core[d::d] += mu * float(chi(math.log(d) / log_r))
    core[0] = 0.0
    return core


def gy_weight_array(chi, big_r, a, n_max, tables):
    """Lambda_{chi,R,a} as a dense table over [0, n_max]."""
    core = divisor_sum_core_array(chi, big_r, n_max, tables)
    return math.log(big_r) * core**a


def sieve_factor(chi, a):
    """c_{chi,1} = -chi'(0); c_{chi,2} = int_0^inf |chi'|^2 by adaptive quadrature."""
    if a == 1:
        return -float(chi.derivative(0.0))
    if a == 2:
        pts = [b for b in chi.breakpoints if 0 < b < chi.support_radius]
        val, _ = quad(
            lambda x: float(chi.derivative(x)) ** 2,
            0.0,
            chi.support_radius,
            points=pts or None,
            limit=200,
        )
        return val
    raise ValueError("only a in {1, 2} supported (general-a factors out of scope)")


# ---------------------------------------------------------------------------
# the sharp split of Lambda


def lambda_sharp_array(n_max, big_r, tables):
    """Lambda^sharp(n) = -log R sum_{d|n} mu(d) chi_sharp(log d / log R)."""
    chi_s, _ = split_sharp_flat()
    core = divisor_sum_core_array(chi_s, big_r, n_max, tables)
    return -math.log(big_r) * core


def lambda_flat_value(n, big_r, tables):
    """Lambda^flat(n) by direct divisor enumeration (all squarefree divisors)."""
    _, flat = split_sharp_flat()
    log_r = math.log(big_r)
    acc = 0.0
    for d, sign in tables.squarefree_divisors(int(n)):
        acc += sign * float(flat(math.log(d) / log_r))
    return -log_r * acc


def sharp_gowers_check(n_scale, b, wparams, s, gamma, tables):
    """|| (phi(W)/W) Lambda^sharp(W n + b) - 1 ||_{U^{s+1}[N]}."""
    big_r = float(n_scale) ** gamma
    if big_r <= 1:
        raise ValueError("R = N^gamma must exceed 1")
    m_max = wparams.W * n_scale + b
    sharp = lambda_sharp_array(m_max, big_r, tables)
    f = wparams.normalizer * sharp[wparams.W + b: m_max + 1: wparams.W] - 1.0
    return gowers.gowers_norm_local(f, s).norm


# ---------------------------------------------------------------------------
# enveloping sieve


@dataclass
class EnvelopingSieve:
    nu: np.ndarray
    n_scale: int
    n_prime: int
    c_factor: int
    gamma: float
    big_r: float
    wparams: object
    b_list: tuple
    chi: SmoothCutoff
    meta: dict = field(default_factory=dict)

    def mean(self):
        return float(self.nu.mean())

    def save(self, path):
        """Cache nu in the arith-tables binary format (bit-exact)."""
        from .arith import save_array

        save_array(path, "enveloping_nu", self.nu, self.n_prime)

    @staticmethod
    def load_nu(path):
        from .arith import load_array

        name, arr, n_prime = load_array(path)
        if name != "enveloping_nu":
            raise ValueError("not an enveloping-sieve cache")
        return arr, n_prime


def _least_prime_at_least(n):
    from .arith import prime_sieve

    # Bertrand guarantees a prime in [n, 2n]
    sieve = prime_sieve(2 * n + 10)
    idx = np.nonzero(sieve[n:])[0]
    return int(n + idx[0])


def build_enveloping_sieve(n_scale, gamma, w, b_list, c_factor=20, tables=None, chi=None):
    """nu = 1/2 + (1/2) E_i (phi(W)/W) Lambda_{chi,R,2}(W n + b_i) on [N], 1 elsewhere."""
    if c_factor < 20:
        raise ValueError("C must be >= 20")
    if not 0 < gamma < 0.6:
        raise ValueError("gamma must lie in (0, 3/5)")
    wparams = w_trick(w=w)
    for b in b_list:
        if math.gcd(b, wparams.W) != 1:
            raise ValueError(f"residue {b} not coprime to W={wparams.W}")
    n_prime = _least_prime_at_least(c_factor * n_scale)
    if n_prime > 2 * c_factor * n_scale:
        raise AssertionError("Bertrand violated?!")
    big_r = float(n_scale) ** gamma
    if chi is None:
        chi = normalized_bump()
    m_max = wparams.W * n_scale + max(b_list)
    if tables is None or tables.n_max < m_max:
        raise ValueError("need tables up to W*N + max(b)")
    gy = gy_weight_array(chi, big_r, 2, m_max, tables)
    nu_tilde = np.zeros(n_scale + 1)
    for b in b_list:
        nu_tilde[1:] += gy[wparams.W + b: wparams.W * n_scale + b + 1: wparams.W]
    nu_tilde *= wparams.normalizer / len(b_list)
    nu = np.ones(n_prime)
    nu[1: n_scale + 1] = 0.5 + 0.5 * nu_tilde[1:]
    return EnvelopingSieve(
        nu=nu,
        n_scale=n_scale,
        n_prime=n_prime,
        c_factor=c_factor,
        gamma=gamma,
        big_r=big_r,
        wparams=wparams,
        b_list=tuple(b_list),
        chi=chi,
    )


def domination_constant(sieve, tables):
    """max over n in [N^{3/5}, N] of (1 + sum_i Lambda'_{b_i,W}(n)) / nu(n)."""
    w = sieve.wparams
    n0 = max(1, math.ceil(sieve.n_scale ** 0.6))
    n = np.arange(n0, sieve.n_scale + 1, dtype=np.int64)
    lhs = np.ones(len(n))
    for b in sieve.b_list:
        lhs += w.normalizer * tables.von_mangoldt_prime[w.W * n0 + b: w.W * sieve.n_scale + b + 1: w.W]
    ratio = lhs / sieve.nu[n0: sieve.n_scale + 1]
    return float(ratio.max())


@dataclass
class LinearFormsResult:
    deviation: float
    expectation: float
    method: str
    stderr: float = 0.0


def linear_forms_check(sieve, sys, sample_budget=2 * 10**6, seed=0):
    """|E_{n in Z_{N'}^d} prod nu(psi_i(n)) - 1|.

    Exact routes: full rank mod N' factors into (E nu)^t; corank 1 reduces to
    a single character sum via the FFT of nu.  Otherwise Monte Carlo with a
    recorded seed and standard error.
    """
    p = sieve.n_prime
    nu = sieve.nu
    rows = [[c % p for c in f.linear_coeffs] for f in sys.forms]
    consts = [f.constant % p for f in sys.forms]
    t = sys.t
    r = linalg.rank_mod_p(rows, p)
    if r == t:
        e = float(nu.mean()) ** t
        return LinearFormsResult(abs(e - 1.0), e, "exact:product")
    if r == t - 1:
        # left kernel: xi with sum_i xi_i rows[i] = 0 mod p
        transpose = [[rows[i][j] for i in range(t)] for j in range(len(rows[0]))]
        kern = _nullspace_mod_p(transpose, p)
        if len(kern) != 1:
            raise AssertionError("corank mismatch")
        v = kern[0]
        nu_hat = np.fft.fft(nu) / p
        rr = np.arange(p, dtype=np.int64)
        prod = np.ones(p, dtype=complex)
        shift = 0
        for i in range(t):
            prod *= nu_hat[(rr * v[i]) % p]
            shift = (shift + v[i] * consts[i]) % p
        phases = np.exp(2j * np.pi * ((rr * shift) % p) / p)
        e = float(np.real(np.sum(prod * phases)))
        return LinearFormsResult(abs(e - 1.0), e, "exact:character-sum")
    rng = np.random.default_rng(seed)
    samples = rng.integers(0, p, size=(sample_budget, sys.d))
    prod = np.ones(sample_budget)
    for i, f in enumerate(sys.forms):
        vals = np.zeros(sample_budget, dtype=np.int64)
        for j, c in enumerate(f.linear_coeffs):
            vals += c * samples[:, j]
        vals = (vals + f.constant) % p
        prod *= nu[vals]
    e = float(prod.mean())
    se = float(prod.std(ddof=1) / math.sqrt(sample_budget))
    return LinearFormsResult(abs(e - 1.0), e, "montecarlo", stderr=se)


def _nullspace_mod_p(rows, p):
    """Basis of {x : rows x = 0 mod p}."""
    n_cols = len(rows[0])
    m = [[x % p for x in row] for row in rows]
    pivots = []
    r = 0
    for c in range(n_cols):
        pr = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = pow(m[r][c], p - 2, p)
        m[r] = [(x * inv) % p for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    pivot_set = set(pivots)
    basis = []
    for fc in range(n_cols):
        if fc in pivot_set:
            continue
        v = [0] * n_cols
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-m[i][fc]) % p
        basis.append(v)
    return basis


# ---------------------------------------------------------------------------
# correlation condition


def _sqrt_prime_divisor_sums(values, w_threshold, tables):
    """For each v in values: sum of p^{-1/2} over primes p | v with p > w."""
    out = []
    for v in values:
        v = abs(int(v))
        if v == 0:
            out.append(None)        # signals the tau(0) cap
            continue
        acc = 0.0
        for p in tables.factor(v):
            if p > w_threshold:
                acc += p ** -0.5
        out.append(acc)
    return out


def tau_weight(sieve, n_values, tables, kappa=1.0, cap=None):
    """Diagnostic tau(n) = mean over residue pairs of exp(kappa sum p^{-1/2}).

    The constants are unspecified in the correlation condition; kappa and the
    tau(0) cap are surfaced as parameters (defaults kappa=1, cap=log^2 N).
    """
    if cap is None:
        cap = math.log(sieve.n_scale) ** 2
    w = sieve.wparams
    bl = sieve.b_list
    pairs = [(bi, bj) for k, bi in enumerate(bl) for bj in bl[k:]]
    out = []
    for n in n_values:
        acc = 0.0
        for bi, bj in pairs:
            v = w.W * int(n) + bi - bj
            if v == 0:
                acc += cap
                continue
            s = 0.0
            for p in tables.factor(abs(v)):
                if p > w.w:
                    s += p ** -0.5
            acc += min(math.exp(kappa * s), cap)
        out.append(acc / len(pairs))
    return out


def correlation_check(sieve, m, h_list, tables, kappa=1.0, cap=None):
    """lhs = E_n prod_i nu(n + h_i) vs rhs = sum_{i<j} tau(h_i - h_j)."""
    if not 1 < m <= 16:
        raise ValueError("need 1 < m <= 16")
    if len(h_list) != m:
        raise ValueError("h_list must have m entries")
    prod = np.ones(sieve.n_prime)
    for h in h_list:
        prod *= np.roll(sieve.nu, -int(h))
    lhs = float(prod.mean())
    diffs = [h_list[i] - h_list[j] for i in range(m) for j in range(i + 1, m)]
    rhs = float(sum(tau_weight(sieve, diffs, tables, kappa=kappa, cap=cap)))
    return lhs, rhs, lhs <= rhs


def tau_moments(sieve, tables, qs=(1, 2, 3), n_limit=None, kappa=1.0, cap=None):
    """E tau^q over n in [1, n_limit] (vectorised sieve over prime divisors)."""
    if cap is None:
        cap = math.log(sieve.n_scale) ** 2
    n_limit = n_limit or sieve.n_scale
    w = sieve.wparams
    bl = sieve.b_list
    pairs = [(bi, bj) for k, bi in enumerate(bl) for bj in bl[k:]]
    from .arith import prime_sieve

    hi = w.W * n_limit + max(b for b, _ in pairs) + 1
    psieve = np.nonzero(prime_sieve(min(hi, w.W * n_limit + w.W)))[0]
    psieve = psieve[psieve > w.w]
    tau = np.zeros(n_limit + 1)
    for bi, bj in pairs:
        db = bi - bj
        s = np.zeros(n_limit + 1)
        for p in psieve:
            p = int(p)
            # n with p | W n + db
            inv = pow(w.W % p, p - 2, p)
            n0 = (-db * inv) % p
            if n0 == 0:
                n0 = p
            if n0 <= n_limit:
                s[n0::p] += p ** -0.5
        term = np.minimum(np.exp(kappa * s), cap)
        tau += term
    tau /= len(pairs)
    tau = tau[1:]
    return {q: float((tau**q).mean()) for q in qs}


# ---------------------------------------------------------------------------
# Goldston-Yildirim estimate check


def gy_estimate_check(sys, body, chi_list, a_list, gamma, tables, p_max=10**5):
    """Empirical sum of prod Lambda_{chi_i,R,a_i}(psi_i(n)) over K against
    prod c_{chi_i,a_i} * |K| * prod_{p<=p_max} beta_p."""
    from .localfactors import singular_series

    n_scale = body.box_bound
    big_r = float(n_scale) ** gamma
    if big_r <= 1:
        raise ValueError("R = N^gamma must exceed 1")
    lo_hi = [
        counting.affine_range_over_body(body, f.linear_coeffs, f.constant)
        for f in sys.forms
    ]
    if any(lo is None for lo, _ in lo_hi):
        ss = singular_series(sys, p_max)
        return {
            "empirical": 0.0,
            "predicted": 0.0,
            "ratio": float("nan"),
            "R": big_r,
            "sieve_factors": math.prod(
                sieve_factor(chi, a) for chi, a in zip(chi_list, a_list)
            ),
            "singular_series": ss.truncated_product,
            "volume": 0,
        }
    m_max = max(max(abs(int(lo)), abs(int(hi))) for lo, hi in lo_hi)
    weights = [
        counting.weight_from_table(
            f"gy[{chi.family_id},a={a}]",
            gy_weight_array(chi, big_r, a, m_max + 2, tables),
            reflect_negative=True,
        )
        for chi, a in zip(chi_list, a_list)
    ]
    empirical = counting.weighted_count(sys, body, weights, tables)
    ss = singular_series(sys, p_max)
    vol = body.lattice_point_count()
    c_prod = 1.0
    for chi, a in zip(chi_list, a_list):
        c_prod *= sieve_factor(chi, a)
    predicted = c_prod * vol * ss.truncated_product
    ratio = empirical / predicted if predicted else float("nan")
    return {
        "empirical": empirical,
        "predicted": predicted,
        "ratio": ratio,
        "R": big_r,
        "sieve_factors": c_prod,
        "singular_series": ss.truncated_product,
        "volume": vol,
    }
