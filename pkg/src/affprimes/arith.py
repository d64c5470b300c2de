"""Sieve-built tables of arithmetic functions and the W-trick.

All tables are numpy arrays indexed by n (index 0 unused).  Construction is
vectorised: a boolean prime sieve first, then mobius/liouville by stripping
prime factors p <= sqrt(n_max) and flipping signs for the single large
leftover prime.
"""

import math
import struct
from dataclasses import dataclass, field

import numpy as np

_MAGIC = b"APTBL\x00\x01\x00"

FIELDS = ("spf", "von_mangoldt", "von_mangoldt_prime", "mobius", "liouville")


@dataclass
class ArithTables:
    n_max: int
    is_prime: np.ndarray            # bool, length n_max+1
    primes: np.ndarray              # int64, sorted
    spf: np.ndarray | None = None
    von_mangoldt: np.ndarray | None = None          # Lambda, float64
    von_mangoldt_prime: np.ndarray | None = None    # Lambda', float64
    mobius: np.ndarray | None = None                # int8
    liouville: np.ndarray | None = None             # int8
    _prime_mask_u8: np.ndarray | None = field(default=None, repr=False)

    @property
    def prime_mask(self):
        if self._prime_mask_u8 is None:
            self._prime_mask_u8 = self.is_prime.view(np.uint8)
        return self._prime_mask_u8

    def factor(self, n):
        """Prime factorization of n >= 1 as a dict {p: exponent}.

        Uses the spf table when available; falls back to trial division by
        the sieved primes (valid for n <= n_max**2).
        """
        n = int(n)
        if n < 1:
            raise ValueError("factor expects n >= 1")
        out = {}
        if self.spf is not None and n <= self.n_max:
            while n > 1:
                p = int(self.spf[n])
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                out[p] = e
            return out
        for p in self.primes:
            p = int(p)
            if p * p > n:
                break
            while n % p == 0:
                out[p] = out.get(p, 0) + 1
                n //= p
        if n > 1:
            if n > self.n_max * self.n_max:
                raise ValueError("n too large to factor with this table")
            out[n] = out.get(n, 0) + 1
        return out

    def squarefree_divisors(self, n):
        """Sorted squarefree divisors of n with their mobius signs."""
        divs = [(1, 1)]
        for p in self.factor(n):
            divs += [(d * p, -s) for d, s in divs]
        return sorted(divs)

    def save(self, path):
        """Binary cache: magic, n_max, then each array with a small header."""
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<q", self.n_max))
            arrays = {"is_prime": self.is_prime.view(np.uint8)}
            for name in FIELDS:
                arr = getattr(self, name)
                if arr is not None:
                    arrays[name] = arr
            fh.write(struct.pack("<q", len(arrays)))
            for name, arr in arrays.items():
                tag = name.encode()
                fh.write(struct.pack("<q", len(tag)))
                fh.write(tag)
                dt = arr.dtype.str.encode()
                fh.write(struct.pack("<q", len(dt)))
                fh.write(dt)
                fh.write(struct.pack("<q", arr.nbytes))
                fh.write(np.ascontiguousarray(arr).tobytes())

    @classmethod
    def load(cls, path):
        with open(path, "rb") as fh:
            if fh.read(len(_MAGIC)) != _MAGIC:
                raise ValueError("bad magic header")
            n_max = struct.unpack("<q", fh.read(8))[0]
            count = struct.unpack("<q", fh.read(8))[0]
            arrays = {}
            for _ in range(count):
                ln = struct.unpack("<q", fh.read(8))[0]
                name = fh.read(ln).decode()
                ln = struct.unpack("<q", fh.read(8))[0]
                dt = np.dtype(fh.read(ln).decode())
                nbytes = struct.unpack("<q", fh.read(8))[0]
                arrays[name] = np.frombuffer(fh.read(nbytes), dtype=dt).copy()
        is_prime = arrays.pop("is_prime").view(bool)
        primes = np.nonzero(is_prime)[0].astype(np.int64)
        return cls(n_max=n_max, is_prime=is_prime, primes=primes, **arrays)


def save_array(path, name, arr, n_max):
    """Single named array in the same little-endian magic-header format."""
    with open(path, "wb") as fh:
        fh.write(_MAGIC)
        fh.write(struct.pack("<q", int(n_max)))
        fh.write(struct.pack("<q", 1))
        tag = name.encode()
        fh.write(struct.pack("<q", len(tag)))
        fh.write(tag)
        dt = arr.dtype.str.encode()
        fh.write(struct.pack("<q", len(dt)))
        fh.write(dt)
        fh.write(struct.pack("<q", arr.nbytes))
        fh.write(np.ascontiguousarray(arr).tobytes())


def load_array(path):
    """(name, array, n_max) from a single-array cache file."""
    with open(path, "rb") as fh:
        if fh.read(len(_MAGIC)) != _MAGIC:
            raise ValueError("bad magic header")
        n_max = struct.unpack("<q", fh.read(8))[0]
        count = struct.unpack("<q", fh.read(8))[0]
        if count != 1:
            raise ValueError("expected a single-array cache")
        ln = struct.unpack("<q", fh.read(8))[0]
        name = fh.read(ln).decode()
        ln = struct.unpack("<q", fh.read(8))[0]
        dt = np.dtype(fh.read(ln).decode())
        nbytes = struct.unpack("<q", fh.read(8))[0]
        arr = np.frombuffer(fh.read(nbytes), dtype=dt).copy()
    return name, arr, n_max


def prime_sieve(n_max):
    is_p = np.ones(n_max + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, math.isqrt(n_max) + 1):
        if is_p[p]:
            is_p[p * p:: p] = False
    return is_p


def build_tables(n_max, fields=FIELDS):
    """Build ArithTables up to n_max with the requested fields."""
    n_max = int(n_max)
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    if n_max > 2**31:
        raise ValueError("n_max exceeds the 2^31 allocation guard")
    fields = set(fields)
    is_p = prime_sieve(n_max)
    primes = np.nonzero(is_p)[0].astype(np.int64)
    small = [int(p) for p in primes[primes <= math.isqrt(n_max)]]
    t = ArithTables(n_max=n_max, is_prime=is_p, primes=primes)

    if "spf" in fields:
        spf = np.zeros(n_max + 1, dtype=np.int32)
        for p in small:
            sl = spf[p::p]
            sl[sl == 0] = p
        rest = spf[2:] == 0     # entries with no factor <= sqrt(n_max) are prime
        spf[2:][rest] = np.arange(2, n_max + 1, dtype=np.int32)[rest]
        spf[1] = 1
        t.spf = spf

    if "von_mangoldt" in fields or "von_mangoldt_prime" in fields:
        vmp = np.zeros(n_max + 1)
        vmp[primes] = np.log(primes.astype(np.float64))
        if "von_mangoldt_prime" in fields:
            t.von_mangoldt_prime = vmp.copy() if "von_mangoldt" in fields else vmp
        if "von_mangoldt" in fields:
            vm = vmp if "von_mangoldt_prime" not in fields else vmp.copy()
            for p in small:
                lp = math.log(p)
                pk = p * p
                while pk <= n_max:
                    vm[pk] = lp
                    pk *= p
            t.von_mangoldt = vm

    if "mobius" in fields or "liouville" in fields:
        # rem holds what is left of n after dividing out all p <= sqrt(n_max);
        # a leftover > 1 is a single large prime.
        rem = np.arange(n_max + 1, dtype=np.int64)
        mob = np.ones(n_max + 1, dtype=np.int8) if "mobius" in fields else None
        lio = np.ones(n_max + 1, dtype=np.int8) if "liouville" in fields else None
        for p in small:
            if mob is not None:
                mob[p::p] *= -1
                mob[p * p:: p * p] = 0
            if lio is not None:
                pk = p
                while pk <= n_max:
                    lio[pk::pk] *= -1
                    pk *= p
            rem[p::p] //= p
            pk = p * p
            while pk <= n_max:
                rem[pk::pk] //= p
                pk *= p
        big = rem > 1
        if mob is not None:
            mob[big] *= -1
            mob[0] = 0
            t.mobius = mob
        if lio is not None:
            lio[big] *= -1
            lio[0] = 0
            t.liouville = lio

    return t


# ---------------------------------------------------------------------------
# W-trick


@dataclass(frozen=True)
class WTrickParams:
    w: float
    W: int
    residues: tuple

    @property
    def phi_W(self):
        return len(self.residues)

    @property
    def normalizer(self):
        """phi(W)/W."""
        return self.phi_W / self.W


def w_trick(w=None, W=None):
    """Build W = prod_{p <= w} p and the coprime residue list.

    Either a threshold w or an explicit primorial W may be given; a W that
    is not a primorial is rejected.
    """
    if (w is None) == (W is None):
        raise ValueError("give exactly one of w, W")
    if w is not None:
        if w < 2:
            raise ValueError("w must be >= 2")
        prod = 1
        p = 2
        while p <= w:
            prod *= p
            p = _next_prime(p)
        W = prod
    else:
        W = int(W)
        if W < 2:
            raise ValueError("W must be >= 2")
        prod, p = 1, 2
        while prod < W:
            prod *= p
            p = _next_prime(p)
        if prod != W:
            raise ValueError(f"{W} is not a primorial")
        w = float(_prev_prime(p))
    residues = tuple(b for b in range(1, W + 1) if math.gcd(b, W) == 1)
    return WTrickParams(w=float(w), W=W, residues=residues)


def _next_prime(p):
    q = p + 1
    while True:
        if all(q % r for r in range(2, math.isqrt(q) + 1)):
            return q
        q += 1


def _prev_prime(p):
    q = p - 1
    while q >= 2:
        if all(q % r for r in range(2, math.isqrt(q) + 1)):
            return q
        q -= 1
    raise ValueError("no prime below 2")


def lambda_bw(n, b, params, tables, primed=False):
    """(phi(W)/W) * Lambda(W n + b), or the Lambda' variant when primed."""
    if math.gcd(b, params.W) != 1:
        raise ValueError("b must be coprime to W")
    m = params.W * int(n) + b
    if m > tables.n_max:
        raise ValueError("W n + b exceeds the table range")
    if m < 1:
        return 0.0
    table = tables.von_mangoldt_prime if primed else tables.von_mangoldt
    return params.normalizer * float(table[m])


def lambda_bw_array(n_hi, b, params, tables, primed=False, n_lo=1):
    """Vector of Lambda_{b,W}(n) for n = n_lo .. n_hi."""
    if math.gcd(b, params.W) != 1:
        raise ValueError("b must be coprime to W")
    if params.W * n_hi + b > tables.n_max:
        raise ValueError("W n + b exceeds the table range")
    table = tables.von_mangoldt_prime if primed else tables.von_mangoldt
    return params.normalizer * table[params.W * n_lo + b: params.W * n_hi + b + 1: params.W]
