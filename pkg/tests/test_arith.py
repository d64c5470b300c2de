import math

import numpy as np
import pytest

from affprimes import arith


def test_prime_power_values(tables_1e6):
    t = tables_1e6
    assert t.von_mangoldt[8] == pytest.approx(math.log(2))
    assert t.von_mangoldt[7] == pytest.approx(math.log(7))
    assert t.von_mangoldt[6] == 0.0
    assert t.von_mangoldt_prime[8] == 0.0
    assert t.von_mangoldt_prime[7] == pytest.approx(math.log(7))
    assert t.mobius[30] == -1
    assert t.mobius[12] == 0
    assert t.liouville[12] == -1
    assert t.spf[91] == 7
    assert t.spf[97] == 97


def test_mobius_liouville_multiplicative(tables_1e6, rng):
    t = tables_1e6
    checked = 0
    while checked < 10**4:
        m = int(rng.integers(2, 900))
        n = int(rng.integers(2, 1000))
        if math.gcd(m, n) != 1:
            continue
        assert t.mobius[m * n] == t.mobius[m] * t.mobius[n]
        assert t.liouville[m * n] == t.liouville[m] * t.liouville[n]
        checked += 1
    # liouville is completely multiplicative, coprimality not needed
    for _ in range(2000):
        m = int(rng.integers(2, 900))
        n = int(rng.integers(2, 1000))
        assert t.liouville[m * n] == t.liouville[m] * t.liouville[n]


def test_chebyshev_level(tables_1e6):
    for n in (10**5, 10**6):
        avg = tables_1e6.von_mangoldt[: n + 1].sum() / n
        assert 0.9 <= avg <= 1.1


def test_divisor_identity(tables_1e6):
    # sum_{d|n} mu(d) log(n/d) = Lambda(n)
    t = tables_1e6
    for n in range(2, 10**4 + 1):
        s = sum(sign * math.log(n / d) for d, sign in t.squarefree_divisors(n))
        assert abs(s - t.von_mangoldt[n]) <= 1e-9


def test_lambda_vs_lambda_prime_support(tables_1e6):
    t = tables_1e6
    differing = int(np.count_nonzero(t.von_mangoldt != t.von_mangoldt_prime))
    assert differing <= 3 * math.isqrt(10**6)
    # they differ exactly on proper prime powers
    diff_idx = np.nonzero(t.von_mangoldt != t.von_mangoldt_prime)[0]
    for n in diff_idx[:50]:
        f = t.factor(int(n))
        assert len(f) == 1 and list(f.values())[0] >= 2


def test_w_trick():
    w = arith.w_trick(w=5)
    assert w.W == 30 and w.residues == (1, 7, 11, 13, 17, 19, 23, 29)
    assert arith.w_trick(w=2).W == 2 and arith.w_trick(w=2).residues == (1,)
    w7 = arith.w_trick(w=7)
    assert w7.W == 210 and w7.phi_W == 48
    assert arith.w_trick(W=30).W == 30
    with pytest.raises(ValueError):
        arith.w_trick(W=20)        # not a primorial


def test_lambda_bw_values(tables_1e6):
    w = arith.w_trick(w=5)
    assert arith.lambda_bw(1, 7, w, tables_1e6) == pytest.approx((8 / 30) * math.log(37))
    # 121 = 11^2: the primed variant vanishes
    assert arith.lambda_bw(4, 1, w, tables_1e6, primed=True) == 0.0
    assert arith.lambda_bw(4, 1, w, tables_1e6) == pytest.approx((8 / 30) * math.log(11))
    with pytest.raises(ValueError):
        arith.lambda_bw(1, 6, w, tables_1e6)


@pytest.mark.slow
def test_lambda_bw_mean_value():
    # E_{n <= 1e6} Lambda_{b,W}(n) = 1 +- 0.05 for W = 30, every coprime b
    w = arith.w_trick(w=5)
    tables = arith.build_tables(30 * 10**6 + 30, fields=("von_mangoldt",))
    for b in w.residues:
        mean = float(arith.lambda_bw_array(10**6, b, w, tables).mean())
        assert abs(mean - 1.0) <= 0.05, (b, mean)


def test_cache_roundtrip(tmp_path, tables_1e6):
    small = arith.build_tables(10**4)
    path = tmp_path / "tables.bin"
    small.save(path)
    loaded = arith.ArithTables.load(path)
    assert loaded.n_max == small.n_max
    for name in arith.FIELDS:
        a, b = getattr(small, name), getattr(loaded, name)
        assert (a == b).all()
    # bit-exact across a rebuild
    rebuilt = arith.build_tables(10**4)
    assert (rebuilt.von_mangoldt == small.von_mangoldt).all()
    assert (rebuilt.mobius == small.mobius).all()


def test_guards():
    with pytest.raises(ValueError):
        arith.build_tables(1)
    with pytest.raises(ValueError):
        arith.build_tables(2**31 + 1)
