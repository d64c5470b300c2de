from fractions import Fraction

import numpy as np
import pytest

from affprimes import forms, localfactors as lf
from affprimes.arith import prime_sieve

AP4 = forms.ap_system(4)


def small_primes(limit):
    return [int(p) for p in np.nonzero(prime_sieve(limit))[0]]


def test_local_von_mangoldt():
    assert lf.local_von_mangoldt(6, 5) == 3
    assert lf.local_von_mangoldt(6, 4) == 0
    assert lf.local_von_mangoldt(1, 12345) == 1
    assert lf.local_von_mangoldt(6, 11) == 3        # periodicity
    assert lf.local_von_mangoldt(6, -1) == 3


def test_ap4_golden_factors():
    assert lf.local_factor(AP4, 2) == 4
    assert lf.local_factor(AP4, 3) == Fraction(9, 8)
    # the closed form 1 - (3p-1)/(p-1)^3 at p = 5
    assert lf.local_factor(AP4, 5) == Fraction(25, 32)
    for p in small_primes(50)[2:]:
        assert lf.local_factor(AP4, p) == 1 - Fraction(3 * p - 1, (p - 1) ** 3)


def test_identity_system_unit_factors():
    ident = forms.identity_system(3)
    for p in (2, 3, 5, 11):
        assert lf.local_factor(ident, p) == 1


def test_inclusion_exclusion_vs_enumeration():
    fixtures = [
        AP4,
        forms.ap_system(3),
        forms.balog_system(2),
        forms.vinogradov_system(101),
        forms.system([[1], [1]], [0, 2]),
    ]
    for sys in fixtures:
        for p in small_primes(23):
            if p**sys.d <= 10**6:
                assert lf.local_factor(sys, p) == lf.local_factor_enumerate(sys, p), (
                    str(sys),
                    p,
                )


def test_generic_profile_agrees_with_exact():
    data = lf.SystemLocalData(AP4)
    for p in small_primes(200):
        if p not in data.exceptional:
            assert data.generic_beta(p) == lf.local_factor(AP4, p)


def test_multiplicativity():
    assert lf.local_factor_q(AP4, 6) == Fraction(9, 2)
    assert lf.local_factor_q(AP4, 1) == 1
    assert lf.local_factor_q(forms.identity_system(2), 30) == 1
    # direct enumeration over Z_q for pq <= 1000, d <= 2
    for sys in (forms.ap_system(3), forms.balog_system(2)):
        for q in (6, 10, 15, 21, 35):
            assert lf.local_factor_q(sys, q) == lf.local_factor_q_enumerate(sys, q)
    with pytest.raises(ValueError):
        lf.local_factor_q(AP4, 12)


def test_ap_k_closed_form_agrees():
    for k in range(2, 7):
        sysk = forms.ap_system(k)
        for p in small_primes(97):
            assert lf.ap_k_local_factor(k, p) == lf.local_factor(sysk, p), (k, p)
    assert lf.ap_k_local_factor(4, 3) == Fraction(9, 8)
    assert lf.ap_k_local_factor(4, 2) == 4
    for p in (2, 3, 5, 7):
        assert lf.ap_k_local_factor(2, p) == 1


def test_beta_p_decay_bounds():
    # beta_p = 1 + O(1/p); and O(1/p^2) for pairwise affinely independent systems
    fixtures = [AP4, forms.ap_system(3), forms.balog_system(2), forms.cube_system(3)]
    for sys in fixtures:
        data = lf.SystemLocalData(sys)
        sup1 = sup2 = 0.0
        for p in small_primes(10**4):
            b = float(data.generic_beta(p)) if p not in data.exceptional else float(
                lf.local_factor(sys, p)
            )
            sup1 = max(sup1, p * abs(b - 1))
            sup2 = max(sup2, p * p * abs(b - 1))
        assert sup1 <= 64, str(sys)
        assert sup2 <= 640, str(sys)


def test_singular_series_golden_constants():
    s1 = lf.singular_series(AP4, 10**6, min_prime=5)
    assert abs(0.75 * s1.truncated_product - 0.4764) <= 5e-5
    ex19 = forms.system([[1, 0], [0, 1], [1, 1], [1, 2]], [0, 0, -1, -2])
    s2 = lf.singular_series(ex19, 10**6, min_prime=3)
    assert abs(s2.truncated_product - 1.0481) <= 5e-5
    assert s1.tail_log_bound < 1e-4 and s2.tail_log_bound < 1e-4


def test_singular_series_vanishing():
    consec = forms.system([[1], [1]], [0, 1])
    ss = lf.singular_series(consec, 1000)
    assert ss.vanishing and ss.value == 0.0
    assert lf.local_factor(consec, 2) == 0


def test_alpha_p_vinogradov():
    n = 10**6 + 1       # odd, not divisible by 3
    a = [[1, 1, 1]]
    vin = forms.vinogradov_system(n)
    # both evaluation routes agree (parameterization vs the instantiated system)
    assert lf.alpha_p(a, [n], 2) == lf.local_factor(vin, 2) == 2
    assert lf.alpha_p(a, [n], 3) == lf.local_factor(vin, 3)
    # classical form: 1 + 1/(p-1)^3 for p coprime to N
    for p in (2, 3, 7, 11):
        if n % p:
            assert lf.alpha_p(a, [n], p) == 1 + Fraction(1, (p - 1) ** 3)


def test_alpha_p_truncated_limit_direct():
    # small-box evaluation of the defining limit approaches alpha_p
    n = 15
    a = [[1, 1, 1]]
    for p in (2, 3):
        exact = lf.alpha_p(a, [n], p)
        approx = lf.alpha_p_direct(a, [n], p, box=12)
        assert abs(float(approx) - float(exact)) < 0.4, (p, approx, exact)


def test_no_constraint_alpha():
    # s = 0: the density is 1; realised through a single free form
    one = forms.system([[1]])
    for p in (2, 3, 5):
        assert lf.local_factor(one, p) == 1


def test_exceptional_primes():
    twin = forms.system([[1], [1]], [0, 2])
    e = lf.exceptional_primes(twin)
    assert e.primes == [2]
    assert e.X == pytest.approx(2 ** -0.5)
    e4 = lf.exceptional_primes(AP4)
    assert set(e4.primes) <= {2, 3}
    # verified directly: dependence mod p for p <= 100
    for p in small_primes(100):
        dependent = False
        for i in range(AP4.t):
            for j in range(i + 1, AP4.t):
                a = list(AP4.forms[i].linear_coeffs) + [AP4.forms[i].constant]
                b = list(AP4.forms[j].linear_coeffs) + [AP4.forms[j].constant]
                if all(
                    (a[k] * b[l] - a[l] * b[k]) % p == 0
                    for k in range(3)
                    for l in range(3)
                ):
                    dependent = True
        assert dependent == (p in e4.primes), p
    ident = lf.exceptional_primes(forms.identity_system(3))
    assert ident.primes == [] and ident.X == 0
    with pytest.raises(ValueError, match="infinite"):
        lf.exceptional_primes(forms.system([[1], [2]], [0, 0]))


def test_local_profile_rows():
    prof = lf.local_profile(AP4, 13)
    rows = list(prof.rows())
    assert rows[0] == (2, 4, 1, 4.0)
    assert rows[1][:3] == (3, 9, 8)
