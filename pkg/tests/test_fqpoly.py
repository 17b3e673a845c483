import random
from fractions import Fraction

import pytest

from apnorm.fqpoly import (
    FqPoly,
    coeff_field,
    factor_poly,
    factor_xn_minus_1,
    mobius_q,
    phi_q,
    rho_qn,
    squarefree_decomposition,
    w_of_divisor,
    w_of_xn,
    xn_structure,
)
from apnorm.gf import build_field


F3 = coeff_field(3, 1)
F9 = coeff_field(3, 2)


def poly3(*ints):
    return FqPoly.from_ints(F3, ints)


def test_parse_and_str():
    assert FqPoly.parse("x+2", F3) == poly3(2, 1)
    assert FqPoly.parse("1", F3) == poly3(1)
    assert FqPoly.parse("x^4+2x^2+1", F3) == poly3(1, 0, 2, 0, 1)
    assert str(FqPoly.parse("x^2+2", F3)) == "x^2+2"


def test_arithmetic_roundtrip():
    rng = random.Random(1)
    for _ in range(40):
        a = FqPoly(F9, [F9.random_element(rng) for _ in range(rng.randrange(1, 8))])
        b = FqPoly(F9, [F9.random_element(rng) for _ in range(rng.randrange(1, 8))])
        if b.is_zero():
            continue
        q, r = divmod(a, b)
        assert q * b + r == a
        assert r.is_zero() or r.degree < b.degree


def test_gcd_of_known_product():
    a = poly3(2, 1)  # x + 2
    b = poly3(1, 1)  # x + 1
    c = poly3(1, 0, 1)  # x^2 + 1
    assert (a * b).gcd(a * c) == a.monic()


def test_squarefree_decomposition():
    # (x+1)^3 (x+2)^2 (x^2+1): multiplicity 3 exercises the char-p branch
    f = poly3(1, 1)
    g = poly3(2, 1)
    h = poly3(1, 0, 1)
    prod = f * f * f * g * g * h
    parts = squarefree_decomposition(prod)
    assert [(str(g), m) for g, m in parts] == [("x^2+1", 1), ("x+2", 2), ("x+1", 3)]


def test_factor_poly_reassembles():
    rng = random.Random(2)
    for field in (F3, F9):
        for _ in range(15):
            coeffs = [field.random_element(rng) for _ in range(rng.randrange(2, 9))]
            coeffs.append(field.one)
            f = FqPoly(field, coeffs)
            prod = FqPoly.one(field)
            for irred, m in factor_poly(f):
                assert irred.is_monic()
                for _ in range(m):
                    prod = prod * irred
            assert prod == f


def test_mobius_q_examples():
    assert mobius_q(poly3(2, 1) * poly3(1, 1)) == 1  # (x-1)(x+1), r = 2
    assert mobius_q(poly3(2, 1) * poly3(2, 1)) == 0
    assert mobius_q(poly3(1, 0, 1)) == -1  # irreducible over F_3
    with pytest.raises(ValueError):
        mobius_q(poly3(0, 2))  # not monic


def test_phi_q_examples():
    assert phi_q(FqPoly.one(F3)) == 1
    assert phi_q(poly3(2, 0, 1)) == 4  # x^2 - 1 over F_3
    assert phi_q(FqPoly.xn_minus_1(F3, 6)) == 324
    # multiplicativity on coprime parts
    assert phi_q(poly3(1, 1) * poly3(1, 0, 1)) == phi_q(poly3(1, 1)) * phi_q(poly3(1, 0, 1))


def test_xn_structure_examples():
    s = xn_structure(3, 1, 6)
    assert s.n_prime == 2 and s.p_power == 3
    assert s.degrees() == (1, 1)
    assert s.distinct_count == 2
    s = xn_structure(3, 1, 4)
    assert sorted(s.degrees()) == [1, 1, 2]
    assert s.w == 8
    s = xn_structure(3, 1, 11)
    assert sorted(s.degrees()) == [1, 5, 5]
    assert s.d == 5


def test_explicit_factors_match_cosets():
    s = xn_structure(3, 1, 6)
    factors = s.distinct_factors()
    assert [str(f) for f in factors] == ["x+1", "x+2"]
    s = xn_structure(3, 1, 4)
    assert sorted(f.degree for f in s.distinct_factors()) == [1, 1, 2]


@pytest.mark.parametrize("p,k", [(3, 1), (3, 2), (3, 3)])
def test_xn_reassembly(p, k):
    # product of factors^multiplicity must reproduce x^n - 1 exactly
    field = coeff_field(p, k)
    for n in range(1, 65):
        s = xn_structure(p, k, n)
        prod = FqPoly.one(field)
        for f in s.distinct_factors():
            term = FqPoly.one(field)
            for _ in range(s.p_power):
                term = term * f
            prod = prod * term
        assert prod == FqPoly.xn_minus_1(field, n), f"q={p**k}, n={n}"


def test_w_of_xn_and_bounds():
    import math

    # W(x^n-1) = 2^n iff n | q-1; W <= 2^(3n/4) when n does not divide q-1
    for k in (1, 2, 3, 4):
        q = 3**k
        for n in range(1, 41):
            w = w_of_xn(3, k, n)
            if (q - 1) % n == 0:
                assert w == 2**n
            else:
                assert w <= 2 ** (0.75 * n) + 1e-9
            assert w <= 2 ** ((n + math.gcd(n, q - 1)) / 2) + 1e-9


def test_w_of_divisor():
    assert w_of_divisor(FqPoly.xn_minus_1(F3, 6), 6) == 4
    assert w_of_divisor(FqPoly.one(F3), 6) == 1
    assert w_of_divisor(FqPoly.xn_minus_1(F3, 4), 4) == 8
    with pytest.raises(ValueError):
        w_of_divisor(poly3(1, 0, 1), 6)  # x^2+1 does not divide x^6-1


def test_rho_examples():
    rho, d = rho_qn(3, 1, 16)
    assert rho == Fraction(5, 16) and d == 4
    rho, d = rho_qn(3, 2, 16)  # n' = 2 gcd(q-1, n'): d = 2, rho = 1/2
    assert rho == Fraction(1, 2) and d == 2
    rho, d = rho_qn(3, 1, 11)
    assert rho == Fraction(1, 11) and d == 5


def test_rho_scale_invariance():
    # n rho(q,n) = n' rho(q,n') across p-power multiples
    rng = random.Random(3)
    count = 0
    while count < 50:
        k = rng.choice([1, 2])
        n = rng.randrange(2, 60)
        s = xn_structure(3, k, n)
        rho_n, _ = rho_qn(3, k, n)
        rho_np, _ = rho_qn(3, k, s.n_prime)
        assert n * rho_n == s.n_prime * rho_np
        count += 1


def test_low_degree_ratio_classification():
    # published classification of rho for q = 3^k, n' > 4, 3 coprime to n'
    for k in (1, 2):
        q = 3**k
        for n_prime in range(5, 101):
            if n_prime % 3 == 0:
                continue
            rho, d = rho_qn(3, k, n_prime)
            import math

            g = math.gcd(q - 1, n_prime)
            if n_prime == 2 * g:
                assert d == 2 and rho == Fraction(1, 2)
            elif n_prime == 4 * g and q % 4 == 1:
                assert d == 4 and rho == Fraction(3, 8)
            elif k == 1:
                if n_prime == 16:
                    assert rho == Fraction(5, 16)
                else:
                    assert rho <= Fraction(1, 4)
            else:
                assert rho <= Fraction(1, 3)


def test_eval_embedded():
    field = build_field(3, 1, 4)
    g = FqPoly.parse("x^2+2", F3)
    z = field.generator
    val = g.eval_embedded(z)
    assert val == z * z + field.from_int(2)
