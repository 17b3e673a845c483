import random

import pytest

from apnorm.gf import FieldElement, build_field, find_irreducible


def naive_mul(field, a, b):
    """Independent oracle: schoolbook polynomial product then long division."""
    p = field.p
    conv = [0] * (2 * field.deg - 1)
    for i, x in enumerate(a.coords):
        for j, y in enumerate(b.coords):
            conv[i + j] = (conv[i + j] + x * y) % p
    mod = list(field.modulus)
    for i in range(len(conv) - 1, field.deg - 1, -1):
        c = conv[i]
        if c:
            for j in range(len(mod)):
                conv[i - field.deg + j] = (conv[i - field.deg + j] - c * mod[j]) % p
    return FieldElement(field, tuple(conv[: field.deg]))


def test_find_irreducible_smallest():
    assert find_irreducible(3, 1) == (0, 1)
    assert find_irreducible(3, 2) == (1, 0, 1)  # x^2 + 1


def test_build_f9(f9):
    assert f9.order == 9
    assert f9.modulus == (1, 0, 1)
    assert f9.generator.mult_order() == 8


def test_build_f3():
    f3 = build_field(3, 1, 1)
    assert f3.order == 3
    assert f3.generator.key() == 2


def test_build_f729_tower(f729_tower):
    field = f729_tower
    assert field.order == 729 and field.q == 9
    fixed = [z for z in field.all_elements() if field.pow(z, 9) == z]
    assert len(fixed) == 9
    embedded = {z.key() for z in field.subfield_elements()}
    assert embedded == {z.key() for z in fixed}


def test_f9_arithmetic(f9):
    x = f9.from_key(3)  # the class of x
    one = f9.one
    assert ((x + one) * (x + one)).coords == (0, 2)  # (x+1)^2 = 2x mod x^2+1
    alpha = f9.from_key(5)
    assert alpha + f9.zero == alpha
    assert f9.pow(x + one, 8) == one


def test_mul_matches_naive_oracle():
    rng = random.Random(2)
    for p, k, n in [(3, 1, 4), (3, 2, 3), (5, 1, 3), (3, 1, 10)]:
        field = build_field(p, k, n)
        for _ in range(60):
            a = field.random_element(rng)
            b = field.random_element(rng)
            assert a * b == naive_mul(field, a, b)


def test_inverse_and_division(f81):
    rng = random.Random(3)
    for _ in range(40):
        a = f81.random_element(rng)
        if a.is_zero():
            continue
        assert a * a.inverse() == f81.one
    with pytest.raises(ZeroDivisionError):
        f81.zero.inverse()


def test_frobenius(f9):
    x = f9.from_key(3)
    assert x.frobenius(0) == x
    assert x.frobenius(1).coords == (0, 2)  # x^3 = -x mod x^2+1
    rng = random.Random(4)
    field = build_field(3, 2, 3)
    for _ in range(20):
        a = field.random_element(rng)
        assert a.frobenius(1).frobenius(field.n - 1) == a
        assert a.frobenius(1) == field.pow(a, field.q)


def test_norm_examples(f81):
    assert f81.zero.norm() == f81.zero
    gamma = f81.generator
    two = f81.from_int(2)
    assert gamma.norm() == two  # the only primitive element of F_3
    rng = random.Random(5)
    for _ in range(100):
        a, b = f81.random_element(rng), f81.random_element(rng)
        assert (a * b).norm() == a.norm() * b.norm()


def test_norm_is_conjugate_product(f27):
    for z in f27.all_elements():
        prod = f27.one
        for i in range(f27.n):
            prod = prod * z.frobenius(i)
        assert z.norm() == prod if not z.is_zero() else z.norm().is_zero()


def test_trace(f9, f81):
    assert f81.zero.trace() == f81.zero
    x = f9.from_key(3)
    assert x.trace() == f9.zero  # x + x^3 = x + 2x = 0
    rng = random.Random(6)
    for _ in range(100):
        a, b = f81.random_element(rng), f81.random_element(rng)
        c = random.Random(7).randrange(3)
        assert (a + b).trace() == a.trace() + b.trace()
        assert (a * f81.from_int(c)).trace() == a.trace() * f81.from_int(c)


def test_norm_trace_frobenius_invariant(f81):
    for z in f81.all_elements():
        zq = z.frobenius(1)
        assert zq.norm() == z.norm()
        assert zq.trace() == z.trace()


def test_mult_order(f9):
    assert f9.one.mult_order() == 1
    x_plus_1 = f9.from_key(4)
    # oracle: enumerate powers
    cur, order = x_plus_1, 1
    while cur != f9.one:
        cur = cur * x_plus_1
        order += 1
    assert order == 8
    assert x_plus_1.mult_order() == 8
    assert f9.generator.mult_order() == f9.order - 1


def test_is_primitive(f9):
    assert f9.from_key(4).is_primitive()  # x + 1
    assert not f9.from_key(3).is_primitive()  # x has order 4
    assert not f9.zero.is_primitive()
    count = sum(1 for z in f9.all_elements() if z.is_primitive())
    assert count == 4  # phi(8)


def test_subfield_embed_project(f81_over_f9):
    field = f81_over_f9
    fq = field.canonical_subfield
    for c in fq.all_elements():
        z = field.embed_subfield(c)
        assert field.in_subfield(z)
        assert field.project_subfield(z) == c
    outside = field.generator
    assert not field.in_subfield(outside)
    with pytest.raises(ValueError):
        field.project_subfield(outside)


def test_subfield_embedding_is_field_hom(f81_over_f9):
    field = f81_over_f9
    fq = field.canonical_subfield
    rng = random.Random(8)
    for _ in range(50):
        a, b = fq.random_element(rng), fq.random_element(rng)
        assert field.embed_subfield(a * b) == field.embed_subfield(a) * field.embed_subfield(b)
        assert field.embed_subfield(a + b) == field.embed_subfield(a) + field.embed_subfield(b)


def test_key_roundtrip(f81):
    rng = random.Random(9)
    for _ in range(30):
        key = rng.randrange(f81.order)
        assert f81.from_key(key).key() == key


def test_exp_dlog_tables(f81):
    dlog, exp_keys = f81.ensure_exp_tables()
    g = f81.generator
    assert f81.from_key(int(exp_keys[5])) == f81.pow(g, 5)
    rng = random.Random(10)
    for _ in range(20):
        z = f81.random_element(rng)
        if z.is_zero():
            continue
        assert f81.pow(g, f81.dlog(z)) == z


def test_descriptor_json(f81):
    data = f81.to_json()
    assert data["p"] == 3 and data["k"] == 1 and data["n"] == 4
    assert data["modulus"] == list(f81.modulus)
    rebuilt = build_field(data["p"], data["k"], data["n"], data["seed"])
    assert rebuilt is f81  # cached construction is canonical


def test_primitive_normal_element_exists(f81):
    # the classical existence statement, checked by brute force
    found = False
    for z in f81.all_elements():
        if z.is_primitive() and z.is_normal():
            found = True
            break
    assert found
