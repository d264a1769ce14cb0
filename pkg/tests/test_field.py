import random

import pytest
from hypothesis import given, strategies as st

from fogecc.field import (
    FieldElement,
    Modulus,
    ModulusMismatch,
    NonInvertible,
    PrimeModulus,
    fe_add,
    fe_inv,
    fe_mul,
    fe_neg,
    fe_pow,
    fe_sub,
    inv_mod,
    inv_mod_egcd,
    inv_mod_fermat,
    is_probable_prime,
    mod_reduce_integer,
    parse_int,
    random_scalar,
    sqrt_mod,
    to_hex,
)
from fogecc.registry import registry_get

F17 = PrimeModulus(17)
F19 = PrimeModulus(19)
P221 = registry_get("m-221").p
P256 = registry_get("secp256r1").p


def test_add_examples():
    assert fe_add(F17(0), F17(0)) == 0
    assert fe_add(F17(16), F17(5)) == 4
    M = PrimeModulus(P221)
    assert fe_add(M(P221 - 1), M(1)) == 0


def test_sub_neg_mul_examples():
    assert fe_mul(F17(5), F17(7)) == 1
    assert fe_neg(PrimeModulus(P221)(0)) == 0
    assert fe_sub(F17(3), F17(10)) == 10


def test_inverse_examples():
    assert fe_inv(F19(5)) == 4
    assert fe_inv(PrimeModulus(P221)(1)) == 1


def test_inverse_of_zero_raises():
    with pytest.raises(NonInvertible):
        fe_inv(F17(0))
    with pytest.raises(ZeroDivisionError):
        F17(3) / F17(0)


def test_inverse_roundtrip_secp256r1(rng):
    M = PrimeModulus(P256)
    for _ in range(1000):
        a = M(rng.randrange(1, P256))
        assert a * fe_inv(a) == 1


def test_pow_examples():
    assert fe_pow(F17(2), 4) == 16
    M = PrimeModulus(P221)
    assert fe_pow(M(123456789), P221 - 1) == 1
    assert fe_pow(Modulus(3233)(65), 17) == 2790
    assert fe_pow(F17(9), 0) == 1
    with pytest.raises(ValueError):
        fe_pow(F17(2), -1)


def test_mod_reduce_examples():
    assert mod_reduce_integer(-10, 19) == 9
    assert mod_reduce_integer(110, 19) == 15
    assert mod_reduce_integer(0, P221) == 0


def test_mixed_moduli_rejected():
    with pytest.raises(ModulusMismatch):
        F17(1) + F19(1)
    with pytest.raises(ModulusMismatch):
        fe_mul(F17(2), F19(3))


def test_elements_are_immutable_and_canonical():
    a = F17(40)
    assert a.value == 6
    with pytest.raises(AttributeError):
        a.value = 3
    assert F17(-1) == 16
    assert hash(F17(3)) == hash(F17(20))


def test_operator_sugar():
    a, b = F17(5), F17(7)
    assert a + b == 12 and a - b == 15 and a * b == 1 and a / b == 25 % 17
    assert 3 - a == 15 and 2 * a == 10 and a ** -1 == 7
    assert -a == 12 and int(a) == 5 and not F17(0)


def test_prime_modulus_rejects_composites():
    for bad in (1, 3, 15, 3233, 561):
        with pytest.raises(ValueError):
            PrimeModulus(bad)


def _naive_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n ** 0.5) + 1))


def test_miller_rabin_small_range():
    for n in range(3000):
        assert is_probable_prime(n) == _naive_prime(n), n


def test_miller_rabin_hard_composites():
    # Carmichael numbers and a strong pseudoprime to several bases
    for n in (561, 1105, 1729, 2465, 41041, 3215031751, 3825123056546413051):
        assert not is_probable_prime(n)
    assert is_probable_prime(2 ** 127 - 1)
    assert not is_probable_prime((2 ** 61 - 1) * (2 ** 89 - 1))


def test_egcd_and_fermat_agree(rng):
    for p in (17, 19, P221, P256):
        for _ in range(200):
            a = rng.randrange(1, p)
            assert inv_mod_egcd(a, p) == inv_mod_fermat(a, p) == inv_mod(a, p)


def test_egcd_composite_modulus():
    assert inv_mod_egcd(17, 3120) == 2753
    with pytest.raises(NonInvertible):
        inv_mod_egcd(6, 9)
    with pytest.raises(NonInvertible):
        inv_mod(6, 9)


@given(st.integers(min_value=0, max_value=P256 - 1), st.integers(min_value=0, max_value=P256 - 1),
       st.integers(min_value=0, max_value=P256 - 1))
def test_field_axioms(a, b, c):
    M = PrimeModulus(P256)
    A, B, C = M(a), M(b), M(c)
    assert A + B == B + A and A * B == B * A
    assert (A + B) + C == A + (B + C)
    assert (A * B) * C == A * (B * C)
    assert A * (B + C) == A * B + A * C
    assert A - A == 0 and A + (-A) == 0
    if a:
        assert A * A.inverse() == 1


@given(st.integers(min_value=1, max_value=2 ** 64), st.integers(min_value=0, max_value=500))
def test_pow_matches_builtin(a, e):
    M = PrimeModulus(P221)
    assert fe_pow(M(a), e).value == pow(a, e, P221)


@given(st.integers(min_value=-(2 ** 300), max_value=2 ** 300), st.integers(min_value=1, max_value=2 ** 256))
def test_reduce_is_canonical(x, m):
    r = mod_reduce_integer(x, m)
    assert 0 <= r < m and (x - r) % m == 0


def test_sqrt_mod():
    for p in (17, 19, 41, 97, 2 ** 255 - 19):
        rng = random.Random(p)
        for _ in range(50):
            a = rng.randrange(p)
            r = sqrt_mod(a, p)
            legendre = pow(a, (p - 1) // 2, p) if a else 0
            if legendre in (0, 1):
                assert r is not None and r * r % p == a
            else:
                assert r is None


def test_parse_and_hex():
    assert parse_int("ff") == 255
    assert parse_int("0xFF") == 255
    assert parse_int("255") == 255
    assert parse_int(" 0x1_0 ") == 16
    assert parse_int(7) == 7
    assert to_hex(255) == "ff"
    assert FieldElement(255, Modulus(257)).hex() == "ff"
    with pytest.raises(ValueError):
        to_hex(-1)


def test_random_scalar_range(rng):
    for _ in range(500):
        k = random_scalar(19, rng)
        assert 1 <= k < 19
