"""Prime-field arithmetic GF(p) and the integer helpers built on it.

Everything here is value-semantics over Python ints. Nothing is constant
time: timings depend on operand values, so this code must not be used
where side channels matter.
"""

from __future__ import annotations

import random
import secrets
from dataclasses import dataclass
from typing import Union

__all__ = [
    "ModulusMismatch",
    "NonInvertible",
    "Modulus",
    "PrimeModulus",
    "FieldElement",
    "fe_add",
    "fe_sub",
    "fe_neg",
    "fe_mul",
    "fe_inv",
    "fe_pow",
    "mod_reduce_integer",
    "inv_mod",
    "inv_mod_egcd",
    "inv_mod_fermat",
    "is_probable_prime",
    "parse_int",
    "to_hex",
    "random_scalar",
    "sqrt_mod",
]

# 32 random-base rounds bound the error of a composite passing by 4^-32 = 2^-64.
MR_ROUNDS = 32

_SMALL_PRIMES = (
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
    71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131, 137, 139, 149,
    151, 157, 163, 167, 173, 179, 181, 191, 193, 197, 199, 211, 223, 227, 229,
)


class ModulusMismatch(ValueError):
    pass


class NonInvertible(ZeroDivisionError):
    """Raised when inverting an element that shares a factor with the modulus."""


def is_probable_prime(n: int, rounds: int = MR_ROUNDS, rng=None) -> bool:
    """Miller-Rabin with trial division by small primes first.

    With the default ``rounds`` a composite survives with probability at
    most 2^-64.
    """
    if n < 2:
        return False
    for q in _SMALL_PRIMES:
        if n == q:
            return True
        if n % q == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    rng = rng or random.SystemRandom()
    for _ in range(rounds):
        a = rng.randrange(2, n - 1)
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def inv_mod_egcd(a: int, m: int) -> int:
    """Modular inverse by the iterative extended Euclidean algorithm."""
    a %= m
    if a == 0:
        raise NonInvertible(f"0 has no inverse modulo {m}")
    old_r, r = a, m
    old_s, s = 1, 0
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
    if old_r != 1:
        raise NonInvertible(f"{a} is not invertible modulo {m} (gcd {old_r})")
    return old_s % m


def inv_mod_fermat(a: int, p: int) -> int:
    """Inverse as a^(p-2) mod p; only valid for prime p."""
    a %= p
    if a == 0:
        raise NonInvertible(f"0 has no inverse modulo {p}")
    return pow(a, p - 2, p)


def inv_mod(a: int, m: int) -> int:
    # Hot path for the curve layer: CPython's built-in extended Euclid.
    try:
        return pow(a, -1, m)
    except ValueError:
        raise NonInvertible(f"{a % m} is not invertible modulo {m}") from None


def mod_reduce_integer(x: int, m: int) -> int:
    """Canonical residue of a signed integer in [0, m)."""
    if m <= 0:
        raise ValueError("modulus must be positive")
    return x % m


def parse_int(text: Union[str, int]) -> int:
    """Read an integer from lowercase/uppercase hex (optional 0x) or decimal.

    A bare string of decimal digits is read as decimal; anything with hex
    letters or a ``0x`` prefix is read as hex. Use an explicit prefix to
    force hex for all-digit values.
    """
    if isinstance(text, int):
        return text
    s = text.strip().lower().replace("_", "")
    neg = s.startswith("-")
    if neg:
        s = s[1:]
    if s.startswith("0x"):
        v = int(s[2:], 16)
    elif s.isdigit():
        v = int(s, 10)
    else:
        v = int(s, 16)
    return -v if neg else v


def to_hex(x: int) -> str:
    """Lowercase hex without prefix."""
    if x < 0:
        raise ValueError("negative values have no hex wire form")
    return format(x, "x")


@dataclass(frozen=True)
class Modulus:
    """Any modulus m > 1. Inversion may fail for composite m."""

    p: int

    def __post_init__(self):
        if self.p <= 1:
            raise ValueError("modulus must exceed 1")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    @property
    def bits(self) -> int:
        return self.p.bit_length()


@dataclass(frozen=True)
class PrimeModulus(Modulus):
    def __post_init__(self):
        if self.p <= 3 or not is_probable_prime(self.p):
            raise ValueError(f"{self.p} is not a prime greater than 3")


class FieldElement:
    """A canonical residue modulo a prime; immutable."""

    __slots__ = ("value", "modulus")

    def __init__(self, value: int, modulus: Modulus):
        object.__setattr__(self, "modulus", modulus)
        object.__setattr__(self, "value", value % modulus.p)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    @property
    def p(self) -> int:
        return self.modulus.p

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.modulus.p != self.modulus.p:
                raise ModulusMismatch(
                    f"cannot combine elements mod {self.p} and mod {other.p}")
            return other
        if isinstance(other, int):
            return FieldElement(other, self.modulus)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else fe_add(self, o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else fe_sub(self, o)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else fe_sub(o, self)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else fe_mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else fe_mul(self, fe_inv(o))

    def __neg__(self):
        return fe_neg(self)

    def __pow__(self, e: int):
        if e < 0:
            return fe_pow(fe_inv(self), -e)
        return fe_pow(self, e)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.value == other.value and self.modulus.p == other.modulus.p
        if isinstance(other, int):
            return self.value == other % self.modulus.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus.p))

    def __int__(self):
        return self.value

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"FieldElement(0x{self.value:x} mod 0x{self.modulus.p:x})"

    def inverse(self) -> "FieldElement":
        return fe_inv(self)

    def hex(self) -> str:
        return to_hex(self.value)


def _check(a: FieldElement, b: FieldElement) -> int:
    p = a.modulus.p
    if b.modulus.p != p:
        raise ModulusMismatch(f"cannot combine elements mod {p} and mod {b.modulus.p}")
    return p


def fe_add(a: FieldElement, b: FieldElement) -> FieldElement:
    p = _check(a, b)
    return FieldElement((a.value + b.value) % p, a.modulus)


def fe_sub(a: FieldElement, b: FieldElement) -> FieldElement:
    p = _check(a, b)
    return FieldElement((a.value - b.value) % p, a.modulus)


def fe_neg(a: FieldElement) -> FieldElement:
    return FieldElement(-a.value % a.modulus.p, a.modulus)


def fe_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    p = _check(a, b)
    return FieldElement(a.value * b.value % p, a.modulus)


def fe_inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse via extended Euclid; raises NonInvertible on zero."""
    return FieldElement(inv_mod_egcd(a.value, a.modulus.p), a.modulus)


def fe_pow(a: FieldElement, e: int) -> FieldElement:
    """Left-to-right square-and-multiply."""
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    p = a.modulus.p
    base = a.value
    acc = 1
    for bit in bin(e)[2:]:
        acc = acc * acc % p
        if bit == "1":
            acc = acc * base % p
    return FieldElement(acc, a.modulus)


def random_scalar(n: int, rng=None) -> int:
    """Uniform integer in [1, n-1] by rejection sampling on bitlen(n) bits."""
    bits = n.bit_length()
    getbits = rng.getrandbits if rng is not None else secrets.randbits
    while True:
        k = getbits(bits)
        if 1 <= k < n:
            return k


def sqrt_mod(a: int, p: int):
    """Square root mod an odd prime by Tonelli-Shanks, or None for non-residues."""
    a %= p
    if a == 0:
        return 0
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r
