"""Textbook RSA signatures, kept only as a timing baseline.

Signing is hash-then-exponentiate with no padding: s = H(m)^d mod N.
This is NOT a secure signature scheme and exists so the benchmark can
compare raw RSA cost against ECDSA.
"""

from __future__ import annotations

import math
import secrets
from dataclasses import dataclass
from typing import Optional

from .field import inv_mod_egcd, is_probable_prime, parse_int, to_hex
from .sigkit import SHA512, HashSpec

__all__ = [
    "RsaKeyPair",
    "RsaPublicKey",
    "random_prime",
    "rsa_keygen",
    "rsa_key_from_primes",
    "rsa_sign",
    "rsa_sign_digest",
    "rsa_verify",
    "rsa_verify_digest",
    "SUPPORTED_BITS",
]

SUPPORTED_BITS = (1024, 2048, 3072)
DEFAULT_E = 65537


@dataclass(frozen=True)
class RsaPublicKey:
    N: int
    e: int

    @property
    def bits(self) -> int:
        return self.N.bit_length()

    def to_dict(self) -> dict:
        return {"n": to_hex(self.N), "e": to_hex(self.e)}


@dataclass(frozen=True)
class RsaKeyPair:
    N: int
    e: int
    d: int
    bits: int

    @property
    def public(self) -> RsaPublicKey:
        return RsaPublicKey(self.N, self.e)

    def to_dict(self) -> dict:
        return {"n": to_hex(self.N), "e": to_hex(self.e), "d": to_hex(self.d)}

    @classmethod
    def from_dict(cls, data: dict) -> "RsaKeyPair":
        N = _hex(data["n"])
        return cls(N, _hex(data["e"]), _hex(data["d"]), N.bit_length())


def _hex(v) -> int:
    if isinstance(v, int):
        return v
    s = str(v).strip().lower()
    return parse_int(s if s.startswith("0x") else "0x" + s)


def random_prime(bits: int, rng=None) -> int:
    """Probable prime with exactly ``bits`` bits and the top two bits set.

    Setting the two top bits makes the product of two such primes exactly
    2*bits long.
    """
    getbits = rng.getrandbits if rng is not None else secrets.randbits
    top = 3 << (bits - 2)
    while True:
        cand = getbits(bits) | top | 1
        if is_probable_prime(cand):
            return cand


def rsa_key_from_primes(p: int, q: int, e: int = DEFAULT_E) -> RsaKeyPair:
    lam = math.lcm(p - 1, q - 1)
    if math.gcd(e, lam) != 1:
        raise ValueError("e is not coprime to lcm(p-1, q-1)")
    N = p * q
    # textbook exponent mod phi(N); it is also an inverse of e mod lambda
    return RsaKeyPair(N, e, inv_mod_egcd(e, (p - 1) * (q - 1)), N.bit_length())


def rsa_keygen(bits: int = 2048, rng=None, e: int = DEFAULT_E,
               allow_small: bool = False) -> RsaKeyPair:
    """Two bits/2-bit probable primes; resampled until gcd(e, lambda) = 1.

    Sizes outside 1024/2048/3072 need ``allow_small=True`` (test mode).
    """
    if bits not in SUPPORTED_BITS and not allow_small:
        raise ValueError(f"bits must be one of {SUPPORTED_BITS}")
    if bits < 16 or bits % 2:
        raise ValueError("bits must be even and at least 16")
    half = bits // 2
    while True:
        p = random_prime(half, rng)
        q = random_prime(half, rng)
        if p == q:
            continue
        try:
            return rsa_key_from_primes(p, q, e)
        except ValueError:
            continue


def rsa_sign_digest(h: int, key: RsaKeyPair) -> int:
    if not 0 <= h < key.N:
        raise ValueError("digest does not fit under the modulus")
    return pow(h, key.d, key.N)


def rsa_verify_digest(h: int, s: int, pub) -> bool:
    N, e = pub.N, pub.e
    if not 0 < s < N:
        return False
    return pow(s, e, N) == h % N


def _digest(message: bytes, spec: HashSpec) -> int:
    return int.from_bytes(spec.digest(message), "big")


def rsa_sign(message: bytes, key: RsaKeyPair, spec: HashSpec = SHA512) -> int:
    return rsa_sign_digest(_digest(message, spec), key)


def rsa_verify(message: bytes, s: int, pub, spec: HashSpec = SHA512) -> bool:
    h = _digest(message, spec)
    if h >= pub.N:
        return False
    return rsa_verify_digest(h, s, pub)
