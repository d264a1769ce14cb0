"""ECDSA over the registry curves.

Key generation, signing and verification, hash-to-integer conversion,
nonce policies, the raw signature codec, JSON key/signature files, and
private-key recovery from two signatures that share a nonce.

Montgomery curves are used exactly like Weierstrass ones: ``r`` is the
affine x-coordinate of ``k*G`` reduced mod ``n``.
"""

from __future__ import annotations

import hashlib
import hmac
import secrets
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence, Union

from .curve import (
    INFINITY,
    Affine,
    CurveParams,
    CurvePoint,
    is_on_curve,
    point_add,
    scalar_mul,
)
from .field import NonInvertible, inv_mod, parse_int, to_hex
from .registry import registry_get

__all__ = [
    "HashSpec",
    "SHA1",
    "SHA256",
    "SHA512",
    "KeyPair",
    "Signature",
    "RandomNonce",
    "DeterministicNonce",
    "FixedNonce",
    "EntropyError",
    "NonceExhausted",
    "RecoveryImpossible",
    "DecodeError",
    "keygen",
    "hash_to_int",
    "sign",
    "sign_digest",
    "verify",
    "verify_digest",
    "recover_nonce",
    "recover_private_from_nonce_reuse",
    "encode_signature",
    "decode_signature",
    "public_key_bytes",
]


class EntropyError(RuntimeError):
    pass


class NonceExhausted(RuntimeError):
    pass


class RecoveryImpossible(ValueError):
    pass


class DecodeError(ValueError):
    pass


# -- hashing -------------------------------------------------------------------

@dataclass(frozen=True)
class HashSpec:
    """Which digest to use. Truncation to bitlen(n) happens in hash_to_int."""

    algorithm: str = "sha512"

    def __post_init__(self):
        alg = self.algorithm.lower().replace("-", "")
        if alg not in ("sha1", "sha256", "sha512"):
            raise ValueError(f"unsupported hash {self.algorithm!r}")
        object.__setattr__(self, "algorithm", alg)

    def new(self, data: bytes = b""):
        return hashlib.new(self.algorithm, data)

    def digest(self, message: bytes) -> bytes:
        return hashlib.new(self.algorithm, message).digest()

    @property
    def digest_size(self) -> int:
        return hashlib.new(self.algorithm).digest_size


SHA1 = HashSpec("sha1")
SHA256 = HashSpec("sha256")
SHA512 = HashSpec("sha512")


def _bits2int(data: bytes, qlen: int) -> int:
    v = int.from_bytes(data, "big")
    extra = 8 * len(data) - qlen
    return v >> extra if extra > 0 else v


def hash_to_int(message: bytes, spec: HashSpec, n: int) -> int:
    """Leftmost bitlen(n) bits of H(message) as a big-endian integer.

    The result is not reduced mod n.
    """
    return _bits2int(spec.digest(message), n.bit_length())


# -- keys and signatures -------------------------------------------------------

class Signature(NamedTuple):
    r: int
    s: int


@dataclass(frozen=True)
class KeyPair:
    curve: CurveParams
    d: int
    Q: Affine

    @classmethod
    def from_private(cls, curve: CurveParams, d: int) -> "KeyPair":
        if not 1 <= d < curve.n:
            raise ValueError("private scalar out of range [1, n-1]")
        return cls(curve, d, scalar_mul(d, curve.G, curve, check=False))

    def to_dict(self) -> dict:
        return {"curve": self.curve.name, "d": to_hex(self.d),
                "qx": to_hex(self.Q.x), "qy": to_hex(self.Q.y)}

    def public_dict(self) -> dict:
        return public_to_dict(self.curve, self.Q)

    @classmethod
    def from_dict(cls, data: dict) -> "KeyPair":
        curve = registry_get(data["curve"])
        d = _wire_int(data["d"])
        kp = cls.from_private(curve, d)
        if "qx" in data and (kp.Q.x, kp.Q.y) != (_wire_int(data["qx"]), _wire_int(data["qy"])):
            raise ValueError("stored public point does not match d*G")
        return kp

    def __repr__(self):
        return f"KeyPair({self.curve.name}, Q=({self.Q.x:#x}, {self.Q.y:#x}))"


def _wire_int(v) -> int:
    if isinstance(v, int):
        return v
    s = str(v).strip().lower()
    return parse_int(s if s.startswith("0x") else "0x" + s)


def public_to_dict(curve: CurveParams, Q: Affine) -> dict:
    return {"curve": curve.name, "qx": to_hex(Q.x), "qy": to_hex(Q.y)}


def public_from_dict(data: dict):
    """(curve, Q) from a public-key document; Q must lie on the curve."""
    curve = registry_get(data["curve"])
    Q = Affine(_wire_int(data["qx"]), _wire_int(data["qy"]))
    if not is_on_curve(Q, curve):
        raise ValueError("public point is not on the named curve")
    return curve, Q


def signature_to_dict(sig: Signature, curve: CurveParams) -> dict:
    return {"curve": curve.name, "r": to_hex(sig.r), "s": to_hex(sig.s)}


def signature_from_dict(data: dict):
    return registry_get(data["curve"]), Signature(_wire_int(data["r"]), _wire_int(data["s"]))


def public_key_bytes(curve: CurveParams, Q: Affine) -> bytes:
    """Uncompressed SEC1-style encoding 04 || x || y."""
    size = curve.field_bytes
    return b"\x04" + Q.x.to_bytes(size, "big") + Q.y.to_bytes(size, "big")


def _draw(n: int, rng) -> int:
    bits = n.bit_length()
    while True:
        try:
            v = rng.getrandbits(bits) if rng is not None else secrets.randbits(bits)
        except (OSError, NotImplementedError) as exc:
            raise EntropyError("entropy source failed") from exc
        if 1 <= v < n:
            return v


def keygen(curve: CurveParams, rng=None) -> KeyPair:
    """Fresh key pair; d is uniform in [1, n-1] by rejection sampling.

    ``rng`` needs a ``getrandbits`` method; the default is the OS CSPRNG.
    """
    return KeyPair.from_private(curve, _draw(curve.n, rng))


# -- nonce policies ------------------------------------------------------------

class RandomNonce:
    """k drawn uniformly from [1, n-1] for every attempt."""

    def __init__(self, rng=None):
        self.rng = rng

    def nonces(self, d: int, h: int, curve: CurveParams, spec: HashSpec) -> Iterator[int]:
        while True:
            yield _draw(curve.n, self.rng)


class DeterministicNonce:
    """HMAC-DRBG derivation from (d, digest) in the manner of RFC 6979."""

    def nonces(self, d: int, h: int, curve: CurveParams, spec: HashSpec) -> Iterator[int]:
        q = curve.n
        qlen = q.bit_length()
        rolen = (qlen + 7) // 8
        alg = spec.algorithm
        hlen = spec.digest_size
        bx = d.to_bytes(rolen, "big") + (h % q).to_bytes(rolen, "big")
        V = b"\x01" * hlen
        K = b"\x00" * hlen
        K = hmac.new(K, V + b"\x00" + bx, alg).digest()
        V = hmac.new(K, V, alg).digest()
        K = hmac.new(K, V + b"\x01" + bx, alg).digest()
        V = hmac.new(K, V, alg).digest()
        while True:
            t = b""
            while len(t) < rolen:
                V = hmac.new(K, V, alg).digest()
                t += V
            k = _bits2int(t, qlen)
            if 1 <= k < q:
                yield k
            K = hmac.new(K, V + b"\x00", alg).digest()
            V = hmac.new(K, V, alg).digest()


class FixedNonce:
    """Caller-chosen nonces, tried in order. For tests and the reuse demo only."""

    def __init__(self, k: Union[int, Sequence[int]]):
        self.ks = (k,) if isinstance(k, int) else tuple(k)

    def nonces(self, d, h, curve, spec) -> Iterator[int]:
        for k in self.ks:
            if not 1 <= k < curve.n:
                raise ValueError(f"fixed nonce {k} outside [1, n-1]")
            yield k


NoncePolicy = Union[RandomNonce, DeterministicNonce, FixedNonce]

MAX_RETRIES = 128


# -- sign / verify -------------------------------------------------------------

def sign_digest(h: int, key: KeyPair, nonce: Optional[NoncePolicy] = None,
                spec: HashSpec = SHA512, max_retries: int = MAX_RETRIES) -> Signature:
    """Sign an already-hashed message given as the integer h."""
    curve = key.curve
    n = curve.n
    G = curve.G
    nonce = nonce if nonce is not None else DeterministicNonce()
    attempts = 0
    for k in nonce.nonces(key.d, h, curve, spec):
        if attempts >= max_retries:
            break
        attempts += 1
        R = scalar_mul(k, G, curve, check=False)
        if R is INFINITY:
            continue
        r = R.x % n
        if r == 0:
            continue
        s = inv_mod(k, n) * (h + key.d * r) % n
        if s == 0:
            continue
        return Signature(r, s)
    raise NonceExhausted(f"no usable nonce after {attempts} attempts")


def sign(message: bytes, key: KeyPair, spec: HashSpec = SHA512,
         nonce: Optional[NoncePolicy] = None) -> Signature:
    return sign_digest(hash_to_int(message, spec, key.curve.n), key, nonce, spec)


def verify_digest(h: int, sig, Q: CurvePoint, curve: CurveParams) -> bool:
    """Check a signature against the integer digest h. Never raises."""
    try:
        r, s = int(sig[0]), int(sig[1])
        n = curve.n
        if not (1 <= r < n and 1 <= s < n):
            return False
        if Q is INFINITY or not is_on_curve(Q, curve):
            return False
        w = inv_mod(s, n)
        u1 = h * w % n
        u2 = r * w % n
        X = point_add(scalar_mul(u1, curve.G, curve, check=False),
                      scalar_mul(u2, Q, curve, check=False), curve, check=False)
        if X is INFINITY:
            return False
        return X.x % n == r
    except (TypeError, ValueError, IndexError, ZeroDivisionError):
        return False


def verify(message: bytes, sig, Q: CurvePoint, curve: CurveParams,
           spec: HashSpec = SHA512) -> bool:
    try:
        h = hash_to_int(message, spec, curve.n)
    except TypeError:
        return False
    return verify_digest(h, sig, Q, curve)


# -- nonce reuse ---------------------------------------------------------------

def recover_nonce(sig1: Signature, sig2: Signature, h1: int, h2: int, curve: CurveParams) -> int:
    """The shared nonce k = (h1 - h2) / (s1 - s2) mod n."""
    n = curve.n
    if sig1.r % n != sig2.r % n:
        raise RecoveryImpossible("signatures do not share r, so the nonce differs")
    try:
        return (h1 - h2) * inv_mod(sig1.s - sig2.s, n) % n
    except NonInvertible:
        raise RecoveryImpossible("s1 - s2 is not invertible mod n") from None


def recover_private_from_nonce_reuse(sig1: Signature, sig2: Signature, h1: int, h2: int,
                                     curve: CurveParams) -> int:
    """Private scalar from two signatures made with the same nonce.

    Check the result against the victim's public key with ``d*G == Q``.
    """
    n = curve.n
    k = recover_nonce(sig1, sig2, h1, h2, curve)
    if k == 0:
        raise RecoveryImpossible("digests coincide mod n")
    try:
        return (sig1.s * k - h1) * inv_mod(sig1.r, n) % n
    except NonInvertible:
        raise RecoveryImpossible("r is not invertible mod n") from None


# -- raw codec -----------------------------------------------------------------

def encode_signature(sig: Signature, curve: CurveParams) -> bytes:
    size = curve.order_bytes
    n = curve.n
    if not (1 <= sig.r < n and 1 <= sig.s < n):
        raise ValueError("signature components out of range")
    return sig.r.to_bytes(size, "big") + sig.s.to_bytes(size, "big")


def decode_signature(blob: bytes, curve: CurveParams) -> Signature:
    size = curve.order_bytes
    if len(blob) != 2 * size:
        raise DecodeError(f"expected {2 * size} bytes, got {len(blob)}")
    r = int.from_bytes(blob[:size], "big")
    s = int.from_bytes(blob[size:], "big")
    n = curve.n
    if not 1 <= r < n:
        raise DecodeError("r outside [1, n-1]")
    if not 1 <= s < n:
        raise DecodeError("s outside [1, n-1]")
    return Signature(r, s)
