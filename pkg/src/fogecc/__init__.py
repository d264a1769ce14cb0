"""ECDSA over M-221 and other prime-field curves, a fog-node authentication
simulator, and a timing/energy benchmark against a textbook RSA baseline.

Everything is pure Python and NOT constant-time. Use it to study and compare
the schemes, never to protect real keys.
"""

from .curve import (
    INFINITY,
    Affine,
    CurveParams,
    Montgomery,
    NotOnCurve,
    ShortWeierstrass,
    is_on_curve,
    point_add,
    point_double,
    point_neg,
    scalar_mul,
)
from .field import FieldElement, Modulus, PrimeModulus, is_probable_prime
from .registry import CURVE_NAMES, CURVES, TOY17, registry_get, validate_params
from .sigkit import (
    DeterministicNonce,
    FixedNonce,
    HashSpec,
    KeyPair,
    RandomNonce,
    Signature,
    keygen,
    recover_private_from_nonce_reuse,
    sign,
    verify,
)

__version__ = "0.1.0"

__all__ = [
    "INFINITY", "Affine", "CurveParams", "Montgomery", "NotOnCurve", "ShortWeierstrass",
    "is_on_curve", "point_add", "point_double", "point_neg", "scalar_mul",
    "FieldElement", "Modulus", "PrimeModulus", "is_probable_prime",
    "CURVE_NAMES", "CURVES", "TOY17", "registry_get", "validate_params",
    "DeterministicNonce", "FixedNonce", "HashSpec", "KeyPair", "RandomNonce", "Signature",
    "keygen", "recover_private_from_nonce_reuse", "sign", "verify",
]
