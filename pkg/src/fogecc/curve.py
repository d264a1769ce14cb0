"""Curve models, the affine group law, and scalar multiplication.

Two models are supported:

* short Weierstrass ``y^2 = x^3 + a*x + b``
* Montgomery ``B*y^2 = x^3 + A*x^2 + x``

Points are plain ``Affine(x, y)`` tuples of canonical ints, or the
``INFINITY`` sentinel. ``point_add`` / ``point_double`` are the textbook
affine chord-tangent formulas. ``scalar_mul`` is the fast path: Jacobian
double-and-add on Weierstrass curves and an x-only Montgomery ladder with
y-recovery on Montgomery curves. ``scalar_mul_affine`` keeps the plain
affine double-and-add around as a reference.

None of this is constant time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import NamedTuple, Optional, Union

from .field import (
    FieldElement,
    NonInvertible,
    PrimeModulus,
    inv_mod,
    is_probable_prime,
    sqrt_mod,
)

__all__ = [
    "Affine",
    "INFINITY",
    "CurvePoint",
    "ShortWeierstrass",
    "Montgomery",
    "CurveParams",
    "NotOnCurve",
    "point_neg",
    "point_add",
    "point_double",
    "scalar_mul",
    "scalar_mul_affine",
    "montgomery_ladder_x",
    "is_on_curve",
    "lift_x",
]


class NotOnCurve(ValueError):
    pass


class _Infinity:
    """The point at infinity (group identity)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


class Affine(NamedTuple):
    x: int
    y: int


CurvePoint = Union[Affine, _Infinity]


@dataclass(frozen=True)
class ShortWeierstrass:
    a: int
    b: int

    kind = "weierstrass"


@dataclass(frozen=True)
class Montgomery:
    A: int
    B: int

    kind = "montgomery"


@dataclass(frozen=True)
class CurveParams:
    """Domain parameters of a named curve.

    Coefficients and coordinates are stored reduced mod ``p``. ``n`` is the
    order of ``G`` and ``h`` the cofactor.
    """

    name: str
    p: int
    model: Union[ShortWeierstrass, Montgomery]
    G: Affine
    n: int
    h: int
    aliases: tuple = dc_field(default=(), compare=False)

    def __post_init__(self):
        p = self.p
        if isinstance(self.model, ShortWeierstrass):
            model = ShortWeierstrass(self.model.a % p, self.model.b % p)
        else:
            model = Montgomery(self.model.A % p, self.model.B % p)
        object.__setattr__(self, "model", model)
        object.__setattr__(self, "G", Affine(self.G[0] % p, self.G[1] % p))

    @property
    def is_montgomery(self) -> bool:
        return isinstance(self.model, Montgomery)

    @cached_property
    def modulus(self) -> PrimeModulus:
        return PrimeModulus(self.p)

    def fe(self, value: int) -> FieldElement:
        return FieldElement(value, self.modulus)

    @property
    def bits(self) -> int:
        """Field size in bits, the usual "key size" of the curve."""
        return self.p.bit_length()

    @property
    def order_bytes(self) -> int:
        return (self.n.bit_length() + 7) // 8

    @property
    def field_bytes(self) -> int:
        return (self.p.bit_length() + 7) // 8

    @cached_property
    def _a24(self) -> int:
        # (A - 2) / 4, the ladder constant in the RFC 7748 formulation
        return (self.model.A - 2) * inv_mod(4, self.p) % self.p

    def replace(self, **changes) -> "CurveParams":
        """Copy with some fields swapped; used to build broken variants in tests."""
        from dataclasses import replace
        return replace(self, **changes)

    def __repr__(self):
        return f"CurveParams({self.name!r}, {self.bits}-bit {self.model.kind})"


# -- membership --------------------------------------------------------------

def _rhs(x: int, c: CurveParams) -> int:
    p = c.p
    m = c.model
    if isinstance(m, ShortWeierstrass):
        return (x * x * x + m.a * x + m.b) % p
    return (x * x * x + m.A * x * x + x) % p


def is_on_curve(P: CurvePoint, c: CurveParams) -> bool:
    if P is INFINITY:
        return True
    x, y = P
    p = c.p
    if not (0 <= x < p and 0 <= y < p):
        return False
    lhs = y * y % p
    if isinstance(c.model, Montgomery):
        lhs = lhs * c.model.B % p
    return lhs == _rhs(x, c)


def _require(P: CurvePoint, c: CurveParams) -> None:
    if not is_on_curve(P, c):
        raise NotOnCurve(f"{P} is not on {c.name}")


def lift_x(x: int, c: CurveParams) -> Optional[Affine]:
    """Some point with the given x-coordinate, or None if there is none."""
    p = c.p
    rhs = _rhs(x, c)
    if isinstance(c.model, Montgomery):
        rhs = rhs * inv_mod(c.model.B, p) % p
    y = sqrt_mod(rhs, p)
    if y is None:
        return None
    return Affine(x % p, y)


# -- affine group law --------------------------------------------------------

def point_neg(P: CurvePoint, c: CurveParams) -> CurvePoint:
    if P is INFINITY:
        return INFINITY
    return Affine(P.x, -P.y % c.p)


def _double(P: CurvePoint, c: CurveParams) -> CurvePoint:
    if P is INFINITY or P.y == 0:
        return INFINITY
    p = c.p
    x, y = P
    m = c.model
    if isinstance(m, ShortWeierstrass):
        lam = (3 * x * x + m.a) * inv_mod(2 * y, p) % p
        x3 = (lam * lam - 2 * x) % p
    else:
        lam = (3 * x * x + 2 * m.A * x + 1) * inv_mod(2 * m.B * y, p) % p
        x3 = (m.B * lam * lam - m.A - 2 * x) % p
    return Affine(x3, (lam * (x - x3) - y) % p)


def _add(P: CurvePoint, Q: CurvePoint, c: CurveParams) -> CurvePoint:
    if P is INFINITY:
        return Q
    if Q is INFINITY:
        return P
    p = c.p
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return INFINITY
        return _double(P, c)
    lam = (y2 - y1) * inv_mod(x2 - x1, p) % p
    m = c.model
    if isinstance(m, ShortWeierstrass):
        x3 = (lam * lam - x1 - x2) % p
    else:
        x3 = (m.B * lam * lam - m.A - x1 - x2) % p
    return Affine(x3, (lam * (x1 - x3) - y1) % p)


def point_add(P: CurvePoint, Q: CurvePoint, c: CurveParams, check: bool = True) -> CurvePoint:
    """Chord-tangent sum P + Q; doubling, inverses and identity are handled."""
    if check:
        _require(P, c)
        _require(Q, c)
    return _add(P, Q, c)


def point_double(P: CurvePoint, c: CurveParams, check: bool = True) -> CurvePoint:
    if check:
        _require(P, c)
    return _double(P, c)


def scalar_mul_affine(k: int, P: CurvePoint, c: CurveParams, check: bool = True) -> CurvePoint:
    """Left-to-right double-and-add with affine formulas (reference path)."""
    if check:
        _require(P, c)
    if k < 0:
        raise ValueError("scalar must be nonnegative")
    R = INFINITY
    for bit in bin(k)[2:] if k else "":
        R = _double(R, c)
        if bit == "1":
            R = _add(R, P, c)
    return R


# -- fast paths ----------------------------------------------------------------

def _jacobian_mul(k: int, P: Affine, c: CurveParams) -> CurvePoint:
    p = c.p
    a = c.model.a
    px, py = P
    X, Y, Z = 1, 1, 0
    for bit in bin(k)[2:]:
        if Z:
            if Y == 0:
                X, Y, Z = 1, 1, 0
            else:
                YY = Y * Y % p
                S = 4 * X * YY % p
                ZZ = Z * Z % p
                M = (3 * X * X + a * ZZ * ZZ) % p
                X3 = (M * M - 2 * S) % p
                Z = 2 * Y * Z % p
                Y = (M * (S - X3) - 8 * YY * YY) % p
                X = X3
        if bit == "1":
            if Z == 0:
                X, Y, Z = px, py, 1
                continue
            # mixed addition with the affine input
            Z1Z1 = Z * Z % p
            H = (px * Z1Z1 - X) % p
            r = (py * Z * Z1Z1 - Y) % p
            if H == 0:
                if r == 0:
                    YY = Y * Y % p
                    S = 4 * X * YY % p
                    M = (3 * X * X + a * Z1Z1 * Z1Z1) % p
                    X3 = (M * M - 2 * S) % p
                    Z = 2 * Y * Z % p
                    Y = (M * (S - X3) - 8 * YY * YY) % p
                    X = X3
                else:
                    X, Y, Z = 1, 1, 0
                continue
            HH = H * H % p
            HHH = H * HH % p
            V = X * HH % p
            X3 = (r * r - HHH - 2 * V) % p
            Y = (r * (V - X3) - Y * HHH) % p
            Z = Z * H % p
            X = X3
    if Z == 0:
        return INFINITY
    zi = inv_mod(Z, p)
    zi2 = zi * zi % p
    return Affine(X * zi2 % p, Y * zi2 * zi % p)


def _ladder(k: int, x1: int, c: CurveParams):
    """Projective x-only ladder; returns (X0, Z0, X1, Z1) for kP and (k+1)P."""
    p = c.p
    a24 = c._a24
    X2, Z2 = 1, 0
    X3, Z3 = x1, 1
    swap = 0
    for t in range(k.bit_length() - 1, -1, -1):
        bit = (k >> t) & 1
        if bit != swap:
            X2, X3 = X3, X2
            Z2, Z3 = Z3, Z2
            swap = bit
        A = X2 + Z2
        AA = A * A % p
        B = X2 - Z2
        BB = B * B % p
        E = AA - BB
        C = X3 + Z3
        D = X3 - Z3
        DA = D * A % p
        CB = C * B % p
        t0 = DA + CB
        X3 = t0 * t0 % p
        t1 = DA - CB
        Z3 = x1 * (t1 * t1 % p) % p
        X2 = AA * BB % p
        Z2 = E * (AA + a24 * E) % p
    if swap:
        X2, X3 = X3, X2
        Z2, Z3 = Z3, Z2
    return X2, Z2, X3, Z3


def montgomery_ladder_x(k: int, x: int, c: CurveParams) -> Optional[int]:
    """x-coordinate of k*P from x(P) alone; None when k*P is infinity."""
    if not c.is_montgomery:
        raise TypeError("the x-only ladder needs a Montgomery curve")
    if k < 0:
        raise ValueError("scalar must be nonnegative")
    x %= c.p
    if x == 0:
        # (0, 0) has order 2 and zeroes the differential step
        return None if k % 2 == 0 else 0
    X, Z, _, _ = _ladder(k, x, c)
    if Z == 0:
        return None
    return X * inv_mod(Z, c.p) % c.p


def _montgomery_mul(k: int, P: Affine, c: CurveParams) -> CurvePoint:
    p = c.p
    x, y = P
    if x == 0 or y == 0:
        # 2-torsion input breaks the differential formulas
        return scalar_mul_affine(k, P, c, check=False)
    X1, Z1, X2, Z2 = _ladder(k, x, c)
    if Z1 == 0:
        return INFINITY
    if Z2 == 0:
        # (k+1)P = O, so kP = -P
        return Affine(x, -y % p)
    A, B = c.model.A, c.model.B
    xq = X1 * inv_mod(Z1, p) % p
    xr = X2 * inv_mod(Z2, p) % p
    # Okeya-Sakurai y-recovery from x(kP), x((k+1)P) and P
    num = ((xq * x + 1) * (xq + x + 2 * A) - 2 * A - (xq - x) ** 2 * xr) % p
    yq = num * inv_mod(2 * B * y, p) % p
    return Affine(xq, yq)


def scalar_mul(k: int, P: CurvePoint, c: CurveParams, check: bool = True) -> CurvePoint:
    """k*P for a literal nonnegative k (no reduction mod n)."""
    if check:
        _require(P, c)
    if k < 0:
        raise ValueError("scalar must be nonnegative")
    if k == 0 or P is INFINITY:
        return INFINITY
    if c.is_montgomery:
        return _montgomery_mul(k, P, c)
    return _jacobian_mul(k, P, c)
