"""The five built-in curves, parameter validation, and JSON import/export.

Parameters are taken from the defining documents of each curve (Aranha et
al. for M-221 and M-511, RFC 5639 for brainpoolP256t1, SEC 2 for
secp256r1, Bernstein for Curve25519) and self-certified by
``validate_params``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Dict, List

from .curve import (
    INFINITY,
    Affine,
    CurveParams,
    Montgomery,
    NotOnCurve,
    ShortWeierstrass,
    is_on_curve,
    lift_x,
    scalar_mul,
)
from .field import is_probable_prime, parse_int, to_hex

__all__ = [
    "CURVES",
    "CURVE_NAMES",
    "TOY17",
    "CurveNotFound",
    "ValidationReport",
    "registry_get",
    "validate_params",
    "curve_to_dict",
    "curve_from_dict",
    "curve_to_json",
    "curve_from_json",
]


class CurveNotFound(KeyError):
    def __str__(self):
        return self.args[0]


def _h(*chunks: str) -> int:
    return int("".join(chunks), 16)


M221 = CurveParams(
    name="m-221",
    p=2**221 - 3,
    model=Montgomery(A=0x1C93A, B=1),
    G=Affine(4, _h("0f7acdd2a4939571d1cef14eca37c228e61dbff10707dc6c08c5056d")),
    n=421249166674228746791672110734682167926895081980396304944335052891,
    h=8,
    aliases=("m221", "curve2213"),
)

M511 = CurveParams(
    name="m-511",
    p=2**511 - 187,
    model=Montgomery(A=0x81806, B=1),
    G=Affine(5, _h(
        "2fbdc0ad8530803d28fdbad354bb488d32399ac1cf8f6e01ee3f96389b90c809",
        "422b9429e8a43dbf49308ac4455940abe9f1dbca542093a895e30a64af056fa5",
    )),
    n=_h(
        "1000000000000000000000000000000000000000000000000000000000000000",
        "17b5feff30c7f5677ab2aeebd13779a2ac125042a6aa10bfa54c15bab76baf1b",
    ),
    h=8,
    aliases=("m511", "curve511187"),
)

BRAINPOOL_P256T1 = CurveParams(
    name="brainpoolp256t1",
    p=_h("a9fb57dba1eea9bc3e660a909d838d726e3bf623d52620282013481d1f6e5377"),
    model=ShortWeierstrass(
        a=_h("a9fb57dba1eea9bc3e660a909d838d726e3bf623d52620282013481d1f6e5374"),
        b=_h("662c61c430d84ea4fe66a7733d0b76b7bf93ebc4af2f49256ae58101fee92b04"),
    ),
    G=Affine(
        _h("a3e8eb3cc1cfe7b7732213b23a656149afa142c47aafbc2b79a191562e1305f4"),
        _h("2d996c823439c56d7f7b22e14644417e69bcb6de39d027001dabe8f35b25c9be"),
    ),
    n=_h("a9fb57dba1eea9bc3e660a909d838d718c397aa3b561a6f7901e0e82974856a7"),
    h=1,
    aliases=("brainpool-p256t1", "brainpoolp256t1", "bp256t1"),
)

SECP256R1 = CurveParams(
    name="secp256r1",
    p=_h("ffffffff00000001000000000000000000000000ffffffffffffffffffffffff"),
    model=ShortWeierstrass(
        a=-3,
        b=_h("5ac635d8aa3a93e7b3ebbd55769886bc651d06b0cc53b0f63bce3c3e27d2604b"),
    ),
    G=Affine(
        _h("6b17d1f2e12c4247f8bce6e563a440f277037d812deb33a0f4a13945d898c296"),
        _h("4fe342e2fe1a7f9b8ee7eb4a7c0f9e162bce33576b315ececbb6406837bf51f5"),
    ),
    n=_h("ffffffff00000000ffffffffffffffffbce6faada7179e84f3b9cac2fc632551"),
    h=1,
    aliases=("p-256", "p256", "prime256v1"),
)

CURVE25519 = CurveParams(
    name="curve25519",
    p=2**255 - 19,
    model=Montgomery(A=0x76D06, B=1),
    G=Affine(9, _h("20ae19a1b8a086b4e01edd2c7748d14c923d4d7e6d7c61b229e9c5a27eced3d9")),
    n=2**252 + 27742317777372353535851937790883648493,
    h=8,
    aliases=("25519", "x25519"),
)

# y^2 = x^3 + 2x + 2 over GF(17): 19 points, G = (5, 1) generates all of them.
TOY17 = CurveParams(
    name="toy17",
    p=17,
    model=ShortWeierstrass(a=2, b=2),
    G=Affine(5, 1),
    n=19,
    h=1,
)

CURVES: Dict[str, CurveParams] = {
    c.name: c for c in (M221, SECP256R1, CURVE25519, BRAINPOOL_P256T1, M511)
}
CURVE_NAMES: List[str] = list(CURVES)

_ALIASES = {alias: c.name for c in CURVES.values() for alias in c.aliases}


def registry_get(name: str) -> CurveParams:
    key = name.strip().lower().replace("_", "-")
    key = _ALIASES.get(key, _ALIASES.get(key.replace("-", ""), key))
    if key in CURVES:
        return CURVES[key]
    if key == TOY17.name:
        return TOY17
    raise CurveNotFound(f"unknown curve {name!r}; available: {', '.join(CURVE_NAMES)}")


@dataclass
class ValidationReport:
    curve: str
    checks: Dict[str, bool] = field(default_factory=dict)
    details: Dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(self.checks.values())

    def lines(self) -> List[str]:
        out = []
        for name, passed in self.checks.items():
            extra = self.details.get(name)
            line = f"{name:<16} {'pass' if passed else 'FAIL'}"
            out.append(f"{line}  {extra}" if extra else line)
        return out

    def to_dict(self) -> dict:
        return {"curve": self.curve, "ok": self.ok, "checks": dict(self.checks),
                "details": dict(self.details)}


def _ceil_sqrt(x: int) -> int:
    r = math.isqrt(x)
    return r if r * r == x else r + 1


def _sample_points(c: CurveParams, count: int) -> List[Affine]:
    pts = []
    x = 1
    while len(pts) < count and x < c.p:
        P = lift_x(x, c)
        if P is not None and P.y != 0:
            pts.append(P)
        x += 1
    return pts


def validate_params(c: CurveParams, samples: int = 3) -> ValidationReport:
    """Arithmetic consistency checks on a parameter set.

    Checks: p prime, nonzero discriminant, G on curve, n prime, n*G = O,
    Hasse bound on h*n, and (h*n)*R = O for a few sampled points R. Failures
    are recorded in the report rather than raised.
    """
    rep = ValidationReport(c.name)
    p = c.p
    rep.checks["p_prime"] = p > 3 and is_probable_prime(p)

    m = c.model
    if isinstance(m, ShortWeierstrass):
        disc = (4 * m.a ** 3 + 27 * m.b ** 2) % p
        rep.details["discriminant"] = "4a^3 + 27b^2 != 0"
    else:
        disc = m.B * (m.A * m.A - 4) % p
        rep.details["discriminant"] = "B(A^2 - 4) != 0"
    rep.checks["discriminant"] = disc != 0

    g_ok = is_on_curve(c.G, c)
    rep.checks["g_on_curve"] = g_ok
    rep.checks["n_prime"] = is_probable_prime(c.n)

    try:
        rep.checks["n_g_infinity"] = g_ok and scalar_mul(c.n, c.G, c) is INFINITY
    except (NotOnCurve, ZeroDivisionError):
        rep.checks["n_g_infinity"] = False

    count = c.h * c.n
    rep.checks["hasse_bound"] = abs(p + 1 - count) <= 2 * _ceil_sqrt(p)
    rep.details["hasse_bound"] = f"|p + 1 - h*n| = {abs(p + 1 - count)}"

    ok = rep.checks["p_prime"] and rep.checks["discriminant"]
    if ok:
        try:
            pts = _sample_points(c, samples)
            ok = bool(pts) and all(scalar_mul(count, R, c) is INFINITY for R in pts)
        except ZeroDivisionError:
            ok = False
    rep.checks["point_count"] = ok
    rep.details["point_count"] = f"(h*n)*R = O for {samples} sampled R"
    return rep


# -- JSON -----------------------------------------------------------------------

def curve_to_dict(c: CurveParams) -> dict:
    d = {"name": c.name, "p": to_hex(c.p), "model": c.model.kind}
    if isinstance(c.model, ShortWeierstrass):
        d["a"], d["b"] = to_hex(c.model.a), to_hex(c.model.b)
    else:
        d["A"], d["B"] = to_hex(c.model.A), to_hex(c.model.B)
    d.update(gx=to_hex(c.G.x), gy=to_hex(c.G.y), n=to_hex(c.n), h=to_hex(c.h))
    return d


def _hex(v) -> int:
    # wire numbers are hex even when they happen to be all digits
    if isinstance(v, int):
        return v
    s = str(v).strip().lower()
    return parse_int(s if s.startswith(("0x", "-")) else "0x" + s)


def curve_from_dict(d: dict) -> CurveParams:
    kind = d["model"]
    if kind == "weierstrass":
        model = ShortWeierstrass(_hex(d["a"]), _hex(d["b"]))
    elif kind == "montgomery":
        model = Montgomery(_hex(d["A"]), _hex(d["B"]))
    else:
        raise ValueError(f"unknown curve model {kind!r}")
    return CurveParams(
        name=d["name"],
        p=_hex(d["p"]),
        model=model,
        G=Affine(_hex(d["gx"]), _hex(d["gy"])),
        n=_hex(d["n"]),
        h=_hex(d["h"]),
    )


def curve_to_json(c: CurveParams) -> str:
    return json.dumps(curve_to_dict(c), indent=2)


def curve_from_json(text: str) -> CurveParams:
    return curve_from_dict(json.loads(text))
