import json
import time

import pytest

from fogecc.curve import Affine, Montgomery, ShortWeierstrass, is_on_curve, lift_x
from fogecc.registry import (
    CURVE_NAMES,
    CurveNotFound,
    curve_from_dict,
    curve_from_json,
    curve_to_dict,
    curve_to_json,
    registry_get,
    validate_params,
)

CHECKS = ("p_prime", "discriminant", "g_on_curve", "n_prime", "n_g_infinity",
          "hasse_bound", "point_count")

# Published domain parameters, decimal where the reference lists decimal.
REFERENCE = {
    "m-221": dict(
        p=3369993333393829974333376885877453834204643052817571560137951281149,
        A=0x01C93A, B=1,
        G=(0x04, 0x0F7ACDD2A4939571D1CEF14ECA37C228E61DBFF10707DC6C08C5056D),
        n=421249166674228746791672110734682167926895081980396304944335052891, h=8),
    "m-511": dict(
        p=int("6703903964971298549787012499102923063739682910296196688861780721860882015036773"
              "488400937149083451713845015929093243025426876941405973284973216824503041861"),
        A=0x81806, B=1, Gx=5,
        n=int("837987995621412318723376562387865382967460363787024586107722590232610251879607"
              "410804876779383055508762141059258497448934987052508775626162460930737942299"),
        h=8),
    "brainpoolp256t1": dict(
        p=76884956397045344220809746629001649093037950200943055203735601445031516197751,
        a=0xA9FB57DBA1EEA9BC3E660A909D838D726E3BF623D52620282013481D1F6E5374,
        b=0x662C61C430D84EA4FE66A7733D0B76B7BF93EBC4AF2F49256AE58101FEE92B04,
        G=(0xA3E8EB3CC1CFE7B7732213B23A656149AFA142C47AAFBC2B79A191562E1305F4,
           0x2D996C823439C56D7F7B22E14644417E69BCB6DE39D027001DABE8F35B25C9BE),
        n=76884956397045344220809746629001649092737531784414529538755519063063536359079, h=1),
    "secp256r1": dict(
        p=115792089210356248762697446949407573530086143415290314195533631308867097853951,
        a=-3,
        b=0x5AC635D8AA3A93E7B3EBBD55769886BC651D06B0CC53B0F63BCE3C3E27D2604B,
        G=(0x6B17D1F2E12C4247F8BCE6E563A440F277037D812DEB33A0F4A13945D898C296,
           0x4FE342E2FE1A7F9B8EE7EB4A7C0F9E162BCE33576B315ECECBB6406837BF51F5),
        n=115792089210356248762697446949407573529996955224135760342422259061068512044369, h=1),
    "curve25519": dict(
        A=0x76D06, B=1,
        G=(9, 0x20AE19A1B8A086B4E01EDD2C7748D14C923D4D7E6D7C61B229E9C5A27ECED3D9),
        n=7237005577332262213973186563042994240857116359379907606001950938285454250989, h=8),
}


@pytest.mark.parametrize("name", sorted(REFERENCE))
def test_registry_matches_reference(name):
    ref, c = REFERENCE[name], registry_get(name)
    if "p" in ref:
        assert c.p == ref["p"]
    m = c.model
    if isinstance(m, Montgomery):
        assert (m.A, m.B) == (ref["A"], ref["B"])
    else:
        assert (m.a, m.b) == (ref["a"] % c.p, ref["b"])
    if "G" in ref:
        assert c.G == Affine(*ref["G"])
    else:
        assert c.G.x == ref["Gx"]
    assert (c.n, c.h) == (ref["n"], ref["h"])


def test_structural_primes():
    assert registry_get("m-221").p == 2 ** 221 - 3
    assert registry_get("m-511").p == 2 ** 511 - 187
    assert registry_get("curve25519").p == 2 ** 255 - 19


def test_m511_generator_y_is_a_root():
    # the y of G is one of the two square roots at x = 5
    c = registry_get("m-511")
    P = lift_x(5, c)
    assert c.G.y in (P.y, c.p - P.y)
    dropped_nibble = int(format(c.G.y, "x").replace("2fbdc0", "2fbd0", 1), 16)
    assert not is_on_curve(Affine(5, dropped_nibble), c)


def test_lookup_examples():
    assert registry_get("secp256r1").model.a == registry_get("secp256r1").p - 3
    c = registry_get("curve25519")
    assert isinstance(c.model, Montgomery) and c.model.A == 0x76D06
    assert registry_get("m-511").h == 8
    assert isinstance(registry_get("brainpoolP256t1").model, ShortWeierstrass)


def test_lookup_is_case_and_alias_insensitive():
    assert registry_get("M-221") is registry_get("m221")
    assert registry_get("P-256") is registry_get("secp256r1")
    assert registry_get("prime256v1") is registry_get("secp256r1")
    assert registry_get("toy17").n == 19


def test_unknown_curve_lists_names():
    with pytest.raises(CurveNotFound) as err:
        registry_get("secp999")
    for name in CURVE_NAMES:
        assert name in str(err.value)


def test_registry_order():
    assert CURVE_NAMES == ["m-221", "secp256r1", "curve25519", "brainpoolp256t1", "m-511"]


def test_all_curves_validate(curve):
    rep = validate_params(curve)
    assert tuple(rep.checks) == CHECKS
    assert rep.ok, rep.lines()
    assert len(rep.lines()) == 7


def test_toy_curve_validates(toy):
    assert validate_params(toy).ok


def test_flipped_generator_fails(curve):
    bad = curve.replace(G=Affine(curve.G.x, (-curve.G.y + 1) % curve.p))
    rep = validate_params(bad)
    assert not rep.checks["g_on_curve"]
    assert not rep.checks["n_g_infinity"]
    assert not rep.ok


def test_wrong_order_fails(curve):
    rep = validate_params(curve.replace(n=curve.n - 1))
    assert not rep.checks["n_g_infinity"]
    assert not rep.checks["n_prime"]


def test_singular_curve_fails():
    c = registry_get("toy17").replace(model=ShortWeierstrass(0, 0), G=Affine(0, 0))
    assert not validate_params(c).checks["discriminant"]
    m = registry_get("m-221").replace(model=Montgomery(2, 1))
    assert not validate_params(m).checks["discriminant"]


def test_wrong_cofactor_fails_hasse(curve):
    rep = validate_params(curve.replace(h=curve.h + 1))
    assert not rep.checks["hasse_bound"]
    assert not rep.ok


def test_json_roundtrip(curve):
    d = curve_to_dict(curve)
    assert set(d) >= {"name", "p", "model", "gx", "gy", "n", "h"}
    assert all(isinstance(v, str) for v in d.values())
    back = curve_from_json(curve_to_json(curve))
    assert back == curve
    assert curve_from_dict(json.loads(json.dumps(d))) == curve


def test_json_unknown_model():
    d = curve_to_dict(registry_get("toy17"))
    d["model"] = "edwards"
    with pytest.raises(ValueError):
        curve_from_dict(d)


def test_validation_is_fast():
    t0 = time.perf_counter()
    for name in CURVE_NAMES:
        validate_params(registry_get(name))
    assert time.perf_counter() - t0 < 30
