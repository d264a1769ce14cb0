"""Command-line entry point: ``fogecc <command> ...``.

Exit codes: 0 success, 1 domain failure (invalid signature, failed
validation, rejected request, unreadable input), 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from typing import List, Optional

from . import bench as benchmod
from .field import parse_int, to_hex
from .fogsim import SimConfig, protocol_message_count, run_simulation
from .registry import CURVE_NAMES, CurveNotFound, curve_to_dict, registry_get, validate_params
from .rsa_baseline import RsaKeyPair, RsaPublicKey, rsa_keygen, rsa_sign, rsa_verify
from .sigkit import (
    DecodeError,
    DeterministicNonce,
    HashSpec,
    KeyPair,
    RandomNonce,
    RecoveryImpossible,
    Signature,
    decode_signature,
    encode_signature,
    hash_to_int,
    keygen,
    public_from_dict,
    recover_nonce,
    recover_private_from_nonce_reuse,
    sign,
    signature_from_dict,
    signature_to_dict,
    verify,
)
from .curve import scalar_mul

OK, FAIL, USAGE = 0, 1, 2


class CliError(Exception):
    """Domain failure reported on stderr with exit code 1."""


class _Out:
    def __init__(self, as_json: bool, quiet: bool):
        self.as_json = as_json
        self.quiet = quiet

    def emit(self, text: str, data=None) -> None:
        if self.as_json:
            print(json.dumps(data if data is not None else {"result": text}))
        else:
            print(text)

    def note(self, text: str) -> None:
        if not self.quiet:
            print(text, file=sys.stderr)


def _read_json(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from None


def _write(path: str, data: bytes, private: bool = False) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        return
    flags = os.O_WRONLY | os.O_CREAT | os.O_TRUNC
    fd = os.open(path, flags, 0o600 if private else 0o644)
    with os.fdopen(fd, "wb") as fh:
        fh.write(data)
    if private:
        try:
            os.chmod(path, 0o600)
        except OSError:
            pass


def _rng(args):
    return random.Random(args.seed) if args.seed is not None else None


# -- curves ------------------------------------------------------------------------

def cmd_curves_list(args, out: _Out) -> int:
    rows = []
    for name in CURVE_NAMES:
        c = registry_get(name)
        rows.append({"name": c.name, "model": c.model.kind, "bits": c.bits, "h": c.h})
    out.emit("\n".join(f"{r['name']:<16} {r['model']:<12} {r['bits']:>3}-bit  h={r['h']}"
                       for r in rows), rows)
    return OK


def cmd_curves_validate(args, out: _Out) -> int:
    names = CURVE_NAMES if args.name == "all" else [args.name]
    ok = True
    reports = []
    lines = []
    for name in names:
        rep = validate_params(registry_get(name))
        ok &= rep.ok
        reports.append(rep.to_dict())
        if len(names) > 1:
            lines.append(f"# {rep.curve}: {'pass' if rep.ok else 'FAIL'}")
        lines.extend(rep.lines())
    out.emit("\n".join(lines), reports if len(reports) > 1 else reports[0])
    return OK if ok else FAIL


def cmd_curves_export(args, out: _Out) -> int:
    d = curve_to_dict(registry_get(args.name))
    print(json.dumps(d, indent=None if args.json else 2))
    return OK


# -- ecdsa -------------------------------------------------------------------------

def cmd_keygen(args, out: _Out) -> int:
    curve = registry_get(args.curve)
    if args.seed is not None:
        out.note("warning: --seed makes the key reproducible; never use it for real keys")
    kp = keygen(curve, _rng(args))
    _write(args.out, (json.dumps(kp.to_dict(), indent=2) + "\n").encode(), private=True)
    pub = json.dumps(kp.public_dict(), indent=2) + "\n"
    if args.pub:
        _write(args.pub, pub.encode())
    out.emit(f"wrote {args.out}" + (f" and {args.pub}" if args.pub else ""),
             {"curve": curve.name, "key": args.out, "pub": args.pub, **kp.public_dict()})
    return OK


def _nonce(mode: str, args):
    if mode == "random":
        return RandomNonce(_rng(args))
    return DeterministicNonce()


def cmd_sign(args, out: _Out) -> int:
    try:
        kp = KeyPair.from_dict(_read_json(args.key))
    except (KeyError, ValueError) as exc:
        raise CliError(f"bad key file {args.key}: {exc}") from None
    msg = _read_bytes(args.input)
    spec = HashSpec(args.hash)
    sig = sign(msg, kp, spec, _nonce(args.nonce, args))
    if args.raw:
        data = encode_signature(sig, kp.curve)
    else:
        data = (json.dumps(signature_to_dict(sig, kp.curve), indent=2) + "\n").encode()
    if args.out:
        _write(args.out, data)
        out.emit(f"wrote {args.out}", {"sig": args.out, **signature_to_dict(sig, kp.curve)})
    elif args.raw:
        _write("-", data)
    else:
        out.emit(data.decode().strip(), signature_to_dict(sig, kp.curve))
    return OK


def _load_signature(path: str, curve) -> Signature:
    blob = _read_bytes(path)
    try:
        doc = json.loads(blob)
    except (ValueError, UnicodeDecodeError):
        doc = None
    if isinstance(doc, dict):
        sig_curve, sig = signature_from_dict(doc)
        if sig_curve.name != curve.name:
            raise CliError(f"signature is for {sig_curve.name}, key is for {curve.name}")
        return sig
    return decode_signature(blob, curve)


def cmd_verify(args, out: _Out) -> int:
    try:
        curve, Q = public_from_dict(_read_json(args.pub))
    except (KeyError, ValueError) as exc:
        raise CliError(f"bad public key {args.pub}: {exc}") from None
    msg = _read_bytes(args.input)
    try:
        sig = _load_signature(args.sig, curve)
        valid = verify(msg, sig, Q, curve, HashSpec(args.hash))
    except (DecodeError, KeyError, ValueError, CliError) as exc:
        out.note(f"malformed signature: {exc}")
        valid = False
    out.emit("valid" if valid else "invalid", {"valid": valid})
    return OK if valid else FAIL


def cmd_attack(args, out: _Out) -> int:
    c1, s1 = signature_from_dict(_read_json(args.sig1))
    c2, s2 = signature_from_dict(_read_json(args.sig2))
    if c1.name != c2.name:
        raise CliError("signatures are on different curves")
    curve = c1
    spec = HashSpec(args.hash)

    def digest(value, path):
        if value is not None:
            return parse_int(value)
        if path is not None:
            return hash_to_int(_read_bytes(path), spec, curve.n)
        raise CliError("need --h1/--h2 or --msg1/--msg2")

    h1 = digest(args.h1, args.msg1)
    h2 = digest(args.h2, args.msg2)
    try:
        k = recover_nonce(s1, s2, h1, h2, curve)
        d = recover_private_from_nonce_reuse(s1, s2, h1, h2, curve)
    except RecoveryImpossible as exc:
        raise CliError(f"recovery impossible: {exc}") from None
    data = {"curve": curve.name, "k": to_hex(k), "d": to_hex(d)}
    text = f"k = {to_hex(k)}\nd = {to_hex(d)}"
    code = OK
    if args.pub:
        pc, Q = public_from_dict(_read_json(args.pub))
        match = scalar_mul(d, curve.G, curve) == Q
        data["matches_pub"] = match
        text += f"\nd*G matches public key: {'yes' if match else 'no'}"
        code = OK if match else FAIL
    out.emit(text, data)
    return code


# -- rsa ---------------------------------------------------------------------------

def cmd_rsa_keygen(args, out: _Out) -> int:
    key = rsa_keygen(args.bits, _rng(args), allow_small=args.test_size)
    _write(args.out, (json.dumps(key.to_dict(), indent=2) + "\n").encode(), private=True)
    if args.pub:
        _write(args.pub, (json.dumps(key.public.to_dict(), indent=2) + "\n").encode())
    out.emit(f"wrote {args.out}", {"key": args.out, "bits": key.bits})
    return OK


def _rsa_pub(path: str) -> RsaPublicKey:
    d = _read_json(path)
    try:
        k = RsaKeyPair.from_dict({**d, "d": d.get("d", "0")})
    except (KeyError, ValueError) as exc:
        raise CliError(f"bad RSA key {path}: {exc}") from None
    return RsaPublicKey(k.N, k.e)


def cmd_rsa_sign(args, out: _Out) -> int:
    try:
        key = RsaKeyPair.from_dict(_read_json(args.key))
    except (KeyError, ValueError) as exc:
        raise CliError(f"bad RSA key {args.key}: {exc}") from None
    s = rsa_sign(_read_bytes(args.input), key, HashSpec(args.hash))
    doc = {"s": to_hex(s)}
    if args.out:
        _write(args.out, (json.dumps(doc) + "\n").encode())
        out.emit(f"wrote {args.out}", doc)
    else:
        out.emit(json.dumps(doc), doc)
    return OK


def cmd_rsa_verify(args, out: _Out) -> int:
    pub = _rsa_pub(args.pub)
    try:
        s = parse_int("0x" + str(_read_json(args.sig)["s"]))
        valid = rsa_verify(_read_bytes(args.input), s, pub, HashSpec(args.hash))
    except (KeyError, ValueError):
        valid = False
    out.emit("valid" if valid else "invalid", {"valid": valid})
    return OK if valid else FAIL


# -- simulate / bench --------------------------------------------------------------

def cmd_simulate(args, out: _Out) -> int:
    cfg = SimConfig(
        curve=args.curve,
        devices=args.devices,
        mode=args.mode,
        latency={"device-fog": args.latency_fog, "fog-cloud": args.latency_fog_cloud,
                 "device-cloud": args.latency_cloud},
        seed=args.seed if args.seed is not None else 0,
        fogs=args.fogs,
        key_mode=args.key_mode,
        crypto_timing=args.crypto_timing,
        nonce_window_ms=args.window,
        hash=args.hash,
    )
    try:
        cfg.validate()
    except (ValueError, CurveNotFound) as exc:
        raise CliError(str(exc)) from None
    res = run_simulation(cfg)
    if args.trace:
        res.write_trace(args.trace)
    summary = {
        "curve": cfg.curve, "mode": cfg.mode, "devices": cfg.devices,
        "messages": len(res.records),
        "expected_messages": protocol_message_count(cfg.devices, cfg.fogs),
        "authenticated": len(res.authenticated),
        "elapsed_ms": round(res.elapsed_ms, 3),
        "init_ms": round(res.init_ms, 3),
        "phases_ms": {k: round(v, 3) for k, v in res.timings.phases.items()},
        "tiers_ms": {k: round(v, 3) for k, v in res.timings.tiers.items()},
    }
    text = "\n".join(f"{k}: {v}" for k, v in summary.items())
    out.emit(text, summary)
    return OK if len(res.authenticated) == cfg.devices else FAIL


def _int_list(text: str) -> List[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def cmd_bench(args, out: _Out) -> int:
    curves = CURVE_NAMES if args.curves == "all" else [c.strip() for c in args.curves.split(",")]
    cfg = benchmod.BenchConfig(curves=curves, device_counts=args.devices, reps=args.reps,
                               warmup=args.warmup, power_w=args.power,
                               rsa_bits=args.rsa_bits, hash=args.hash)
    try:
        cfg.validate()
    except (ValueError, CurveNotFound) as exc:
        raise CliError(str(exc)) from None
    progress = None if args.quiet else (lambda m: print(m, file=sys.stderr))
    res = benchmod.run_suite(cfg, progress)
    records = res.records
    if args.profile:
        records = benchmod.profile_operations(cfg, progress) + records
    if args.out:
        benchmod.write_csv(records, args.out)
    if args.svg:
        benchmod.write_svg(records, args.svg)
    if args.json:
        print(json.dumps({"records": [r.__dict__ for r in records], "trend": res.trend},
                         default=str))
    else:
        if not args.out:
            print(",".join(benchmod.CSV_HEADER))
            for r in records:
                print(",".join(map(str, r.row())))
        for n, order in res.trend["ordering"].items():
            print(f"{n:>4} devices: " + " < ".join(order), file=sys.stderr)
    return OK


# -- parser ------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable JSON output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for reproducible runs (not for real keys)")
    common.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="fogecc", parents=[common],
                                description="ECDSA over five curves, fog authentication "
                                            "simulator and benchmarks")
    sub = p.add_subparsers(dest="command", required=True)

    curves = sub.add_parser("curves", help="list, validate or export registry curves")
    csub = curves.add_subparsers(dest="curves_cmd", required=True)
    c = csub.add_parser("list", parents=[common])
    c.set_defaults(func=cmd_curves_list)
    c = csub.add_parser("validate", parents=[common])
    c.add_argument("name", help="curve name or 'all'")
    c.set_defaults(func=cmd_curves_validate)
    c = csub.add_parser("export", parents=[common])
    c.add_argument("name")
    c.set_defaults(func=cmd_curves_export)

    k = sub.add_parser("keygen", parents=[common], help="generate an ECDSA key pair")
    k.add_argument("--curve", required=True)
    k.add_argument("--out", required=True, help="private key JSON")
    k.add_argument("--pub", help="public key JSON")
    k.set_defaults(func=cmd_keygen)

    s = sub.add_parser("sign", parents=[common], help="sign a file")
    s.add_argument("--key", required=True)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--hash", default="sha512", choices=["sha1", "sha256", "sha512"])
    s.add_argument("--nonce", default="deterministic", choices=["deterministic", "random"])
    s.add_argument("--out")
    s.add_argument("--raw", action="store_true", help="write raw r||s bytes instead of JSON")
    s.set_defaults(func=cmd_sign)

    v = sub.add_parser("verify", parents=[common], help="verify a signature")
    v.add_argument("--pub", required=True)
    v.add_argument("--sig", required=True)
    v.add_argument("--in", dest="input", required=True)
    v.add_argument("--hash", default="sha512", choices=["sha1", "sha256", "sha512"])
    v.set_defaults(func=cmd_verify)

    a = sub.add_parser("attack", help="demonstrations")
    asub = a.add_subparsers(dest="attack_cmd", required=True)
    nr = asub.add_parser("nonce-reuse", parents=[common],
                         help="recover d from two signatures sharing a nonce")
    nr.add_argument("--sig1", required=True)
    nr.add_argument("--sig2", required=True)
    nr.add_argument("--h1", help="digest as an integer, decimal or 0x-hex")
    nr.add_argument("--h2", help="digest as an integer, decimal or 0x-hex")
    nr.add_argument("--msg1", help="message file, hashed with --hash")
    nr.add_argument("--msg2")
    nr.add_argument("--hash", default="sha512", choices=["sha1", "sha256", "sha512"])
    nr.add_argument("--pub", help="victim public key, to confirm the recovery")
    nr.set_defaults(func=cmd_attack)

    r = sub.add_parser("rsa", help="textbook RSA baseline (not secure)")
    rsub = r.add_subparsers(dest="rsa_cmd", required=True)
    rk = rsub.add_parser("keygen", parents=[common])
    rk.add_argument("--bits", type=int, default=2048)
    rk.add_argument("--out", required=True)
    rk.add_argument("--pub")
    rk.add_argument("--test-size", action="store_true", help="allow non-standard sizes")
    rk.set_defaults(func=cmd_rsa_keygen)
    rs = rsub.add_parser("sign", parents=[common])
    rs.add_argument("--key", required=True)
    rs.add_argument("--in", dest="input", required=True)
    rs.add_argument("--hash", default="sha512", choices=["sha1", "sha256", "sha512"])
    rs.add_argument("--out")
    rs.set_defaults(func=cmd_rsa_sign)
    rv = rsub.add_parser("verify", parents=[common])
    rv.add_argument("--pub", required=True, help="public or private RSA key JSON")
    rv.add_argument("--sig", required=True)
    rv.add_argument("--in", dest="input", required=True)
    rv.add_argument("--hash", default="sha512", choices=["sha1", "sha256", "sha512"])
    rv.set_defaults(func=cmd_rsa_verify)

    sm = sub.add_parser("simulate", parents=[common], help="run the fog authentication simulator")
    sm.add_argument("--curve", default="m-221")
    sm.add_argument("--devices", type=int, default=20)
    sm.add_argument("--mode", choices=["fog", "cloud"], default="fog")
    sm.add_argument("--latency-fog", type=float, default=2.0, help="device<->fog ms")
    sm.add_argument("--latency-cloud", type=float, default=25.0, help="device<->cloud ms")
    sm.add_argument("--latency-fog-cloud", type=float, default=20.0, help="fog<->cloud ms")
    sm.add_argument("--fogs", type=int, default=1)
    sm.add_argument("--key-mode", choices=["issued", "self"], default="issued")
    sm.add_argument("--crypto-timing", choices=["measured", "model", "none"], default="measured")
    sm.add_argument("--window", type=float, default=5000.0, help="replay window, ms")
    sm.add_argument("--hash", default="sha512", choices=["sha1", "sha256", "sha512"])
    sm.add_argument("--trace", help="write JSON-lines event trace here")
    sm.set_defaults(func=cmd_simulate)

    b = sub.add_parser("bench", parents=[common], help="timing and energy benchmark")
    b.add_argument("--curves", default="all")
    b.add_argument("--devices", type=_int_list, default=list(benchmod.DEFAULT_DEVICE_COUNTS))
    b.add_argument("--reps", type=int, default=100)
    b.add_argument("--warmup", type=int, default=10)
    b.add_argument("--power", type=float, default=2.5, help="active power draw, watts")
    b.add_argument("--rsa-bits", type=_int_list, default=[])
    b.add_argument("--hash", default="sha512", choices=["sha1", "sha256", "sha512"])
    b.add_argument("--profile", action="store_true", help="also time each operation alone")
    b.add_argument("--out", help="CSV output path")
    b.add_argument("--svg", help="SVG chart output path (needs matplotlib)")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else USAGE
    for name, default in (("json", False), ("seed", None), ("quiet", False)):
        if not hasattr(args, name):
            setattr(args, name, default)
    out = _Out(args.json, args.quiet)
    try:
        return args.func(args, out)
    except CurveNotFound as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FAIL


def entry() -> None:
    sys.exit(main())
