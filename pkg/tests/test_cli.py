import json
import os
import stat
import subprocess
import sys

import pytest

from fogecc.cli import main
from fogecc.registry import CURVE_NAMES


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "msg.txt").write_bytes(b"sensor reading 42\n")
    return tmp_path


def test_curves_list(capsys):
    code, out, _ = run(capsys, "curves", "list")
    assert code == 0
    assert [line.split()[0] for line in out.splitlines()] == CURVE_NAMES
    code, out, _ = run(capsys, "curves", "list", "--json")
    assert [c["name"] for c in json.loads(out)] == CURVE_NAMES


def test_curves_validate(capsys):
    code, out, _ = run(capsys, "curves", "validate", "m-221")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 7 and all(" pass" in line for line in lines)
    code, out, _ = run(capsys, "--json", "curves", "validate", "m-221")
    assert json.loads(out)["ok"] is True


def test_curves_validate_unknown(capsys):
    code, _, err = run(capsys, "curves", "validate", "nope")
    assert code == 1 and "unknown curve" in err and "Traceback" not in err


def test_curves_export(capsys):
    code, out, _ = run(capsys, "curves", "export", "secp256r1")
    doc = json.loads(out)
    assert code == 0 and doc["model"] == "weierstrass" and doc["name"] == "secp256r1"


@pytest.mark.parametrize("name", CURVE_NAMES)
def test_file_pipeline(capsys, workdir, name):
    assert run(capsys, "keygen", "--curve", name, "--out", "k.json", "--pub", "p.json")[0] == 0
    if os.name == "posix":
        assert stat.S_IMODE(os.stat("k.json").st_mode) == 0o600
    assert set(json.loads((workdir / "k.json").read_text())) == {"curve", "d", "qx", "qy"}
    assert set(json.loads((workdir / "p.json").read_text())) == {"curve", "qx", "qy"}
    assert run(capsys, "sign", "--key", "k.json", "--in", "msg.txt", "--out", "s.json")[0] == 0
    assert set(json.loads((workdir / "s.json").read_text())) == {"curve", "r", "s"}
    code, out, _ = run(capsys, "verify", "--pub", "p.json", "--sig", "s.json", "--in", "msg.txt")
    assert (code, out.strip()) == (0, "valid")


def test_verify_tampered(capsys, workdir):
    run(capsys, "keygen", "--curve", "m-221", "--out", "k.json", "--pub", "p.json")
    run(capsys, "sign", "--key", "k.json", "--in", "msg.txt", "--out", "s.json")
    (workdir / "msg.txt").write_bytes(b"sensor reading 43\n")
    code, out, _ = run(capsys, "verify", "--pub", "p.json", "--sig", "s.json", "--in", "msg.txt")
    assert (code, out.strip()) == (1, "invalid")


def test_raw_signature_and_hash_choice(capsys, workdir):
    run(capsys, "keygen", "--curve", "secp256r1", "--out", "k.json", "--pub", "p.json")
    run(capsys, "sign", "--key", "k.json", "--in", "msg.txt", "--hash", "sha256",
        "--nonce", "random", "--raw", "--out", "s.bin")
    assert len((workdir / "s.bin").read_bytes()) == 64
    code, out, _ = run(capsys, "verify", "--pub", "p.json", "--sig", "s.bin", "--in", "msg.txt",
                       "--hash", "sha256", "--json")
    assert code == 0 and json.loads(out) == {"valid": True}
    code, out, _ = run(capsys, "verify", "--pub", "p.json", "--sig", "s.bin", "--in", "msg.txt")
    assert code == 1  # default sha512 does not match


def test_garbage_signature_is_invalid_not_crash(capsys, workdir):
    run(capsys, "keygen", "--curve", "m-221", "--out", "k.json", "--pub", "p.json")
    (workdir / "s.bin").write_bytes(b"\x00" * 5)
    code, out, err = run(capsys, "verify", "--pub", "p.json", "--sig", "s.bin", "--in", "msg.txt")
    assert (code, out.strip()) == (1, "invalid") and "Traceback" not in err


def test_deterministic_signing_is_default(capsys, workdir):
    run(capsys, "keygen", "--curve", "m-221", "--out", "k.json")
    run(capsys, "sign", "--key", "k.json", "--in", "msg.txt", "--out", "a.json")
    run(capsys, "sign", "--key", "k.json", "--in", "msg.txt", "--out", "b.json")
    assert (workdir / "a.json").read_text() == (workdir / "b.json").read_text()


def test_seeded_keygen_is_reproducible(capsys, workdir):
    run(capsys, "--seed", "5", "keygen", "--curve", "m-221", "--out", "a.json")
    run(capsys, "keygen", "--curve", "m-221", "--out", "b.json", "--seed", "5")
    assert (workdir / "a.json").read_text() == (workdir / "b.json").read_text()


def test_attack_nonce_reuse_toy(capsys, workdir):
    (workdir / "a.json").write_text(json.dumps({"curve": "toy17", "r": "9", "s": "7"}))
    (workdir / "b.json").write_text(json.dumps({"curve": "toy17", "r": "9", "s": "11"}))
    code, out, _ = run(capsys, "--json", "attack", "nonce-reuse", "--sig1", "a.json",
                       "--sig2", "b.json", "--h1", "10", "--h2", "3")
    assert code == 0 and json.loads(out)["d"] == "7" and json.loads(out)["k"] == "5"


def test_attack_nonce_reuse_files(capsys, workdir):
    from fogecc.sigkit import FixedNonce, KeyPair, sign, signature_to_dict
    from fogecc.registry import registry_get
    c = registry_get("m-221")
    kp = KeyPair.from_private(c, 123456789)
    (workdir / "p.json").write_text(json.dumps(kp.public_dict()))
    for name, msg in (("1", b"one"), ("2", b"two")):
        (workdir / f"m{name}").write_bytes(msg)
        sig = sign(msg, kp, nonce=FixedNonce(987654321))
        (workdir / f"s{name}.json").write_text(json.dumps(signature_to_dict(sig, c)))
    code, out, _ = run(capsys, "attack", "nonce-reuse", "--sig1", "s1.json", "--sig2", "s2.json",
                       "--msg1", "m1", "--msg2", "m2", "--pub", "p.json")
    assert code == 0
    assert f"d = {123456789:x}" in out and "matches public key: yes" in out


def test_attack_without_shared_nonce_fails(capsys, workdir):
    (workdir / "a.json").write_text(json.dumps({"curve": "toy17", "r": "9", "s": "7"}))
    (workdir / "b.json").write_text(json.dumps({"curve": "toy17", "r": "3", "s": "11"}))
    code, _, err = run(capsys, "attack", "nonce-reuse", "--sig1", "a.json", "--sig2", "b.json",
                       "--h1", "10", "--h2", "3")
    assert code == 1 and "recovery impossible" in err


def test_rsa_commands(capsys, workdir):
    assert run(capsys, "rsa", "keygen", "--bits", "1024", "--out", "r.json", "--pub", "rp.json")[0] == 0
    assert set(json.loads((workdir / "r.json").read_text())) == {"n", "e", "d"}
    assert run(capsys, "rsa", "sign", "--key", "r.json", "--in", "msg.txt", "--out", "rs.json")[0] == 0
    code, out, _ = run(capsys, "rsa", "verify", "--pub", "rp.json", "--sig", "rs.json", "--in", "msg.txt")
    assert (code, out.strip()) == (0, "valid")
    (workdir / "msg.txt").write_bytes(b"other")
    code, out, _ = run(capsys, "rsa", "verify", "--pub", "rp.json", "--sig", "rs.json", "--in", "msg.txt")
    assert (code, out.strip()) == (1, "invalid")
    assert run(capsys, "rsa", "keygen", "--bits", "1000", "--out", "x.json")[0] == 1


def test_simulate(capsys, workdir):
    code, out, _ = run(capsys, "--json", "simulate", "--curve", "m-221", "--devices", "4",
                       "--mode", "fog", "--latency-fog", "2", "--latency-cloud", "30",
                       "--seed", "1", "--crypto-timing", "model", "--trace", "t.jsonl")
    doc = json.loads(out)
    assert code == 0 and doc["messages"] == doc["expected_messages"] == 28
    assert doc["authenticated"] == 4
    lines = (workdir / "t.jsonl").read_text().splitlines()
    assert len(lines) == 28 and json.loads(lines[0])["from"] == "fog-00"


def test_simulate_bad_config(capsys):
    code, _, err = run(capsys, "simulate", "--devices", "0")
    assert code == 1 and "device count" in err


def test_bench_command(capsys, workdir):
    code, _, err = run(capsys, "--quiet", "bench", "--curves", "m-221,secp256r1",
                       "--devices", "2,3", "--reps", "30", "--warmup", "1", "--out", "b.csv")
    assert code == 0
    rows = (workdir / "b.csv").read_text().splitlines()
    assert rows[0] == "scheme,phase,n_devices,reps,median_ms,mean_ms,stddev_ms,energy_j"
    assert len(rows) == 1 + 2 * 5 * 2
    code, _, err = run(capsys, "bench", "--devices", "5,2", "--reps", "30")
    assert code == 1 and "increasing" in err


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "verify", "--pub", "x")[0] == 2
    assert run(capsys, "sign", "--bogus-flag")[0] == 2
    assert run(capsys, "bench", "--devices", "a,b")[0] == 2
    assert run(capsys)[0] == 2


def test_missing_file_is_domain_error(capsys, workdir):
    code, _, err = run(capsys, "verify", "--pub", "nope.json", "--sig", "s", "--in", "msg.txt")
    assert code == 1 and err.startswith("error:") and "Traceback" not in err


def test_module_entry_point(workdir):
    proc = subprocess.run([sys.executable, "-m", "fogecc", "curves", "validate", "toy17"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and len(proc.stdout.strip().splitlines()) == 7
    proc = subprocess.run([sys.executable, "-m", "fogecc", "--nope"], capture_output=True, text=True)
    assert proc.returncode == 2
