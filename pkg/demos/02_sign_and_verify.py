"""
Signing a sensor reading on each curve
======================================

Generate a key, sign, verify, then flip one bit and watch verification
fail. Deterministic nonces are the default, so signing the same message
twice gives the same signature.
"""

import time

from fogecc import CURVE_NAMES, keygen, registry_get, sign, validate_params, verify
from fogecc.sigkit import encode_signature

reading = b'{"sensor": "t-17", "celsius": 21.4}'

for name in CURVE_NAMES:
    curve = registry_get(name)
    assert validate_params(curve).ok

    t0 = time.perf_counter()
    key = keygen(curve)
    sig = sign(reading, key)
    good = verify(reading, sig, key.Q, curve)
    bad = verify(reading.replace(b"21.4", b"21.5"), sig, key.Q, curve)
    ms = (time.perf_counter() - t0) * 1000

    raw = encode_signature(sig, curve)
    print(f"{name:16} {len(raw):3d}-byte signature  valid={good}  tampered={bad}  {ms:6.1f} ms")
    assert sign(reading, key) == sig
