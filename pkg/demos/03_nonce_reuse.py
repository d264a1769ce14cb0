"""
Why a repeated nonce leaks the private key
==========================================

Two signatures made with the same k share r. Two equations, two
unknowns (k and d), and the private key falls out.
"""

from fogecc import FixedNonce, KeyPair, keygen, recover_private_from_nonce_reuse, registry_get, scalar_mul, sign
from fogecc.sigkit import SHA512, hash_to_int, sign_digest

# by hand on the toy curve: d = 7, k = 5
toy = registry_get("toy17")
victim = KeyPair.from_private(toy, 7)
s1 = sign_digest(10, victim, FixedNonce(5))
s2 = sign_digest(3, victim, FixedNonce(5))
print("toy signatures:", tuple(s1), tuple(s2))
print("recovered d =", recover_private_from_nonce_reuse(s1, s2, 10, 3, toy))

# the same on secp256r1 with a careless fixed nonce
curve = registry_get("secp256r1")
victim = keygen(curve)
careless = FixedNonce(0x1234567890ABCDEF)
m1, m2 = b"open door 3", b"close door 3"
sig1 = sign(m1, victim, nonce=careless)
sig2 = sign(m2, victim, nonce=careless)
h1 = hash_to_int(m1, SHA512, curve.n)
h2 = hash_to_int(m2, SHA512, curve.n)

d = recover_private_from_nonce_reuse(sig1, sig2, h1, h2, curve)
print("\nshared r:", sig1.r == sig2.r)
print("recovered key matches:", scalar_mul(d, curve.G, curve) == victim.Q)
