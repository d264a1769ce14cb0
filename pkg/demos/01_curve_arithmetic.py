"""
Points on a tiny curve, then on M-221
=====================================

The curve y^2 = x^3 + 2x + 2 over GF(17) is small enough to list by hand.
Everything shown here runs unchanged on the real curves.
"""

from fogecc import INFINITY, TOY17, Affine, point_add, point_double, registry_get, scalar_mul
from fogecc.field import PrimeModulus

# field elements behave like numbers that wrap around
F = PrimeModulus(17)
a = F(5)
print("5 + 16 =", a + 16, "  5 * 7 =", a * 7, "  1/5 =", a.inverse())

# every multiple of G = (5, 1); the 19th wraps back to infinity
P = INFINITY
for k in range(1, 20):
    P = point_add(P, TOY17.G, TOY17)
    print(f"{k:2d}G = {P}")

print("double (5,1):", point_double(Affine(5, 1), TOY17))
print("7G via double-and-add:", scalar_mul(7, TOY17.G, TOY17))

# the same calls on a 221-bit Montgomery curve
m221 = registry_get("m-221")
Q = scalar_mul(0xC0FFEE, m221.G, m221)
print("\nM-221: 0xc0ffee * G =")
print("  x =", hex(Q.x))
print("  y =", hex(Q.y))
print("  n * G is infinity:", scalar_mul(m221.n, m221.G, m221) is INFINITY)
