"""
Timing and energy per device count
==================================

A scaled-down run of the benchmark: each device does keygen, hash, sign
and verify once. Totals are per cell; energy is time times a nominal
2.5 W. Pass --full for the 20..500 device sweep plus RSA-2048, which
takes a while.
"""

import sys

from fogecc.bench import BenchConfig, run_suite

full = "--full" in sys.argv
cfg = BenchConfig(device_counts=[20, 50, 100, 200, 300, 400, 500] if full else [5, 10, 20],
                  rsa_bits=[2048] if full else [], reps=100, warmup=3)
res = run_suite(cfg, progress=lambda msg: print("..", msg, file=sys.stderr))

print(f"{'scheme':16}" + "".join(f"{n:>10}" for n in cfg.device_counts))
schemes = list(dict.fromkeys(r.scheme for r in res.records))
for s in schemes:
    cells = [res.get(s, "total", n) for n in cfg.device_counts]
    print(f"{s:16}" + "".join(f"{c.median_ms:9.0f}ms" for c in cells))
print(f"{'energy (J)':16}" + "".join(
    f"{res.get('m-221', 'total', n).energy_j:10.3f}" for n in cfg.device_counts), "(m-221)")

for n, order in res.trend["ordering"].items():
    print(f"{n} devices, fastest first:", " < ".join(order))
