"""Timing and energy measurement for ECDSA per curve and the RSA baseline.

Two kinds of measurement:

``profile_operations``
    Each phase (keygen, hash, sign, verify) timed on its own with warmup
    and ``reps`` repetitions. One record per (scheme, phase) with
    ``n_devices = 1``.

``run_suite``
    Device-count cells. For a cell with N devices every device runs
    keygen, hash, sign and verify once and each call is timed, giving N
    samples per phase. The record describes the cost of the whole cell:
    ``mean_ms`` is the measured sum over the N devices, ``median_ms`` is
    N times the per-device median (the robust estimate of the same total),
    ``stddev_ms`` is sqrt(N) times the per-device standard deviation, and
    ``reps`` is N.

Energy is E = P * t with a configurable active power P. The default of
2.5 W is a placeholder for a small IoT-class processor, not a measured
value.
"""

from __future__ import annotations

import csv
import gc
import math
import os
import statistics
import time
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, Iterable, List, Optional, Sequence

from .registry import CURVE_NAMES, registry_get
from .rsa_baseline import rsa_keygen, rsa_sign_digest, rsa_verify_digest
from .sigkit import HashSpec, RandomNonce, hash_to_int, keygen, sign_digest, verify_digest

__all__ = [
    "BenchConfig",
    "BenchRecord",
    "TimingStats",
    "SuiteResult",
    "PHASES",
    "DEFAULT_DEVICE_COUNTS",
    "time_phase",
    "energy_of",
    "profile_operations",
    "run_suite",
    "trend_report",
    "write_csv",
    "read_csv",
    "write_svg",
    "CSV_HEADER",
]

PHASES = ("keygen", "hash", "sign", "verify", "total")
DEFAULT_DEVICE_COUNTS = (20, 50, 100, 200, 300, 400, 500)
CSV_HEADER = ("scheme", "phase", "n_devices", "reps", "median_ms", "mean_ms",
              "stddev_ms", "energy_j")


@dataclass
class BenchConfig:
    curves: List[str] = field(default_factory=lambda: list(CURVE_NAMES))
    device_counts: List[int] = field(default_factory=lambda: list(DEFAULT_DEVICE_COUNTS))
    reps: int = 100
    warmup: int = 10
    power_w: float = 2.5
    rsa_bits: List[int] = field(default_factory=list)
    hash: str = "sha512"
    message_size: int = 64

    def validate(self) -> None:
        if self.reps < 30:
            raise ValueError("need at least 30 repetitions")
        if self.warmup < 0:
            raise ValueError("warmup must be nonnegative")
        counts = list(self.device_counts)
        if not counts or any(c < 1 for c in counts):
            raise ValueError("device counts must be positive")
        if any(b <= a for a, b in zip(counts, counts[1:])):
            raise ValueError("device counts must be strictly increasing")
        if not self.power_w > 0:
            raise ValueError("power draw must be positive")
        for name in self.curves:
            registry_get(name)
        HashSpec(self.hash)


@dataclass(frozen=True)
class TimingStats:
    median_ms: float
    mean_ms: float
    stddev_ms: float
    samples: int


@dataclass(frozen=True)
class BenchRecord:
    scheme: str
    phase: str
    n_devices: int
    reps: int
    median_ms: float
    mean_ms: float
    stddev_ms: float
    energy_j: float

    def row(self) -> list:
        return [self.scheme, self.phase, self.n_devices, self.reps,
                f"{self.median_ms:.6f}", f"{self.mean_ms:.6f}",
                f"{self.stddev_ms:.6f}", f"{self.energy_j:.9f}"]


def energy_of(seconds: float, power_w: float) -> float:
    """Joules spent running for ``seconds`` at ``power_w`` watts."""
    if seconds < 0:
        raise ValueError("time must be nonnegative")
    return power_w * seconds


def _stats(samples_ms: Sequence[float]) -> TimingStats:
    n = len(samples_ms)
    sd = statistics.pstdev(samples_ms) if n > 1 else 0.0
    return TimingStats(statistics.median(samples_ms), statistics.fmean(samples_ms), sd, n)


def time_phase(op: Callable[[], object], reps: int = 100, warmup: int = 10,
               clock: Callable[[], float] = time.perf_counter) -> TimingStats:
    """Run ``op`` ``warmup`` times untimed, then time ``reps`` calls."""
    for _ in range(warmup):
        op()
    samples = []
    gc_was_on = gc.isenabled()
    gc.disable()
    try:
        for _ in range(reps):
            t0 = clock()
            op()
            samples.append((clock() - t0) * 1000.0)
    finally:
        if gc_was_on:
            gc.enable()
    return _stats(samples)


# -- per-device workloads ------------------------------------------------------

class _EcdsaDevice:
    def __init__(self, curve_name: str, spec: HashSpec, message_size: int):
        self.curve = registry_get(curve_name)
        self.spec = spec
        self.nonce = RandomNonce()
        self.message_size = message_size
        self.scheme = self.curve.name

    def run(self, clock=time.perf_counter) -> Dict[str, float]:
        c = self.curve
        msg = os.urandom(self.message_size)
        t0 = clock()
        kp = keygen(c)
        t1 = clock()
        h = hash_to_int(msg, self.spec, c.n)
        t2 = clock()
        sig = sign_digest(h, kp, self.nonce, self.spec)
        t3 = clock()
        ok = verify_digest(h, sig, kp.Q, c)
        t4 = clock()
        if not ok:
            raise RuntimeError(f"self-check failed on {c.name}")
        return {"keygen": (t1 - t0) * 1e3, "hash": (t2 - t1) * 1e3,
                "sign": (t3 - t2) * 1e3, "verify": (t4 - t3) * 1e3}


class _RsaDevice:
    def __init__(self, bits: int, spec: HashSpec, message_size: int):
        self.bits = bits
        self.spec = spec
        self.message_size = message_size
        self.scheme = f"rsa-{bits}"

    def run(self, clock=time.perf_counter) -> Dict[str, float]:
        msg = os.urandom(self.message_size)
        t0 = clock()
        key = rsa_keygen(self.bits, allow_small=True)
        t1 = clock()
        h = int.from_bytes(self.spec.digest(msg), "big")
        t2 = clock()
        s = rsa_sign_digest(h, key)
        t3 = clock()
        ok = rsa_verify_digest(h, s, key.public)
        t4 = clock()
        if not ok:
            raise RuntimeError(f"self-check failed on {self.scheme}")
        return {"keygen": (t1 - t0) * 1e3, "hash": (t2 - t1) * 1e3,
                "sign": (t3 - t2) * 1e3, "verify": (t4 - t3) * 1e3}


def _workloads(cfg: BenchConfig):
    spec = HashSpec(cfg.hash)
    for name in cfg.curves:
        yield _EcdsaDevice(name, spec, cfg.message_size)
    for bits in cfg.rsa_bits:
        yield _RsaDevice(bits, spec, cfg.message_size)


def _cell_records(scheme: str, n: int, samples: Dict[str, List[float]],
                  power_w: float) -> List[BenchRecord]:
    out = []
    root = math.sqrt(n)
    for phase in PHASES:
        st = _stats(samples[phase])
        mean_total = st.mean_ms * n
        out.append(BenchRecord(
            scheme=scheme, phase=phase, n_devices=n, reps=st.samples,
            median_ms=st.median_ms * n, mean_ms=mean_total,
            stddev_ms=st.stddev_ms * root,
            energy_j=energy_of(mean_total / 1000.0, power_w)))
    return out


def _run_cell(dev, n: int) -> Dict[str, List[float]]:
    samples: Dict[str, List[float]] = {p: [] for p in PHASES}
    gc_was_on = gc.isenabled()
    gc.disable()
    try:
        for _ in range(n):
            t = dev.run()
            for phase, ms in t.items():
                samples[phase].append(ms)
            samples["total"].append(sum(t.values()))
    finally:
        if gc_was_on:
            gc.enable()
    return samples


def profile_operations(cfg: BenchConfig, progress: Optional[Callable[[str], None]] = None
                       ) -> List[BenchRecord]:
    """Per-operation timing with warmup and ``cfg.reps`` repetitions."""
    cfg.validate()
    out = []
    for dev in _workloads(cfg):
        if progress:
            progress(f"profiling {dev.scheme}")
        for _ in range(cfg.warmup):
            dev.run()
        samples = _run_cell(dev, cfg.reps)
        for phase in PHASES:
            st = _stats(samples[phase])
            out.append(BenchRecord(dev.scheme, phase, 1, st.samples, st.median_ms,
                                   st.mean_ms, st.stddev_ms,
                                   energy_of(st.mean_ms / 1000.0, cfg.power_w)))
    return out


@dataclass
class SuiteResult:
    records: List[BenchRecord]
    trend: dict

    def select(self, scheme: Optional[str] = None, phase: Optional[str] = None,
               n_devices: Optional[int] = None) -> List[BenchRecord]:
        return [r for r in self.records
                if (scheme is None or r.scheme == scheme)
                and (phase is None or r.phase == phase)
                and (n_devices is None or r.n_devices == n_devices)]

    def get(self, scheme: str, phase: str, n_devices: int) -> BenchRecord:
        found = self.select(scheme, phase, n_devices)
        if not found:
            raise KeyError((scheme, phase, n_devices))
        return found[0]


def run_suite(cfg: BenchConfig, progress: Optional[Callable[[str], None]] = None) -> SuiteResult:
    """Measure every (scheme, device count) cell.

    Within a cell the schemes take turns device by device, so a slow spell
    on the host lands on all of them alike instead of on whichever scheme
    happened to be running. Nothing runs in parallel.
    """
    cfg.validate()
    devs = list(_workloads(cfg))
    for dev in devs:
        for _ in range(cfg.warmup):
            dev.run()
    cells: Dict[str, List[BenchRecord]] = {dev.scheme: [] for dev in devs}
    for n in cfg.device_counts:
        if progress:
            progress(f"{n} devices x {len(devs)} schemes")
        samples = _run_round_robin(devs, n)
        for dev in devs:
            cells[dev.scheme].extend(_cell_records(dev.scheme, n, samples[dev.scheme],
                                                   cfg.power_w))
    records = [r for dev in devs for r in cells[dev.scheme]]
    return SuiteResult(records, trend_report(records))


def _run_round_robin(devs, n: int) -> Dict[str, Dict[str, List[float]]]:
    samples = {dev.scheme: {p: [] for p in PHASES} for dev in devs}
    gc_was_on = gc.isenabled()
    gc.disable()
    try:
        for _ in range(n):
            for dev in devs:
                t = dev.run()
                cell = samples[dev.scheme]
                for phase, ms in t.items():
                    cell[phase].append(ms)
                cell["total"].append(sum(t.values()))
    finally:
        if gc_was_on:
            gc.enable()
    return samples


def trend_report(records: Iterable[BenchRecord], baseline: str = "m-221") -> dict:
    """Orderings and ratios of the ``total`` phase, per device count."""
    totals: Dict[int, Dict[str, float]] = {}
    for r in records:
        if r.phase == "total":
            totals.setdefault(r.n_devices, {})[r.scheme] = r.median_ms
    report = {"ordering": {}, "ratio_to_baseline": {}, "monotonic": {}, "baseline": baseline}
    for n, by_scheme in sorted(totals.items()):
        report["ordering"][n] = sorted(by_scheme, key=by_scheme.get)
        if baseline in by_scheme and by_scheme[baseline] > 0:
            base = by_scheme[baseline]
            report["ratio_to_baseline"][n] = {s: v / base for s, v in by_scheme.items()}
    schemes = {s for by in totals.values() for s in by}
    for s in sorted(schemes):
        series = [totals[n][s] for n in sorted(totals) if s in totals[n]]
        report["monotonic"][s] = all(b >= a for a, b in zip(series, series[1:]))
    return report


# -- output --------------------------------------------------------------------

def write_csv(records: Iterable[BenchRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(CSV_HEADER)
        for r in records:
            w.writerow(r.row())


def read_csv(path) -> List[BenchRecord]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    return [BenchRecord(r["scheme"], r["phase"], int(r["n_devices"]), int(r["reps"]),
                        float(r["median_ms"]), float(r["mean_ms"]), float(r["stddev_ms"]),
                        float(r["energy_j"])) for r in rows]


def write_svg(records: Sequence[BenchRecord], path) -> None:
    """Bar chart of per-device totals plus time and energy against device count."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    totals = [r for r in records if r.phase == "total"]
    schemes = sorted({r.scheme for r in totals})
    counts = sorted({r.n_devices for r in totals})
    fig, axes = plt.subplots(1, 3, figsize=(15, 4.5))
    first = counts[0]
    per_dev = [next(r.median_ms / r.n_devices for r in totals
                    if r.scheme == s and r.n_devices == first) for s in schemes]
    axes[0].bar(schemes, per_dev)
    axes[0].set_ylabel("ms per device (median)")
    axes[0].set_title("keygen + hash + sign + verify")
    axes[0].tick_params(axis="x", rotation=30)
    for s in schemes:
        rs = sorted((r for r in totals if r.scheme == s), key=lambda r: r.n_devices)
        axes[1].plot([r.n_devices for r in rs], [r.mean_ms / 1000 for r in rs], marker="o", label=s)
        axes[2].plot([r.n_devices for r in rs], [r.energy_j for r in rs], marker="o", label=s)
    axes[1].set_xlabel("IoT devices")
    axes[1].set_ylabel("computation time (s)")
    axes[2].set_xlabel("IoT devices")
    axes[2].set_ylabel("energy (J)")
    axes[1].legend()
    fig.tight_layout()
    fig.savefig(path, format="svg")
    plt.close(fig)
