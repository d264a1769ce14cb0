"""Discrete-event simulation of cloud / fog / IoT-device ECDSA authentication.

Initialization phase (per fog node)::

    fog   -> cloud  FogKeyRequest
    cloud -> fog    KeyResponse      (keys + cloud signature)
    fog   -> cloud  AuthRequest      (signed challenge)
    cloud -> fog    AuthResult

Device phase (per device, after all fogs are initialized)::

    device -> cloud  DeviceRegister
    cloud  -> device DeviceIdAssign   (id is mirrored into the fog's known set)
    device -> issuer DeviceKeyRequest
    issuer -> device KeyResponse
    device -> issuer AuthRequest
    issuer -> device AuthResult

The issuer is the device's fog node in ``fog`` mode and the cloud in
``cloud`` mode. Transport is an in-process priority queue with per-link
latency; each entity handles one message at a time.

Signed payloads are length-prefixed fields. Replay protection is a
(timestamp, nonce) pair inside the signed auth payload, checked against an
acceptance window and a per-sender set of seen nonces.

Trust assumption: in the default ``issued`` key mode the issuer generates
the holder's private key and ships it in the KeyResponse. That is only
sound over a confidential, authenticated channel, which the simulator
assumes. ``self`` mode has the holder generate its own key pair and send
only the public key.
"""

from __future__ import annotations

import heapq
import json
import random
import time
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Set, Tuple, Union

from .curve import Affine, CurveParams, is_on_curve
from .registry import registry_get
from .sigkit import (
    SHA512,
    DecodeError,
    HashSpec,
    KeyPair,
    decode_signature,
    encode_signature,
    hash_to_int,
    keygen,
    public_key_bytes,
    sign_digest,
    verify_digest,
)

__all__ = [
    "SimConfig",
    "FaultPlan",
    "EventRecord",
    "PhaseTimings",
    "SimResult",
    "FogKeyRequest",
    "KeyResponse",
    "Reject",
    "AuthRequest",
    "AuthResult",
    "DeviceRegister",
    "DeviceIdAssign",
    "DeviceKeyRequest",
    "Cloud",
    "FogNode",
    "IoTDevice",
    "run_simulation",
    "protocol_message_count",
    "issuer_payload",
    "auth_payload",
]

CLOUD = "cloud"
ATTACKER = "attacker"


# -- messages --------------------------------------------------------------------

@dataclass(frozen=True)
class FogKeyRequest:
    fog_id: str
    public: Optional[Affine] = None


@dataclass(frozen=True)
class DeviceRegister:
    pass


@dataclass(frozen=True)
class DeviceIdAssign:
    device_id: str
    issuer_id: str
    issuer_public: Affine


@dataclass(frozen=True)
class DeviceKeyRequest:
    device_id: str
    public: Optional[Affine] = None


@dataclass(frozen=True)
class KeyResponse:
    issuer: str
    subject: str
    public: Affine
    signature: bytes
    private: Optional[int] = None


@dataclass(frozen=True)
class Reject:
    subject: str
    reason: str


@dataclass(frozen=True)
class AuthRequest:
    sender: str
    payload: bytes
    timestamp: int
    nonce: bytes
    signature: bytes


@dataclass(frozen=True)
class AuthResult:
    subject: str
    valid: bool
    reason: str = ""


Message = Union[FogKeyRequest, DeviceRegister, DeviceIdAssign, DeviceKeyRequest,
                KeyResponse, Reject, AuthRequest, AuthResult]


def _lp(*fields: bytes) -> bytes:
    return b"".join(len(f).to_bytes(4, "big") + f for f in fields)


def issuer_payload(issuer: str, subject: str, curve: CurveParams, public: Affine) -> bytes:
    """Bytes an issuer signs when handing out a key: issuer || subject || Q."""
    return _lp(issuer.encode(), subject.encode(), public_key_bytes(curve, public))


def auth_payload(sender: str, payload: bytes, timestamp: int, nonce: bytes) -> bytes:
    return _lp(sender.encode(), payload, timestamp.to_bytes(8, "big", signed=True), nonce)


# -- configuration and results ----------------------------------------------------

@dataclass
class SimConfig:
    """Simulation parameters. Latencies are one-way, in milliseconds.

    ``crypto_timing`` decides how handler crypto advances the clock:
    ``measured`` uses wall time of the real calls, ``model`` uses
    ``op_costs_ms`` per operation, ``none`` charges nothing. Only the last
    two give byte-identical traces across runs.
    """

    curve: str = "m-221"
    devices: int = 20
    mode: str = "fog"
    latency: Dict[str, float] = field(default_factory=lambda: {
        "device-fog": 2.0, "fog-cloud": 20.0, "device-cloud": 25.0})
    nonce_window_ms: float = 5_000.0
    seed: Optional[int] = 0
    fogs: int = 1
    key_mode: str = "issued"
    crypto_timing: str = "measured"
    op_costs_ms: Dict[str, float] = field(default_factory=lambda: {
        "keygen": 1.0, "hash": 0.01, "sign": 1.0, "verify": 2.0})
    hash: str = "sha512"

    def validate(self) -> None:
        if self.devices < 1:
            raise ValueError("device count must be at least 1")
        if self.fogs < 1:
            raise ValueError("need at least one fog node")
        if self.mode not in ("fog", "cloud"):
            raise ValueError("mode must be 'fog' or 'cloud'")
        if self.key_mode not in ("issued", "self"):
            raise ValueError("key_mode must be 'issued' or 'self'")
        if self.crypto_timing not in ("measured", "model", "none"):
            raise ValueError("crypto_timing must be 'measured', 'model' or 'none'")
        for link in ("device-fog", "fog-cloud", "device-cloud"):
            if self.latency.get(link, 0) < 0:
                raise ValueError(f"negative latency on {link}")
        if self.nonce_window_ms < 0:
            raise ValueError("nonce window must be nonnegative")
        registry_get(self.curve)
        HashSpec(self.hash)


@dataclass
class FaultPlan:
    """Attacks applied to particular devices, addressed by 0-based index.

    forged: the device signs its auth request with a key it made up.
    tamper: in-flight modification, one of ``payload``, ``signature``,
        ``timestamp``, ``nonce`` (auth request) or ``key_response``.
    replay: an attacker re-sends the device's auth request verbatim right
        after the genuine one is answered.
    stale_replay: as ``replay`` but only after the nonce window has passed.
    """

    forged: Set[int] = field(default_factory=set)
    tamper: Dict[int, str] = field(default_factory=dict)
    replay: Set[int] = field(default_factory=set)
    stale_replay: Set[int] = field(default_factory=set)

    def touches(self, i: int) -> bool:
        return i in self.forged or i in self.tamper

    @classmethod
    def random(cls, devices: int, rng: random.Random, rate: float = 0.3) -> "FaultPlan":
        plan = cls()
        kinds = ("payload", "signature", "timestamp", "nonce", "key_response")
        for i in range(devices):
            roll = rng.random()
            if roll >= rate:
                continue
            what = rng.choice(("forged", "tamper", "replay", "stale_replay"))
            if what == "forged":
                plan.forged.add(i)
            elif what == "tamper":
                plan.tamper[i] = rng.choice(kinds)
            elif what == "replay":
                plan.replay.add(i)
            else:
                plan.stale_replay.add(i)
        return plan


@dataclass(frozen=True)
class EventRecord:
    t_ms: float
    seq: int
    sender: str
    receiver: str
    type: str
    outcome: str
    crypto_ms: float

    def to_dict(self) -> dict:
        return {"t_ms": self.t_ms, "seq": self.seq, "from": self.sender,
                "to": self.receiver, "type": self.type, "outcome": self.outcome,
                "crypto_ms": self.crypto_ms}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


@dataclass
class PhaseTimings:
    phases: Dict[str, float] = field(default_factory=lambda: dict.fromkeys(
        ("keygen", "hash", "sign", "verify", "transport"), 0.0))
    tiers: Dict[str, float] = field(default_factory=lambda: dict.fromkeys(
        ("cloud", "fog", "device"), 0.0))

    @property
    def crypto_ms(self) -> float:
        return sum(v for k, v in self.phases.items() if k != "transport")


@dataclass
class SimResult:
    config: SimConfig
    records: List[EventRecord]
    timings: PhaseTimings
    elapsed_ms: float
    init_ms: float
    device_status: Dict[str, str]
    fog_status: Dict[str, str]
    device_index: Dict[str, int] = field(default_factory=dict)

    def __iter__(self):
        # unpacks as (records, timings)
        return iter((self.records, self.timings))

    @property
    def authenticated(self) -> List[str]:
        return [d for d, s in self.device_status.items() if s == "authenticated"]

    def accepted(self) -> List[EventRecord]:
        return [r for r in self.records if r.type == "AuthResult" and r.outcome == "valid"]

    def write_trace(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for rec in self.records:
                fh.write(rec.to_json() + "\n")

    def trace_text(self) -> str:
        return "".join(rec.to_json() + "\n" for rec in self.records)


def protocol_message_count(devices: int, fogs: int = 1) -> int:
    """Messages in a fault-free run: six per device plus four per fog."""
    return 6 * devices + 4 * fogs


# -- entities ---------------------------------------------------------------------

class _Crypto:
    """Runs crypto calls and charges their cost to a phase and tier."""

    def __init__(self, cfg: SimConfig, timings: PhaseTimings):
        self.mode = cfg.crypto_timing
        self.costs = cfg.op_costs_ms
        self.timings = timings
        self.pending = 0.0

    def run(self, op: str, tier: str, fn: Callable, *args):
        t0 = time.perf_counter()
        out = fn(*args)
        if self.mode == "measured":
            cost = (time.perf_counter() - t0) * 1000.0
        elif self.mode == "model":
            cost = self.costs.get(op, 0.0)
        else:
            cost = 0.0
        self.timings.phases[op] += cost
        self.timings.tiers[tier] += cost
        self.pending += cost
        return out

    def take(self) -> float:
        cost, self.pending = self.pending, 0.0
        return cost


class _Authority:
    """Shared behaviour of the cloud and fog nodes: issuing keys and checking
    signed auth requests."""

    tier = "fog"

    def __init__(self, ident: str, curve: CurveParams, spec: HashSpec, rng,
                 window_ms: float, key_mode: str, crypto: Optional[_Crypto] = None):
        self.id = ident
        self.curve = curve
        self.spec = spec
        self.rng = rng
        self.window_ms = window_ms
        self.key_mode = key_mode
        self.crypto = crypto
        self.keypair: Optional[KeyPair] = None
        self.known: Set[str] = set()
        self.issued: Dict[str, Affine] = {}
        self.seen_nonces: Set[Tuple[str, bytes]] = set()

    def _run(self, op, fn, *args):
        if self.crypto is None:
            return fn(*args)
        return self.crypto.run(op, self.tier, fn, *args)

    def _sign(self, data: bytes) -> bytes:
        h = self._run("hash", hash_to_int, data, self.spec, self.curve.n)
        sig = self._run("sign", sign_digest, h, self.keypair, None, self.spec)
        return encode_signature(sig, self.curve)

    def _issue(self, subject: str, public: Optional[Affine]) -> Union[KeyResponse, Reject]:
        if subject not in self.known:
            return Reject(subject, "unknown id")
        private = None
        if public is None:
            if self.key_mode == "self":
                return Reject(subject, "public key required")
            kp = self._run("keygen", keygen, self.curve, self.rng)
            public, private = kp.Q, kp.d
        elif not is_on_curve(public, self.curve):
            return Reject(subject, "public key not on curve")
        sig = self._sign(issuer_payload(self.id, subject, self.curve, public))
        self.issued[subject] = public
        return KeyResponse(self.id, subject, public, sig, private)

    def check_auth(self, req: AuthRequest, now: float) -> AuthResult:
        subject = req.sender
        public = self.issued.get(subject)
        if public is None:
            return AuthResult(subject, False, "not provisioned")
        if abs(now - req.timestamp) > self.window_ms:
            return AuthResult(subject, False, "stale")
        if (subject, req.nonce) in self.seen_nonces:
            return AuthResult(subject, False, "replay")
        try:
            sig = decode_signature(req.signature, self.curve)
        except DecodeError:
            return AuthResult(subject, False, "malformed signature")
        data = auth_payload(req.sender, req.payload, req.timestamp, req.nonce)
        h = self._run("hash", hash_to_int, data, self.spec, self.curve.n)
        ok = self._run("verify", verify_digest, h, sig, public, self.curve)
        if not ok:
            return AuthResult(subject, False, "bad signature")
        self.seen_nonces.add((subject, req.nonce))
        return AuthResult(subject, True, "valid")


class Cloud(_Authority):
    """Cloud tier: fog allowlist, device identity provider, and (in cloud
    mode) the device key issuer and verifier."""

    tier = "cloud"

    def __init__(self, curve, fog_ids, spec=SHA512, rng=None, window_ms=5_000.0,
                 key_mode="issued", crypto=None):
        super().__init__(CLOUD, curve, spec, rng, window_ms, key_mode, crypto)
        self.fogs: Set[str] = set(fog_ids)
        self.known |= self.fogs
        self.devices: Set[str] = set()
        self.counter = 0
        self.keypair = keygen(curve, rng)

    def provision_fog(self, req: FogKeyRequest) -> Union[KeyResponse, Reject]:
        if req.fog_id not in self.fogs:
            return Reject(req.fog_id, "unknown fog id")
        return self._issue(req.fog_id, req.public)

    def confirm_fog(self, req: AuthRequest, now: float) -> AuthResult:
        return self.check_auth(req, now)

    def register_device(self, fog: Optional["FogNode"] = None,
                        issuer: Optional[_Authority] = None) -> DeviceIdAssign:
        """New unique device id; mirrored into ``fog``'s known set."""
        self.counter += 1
        device_id = f"dev-{self.counter:04d}"
        self.devices.add(device_id)
        if fog is not None:
            fog.known.add(device_id)
        issuer = issuer or fog or self
        if issuer is self:
            self.known.add(device_id)
        return DeviceIdAssign(device_id, issuer.id, issuer.keypair.Q)

    def provision_device(self, req: DeviceKeyRequest) -> Union[KeyResponse, Reject]:
        return self._issue(req.device_id, req.public)


class FogNode(_Authority):
    tier = "fog"

    def __init__(self, ident, curve, spec=SHA512, rng=None, window_ms=5_000.0,
                 key_mode="issued", crypto=None):
        super().__init__(ident, curve, spec, rng, window_ms, key_mode, crypto)
        self.cloud_public: Optional[Affine] = None
        self.confirmed = False
        self._own: Optional[KeyPair] = None

    def key_request(self) -> FogKeyRequest:
        if self.key_mode == "self":
            self._own = self._run("keygen", keygen, self.curve, self.rng)
            return FogKeyRequest(self.id, self._own.Q)
        return FogKeyRequest(self.id)

    def accept_keys(self, resp: KeyResponse, issuer_public: Affine) -> bool:
        ok = _check_issuer_sig(self, resp, issuer_public)
        if ok:
            d = resp.private if resp.private is not None else self._own.d
            self.keypair = KeyPair(self.curve, d, resp.public)
            self.cloud_public = issuer_public
        return ok

    def challenge(self, now: int, nonce: bytes, payload: bytes = b"fog-init") -> AuthRequest:
        data = auth_payload(self.id, payload, now, nonce)
        return AuthRequest(self.id, payload, now, nonce, self._sign(data))

    def provision_device(self, req: DeviceKeyRequest) -> Union[KeyResponse, Reject]:
        if self.keypair is None:
            return Reject(req.device_id, "fog not provisioned")
        return self._issue(req.device_id, req.public)

    def authenticate(self, req: AuthRequest, now: float) -> AuthResult:
        return self.check_auth(req, now)


def _check_issuer_sig(holder, resp: KeyResponse, issuer_public: Affine) -> bool:
    if resp.private is not None and not 1 <= resp.private < holder.curve.n:
        return False
    try:
        sig = decode_signature(resp.signature, holder.curve)
    except DecodeError:
        return False
    data = issuer_payload(resp.issuer, resp.subject, holder.curve, resp.public)
    h = holder._run("hash", hash_to_int, data, holder.spec, holder.curve.n)
    return holder._run("verify", verify_digest, h, sig, issuer_public, holder.curve)


class IoTDevice:
    tier = "device"

    def __init__(self, index: int, curve: CurveParams, spec=SHA512, rng=None,
                 key_mode="issued", crypto=None):
        self.index = index
        self.name = f"device#{index}"
        self.id: Optional[str] = None
        self.curve = curve
        self.spec = spec
        self.rng = rng
        self.key_mode = key_mode
        self.crypto = crypto
        self.keypair: Optional[KeyPair] = None
        self.issuer: Optional[str] = None
        self.issuer_public: Optional[Affine] = None
        self._own: Optional[KeyPair] = None
        self.status = "new"

    _run = _Authority._run

    def assign(self, msg: DeviceIdAssign) -> None:
        self.id = msg.device_id
        self.issuer = msg.issuer_id
        self.issuer_public = msg.issuer_public
        self.status = "registered"

    def key_request(self) -> DeviceKeyRequest:
        if self.key_mode == "self":
            self._own = self._run("keygen", keygen, self.curve, self.rng)
            return DeviceKeyRequest(self.id, self._own.Q)
        return DeviceKeyRequest(self.id)

    def accept_keys(self, resp: KeyResponse) -> bool:
        ok = resp.subject == self.id and _check_issuer_sig(self, resp, self.issuer_public)
        if ok:
            d = resp.private if resp.private is not None else self._own.d
            self.keypair = KeyPair(self.curve, d, resp.public)
            self.status = "provisioned"
        else:
            self.status = "bad keys"
        return ok

    def auth_request(self, now: int, nonce: bytes, payload: bytes = b"hello",
                     key: Optional[KeyPair] = None) -> AuthRequest:
        key = key or self.keypair
        data = auth_payload(self.id, payload, now, nonce)
        h = self._run("hash", hash_to_int, data, self.spec, self.curve.n)
        sig = self._run("sign", sign_digest, h, key, None, self.spec)
        return AuthRequest(self.id, payload, now, nonce, encode_signature(sig, self.curve))


# -- event loop -------------------------------------------------------------------

def _flip(data: bytes, rng: random.Random) -> bytes:
    if not data:
        return b"\x01"
    i = rng.randrange(len(data))
    bit = 1 << rng.randrange(8)
    return data[:i] + bytes([data[i] ^ bit]) + data[i + 1:]


class _Simulation:
    def __init__(self, cfg: SimConfig, faults: FaultPlan):
        cfg.validate()
        self.cfg = cfg
        self.faults = faults
        self.curve = registry_get(cfg.curve)
        self.spec = HashSpec(cfg.hash)
        seed = cfg.seed
        self.rng = random.Random(seed) if seed is not None else random.SystemRandom()
        # independent stream for attacker choices so faults don't shift key material
        self.arng = random.Random(None if seed is None else seed ^ 0x5EED)
        self.timings = PhaseTimings()
        self.crypto = _Crypto(cfg, self.timings)
        self.queue: List[tuple] = []
        self.seq = 0
        self.busy: Dict[str, float] = {}
        self.records: List[EventRecord] = []
        fog_ids = [f"fog-{i:02d}" for i in range(cfg.fogs)]
        common = dict(spec=self.spec, rng=self.rng, window_ms=cfg.nonce_window_ms,
                      key_mode=cfg.key_mode, crypto=self.crypto)
        self.cloud = Cloud(self.curve, fog_ids, **common)
        self.fogs = {f: FogNode(f, self.curve, **common) for f in fog_ids}
        self.devices = [IoTDevice(i, self.curve, self.spec, self.rng, cfg.key_mode, self.crypto)
                        for i in range(cfg.devices)]
        self.by_id: Dict[str, IoTDevice] = {}
        self.last_auth: Dict[int, AuthRequest] = {}
        self.init_done = 0
        self.init_ms = 0.0

    # transport

    def _tier(self, name: str) -> str:
        if name == CLOUD:
            return "cloud"
        if name.startswith("fog-"):
            return "fog"
        return "device"

    def latency(self, a: str, b: str) -> float:
        if ATTACKER in (a, b):
            return self.cfg.latency.get("device-fog", 0.0)
        tiers = {self._tier(a), self._tier(b)}
        if tiers == {"device", "fog"}:
            return self.cfg.latency["device-fog"]
        if tiers == {"fog", "cloud"}:
            return self.cfg.latency["fog-cloud"]
        if tiers == {"device", "cloud"}:
            return self.cfg.latency["device-cloud"]
        return 0.0

    def send(self, t: float, sender: str, receiver: str, msg: Message) -> None:
        lat = self.latency(sender, receiver)
        self.timings.phases["transport"] += lat
        self.seq += 1
        heapq.heappush(self.queue, (t + lat, self.seq, sender, receiver, msg))

    def run(self) -> SimResult:
        for fog in self.fogs.values():
            req = fog.key_request()
            self.send(0.0, fog.id, CLOUD, req)
        self.crypto.take()
        now = 0.0
        while self.queue:
            t, seq, sender, receiver, msg = heapq.heappop(self.queue)
            start = max(t, self.busy.get(receiver, 0.0))
            outcome, replies = self.dispatch(start, sender, receiver, msg)
            cost = self.crypto.take()
            end = start + cost
            self.busy[receiver] = end
            self.records.append(EventRecord(round(t, 6), seq, sender, receiver,
                                            type(msg).__name__, outcome, round(cost, 6)))
            src = self.address(receiver)
            for dst, reply, delay in replies:
                self.send(end + delay, src, dst, reply)
            now = max(now, end)
            if not self.queue and self.init_done == len(self.fogs) and not self.init_ms:
                self.init_ms = now or 1e-9
                self.start_devices(now)
        device_status = {(d.id or d.name): d.status for d in self.devices}
        fog_status = {f.id: ("confirmed" if f.confirmed else "unconfirmed")
                      for f in self.fogs.values()}
        index = {(d.id or d.name): d.index for d in self.devices}
        return SimResult(self.cfg, self.records, self.timings, now, self.init_ms,
                         device_status, fog_status, index)

    def start_devices(self, t: float) -> None:
        for dev in self.devices:
            self.send(t, dev.name, CLOUD, DeviceRegister())

    def issuer_for(self, dev: IoTDevice) -> _Authority:
        if self.cfg.mode == "cloud":
            return self.cloud
        fog_ids = sorted(self.fogs)
        return self.fogs[fog_ids[dev.index % len(fog_ids)]]

    def nonce(self) -> bytes:
        return self.rng.getrandbits(128).to_bytes(16, "big")

    # handlers return (outcome, [(destination, message, extra_delay)])

    def dispatch(self, t, sender, receiver, msg):
        if receiver == CLOUD:
            return self.at_cloud(t, sender, msg)
        if receiver in self.fogs:
            return self.at_fog(t, sender, self.fogs[receiver], msg)
        if receiver == ATTACKER:
            return "observed", []
        return self.at_device(t, sender, self.by_name(receiver), msg)

    def address(self, name: str) -> str:
        if name.startswith("device#"):
            dev = self.by_name(name)
            return dev.id or name
        return name

    def by_name(self, name: str) -> IoTDevice:
        if name in self.by_id:
            return self.by_id[name]
        return self.devices[int(name.split("#", 1)[1])]

    def at_cloud(self, t, sender, msg):
        cloud = self.cloud
        if isinstance(msg, FogKeyRequest):
            resp = cloud.provision_fog(msg)
            return ("issued" if isinstance(resp, KeyResponse) else "reject"), [(sender, resp, 0)]
        if isinstance(msg, AuthRequest):
            if sender in self.fogs:
                res = cloud.confirm_fog(msg, t)
            else:
                res = cloud.check_auth(msg, t)
            return ("valid" if res.valid else res.reason), [(sender, res, 0)]
        if isinstance(msg, DeviceRegister):
            dev = self.by_name(sender)
            issuer = self.issuer_for(dev)
            fog = issuer if isinstance(issuer, FogNode) else None
            assign = cloud.register_device(fog=fog, issuer=issuer)
            return "assigned", [(sender, assign, 0)]
        if isinstance(msg, DeviceKeyRequest):
            resp = cloud.provision_device(msg)
            resp = self.maybe_tamper_keys(resp)
            return ("issued" if isinstance(resp, KeyResponse) else "reject"), [(sender, resp, 0)]
        return "ignored", []

    def at_fog(self, t, sender, fog: FogNode, msg):
        if isinstance(msg, KeyResponse):
            if not fog.accept_keys(msg, self.cloud.keypair.Q):
                return "bad keys", []
            return "accepted", [(CLOUD, fog.challenge(int(t), self.nonce()), 0)]
        if isinstance(msg, Reject):
            return "rejected", []
        if isinstance(msg, AuthResult):
            fog.confirmed = msg.valid
            self.init_done += 1
            return ("valid" if msg.valid else "not valid"), []
        if isinstance(msg, DeviceKeyRequest):
            resp = fog.provision_device(msg)
            resp = self.maybe_tamper_keys(resp)
            return ("issued" if isinstance(resp, KeyResponse) else "reject"), [(sender, resp, 0)]
        if isinstance(msg, AuthRequest):
            res = fog.authenticate(msg, t)
            outcome = "valid" if res.valid else res.reason
            return outcome, [(sender, res, 0)]
        return "ignored", []

    def maybe_tamper_keys(self, resp):
        if not isinstance(resp, KeyResponse) or resp.subject not in self.by_id:
            return resp
        dev = self.by_id[resp.subject]
        if self.faults.tamper.get(dev.index) == "key_response":
            return KeyResponse(resp.issuer, resp.subject, resp.public,
                               _flip(resp.signature, self.arng), resp.private)
        return resp

    def at_device(self, t, sender, dev: IoTDevice, msg):
        if isinstance(msg, DeviceIdAssign):
            dev.assign(msg)
            self.by_id[dev.id] = dev
            issuer = msg.issuer_id
            return "registered", [(issuer, dev.key_request(), 0)]
        if isinstance(msg, Reject):
            dev.status = "rejected"
            return "rejected", []
        if isinstance(msg, KeyResponse):
            if not dev.accept_keys(msg):
                return "bad keys", []
            return "provisioned", [(dev.issuer, self.device_auth(dev, int(t)), 0)]
        if isinstance(msg, AuthResult):
            if msg.valid:
                dev.status = "authenticated"
            elif dev.status != "authenticated":
                dev.status = "auth failed"
            i = dev.index
            if msg.valid and i in self.faults.replay | self.faults.stale_replay:
                original = self.last_auth[i]
                delay = 0.0
                if i in self.faults.stale_replay:
                    delay = self.cfg.nonce_window_ms + 1.0
                self.send(t + delay, ATTACKER, dev.issuer, original)
            return ("valid" if msg.valid else "not valid"), []
        return "ignored", []

    def device_auth(self, dev: IoTDevice, now: int) -> AuthRequest:
        i = dev.index
        nonce = self.nonce()
        if i in self.faults.forged:
            impostor = keygen(self.curve, self.arng)
            req = dev.auth_request(now, nonce, key=impostor)
        else:
            req = dev.auth_request(now, nonce)
        self.last_auth[i] = req
        kind = self.faults.tamper.get(i)
        if kind == "payload":
            req = AuthRequest(req.sender, _flip(req.payload, self.arng), req.timestamp,
                              req.nonce, req.signature)
        elif kind == "signature":
            req = AuthRequest(req.sender, req.payload, req.timestamp, req.nonce,
                              _flip(req.signature, self.arng))
        elif kind == "timestamp":
            req = AuthRequest(req.sender, req.payload, req.timestamp - 1, req.nonce,
                              req.signature)
        elif kind == "nonce":
            req = AuthRequest(req.sender, req.payload, req.timestamp,
                              _flip(req.nonce, self.arng), req.signature)
        return req


def run_simulation(cfg: SimConfig, faults: Optional[FaultPlan] = None) -> SimResult:
    """Run the initialization phase, then authenticate every device.

    Returns a ``SimResult`` (which also unpacks as ``records, timings``).
    Protocol rejections show up as outcomes in the log, never as errors.
    """
    return _Simulation(cfg, faults or FaultPlan()).run()
