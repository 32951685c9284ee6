"""System set-up and Diffie-Hellman key agreement on the projective group."""

from __future__ import annotations

import hashlib
import logging
import random
import socket
from dataclasses import dataclass
from typing import Callable

from .cubic import CubicParams, q_eval
from .errors import (
    ConnectionLostError,
    DigestMismatchError,
    ParameterError,
    ProtocolError,
    RetryExhaustedError,
    ValidationError,
)
from .ext import ext_order
from .field import FieldParams
from .formats import Frame, decode_frame, dump_kv, encode_frame, parse_kv, require_keys, MAX_FRAME
from .group import (
    GroupOrder,
    GroupVector,
    ProjPoint,
    canonicalize,
    find_generator,
    group_order,
    is_generator,
    is_identity,
    parse_point,
    parse_triple,
    scalar_mul,
)

log = logging.getLogger(__name__)

SETUP_TRIALS = 200
PARAM_KEYS = ("p", "c1", "c2", "c3", "g")


@dataclass(frozen=True)
class SystemParams:
    field: FieldParams
    cubic: CubicParams
    generator: ProjPoint
    order: GroupOrder

    def to_fields(self) -> dict[str, str]:
        c1, c2, c3 = self.cubic.coeffs
        return {
            "p": str(self.field.p), "c1": str(c1), "c2": str(c2), "c3": str(c3),
            "g": self.generator.encode(),
        }


@dataclass(frozen=True)
class KeyPair:
    secret: int
    public_point: ProjPoint

    def __repr__(self):
        return f"KeyPair(secret=<hidden>, public_point={self.public_point})"


@dataclass(frozen=True)
class SharedSecret:
    point: ProjPoint
    derived_bytes: bytes

    @property
    def hex(self) -> str:
        return self.derived_bytes.hex()


def digest(point) -> bytes:
    """SHA-256 of the canonical ``[x1,x2,x3]`` text."""
    return hashlib.sha256(point.encode().encode("ascii")).digest()


def validate_system(s: SystemParams) -> None:
    if not s.cubic.irreducible:
        raise ParameterError("chi is reducible over the base field")
    if s.generator.field.p != s.field.p:
        raise ParameterError("generator lives in a different field")
    if not is_generator(s.cubic, s.generator, s.order):
        raise ParameterError(f"{s.generator} does not have order {s.order.ell}")


def system_setup(
    p: int,
    seed: int | None = None,
    coeffs: tuple[int, int, int] | None = None,
    generator: str | ProjPoint | None = None,
) -> SystemParams:
    """Build validated system parameters over F_p.

    Without ``coeffs``, chi is drawn at random (c3 != 0) until irreducible.
    Without ``generator``, a random generator of (F_{p^3})^* is projected.
    """
    F = FieldParams(p)
    rng = random.Random(seed)
    if coeffs is not None:
        cubic = CubicParams.from_ints(F, *coeffs)
        if not cubic.irreducible:
            raise ParameterError(f"chi with coefficients {coeffs} is reducible mod {p}")
    else:
        for _ in range(SETUP_TRIALS):
            cubic = CubicParams.from_ints(F, rng.randrange(p), rng.randrange(p), rng.randrange(1, p))
            if cubic.irreducible:
                break
        else:
            raise RetryExhaustedError(f"no irreducible cubic found in {SETUP_TRIALS} trials")
    order = group_order(F)
    if generator is None:
        g = find_generator(cubic, order, dict(ext_order(p).prime_factors), rng)
    else:
        g = parse_point(F, generator) if isinstance(generator, str) else generator
    s = SystemParams(F, cubic, g, order)
    validate_system(s)
    return s


def keygen(s: SystemParams, rng: random.Random | int | None = None, secret: int | None = None) -> KeyPair:
    """Secret uniform in [1, ell) unless forced; public = [secret]g."""
    ell = s.order.ell
    if secret is None:
        if not isinstance(rng, random.Random):
            rng = random.SystemRandom() if rng is None else random.Random(rng)
        secret = rng.randrange(1, ell)
    elif not 1 <= secret < ell:
        raise ParameterError(f"secret must lie in [1, {ell})")
    return KeyPair(secret, scalar_mul(s.cubic, secret, s.generator))


def validate_share(s: SystemParams, share) -> ProjPoint:
    """Check a peer's public point: canonical, nonzero, off the curve, not the identity.

    ``share`` may be a ProjPoint, a raw triple, or ``[x1,x2,x3]`` text.
    """
    if isinstance(share, ProjPoint):
        vals = share.values
    elif isinstance(share, str):
        try:
            vals = parse_triple(share)
        except ValueError as exc:
            raise ValidationError(str(exc)) from exc
    else:
        vals = tuple(int(v) for v in share)
    p = s.field.p
    if any(not 0 <= v < p for v in vals):
        raise ValidationError(f"coordinates of {list(vals)} are not residues mod {p}")
    if vals == (0, 0, 0):
        raise ValidationError("peer share is the zero vector")
    vec = GroupVector.from_ints(s.field, *vals)
    if q_eval(s.cubic, vec).value == 0:
        raise ValidationError(f"peer share {list(vals)} lies on the cubic curve (Q = 0)")
    pt = canonicalize(vec)
    if pt.values != vals:
        raise ValidationError(f"peer share {list(vals)} is not in canonical form")
    if is_identity(pt):
        raise ValidationError("peer share is the identity")
    return pt


def derive_shared(s: SystemParams, own: KeyPair, peer_public) -> SharedSecret:
    peer = validate_share(s, peer_public)
    point = scalar_mul(s.cubic, own.secret, peer)
    return SharedSecret(point, digest(point))


# --- parameter files ----------------------------------------------------


def params_from_fields(kv: dict[str, str]) -> SystemParams:
    require_keys(kv, PARAM_KEYS)
    p = int(kv["p"])
    coeffs = tuple(int(kv[k]) for k in ("c1", "c2", "c3"))
    if any(not 0 <= v < p for v in coeffs):
        raise ParameterError("coefficients must be residues mod p")
    return system_setup(p, coeffs=coeffs, generator=kv["g"])


def load_params(text: str) -> SystemParams:
    return params_from_fields(parse_kv(text))


def dump_params(s: SystemParams) -> str:
    return dump_kv(s.to_fields(), header=f"ell={s.order.ell}")


# --- socket session -----------------------------------------------------


class _FieldSuite:
    ring = False

    def __init__(self, s: SystemParams):
        self.s = s

    @classmethod
    def from_frame(cls, frame: Frame) -> "_FieldSuite":
        try:
            return cls(params_from_fields(frame.fields))
        except (ParameterError, ValueError) as exc:
            raise ValidationError(f"rejected parameters: {exc}") from exc

    def fields(self):
        return self.s.to_fields()

    def keygen(self, rng, secret):
        kp = keygen(self.s, rng, secret)
        return kp.secret, kp.public_point

    def shared(self, secret, share_text):
        pt = validate_share(self.s, share_text)
        point = scalar_mul(self.s.cubic, secret, pt)
        return SharedSecret(point, digest(point))


class _RingSuite:
    ring = True

    def __init__(self, rs):
        self.rs = rs

    @classmethod
    def from_frame(cls, frame: Frame) -> "_RingSuite":
        from .ring import ring_system_from_fields

        try:
            return cls(ring_system_from_fields(frame.fields))
        except (ParameterError, ValueError) as exc:
            raise ValidationError(f"rejected ring parameters: {exc}") from exc

    def fields(self):
        return self.rs.to_fields()

    def keygen(self, rng, secret):
        from .ring import ring_scalar_mul

        rp = self.rs.params
        n = rp.a * rp.b // rp.d
        if secret is None:
            if not isinstance(rng, random.Random):
                rng = random.SystemRandom() if rng is None else random.Random(rng)
            secret = rng.randrange(1, n)
        return secret, ring_scalar_mul(rp, secret, self.rs.generator)

    def shared(self, secret, share_text):
        from .ring import RingPoint, ring_canonicalize, ring_digest, ring_membership, ring_scalar_mul

        rp = self.rs.params
        vals = parse_triple(share_text)
        if any(v >= rp.m for v in vals) or vals == (0, 0, 0):
            raise ValidationError(f"bad ring share {share_text}")
        pt = RingPoint(*vals)
        if not ring_membership(rp, pt):
            raise ValidationError(f"ring share {share_text} has non-unit Q")
        if ring_canonicalize(rp, pt) != pt:
            raise ValidationError(f"ring share {share_text} is not canonical")
        point = ring_scalar_mul(rp, secret, pt)
        return SharedSecret(point, ring_digest(point))


def _suite_for(params):
    if params is None:
        return None
    if isinstance(params, SystemParams):
        return _FieldSuite(params)
    return _RingSuite(params)


class _LineChannel:
    def __init__(self, sock: socket.socket):
        self.sock = sock
        self.reader = sock.makefile("rb")

    def send(self, frame: Frame) -> None:
        try:
            self.sock.sendall(encode_frame(frame))
        except OSError as exc:
            raise ConnectionLostError(f"send failed: {exc}") from exc

    def recv(self, kind: str, ring: bool) -> Frame:
        try:
            line = self.reader.readline(MAX_FRAME + 1)
        except OSError as exc:
            raise ConnectionLostError(f"receive failed: {exc}") from exc
        if not line:
            raise ConnectionLostError(f"peer closed the connection while waiting for {kind}")
        frame = decode_frame(line)
        if frame.kind != kind or frame.ring != ring:
            raise ProtocolError(f"expected {'RING ' if ring else ''}{kind}, got {frame.kind}")
        return frame

    def close(self):
        self.reader.close()
        self.sock.close()


def _session(chan: _LineChannel, suite, role: str, rng, secret) -> SharedSecret:
    if role == "listen":
        chan.send(Frame("PARAMS", suite.ring, fields=suite.fields()))
    else:
        first = chan.recv("PARAMS", suite.ring if suite else _peek_ring(chan))
        received = (_RingSuite if first.ring else _FieldSuite).from_frame(first)
        if suite is not None and received.fields() != suite.fields():
            raise ValidationError("listener parameters differ from the expected ones")
        suite = received
    own_secret, public = suite.keygen(rng, secret)
    chan.send(Frame("SHARE", suite.ring, point=public.encode()))
    peer = chan.recv("SHARE", suite.ring)
    shared = suite.shared(own_secret, peer.point)
    chan.send(Frame("CONFIRM", suite.ring, digest=shared.hex))
    confirm = chan.recv("CONFIRM", suite.ring)
    if confirm.digest != shared.hex:
        raise DigestMismatchError("peer derived a different key")
    log.info("%s: shared digest %s", role, shared.hex)
    return shared


def _peek_ring(chan: _LineChannel) -> bool:
    head = chan.reader.peek(16)[:16]
    return head.startswith(b"CPDH1 RING ")


def run_exchange_over_socket(
    params,
    role: str,
    endpoint: tuple[str, int],
    secret: int | None = None,
    rng: random.Random | int | None = None,
    timeout: float = 10.0,
    on_listening: Callable[[tuple[str, int]], None] | None = None,
) -> SharedSecret:
    """One key-agreement session over TCP.

    The listener sends PARAMS first; the connector validates them (and, if
    it was given ``params`` itself, checks they match). Both then exchange
    SHARE and CONFIRM frames. ``params`` may be SystemParams, a ring
    system, or None for a connector that accepts whatever it receives.
    """
    suite = _suite_for(params)
    if role == "listen":
        if suite is None:
            raise ParameterError("the listener must own the parameters")
        with socket.create_server(endpoint) as srv:
            srv.settimeout(timeout)
            if on_listening:
                on_listening(srv.getsockname()[:2])
            try:
                conn, _ = srv.accept()
            except OSError as exc:
                raise ConnectionLostError(f"no peer connected: {exc}") from exc
    elif role == "connect":
        try:
            conn = socket.create_connection(endpoint, timeout=timeout)
        except OSError as exc:
            raise ConnectionLostError(f"cannot connect to {endpoint}: {exc}") from exc
    else:
        raise ValueError(f"role must be 'listen' or 'connect', not {role!r}")
    conn.settimeout(timeout)
    chan = _LineChannel(conn)
    try:
        return _session(chan, suite, role, rng, secret)
    finally:
        chan.close()
