"""Text formats: key=value parameter files and the CPDH1 line protocol.

Frames are single ASCII lines terminated by ``\\n``::

    CPDH1 PARAMS p=131 c1=13 c2=18 c3=73 g=[126,16,1]
    CPDH1 SHARE [117,130,1]
    CPDH1 CONFIRM <64 hex digits>

Ring-mode frames insert ``RING`` after the magic, and their PARAMS frame
carries an extra ``q=`` field.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import BadMagicError, MalformedFrameError

MAGIC = "CPDH1"
MAX_FRAME = 4096
KINDS = ("PARAMS", "SHARE", "CONFIRM")

_TRIPLE = re.compile(r"^\[\d+,\d+,\d+\]$")
_HEX64 = re.compile(r"^[0-9a-f]{64}$")
_DEC = re.compile(r"^\d+$")


def parse_kv(text: str) -> dict[str, str]:
    """Parse ``key=value`` lines; blank lines and ``#`` comments are ignored."""
    out: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"line {lineno}: expected key=value, got {raw!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        if key in out:
            raise ValueError(f"line {lineno}: duplicate key {key!r}")
        out[key] = value
    return out


def dump_kv(items: dict[str, object], header: str | None = None) -> str:
    lines = [f"# {header}"] if header else []
    lines += [f"{k}={v}" for k, v in items.items()]
    return "\n".join(lines) + "\n"


def require_keys(kv: dict[str, str], keys: tuple[str, ...]) -> None:
    missing = [k for k in keys if k not in kv]
    extra = [k for k in kv if k not in keys]
    if missing or extra:
        raise ValueError(f"parameter keys: missing {missing}, unexpected {extra}")


@dataclass(frozen=True)
class Frame:
    kind: str
    ring: bool = False
    fields: dict[str, str] = field(default_factory=dict)
    point: str | None = None
    digest: str | None = None


def encode_frame(frame: Frame) -> bytes:
    parts = [MAGIC]
    if frame.ring:
        parts.append("RING")
    parts.append(frame.kind)
    if frame.kind == "PARAMS":
        parts += [f"{k}={v}" for k, v in frame.fields.items()]
    elif frame.kind == "SHARE":
        parts.append(frame.point)
    elif frame.kind == "CONFIRM":
        parts.append(frame.digest)
    else:
        raise MalformedFrameError(f"unknown frame kind {frame.kind!r}")
    return (" ".join(parts) + "\n").encode("ascii")


def decode_frame(line: bytes | str) -> Frame:
    if isinstance(line, bytes):
        if len(line) > MAX_FRAME:
            raise MalformedFrameError("frame too long")
        try:
            line = line.decode("ascii")
        except UnicodeDecodeError as exc:
            raise MalformedFrameError("frame is not ASCII") from exc
    if not line.endswith("\n"):
        raise MalformedFrameError("frame is not newline-terminated")
    tokens = line[:-1].split(" ")
    if not tokens or tokens[0] != MAGIC:
        raise BadMagicError(f"bad magic in frame {line.strip()!r}")
    tokens = tokens[1:]
    ring = bool(tokens) and tokens[0] == "RING"
    if ring:
        tokens = tokens[1:]
    if not tokens or tokens[0] not in KINDS:
        raise MalformedFrameError(f"unknown frame kind in {line.strip()!r}")
    kind, args = tokens[0], tokens[1:]
    if kind == "PARAMS":
        keys = ("p", "q", "c1", "c2", "c3", "g") if ring else ("p", "c1", "c2", "c3", "g")
        fields: dict[str, str] = {}
        for arg in args:
            k, sep, v = arg.partition("=")
            if not sep or k in fields:
                raise MalformedFrameError(f"bad PARAMS field {arg!r}")
            fields[k] = v
        if tuple(fields) != keys:
            raise MalformedFrameError(f"PARAMS fields must be {keys}")
        for k, v in fields.items():
            ok = _TRIPLE.match(v) if k == "g" else _DEC.match(v)
            if not ok:
                raise MalformedFrameError(f"bad value for {k}: {v!r}")
        return Frame(kind, ring, fields=fields)
    if len(args) != 1:
        raise MalformedFrameError(f"{kind} takes exactly one argument")
    if kind == "SHARE":
        if not _TRIPLE.match(args[0]):
            raise MalformedFrameError(f"bad point {args[0]!r}")
        return Frame(kind, ring, point=args[0])
    if not _HEX64.match(args[0]):
        raise MalformedFrameError(f"bad digest {args[0]!r}")
    return Frame(kind, ring, digest=args[0])
