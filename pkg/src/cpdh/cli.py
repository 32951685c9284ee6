"""Command-line entry point: ``cpdh <subcommand> ...``.

Results go to stdout as ``key: value`` lines; diagnostics go to stderr.
Exit codes: 0 ok, 2 validation failure, 3 scale refusal, 4 protocol error.
"""

from __future__ import annotations

import argparse
import random
import sys
import time
from pathlib import Path

from . import dh, dlog, ring
from .cubic import CubicParams
from .errors import (
    CPDHError,
    NotFoundError,
    ParameterError,
    ProtocolError,
    ScaleError,
    UnfactoredError,
    ValidationError,
)
from .field import FieldParams, OpCounter
from .formats import decode_frame
from .group import GroupVector, count_cubic_points, oplus, parse_point

EXIT_OK, EXIT_VALIDATION, EXIT_SCALE, EXIT_PROTOCOL = 0, 2, 3, 4


def emit(**pairs) -> None:
    for k, v in pairs.items():
        if isinstance(v, bool):
            v = str(v).lower()
        print(f"{k}: {v}")
    sys.stdout.flush()


def _read(path: str) -> str:
    return Path(path).read_text()


def _coeffs(args) -> tuple[int, int, int] | None:
    given = [args.c1, args.c2, args.c3]
    if all(v is None for v in given):
        return None
    if any(v is None for v in given):
        raise ParameterError("--c1, --c2 and --c3 must be given together")
    return tuple(given)


def _fmt_factors(factors) -> str:
    return "*".join(f"{r}^{e}" if e > 1 else str(r) for r, e in factors)


# --- subcommands --------------------------------------------------------


def cmd_params(args) -> int:
    coeffs = _coeffs(args)
    if coeffs is not None and any(not 0 <= v < args.p for v in coeffs):
        raise ParameterError("coefficients must be residues mod p")
    s = dh.system_setup(args.p, seed=args.seed, coeffs=coeffs, generator=args.g)
    text = dh.dump_params(s)
    if args.out:
        Path(args.out).write_text(text)
    c1, c2, c3 = s.cubic.coeffs
    emit(
        p=s.field.p, c1=c1, c2=c2, c3=c3, g=s.generator, ell=s.order.ell,
        ell_prime=s.order.is_prime, ell_factors=_fmt_factors(s.order.prime_factors),
        irreducible=True,
    )
    if args.out:
        emit(written=args.out)
    return EXIT_OK


def _load_share(path: str) -> str:
    text = _read(path).strip()
    if text.startswith("CPDH1"):
        return decode_frame(text + "\n").point
    return text


def cmd_dh(args) -> int:
    rng = random.Random(args.seed) if args.seed is not None else None
    endpoint = (args.host, args.port)
    if args.mode == "local":
        s = dh.load_params(_read(args.params))
        a = dh.keygen(s, rng, args.secret)
        emit(public_a=a.public_point)
        if args.peer_share:
            shared = dh.derive_shared(s, a, _load_share(args.peer_share))
            emit(shared_a=shared.point, digest_a=shared.hex)
            return EXIT_OK
        b = dh.keygen(s, rng, args.peer_secret)
        emit(public_b=b.public_point)
        ka = dh.derive_shared(s, a, b.public_point)
        kb = dh.derive_shared(s, b, a.public_point)
        emit(shared_a=ka.point, shared_b=kb.point, digest_a=ka.hex, digest_b=kb.hex)
        emit(match=ka.derived_bytes == kb.derived_bytes)
        return EXIT_OK if ka.derived_bytes == kb.derived_bytes else EXIT_VALIDATION
    params = dh.load_params(_read(args.params)) if args.params else None
    shared = dh.run_exchange_over_socket(
        params, args.mode, endpoint, secret=args.secret, rng=rng, timeout=args.timeout,
        on_listening=lambda addr: emit(port=addr[1]),
    )
    emit(shared=shared.point, digest=shared.hex)
    return EXIT_OK


def cmd_dlog(args) -> int:
    s = dh.load_params(_read(args.params))
    c = s.cubic
    base = parse_point(s.field, args.base) if args.base else s.generator
    target = parse_point(s.field, args.target)
    inst = dlog.DlogInstance(c, base, target, s.order)
    if args.method == "brute":
        n = dlog.dlog_bruteforce(inst, args.cap)
        if n is None:
            raise NotFoundError(f"no n <= {args.cap} with [n]base = target")
    elif args.method == "bsgs":
        n = dlog.dlog_bsgs(inst)
    elif args.method == "ph":
        n = dlog.dlog_pohlig_hellman(inst)
    else:
        n = dlog.dlog_extension(inst, args.seed)
    emit(method=args.method, n=n)
    return EXIT_OK


def cmd_count(args) -> int:
    F = FieldParams(args.p)
    coeffs = _coeffs(args)
    if coeffs is None:
        raise ParameterError("count needs --c1 --c2 --c3")
    c = CubicParams.from_ints(F, *coeffs)
    curve, group = count_cubic_points(c, F)
    p = F.p
    if c.irreducible:
        allowed, ok = "{0}", curve == 0
    else:
        allowed_set = sorted({p + 2, 2 * p + 1, 3 * p, p + 1})
        allowed, ok = "{" + ",".join(map(str, allowed_set)) + "}", curve in allowed_set
    emit(
        p=p, irreducible=c.irreducible, curve_points=curve, group_points=group,
        allowed=allowed, verdict="PASS" if ok else "FAIL",
    )
    return EXIT_OK if ok else EXIT_VALIDATION


def cmd_bench(args) -> int:
    if args.params:
        s = dh.load_params(_read(args.params))
        c = s.cubic
    elif args.p is not None:
        coeffs = _coeffs(args)
        if coeffs is None:
            r = random.Random(args.seed)
            while True:
                c = CubicParams.from_ints(args.p, r.randrange(args.p), r.randrange(args.p), r.randrange(1, args.p))
                if c.irreducible:
                    break
        else:
            c = CubicParams.from_ints(args.p, *coeffs)
    else:
        raise ParameterError("bench needs --params or --p")
    r = random.Random(args.seed)
    p = c.p
    x = GroupVector.from_ints(c.field, r.randrange(p), r.randrange(p), 1)
    y = GroupVector.from_ints(c.field, r.randrange(p), 1, r.randrange(p))
    ctr = OpCounter()
    t0 = time.perf_counter()
    with ctr:
        for _ in range(args.iters):
            x = oplus(c, x, y)
    elapsed = time.perf_counter() - t0
    n = args.iters
    emit(
        p=p, iters=n,
        adds_per_op=f"{ctr.adds / n:g}" if n else 0,
        muls_per_op=f"{ctr.muls / n:g}" if n else 0,
        total_adds=ctr.adds, total_muls=ctr.muls,
        seconds=f"{elapsed:.6f}",
        ops_per_second=f"{n / elapsed:.1f}" if n and elapsed > 0 else 0,
    )
    return EXIT_OK


def _ring_system(args) -> "ring.RingSystem":
    if args.params:
        return ring.load_ring_system(_read(args.params))
    if args.p is None or args.q is None:
        raise ParameterError("ring commands need --params or both --p and --q")
    coeffs = _coeffs(args)
    if coeffs is None:
        return ring.ring_setup(args.p, args.q, args.seed)
    rp = ring.RingParams(args.p, args.q, *coeffs)
    return ring.RingSystem(rp, ring.paired_generator(rp, args.seed))


def cmd_ring(args) -> int:
    if args.ring_cmd == "order":
        if args.params:
            rp = ring.load_ring_system(_read(args.params)).params
        elif _coeffs(args) is not None:
            rp = ring.RingParams(args.p, args.q, *_coeffs(args))
        else:
            rp = ring.find_ring_cubic(args.p, args.q, args.seed)
        o = ring.ring_group_order(rp)
        emit(
            p=rp.p, q=rp.q, m=rp.m, c1=rp.c1, c2=rp.c2, c3=rp.c3, a=rp.a, b=rp.b, d=rp.d,
            order=o.order, cyclic=o.cyclic, cyclic_subgroup_order=o.cyclic_subgroup_order,
        )
        return EXIT_OK
    if args.ring_cmd == "dh" and args.mode == "connect" and not (args.params or args.p):
        rs = None
    else:
        rs = _ring_system(args)
    if args.ring_cmd == "params":
        text = ring.dump_ring_system(rs)
        if args.out:
            Path(args.out).write_text(text)
        emit(**rs.to_fields())
        return EXIT_OK
    # dh
    rng = random.Random(args.seed)
    if args.mode == "local":
        rp, g = rs.params, rs.generator
        n = rp.a * rp.b // rp.d
        na = args.secret if args.secret is not None else rng.randrange(1, n)
        nb = args.peer_secret if args.peer_secret is not None else rng.randrange(1, n)
        pub_a, pub_b = ring.ring_scalar_mul(rp, na, g), ring.ring_scalar_mul(rp, nb, g)
        ka, kb = ring.ring_scalar_mul(rp, na, pub_b), ring.ring_scalar_mul(rp, nb, pub_a)
        da, db = ring.ring_digest(ka).hex(), ring.ring_digest(kb).hex()
        emit(public_a=pub_a.encode(), public_b=pub_b.encode(), shared_a=ka.encode(),
             shared_b=kb.encode(), digest_a=da, digest_b=db, match=da == db)
        return EXIT_OK if da == db else EXIT_VALIDATION
    shared = dh.run_exchange_over_socket(
        rs, args.mode, (args.host, args.port), secret=args.secret, rng=rng,
        timeout=args.timeout, on_listening=lambda addr: emit(port=addr[1]),
    )
    emit(shared=shared.point.encode(), digest=shared.hex)
    return EXIT_OK


# --- parser -------------------------------------------------------------


def _add_coeffs(p: argparse.ArgumentParser) -> None:
    p.add_argument("--c1", type=int)
    p.add_argument("--c2", type=int)
    p.add_argument("--c3", type=int)


def _add_net(p: argparse.ArgumentParser) -> None:
    p.add_argument("--mode", choices=("local", "listen", "connect"), default="local")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=0)
    p.add_argument("--timeout", type=float, default=10.0)
    p.add_argument("--secret", type=int, help="own secret exponent")
    p.add_argument("--peer-secret", type=int, help="second party's secret (local mode)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cpdh", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="cmd", required=True)

    sp = sub.add_parser("params", help="generate or validate system parameters")
    sp.add_argument("--p", type=int, required=True)
    _add_coeffs(sp)
    sp.add_argument("--g", help="generator as [x1,x2,x3]")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_params)

    sp = sub.add_parser("dh", help="run the key agreement")
    sp.add_argument("--params")
    sp.add_argument("--peer-share", help="file holding a peer SHARE frame or [x1,x2,x3]")
    sp.add_argument("--seed", type=int)
    _add_net(sp)
    sp.set_defaults(func=cmd_dh)

    sp = sub.add_parser("dlog", help="solve a discrete logarithm")
    sp.add_argument("--params", required=True)
    sp.add_argument("--base", help="defaults to the parameter file's generator")
    sp.add_argument("--target", required=True)
    sp.add_argument("--method", choices=("brute", "bsgs", "ph", "ext"), default="bsgs")
    sp.add_argument("--cap", type=int, default=dlog.BRUTE_CAP_LIMIT)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_dlog)

    sp = sub.add_parser("count", help="count points of the cubic curve Q = 0")
    sp.add_argument("--p", type=int, required=True)
    _add_coeffs(sp)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_count)

    sp = sub.add_parser("bench", help="operation counts and throughput of the group law")
    sp.add_argument("--params")
    sp.add_argument("--p", type=int)
    _add_coeffs(sp)
    sp.add_argument("--iters", type=int, default=10_000)
    sp.add_argument("--seed", type=int)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("ring", help="the variant over Z/pqZ")
    rsub = sp.add_subparsers(dest="ring_cmd", required=True)
    for name in ("order", "params", "dh"):
        r = rsub.add_parser(name)
        r.add_argument("--params")
        r.add_argument("--p", type=int)
        r.add_argument("--q", type=int)
        _add_coeffs(r)
        r.add_argument("--seed", type=int)
        if name == "params":
            r.add_argument("--out")
        if name == "dh":
            _add_net(r)
    sp.set_defaults(func=cmd_ring)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.verbose:
        import logging

        logging.basicConfig(level=logging.INFO, stream=sys.stderr)
    try:
        return args.func(args)
    except (ScaleError, UnfactoredError) as exc:
        print(f"error: scale refusal: {exc}", file=sys.stderr)
        return EXIT_SCALE
    except ValidationError as exc:
        print(f"error: validation failed: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except ProtocolError as exc:
        print(f"error: protocol [{exc.code}]: {exc}", file=sys.stderr)
        return EXIT_PROTOCOL
    except (CPDHError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION


if __name__ == "__main__":
    sys.exit(main())
