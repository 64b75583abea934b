"""Command-line entry point: ``frobtest {test,audit,bench,search}``.

Every command writes one JSON object per line.  Exit status is 0 for a
probable prime (or an audit with no violated bound), 1 for a composite
(or a violated bound), 2 for usage errors.
"""

from __future__ import annotations

import argparse
import json
import secrets
import sys

from . import audit as aud
from .arith import DEFAULT_BOUND, factorize_small, is_square
from .bench import bench_rows
from .meter import Meter
from .prp import COMPOSITE, PROBABLE_PRIME, is_prime_small, make_rng, rqft


def parse_number(text: str) -> int:
    s = text.strip().replace("_", "")
    try:
        if s.lower().startswith(("0x", "-0x")):
            return int(s, 16)
        return int(s, 10)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def _positive(text: str) -> int:
    v = parse_number(text)
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}")
    return v


def emit(record: dict, out, fmt: str = "json") -> None:
    if fmt == "text":
        line = "  ".join(f"{k}={v}" for k, v in record.items())
    else:
        line = json.dumps(record)
    out.write(line + "\n")


def cmd_test(args, out) -> int:
    n = args.n
    seed = args.seed if args.seed is not None else secrets.randbits(64)
    meter = Meter()
    witness = None
    if n < 2:
        verdict, reason = COMPOSITE, "less_than_two"
    elif n % 2 == 0:
        verdict, reason = (PROBABLE_PRIME, "two") if n == 2 else (COMPOSITE, "even")
        witness = None if n == 2 else 2
    else:
        v = rqft(n, args.B, make_rng(seed), args.k, meter=meter)
        verdict, reason = v.outcome, v.reason.value
        witness = v.witness if v.is_composite else v.step5_witness
        if isinstance(witness, tuple):
            witness = list(witness)
    rep = meter.report(n) if n > 1 else None
    record = {"command": "test", "n": n, "verdict": verdict, "reason": reason,
              "witness": witness, "mults": meter.mults,
              "aux_ops": rep.aux_ops if rep else {},
              "selfridges": rep.selfridges if rep else 0.0,
              "seed": seed, "B": args.B, "k": args.k}
    emit(record, out, args.output)
    return 0 if verdict == PROBABLE_PRIME else 1


def _prime_records(p: int, cap: int):
    for e1 in (-1, 1):
        for e2 in (-1, 1):
            yield aud.census_pairs(p, e1, e2, cap=cap).as_dict()


def _composite_records(n: int, args):
    factors = factorize_small(n)
    if not is_square(n):
        m_n = aud.census_m(n, cap=args.cap)
        yield {"record": "m_census", "n": n, "m_n": m_n, "bound": n * n / 4,
               "holds": aud.m_bound_holds(n, m_n)}
    if aud.mobius(factors) != 0:
        for e1 in (-1, 1):
            for e2 in (-1, 1):
                yield aud.census_pairs_composite(n, e1, e2, cap=args.cap).as_dict()
    pc = aud.census_pass(n, args.B, args.skip_steps12, cap=args.cap, jobs=args.jobs)
    rec = pc.as_dict()
    rec["holds"] = not pc.discrepancies
    yield rec
    for p in sorted(factors):
        if p <= aud.PRIME_CAP:
            yield aud.census_lemma28(n, p).as_dict()
    d = aud.diagnostic(n, factors)
    rec = d.as_dict(args.B)
    rec["holds"] = rec["ratio_exceeds_one"]
    yield rec


def cmd_audit(args, out) -> int:
    if not args.n and args.prop22 is None:
        raise aud.CapExceeded("audit needs at least one n or --prop22 p")
    jobs = []
    if args.prop22 is not None:
        jobs.append(("prime", args.prop22))
    for n in sorted(args.n):
        if n < 3 or not n & 1:
            raise ValueError(f"audit needs odd n >= 3, got {n}")
        jobs.append(("prime" if is_prime_small(n) else "composite", n))
    records = []
    for kind, n in jobs:
        gen = _prime_records(n, aud.PRIME_CAP) if kind == "prime" else _composite_records(n, args)
        records.extend(gen)
    ok = True
    for rec in records:
        rec = {"command": "audit", **rec}
        ok &= bool(rec.get("holds", True))
        emit(rec, out, args.output)
    return 0 if ok else 1


def cmd_bench(args, out) -> int:
    for row in bench_rows(args.bits, args.samples, args.seed, primes=args.primes,
                          naive=not args.no_naive):
        emit(row, out, args.output)
    return 0


def cmd_search(args, out) -> int:
    for rec in aud.search_survivors(args.lo, args.hi, args.samples, args.seed,
                                    args.B, args.skip_steps12):
        emit(rec, out, args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="frobtest", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def bound(p):
        p.add_argument("-B", "--B", type=_positive, default=DEFAULT_BOUND,
                       help="trial division bound and parameter-draw cutoff (default 50000)")

    def output(p):
        p.add_argument("--output", choices=("json", "text"), default="json",
                       help="json lines (stable) or key=value text")

    t = sub.add_parser("test", help="run the randomized QFT on one number")
    t.add_argument("n", type=parse_number)
    bound(t)
    t.add_argument("-k", "--k", type=_positive, default=1, help="iterations")
    t.add_argument("--seed", type=parse_number, default=None)
    output(t)
    t.set_defaults(func=cmd_test)

    a = sub.add_parser("audit", help="exhaustive pair censuses for small n")
    a.add_argument("n", type=parse_number, nargs="*")
    a.add_argument("--prop22", type=parse_number, metavar="P",
                   help="the four symbol censuses at an odd prime P")
    a.add_argument("--skip-steps12", action="store_true")
    bound(a)
    a.add_argument("--cap", type=_positive, default=aud.COMPOSITE_CAP)
    a.add_argument("--jobs", type=_positive, default=1)
    output(a)
    a.set_defaults(func=cmd_audit)

    b = sub.add_parser("bench", help="selfridge counts on random n")
    b.add_argument("--bits", type=_positive, default=256)
    b.add_argument("--samples", type=int, default=20)
    b.add_argument("--seed", type=parse_number, default=0)
    b.add_argument("--primes", action="store_true", help="sample primes (full Step 5 path)")
    b.add_argument("--no-naive", action="store_true")
    output(b)
    b.set_defaults(func=cmd_bench)

    s = sub.add_parser("search", help="odd composites passing the QFT core")
    s.add_argument("lo", type=parse_number)
    s.add_argument("hi", type=parse_number)
    s.add_argument("--samples", type=int, default=10)
    s.add_argument("--seed", type=parse_number, default=0)
    s.add_argument("--skip-steps12", action="store_true")
    bound(s)
    output(s)
    s.set_defaults(func=cmd_search)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except ValueError as exc:
        print(f"frobtest: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
