"""Command-line front end: ``modsums <subcommand> ...``.

Output is a JSON envelope ``{"command", "parameters", "result"}`` with every
integer written as a decimal string and every rational as a numerator /
denominator pair.  ``--format tsv`` prints the same envelope flattened to
``dotted.key<TAB>value`` lines.

Exit status: 0 success, 1 a verification disagreed, 2 invalid arguments.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from enum import Enum
from fractions import Fraction
from typing import Any, List, Optional, Sequence

from . import core, extremal, structures, verify
from .core import Configuration, ResidueSet

ENV_LIMIT = "MODSUMS_LIMIT"


class UsageError(ValueError):
    pass


def encode(value: Any) -> Any:
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    if isinstance(value, Fraction):
        return {"numerator": str(value.numerator), "denominator": str(value.denominator)}
    if isinstance(value, Configuration):
        return {"q": str(value.q), "a": [str(a) for a in value.residues]}
    if isinstance(value, ResidueSet):
        return [str(s) for s in value.sorted()]
    if isinstance(value, dict):
        return {str(k): encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [encode(v) for v in value]
    if hasattr(value, "item"):  # numpy scalar
        return encode(value.item())
    raise TypeError(f"cannot encode {type(value).__name__}")


def flatten(value: Any, prefix: str = "") -> List[tuple]:
    """Envelope as (dotted key, text) pairs; the tsv form."""
    if isinstance(value, dict):
        out = []
        for k, v in value.items():
            out.extend(flatten(v, f"{prefix}.{k}" if prefix else k))
        return out
    if isinstance(value, list):
        if not value:
            return [(prefix, "[]")]
        out = []
        for i, v in enumerate(value):
            out.extend(flatten(v, f"{prefix}.{i}"))
        return out
    if value is None:
        return [(prefix, "null")]
    if isinstance(value, bool):
        return [(prefix, "true" if value else "false")]
    return [(prefix, str(value))]


def parse_range(text: str) -> List[int]:
    """``"3"``, ``"1-8"``, ``"1,3,5-7"`` -> sorted list of ints."""
    out = set()
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        lo, sep, hi = part.partition("-")
        try:
            if sep:
                out.update(range(int(lo), int(hi) + 1))
            else:
                out.add(int(lo))
        except ValueError:
            raise UsageError(f"bad range {text!r}") from None
    if not out:
        raise UsageError(f"empty range {text!r}")
    return sorted(out)


def _configuration(q: int, text: Optional[str]) -> Configuration:
    try:
        residues = core.parse_residues(text or "")
    except ValueError:
        raise UsageError(f"--a expects comma-separated integers, got {text!r}") from None
    return Configuration(q, residues)


def _limit(args) -> Optional[int]:
    if args.limit is not None:
        return args.limit
    env = os.environ.get(ENV_LIMIT)
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"{ENV_LIMIT} must be an integer, got {env!r}") from None
    return None


def _witness(c: Configuration, p: ResidueSet) -> dict:
    return {"configuration": c, "target": p}


def cmd_bound(args):
    n, k, q = args.n, args.k, args.q
    witness = None
    if args.kind == "theorem1":
        value = core.theorem1_bound(n, k, q)
        if args.witness:
            inst = extremal.split_extremal(n, k, q)
            witness = _witness(inst.configuration, inst.target)
    elif args.kind == "cor2":
        value = core.corollary2_bound(n, q)
        if args.witness:
            inst = extremal.corollary2_extremal(n, q)
            witness = _witness(inst.configuration, inst.target)
    else:
        value = core.corollary3_bound(n, k, q)
        if args.witness:
            c = Configuration.all_ones(n, q)
            counts = core.signed_sum_distribution(c).counts
            order = sorted(range(q), key=lambda s: (-counts[s], s))
            p = ResidueSet.of(q, order[:k])
            got = core.count_in_set(core.SumDistribution(q, counts), p)
            if got != value:
                raise extremal.ExtremalMismatch(f"signed witness reaches {got}, bound is {value}")
            witness = _witness(c, p)
    return {"kind": args.kind, "value": value, "method": core.Method.FORMULA, "witness": witness}, True


def cmd_dist(args):
    c = _configuration(args.q, args.a)
    d = core.signed_sum_distribution(c) if args.signed else core.subset_sum_distribution(c)
    return {"q": c.q, "n": c.n, "signed": args.signed, "counts": d.counts, "total": d.total}, True


def cmd_partition(args):
    c = _configuration(args.q, args.a)
    p = structures.build_partition(c, limit=_limit(args))
    report = structures.verify_partition(p)
    cert = None
    if args.cert_bound is not None:
        cert = {
            "k": args.cert_bound,
            "value": structures.partition_bound(p, args.cert_bound),
            "formula": core.theorem1_bound(c.n, args.cert_bound, c.q),
        }
    if args.write:
        with open(args.write, "w") as fh:
            fh.write(structures.format_partition(p))
    result = {
        "configuration": c,
        "blocks": [[f"{m:x}" for m in b.members] for b in p.blocks],
        "block_sizes": p.sizes(),
        "verification": {
            "ok": report.ok,
            "block_count": report.block_count,
            "expected_block_count": report.expected_block_count,
            "violation": report.violation,
        },
        "certificate_bound": cert,
    }
    ok = report.ok and (cert is None or cert["value"] == cert["formula"])
    return result, ok, structures.format_partition(p)


def cmd_extremal(args):
    if args.kind == "allones":
        inst = extremal.allones_extremal(args.n, args.k, args.q)
    elif args.kind == "split":
        inst = extremal.split_extremal(args.n, args.k, args.q)
    else:
        inst = extremal.corollary2_extremal(args.n, args.q)
    return {
        "kind": args.kind,
        "configuration": inst.configuration,
        "target": inst.target,
        "claimed": inst.claimed,
    }, True


def _sweep_record(r: verify.SweepResult) -> dict:
    return {
        "kind": r.kind,
        "n": r.n,
        "q": r.q,
        "k": r.k,
        "formula_bound": r.formula_bound,
        "observed": r.observed,
        "agree": r.agree,
        "witness": _witness(*r.witness) if r.witness else None,
        "evaluated": r.evaluated,
        "pruned": r.pruned,
    }


def cmd_verify(args):
    ns, qs = parse_range(args.n), parse_range(args.q)
    limit = _limit(args)
    records = []
    if args.kind == "certificate":
        for q in qs:
            for s in verify.certificate_sweep(q, max(ns)):
                if s.n not in ns:
                    continue
                records.append(
                    {
                        "kind": "certificate",
                        "n": s.n,
                        "q": q,
                        "configurations": s.configurations,
                        "verified": s.verified,
                        "bound_matches": s.bound_matches,
                        "dominated": s.dominated,
                        "multiset_matches": s.multiset_matches,
                        "targets_per_configuration": s.targets_per_configuration,
                        "agree": s.ok,
                        "failures": s.failures,
                    }
                )
    else:
        opts = dict(prune=not args.no_prune, budget=args.budget, workers=args.threads, limit=limit)
        for q in qs:
            ks = list(range(1, q + 1)) if args.k == "all" else [k for k in parse_range(args.k) if k <= q]
            for n in ns:
                if args.kind == "min":
                    if n >= q - 1:
                        records.append(_sweep_record(verify.exhaustive_min_class(n, q, **opts)))
                    continue
                for k in ks:
                    fn = verify.exhaustive_max if args.kind == "max" else verify.exhaustive_signed_max
                    records.append(_sweep_record(fn(n, q, k, **opts)))
    all_agree = all(r["agree"] for r in records)
    return {"kind": args.kind, "results": records, "all_agree": all_agree}, all_agree


def cmd_uniformity(args):
    c = None
    if args.a is not None:
        c = _configuration(args.q, args.a)
        if c.n != args.n:
            raise UsageError(f"--n {args.n} but --a lists {c.n} residues")
    r = verify.uniformity_report(args.n, args.q, c)
    return {
        "n": r.n,
        "q": r.q,
        "counts": r.counts,
        "min_fraction": r.min_fraction,
        "max_fraction": r.max_fraction,
        "max_deviation": r.max_deviation,
        "max_deviation_approx": f"{float(r.max_deviation):.6e}",
    }, True


COMMANDS = {
    "bound": cmd_bound,
    "dist": cmd_dist,
    "partition": cmd_partition,
    "extremal": cmd_extremal,
    "verify": cmd_verify,
    "uniformity": cmd_uniformity,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "tsv"], default="json")
    common.add_argument("--limit", type=int, help=f"enumeration guard on n (env {ENV_LIMIT})")

    parser = argparse.ArgumentParser(prog="modsums", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bound", parents=[common], help="closed-form bounds")
    p.add_argument("--kind", choices=["theorem1", "cor2", "cor3"], default="theorem1")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--witness", action="store_true", help="attach an attaining configuration")

    p = sub.add_parser("dist", parents=[common], help="sum distribution of a configuration")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", default="", help="comma-separated residues")
    p.add_argument("--signed", action="store_true", help="+-1 coefficients instead of 0/1")

    p = sub.add_parser("partition", parents=[common], help="build and check the structure partition")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", default="")
    p.add_argument("--cert-bound", type=int, metavar="K")
    p.add_argument("--write", metavar="PATH", help="save the partition file")
    p.add_argument("--text", action="store_true", help="print the partition file instead of the envelope")

    p = sub.add_parser("extremal", parents=[common], help="attaining configurations")
    p.add_argument("--kind", choices=["allones", "split", "cor2"], default="split")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--q", type=int, required=True)

    p = sub.add_parser("verify", parents=[common], help="exhaustive sweeps against the formulas")
    p.add_argument("--kind", choices=["max", "min", "signed", "certificate"], default="max")
    p.add_argument("--n", required=True, help="range, e.g. 1-8")
    p.add_argument("--q", required=True, help="range, e.g. 2-6")
    p.add_argument("--k", default="all", help="range or 'all'")
    p.add_argument("--budget", type=int, default=verify.DEFAULT_BUDGET)
    p.add_argument("--no-prune", action="store_true")
    p.add_argument("--threads", type=int, default=1)

    p = sub.add_parser("uniformity", parents=[common], help="distance of the distribution from uniform")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--a", default=None)
    return parser


def _glue_negative_values(argv: Sequence[str]) -> List[str]:
    # argparse reads "--a -1,2" as two options; glue the value on
    out, it = [], iter(argv)
    for tok in it:
        if tok == "--a":
            nxt = next(it, None)
            out.append(tok if nxt is None else f"--a={nxt}")
        else:
            out.append(tok)
    return out


def run(argv: Optional[Sequence[str]] = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(_glue_negative_values(argv))
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        out = COMMANDS[args.command](args)
    except (extremal.ExtremalMismatch, structures.LemmaViolation) as exc:
        print(f"modsums {args.command}: verification failed: {exc}", file=stderr)
        return 1
    except ValueError as exc:
        print(f"modsums {args.command}: error: {exc}", file=stderr)
        parser.print_usage(stderr)
        return 2
    result, ok = out[0], out[1]

    params = {k: v for k, v in vars(args).items() if k not in ("command", "format")}
    envelope = encode({"command": args.command, "parameters": params, "result": result})
    if args.command == "partition" and args.text:
        stdout.write(out[2])
    elif args.format == "tsv":
        for key, text in flatten(envelope):
            stdout.write(f"{key}\t{text}\n")
    else:
        json.dump(envelope, stdout, indent=2)
        stdout.write("\n")
    return 0 if ok else 1


def main() -> None:
    sys.exit(run())
