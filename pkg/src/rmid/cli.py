"""Command-line front end.

Subcommands: keygen, challenge, verify, report, capacity, costmodel,
bench.  Identity and challenge files use the binary record formats;
tabular output is human-readable by default with ``--format csv`` as
the machine-readable escape hatch.  Exit codes: 0 success/accept,
1 verification reject, 2 invalid parameters or malformed input,
3 I/O failure, 4 parameter mismatch between input files.
"""

from __future__ import annotations

import argparse
import statistics
import sys
from random import Random

from . import bench as bench_mod
from . import capacity as capacity_mod
from . import costmodel as costmodel_mod
from . import ident as ident_mod
from .gf import FieldTooLarge, NotPrime, build_field, factor_prime_power
from .ident import ParameterMismatch
from .rmpoly import (
    RmParams,
    WireFormatError,
    read_identity,
    sample_identity,
    write_identity,
)

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_BAD_INPUT = 2
EXIT_IO = 3
EXIT_MISMATCH = 4


def _field_args(parser):
    parser.add_argument("--q", type=int, help="field order (prime power)")
    parser.add_argument("--p", type=int, help="field characteristic (with --d)")
    parser.add_argument("--d", type=int, help="extension degree (with --p)")


def _resolve_field(args) -> tuple[int, int]:
    if args.q is not None:
        if args.p is not None or args.d is not None:
            raise ValueError("give either --q or --p/--d, not both")
        return factor_prime_power(args.q)
    if args.p is None or args.d is None:
        raise ValueError("field not specified: need --q or both --p and --d")
    return args.p, args.d


def _read_bytes(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


def _write_bytes(path: str, data: bytes) -> None:
    if path == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    with open(path, "wb") as fh:
        fh.write(data)


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w") as fh:
        fh.write(text)


def _print_report(rep, fmt: str) -> None:
    p = rep.params
    if fmt == "csv":
        print("q,k,m,n,log_I_bits,log_C_bits,log_R_bits,log_T_bits,"
              "error,error_n,rate_ratio,block_length,block_dimension,block_distance")
        print(f"{p.q},{p.k},{p.m},{p.n},{rep.log_i:.9g},{rep.log_c:.9g},"
              f"{rep.log_r:.9g},{rep.log_t:.9g},{float(rep.error):.9g},"
              f"{float(rep.error_n):.9g},{float(rep.rate_ratio):.9g},"
              f"{rep.block_length},{rep.block_dimension},{rep.block_distance}")
        return
    print(f"code parameters     q={p.q} k={p.k} m={p.m} n={p.n}")
    print(f"identity size       {rep.log_i:.6g} bits ({rep.block_dimension} coefficients)")
    print(f"challenge size      {rep.log_c:.6g} bits "
          f"(randomness {rep.log_r:.6g} + tag {rep.log_t:.6g})")
    print(f"false-accept bound  {rep.error} per challenge, {rep.error_n} for n={p.n}")
    print(f"rate increase       {float(rep.rate_ratio_single):.6g} single-challenge, "
          f"{float(rep.rate_ratio):.6g} with n={p.n}")
    print(f"block code          [{rep.block_length}, {rep.block_dimension}, "
          f"{rep.block_distance}]_{p.q}")


def cmd_keygen(args) -> int:
    p, d = _resolve_field(args)
    params = RmParams(p ** d, args.k, args.m, args.n)
    if params.k < 1:
        raise ValueError("need k >= 1")
    ctx = build_field(p, d)
    rng = Random(args.seed)
    identity = sample_identity(ctx, params, rng)
    _write_bytes(args.out, write_identity(identity))
    if args.out != "-":
        _print_report(ident_mod.report(params), args.format)
    return EXIT_OK


def cmd_challenge(args) -> int:
    identity = read_identity(_read_bytes(args.identity))
    params = RmParams(identity.params.q, identity.params.k, identity.params.m, args.n)
    identity.params = params
    p, d = factor_prime_power(params.q)
    ctx = build_field(p, d)
    mc = ident_mod.issue_challenges(ctx, identity, Random(args.seed))
    _write_bytes(args.out, ident_mod.encode_wire(mc, params.field_params(), params))
    return EXIT_OK


def cmd_verify(args) -> int:
    identity = read_identity(_read_bytes(args.identity))
    fp = identity.params.field_params()
    _, _, mc = ident_mod.decode_wire(
        _read_bytes(args.challenges),
        expected_field=fp,
        expected_params=identity.params,
    )
    ctx = build_field(fp.p, fp.d)
    result = ident_mod.verify(ctx, identity, mc)
    print("per-challenge:", " ".join("true" if ok else "false"
                                     for ok in result.per_challenge))
    print("accepted:", "true" if result.accepted else "false")
    return EXIT_OK if result.accepted else EXIT_REJECT


def cmd_report(args) -> int:
    p, d = _resolve_field(args)
    params = RmParams(p ** d, args.k, args.m, args.n)
    if params.k < 1:
        raise ValueError("need k >= 1")
    _print_report(ident_mod.report(params), args.format)
    return EXIT_OK


def cmd_capacity(args) -> int:
    points = capacity_mod.capacity_sequence(args.t_max)
    if args.format == "csv":
        _write_text(args.out, capacity_mod.capacity_csv(points))
        return EXIT_OK
    for pt in points:
        print(f"t={pt.t}  log2(q)={pt.log2_q}  log2(k)={pt.log2_k}  m={pt.m}  "
              f"randomness_ratio={pt.randomness_ratio:.6g}  "
              f"rate_ratio={pt.rate_ratio:.6g}  error={pt.error:.6g}")
    return EXIT_OK


def cmd_costmodel(args) -> int:
    if args.ident_csv is not None or args.fieldops_csv is not None:
        if args.ident_csv is None or args.fieldops_csv is None:
            raise ValueError("prediction needs both --ident-csv and --fieldops-csv")
        field_recs = bench_mod.parse_field_ops_csv(_read_bytes(args.fieldops_csv).decode())
        ident_recs = bench_mod.parse_ident_csv(_read_bytes(args.ident_csv).decode())
        adds = [r.median_ns for r in field_recs if r.op == "add"]
        muls = [r.median_ns for r in field_recs if r.op == "mul"]
        if not adds or not muls or not ident_recs:
            raise costmodel_mod.MissingBenchData("empty benchmark CSV")
        t_add = statistics.median(adds) * 1e-9
        t_mul = statistics.median(muls) * 1e-9
        rows = costmodel_mod.predicted_vs_measured(
            costmodel_mod.OpCosts(t_add, t_mul), ident_recs
        )
        _write_text(args.out, costmodel_mod.predicted_csv(rows))
        return EXIT_OK
    ks = range(args.k, (args.k_max or args.k) + 1)
    rows = costmodel_mod.unit_cost_rows((args.m, k) for k in ks)
    if args.format == "csv":
        _write_text(args.out, costmodel_mod.cost_csv(rows))
    else:
        for m, k, c, lead, ratio in rows:
            print(f"m={m} k={k}  C={c}  leading={float(lead):.6g}  ratio={float(ratio):.6g}")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.pin:
        bench_mod.pin_current_cpu()
    kwargs = {}
    if args.sizes:
        kwargs["field_sizes"] = tuple(int(s) for s in args.sizes.split(","))
    if args.grid:
        kwargs["grid"] = tuple(
            tuple(int(v) for v in point.split(":")) for point in args.grid.split(",")
        )
    if args.reps:
        kwargs["repetitions"] = args.reps
    if args.ops:
        kwargs["ops_per_rep"] = args.ops
    cfg = bench_mod.BenchConfig(seed=args.seed if args.seed is not None else 20210715,
                                **kwargs)
    if args.kind == "fieldops":
        _write_text(args.out, bench_mod.field_ops_csv(bench_mod.bench_field_ops(cfg)))
    else:
        _write_text(args.out, bench_mod.ident_csv(bench_mod.bench_identification(cfg)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmid",
        description="Reed-Muller identification codes: generate identities, "
                    "issue and verify challenges, analyze parameters.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    kg = sub.add_parser("keygen", help="generate an identity file")
    _field_args(kg)
    kg.add_argument("--k", type=int, required=True, help="maximum total degree")
    kg.add_argument("--m", type=int, required=True, help="number of variables")
    kg.add_argument("--n", type=int, default=1, help="challenges per issue")
    kg.add_argument("--seed", type=int, default=None)
    kg.add_argument("--out", required=True, help="identity file ('-' for stdout)")
    kg.add_argument("--format", choices=("human", "csv"), default="human")
    kg.set_defaults(func=cmd_keygen)

    ch = sub.add_parser("challenge", help="issue challenges for an identity")
    ch.add_argument("--identity", required=True, help="identity file ('-' for stdin)")
    ch.add_argument("--n", type=int, default=1, help="number of challenges")
    ch.add_argument("--seed", type=int, default=None)
    ch.add_argument("--out", required=True, help="challenge file ('-' for stdout)")
    ch.set_defaults(func=cmd_challenge)

    vf = sub.add_parser("verify", help="verify a challenge file against an identity")
    vf.add_argument("--identity", required=True)
    vf.add_argument("--challenges", required=True, help="challenge file ('-' for stdin)")
    vf.set_defaults(func=cmd_verify)

    rp = sub.add_parser("report", help="derived code parameters")
    _field_args(rp)
    rp.add_argument("--k", type=int, required=True)
    rp.add_argument("--m", type=int, required=True)
    rp.add_argument("--n", type=int, default=1)
    rp.add_argument("--format", choices=("human", "csv"), default="human")
    rp.set_defaults(func=cmd_report)

    cp = sub.add_parser("capacity", help="capacity-achieving parameter family")
    cp.add_argument("--t-max", type=int, default=6, dest="t_max")
    cp.add_argument("--format", choices=("human", "csv"), default="human")
    cp.add_argument("--out", default=None)
    cp.set_defaults(func=cmd_capacity)

    cm = sub.add_parser("costmodel", help="operation-count model tables")
    cm.add_argument("--m", type=int, default=2)
    cm.add_argument("--k", type=int, default=2)
    cm.add_argument("--k-max", type=int, default=None, dest="k_max")
    cm.add_argument("--ident-csv", default=None, dest="ident_csv",
                    help="ident benchmark CSV for predicted-vs-measured")
    cm.add_argument("--fieldops-csv", default=None, dest="fieldops_csv",
                    help="field-op benchmark CSV supplying t_add/t_mul")
    cm.add_argument("--format", choices=("human", "csv"), default="human")
    cm.add_argument("--out", default=None)
    cm.set_defaults(func=cmd_costmodel)

    bn = sub.add_parser("bench", help="timing harness, CSV output")
    bn.add_argument("--kind", choices=("fieldops", "ident"), default="fieldops")
    bn.add_argument("--sizes", default=None, help="comma-separated field orders")
    bn.add_argument("--grid", default=None,
                    help="comma-separated q:k:m:n identification points")
    bn.add_argument("--reps", type=int, default=None)
    bn.add_argument("--ops", type=int, default=None)
    bn.add_argument("--seed", type=int, default=None)
    bn.add_argument("--pin", action="store_true", help="pin the process to one CPU")
    bn.add_argument("--out", default=None, help="CSV path (default stdout)")
    bn.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParameterMismatch as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (WireFormatError, NotPrime, FieldTooLarge, OverflowError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
