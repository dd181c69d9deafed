"""Timing harness for field operations and the identification pipeline.

Measurements are medians over at least 30 repetitions with the
interquartile range kept alongside; a repetition times a pre-sized batch
in a tight loop, subtracts an empty-loop baseline over the same operand
sequence, and divides by the batch size.  Operand sequences are
generated before the timed region so RNG cost never pollutes the
numbers, and a point is only reported once its timed span exceeds
10^4 times the measured timer resolution (batches grow until it does).

Absolute numbers are hardware-specific; the properties worth asserting
are relative (add within a small factor of mul, per-op time flat across
field sizes, generation time linear in coefficient count, ranking
stability across runs).
"""

from __future__ import annotations

import gc
import os
import statistics
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from random import Random

from . import ident as ident_mod
from .gf import MAX_TABLE_ORDER, FieldCtx, PolyFieldCtx, factor_prime_power
from .rmpoly import RmParams, num_monomials, sample_identity

_SPAN_FACTOR = 10_000
_WARM_NS = 25_000_000   # burn-in per timed point so frequency scaling settles


class InfeasibleParams(ValueError):
    """Grid point whose coefficient count exceeds the configured cap."""


@dataclass(frozen=True)
class BenchConfig:
    field_sizes: tuple[int, ...] = (16, 256, 257, 4096, 19683)
    grid: tuple[tuple[int, int, int, int], ...] = (
        (257, 16, 2, 1),
        (257, 32, 2, 1),
        (257, 64, 2, 1),
        (257, 128, 2, 1),
        (257, 16, 3, 1),
        (257, 32, 3, 1),
        (257, 64, 2, 2),
        (257, 64, 2, 4),
        (257, 64, 2, 6),
    )
    repetitions: int = 30
    warmup: int = 2
    ops_per_rep: int = 20_000
    cache_variants: bool = True
    seed: int = 20210715
    coeff_cap: int = 2_000_000

    def __post_init__(self):
        if self.repetitions < 30:
            raise ValueError("reported points need at least 30 repetitions")
        if self.warmup < 1:
            raise ValueError("need at least one warmup repetition")
        if self.ops_per_rep < 1:
            raise ValueError("ops_per_rep must be positive")


@dataclass(frozen=True)
class FieldOpRecord:
    q: int
    op: str            # "add" | "mul"
    cache: bool
    median_ns: float   # per operation
    iqr_ns: float
    reps: int
    ops: int


@dataclass(frozen=True)
class IdentRecord:
    q: int
    k: int
    m: int
    n: int
    log_i_bits: float
    error_bound: float   # (k/q)^n
    gen_ns: float
    issue_ns: float
    verify_ns: float
    wire_bytes: int
    gen_iqr_ns: float = field(default=0.0)
    issue_iqr_ns: float = field(default=0.0)
    verify_iqr_ns: float = field(default=0.0)


def timer_resolution_ns() -> float:
    """Smallest observable nonzero tick of the monotonic timer."""
    best = None
    for _ in range(2000):
        a = time.perf_counter_ns()
        b = time.perf_counter_ns()
        while b == a:
            b = time.perf_counter_ns()
        delta = b - a
        if best is None or delta < best:
            best = delta
    return float(best)


def pin_current_cpu() -> bool:
    """Best-effort affinity pin of this process to its current CPU."""
    try:
        os.sched_setaffinity(0, {os.sched_getcpu()})
        return True
    except (AttributeError, OSError):
        return False


@contextmanager
def _gc_paused():
    """Collector paused around timed regions; its pauses are not op cost."""
    was_enabled = gc.isenabled()
    gc.disable()
    try:
        yield
    finally:
        if was_enabled:
            gc.enable()


def _median_iqr(values) -> tuple[float, float]:
    med = statistics.median(values)
    if len(values) >= 4:
        q1, _, q3 = statistics.quantiles(values, n=4)
        return med, q3 - q1
    return med, max(values) - min(values)


def _time_pair_ops(fns: dict, pairs, reps, warmup) -> dict:
    """Per-repetition baseline-subtracted spans (ns), one list per op.

    The ops are interleaved within every repetition so scheduler or
    frequency noise lands on all of them alike; ratios between ops stay
    meaningful even on a busy machine.
    """
    timer = time.perf_counter_ns
    spans = {op: [] for op in fns}
    with _gc_paused():
        spent = 0
        passes = 0
        while passes < warmup or (spent < _WARM_NS and passes < 200):
            t0 = timer()
            for fn in fns.values():
                for a, b in pairs:
                    fn(a, b)
            spent += timer() - t0
            passes += 1
        for _ in range(reps):
            for op, fn in fns.items():
                t0 = timer()
                for a, b in pairs:
                    fn(a, b)
                t1 = timer()
                for a, b in pairs:
                    pass
                t2 = timer()
                spans[op].append(max(t1 - t0 - (t2 - t1), 1))
    return spans


def _build_ctx(q: int, cache: bool):
    p, d = factor_prime_power(q)
    if q < MAX_TABLE_ORDER:
        return FieldCtx(p, d, cache=cache)
    return PolyFieldCtx(p, d)  # directional comparison only


def bench_field_ops(cfg: BenchConfig = BenchConfig()) -> list[FieldOpRecord]:
    """Median per-op add/mul times for every configured field size."""
    rng = Random(cfg.seed)
    min_span = _SPAN_FACTOR * timer_resolution_ns()
    records = []
    modes = (False, True) if cfg.cache_variants else (False,)
    timer = time.perf_counter_ns
    for q in cfg.field_sizes:
        for cache in modes:
            ctx = _build_ctx(q, cache)
            pairs = [(ctx.sample_uniform(rng), ctx.sample_uniform(rng))
                     for _ in range(cfg.ops_per_rep)]
            fns = {"add": ctx.add, "mul": ctx.mul}
            for _ in range(6):  # grow the batch until one span is trustworthy
                t0 = timer()
                for a, b in pairs:
                    ctx.mul(a, b)   # cheapest op bounds the span from below
                if timer() - t0 >= min_span:
                    break
                pairs = pairs * 2
            spans = _time_pair_ops(fns, pairs, cfg.repetitions, cfg.warmup)
            for op in ("add", "mul"):
                med, iqr = _median_iqr(spans[op])
                records.append(FieldOpRecord(
                    q=q, op=op, cache=cache,
                    median_ns=med / len(pairs), iqr_ns=iqr / len(pairs),
                    reps=cfg.repetitions, ops=len(pairs),
                ))
    return records


def _sized_batch(thunk, min_span) -> int:
    """Calls per repetition so one repetition's span is trustworthy."""
    timer = time.perf_counter_ns
    batch = 1
    while True:
        t0 = timer()
        for _ in range(batch):
            thunk()
        span = timer() - t0
        if span >= min_span or batch >= 1 << 20:
            return batch
        batch = max(batch * 2, int(batch * min_span / max(span, 1)))


def bench_identification(cfg: BenchConfig = BenchConfig()) -> list[IdentRecord]:
    """Generation / issue / verify timings plus report fields per grid point.

    All grid points are measured in interleaved rounds (one repetition of
    every point per round), so machine-load phases hit every point alike
    and cross-point comparisons stay meaningful.
    """
    rng = Random(cfg.seed)
    min_span = _SPAN_FACTOR * timer_resolution_ns()
    timer = time.perf_counter_ns
    ctx_cache: dict[int, FieldCtx] = {}
    jobs = []
    for q, k, m, n in cfg.grid:
        count = num_monomials(k, m)
        if count > cfg.coeff_cap:
            raise InfeasibleParams(
                f"(q={q}, k={k}, m={m}) needs {count} coefficients, cap is {cfg.coeff_cap}"
            )
        params = RmParams(q, k, m, n)
        if q not in ctx_cache:
            ctx_cache[q] = _build_ctx(q, cache=False)
        ctx = ctx_cache[q]
        identity = sample_identity(ctx, params, rng)
        identity.recursive_coefficients()  # layout cache is one-time, not timed
        mc = ident_mod.issue_challenges(ctx, identity, rng)
        thunks = {
            "gen": (lambda ctx=ctx, params=params: sample_identity(ctx, params, rng)),
            "issue": (lambda ctx=ctx, identity=identity:
                      ident_mod.issue_challenges(ctx, identity, rng)),
            "verify": (lambda ctx=ctx, identity=identity, mc=mc:
                       ident_mod.verify(ctx, identity, mc)),
        }
        jobs.append({
            "point": (q, k, m, n),
            "report": ident_mod.report(params),
            "wire_bytes": len(ident_mod.encode_wire(mc, params.field_params(), params)),
            "thunks": thunks,
            "batches": {kind: _sized_batch(fn, min_span) for kind, fn in thunks.items()},
            "spans": {kind: [] for kind in thunks},
        })

    with _gc_paused():
        spent = 0
        passes = 0
        while passes < cfg.warmup or (spent < _WARM_NS and passes < 100):
            t0 = timer()
            for job in jobs:
                for kind, fn in job["thunks"].items():
                    for _ in range(job["batches"][kind]):
                        fn()
            spent += timer() - t0
            passes += 1
        for _ in range(cfg.repetitions):
            for job in jobs:
                for kind, fn in job["thunks"].items():
                    batch = job["batches"][kind]
                    t0 = timer()
                    for _ in range(batch):
                        fn()
                    job["spans"][kind].append(timer() - t0)

    records = []
    for job in jobs:
        q, k, m, n = job["point"]
        stats = {}
        for kind in ("gen", "issue", "verify"):
            med, iqr = _median_iqr(job["spans"][kind])
            batch = job["batches"][kind]
            stats[kind] = (med / batch, iqr / batch)
        rep = job["report"]
        records.append(IdentRecord(
            q=q, k=k, m=m, n=n,
            log_i_bits=rep.log_i, error_bound=float(rep.error_n),
            gen_ns=stats["gen"][0], issue_ns=stats["issue"][0],
            verify_ns=stats["verify"][0],
            wire_bytes=job["wire_bytes"],
            gen_iqr_ns=stats["gen"][1], issue_iqr_ns=stats["issue"][1],
            verify_iqr_ns=stats["verify"][1],
        ))
    return records


# ---------------------------------------------------------------------------
# CSV round-trip
# ---------------------------------------------------------------------------

def field_ops_csv(records) -> str:
    lines = ["q,op,cache,median_ns,iqr_ns"]
    for r in records:
        lines.append(f"{r.q},{r.op},{int(r.cache)},{r.median_ns:.6g},{r.iqr_ns:.6g}")
    return "\n".join(lines) + "\n"


def parse_field_ops_csv(text: str) -> list[FieldOpRecord]:
    out = []
    lines = [ln for ln in text.splitlines() if ln.strip()]
    for ln in lines[1:]:
        q, op, cache, med, iqr = ln.split(",")
        out.append(FieldOpRecord(int(q), op, bool(int(cache)), float(med), float(iqr),
                                 reps=0, ops=0))
    return out


def ident_csv(records) -> str:
    lines = ["q,k,m,n,log_I_bits,error_bound,gen_ns,issue_ns,verify_ns,wire_bytes"]
    for r in records:
        lines.append(f"{r.q},{r.k},{r.m},{r.n},{r.log_i_bits:.9g},{r.error_bound:.9g},"
                     f"{r.gen_ns:.6g},{r.issue_ns:.6g},{r.verify_ns:.6g},{r.wire_bytes}")
    return "\n".join(lines) + "\n"


def parse_ident_csv(text: str) -> list[IdentRecord]:
    out = []
    lines = [ln for ln in text.splitlines() if ln.strip()]
    for ln in lines[1:]:
        q, k, m, n, logi, err, gen, issue, ver, wire = ln.split(",")
        out.append(IdentRecord(int(q), int(k), int(m), int(n), float(logi), float(err),
                               float(gen), float(issue), float(ver), int(wire)))
    return out


def kendall_tau(xs, ys) -> float:
    """Rank correlation (tau-a) between two orderings of the same points."""
    if len(xs) != len(ys) or len(xs) < 2:
        raise ValueError("need two equally sized sequences of length >= 2")
    conc = disc = 0
    n = len(xs)
    for i in range(n):
        for j in range(i + 1, n):
            s = (xs[i] - xs[j]) * (ys[i] - ys[j])
            if s > 0:
                conc += 1
            elif s < 0:
                disc += 1
    return (conc - disc) / (n * (n - 1) / 2)
