"""Asymptotic rate analysis for the identification codes.

Three ratios decide whether a parameter family achieves the double-
exponential identification rate: the tag share of the challenge
log T / log R = 1/m must vanish, the normalized identity size
loglog I / log R must approach 1, and the false-accept bound k/q must
vanish.  The family

    q = 2^(t^2),  k = 2^(t^2 - t),  m = 2^t

satisfies all three as t grows.  With q (hence k) held fixed the same
normalized size is O(log m / (m n)) and no positive limit is possible;
``bounded_q_ceiling`` tabulates that decay against its closed-form
upper bound.

Quantities are evaluated in the log domain so that sequence points with
astronomically large q (q = 2^36 at t = 6) never materialize a field or
an exact binomial.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb, lgamma

_LN2 = math.log(2)

# Below this k+m the exact binomial is cheap; above it, stay in the log
# domain (falling-factorial log sum plus a log-gamma factorial term,
# which avoids the cancellation of a three-term log-gamma difference).
_EXACT_LIMIT = 1 << 12


def log2_binom(a: int, b: int) -> float:
    """log2 C(a, b) with relative error well under 1e-9."""
    if b < 0 or b > a:
        raise ValueError(f"need 0 <= b <= a, got a={a} b={b}")
    b = min(b, a - b)
    if b == 0:
        return 0.0
    if a <= _EXACT_LIMIT:
        return math.log2(comb(a, b))
    if b <= 4096:
        s = math.fsum(math.log2(a - i) for i in range(b))
        return s - lgamma(b + 1) / _LN2
    return (lgamma(a + 1) - lgamma(b + 1) - lgamma(a - b + 1)) / _LN2


@dataclass(frozen=True)
class CapacityPoint:
    """One member of the capacity-achieving family, kept in log2 form."""

    t: int
    log2_q: int            # t^2
    log2_k: int            # t^2 - t
    m: int                 # 2^t
    randomness_ratio: float  # log T / log R = 1/m = 2^-t exactly
    rate_ratio: float        # loglog I / log R
    error: float             # k/q = 2^-t exactly


def condition_check(q: int, k: int, m: int) -> tuple[float, float, float]:
    """(log T/log R, loglog I/log R, E) for one concrete parameter triple."""
    if not (0 < k < q) or m < 1:
        raise ValueError(f"need 0 < k < q and m >= 1, got q={q} k={k} m={m}")
    log_q = math.log2(q)
    loglog_i = log2_binom(k + m, m) + math.log2(log_q)
    return 1.0 / m, loglog_i / (m * log_q), k / q


def _rate_ratio(t: int) -> float:
    log2_q = t * t
    k = 1 << (log2_q - t)
    m = 1 << t
    loglog_i = log2_binom(k + m, m) + math.log2(log2_q)
    return loglog_i / (m * log2_q)


def capacity_sequence(t_max: int) -> list[CapacityPoint]:
    """Points t = 2..t_max of the capacity-achieving family.

    t = 1 is excluded: it gives k = 1, q = 2 which violates k < q.
    """
    if t_max < 2:
        raise ValueError(f"need t_max >= 2, got {t_max}")
    out = []
    for t in range(2, t_max + 1):
        out.append(CapacityPoint(
            t=t,
            log2_q=t * t,
            log2_k=t * t - t,
            m=1 << t,
            randomness_ratio=2.0 ** -t,
            rate_ratio=_rate_ratio(t),
            error=2.0 ** -t,
        ))
    return out


def bounded_q_ceiling(q: int, k: int, m_values, n: int = 1) -> list[tuple[int, float, float]]:
    """Rows (m, ratio, bound) for fixed q, k across m.

    ratio = (log2 C(k+m,m) + log2 log2 q) / (n m log2 q) is the
    per-challenge normalized identity size; bound replaces the binomial
    with its (e(k+m)/k)^k upper estimate.  ratio <= bound holds for every
    row and both columns decay like log(m)/(m n).
    """
    if not (0 < k < q):
        raise ValueError(f"need 0 < k < q, got q={q} k={k}")
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    log_q = math.log2(q)
    loglog_q = math.log2(log_q)
    rows = []
    for m in m_values:
        den = n * m * log_q
        ratio = (log2_binom(k + m, m) + loglog_q) / den
        bound = (loglog_q + k * math.log2(math.e * (k + m) / k)) / den
        rows.append((m, ratio, bound))
    return rows


def capacity_csv(points) -> str:
    lines = ["t,q_log2,k_log2,m,randomness_ratio,rate_ratio,error"]
    for pt in points:
        lines.append(f"{pt.t},{pt.log2_q},{pt.log2_k},{pt.m},"
                     f"{pt.randomness_ratio:.12g},{pt.rate_ratio:.12g},{pt.error:.12g}")
    return "\n".join(lines) + "\n"
