"""Analytic operation counts for the recursive polynomial evaluator.

The evaluator's work at one level with degree bound k is k additions
and k multiplications plus the k+1 sub-evaluations of the coefficient
partitions, with the univariate base spending k additions and 2k
multiplications on explicit power accumulation; exponentiation is
counted as multiplication throughout.  Splitting by operation kind:

    A(m, 0) = 0     A(1, k) = k      A(m, k) = k + sum_{k'=0..k} A(m-1, k')
    M(m, 0) = 0     M(1, k) = 2k     M(m, k) = k + sum_{k'=0..k} M(m-1, k')

and the combined count C(m, k) = A + M satisfies C(1, k) = 3k with the
same recursion; its highest-order term is 3 k^m / m!.  When one addition
and one multiplication cost the same t, the predicted time is exactly
t * C(m, k).

Counts are exact integers (they grow like k^m / m!); timings derived
from them are exact rationals.  ``OpCountingField`` wraps a field
context and counts the operations an evaluation actually performs, for
checking the model against the implementation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial


class MissingBenchData(ValueError):
    """predicted_vs_measured called without measurements."""


@dataclass(frozen=True)
class OpCosts:
    """Seconds per addition / multiplication; exponentiation priced as one mul."""

    t_add: float
    t_mul: float
    pow_costs_mul: bool = True

    def __post_init__(self):
        if self.t_add <= 0 or self.t_mul <= 0:
            raise ValueError("operation costs must be positive")


# Memoized count tables, grown on demand.  _ADD[m][k] holds A(m, k);
# index 0 is unused padding so m is 1-based.  Rows only ever append, so
# previously returned values never change.
_ADD: list[list[int]] = [[], [0]]
_MUL: list[list[int]] = [[], [0]]


def _count(table: list[list[int]], base_step: int, m: int, k: int) -> int:
    if m < 1 or k < 0:
        raise ValueError(f"need m >= 1 and k >= 0, got m={m} k={k}")
    while len(table) <= m:
        table.append([0])
    row1 = table[1]
    while len(row1) <= k:
        row1.append(base_step * len(row1))
    for level in range(2, m + 1):
        prev = table[level - 1]
        row = table[level]
        if len(row) > k:
            continue
        acc = sum(prev[: len(row)])
        for j in range(len(row), k + 1):
            acc += prev[j]
            row.append(j + acc)
    return table[m][k]


def add_count(m: int, k: int) -> int:
    """Exact number of field additions the recursive evaluator performs."""
    return _count(_ADD, 1, m, k)


def mul_count(m: int, k: int) -> int:
    """Exact number of field multiplications the recursive evaluator performs."""
    return _count(_MUL, 2, m, k)


def unit_cost(m: int, k: int) -> int:
    """C(m, k): total operation count at unit cost per add and mul."""
    return add_count(m, k) + mul_count(m, k)


def cost(op_costs: OpCosts, m: int, k: int) -> Fraction:
    """Predicted evaluation time t_add * A(m,k) + t_mul * M(m,k), exact."""
    return (Fraction(op_costs.t_add) * add_count(m, k)
            + Fraction(op_costs.t_mul) * mul_count(m, k))


def leading_term(m: int, k: int) -> Fraction:
    """Highest-order term of C(m, k): 3 k^m / m!."""
    if m < 1 or k < 1:
        raise ValueError(f"need m >= 1 and k >= 1, got m={m} k={k}")
    return Fraction(3 * k ** m, factorial(m))


def unit_cost_rows(pairs) -> list[tuple[int, int, int, Fraction, Fraction]]:
    """(m, k, C_exact, leading_term, ratio) rows for CSV emission."""
    out = []
    for m, k in pairs:
        c = unit_cost(m, k)
        lead = leading_term(m, k) if k >= 1 else Fraction(0)
        ratio = Fraction(c) / lead if lead else Fraction(0)
        out.append((m, k, c, lead, ratio))
    return out


def cost_csv(rows) -> str:
    lines = ["m,k,C_exact,leading_term,ratio"]
    for m, k, c, lead, ratio in rows:
        lines.append(f"{m},{k},{c},{float(lead):.12g},{float(ratio):.12g}")
    return "\n".join(lines) + "\n"


class OpCountingField:
    """Field-context wrapper counting add/mul calls (pow counted as mul)."""

    def __init__(self, ctx):
        self._ctx = ctx
        self.q = ctx.q
        self.adds = 0
        self.muls = 0

        base_add, base_mul, base_pow = ctx.add, ctx.mul, ctx.pow

        def add(a, b):
            self.adds += 1
            return base_add(a, b)

        def mul(a, b):
            self.muls += 1
            return base_mul(a, b)

        def power(a, e):
            self.muls += 1
            return base_pow(a, e)

        self.add = add
        self.mul = mul
        self.pow = power

    def reset(self):
        self.adds = 0
        self.muls = 0

    def sample_uniform(self, rng):
        return self._ctx.sample_uniform(rng)


def predicted_vs_measured(op_costs: OpCosts, records) -> list[tuple[int, int, int, float, float]]:
    """(q, k, m, predicted_seconds, measured_seconds) per benchmark record.

    The measured value is the per-tag encoding time (issue time divided by
    the challenge count).  Purely diagnostic: the model ignores recursion
    and bookkeeping overhead, so no tolerance is attached here.
    """
    rows = []
    for rec in records:
        predicted = float(cost(op_costs, rec.m, rec.k))
        measured = rec.issue_ns / rec.n * 1e-9
        rows.append((rec.q, rec.k, rec.m, predicted, measured))
    if not rows:
        raise MissingBenchData("no benchmark records supplied")
    return rows


def predicted_csv(rows) -> str:
    lines = ["q,k,m,predicted_s,measured_s"]
    for q, k, m, pred, meas in rows:
        lines.append(f"{q},{k},{m},{pred:.9g},{meas:.9g}")
    return "\n".join(lines) + "\n"
