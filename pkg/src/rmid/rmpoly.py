"""Identities as multivariate polynomials over GF(q) and their evaluation.

A code with parameters (q, k, m) is the set of all m-variate polynomials
of total degree <= k over GF(q); an identity is one coefficient vector w
with exactly C(k+m, m) entries.  Monomial exponent vectors z (|z| <= k)
are enumerated in graded-lexicographic order: ascending total degree,
ties broken by ascending tuple comparison, e.g. for k=2, m=2:

    (0,0) (0,1) (1,0) (0,2) (1,1) (2,0)

Coefficient vectors, serialization and the two evaluators all index
against this enumeration.

Two evaluators are provided.  ``eval_naive`` sums w_z * r^z monomial by
monomial and is the reference.  ``eval_recursive`` splits on the powers
of the first variable,

    p_w(r) = sum_{k'=0..k} r_1^{k'} * p_{w_{k'}}(r_2, ..., r_m),

where w_{k'} is the coefficient partition with z_1 = k' (degree at most
k - k' in one variable fewer), folding the sum Horner-style so each of
the k steps costs one multiplication and one addition.  The univariate
base case accumulates explicit powers (one multiplication per power
step plus one per term: 2k multiplications, k additions).  Per level
with degree bound k this is exactly k additions and k multiplications
plus the k+1 sub-evaluations, which is the operation count the cost
model predicts.
"""

from __future__ import annotations

import struct
import sys
from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

from .gf import FieldParams, factor_prime_power

_ADDRESS_LIMIT = sys.maxsize

_MAGIC = b"RMID"
_VERSION = 1
_RECORD_IDENTITY = 1


class OverflowingCount(OverflowError):
    """Coefficient count exceeds the platform's addressable size."""


class DimensionMismatch(ValueError):
    """Operands disagree on field order or variable count."""


class BadDegree(ValueError):
    """Requested partition degree outside [0, k]."""


class WireFormatError(ValueError):
    """A serialized record does not parse."""


class MalformedHeader(WireFormatError):
    """Bad magic, version or record type."""


class TruncatedPayload(WireFormatError):
    """Record shorter than its header promises (or payload out of range)."""


def num_monomials(k: int, m: int) -> int:
    """C(k+m, m): number of exponent vectors z >= 0 with |z| <= k."""
    if k < 0 or m < 1:
        raise ValueError(f"need k >= 0 and m >= 1, got k={k} m={m}")
    n = comb(k + m, m)
    if n > _ADDRESS_LIMIT:
        raise OverflowingCount(f"C({k + m},{m}) = {n} exceeds addressable size")
    return n


def enumerate_monomials(k: int, m: int) -> list[tuple[int, ...]]:
    """All exponent vectors with |z| <= k in graded-lex order."""
    num_monomials(k, m)
    out = []

    def gen(deg, vars_left, prefix):
        if vars_left == 1:
            out.append(prefix + (deg,))
            return
        for z1 in range(deg + 1):
            gen(deg - z1, vars_left - 1, prefix + (z1,))

    for deg in range(k + 1):
        gen(deg, m, ())
    return out


@lru_cache(maxsize=None)
def _monomial_positions(k: int, m: int) -> dict:
    return {z: i for i, z in enumerate(enumerate_monomials(k, m))}


@dataclass(frozen=True)
class RmParams:
    """Code parameters: field order q, degree bound k, m variables, n challenges.

    k = 0 (constants only) is accepted because coefficient partitions
    produce it; the protocol layer requires k >= 1.
    """

    q: int
    k: int
    m: int
    n: int = 1

    def __post_init__(self):
        factor_prime_power(self.q)  # raises NotPrime otherwise
        if self.k < 0 or self.q <= self.k:
            raise ValueError(f"need 0 <= k < q, got k={self.k} q={self.q}")
        if self.m < 1:
            raise ValueError(f"need m >= 1, got {self.m}")
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")

    @property
    def num_coefficients(self) -> int:
        return num_monomials(self.k, self.m)

    def field_params(self) -> FieldParams:
        return FieldParams(*factor_prime_power(self.q))


@dataclass(eq=False)
class Identity:
    """One identity: coefficient vector w aligned with the monomial order."""

    params: RmParams
    w: list[int]
    _rec: list | None = field(default=None, repr=False)

    def __post_init__(self):
        expect = self.params.num_coefficients
        if len(self.w) != expect:
            raise DimensionMismatch(
                f"identity needs {expect} coefficients, got {len(self.w)}"
            )

    def __eq__(self, other):
        if not isinstance(other, Identity):
            return NotImplemented
        return self.params == other.params and self.w == other.w

    def recursive_coefficients(self) -> list[int]:
        """w permuted into the order the recursive evaluator consumes (cached)."""
        if self._rec is None:
            layout = _recursive_layout(self.params.k, self.params.m)
            w = self.w
            self._rec = [w[i] for i in layout]
        return self._rec


@lru_cache(maxsize=None)
def _recursive_layout(k: int, m: int) -> tuple[int, ...]:
    """Graded-lex positions in recursive consumption order.

    Multivariate blocks are emitted for z_1 = k, k-1, ..., 0 (the Horner
    fold consumes the top partition first); univariate runs are ascending
    powers.
    """
    pos = _monomial_positions(k, m)
    out = []

    def emit(bound, vars_left, prefix):
        if vars_left == 1:
            for i in range(bound + 1):
                out.append(pos[prefix + (i,)])
            return
        for z1 in range(bound, -1, -1):
            emit(bound - z1, vars_left - 1, prefix + (z1,))

    emit(k, m, ())
    return tuple(out)


def _check_eval_args(ctx, ident: Identity, r) -> None:
    if ctx.q != ident.params.q:
        raise DimensionMismatch(f"identity is over GF({ident.params.q}), ctx is GF({ctx.q})")
    if len(r) != ident.params.m:
        raise DimensionMismatch(f"need {ident.params.m} coordinates, got {len(r)}")


def eval_naive(ctx, ident: Identity, r) -> int:
    """Reference evaluator: sum of w_z * prod_j r_j^{z_j} over all monomials."""
    _check_eval_args(ctx, ident, r)
    add, mul, power = ctx.add, ctx.mul, ctx.pow
    acc = 0
    for wz, z in zip(ident.w, enumerate_monomials(ident.params.k, ident.params.m)):
        term = wz
        for rj, zj in zip(r, z):
            term = mul(term, power(rj, zj))
        acc = add(acc, term)
    return acc


def eval_recursive(ctx, ident: Identity, r) -> int:
    """Evaluate by recursion over variables; equals eval_naive everywhere."""
    _check_eval_args(ctx, ident, r)
    rw = ident.recursive_coefficients()
    pos_box = [0]
    return _eval_block(ctx, rw, r, pos_box, 0, ident.params.k, ident.params.m)


def _eval_block(ctx, rw, r, pos_box, j, bound, vars_left):
    add, mul = ctx.add, ctx.mul
    if vars_left == 1:
        base = pos_box[0]
        x = r[j]
        acc = rw[base]
        pw = 1
        for i in range(1, bound + 1):
            pw = mul(pw, x)
            acc = add(acc, mul(rw[base + i], pw))
        pos_box[0] = base + bound + 1
        return acc
    x = r[j]
    acc = _eval_block(ctx, rw, r, pos_box, j + 1, 0, vars_left - 1)
    for kp in range(bound - 1, -1, -1):
        sub = _eval_block(ctx, rw, r, pos_box, j + 1, bound - kp, vars_left - 1)
        acc = add(mul(acc, x), sub)
    return acc


def coefficient_partition(ident: Identity, k_top: int) -> Identity:
    """Slice of w on monomials with z_1 = k_top, re-indexed over m-1 variables."""
    k, m = ident.params.k, ident.params.m
    if m < 2:
        raise DimensionMismatch("partitioning needs at least 2 variables")
    if not 0 <= k_top <= k:
        raise BadDegree(f"k'={k_top} outside [0, {k}]")
    pos = _monomial_positions(k, m)
    sub_params = RmParams(ident.params.q, k - k_top, m - 1, ident.params.n)
    w = ident.w
    sub_w = [w[pos[(k_top,) + z]] for z in enumerate_monomials(k - k_top, m - 1)]
    return Identity(sub_params, sub_w)


def sample_identity(ctx, params: RmParams, rng) -> Identity:
    """Identity with i.i.d. uniform coefficients; deterministic under a seed."""
    if ctx.q != params.q:
        raise DimensionMismatch(f"params are over GF({params.q}), ctx is GF({ctx.q})")
    count = params.num_coefficients
    sample = ctx.sample_uniform
    return Identity(params, [sample(rng) for _ in range(count)])


# ---------------------------------------------------------------------------
# Identity file format: magic, version, record type, field and code
# parameters, then the coefficients as little-endian u16 in monomial order.
# ---------------------------------------------------------------------------

_IDENTITY_HEADER = struct.Struct("<4sBBHBHH")  # magic, ver, rectype, p, d, k, m


def write_identity(ident: Identity) -> bytes:
    fp = ident.params.field_params()
    head = _IDENTITY_HEADER.pack(
        _MAGIC, _VERSION, _RECORD_IDENTITY, fp.p, fp.d, ident.params.k, ident.params.m
    )
    body = struct.pack(f"<{len(ident.w)}H", *ident.w)
    return head + body


def read_identity(buf: bytes) -> Identity:
    """Inverse of write_identity; the challenge count defaults to n=1."""
    if len(buf) < _IDENTITY_HEADER.size:
        raise MalformedHeader("identity record shorter than header")
    magic, ver, rectype, p, d, k, m = _IDENTITY_HEADER.unpack_from(buf)
    if magic != _MAGIC:
        raise MalformedHeader(f"bad magic {magic!r}")
    if ver != _VERSION:
        raise MalformedHeader(f"unsupported version {ver}")
    if rectype != _RECORD_IDENTITY:
        raise MalformedHeader(f"record type {rectype} is not an identity")
    params = RmParams(p ** d, k, m)
    count = params.num_coefficients
    expect = _IDENTITY_HEADER.size + 2 * count
    if len(buf) < expect:
        raise TruncatedPayload(f"need {expect} bytes, got {len(buf)}")
    w = list(struct.unpack_from(f"<{count}H", buf, _IDENTITY_HEADER.size))
    q = p ** d
    if any(c >= q for c in w):
        raise WireFormatError("coefficient out of field range")
    return Identity(params, w)
