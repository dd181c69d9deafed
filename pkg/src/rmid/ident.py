"""Challenge/response identification over polynomial identities.

The sender holding identity w picks a uniform point r in GF(q)^m and
transmits the pair (r, p_w(r)); the receiver interested in identity w'
recomputes p_{w'}(r) and accepts iff it equals the received tag.  The
issuing identity always verifies.  A wrong identity is accepted only
when the two polynomials collide at r, which for distinct identities
happens on at most a k/q fraction of points; n independent challenges,
all of which must verify, push the bound to (k/q)^n.

``report`` collects the derived code quantities: identity/challenge/
randomness/tag sizes in bits, the false-accept bound and the rate
increase over plain transmission, plus the parameters of the underlying
block code [q^m, C(k+m, m), (q-k) q^{m-1}]_q.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from fractions import Fraction

from .gf import FieldParams
from .rmpoly import (
    DimensionMismatch,
    Identity,
    MalformedHeader,
    RmParams,
    TruncatedPayload,
    WireFormatError,
    eval_recursive,
    num_monomials,
)

_MAGIC = b"RMID"
_VERSION = 1
_RECORD_CHALLENGES = 2


class ParameterMismatch(ValueError):
    """Identity and challenge records disagree on field or code parameters."""


@dataclass(frozen=True)
class Challenge:
    """One randomness-tag pair (r, t) with t = p_w(r) for the issuing w."""

    r: tuple[int, ...]
    t: int


@dataclass(frozen=True)
class MultiChallenge:
    challenges: tuple[Challenge, ...]

    def __len__(self):
        return len(self.challenges)

    def __iter__(self):
        return iter(self.challenges)


@dataclass(frozen=True)
class VerificationResult:
    accepted: bool
    per_challenge: tuple[bool, ...]


@dataclass(frozen=True)
class CodeReport:
    """Derived quantities for one parameter tuple (sizes in bits of log base 2)."""

    params: RmParams
    log_i: float                 # identity count: C(k+m,m) * log2 q
    log_c: float                 # challenge size: (m+1) * log2 q
    log_r: float                 # randomness share: m * log2 q
    log_t: float                 # tag share: log2 q
    error: Fraction              # single-challenge false-accept bound k/q
    error_n: Fraction            # n-challenge bound (k/q)^n
    rate_ratio_single: Fraction  # C(k+m,m) / (m+1)
    rate_ratio: Fraction         # C(k+m,m) / (n (m+1))
    block_length: int            # q^m
    block_dimension: int         # C(k+m,m)
    block_distance: int          # (q-k) q^{m-1}

    @property
    def block_params(self) -> tuple[int, int, int]:
        return (self.block_length, self.block_dimension, self.block_distance)


def issue_challenges(ctx, ident: Identity, rng) -> MultiChallenge:
    """n challenges with i.i.d. uniform randomness and recursive-evaluator tags."""
    if ctx.q != ident.params.q:
        raise DimensionMismatch(f"identity is over GF({ident.params.q}), ctx is GF({ctx.q})")
    m, n = ident.params.m, ident.params.n
    sample = ctx.sample_uniform
    out = []
    for _ in range(n):
        r = tuple(sample(rng) for _ in range(m))
        out.append(Challenge(r, eval_recursive(ctx, ident, r)))
    return MultiChallenge(tuple(out))


def verify(ctx, ident: Identity, mc: MultiChallenge) -> VerificationResult:
    """Recompute every tag for `ident`; accept only if all challenges match."""
    per = tuple(eval_recursive(ctx, ident, ch.r) == ch.t for ch in mc)
    return VerificationResult(accepted=all(per), per_challenge=per)


def report(params: RmParams) -> CodeReport:
    q, k, m, n = params.q, params.k, params.m, params.n
    count = num_monomials(k, m)
    log_q = math.log2(q)
    log_r = m * log_q
    log_t = log_q
    error = Fraction(k, q)
    return CodeReport(
        params=params,
        log_i=count * log_q,
        log_c=log_r + log_t,
        log_r=log_r,
        log_t=log_t,
        error=error,
        error_n=error ** n,
        rate_ratio_single=Fraction(count, m + 1),
        rate_ratio=Fraction(count, n * (m + 1)),
        block_length=q ** m,
        block_dimension=count,
        block_distance=(q - k) * q ** (m - 1),
    )


# ---------------------------------------------------------------------------
# Wire format: header with field and code parameters, then n records of
# m randomness elements plus one tag, every element little-endian u16.
# The payload is n*(m+1)*2 bytes: the concrete (m+1) log q challenge cost.
# ---------------------------------------------------------------------------

_WIRE_HEADER = struct.Struct("<4sBBHBHHH")  # magic, ver, rectype, p, d, k, m, n


def encode_wire(mc: MultiChallenge, field_params: FieldParams, params: RmParams) -> bytes:
    if len(mc) != params.n:
        raise DimensionMismatch(f"expected {params.n} challenges, got {len(mc)}")
    head = _WIRE_HEADER.pack(
        _MAGIC, _VERSION, _RECORD_CHALLENGES,
        field_params.p, field_params.d, params.k, params.m, params.n,
    )
    flat = []
    for ch in mc:
        if len(ch.r) != params.m:
            raise DimensionMismatch(f"challenge has {len(ch.r)} coordinates, expected {params.m}")
        flat.extend(ch.r)
        flat.append(ch.t)
    return head + struct.pack(f"<{len(flat)}H", *flat)


def decode_wire(
    buf: bytes,
    expected_field: FieldParams | None = None,
    expected_params: RmParams | None = None,
) -> tuple[FieldParams, RmParams, MultiChallenge]:
    """Parse a challenge-set record; inverse of encode_wire.

    When expectations are supplied, a disagreement on (p, d) or (k, m)
    raises ParameterMismatch (n is taken from the record itself).
    """
    if len(buf) < _WIRE_HEADER.size:
        raise MalformedHeader("challenge record shorter than header")
    magic, ver, rectype, p, d, k, m, n = _WIRE_HEADER.unpack_from(buf)
    if magic != _MAGIC:
        raise MalformedHeader(f"bad magic {magic!r}")
    if ver != _VERSION:
        raise MalformedHeader(f"unsupported version {ver}")
    if rectype != _RECORD_CHALLENGES:
        raise MalformedHeader(f"record type {rectype} is not a challenge set")
    if n < 1:
        raise MalformedHeader("challenge record with n = 0")
    fp = FieldParams(p, d)
    try:
        params = RmParams(fp.q, k, m, n)
    except ValueError as exc:
        raise MalformedHeader(str(exc)) from None
    if expected_field is not None and expected_field != fp:
        raise ParameterMismatch(f"field GF({fp.p}^{fp.d}) does not match expected "
                                f"GF({expected_field.p}^{expected_field.d})")
    if expected_params is not None and (expected_params.k, expected_params.m) != (k, m):
        raise ParameterMismatch(f"code (k={k}, m={m}) does not match expected "
                                f"(k={expected_params.k}, m={expected_params.m})")
    expect = _WIRE_HEADER.size + n * (m + 1) * 2
    if len(buf) < expect:
        raise TruncatedPayload(f"need {expect} bytes, got {len(buf)}")
    flat = struct.unpack_from(f"<{n * (m + 1)}H", buf, _WIRE_HEADER.size)
    q = fp.q
    if any(v >= q for v in flat):
        raise WireFormatError("element out of field range")
    challenges = []
    for i in range(n):
        rec = flat[i * (m + 1): (i + 1) * (m + 1)]
        challenges.append(Challenge(tuple(rec[:m]), rec[m]))
    return fp, params, MultiChallenge(tuple(challenges))
