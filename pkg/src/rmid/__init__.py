"""Reed-Muller identification codes over small finite fields.

Identity generation, challenge/tag computation via recursive
multivariate polynomial evaluation, multi-challenge verification, plus
parameter/capacity/cost analyses and a timing harness.
"""

from .gf import (
    FieldCtx,
    FieldParams,
    FieldTooLarge,
    NotPrime,
    PolyFieldCtx,
    build_field,
    build_generic_field,
    factor_prime_power,
)
from .ident import (
    Challenge,
    CodeReport,
    MultiChallenge,
    ParameterMismatch,
    VerificationResult,
    decode_wire,
    encode_wire,
    issue_challenges,
    report,
    verify,
)
from .rmpoly import (
    BadDegree,
    DimensionMismatch,
    Identity,
    MalformedHeader,
    OverflowingCount,
    RmParams,
    TruncatedPayload,
    WireFormatError,
    coefficient_partition,
    enumerate_monomials,
    eval_naive,
    eval_recursive,
    num_monomials,
    read_identity,
    sample_identity,
    write_identity,
)

__version__ = "0.1.0"

__all__ = [
    "FieldCtx", "FieldParams", "FieldTooLarge", "NotPrime", "PolyFieldCtx",
    "build_field", "build_generic_field", "factor_prime_power",
    "Challenge", "CodeReport", "MultiChallenge", "ParameterMismatch",
    "VerificationResult", "decode_wire", "encode_wire", "issue_challenges",
    "report", "verify",
    "BadDegree", "DimensionMismatch", "Identity", "MalformedHeader",
    "OverflowingCount", "RmParams", "TruncatedPayload", "WireFormatError",
    "coefficient_partition", "enumerate_monomials", "eval_naive",
    "eval_recursive", "num_monomials", "read_identity", "sample_identity",
    "write_identity",
]
