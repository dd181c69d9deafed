"""Finite field arithmetic for GF(p^d), q = p^d < 2^16, via Zech logarithm tables.

Elements are plain ints in [0, q): the base-p digit encoding of the
polynomial (vector) representation, index = sum_i c_i * p^i for the
element c_0 + c_1*x + ... + c_{d-1}*x^{d-1}.  0 is the additive zero and
1 the multiplicative one.  The modulus is the lexicographically smallest
primitive polynomial of degree d over GF(p) (coefficient tuples compared
from degree d-1 down to the constant term), so construction is fully
deterministic: the same (p, d) always yields the same tables and the
same element numbering.

With g = x (the root of the modulus) as primitive element, three tables
drive all arithmetic:

    exp[e]  = vector index of g^e          (e in [0, q-1))
    log[v]  = discrete log of element v    (v nonzero)
    zech[e] = Z(e) with g^Z(e) = 1 + g^e   (-1 where 1 + g^e = 0)

so both addition and multiplication are a constant number of table
lookups, independent of p, d and q.  Elements are only meaningful
relative to the context that produced them; mixing contexts is a caller
error and is not detected.

A table-free generic backend (PolyFieldCtx) with the identical element
numbering serves as an independent reference and covers q >= 2^16 for
directional timing comparisons only.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from functools import lru_cache

MAX_TABLE_ORDER = 1 << 16   # Zech/table backend limit (exclusive)
CACHE_MAX_ORDER = 1 << 12   # dense pairwise op tables above this are not built

_ZECH_NONE = -1


class NotPrime(ValueError):
    """Field characteristic is not a prime number."""


class FieldTooLarge(ValueError):
    """Requested order is out of range for the table backend."""


class NoPrimitivePolynomial(RuntimeError):
    """No primitive modulus found; indicates internal table corruption."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def factor_prime_power(q: int) -> tuple[int, int]:
    """Split q into (p, d) with q = p^d, p prime. Raises NotPrime otherwise."""
    if q < 2:
        raise NotPrime(f"{q} is not a prime power")
    p = q
    for c in range(2, q + 1):
        if c * c > q:
            break
        if q % c == 0:
            p = c
            break
    d = 0
    rest = q
    while rest % p == 0:
        rest //= p
        d += 1
    if rest != 1 or not is_prime(p):
        raise NotPrime(f"{q} is not a prime power")
    return p, d


def _prime_factors(n: int) -> list[int]:
    out = []
    c = 2
    while c * c <= n:
        if n % c == 0:
            out.append(c)
            while n % c == 0:
                n //= c
        c += 1 if c == 2 else 2
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# Polynomial arithmetic over GF(p), coefficient lists in ascending degree.
# ---------------------------------------------------------------------------

def _poly_mul_mod(a, b, mod, p):
    """(a * b) reduced by the monic polynomial `mod`, coefficients mod p."""
    d = len(mod) - 1
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    for i in range(len(out) - 1, d - 1, -1):
        c = out[i]
        if c:
            out[i] = 0
            for j in range(d):
                out[i - d + j] = (out[i - d + j] - c * mod[j]) % p
    del out[d:]
    return out


def _poly_pow_mod(base, e, mod, p):
    result = [1] + [0] * (len(mod) - 2)
    acc = list(base)
    while e:
        if e & 1:
            result = _poly_mul_mod(result, acc, mod, p)
        e >>= 1
        if e:
            acc = _poly_mul_mod(acc, acc, mod, p)
    return result


def _is_one(poly) -> bool:
    return poly[0] == 1 and not any(poly[1:])


def find_primitive_polynomial(p: int, d: int) -> list[int]:
    """Lexicographically smallest monic primitive polynomial of degree d over GF(p).

    Returned as coefficient list [c_0, ..., c_{d-1}, 1].  Candidates are
    ordered by the tuple (c_{d-1}, ..., c_0); a candidate is accepted iff
    x has multiplicative order exactly p^d - 1 in GF(p)[x]/(f), which
    simultaneously forces f irreducible and x primitive.
    """
    q = p ** d
    order = q - 1
    factors = _prime_factors(order) if order > 1 else []
    x = [0, 1] if d > 1 else [0]
    for n in range(p ** d):
        coeffs = []
        v = n
        for _ in range(d):
            coeffs.append(v % p)
            v //= p
        if coeffs[0] == 0 and d > 0:
            continue  # x divides f, x not a unit
        mod = coeffs + [1]
        if d == 1:
            x = [(-coeffs[0]) % p]
        if not _is_one(_poly_pow_mod(x, order, mod, p)):
            continue
        if any(_is_one(_poly_pow_mod(x, order // f, mod, p)) for f in factors):
            continue
        return mod
    raise NoPrimitivePolynomial(f"no primitive polynomial for GF({p}^{d})")


@dataclass(frozen=True)
class FieldParams:
    """Order book-keeping for one field: q = p^d."""

    p: int
    d: int

    @property
    def q(self) -> int:
        return self.p ** self.d

    def pack(self) -> bytes:
        return struct.pack("<HB", self.p, self.d)

    @staticmethod
    def unpack(buf: bytes) -> "FieldParams":
        p, d = struct.unpack("<HB", buf[:3])
        return FieldParams(p, d)


def _validate_params(p: int, d: int, limit: int | None) -> int:
    if not is_prime(p):
        raise NotPrime(f"p={p} is not prime")
    if d < 1:
        raise ValueError(f"extension degree must be >= 1, got {d}")
    q = p ** d
    if limit is not None and q >= limit:
        raise FieldTooLarge(f"q = {p}^{d} = {q} >= {limit}")
    return q


class FieldCtx:
    """GF(p^d) with full log/exp/Zech tables, q < 2^16.

    Immutable after construction and safe to share across threads.  The
    hot entry points ``add``, ``mul`` and ``pow`` are plain function
    attributes (closures over the tables) rather than bound methods; the
    remaining operations go through them.

    ``cache=True`` additionally builds dense q*q addition/multiplication
    tables from the Zech-based operations, mirroring the element-cache
    option of table-based field libraries; it is skipped silently for
    q > 4096 (``cache_active`` reports the effective state).
    """

    def __init__(self, p: int, d: int, *, cache: bool = False):
        q = _validate_params(p, d, MAX_TABLE_ORDER)
        self.params = FieldParams(p, d)
        self.p = p
        self.d = d
        self.q = q
        self.modulus = find_primitive_polynomial(p, d)
        order = q - 1
        self._order = order

        exp = [0] * max(order, 1)
        log = [0] * q
        val = [1] + [0] * (d - 1)          # polynomial 1
        mod = self.modulus
        for e in range(order):
            idx = 0
            for c in reversed(val):
                idx = idx * p + c
            exp[e] = idx
            log[idx] = e
            # val *= x, reduce by the monic modulus
            carry = val[-1]
            for i in range(d - 1, 0, -1):
                val[i] = val[i - 1]
            val[0] = 0
            if carry:
                for i in range(d):
                    val[i] = (val[i] - carry * mod[i]) % p
        if not _is_one(val):
            raise NoPrimitivePolynomial(f"generator order mismatch for GF({p}^{d})")

        zech = [0] * max(order, 1)
        for e in range(order):
            u = exp[e]
            c0 = u % p
            v = u - c0 + (c0 + 1) % p       # 1 + g^e in vector representation
            zech[e] = log[v] if v else _ZECH_NONE
        self.exp_table = exp
        self.log_table = log
        self.zech_table = zech
        self._half = order // 2             # log of -1 in odd characteristic
        self._sample_bits = max((q - 1).bit_length(), 1)

        if __debug__ and q <= CACHE_MAX_ORDER:
            self._verify_tables()

        def add(a, b, _log=log, _exp=exp, _zech=zech, _n=order):
            if a == 0:
                return b
            if b == 0:
                return a
            ea = _log[a]
            z = _zech[(_log[b] - ea) % _n]
            if z < 0:
                return 0
            return _exp[(ea + z) % _n]

        def mul(a, b, _log=log, _exp=exp, _n=order):
            if a == 0 or b == 0:
                return 0
            return _exp[(_log[a] + _log[b]) % _n]

        def power(a, e, _log=log, _exp=exp, _n=order):
            if e < 0:
                raise ValueError("negative exponent")
            if a == 0:
                return 1 if e == 0 else 0   # 0^0 = 1: constant monomials stay constant
            return _exp[(_log[a] * e) % _n]

        self.cache_active = False
        if cache and q <= CACHE_MAX_ORDER:
            addt = [0] * (q * q)
            mult = [0] * (q * q)
            for a in range(q):
                base = a * q
                for b in range(q):
                    addt[base + b] = add(a, b)
                    mult[base + b] = mul(a, b)

            def add_cached(a, b, _t=addt, _q=q):
                return _t[a * _q + b]

            def mul_cached(a, b, _t=mult, _q=q):
                return _t[a * _q + b]

            self.add = add_cached
            self.mul = mul_cached
            self.cache_active = True
        else:
            self.add = add
            self.mul = mul
        self.pow = power

    def _verify_tables(self):
        # exp/log are inverse bijections and the Zech identity holds.
        order, p, q = self._order, self.p, self.q
        seen = set(self.exp_table[:order])
        assert len(seen) == order and 0 not in seen
        for e in range(order):
            u = self.exp_table[e]
            assert self.log_table[u] == e
            c0 = u % p
            v = u - c0 + (c0 + 1) % p
            z = self.zech_table[e]
            assert (z == _ZECH_NONE) == (v == 0)
            if v:
                assert self.exp_table[z] == v
        if order:
            sentinel_at = 0 if p == 2 else self._half
            if q > 2:
                assert self.zech_table[sentinel_at] == _ZECH_NONE

    # -- derived operations ------------------------------------------------

    def neg(self, a: int) -> int:
        if a == 0 or self.p == 2:
            return a
        return self.exp_table[(self.log_table[a] + self._half) % self._order]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self.exp_table[(self._order - self.log_table[a]) % self._order]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def sample_uniform(self, rng) -> int:
        """Uniform element via rejection over the smallest 2^b >= q."""
        q = self.q
        bits = self._sample_bits
        while True:
            v = rng.getrandbits(bits)
            if v < q:
                return v

    def elements(self):
        return range(self.q)

    @property
    def generator(self) -> int:
        return self.exp_table[1 % max(self._order, 1)] if self._order > 1 else 1

    def __repr__(self):
        return f"FieldCtx(GF({self.p}^{self.d}), q={self.q})"


@lru_cache(maxsize=32)
def _shared_field(p: int, d: int) -> FieldCtx:
    return FieldCtx(p, d)


def build_field(p: int, d: int, *, cache: bool = False) -> FieldCtx:
    """The Zech-table field GF(p^d), q < 2^16.

    Contexts are immutable, so repeated calls with the same (p, d) may
    return one shared instance; ``cache=True`` (dense op tables) always
    constructs fresh.
    """
    if cache:
        return FieldCtx(p, d, cache=True)
    return _shared_field(p, d)


class PolyFieldCtx:
    """Table-free GF(p^d) backend using polynomial arithmetic directly.

    Same element numbering and modulus convention as FieldCtx, so results
    are directly comparable; add is O(d) digit work and mul is O(d^2).
    Exists as an independent reference for the table backend and to allow
    directional timing at q >= 2^16; it is not on the performance path.
    """

    def __init__(self, p: int, d: int):
        q = _validate_params(p, d, None)
        self.params = FieldParams(p, d)
        self.p = p
        self.d = d
        self.q = q
        self.modulus = find_primitive_polynomial(p, d)
        self._sample_bits = max((q - 1).bit_length(), 1)
        self.cache_active = False

    def _digits(self, a: int) -> list[int]:
        p = self.p
        out = []
        for _ in range(self.d):
            out.append(a % p)
            a //= p
        return out

    def _index(self, digits) -> int:
        idx = 0
        for c in reversed(digits):
            idx = idx * self.p + c
        return idx

    def add(self, a: int, b: int) -> int:
        p = self.p
        da, db = self._digits(a), self._digits(b)
        return self._index([(x + y) % p for x, y in zip(da, db)])

    def neg(self, a: int) -> int:
        p = self.p
        return self._index([(-x) % p for x in self._digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        prod = _poly_mul_mod(self._digits(a), self._digits(b), self.modulus, self.p)
        return self._index(prod + [0] * (self.d - len(prod)))

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            raise ValueError("negative exponent")
        if a == 0:
            return 1 if e == 0 else 0
        r = _poly_pow_mod(self._digits(a), e % (self.q - 1) if e else 0, self.modulus, self.p)
        return self._index(r + [0] * (self.d - len(r)))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0")
        return self.pow(a, self.q - 2)

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def sample_uniform(self, rng) -> int:
        q = self.q
        bits = self._sample_bits
        while True:
            v = rng.getrandbits(bits)
            if v < q:
                return v

    def elements(self):
        return range(self.q)

    def __repr__(self):
        return f"PolyFieldCtx(GF({self.p}^{self.d}), q={self.q})"


def build_generic_field(p: int, d: int) -> PolyFieldCtx:
    return PolyFieldCtx(p, d)
