"""Field construction, arithmetic laws, and the Zech tables against the
polynomial-representation backend."""

from random import Random

import pytest

from rmid.gf import (
    CACHE_MAX_ORDER,
    FieldCtx,
    FieldParams,
    FieldTooLarge,
    NotPrime,
    PolyFieldCtx,
    build_field,
    factor_prime_power,
    find_primitive_polynomial,
    is_prime,
)

SMALL_FIELDS = [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (13, 1)]


def all_prime_powers(limit):
    out = []
    for p in range(2, limit + 1):
        if not is_prime(p):
            continue
        d = 1
        while p ** d <= limit:
            out.append((p, d))
            d += 1
    return sorted(out, key=lambda pd: pd[0] ** pd[1])


# -- construction ------------------------------------------------------------

def test_gf2_trivial():
    ctx = build_field(2, 1)
    assert ctx.q == 2
    assert ctx.add(1, 1) == 0
    assert ctx.mul(1, 1) == 1


def test_gf4_zech_table():
    # brute-force oracle over the 4-element polynomial representation:
    # modulus x^2 + x + 1, elements {0, 1, x, x+1} = indices {0, 1, 2, 3}
    ctx = build_field(2, 2)
    assert ctx.modulus == [1, 1, 1]
    assert ctx.zech_table[0] == -1      # 1 + g^0 = 0 in characteristic 2
    assert ctx.zech_table[1] == 2
    assert ctx.zech_table[2] == 1


def test_field_too_large():
    with pytest.raises(FieldTooLarge):
        build_field(2, 17)
    with pytest.raises(FieldTooLarge):
        build_field(65537, 1)


def test_not_prime():
    with pytest.raises(NotPrime):
        build_field(4, 1)
    with pytest.raises(NotPrime):
        build_field(1, 1)
    with pytest.raises(ValueError):
        build_field(2, 0)


def test_construction_deterministic():
    a = FieldCtx(3, 4)
    b = FieldCtx(3, 4)
    assert a.modulus == b.modulus
    assert a.exp_table == b.exp_table
    assert a.zech_table == b.zech_table


def test_factor_prime_power():
    assert factor_prime_power(512) == (2, 9)
    assert factor_prime_power(19683) == (3, 9)
    assert factor_prime_power(257) == (257, 1)
    for bad in (1, 6, 12, 100):
        with pytest.raises(NotPrime):
            factor_prime_power(bad)


def test_primitive_polynomial_is_lex_smallest():
    # every strictly smaller candidate must fail the order-(q-1) test
    p, d = 2, 4
    mod = find_primitive_polynomial(p, d)
    assert mod == [1, 1, 0, 0, 1]  # x^4 + x + 1


# -- arithmetic examples -----------------------------------------------------

def test_gf5_examples():
    ctx = build_field(5, 1)
    assert ctx.add(3, 4) == 2
    assert ctx.mul(3, 4) == 2
    assert ctx.pow(2, 3) == 3


def test_gf4_examples():
    ctx = build_field(2, 2)
    g = 2
    assert ctx.add(g, g) == 0
    assert ctx.add(1, g) == 3          # g^2
    assert ctx.mul(g, 3) == 1          # g * g^2 = g^3 = 1
    assert ctx.pow(g, 5) == 3


def test_pow_conventions():
    for p, d in SMALL_FIELDS:
        ctx = build_field(p, d)
        assert ctx.pow(0, 0) == 1
        assert ctx.pow(0, 3) == 0
        for a in range(1, ctx.q):
            assert ctx.pow(a, ctx.q - 1) == 1
            assert ctx.pow(a, 1) == a
        with pytest.raises(ValueError):
            ctx.pow(1, -1)


def test_division():
    for p, d in SMALL_FIELDS:
        ctx = build_field(p, d)
        with pytest.raises(ZeroDivisionError):
            ctx.inv(0)
        with pytest.raises(ZeroDivisionError):
            ctx.div(1, 0)
        for a in range(1, ctx.q):
            assert ctx.mul(a, ctx.inv(a)) == 1
            for b in range(1, ctx.q):
                assert ctx.mul(ctx.div(a, b), b) == a


# -- axioms and backend agreement -------------------------------------------

def axioms_exhaustive(ctx):
    q = ctx.q
    add, mul = ctx.add, ctx.mul
    for a in range(q):
        assert add(a, 0) == a and mul(a, 1) == a and mul(a, 0) == 0
        assert add(a, ctx.neg(a)) == 0
        assert ctx.sub(a, a) == 0
    for a in range(q):
        for b in range(q):
            assert add(a, b) == add(b, a)
            assert mul(a, b) == mul(b, a)
    for a in range(q):
        for b in range(q):
            for c in range(q):
                assert add(add(a, b), c) == add(a, add(b, c))
                assert mul(mul(a, b), c) == mul(a, mul(b, c))
                assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


@pytest.mark.parametrize("p,d", [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (11, 1), (2, 4)])
def test_field_axioms_small(p, d):
    axioms_exhaustive(build_field(p, d))


@pytest.mark.parametrize("p,d", [(2, 7), (3, 5), (5, 3), (251, 1), (2, 9)])
def test_zech_vs_polynomial_backend(p, d):
    table = build_field(p, d)
    poly = PolyFieldCtx(p, d)
    q = table.q
    rng = Random(1234)
    # exhaustive on the operation most at risk (Zech addition), sampled pairs for mul
    for a in range(q):
        for b in range(q):
            assert table.add(a, b) == poly.add(a, b)
    for _ in range(20_000):
        a, b = rng.randrange(q), rng.randrange(q)
        assert table.mul(a, b) == poly.mul(a, b)
        assert table.sub(a, b) == poly.sub(a, b)
    for _ in range(2_000):
        a = rng.randrange(1, q)
        assert table.inv(a) == poly.inv(a)
        e = rng.randrange(0, 3 * q)
        assert table.pow(a, e) == poly.pow(a, e)
    assert table.modulus == poly.modulus


def test_axioms_sampled_large_fields():
    # 1e5 random triples per field above the exhaustive range
    for p, d in [(2, 10), (3, 7), (2, 12), (65521, 1), (2, 15)]:
        ctx = FieldCtx(p, d)
        q = ctx.q
        rng = Random(99)
        add, mul = ctx.add, ctx.mul
        for _ in range(100_000):
            a, b, c = rng.randrange(q), rng.randrange(q), rng.randrange(q)
            assert add(add(a, b), c) == add(a, add(b, c))
            assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))


def test_zech_sentinel_position():
    for p, d in [(2, 3), (2, 8), (3, 2), (5, 2), (7, 1), (13, 1)]:
        ctx = build_field(p, d)
        order = ctx.q - 1
        sentinels = [e for e in range(order) if ctx.zech_table[e] == -1]
        if p == 2:
            assert sentinels == [0]
        else:
            assert sentinels == [order // 2]


# -- uniform sampling --------------------------------------------------------

def test_sample_uniform_range_and_determinism():
    for p, d in [(2, 1), (257, 1), (2, 8)]:
        ctx = build_field(p, d)
        seq1 = [ctx.sample_uniform(Random(42)) for _ in range(5)]
        rng = Random(42)
        seq2 = [ctx.sample_uniform(rng) for _ in range(5)]
        assert seq1[0] == seq2[0]
        assert all(0 <= v < ctx.q for v in seq2)
        rng_a, rng_b = Random(7), Random(7)
        assert [ctx.sample_uniform(rng_a) for _ in range(100)] == \
               [ctx.sample_uniform(rng_b) for _ in range(100)]


def test_sample_uniform_frequencies_gf257():
    # each element count within 5 sigma of N/257 over 1e6 draws
    ctx = build_field(257, 1)
    rng = Random(20210715)
    n = 1_000_000
    counts = [0] * 257
    sample = ctx.sample_uniform
    for _ in range(n):
        counts[sample(rng)] += 1
    expected = n / 257
    sigma = (n * (1 / 257) * (1 - 1 / 257)) ** 0.5
    worst = max(abs(c - expected) for c in counts)
    assert worst <= 5 * sigma, f"worst deviation {worst:.1f} > 5 sigma = {5 * sigma:.1f}"


# -- cache mode --------------------------------------------------------------

def test_cache_mode_identical_results():
    for p, d in [(2, 4), (5, 2), (19, 1)]:
        plain = build_field(p, d)
        cached = build_field(p, d, cache=True)
        assert cached.cache_active
        q = plain.q
        for a in range(q):
            for b in range(q):
                assert plain.add(a, b) == cached.add(a, b)
                assert plain.mul(a, b) == cached.mul(a, b)


def test_cache_mode_falls_back_above_limit():
    ctx = FieldCtx(3, 9, cache=True)  # 19683 > CACHE_MAX_ORDER
    assert ctx.q > CACHE_MAX_ORDER
    assert not ctx.cache_active
    assert ctx.add(1, 2) == FieldCtx(3, 9).add(1, 2)


# -- serialization -----------------------------------------------------------

def test_field_params_pack_roundtrip():
    for p, d in [(2, 1), (2, 15), (65521, 1), (3, 9)]:
        fp = FieldParams(p, d)
        assert FieldParams.unpack(fp.pack()) == fp
        assert len(fp.pack()) == 3
