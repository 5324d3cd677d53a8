import random
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from detfactor.giantstep import (
    EvalTable,
    Found,
    NoDivisorUpTo,
    _hypothesis_integers,
    _hypothesis_max_abs,
    check_invertible_batch,
    drill_down_witness,
    eval_H_base,
    extend_double,
    fast_eval_Hk,
    find_divisor_leq_b,
    grand_hypothesis,
    prime_from_witness,
    search_bound,
)
from detfactor.poly import PolyModN
from detfactor.ring import (
    AllInvertible,
    DivisorFound,
    DivisorWitness,
    NoninvertibleAt,
    Provenance,
    Thresholds,
    make_context,
)
from detfactor.sieve import build_H, sieve_params

from conftest import miller_rabin

DEG = sieve_params(None, degenerate=True)


def brute_Hk(sp, k, x, N):
    acc = 1
    for t in range(k):
        for j in sp.residues:
            acc = acc * (sp.Q * (x + t) + j) % N
    return acc


def test_eval_H_base_examples(ctx1009):
    H = PolyModN.from_ints([1, 2], ctx1009)
    assert eval_H_base(H, 1, 1).values == [1, 3]
    H = PolyModN.from_ints([5, 36, 36], ctx1009)
    assert eval_H_base(H, 1, 2).values == [5, 77, 221]
    H = PolyModN.from_ints([1, 1], ctx1009)
    assert eval_H_base(H, 4, 1).values == [1, 5]
    with pytest.raises(ValueError):
        eval_H_base(H, 4, 2)


def test_eval_table_length_checked():
    with pytest.raises(ValueError):
        EvalTable(2, 2, 1, [1, 2])


def test_grand_hypothesis_examples(ctx1009):
    gh = grand_hypothesis(0, 1, 1, ctx1009)
    assert (gh.per_level, gh.D, gh.D_inv) == ([], 1, 1)
    gh = grand_hypothesis(1, 2, 1, ctx1009)
    assert gh.D == 433
    assert gh.D * gh.D_inv % 1009 == 1
    (a, b), = gh.per_level
    assert a.factors == [2, 1008, 1, 3]  # -1 reduced
    assert b.factors == [2, 2, 4, 6]
    for hp in (a, b):
        assert hp.product * hp.product_inv % 1009 == 1
    with pytest.raises(DivisorFound) as exc:
        grand_hypothesis(1, 2, 1, make_context(15))
    assert exc.value.witness.g == 3


@pytest.mark.parametrize("B", [None, 3, 5, 7, 11])
def test_hypothesis_integers_bounded_by_b(B):
    sp = DEG if B is None else sieve_params(B)
    for r in range(7):
        k = 1 << r
        b = search_bound(sp, r)
        assert _hypothesis_max_abs(r, k, sp.rho) <= b
        assert all(abs(x) <= b for x in _hypothesis_integers(r, k, sp.rho))


def test_hypothesis_integers_cover_every_factor():
    # each per-level factor is a product of listed integers (or beta times one)
    for r in range(1, 6):
        beta, rho = 1 << r, 8
        N = 2**61 - 1
        listed = {x % N for x in _hypothesis_integers(r, beta, rho)}
        beta_inv = pow(beta, -1, N)
        gh = grand_hypothesis(r, beta, rho, make_context(N))
        for pair in gh.per_level:
            for hp in pair:
                for f in hp.factors:
                    assert f in listed or f * beta_inv % N in listed


def test_grand_hypothesis_bound_assertion(ctx1009):
    with pytest.raises(AssertionError):
        grand_hypothesis(3, 8, 2, ctx1009, bound=10)


def test_extend_double_example(ctx1009):
    tbl = EvalTable(1, 2, 1, [1, 3])
    gh = grand_hypothesis(1, 2, 1, ctx1009)
    assert extend_double(tbl, gh.per_level[0]).values == [2, 12, 30]


def test_extend_double_level_mismatch(ctx1009):
    tbl = EvalTable(1, 2, 1, [1, 3])
    gh = grand_hypothesis(1, 4, 1, ctx1009)
    with pytest.raises(ValueError):
        extend_double(tbl, gh.per_level[0])


def test_fast_eval_examples():
    N = 10**12 + 39
    ctx = make_context(N)
    H = build_H(DEG, ctx)
    assert fast_eval_Hk(H, 0, 1, 1, grand_hypothesis(0, 1, 1, ctx)).values == [1, 2]
    tbl = fast_eval_Hk(H, 2, 4, 1, grand_hypothesis(2, 4, 1, ctx))
    assert tbl.values == [brute_Hk(DEG, 4, 4 * i, N) for i in range(5)]
    ctx = make_context(100003)
    sp = sieve_params(5)
    tbl = fast_eval_Hk(build_H(sp, ctx), 1, 2, 2, grand_hypothesis(1, 2, 2, ctx))
    assert len(tbl.values) == 5
    assert tbl.values == [brute_Hk(sp, 2, 2 * i, 100003) for i in range(5)]


@pytest.mark.parametrize("B", [None, 3, 5, 7])
@pytest.mark.parametrize("r", [0, 1, 2, 3])
def test_table_matches_brute_force(B, r):
    sp = DEG if B is None else sieve_params(B)
    N = 2**61 - 1
    ctx = make_context(N)
    rng = random.Random(B or 0)
    for beta in (1 << r, rng.randrange(1, 50)):
        gh = grand_hypothesis(r, beta, sp.rho, ctx)
        tbl = fast_eval_Hk(build_H(sp, ctx), r, beta, sp.rho, gh)
        k = 1 << r
        assert tbl.k == k and len(tbl.values) == k * sp.rho + 1
        assert tbl.values == [brute_Hk(sp, k, i * beta, N) for i in range(k * sp.rho + 1)]


@pytest.mark.parametrize("r", [0, 1, 3, 5])
def test_fast_eval_counts_three_shifts_per_level(r):
    sp = sieve_params(5)
    ctx = make_context(2**61 - 1)
    H = build_H(sp, ctx)
    gh = grand_hypothesis(r, 1 << r, sp.rho, ctx)
    before = ctx.counters.snapshot()
    fast_eval_Hk(H, r, 1 << r, sp.rho, gh)
    after = ctx.counters.snapshot()
    assert after["shift_eval_calls"] - before["shift_eval_calls"] == 3 * r
    assert after["poly_mults"] - before["poly_mults"] == 3 * r


@pytest.mark.parametrize("B", [3, 5, 7])
def test_product_identity_sample(B):
    sp = sieve_params(B)
    rng = random.Random(B)
    for r in range(4):
        k = 1 << r
        b = search_bound(sp, r)
        done = 0
        while done < 5:
            N = rng.randrange(10**12, 10**15)
            if gcd(N, sp.Q) != 1:
                continue
            ctx = make_context(N)
            try:
                gh = grand_hypothesis(r, k, sp.rho, ctx, bound=b)
            except DivisorFound:
                continue
            tbl = fast_eval_Hk(build_H(sp, ctx), r, k, sp.rho, gh)
            lhs = 1
            for v in tbl.values[:k * sp.rho]:
                lhs = lhs * v % N
            rhs = 1
            for j in range(1, b + 1):
                if gcd(j, sp.Q) == 1:
                    rhs = rhs * j % N
            assert lhs == rhs
            done += 1


def test_check_invertible_batch_examples(ctx1009):
    out = check_invertible_batch([1, 2, 3], ctx1009)
    assert isinstance(out, AllInvertible)
    assert out.product_inv == pow(6, -1, 1009)
    out = check_invertible_batch([2, 7, 3], make_context(91))
    assert isinstance(out, NoninvertibleAt)
    assert out.index == 1 and out.witness.g == 7
    out = check_invertible_batch([], ctx1009)
    assert isinstance(out, AllInvertible) and out.product_inv == 1


def test_drill_down_examples():
    sp3 = sieve_params(3)
    w = drill_down_witness(3, 2, 2, 1, sp3, make_context(91))
    assert w.g == 13 and w.source_x == 13
    w = drill_down_witness(1, 4, 4, 1, DEG, make_context(91))
    assert w.g == 7 and w.source_x == 7
    with pytest.raises(RuntimeError):
        drill_down_witness(0, 1, 1, 1, DEG, make_context(91))


def test_drill_down_tree_path(eager):
    ctx = make_context(91, thresholds=eager)
    assert drill_down_witness(1, 4, 4, 1, DEG, ctx).g == 7
    ctx = make_context(97 * 103, thresholds=Thresholds(drill_tree_size=0))
    sp = sieve_params(5)
    w = drill_down_witness(2, 8, 8, 2, sp, ctx)
    assert w.g == 97


def test_prime_from_witness_examples():
    assert prime_from_witness(DivisorWitness(35, 35, Provenance.DRILL_DOWN), 40, DEG) == 5
    assert prime_from_witness(DivisorWitness(13, 13, Provenance.DRILL_DOWN), 16, DEG) == 13
    assert prime_from_witness(DivisorWitness(49, 49, Provenance.DRILL_DOWN), 64, sieve_params(3)) == 7
    with pytest.raises(ValueError):
        prime_from_witness(DivisorWitness(97, 97, Provenance.DRILL_DOWN), 64, DEG)


def test_find_divisor_examples():
    sp = sieve_params(3)
    out = find_divisor_leq_b(make_context(91), sp, 1)
    assert isinstance(out, Found) and out.ell == 7
    assert find_divisor_leq_b(make_context(1009), sp, 2) == NoDivisorUpTo(32)
    out = find_divisor_leq_b(make_context(9991), sp, 3)
    assert isinstance(out, Found) and out.ell == 97


def test_find_divisor_preconditions():
    sp = sieve_params(3)
    with pytest.raises(ValueError):
        find_divisor_leq_b(make_context(31), sp, 2)
    with pytest.raises(ValueError):
        find_divisor_leq_b(make_context(1000), sp, 1)


def smallest_prime_factor(n):
    p = 2
    while p * p <= n:
        if n % p == 0:
            return p
        p += 1
    return n


@settings(max_examples=300, deadline=None)
@given(st.data())
def test_find_divisor_agrees_with_trial(data):
    B = data.draw(st.sampled_from([None, 3, 5, 7]))
    sp = DEG if B is None else sieve_params(B)
    r = data.draw(st.integers(0, 4))
    b = search_bound(sp, r)
    N = data.draw(st.integers(b + 1, 10**6).filter(lambda n: gcd(n, sp.Q) == 1))
    out = find_divisor_leq_b(make_context(N), sp, r)
    spf = smallest_prime_factor(N)
    if isinstance(out, NoDivisorUpTo):
        assert out.b == b and spf > b
    else:
        assert miller_rabin(out.ell) and N % out.ell == 0 and out.ell <= b
        assert spf <= b
