"""Giant steps over the sieved factorial.

With ``H(x) = prod_j (Qx + j)`` over the wheel residues, the interval product
``H_k(x) = H(x) H(x+1) ... H(x+k-1)`` evaluated at ``0, k, 2k, ...`` walks
through the integers coprime to Q in blocks of k*rho.  The table of values
is grown by doubling k, three shift evaluations per doubling.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import count
from math import gcd
from typing import Iterator, Optional, Sequence, Union

from .poly import HypothesisProduct, PolyModN, horner, hyp_product, shift_eval
from .ring import (
    AllInvertible,
    DivisorFound,
    DivisorWitness,
    ModulusContext,
    NoninvertibleAt,
    Provenance,
    batch_invert,
    check_invertible_batch,
    witness_for,
)
from .sieve import SieveParams, build_H

__all__ = [
    "EvalTable", "GrandHypothesis", "NoDivisorUpTo", "Found", "SearchOutcome",
    "eval_H_base", "grand_hypothesis", "extend_double", "fast_eval_Hk",
    "check_invertible_batch", "drill_down_witness", "prime_from_witness",
    "find_divisor_leq_b", "search_bound",
]


@dataclass(frozen=True)
class EvalTable:
    """Values ``H_k(i * beta)`` for ``i = 0 .. k * rho``."""

    k: int
    beta: int
    rho: int
    values: list[int]

    def __post_init__(self) -> None:
        if len(self.values) != self.k * self.rho + 1:
            raise ValueError(f"table for k={self.k}, rho={self.rho} needs {self.k * self.rho + 1} entries")


@dataclass(frozen=True)
class GrandHypothesis:
    r: int
    beta: int
    rho: int
    per_level: list[tuple[HypothesisProduct, HypothesisProduct]]
    D: int
    D_inv: int


@dataclass(frozen=True)
class NoDivisorUpTo:
    b: int


@dataclass(frozen=True)
class Found:
    ell: int
    witness: DivisorWitness


SearchOutcome = Union[NoDivisorUpTo, Found]


def search_bound(sp: SieveParams, r: int) -> int:
    return 4 ** r * sp.rho * sp.Q


def eval_H_base(H: PolyModN, beta: int, rho: int) -> EvalTable:
    if H.degree != rho:
        raise ValueError(f"H has degree {H.degree}, expected {rho}")
    N = H.ctx.N
    values = [horner(H.coeffs, i * beta, N) for i in range(rho + 1)]
    H.ctx.counters.add(ring_mults=(rho + 1) * rho)
    return EvalTable(1, beta, rho, values)


def _level_params(i: int, beta: int, rho: int) -> tuple[tuple[int, int], tuple[int, int]]:
    k = 1 << i
    d = k * rho
    return (k, d), ((d + 1) * beta, d)


def _hypothesis_integers(r: int, beta: int, rho: int) -> Iterator[int]:
    """Integers whose invertibility is equivalent to the whole hypothesis.

    The second product of each level has ``alpha`` a multiple of beta, so its
    entries ``beta * m`` split into beta and ``m <= 2d + 1``; together with the
    ``2..d`` entries that is just ``2 .. 2^r rho + 1``.
    """
    if r == 0:
        return
    yield beta
    yield from range(2, (1 << r) * rho + 2)
    for i in range(r):
        (alpha, d), _ = _level_params(i, beta, rho)
        for j in range(-d, d + 1):
            yield alpha + j * beta


def _hypothesis_max_abs(r: int, beta: int, rho: int) -> int:
    if r == 0:
        return 0
    top = max(abs(beta), (1 << r) * rho + 1)
    for i in range(r):
        (alpha, d), _ = _level_params(i, beta, rho)
        top = max(top, abs(alpha - d * beta), abs(alpha + d * beta))
    return top


def grand_hypothesis(r: int, beta: int, rho: int, ctx: ModulusContext,
                     bound: Optional[int] = None) -> GrandHypothesis:
    """Check every invertibility condition of ``r`` doublings and invert them all at once.

    The bounded integers are tested first (cheap, scalar); a noninvertible
    one raises :class:`DivisorFound`.  Then the per-level products are
    formed, their grand product inverted once and split back per level.
    """
    N = ctx.N
    if r == 0:
        return GrandHypothesis(0, beta, rho, [], 1 % N, 1 % N)
    if bound is not None and _hypothesis_max_abs(r, beta, rho) > bound:
        raise AssertionError(f"hypothesis integers exceed the bound {bound}")

    acc = 1
    n = 0
    for x in _hypothesis_integers(r, beta, rho):
        acc = acc * x % N
        n += 1
    ctx.counters.add(ring_mults=n, gcd_calls=1)
    if gcd(acc, N) != 1:
        ints = list(_hypothesis_integers(r, beta, rho))
        outcome = check_invertible_batch([x % N for x in ints], ctx, Provenance.HYPOTHESIS_CHECK)
        assert isinstance(outcome, NoninvertibleAt)
        x = ints[outcome.index]
        w = witness_for(abs(x), N, Provenance.HYPOTHESIS_CHECK)
        if w is None:
            raise ZeroDivisionError(f"hypothesis integer {x} vanishes mod {N}")
        raise DivisorFound(w)

    per_level = []
    products = []
    for i in range(r):
        (a1, d), (a2, _) = _level_params(i, beta, rho)
        pair = (hyp_product(a1, beta, d, ctx, invert=False),
                hyp_product(a2, beta, d, ctx, invert=False))
        per_level.append(pair)
        products.extend(hp.product for hp in pair)
    D = 1
    for p in products:
        D = D * p % N
    ctx.counters.add(ring_mults=len(products), gcd_calls=1)
    if gcd(D, N) != 1:
        # unreachable when every tested integer is below N in absolute value
        for pair in per_level:
            for hp in pair:
                hyp_product(hp.alpha, hp.beta, hp.d, ctx)
        raise ZeroDivisionError("grand hypothesis product is not a unit")
    D_inv = pow(D, -1, N)
    invs = batch_invert(products, D_inv, ctx)
    for hp, inv in zip((hp for pair in per_level for hp in pair), invs):
        hp.product_inv = inv
    return GrandHypothesis(r, beta, rho, per_level, D, D_inv)


def extend_double(tbl: EvalTable, level: tuple[HypothesisProduct, HypothesisProduct]) -> EvalTable:
    """From ``H_k`` on ``0, beta, ..., k rho beta`` to ``H_2k`` on ``0, ..., 2k rho beta``."""
    k, beta, rho = tbl.k, tbl.beta, tbl.rho
    d = k * rho
    hp_k, hp_far = level
    if (hp_k.alpha, hp_k.beta, hp_k.d) != (k, beta, d) or \
            (hp_far.alpha, hp_far.beta, hp_far.d) != ((d + 1) * beta, beta, d):
        raise ValueError("hypothesis level does not match the table")
    ctx = hp_k.ctx
    N = ctx.N
    vals = tbl.values

    near = shift_eval(vals, hp_k)              # H_k(i beta + k)
    far = shift_eval(vals, hp_far)             # H_k((d + 1 + i) beta)
    far_shift = shift_eval(far, hp_k)          # H_k((d + 1 + i) beta + k)

    out = [v * w % N for v, w in zip(vals, near)]
    out.extend(v * w % N for v, w in zip(far[:d], far_shift[:d]))
    ctx.counters.add(ring_mults=2 * d + 1)
    return EvalTable(2 * k, beta, rho, out)


def fast_eval_Hk(H: PolyModN, r: int, beta: int, rho: int, gh: GrandHypothesis) -> EvalTable:
    if (gh.r, gh.beta, gh.rho) != (r, beta, rho):
        raise ValueError("grand hypothesis was built for different parameters")
    tbl = eval_H_base(H, beta, rho)
    for i in range(r):
        tbl = extend_double(tbl, gh.per_level[i])
    return tbl


def _block_integers(i: int, k: int, beta: int, sp: SieveParams) -> Iterator[int]:
    Q = sp.Q
    for t in range(k):
        base = (i * beta + t) * Q
        for j in sp.residues:
            yield base + j


def drill_down_witness(i: int, k: int, beta: int, rho: int, sp: SieveParams,
                       ctx: ModulusContext) -> DivisorWitness:
    """Find an integer factor of ``H_k(i beta)`` sharing a divisor with N."""
    N = ctx.N
    if k * rho > ctx.thresholds.drill_tree_size:
        ints = list(_block_integers(i, k, beta, sp))
        outcome = check_invertible_batch([x % N for x in ints], ctx, Provenance.DRILL_DOWN)
        if isinstance(outcome, NoninvertibleAt):
            x = ints[outcome.index]
            w = witness_for(x, N, Provenance.DRILL_DOWN)
            if w is not None:
                return w
    else:
        calls = 0
        for x in _block_integers(i, k, beta, sp):
            calls += 1
            g = gcd(x, N)
            if 1 < g < N:
                ctx.counters.add(gcd_calls=calls)
                return DivisorWitness(g, x, Provenance.DRILL_DOWN)
        ctx.counters.add(gcd_calls=calls)
    raise RuntimeError(f"H_{k}({i * beta}) has no integer factor sharing a divisor with N")


def _wheel(sp: SieveParams) -> Iterator[int]:
    for s in count():
        base = s * sp.Q
        for j in sp.residues:
            if base + j >= 2:
                yield base + j


def prime_from_witness(w: DivisorWitness, b: int, sp: SieveParams) -> int:
    """Smallest prime factor of the witness divisor, by trial division on the wheel."""
    g = w.g
    if not 1 < g <= b:
        raise ValueError(f"witness divisor {g} is not in (1, {b}]")
    for ell in _wheel(sp):
        if ell * ell > g:
            return g
        if g % ell == 0:
            return ell
    raise AssertionError("unreachable")


def find_divisor_leq_b(ctx: ModulusContext, sp: SieveParams, r: int) -> SearchOutcome:
    """Find a prime divisor of N that is at most ``b = 4^r rho Q``, or certify there is none."""
    N = ctx.N
    k = 1 << r
    rho = sp.rho
    b = search_bound(sp, r)
    if b >= N:
        raise ValueError(f"search bound {b} must be below N = {N}")
    if gcd(N, sp.Q) != 1:
        raise ValueError("N must be coprime to Q; strip small primes first")
    try:
        H = build_H(sp, ctx)
        gh = grand_hypothesis(r, k, rho, ctx, bound=b)
        tbl = fast_eval_Hk(H, r, k, rho, gh)
    except DivisorFound as exc:
        return Found(prime_from_witness(exc.witness, b, sp), exc.witness)

    outcome = check_invertible_batch(tbl.values[:k * rho], ctx)
    if isinstance(outcome, AllInvertible):
        return NoDivisorUpTo(b)
    w = drill_down_witness(outcome.index, k, k, rho, sp, ctx)
    return Found(prime_from_witness(w, b, sp), w)
