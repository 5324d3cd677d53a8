"""Dense polynomials over Z/NZ.

Multiplication packs coefficients into one big integer (Kronecker
substitution) and lets GMP do the work.  On top of that sit product trees,
remainder-tree multipoint evaluation and :func:`shift_eval`, which moves a
table of values ``F(0), F(b), ..., F(db)`` to ``F(a), F(a+b), ..., F(a+db)``
without ever seeing the coefficients of F.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import gmpy2

from .ring import (
    DivisorFound,
    ModulusContext,
    NoninvertibleAt,
    Provenance,
    batch_invert,
    check_invertible_batch,
    witness_for,
)

WORD_BITS = 64


def _trim(coeffs: list[int]) -> list[int]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


@dataclass(frozen=True)
class PolyModN:
    """Polynomial with coefficients in [0, N), lowest degree first.

    The zero polynomial has no coefficients and degree ``-inf``.
    """

    coeffs: tuple[int, ...]
    ctx: ModulusContext = field(compare=False, repr=False)

    @classmethod
    def from_ints(cls, coeffs: Sequence[int], ctx: ModulusContext) -> "PolyModN":
        N = ctx.N
        return cls(tuple(_trim([c % N for c in coeffs])), ctx)

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else -math.inf

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, x: int) -> int:
        return horner(self.coeffs, x, self.ctx.N)

    def __mul__(self, other: "PolyModN") -> "PolyModN":
        return poly_mul(self, other)

    def __sub__(self, other: "PolyModN") -> "PolyModN":
        _same_ring(self, other)
        N = self.ctx.N
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        out = [((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % N for i in range(n)]
        return PolyModN(tuple(_trim(out)), self.ctx)


def _same_ring(F: PolyModN, G: PolyModN) -> None:
    if F.ctx.N != G.ctx.N:
        raise ValueError("polynomials live over different moduli")


def horner(coeffs: Sequence[int], x: int, N: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % N
    return acc


def schoolbook_mul(a: Sequence[int], b: Sequence[int], N: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return [c % N for c in out]


def kronecker_slot_bytes(N: int, len_a: int, len_b: int) -> int:
    """Slot width in bytes: room for a sum of min(len) products < N^2, word aligned."""
    guard = math.ceil(math.log2(min(len_a, len_b))) if min(len_a, len_b) > 1 else 0
    bits = 2 * (N - 1).bit_length() + guard
    words = -(-bits // WORD_BITS)
    return words * WORD_BITS // 8


def _pack(coeffs: Sequence[int], width: int) -> "gmpy2.mpz":
    buf = b"".join(c.to_bytes(width, "little") for c in coeffs)
    return gmpy2.mpz(int.from_bytes(buf, "little"))


def kronecker_mul(a: Sequence[int], b: Sequence[int], N: int) -> list[int]:
    if not a or not b:
        return []
    width = kronecker_slot_bytes(N, len(a), len(b))
    n_out = len(a) + len(b) - 1
    prod = _pack(a, width) * _pack(b, width)
    raw = memoryview(int(prod).to_bytes(n_out * width, "little"))
    from_bytes = int.from_bytes
    return [from_bytes(raw[i:i + width], "little") % N for i in range(0, n_out * width, width)]


def mul_coeffs(a: Sequence[int], b: Sequence[int], ctx: ModulusContext) -> list[int]:
    """Raw coefficient product, counted as one polynomial multiplication."""
    if not a or not b:
        return []
    ctx.counters.add(poly_mults=1)
    # largest operand degree, not product degree
    ctx.counters.note_degree(max(len(a), len(b)) - 1)
    if min(len(a), len(b)) - 1 <= ctx.thresholds.schoolbook_degree:
        return schoolbook_mul(a, b, ctx.N)
    return kronecker_mul(a, b, ctx.N)


def poly_mul(F: PolyModN, G: PolyModN) -> PolyModN:
    _same_ring(F, G)
    return PolyModN(tuple(_trim(mul_coeffs(F.coeffs, G.coeffs, F.ctx))), F.ctx)


@dataclass(frozen=True)
class ProductTree:
    levels: list[list[PolyModN]]

    @property
    def root(self) -> PolyModN:
        return self.levels[-1][0]


def product_tree(leaves: Sequence[PolyModN]) -> ProductTree:
    if not leaves:
        raise ValueError("product tree needs at least one leaf")
    levels = [list(leaves)]
    while len(levels[-1]) > 1:
        prev = levels[-1]
        nxt = [poly_mul(prev[i], prev[i + 1]) for i in range(0, len(prev) - 1, 2)]
        if len(prev) % 2:
            nxt.append(prev[-1])
        levels.append(nxt)
    return ProductTree(levels)


def _series_inverse(h: Sequence[int], prec: int, ctx: ModulusContext) -> list[int]:
    """Inverse of a power series with constant term 1, mod x^prec (Newton)."""
    N = ctx.N
    g = [1]
    n = 1
    while n < prec:
        n = min(2 * n, prec)
        hg = mul_coeffs(h[:n], g, ctx)[:n]
        # g <- g * (2 - h g)
        t = [(-c) % N for c in hg]
        t += [0] * (n - len(t))
        t[0] = (t[0] + 2) % N
        g = mul_coeffs(g, t, ctx)[:n]
    return g


def poly_rem_monic(F: Sequence[int], G: Sequence[int], ctx: ModulusContext) -> list[int]:
    """Remainder of F modulo a monic G, both as coefficient lists."""
    N = ctx.N
    n, m = len(F) - 1, len(G) - 1
    if n < m:
        return list(F)
    if m == 0:
        return []
    qlen = n - m + 1
    if qlen <= ctx.thresholds.schoolbook_degree or m <= ctx.thresholds.schoolbook_degree:
        rem = list(F)
        for i in range(n, m - 1, -1):
            q = rem[i]
            if q:
                base = i - m
                for j in range(m):
                    rem[base + j] = (rem[base + j] - q * G[j]) % N
            rem[i] = 0
        return _trim(rem[:m])
    rev_f = list(reversed(F))[:qlen]
    rev_g_inv = _series_inverse(list(reversed(G)), qlen, ctx)
    q_rev = mul_coeffs(rev_f, rev_g_inv, ctx)[:qlen]
    q_rev += [0] * (qlen - len(q_rev))
    q = list(reversed(q_rev))
    qg = mul_coeffs(q, G, ctx)
    return _trim([(F[i] - qg[i]) % N for i in range(m)])


def multipoint_eval(F: PolyModN, points: Sequence[int]) -> list[int]:
    """Values of F at every point, via a remainder tree over (x - p_i)."""
    ctx = F.ctx
    N = ctx.N
    pts = [p % N for p in points]
    if not pts:
        return []
    if F.is_zero():
        return [0] * len(pts)
    if len(pts) < ctx.thresholds.multipoint_min_points or len(F.coeffs) == 1:
        ctx.counters.add(ring_mults=len(pts) * (len(F.coeffs) - 1))
        return [horner(F.coeffs, p, N) for p in pts]
    tree = product_tree([PolyModN(((-p) % N, 1), ctx) for p in pts])
    rems = [poly_rem_monic(list(F.coeffs), tree.root.coeffs, ctx)]
    for level in reversed(tree.levels[:-1]):
        nxt = []
        for i, node in enumerate(level):
            nxt.append(poly_rem_monic(rems[i // 2], node.coeffs, ctx))
        rems = nxt
    return [r[0] if r else 0 for r in rems]


class HypothesisProduct:
    """The elements ``b, 2..d, a-db, ..., a+db`` and their product mod N.

    They are all units exactly when the product is a unit.  The factor list
    is regenerated on demand instead of stored: at the top doubling level it
    has millions of entries.
    """

    __slots__ = ("alpha", "beta", "d", "ctx", "product", "product_inv")

    def __init__(self, alpha: int, beta: int, d: int, ctx: ModulusContext,
                 product: int, product_inv: Optional[int] = None):
        self.alpha = alpha
        self.beta = beta
        self.d = d
        self.ctx = ctx
        self.product = product
        self.product_inv = product_inv

    @property
    def factors(self) -> list[int]:
        return hyp_factors(self.alpha, self.beta, self.d, self.ctx.N)

    def __repr__(self) -> str:
        return (f"HypothesisProduct(alpha={self.alpha}, beta={self.beta}, d={self.d}, "
                f"product={self.product}, invertible={self.product_inv is not None})")


def hyp_factors(alpha: int, beta: int, d: int, N: int) -> list[int]:
    out = [beta % N]
    out.extend(i % N for i in range(2, d + 1))
    out.extend((alpha + j * beta) % N for j in range(-d, d + 1))
    return out


def hyp_product(alpha: int, beta: int, d: int, ctx: ModulusContext,
                invert: bool = True) -> HypothesisProduct:
    """Build the hypothesis product for ``(alpha, beta, d)``.

    With ``invert`` set, one inversion is attempted.  If it fails the
    noninvertible element is located and reported by raising
    :class:`DivisorFound`; a factor that is 0 mod N raises ZeroDivisionError.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    N = ctx.N
    factors = hyp_factors(alpha, beta, d, N)
    acc = 1
    for f in factors:
        acc = acc * f % N
    ctx.counters.add(ring_mults=len(factors))
    hp = HypothesisProduct(alpha, beta, d, ctx, acc)
    if not invert:
        return hp
    ctx.counters.add(gcd_calls=1)
    w = witness_for(acc, N, Provenance.HYPOTHESIS_CHECK) if acc else None
    if w is None and math.gcd(acc, N) == 1:
        hp.product_inv = pow(acc, -1, N)
        return hp
    outcome = check_invertible_batch(factors, ctx, Provenance.HYPOTHESIS_CHECK)
    if isinstance(outcome, NoninvertibleAt) and outcome.witness is not None:
        raise DivisorFound(outcome.witness)
    if w is not None:
        raise DivisorFound(w)
    raise ZeroDivisionError(f"hypothesis factor vanishes mod {N}")


def shift_eval(vals: Sequence[int], hp: HypothesisProduct) -> list[int]:
    """Given F(0), F(b), ..., F(db) return F(a), F(a+b), ..., F(a+db).

    F is any polynomial of degree <= d; only its values are used.  Lagrange
    interpolation on the nodes ``ib`` turns the job into one convolution:
    with ``c_i = F(ib) / (b^d i! (d-i)! (-1)^(d-i))`` and
    ``e_m = 1 / (a + (m-d)b)`` we get ``F(a+kb) = D_k * sum_i c_i e_(k+d-i)``
    where ``D_k = prod_{j=0..d} (a + (k-j)b)``.
    """
    d = hp.d
    if hp.product_inv is None:
        raise ValueError("hypothesis product has no known inverse")
    if len(vals) != d + 1:
        raise ValueError(f"expected {d + 1} values, got {len(vals)}")
    ctx = hp.ctx
    N = ctx.N
    ctx.counters.add(shift_eval_calls=1)

    factors = hp.factors
    inv = batch_invert(factors, hp.product_inv, ctx)
    # inv layout: [1/b, 1/2 .. 1/d, 1/(a-db) .. 1/(a+db)]
    e = inv[d:]

    inv_fact = [1] * (d + 1)
    for i in range(2, d + 1):
        inv_fact[i] = inv_fact[i - 1] * inv[i - 1] % N
    scale = pow(inv[0], d, N)
    c = [0] * (d + 1)
    for i in range(d + 1):
        v = vals[i] * inv_fact[i] % N * inv_fact[d - i] % N * scale % N
        c[i] = (N - v) % N if (d - i) & 1 else v

    conv = mul_coeffs(c, e, ctx)
    conv += [0] * (2 * d + 1 - len(conv))

    # D_0 = prod_{j=0..d} (a - jb): factor entries for j = -d..0
    D = 1
    for f in factors[d:2 * d + 1]:
        D = D * f % N
    out = [0] * (d + 1)
    out[0] = D * conv[d] % N
    for k in range(1, d + 1):
        D = D * factors[2 * d + k] % N * e[k - 1] % N
        out[k] = D * conv[d + k] % N
    ctx.counters.add(ring_mults=(d - 1) + 5 * (d + 1) + (d + 1) + 3 * d + 1)
    return out
