"""Arithmetic in Z/NZ.

Inversion failure is not an error here: a residue that shares a factor with
N yields a :class:`DivisorWitness`, which is exactly what a factoring
algorithm is looking for.

Scalar values are wrapped in :class:`Residue`.  Vector routines (batch
inversion, the scalar product tree) work on plain lists of canonical ints in
``[0, N)`` because wrapping millions of values would dominate the runtime.
"""
from __future__ import annotations

import enum
import threading
from dataclasses import dataclass, field
from math import gcd
from typing import Iterable, Optional, Sequence, Union


class Counters:
    """Thread-safe instrumentation counters.

    These stand in for the cost model: ``ring_mults`` counts multiplications
    in Z/NZ, ``poly_mults`` counts polynomial products, ``gcd_calls`` counts
    gcd/inversion attempts.  Hot loops add in bulk rather than per operation.
    """

    FIELDS = ("ring_mults", "poly_mults", "max_poly_degree", "gcd_calls", "shift_eval_calls")

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self.reset()

    def reset(self) -> None:
        with self._lock:
            for name in self.FIELDS:
                setattr(self, name, 0)

    def add(self, **amounts: int) -> None:
        with self._lock:
            for name, amount in amounts.items():
                if amount < 0:
                    raise ValueError("counters are monotone")
                setattr(self, name, getattr(self, name) + amount)

    def note_degree(self, degree: int) -> None:
        with self._lock:
            if degree > self.max_poly_degree:
                self.max_poly_degree = degree

    def snapshot(self) -> dict[str, int]:
        with self._lock:
            return {name: getattr(self, name) for name in self.FIELDS}

    def __repr__(self) -> str:
        return f"Counters({self.snapshot()})"


@dataclass(frozen=True)
class Thresholds:
    schoolbook_degree: int = 16
    multipoint_min_points: int = 8
    drill_tree_size: int = 4096


@dataclass(frozen=True)
class ModulusContext:
    """The ring Z/NZ.  ``bitlen`` is ceil(log2 N)."""

    N: int
    bitlen: int
    counters: Counters = field(default_factory=Counters, compare=False, repr=False)
    thresholds: Thresholds = field(default_factory=Thresholds, compare=False, repr=False)

    def residue(self, z: int) -> "Residue":
        return reduce_signed(z, self)


def make_context(N: int, counters: Optional[Counters] = None,
                 thresholds: Optional[Thresholds] = None) -> ModulusContext:
    if N < 2:
        raise ValueError(f"modulus must be >= 2, got {N}")
    return ModulusContext(N, (N - 1).bit_length(), counters or Counters(), thresholds or Thresholds())


@dataclass(frozen=True)
class Residue:
    value: int
    ctx: ModulusContext = field(compare=False, repr=False)

    def __post_init__(self) -> None:
        if not 0 <= self.value < self.ctx.N:
            raise ValueError(f"{self.value} is not reduced mod {self.ctx.N}")

    def __int__(self) -> int:
        return self.value

    __index__ = __int__

    def __add__(self, other: "Residue") -> "Residue":
        return ring_arith(self, other, "add")

    def __sub__(self, other: "Residue") -> "Residue":
        return ring_arith(self, other, "sub")

    def __mul__(self, other: "Residue") -> "Residue":
        return ring_arith(self, other, "mul")

    def __neg__(self) -> "Residue":
        return ring_arith(self, self, "neg")


class Provenance(enum.Enum):
    HYPOTHESIS_CHECK = "HypothesisCheck"
    PRODUCT_SCAN = "ProductScan"
    DRILL_DOWN = "DrillDown"
    TRIAL_DIVISION = "TrialDivision"


@dataclass(frozen=True)
class DivisorWitness:
    """A nontrivial divisor ``g`` of N together with the value that exposed it."""

    g: int
    source_x: int
    provenance: Provenance


@dataclass(frozen=True)
class Inverse:
    value: Residue


@dataclass(frozen=True)
class Divisor:
    witness: DivisorWitness


@dataclass(frozen=True)
class Zero:
    pass


InvertOutcome = Union[Inverse, Divisor, Zero]


class DivisorFound(Exception):
    """Raised deep inside the machinery when a noninvertible element turns up."""

    def __init__(self, witness: DivisorWitness):
        super().__init__(f"found divisor {witness.g} via {witness.provenance.value}")
        self.witness = witness


class CorruptInputError(ValueError):
    pass


def reduce_signed(z: int, ctx: ModulusContext) -> Residue:
    # Python's % already returns a value in [0, N) for negative z.
    return Residue(z % ctx.N, ctx)


def ring_arith(a: Residue, b: Residue, op: str) -> Residue:
    if a.ctx is not b.ctx and a.ctx.N != b.ctx.N:
        raise ValueError("residues belong to different moduli")
    ctx = a.ctx
    N = ctx.N
    if op == "add":
        v = a.value + b.value
        if v >= N:
            v -= N
    elif op == "sub":
        v = a.value - b.value
        if v < 0:
            v += N
    elif op == "mul":
        v = a.value * b.value % N
        ctx.counters.add(ring_mults=1)
    elif op == "neg":
        v = (N - a.value) % N
    else:
        raise ValueError(f"unknown ring operation {op!r}")
    return Residue(v, ctx)


def witness_for(x: int, N: int, provenance: Provenance) -> Optional[DivisorWitness]:
    """Witness from ``gcd(x, N)`` if it is a proper divisor, else None."""
    g = gcd(x, N)
    if 1 < g < N:
        return DivisorWitness(g, x, provenance)
    return None


def invert_or_divisor(x: Residue) -> InvertOutcome:
    ctx = x.ctx
    ctx.counters.add(gcd_calls=1)
    if x.value == 0:
        return Zero()
    g = gcd(x.value, ctx.N)
    if g == 1:
        return Inverse(Residue(pow(x.value, -1, ctx.N), ctx))
    # 0 < value < N, so g < N here
    return Divisor(DivisorWitness(g, x.value, Provenance.PRODUCT_SCAN))


def batch_invert(rs: Sequence[int], prod_inv: int, ctx: ModulusContext) -> list[int]:
    """Invert every element of ``rs`` given the inverse of their product.

    Prefix products forward, then peel inverses off backwards: 3(d - 1)
    ring multiplications and no gcd.  One output is spot-checked so that an
    inconsistent ``prod_inv`` is reported instead of silently propagated.
    """
    N = ctx.N
    vals = [int(r) for r in rs]
    d = len(vals)
    if d == 0:
        return []
    prefix = [0] * d
    acc = vals[0]
    prefix[0] = acc
    for i in range(1, d):
        acc = acc * vals[i] % N
        prefix[i] = acc
    out = [0] * d
    inv = int(prod_inv) % N
    for i in range(d - 1, 0, -1):
        out[i] = inv * prefix[i - 1] % N
        inv = inv * vals[i] % N
    out[0] = inv
    ctx.counters.add(ring_mults=3 * (d - 1))
    probe = d // 2
    if vals[probe] * out[probe] % N != 1 % N:
        raise CorruptInputError("prod_inv is not the inverse of the product")
    return out


@dataclass(frozen=True)
class AllInvertible:
    product: int
    product_inv: int


@dataclass(frozen=True)
class NoninvertibleAt:
    index: int
    witness: Optional[DivisorWitness]


def scalar_product_tree(vals: Sequence[int], N: int) -> list[list[int]]:
    levels = [list(vals)]
    while len(levels[-1]) > 1:
        prev = levels[-1]
        nxt = [prev[i] * prev[i + 1] % N for i in range(0, len(prev) - 1, 2)]
        if len(prev) % 2:
            nxt.append(prev[-1])
        levels.append(nxt)
    return levels


def check_invertible_batch(vals: Sequence[int], ctx: ModulusContext,
                           provenance: Provenance = Provenance.PRODUCT_SCAN):
    """Decide whether every value is a unit mod N.

    Returns :class:`AllInvertible` with the inverse of the product, or
    :class:`NoninvertibleAt` pointing at one noninvertible leaf.  One gcd at
    the root plus one per tree level on the way down.  The root is folded
    linearly first; the full tree is only materialized when a descent is
    needed.  The witness is None only when the located leaf is 0 mod N.
    """
    N = ctx.N
    root = 1 % N
    for v in vals:
        root = root * v % N
    ctx.counters.add(ring_mults=max(len(vals) - 1, 0), gcd_calls=1)
    if gcd(root, N) == 1:
        return AllInvertible(root, pow(root, -1, N))
    levels = scalar_product_tree([v % N for v in vals], N)
    ctx.counters.add(ring_mults=len(vals) - 1)
    idx = 0
    for depth in range(len(levels) - 2, -1, -1):
        row = levels[depth]
        left = 2 * idx
        ctx.counters.add(gcd_calls=1)
        # a unit left child means the fault is on the right
        if left + 1 < len(row) and gcd(row[left], N) == 1:
            idx = left + 1
        else:
            idx = left
    leaf = levels[0][idx]
    return NoninvertibleAt(idx, witness_for(leaf, N, provenance) if leaf else None)


def product_mod(vals: Iterable[int], N: int) -> int:
    acc = 1 % N
    for v in vals:
        acc = acc * v % N
    return acc
