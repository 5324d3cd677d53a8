"""Small-prime machinery: primes below B, the primorial Q, phi(Q), the
coprime residue wheel and the sieved polynomial H."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt

from .poly import PolyModN
from .ring import DivisorFound, ModulusContext, Provenance, witness_for

MAX_B = 64


def primes_below(B: int) -> list[int]:
    """Sieve of Eratosthenes: all primes p < B, ascending."""
    if B <= 2:
        return []
    flags = bytearray([1]) * B
    flags[0:2] = b"\x00\x00"
    for p in range(2, isqrt(B - 1) + 1):
        if flags[p]:
            flags[p * p::p] = bytes(len(range(p * p, B, p)))
    return [i for i, f in enumerate(flags) if f]


@dataclass(frozen=True)
class SieveParams:
    B: int
    primes: tuple[int, ...]
    Q: int
    rho: int
    _residues: tuple[int, ...] | None = field(default=None, repr=False, compare=False)

    @property
    def residues(self) -> tuple[int, ...]:
        """Sorted j in [1, Q] with gcd(j, Q) = 1, from a per-candidate gcd scan.

        Computed on first use: for large B only Q and rho are cheap.
        """
        if self._residues is None:
            res = tuple(j for j in range(1, self.Q + 1) if gcd(j, self.Q) == 1)
            assert len(res) == self.rho
            object.__setattr__(self, "_residues", res)
        return self._residues

    @property
    def degenerate(self) -> bool:
        return self.Q == 1


DEGENERATE = SieveParams(B=2, primes=(), Q=1, rho=1, _residues=(1,))


def sieve_params(B: int | None, degenerate: bool = False, cap: int = MAX_B) -> SieveParams:
    """Wheel data for bound B.  ``degenerate=True`` gives Q = 1, H(x) = x + 1."""
    if degenerate:
        return DEGENERATE
    if B is None or B <= 2:
        raise ValueError(f"sieve bound must exceed 2 (got {B}); use degenerate mode for Q = 1")
    if B > cap:
        raise ValueError(f"sieve bound {B} exceeds the cap of {cap}; Q would be astronomically large")
    primes = primes_below(B)
    Q = 1
    rho = 1
    for p in primes:
        Q *= p
        rho *= p - 1
    return SieveParams(B, tuple(primes), Q, rho)


def build_H(sp: SieveParams, ctx: ModulusContext) -> PolyModN:
    """Coefficients of H(x) = prod over wheel residues j of (Qx + j), mod N.

    Built one linear factor at a time, O(rho^2) ring multiplications.
    """
    N = ctx.N
    w = witness_for(sp.Q, N, Provenance.HYPOTHESIS_CHECK)
    if w is not None:
        raise DivisorFound(w)
    if gcd(sp.Q, N) != 1:
        raise ValueError(f"N = {N} divides Q; strip small primes first")
    Q = sp.Q % N
    coeffs = [1]
    for j in sp.residues:
        # multiply by (Q x + j)
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] = (nxt[i] + c * j) % N
            nxt[i + 1] = c * Q % N
        coeffs = nxt
    ctx.counters.add(ring_mults=sp.rho * (sp.rho + 1))
    return PolyModN.from_ints(coeffs, ctx)


def mertens_ratio(sp: SieveParams) -> Fraction:
    """rho / Q as an exact fraction, i.e. prod (1 - 1/p) over the primes below B."""
    out = Fraction(1)
    for p in sp.primes:
        out *= Fraction(p - 1, p)
    return out
