"""Top-level factoring drivers and the trial-division oracle."""
from __future__ import annotations

import enum
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from math import gcd, isqrt
from typing import Optional

from .giantstep import Found, find_divisor_leq_b, search_bound
from .poly import PolyModN, multipoint_eval, product_tree
from .ring import Counters, Thresholds, make_context
from .sieve import MAX_B, SieveParams, primes_below, sieve_params


class Algorithm(enum.Enum):
    SIEVED = "sieved"
    DEGENERATE_BGS = "bgs"
    STRASSEN = "strassen"
    TRIAL = "trial"


class Proof(enum.Enum):
    COMPLETE = "Complete"
    TRIAL_VERIFIED = "TrialVerified"


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]
    cofactor_proof: Proof = field(default=Proof.COMPLETE, compare=False)
    # unfactored part left by a bounded trial division; 1 when complete
    cofactor: int = 1

    def __str__(self) -> str:
        if self.n == 1:
            return "1 = 1"
        parts = [str(p) if e == 1 else f"{p}^{e}" for p, e in self.factors]
        if self.cofactor != 1:
            parts.append(f"({self.cofactor})")
        return f"{self.n} = " + " * ".join(parts)


@dataclass(frozen=True)
class DriverConfig:
    algorithm: Algorithm = Algorithm.SIEVED
    B_override: Optional[int] = None
    small_n_cutoff: int = 1 << 20
    thresholds: Thresholds = field(default_factory=Thresholds)
    B_cap: int = MAX_B
    stats_enabled: bool = True

    def __post_init__(self) -> None:
        if self.B_override is not None and not 2 < self.B_override <= self.B_cap:
            raise ValueError(f"B must lie in (2, {self.B_cap}], got {self.B_override}")


@dataclass
class RunStats:
    ring_mults: int = 0
    poly_mults: int = 0
    max_poly_degree: int = 0
    gcd_calls: int = 0
    shift_eval_calls: int = 0
    levels_r: int = 0
    b_final: int = 0
    wall_time: float = 0.0

    def update_from(self, counters: Counters) -> None:
        for name, value in counters.snapshot().items():
            setattr(self, name, value)

    def as_json(self) -> dict:
        return {
            "ring_mults": self.ring_mults,
            "poly_mults": self.poly_mults,
            "max_poly_degree": self.max_poly_degree,
            "gcd_calls": self.gcd_calls,
            "shift_eval_calls": self.shift_eval_calls,
            "levels_r": self.levels_r,
            "b_final": str(self.b_final),
        }


# ---------------------------------------------------------------------------
# trial division oracle

_PRIME_CACHE: list[int] = []
_PRIME_CACHE_LIMIT = 0
_PRIME_CACHE_MAX = 1 << 25


def _small_primes(limit: int) -> list[int]:
    """Primes <= limit from a growing cache (capped; callers fall back to a wheel)."""
    global _PRIME_CACHE, _PRIME_CACHE_LIMIT
    limit = min(limit, _PRIME_CACHE_MAX)
    if limit > _PRIME_CACHE_LIMIT:
        new_limit = min(max(limit, 2 * _PRIME_CACHE_LIMIT, 1 << 16), _PRIME_CACHE_MAX)
        _PRIME_CACHE = primes_below(new_limit + 1)
        _PRIME_CACHE_LIMIT = new_limit
    return _PRIME_CACHE


def _odd_candidates(start: int):
    c = max(start, 3) | 1
    while True:
        yield c
        c += 2


def trial_division(n: int, bound: Optional[int] = None, start: int = 2) -> tuple[list[tuple[int, int]], int]:
    """Divide out every prime in ``[start, bound]`` (bound defaults to sqrt of what remains).

    Returns the (prime, exponent) pairs found and the remaining cofactor.
    Without a bound the cofactor is 1 or a prime.
    """
    found: list[tuple[int, int]] = []
    limit = isqrt(n) if bound is None else bound

    def take(p: int) -> None:
        nonlocal n
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        if e:
            found.append((p, e))

    primes = _small_primes(limit)
    for p in primes:
        if p < start:
            continue
        if p > limit or (bound is None and p * p > n):
            break
        if n % p == 0:
            take(p)
    else:
        if limit > _PRIME_CACHE_LIMIT:
            for c in _odd_candidates(max(start, _PRIME_CACHE_LIMIT + 1)):
                if c > limit or (bound is None and c * c > n):
                    break
                if n % c == 0:
                    take(c)
    if bound is None and n > 1:
        found.append((n, 1))
        n = 1
    return found, n


def _merge(n: int, pieces: list[tuple[int, int]], proof: Proof = Proof.COMPLETE,
           cofactor: int = 1) -> Factorization:
    acc: Counter[int] = Counter()
    for p, e in pieces:
        acc[p] += e
    return Factorization(n, tuple(sorted(acc.items())), proof, cofactor)


def factor_trial(N: int, bound: Optional[int] = None) -> Factorization:
    if N < 1:
        raise ValueError("N must be positive")
    found, rest = trial_division(N, bound)
    return _merge(N, found, Proof.TRIAL_VERIFIED, rest)


def is_prime(n: int) -> bool:
    """Deterministic primality by trial division (fine for desk-scale primes)."""
    if n < 2:
        return False
    for p in _small_primes(isqrt(n)):
        if p * p > n:
            return True
        if n % p == 0:
            return n == p
    for c in _odd_candidates(_PRIME_CACHE_LIMIT + 1):
        if c * c > n:
            return True
        if n % c == 0:
            return False
    return True


def verify_factorization(f: Factorization) -> bool:
    if f.cofactor != 1:
        return False
    prod = 1
    last = 1
    for p, e in f.factors:
        if e < 1 or p <= last or not is_prime(p):
            return False
        prod *= p ** e
        last = p
    return prod == f.n


# ---------------------------------------------------------------------------
# sieved driver

def choose_B(N: int, cfg: Optional[DriverConfig] = None) -> int:
    if cfg is not None and cfg.B_override is not None:
        return cfg.B_override
    cap = cfg.B_cap if cfg is not None else MAX_B
    return min(max(3, math.floor(math.log(N) / 11)), cap)


def strip_small(N: int, B: int) -> tuple[list[tuple[int, int]], int]:
    """Divide out every prime below B to full multiplicity."""
    found = []
    for p in primes_below(B):
        e = 0
        while N % p == 0:
            N //= p
            e += 1
        if e:
            found.append((p, e))
    return found, N


def predicted_r0(N: int, sp: SieveParams) -> int:
    """Smallest r >= 0 with 4^r rho Q >= sqrt(N), i.e. ceil(log_4(sqrt(N) / (rho Q)))."""
    base = sp.rho * sp.Q
    r = 0
    while (4 ** r * base) ** 2 < N:
        r += 1
    return r


def _finish_by_trial(n: int, start: int) -> list[tuple[int, int]]:
    found, rest = trial_division(n, start=start)
    assert rest == 1
    return found


def factor_sieved(N: int, cfg: Optional[DriverConfig] = None) -> tuple[Factorization, RunStats]:
    """Full factorization with the sieved generalized-factorial search.

    For r = 0, 1, 2, ... search for a prime divisor up to ``b = 4^r rho Q``.
    A hit is divided out and the same r retried on the cofactor; a miss
    certifies there is no prime factor up to b and moves to r + 1.  Once the
    certified bound squared reaches the cofactor, the cofactor is prime.
    """
    cfg = cfg or DriverConfig()
    t0 = time.perf_counter()
    counters = Counters()
    stats = RunStats()
    if N < 1:
        raise ValueError("N must be positive")
    if N == 1:
        return Factorization(1, ()), stats

    if cfg.algorithm is Algorithm.DEGENERATE_BGS:
        sp = sieve_params(None, degenerate=True)
        pieces: list[tuple[int, int]] = []
        n = N
        certified = 1
    else:
        B = choose_B(N, cfg)
        sp = sieve_params(B, cap=cfg.B_cap)
        pieces, n = strip_small(N, B)
        certified = B - 1
    proof = Proof.COMPLETE

    r = 0
    while n > 1:
        if certified * certified >= n:
            pieces.append((n, 1))
            break
        if n < cfg.small_n_cutoff or search_bound(sp, r) >= n:
            pieces.extend(_finish_by_trial(n, certified + 1))
            proof = Proof.TRIAL_VERIFIED
            break
        ctx = make_context(n, counters, cfg.thresholds)
        outcome = find_divisor_leq_b(ctx, sp, r)
        stats.levels_r = r
        stats.b_final = search_bound(sp, r)
        if isinstance(outcome, Found):
            ell = outcome.ell
            e = 0
            while n % ell == 0:
                n //= ell
                e += 1
            pieces.append((ell, e))
        else:
            certified = max(certified, outcome.b)
            r += 1

    stats.update_from(counters)
    stats.wall_time = time.perf_counter() - t0
    return _merge(N, pieces, proof), stats


# ---------------------------------------------------------------------------
# Strassen baseline

def _strassen_split(n: int, counters: Counters, thresholds: Thresholds) -> Optional[int]:
    """Smallest prime factor of n via f(x) = (x+1)...(x+L) on 0, L, 2L, ..., or None if n is prime."""
    ctx = make_context(n, counters, thresholds)
    K = isqrt(n)
    L = isqrt(K)
    if L * L < K:
        L += 1
    f = product_tree([PolyModN.from_ints((i, 1), ctx) for i in range(1, L + 1)]).root
    n_full = K // L
    blocks = multipoint_eval(f, [j * L for j in range(n_full)])
    starts = [j * L for j in range(n_full)]
    # partial block covering n_full*L + 1 .. K
    tail_start = n_full * L
    if tail_start < K:
        acc = 1
        for x in range(tail_start + 1, K + 1):
            acc = acc * x % n
        counters.add(ring_mults=K - tail_start)
        blocks.append(acc)
        starts.append(tail_start)
    sizes = [L] * n_full + ([K - tail_start] if tail_start < K else [])
    for value, start, size in zip(blocks, starts, sizes):
        counters.add(gcd_calls=1)
        if gcd(value, n) == 1:
            continue
        for x in range(start + 1, start + size + 1):
            counters.add(gcd_calls=1)
            g = gcd(x, n)
            if g > 1:
                return g
    return None


def factor_strassen(N: int, cfg: Optional[DriverConfig] = None) -> tuple[Factorization, RunStats]:
    cfg = cfg or DriverConfig(algorithm=Algorithm.STRASSEN)
    t0 = time.perf_counter()
    counters = Counters()
    stats = RunStats()
    if N < 1:
        raise ValueError("N must be positive")
    pieces: list[tuple[int, int]] = []
    proof = Proof.COMPLETE
    stack = [N] if N > 1 else []
    while stack:
        n = stack.pop()
        if n < cfg.small_n_cutoff or n < 16:
            pieces.extend(_finish_by_trial(n, 2))
            proof = Proof.TRIAL_VERIFIED
            continue
        stats.b_final = max(stats.b_final, isqrt(n))
        g = _strassen_split(n, counters, cfg.thresholds)
        if g is None:
            pieces.append((n, 1))
        else:
            # g is the smallest prime factor: every smaller integer was coprime to n
            e = 0
            while n % g == 0:
                n //= g
                e += 1
            pieces.append((g, e))
            if n > 1:
                stack.append(n)
    stats.update_from(counters)
    stats.wall_time = time.perf_counter() - t0
    return _merge(N, pieces, proof), stats


def factor(N: int, cfg: Optional[DriverConfig] = None) -> tuple[Factorization, RunStats]:
    """Dispatch on ``cfg.algorithm``."""
    cfg = cfg or DriverConfig()
    if cfg.algorithm in (Algorithm.SIEVED, Algorithm.DEGENERATE_BGS):
        return factor_sieved(N, cfg)
    if cfg.algorithm is Algorithm.STRASSEN:
        return factor_strassen(N, cfg)
    t0 = time.perf_counter()
    f = factor_trial(N)
    return f, RunStats(wall_time=time.perf_counter() - t0)
