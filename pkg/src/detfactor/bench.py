"""Reproducible semiprimes and side-by-side runs of the algorithm variants."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Optional, Sequence

from .factorize import Algorithm, DriverConfig, RunStats, factor_sieved, is_prime, verify_factorization
from .sieve import mertens_ratio, sieve_params

MAX_BENCH_BITS = 96


def next_prime(n: int) -> int:
    n = max(n, 2)
    if n > 2 and n % 2 == 0:
        n += 1
    while not is_prime(n):
        n += 1 if n == 2 else 2
    return n


def random_prime(bits: int, rng: random.Random) -> int:
    """Prime with exactly ``bits`` bits whose top two bits are set, found by
    searching upward from a random odd start."""
    if bits < 3:
        raise ValueError("need at least 3 bits")
    while True:
        lo = (1 << (bits - 1)) | (1 << (bits - 2))
        start = rng.randrange(lo, 1 << bits) | 1
        p = next_prime(start)
        if p.bit_length() == bits:
            return p


def semiprime(bits: int, seed: int) -> tuple[int, int, int]:
    """Deterministic ``(n, p, q)`` with ``p < q`` prime and ``n = p*q`` of exactly ``bits`` bits."""
    rng = random.Random(seed)
    half = bits // 2
    while True:
        p = random_prime(half, rng)
        q = random_prime(bits - half, rng)
        if p != q and (p * q).bit_length() == bits:
            return p * q, min(p, q), max(p, q)


@dataclass
class BenchRow:
    n: int
    variant: str
    B: int
    stats: RunStats
    ok: bool
    speedup_time: float = 1.0
    speedup_mults: float = 1.0
    predicted: float = 1.0


def run_variant(n: int, B: Optional[int]) -> tuple[RunStats, bool]:
    if B is None:
        cfg = DriverConfig(algorithm=Algorithm.DEGENERATE_BGS)
    else:
        cfg = DriverConfig(algorithm=Algorithm.SIEVED, B_override=B)
    f, stats = factor_sieved(n, cfg)
    return stats, verify_factorization(f)


def compare(n: int, B_list: Sequence[int]) -> list[BenchRow]:
    """Run the Q = 1 baseline then each sieved B, sequentially for fair timing."""
    base, ok = run_variant(n, None)
    rows = [BenchRow(n, "bgs", 0, base, ok)]
    for B in B_list:
        stats, ok = run_variant(n, B)
        ratio = mertens_ratio(sieve_params(B))
        rows.append(BenchRow(
            n, f"sieved B={B}", B, stats, ok,
            speedup_time=base.wall_time / stats.wall_time if stats.wall_time else math.inf,
            speedup_mults=base.ring_mults / stats.ring_mults if stats.ring_mults else math.inf,
            predicted=math.sqrt(1 / ratio),
        ))
    return rows
