"""Invariant suites runnable without pytest (``detfactor selftest``)."""
from __future__ import annotations

import random
import time
from math import gcd
from typing import Callable

from .factorize import DriverConfig, factor_sieved, factor_trial
from .giantstep import fast_eval_Hk, grand_hypothesis, search_bound
from .poly import hyp_product, horner, shift_eval
from .ring import DivisorFound, make_context
from .sieve import build_H, sieve_params

PRIME_NEAR_2_61 = (1 << 61) - 1


def _unit_modulus(rng: random.Random, sp, r: int):
    """Random N coprime to Q for which the whole doubling hypothesis holds."""
    while True:
        N = rng.randrange(10 ** 12, 10 ** 15)
        if gcd(N, sp.Q) != 1:
            continue
        ctx = make_context(N)
        try:
            return N, ctx, grand_hypothesis(r, 1 << r, sp.rho, ctx)
        except DivisorFound:
            continue


def check_eq_product(quick: bool) -> None:
    """prod_i H_k(ik) equals the product of all j <= b coprime to Q, mod N."""
    rng = random.Random(11)
    trials = 5 if quick else 50
    for B in (3, 5, 7):
        sp = sieve_params(B)
        for r in range(4 if quick else 5):
            for _ in range(trials):
                k = 1 << r
                N, ctx, gh = _unit_modulus(rng, sp, r)
                tbl = fast_eval_Hk(build_H(sp, ctx), r, k, sp.rho, gh)
                lhs = 1
                for v in tbl.values[:k * sp.rho]:
                    lhs = lhs * v % N
                rhs = 1
                for j in range(1, search_bound(sp, r) + 1):
                    if gcd(j, sp.Q) == 1:
                        rhs = rhs * j % N
                if lhs != rhs:
                    raise AssertionError(f"product identity fails for B={B} r={r} N={N}")


def check_shift_eval(quick: bool) -> None:
    rng = random.Random(12)
    N = PRIME_NEAR_2_61
    ctx = make_context(N)
    for _ in range(100 if quick else 1000):
        d = rng.randint(1, 64)
        beta = rng.randrange(1, 1 << 20)
        alpha = rng.randrange(-(1 << 30), 1 << 30)
        F = [rng.randrange(N) for _ in range(rng.randint(1, d + 1))]
        hp = hyp_product(alpha, beta, d, ctx)
        got = shift_eval([horner(F, i * beta, N) for i in range(d + 1)], hp)
        want = [horner(F, alpha + i * beta, N) for i in range(d + 1)]
        if got != want:
            raise AssertionError(f"shift_eval mismatch at alpha={alpha} beta={beta} d={d}")


def check_oracle_sweep(quick: bool) -> None:
    rng = random.Random(13)
    low = DriverConfig(small_n_cutoff=2)
    for N in range(2, 2000 if quick else 20000):
        if factor_sieved(N, low)[0] != factor_trial(N):
            raise AssertionError(f"sieved and trial disagree on {N}")
    for _ in range(20 if quick else 200):
        N = rng.randrange(10 ** 6, 10 ** 12)
        if factor_sieved(N)[0] != factor_trial(N):
            raise AssertionError(f"sieved and trial disagree on {N}")


SUITES: dict[str, Callable[[bool], None]] = {
    "eq_product": check_eq_product,
    "shift_eval_oracle": check_shift_eval,
    "oracle_sweep": check_oracle_sweep,
}


def run(quick: bool = False, echo: Callable[[str], None] = print) -> bool:
    ok = True
    for name, suite in SUITES.items():
        t0 = time.perf_counter()
        try:
            suite(quick)
        except AssertionError as exc:
            ok = False
            echo(f"FAIL {name}: {exc}")
        except Exception as exc:  # a broken engine may fail anywhere
            ok = False
            echo(f"FAIL {name}: {type(exc).__name__}: {exc}")
        else:
            echo(f"PASS {name} ({time.perf_counter() - t0:.1f}s)")
    return ok
