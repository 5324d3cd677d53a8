"""Deterministic integer factorization with sieved generalized factorials."""
from .factorize import (
    Algorithm,
    DriverConfig,
    Factorization,
    RunStats,
    choose_B,
    factor,
    factor_sieved,
    factor_strassen,
    factor_trial,
    predicted_r0,
    strip_small,
    verify_factorization,
)
from .giantstep import find_divisor_leq_b
from .ring import make_context
from .sieve import mertens_ratio, sieve_params

__all__ = [
    "Algorithm", "DriverConfig", "Factorization", "RunStats", "choose_B", "factor",
    "factor_sieved", "factor_strassen", "factor_trial", "predicted_r0", "strip_small",
    "verify_factorization", "find_divisor_leq_b", "make_context", "mertens_ratio", "sieve_params",
]
