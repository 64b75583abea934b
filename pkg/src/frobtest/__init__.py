"""Quadratic Frobenius probable prime testing with multiplication metering."""

from .arith import (TestSubject, decompose, gcd, isqrt, jacobi, modinv,
                    sieve_primes, trial_divide)
from .meter import Meter, MeterReport, metered_run
from .prp import (Reason, Verdict, is_probable_prime, make_rng, qft,
                  qft_core_fast, qft_core_naive, rqft, select_params, sprp)
from .ring import AbcTriple, QuadRing, RingElement

__all__ = [
    "AbcTriple", "Meter", "MeterReport", "QuadRing", "Reason", "RingElement",
    "TestSubject", "Verdict", "decompose", "gcd", "is_probable_prime", "isqrt",
    "jacobi", "make_rng", "metered_run", "modinv", "qft", "qft_core_fast",
    "qft_core_naive", "rqft", "select_params", "sieve_primes", "sprp",
    "trial_divide",
]
