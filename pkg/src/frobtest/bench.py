"""Selfridge measurements for SPRP and the naive/fast QFT cores."""

from __future__ import annotations

import random
from typing import Iterator, Optional

from .arith import decompose, jacobi
from .meter import metered_run, qft_budget, sprp_budget
from .prp import is_prime_small, make_rng, qft_core_fast, qft_core_naive, sprp


def random_odd(bits: int, rng: random.Random) -> int:
    """Uniform odd integer with exactly ``bits`` bits."""
    if bits < 3:
        raise ValueError("need at least 3 bits")
    return rng.getrandbits(bits - 2) << 1 | 1 << (bits - 1) | 1


def random_prime(bits: int, rng: random.Random) -> int:
    while True:
        n = random_odd(bits, rng)
        if is_prime_small(n) if bits <= 80 else all(
                sprp(n, a).is_probable_prime for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29)):
            return n


def random_valid_params(n: int, rng: random.Random,
                        max_draws: int = 1000) -> Optional[tuple[int, int]]:
    """A pair in ``[1, n-1]^2`` meeting both Jacobi conditions (gcds not consulted)."""
    for _ in range(max_draws):
        b = rng.randrange(1, n)
        c = rng.randrange(1, n)
        if jacobi(b * b + 4 * c, n) == -1 and jacobi(-c, n) == 1:
            return b, c
    return None


def bench_row(n: int, rng: random.Random, naive: bool = True) -> dict:
    a = rng.randrange(2, n - 1)
    sv, sr = metered_run(lambda m: sprp(n, a, m), n)
    row = {"command": "bench", "bits": n.bit_length(), "n": n,
           "parity": n & 3, "sprp_base": a, "sprp_verdict": sv.outcome,
           "sprp_mults": sr.mults, "sprp_selfridges": sr.selfridges,
           "sprp_budget": sprp_budget(n)}
    params = random_valid_params(n, rng)
    row["params"] = list(params) if params else None
    row["qft_budget"] = qft_budget(n)
    cores = [("qft_fast", qft_core_fast)] + ([("qft_naive", qft_core_naive)] if naive else [])
    subject = decompose(n)
    for name, core in cores:
        if params is None:
            row[f"{name}_reason"] = row[f"{name}_mults"] = row[f"{name}_selfridges"] = None
            continue
        v, rep = metered_run(lambda m: core(subject, *params, m), n)
        row[f"{name}_reason"] = v.reason.value
        row[f"{name}_mults"] = rep.mults
        row[f"{name}_selfridges"] = rep.selfridges
    return row


def bench_rows(bits: int, samples: int, seed: int = 0, primes: bool = False,
               naive: bool = True) -> Iterator[dict]:
    rng = make_rng(seed)
    for _ in range(samples):
        n = random_prime(bits, rng) if primes else random_odd(bits, rng)
        yield bench_row(n, rng, naive)
