import random

import pytest

from frobtest.arith import decompose, jacobi, sieve_primes
from frobtest.meter import Meter
from frobtest.prp import (COMPOSITE_BY_GCD, EXHAUSTED, PARAMS_FOUND, InvalidParameters,
                          ParamSearch, Reason, frobenius_ladder, is_prime_small,
                          is_probable_prime, make_rng, qft, qft_core_fast,
                          qft_core_naive, rqft, select_params, sprp, sprp_decompose)
from frobtest.ring import QuadRing
from conftest import FIXTURES
from oracles import isprime, polypow, qft_core_ref, sprp_ref


def valid_pairs(n):
    return [(b, c) for b in range(n) for c in range(n)
            if jacobi(b * b + 4 * c, n) == -1 and jacobi(-c, n) == 1]


def random_valid(n, rng):
    while True:
        b, c = rng.randrange(1, n), rng.randrange(1, n)
        if jacobi(b * b + 4 * c, n) == -1 and jacobi(-c, n) == 1:
            return b, c


# -- sprp ---------------------------------------------------------------------

def test_sprp_examples():
    assert sprp(13, 2).is_probable_prime
    assert pow(2, 11, 2047) == 1
    assert sprp(2047, 2).is_probable_prime
    assert sprp(2047, 3).is_composite


@pytest.mark.parametrize("n, a", [(13, 0), (13, 13), (9, -1), (2, 1), (10, 3)])
def test_sprp_rejects(n, a):
    with pytest.raises(ValueError):
        sprp(n, a)


def test_sprp_decomposition():
    d = sprp_decompose(2047)
    assert (d.r, d.s) == (1, 1023)


def test_sprp_matches_direct_reimplementation():
    rng = random.Random(12)
    for _ in range(10**4):
        n = rng.randrange(5, 2**40) | 1
        a = rng.randrange(1, n)
        assert sprp(n, a).is_probable_prime == sprp_ref(n, a)


def test_is_prime_small():
    assert [n for n in range(100) if is_prime_small(n)] == sieve_primes(100)
    assert not is_prime_small(3215031751)  # strong pseudoprime to 2, 3, 5, 7


# -- qft -----------------------------------------------------------------------

def test_qft_examples():
    assert jacobi(5, 13) == -1 and jacobi(-1, 13) == 1
    assert qft(13, 1, 1, 2).is_probable_prime
    v = qft(15, 1, 7, 50000)
    assert (v.outcome, v.reason, v.witness) == ("composite", Reason.TRIAL_DIVISION, 3)
    v = qft(25, 1, 1, 2)
    assert (v.reason, v.witness) == (Reason.PERFECT_SQUARE, 5)


def test_qft_proven_prime_short_circuit():
    for p in (3, 5, 7, 1009):
        assert qft(p, 1, 1).reason == Reason.PROVEN_PRIME_BY_TRIAL_DIVISION


def test_qft_revalidates_side_conditions():
    with pytest.raises(InvalidParameters):
        qft(13, 1, 3, 2)  # (1 + 12 / 13) = 0
    with pytest.raises(InvalidParameters):
        qft(91, 1, 1, 2, skip_steps12=True)
    with pytest.raises(ValueError):
        qft(14, 1, 1)


def test_qft_naive_path_flag():
    assert qft(13, 1, 1, 2, fast=False).decision == qft(13, 1, 1, 2).decision


def test_naive_core_fixture_91():
    sub = decompose(91)
    lines = (FIXTURES / "qft91.txt").read_text().splitlines()[1:]
    assert len(lines) == len(valid_pairs(91))
    for line in lines:
        b, c, reason = line.split()
        b, c = int(b), int(c)
        assert qft_core_naive(sub, b, c).reason.value == reason
        assert qft_core_fast(sub, b, c).reason.value == reason


def test_primes_pass_every_valid_pair():
    for p in sieve_primes(60)[1:]:
        sub = decompose(p)
        for b, c in valid_pairs(p):
            assert qft_core_naive(sub, b, c).is_probable_prime, (p, b, c)
            assert qft_core_fast(sub, b, c).is_probable_prime, (p, b, c)


@pytest.mark.parametrize("p", [10007, 10009, 2**61 - 1, 2**89 - 1, 1000000007, 998244353])
def test_fast_schedule_internal_values(p):
    rng = random.Random(p)
    b, c = random_valid(p, rng)
    sub = decompose(p)
    R = QuadRing(p, b, c)
    Tt, rungs = frobenius_ladder(R, sub)
    assert R.x_power_from_triple(Tt) == R.pow_naive(R.x, sub.t)
    for e, rung in enumerate(rungs):
        assert rung.j == sub.sprime << e
        assert R.x_power_from_triple(rung) == R.pow_naive(R.x, rung.j)
    top = R.x_power_from_triple(rungs[-1])
    h = R.mul(top, R.x) if p % 4 == 1 else top
    assert h == R.pow_naive(R.x, (p + 1) // 2) and h.is_scalar()
    assert R.square(h) == R.pow_naive(R.x, p + 1) == R.scalar(-c)
    assert qft_core_fast(sub, b, c).is_probable_prime


def test_fast_equals_naive_random():
    rng = random.Random(21)
    seen = set()
    for _ in range(1500):
        n = rng.randrange(9, 2**20) | 1
        if int(n**0.5) ** 2 == n:
            continue
        b, c = random_valid(n, rng)
        sub = decompose(n)
        f, v = qft_core_fast(sub, b, c), qft_core_naive(sub, b, c)
        assert f.decision == v.decision, (n, b, c)
        assert v.reason.value == qft_core_ref(n, b, c)
        seen.add((n & 3, v.reason))
    assert {1, 3} == {par for par, _ in seen}


def test_fast_equals_naive_on_pseudoprime_pairs():
    for n in (341,):
        sub = decompose(n)
        for b, c in valid_pairs(n):
            assert qft_core_fast(sub, b, c).decision == qft_core_naive(sub, b, c).decision


def test_step5_witnesses_reverify():
    for n in (341, 2047):
        sub = decompose(n)
        for b, c in valid_pairs(n)[:1500]:
            v = qft_core_fast(sub, b, c)
            if v.reason == Reason.STEP5_FAILED:
                xs = polypow((1, 0), sub.s, n, b, c)
                assert v.witness == xs != (0, 1)
                for j in range(sub.r - 1):
                    assert polypow((1, 0), sub.s << j, n, b, c) != (0, n - 1)
            elif v.is_probable_prime and v.step5_witness is not None:
                j = v.step5_witness
                assert j <= sub.r - 2
                assert polypow((1, 0), sub.s << j, n, b, c) == (0, n - 1)
            elif v.reason == Reason.STEP3_NONSCALAR:
                assert v.witness == polypow((1, 0), (n + 1) // 2, n, b, c)
            elif v.reason == Reason.STEP4_FAILED:
                assert v.witness == polypow((1, 0), n + 1, n, b, c)


# -- parameter search and driver ------------------------------------------------

class ScriptedRng:
    """Returns a fixed sequence of draws from ``randrange``."""

    def __init__(self, values):
        self.values = list(values)

    def randrange(self, lo, hi):
        v = self.values.pop(0)
        assert lo <= v < hi
        return v


def test_select_params_gcd_before_jacobi():
    # (3, 14) would be skipped by the symbol check, yet gcd(65, 15) = 5 is found first
    assert jacobi(3 * 3 + 4 * 14, 15) != -1
    got = select_params(15, 10, ScriptedRng([3, 14]))
    assert got == ParamSearch(COMPOSITE_BY_GCD, 1, 3, 14, divisor=5)
    # discriminant coprime, b shares a factor
    got = select_params(15, 10, ScriptedRng([3, 1]))
    assert got == ParamSearch(COMPOSITE_BY_GCD, 1, 3, 1, divisor=3)


def test_select_params_trivial_gcd_is_not_a_witness():
    # 7 | b^2 + 4c ... with n prime every gcd is 1 or n, so only symbols matter
    got = select_params(7, 3, ScriptedRng([1, 6, 1, 1, 1, 3]))
    assert got.status == PARAMS_FOUND and (got.b, got.c, got.draws) == (1, 3, 3)


def test_select_params_seeded_fixture_15():
    got = select_params(15, 50000, make_rng(1))
    assert got == ParamSearch(COMPOSITE_BY_GCD, 1, 3, 10, divisor=3)


def test_select_params_prime_density():
    draws = [select_params(1000003, 50000, make_rng(s)).draws for s in range(400)]
    assert max(draws) < 60
    # success probability per draw is close to 1/4 for a prime
    assert 3.0 < sum(draws) / len(draws) < 5.0


def test_select_params_exhaustion_rate():
    p = 2**61 - 1
    trials = 2000
    exhausted = sum(select_params(p, 2, make_rng(s)).status == EXHAUSTED
                    for s in range(trials))
    # a prime fails a draw with probability 3/4 - O(1/p)
    assert abs(exhausted / trials - 9 / 16) < 0.05


def test_rqft_examples():
    assert rqft(1009, 50000, make_rng(0)).reason == Reason.PROVEN_PRIME_BY_TRIAL_DIVISION
    assert rqft(1009, 2, make_rng(0)).reason == Reason.PARAM_SEARCH_EXHAUSTED
    assert rqft(1009, 2, make_rng(1)).reason == Reason.PASSED_ALL_STEPS
    v = rqft(341, 50000, make_rng(0))
    assert (v.reason, v.witness) == (Reason.TRIAL_DIVISION, 11)


def test_rqft_twin_prime_product():
    n = 50021 * 50023
    verdicts = [rqft(n, 50000, make_rng(s)) for s in range(40)]
    assert sum(v.is_composite for v in verdicts) >= 39


def test_rqft_iterations_and_exhaustion():
    p = 2**61 - 1
    assert rqft(p, 50000, make_rng(3), iterations=5).is_probable_prime
    v = rqft(p, 1, make_rng(1))
    assert v.reason == Reason.PARAM_SEARCH_EXHAUSTED and v.is_probable_prime


def test_rqft_meter_counts_aux_ops():
    m = Meter()
    rqft(2**89 - 1, 50000, make_rng(4), meter=m)
    assert m.mults > 0 and m.aux["gcd"] % 3 == 0 and m.aux["jacobi"] >= 2


def test_is_probable_prime_wrapper():
    assert [n for n in range(-3, 60) if is_probable_prime(n, seed=1)] == sieve_primes(60)
    assert is_probable_prime(2**127 - 1, iterations=2, seed=5)
    assert not is_probable_prime(2**64 + 1, seed=5)
    assert isprime(2**127 - 1)
