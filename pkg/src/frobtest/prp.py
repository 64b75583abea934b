"""Strong probable prime test, Quadratic Frobenius Test and its randomized driver."""

from __future__ import annotations

import enum
import random
from dataclasses import dataclass
from typing import Optional

from .arith import (DEFAULT_BOUND, DIVISOR_FOUND, PROVEN_PRIME, TestSubject,
                    decompose, gcd, is_square, isqrt, jacobi, metered_pow,
                    modinv, split_twos, trial_divide)
from .meter import Meter
from .ring import QuadRing

COMPOSITE = "composite"
PROBABLE_PRIME = "probable_prime"


class Reason(str, enum.Enum):
    TRIAL_DIVISION = "trial_division"
    PERFECT_SQUARE = "perfect_square"
    GCD_WITNESS = "gcd_witness"
    STEP3_NONSCALAR = "step3_nonscalar"
    STEP4_FAILED = "step4_failed"
    STEP5_FAILED = "step5_failed"
    PASSED_ALL_STEPS = "passed_all_steps"
    PARAM_SEARCH_EXHAUSTED = "param_search_exhausted"
    PROVEN_PRIME_BY_TRIAL_DIVISION = "proven_prime_by_trial_division"
    EVEN = "even"
    SPRP_FAILED = "sprp_failed"
    # sprp passes are reported with PASSED_ALL_STEPS

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Verdict:
    """Outcome of one test.

    ``witness`` depends on the reason: a prime divisor for trial division and
    gcd witnesses, the integer square root for perfect squares, and the
    ``(d, e)`` coordinates of the offending power for failed Steps 3-5.
    ``step5_witness`` is the index ``j`` with ``x^(2^j s) = -1`` on a pass,
    or ``None`` when ``x^s = 1``.
    """

    outcome: str
    reason: Reason
    witness: object = None
    step5_witness: Optional[int] = None
    params: Optional[tuple[int, int]] = None

    @property
    def is_probable_prime(self) -> bool:
        return self.outcome == PROBABLE_PRIME

    @property
    def is_composite(self) -> bool:
        return self.outcome == COMPOSITE

    @property
    def decision(self) -> tuple[str, str]:
        return self.outcome, self.reason.value


class InvalidParameters(ValueError):
    """The pair (b, c) violates the Jacobi side conditions for n."""


@dataclass(frozen=True)
class QftParams:
    b: int
    c: int
    delta: int

    @classmethod
    def make(cls, n: int, b: int, c: int) -> "QftParams":
        return cls(b % n, c % n, (b * b + 4 * c) % n)

    def is_valid(self, n: int) -> bool:
        return jacobi(self.delta, n) == -1 and jacobi(-self.c, n) == 1


def make_rng(seed: Optional[int] = None) -> random.Random:
    """The pinned generator: CPython's MT19937 ``random.Random``.

    ``randrange`` draws by rejection on ``getrandbits``, so draws carry
    no modulo bias and are reproducible for a given integer seed.
    """
    return random.Random(seed)


# -- strong probable prime test ------------------------------------------

@dataclass(frozen=True)
class SprpDecomposition:
    r: int
    s: int


def sprp_decompose(n: int) -> SprpDecomposition:
    r, s = split_twos(n - 1)
    return SprpDecomposition(r, s)


def sprp(n: int, a: int, meter: Optional[Meter] = None) -> Verdict:
    if n <= 2 or not n & 1:
        raise ValueError(f"sprp needs an odd n > 2, got {n}")
    if not 1 <= a <= n - 1:
        raise ValueError(f"base {a} outside [1, {n - 1}]")
    dec = sprp_decompose(n)
    y = metered_pow(a, dec.s, n, meter)
    if y == 1 or y == n - 1:
        return Verdict(PROBABLE_PRIME, Reason.PASSED_ALL_STEPS, step5_witness=0)
    for j in range(1, dec.r):
        y = y * y % n
        if meter is not None:
            meter.mults += 1
        if y == n - 1:
            return Verdict(PROBABLE_PRIME, Reason.PASSED_ALL_STEPS, step5_witness=j)
        if y == 1:
            break
    return Verdict(COMPOSITE, Reason.SPRP_FAILED, witness=a)


_SPRP_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_prime_small(n: int) -> bool:
    """Deterministic for ``n < 3.3e24`` (SPRP to the first 13 prime bases)."""
    if n < 2:
        return False
    for p in _SPRP_BASES:
        if n % p == 0:
            return n == p
    return all(sprp(n, a).is_probable_prime for a in _SPRP_BASES)


# -- QFT steps -------------------------------------------------------------

def steps12(n: int, bound: int = DEFAULT_BOUND) -> Optional[Verdict]:
    """Trial division and the square test; ``None`` means continue."""
    td = trial_divide(n, bound)
    if td.status == DIVISOR_FOUND:
        return Verdict(COMPOSITE, Reason.TRIAL_DIVISION, witness=td.divisor)
    if td.status == PROVEN_PRIME:
        return Verdict(PROBABLE_PRIME, Reason.PROVEN_PRIME_BY_TRIAL_DIVISION)
    root = isqrt(n)
    if root * root == n:
        return Verdict(COMPOSITE, Reason.PERFECT_SQUARE, witness=root)
    return None


def qft_core_naive(subject: TestSubject, b: int, c: int,
                   meter: Optional[Meter] = None) -> Verdict:
    """Steps 3-5 by direct powering of x and a linear scan in Step 5."""
    n = subject.n
    ring = QuadRing(n, b, c, meter)
    params = (ring.b, ring.c)
    x = ring.x
    h = ring.pow_naive(x, (n + 1) // 2)
    if h.d:
        return Verdict(COMPOSITE, Reason.STEP3_NONSCALAR, h.coords, params=params)
    full = ring.pow_naive(x, n + 1)
    if full.d or full.e != (-ring.c) % n:
        return Verdict(COMPOSITE, Reason.STEP4_FAILED, full.coords, params=params)
    xs = y = ring.pow_naive(x, subject.s)
    if y.d == 0 and y.e == 1:
        return Verdict(PROBABLE_PRIME, Reason.PASSED_ALL_STEPS, params=params)
    for j in range(subject.r - 1):
        if y.d == 0 and y.e == n - 1:
            return Verdict(PROBABLE_PRIME, Reason.PASSED_ALL_STEPS,
                           step5_witness=j, params=params)
        y = ring.square(y)
    return Verdict(COMPOSITE, Reason.STEP5_FAILED, xs.coords, params=params)


def _classify(w, k: int, n: int) -> int:
    """+1 if ``w == k``, -1 if ``w == -k``, else 0 (w a ring element, k a scalar)."""
    if w.d:
        return 0
    if w.e == k:
        return 1
    if w.e == (n - k) % n:
        return -1
    return 0


def frobenius_ladder(ring: QuadRing, subject: TestSubject):
    """The triple at ``t`` and the rungs at ``2^e s'`` for ``0 <= e < r'``.

    The last rung sits at ``(n - 1)/2`` or ``(n + 1)/2`` by parity class.
    """
    Tt = ring.triple_power(subject.t)
    rungs = [ring.triple_add(ring.triple_double(Tt), ring.triple_base())]
    for _ in range(subject.rprime - 1):
        rungs.append(ring.triple_double(rungs[-1]))
    return Tt, rungs


def qft_core_fast(subject: TestSubject, b: int, c: int,
                  meter: Optional[Meter] = None) -> Verdict:
    """Steps 3-5 on the triple ladder ``t -> s' -> 2^e s'``.

    After Step 4 the Frobenius map realises ``u -> u^n``, so the Step 5
    powers come from the cached rungs: for ``n = 1 mod 4``,
    ``x^(2^(e+1) s) = sigma(z) z`` and for ``n = 3 mod 4``
    ``x^(2^(e+1) s) = sigma(z)^2 / N(z)`` with ``z = x^(2^e s')`` and
    ``N(z) = (-c)^(2^e s')``.  Step 5 is a binary search for the first
    ``j`` with ``x^(2^j s) = 1``.
    """
    n = subject.n
    ring = QuadRing(n, b, c, meter)
    params = (ring.b, ring.c)
    Tt, rungs = frobenius_ladder(ring, subject)
    top = ring.x_power_from_triple(rungs[-1])
    one_mod_4 = subject.parity_class == 1
    # x^((n+1)/2)
    h = ring.mul(top, ring.x) if one_mod_4 else top
    if h.d:
        return Verdict(COMPOSITE, Reason.STEP3_NONSCALAR, h.coords, params=params)
    full = ring.square(h)
    if full.d or full.e != (-ring.c) % n:
        return Verdict(COMPOSITE, Reason.STEP4_FAILED, full.coords, params=params)

    xt = ring.x_power_from_triple(Tt)
    if one_mod_4:
        # x^s = sigma(x^t) x^t x^((n-1)/2) x
        y0 = ring.mul(ring.mul(ring.frobenius(xt), xt), h)
        k0 = 1
    else:
        # x^s * (-c)^(t+1) = sigma(x^t)^2 sigma(x) x^((n+1)/2)
        w = ring.square(ring.frobenius(xt))
        y0 = ring.scale(ring.mul(w, ring.frobenius(ring.x)), h.e)
        k0 = ring.c * Tt.C % n
        if meter is not None:
            meter.mults += 1
        if not Tt.j & 1:
            k0 = -k0 % n
    v0 = _classify(y0, k0, n)
    if v0 == 1:
        return Verdict(PROBABLE_PRIME, Reason.PASSED_ALL_STEPS, params=params)
    if v0 == -1:
        return Verdict(PROBABLE_PRIME, Reason.PASSED_ALL_STEPS,
                       step5_witness=0, params=params)

    probes = {0: v0}

    def probe(j: int) -> int:
        if j not in probes:
            rung = rungs[j - 1]
            z = ring.x_power_from_triple(rung)
            if one_mod_4:
                probes[j] = _classify(ring.mul(ring.frobenius(z), z), 1, n)
            else:
                norm = rung.C if not rung.j & 1 else (n - rung.C) % n
                probes[j] = _classify(ring.square(ring.frobenius(z)), norm, n)
        return probes[j]

    last = subject.r - 2
    lo, hi, first_one = 1, subject.r - 1, None
    while lo <= hi:
        mid = (lo + hi) // 2
        v = probe(mid)
        if v == -1 and mid <= last:
            return Verdict(PROBABLE_PRIME, Reason.PASSED_ALL_STEPS,
                           step5_witness=mid, params=params)
        if v == 1:
            first_one, hi = mid, mid - 1
        else:
            lo = mid + 1
    if first_one is not None and probe(first_one - 1) == -1:
        return Verdict(PROBABLE_PRIME, Reason.PASSED_ALL_STEPS,
                       step5_witness=first_one - 1, params=params)
    if k0 != 1:
        if meter is not None:
            meter.note("inverse")
        y0 = ring.scale(y0, modinv(k0, n))
    return Verdict(COMPOSITE, Reason.STEP5_FAILED, y0.coords, params=params)


def qft(n: int, b: int, c: int, bound: int = DEFAULT_BOUND, *,
        skip_steps12: bool = False, fast: bool = True,
        meter: Optional[Meter] = None) -> Verdict:
    """The five-step Quadratic Frobenius Test with parameters ``(b, c)``.

    Steps 1 and 2 run before the side conditions are checked, so squares
    (which admit no valid pair) are still reported as composite.
    """
    if n <= 1 or not n & 1:
        raise ValueError(f"expected an odd n > 1, got {n}")
    if not skip_steps12:
        early = steps12(n, bound)
        if early is not None:
            return early
    p = QftParams.make(n, b, c)
    if meter is not None:
        meter.note("jacobi")
        meter.note("jacobi")
    if not p.is_valid(n):
        raise InvalidParameters(
            f"need jacobi(b^2+4c, n) = -1 and jacobi(-c, n) = 1 for n={n}, b={b}, c={c}")
    core = qft_core_fast if fast else qft_core_naive
    return core(decompose(n), p.b, p.c, meter)


# -- randomized driver -----------------------------------------------------

PARAMS_FOUND = "params"
COMPOSITE_BY_GCD = "composite_by_gcd"
EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class ParamSearch:
    status: str
    draws: int
    b: Optional[int] = None
    c: Optional[int] = None
    divisor: Optional[int] = None


def select_params(n: int, bound: int, rng: random.Random,
                  meter: Optional[Meter] = None) -> ParamSearch:
    """Draw ``(b, c)`` uniformly from ``[1, n-1]^2`` at most ``bound`` times.

    Per draw the three gcds are checked before the Jacobi symbols, so a
    nontrivial divisor on the same draw wins.
    """
    for draw in range(1, bound + 1):
        b = rng.randrange(1, n)
        c = rng.randrange(1, n)
        delta = (b * b + 4 * c) % n
        for g in (gcd(delta, n), gcd(b, n), gcd(c, n)):
            if meter is not None:
                meter.note("gcd")
            if 1 < g < n:
                return ParamSearch(COMPOSITE_BY_GCD, draw, b, c, divisor=g)
        if meter is not None:
            meter.note("jacobi")
        if jacobi(delta, n) != -1:
            continue
        if meter is not None:
            meter.note("jacobi")
        if jacobi(-c, n) == 1:
            return ParamSearch(PARAMS_FOUND, draw, b, c)
    return ParamSearch(EXHAUSTED, bound)


def rqft(n: int, bound: int = DEFAULT_BOUND, rng: Optional[random.Random] = None,
         iterations: int = 1, *, skip_steps12: bool = False, fast: bool = True,
         meter: Optional[Meter] = None) -> Verdict:
    """``iterations`` rounds of the Random Quadratic Frobenius Test.

    Steps 1-2 run once; every round draws fresh parameters.
    """
    if n <= 1 or not n & 1:
        raise ValueError(f"expected an odd n > 1, got {n}")
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    if rng is None:
        rng = make_rng()
    if not skip_steps12:
        early = steps12(n, bound)
        if early is not None:
            return early
    subject = decompose(n)
    core = qft_core_fast if fast else qft_core_naive
    verdict = None
    for _ in range(iterations):
        search = select_params(n, bound, rng, meter)
        if search.status == COMPOSITE_BY_GCD:
            return Verdict(COMPOSITE, Reason.GCD_WITNESS, search.divisor,
                           params=(search.b, search.c))
        if search.status == EXHAUSTED:
            return Verdict(PROBABLE_PRIME, Reason.PARAM_SEARCH_EXHAUSTED)
        verdict = core(subject, search.b, search.c, meter)
        if verdict.is_composite:
            return verdict
    return verdict


def is_probable_prime(n: int, iterations: int = 1, seed: Optional[int] = None,
                      bound: int = DEFAULT_BOUND) -> bool:
    """Convenience wrapper accepting any integer."""
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return rqft(n, bound, make_rng(seed), iterations).is_probable_prime
