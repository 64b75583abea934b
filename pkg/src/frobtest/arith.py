"""Integer utilities: Jacobi symbol, sieve, trial division, 2-adic splits."""

from __future__ import annotations

import bisect
import math
import threading
from dataclasses import dataclass, field
from typing import Optional

DEFAULT_BOUND = 50000

gcd = math.gcd
isqrt = math.isqrt


class NotInvertible(ValueError):
    """Raised by :func:`modinv` when ``gcd(a, n) > 1``."""

    def __init__(self, a, n, g):
        super().__init__(f"{a} is not invertible mod {n} (gcd {g})")
        self.a, self.n, self.g = a, n, g


def modinv(a: int, n: int) -> int:
    g = gcd(a, n)
    if g != 1:
        raise NotInvertible(a, n, g)
    return pow(a, -1, n)


def jacobi(a: int, n: int) -> int:
    """Jacobi symbol (a/n) for odd positive n, by the binary reciprocity method.

    >>> jacobi(7, 15)
    -1
    """
    if n <= 0 or not n & 1:
        raise ValueError(f"jacobi modulus must be odd and positive, got {n}")
    a %= n
    result = 1
    while a:
        while not a & 1:
            a >>= 1
            if n & 7 in (3, 5):
                result = -result
        a, n = n, a
        if a & 3 == 3 and n & 3 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def jacobi_table(n: int) -> list[int]:
    """``[jacobi(a, n) for a in range(n)]``, for table lookups in censuses."""
    return [jacobi(a, n) for a in range(n)]


_sieve_lock = threading.Lock()
_sieve: list[int] = []
_sieve_bound = 1


def _ensure_sieve(bound: int) -> None:
    global _sieve, _sieve_bound
    if bound <= _sieve_bound:
        return
    with _sieve_lock:
        if bound <= _sieve_bound:
            return
        flags = bytearray([1]) * (bound + 1)
        flags[0:2] = b"\x00\x00"
        for p in range(2, isqrt(bound) + 1):
            if flags[p]:
                flags[p * p::p] = bytes(len(range(p * p, bound + 1, p)))
        _sieve = [i for i, f in enumerate(flags) if f]
        _sieve_bound = bound


def sieve_primes(bound: int) -> list[int]:
    """All primes ``<= bound`` in ascending order (cached per process)."""
    if bound < 2:
        return []
    _ensure_sieve(bound)
    return _sieve[: bisect.bisect_right(_sieve, bound)]


# trial_divide outcomes
DIVISOR_FOUND = "divisor_found"
NO_DIVISOR = "no_divisor"
PROVEN_PRIME = "proven_prime"


@dataclass(frozen=True)
class TrialDivision:
    status: str
    divisor: Optional[int] = None


def trial_divide(n: int, bound: int = DEFAULT_BOUND) -> TrialDivision:
    """Divide odd ``n > 1`` by every prime up to ``min(bound, isqrt(n))``.

    Returns the least prime divisor if one is found.  If none is found and
    the primes tried cover everything up to ``isqrt(n)``, the division was
    exhaustive and ``n`` is reported as proven prime.
    """
    root = isqrt(n)
    limit = min(bound, root)
    for p in sieve_primes(limit):
        if n % p == 0:
            return TrialDivision(DIVISOR_FOUND, p)
    if root <= bound:
        return TrialDivision(PROVEN_PRIME)
    return TrialDivision(NO_DIVISOR)


def is_square(n: int) -> bool:
    return n >= 0 and isqrt(n) ** 2 == n


def split_twos(m: int) -> tuple[int, int]:
    """Return ``(r, s)`` with ``m = 2**r * s`` and ``s`` odd (``m > 0``)."""
    r = (m & -m).bit_length() - 1
    return r, m >> r


@dataclass(frozen=True)
class TestSubject:
    """An odd modulus with the decompositions used by the fast schedule.

    ``n - eps = 2**rprime * sprime`` where ``eps`` is ``+1`` for ``n = 1 mod 4``
    and ``-1`` otherwise; ``n**2 - 1 = 2**r * s``; ``t = (sprime - 1) // 2``.
    """

    __test__ = False  # keep pytest from collecting this class

    n: int
    parity_class: int
    rprime: int
    sprime: int
    r: int
    s: int
    t: int
    half: int = field(repr=False)

    @property
    def eps(self) -> int:
        return 1 if self.parity_class == 1 else -1


def decompose(n: int) -> TestSubject:
    if n <= 1 or not n & 1:
        raise ValueError(f"expected an odd integer > 1, got {n}")
    parity = n & 3
    rprime, sprime = split_twos(n - 1 if parity == 1 else n + 1)
    if parity == 1:
        s = (sprime * sprime << (rprime - 1)) + sprime
    else:
        s = (sprime * sprime << (rprime - 1)) - sprime
    subject = TestSubject(n, parity, rprime, sprime, rprime + 1, s,
                          (sprime - 1) // 2, (n + 1) // 2)
    assert (subject.s << subject.r) == n * n - 1 and s & 1
    return subject


def factorize_small(n: int) -> dict[int, int]:
    """Prime factorization of a small positive integer by trial division."""
    factors: dict[int, int] = {}
    m = n
    p = 2
    while p * p <= m:
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
        p += 1 if p == 2 else 2
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    return factors


def _pow_window(nbits: int) -> int:
    best, best_cost = 1, None
    for w in range(1, 9):
        cost = (1 << (w - 1)) - 1 + (w > 1) + nbits / (w + 1)
        if best_cost is None or cost < best_cost:
            best, best_cost = w, cost
    return best


def metered_pow(a: int, e: int, n: int, meter=None) -> int:
    """``a**e mod n`` by left-to-right sliding windows, counting each
    squaring and product as one multiplication on ``meter``."""
    if e < 0:
        raise ValueError("negative exponent")
    a %= n
    if e == 0:
        return 1 % n
    bits = bin(e)[2:]
    w = _pow_window(len(bits))
    mults = 0
    table = {1: a}
    if w > 1:
        a2 = a * a % n
        mults += 1
        for k in range(3, 1 << w, 2):
            table[k] = table[k - 2] * a2 % n
            mults += 1
    acc = None
    i, L = 0, len(bits)
    while i < L:
        if bits[i] == "0":
            acc = acc * acc % n
            mults += 1
            i += 1
            continue
        end = min(i + w, L)
        while bits[end - 1] == "0":
            end -= 1
        digit = int(bits[i:end], 2)
        if acc is None:
            acc = table[digit]
        else:
            for _ in range(end - i):
                acc = acc * acc % n
            acc = acc * table[digit] % n
            mults += end - i + 1
        i = end
    if meter is not None:
        meter.mults += mults
    return acc
