"""Exhaustive pair censuses over small moduli.

Every census enumerates all ``(b, c)`` in ``[0, n)^2``.  Symbol tables are
built once per modulus and the counting is vectorised with numpy; the QFT
pass census runs both cores on every eligible pair and diffs them.
"""

from __future__ import annotations

import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional

import numpy as np

from .arith import (DEFAULT_BOUND, decompose, factorize_small, is_square,
                    jacobi_table, split_twos)
from .prp import (COMPOSITE_BY_GCD, PARAMS_FOUND, is_prime_small, make_rng,
                  qft_core_fast, qft_core_naive, select_params, steps12)

PRIME_CAP = 101
COMPOSITE_CAP = 1000


class CapExceeded(ValueError):
    pass


# -- helpers -----------------------------------------------------------------

def _grids(n: int):
    """Symbol grids indexed ``[b, c]``: (disc symbol, (-c) symbol, disc residue)."""
    table = np.array(jacobi_table(n), dtype=np.int8)
    r = np.arange(n, dtype=np.int64)
    disc = (r[:, None] * r[:, None] + 4 * r[None, :]) % n
    neg_c = table[(-r) % n]
    return table[disc], np.broadcast_to(neg_c[None, :], (n, n)), disc


def euler_phi(factors: Mapping[int, int]) -> int:
    out = 1
    for p, k in factors.items():
        out *= (p - 1) * p ** (k - 1)
    return out


def mobius(factors: Mapping[int, int]) -> int:
    if any(k > 1 for k in factors.values()):
        return 0
    return -1 if len(factors) % 2 else 1


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceeded(f"{n} exceeds the enumeration cap {cap}")


# -- symbol pair censuses ------------------------------------------------------

@dataclass(frozen=True)
class PairCensus:
    """``count`` = #{(b, c) mod n : (b^2+4c / n) = epsilon1, (-c / n) = epsilon2}."""

    n: int
    epsilon1: int
    epsilon2: int
    count: int
    bound: Fraction
    exact: Optional[int] = None  # predicted exact value, when one exists

    @property
    def holds(self) -> bool:
        if self.exact is not None and self.count != self.exact:
            return False
        return self.count <= self.bound

    def as_dict(self) -> dict:
        return {"record": "pair_census", "n": self.n, "epsilon1": self.epsilon1,
                "epsilon2": self.epsilon2, "count": self.count,
                "bound": str(self.bound), "exact": self.exact, "holds": self.holds}


def count_pairs(n: int, e1: int, e2: int) -> int:
    s1, s2, _ = _grids(n)
    return int(np.count_nonzero((s1 == e1) & (s2 == e2)))


def prime_pair_prediction(p: int, e1: int, e2: int) -> tuple[Optional[int], Fraction]:
    """(exact value or None, upper bound) for the census at an odd prime."""
    if e1 != e2:
        v = (p - 1) ** 2 // 4
        return v, Fraction(v)
    if e1 == 1:
        v = (p - 1) * (p - 3) // 4
        return v, Fraction(v)
    return None, Fraction(p * p - 1, 4) + Fraction(p - 1, 2)


def squarefree_pair_bound(n: int, e1: int, e2: int,
                          factors: Optional[Mapping[int, int]] = None) -> Fraction:
    factors = factors or factorize_small(n)
    phi = euler_phi(factors)
    bound = Fraction(phi * phi, 4)
    if e1 == e2:
        bound += Fraction(e1 * mobius(factors) * phi, 2)
    return bound


def _check_signs(e1: int, e2: int) -> None:
    if e1 not in (-1, 1) or e2 not in (-1, 1):
        raise ValueError("target symbols must be -1 or 1")


def census_pairs(p: int, e1: int, e2: int, cap: int = PRIME_CAP) -> PairCensus:
    _check_signs(e1, e2)
    _check_cap(p, cap)
    if p < 3 or not is_prime_small(p):
        raise ValueError(f"{p} is not an odd prime")
    exact, bound = prime_pair_prediction(p, e1, e2)
    return PairCensus(p, e1, e2, count_pairs(p, e1, e2), bound, exact)


def census_pairs_composite(n: int, e1: int, e2: int,
                           cap: int = COMPOSITE_CAP) -> PairCensus:
    _check_signs(e1, e2)
    _check_cap(n, cap)
    factors = factorize_small(n)
    if not n & 1 or len(factors) < 2:
        raise ValueError(f"{n} is not an odd composite")
    if mobius(factors) == 0:
        raise ValueError(f"{n} is not squarefree")
    return PairCensus(n, e1, e2, count_pairs(n, e1, e2),
                      squarefree_pair_bound(n, e1, e2, factors))


# -- M(n) -------------------------------------------------------------------------

def _m_mask(n: int):
    s1, s2, disc = _grids(n)
    r = np.arange(n, dtype=np.int64)
    g_disc = np.gcd(disc, n)
    g_c = np.broadcast_to(np.gcd(r, n)[None, :], (n, n))
    return (((s1 == -1) & (s2 == 1))
            | ((g_disc > 1) & (g_disc < n))
            | ((g_c > 1) & (g_c < n)))


def m_count(n: int) -> int:
    return int(np.count_nonzero(_m_mask(n)))


def census_m(n: int, cap: int = COMPOSITE_CAP) -> int:
    """M(n): pairs with the RQFT symbol conditions or a nontrivial gcd revealed."""
    _check_cap(n, cap)
    if not n & 1 or n < 9 or is_prime_small(n):
        raise ValueError(f"{n} is not an odd composite")
    if is_square(n):
        raise ValueError(f"{n} is a perfect square")
    return m_count(n)


def m_bound_holds(n: int, m_n: int) -> bool:
    return 4 * m_n > n * n


# -- pass census ------------------------------------------------------------------

@dataclass
class PassCensus:
    n: int
    B_eff: int
    skip_steps12: bool
    m_n: int
    passes: int
    eligible: int = 0
    gcd_rejected: int = 0
    discrepancies: list = field(default_factory=list)
    verdicts: Counter = field(default_factory=Counter)

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.passes, self.m_n) if self.m_n else Fraction(0)

    def as_dict(self) -> dict:
        return {"record": "pass_census", "n": self.n, "B": self.B_eff,
                "skip_steps12": self.skip_steps12, "m_n": self.m_n,
                "eligible": self.eligible, "gcd_rejected": self.gcd_rejected,
                "passes": self.passes, "alpha": float(self.alpha),
                "alpha_exact": str(self.alpha),
                "discrepancies": len(self.discrepancies)}


def eligible_pairs(n: int) -> list[tuple[int, int]]:
    """All ``(b, c)`` mod n meeting both Jacobi side conditions, row-major."""
    s1, s2, _ = _grids(n)
    bs, cs = np.nonzero((s1 == -1) & (s2 == 1))
    return list(zip(bs.tolist(), cs.tolist()))


def _sweep(n: int, pairs: list[tuple[int, int]]):
    subject = decompose(n)
    passes = rejected = 0
    diffs = []
    verdicts: Counter = Counter()
    for b, c in pairs:
        if 1 < math.gcd(b, n) < n:
            rejected += 1
            continue
        fast = qft_core_fast(subject, b, c)
        naive = qft_core_naive(subject, b, c)
        if fast.outcome != naive.outcome:
            diffs.append((b, c, fast.decision, naive.decision))
        verdicts[fast.reason.value] += 1
        passes += fast.is_probable_prime
    return passes, rejected, diffs, verdicts


def census_pass(n: int, B_eff: int = DEFAULT_BOUND, skip_steps12: bool = False,
                cap: int = COMPOSITE_CAP, jobs: int = 1) -> PassCensus:
    """Count the pairs for which odd composite ``n`` passes the QFT.

    Pairs meeting the symbol conditions but sharing a factor with ``b`` are
    counted as gcd rejections, never as passes.  ``jobs > 1`` splits the
    sweep over worker processes; totals do not depend on the split.
    """
    _check_cap(n, cap)
    if not n & 1 or n < 9 or is_prime_small(n):
        raise ValueError(f"{n} is not an odd composite")
    m_n = m_count(n)
    pairs = eligible_pairs(n)
    census = PassCensus(n, B_eff, skip_steps12, m_n, 0, eligible=len(pairs))
    if not skip_steps12 and steps12(n, B_eff) is not None:
        census.verdicts["steps12"] = len(pairs)
        return census
    if jobs > 1 and len(pairs) > 1:
        chunks = [pairs[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            parts = list(pool.map(_sweep, [n] * jobs, chunks))
    else:
        parts = [_sweep(n, pairs)]
    for passes, rejected, diffs, verdicts in parts:
        census.passes += passes
        census.gcd_rejected += rejected
        census.discrepancies.extend(diffs)
        census.verdicts.update(verdicts)
    census.discrepancies.sort()
    return census


# -- root-pair census ------------------------------------------------------------

@dataclass(frozen=True)
class RootPairCensus:
    """Pairs mod p (split discriminant) whose roots are swapped by u -> u^n."""

    n: int
    p: int
    count: int

    @property
    def bound(self) -> int:
        return (self.p - 1) // 2

    @property
    def holds(self) -> bool:
        return self.count <= self.bound

    def as_dict(self) -> dict:
        return {"record": "root_pair_census", "n": self.n, "p": self.p,
                "count": self.count, "bound": self.bound, "holds": self.holds}


def census_lemma28(n: int, p: int, cap: int = PRIME_CAP) -> RootPairCensus:
    _check_cap(p, cap)
    if not is_prime_small(p) or p == 2:
        raise ValueError(f"{p} is not an odd prime")
    if n % p:
        raise ValueError(f"{p} does not divide {n}")
    # distinct roots a1 != a2 <-> b = a1 + a2, c = -a1*a2 with square discriminant
    powers = [pow(a, n, p) for a in range(p)]
    count = 0
    for a1 in range(p):
        for a2 in range(a1 + 1, p):
            if powers[a1] == a2 and powers[a2] == a1:
                count += 1
    return RootPairCensus(n, p, count)


# -- factored diagnostic ---------------------------------------------------------

@dataclass(frozen=True)
class FactoredDiagnostic:
    n: int
    primes: tuple[int, ...]
    J: int
    G: int
    s: int

    @property
    def k(self) -> int:
        return len(self.primes)

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.n * self.n, (1 << (self.k * (self.J + 1))) * self.G)

    def hypothesis(self, bound: int = DEFAULT_BOUND) -> bool:
        """Whether ``ratio > B / 2^(3k+1)``."""
        return self.ratio > Fraction(bound, 1 << (3 * self.k + 1))

    def as_dict(self, bound: int = DEFAULT_BOUND) -> dict:
        return {"record": "diagnostic", "n": self.n, "primes": list(self.primes),
                "k": self.k, "J": self.J, "G": self.G,
                "ratio": float(self.ratio), "ratio_exceeds_one": self.ratio > 1,
                "B": bound, "hypothesis": self.hypothesis(bound)}


def diagnostic(n: int, factors: Optional[Iterable[int] | Mapping[int, int]] = None
               ) -> FactoredDiagnostic:
    """J and G for odd composite ``n``; ``factors`` maps primes to exponents
    (or lists primes with repetition) and is found by trial division if omitted."""
    if factors is None:
        fac = factorize_small(n)
    elif isinstance(factors, Mapping):
        fac = dict(factors)
    else:
        fac = dict(Counter(factors))
    product = 1
    for p, k in fac.items():
        if p < 3 or not is_prime_small(p):
            raise ValueError(f"{p} is not an odd prime")
        product *= p ** k
    if product != n:
        raise ValueError(f"factorization {fac} does not multiply to {n}")
    if sum(fac.values()) < 2:
        raise ValueError(f"{n} is not composite")
    primes = tuple(sorted(fac))
    _, s = split_twos(n * n - 1)
    J = min(split_twos(p * p - 1)[0] for p in primes) - 1
    G = 1
    for p in primes:
        G *= math.gcd(p * p - 1, s)
    return FactoredDiagnostic(n, primes, J, G, s)


# -- survivor search ------------------------------------------------------------

def search_survivors(lo: int, hi: int, samples: int = 10, seed: int = 0,
                     bound: int = DEFAULT_BOUND, skip_steps12: bool = True):
    """Yield a record for every odd composite in ``[lo, hi]`` that passes the
    QFT core for at least one of ``samples`` random valid pairs.

    Each n gets its own generator seeded from ``(seed, n)``, so the stream
    is the same however the range is split.
    """
    for n in range(max(lo, 3) | 1, hi + 1, 2):
        if is_prime_small(n):
            continue
        if not skip_steps12 and steps12(n, bound) is not None:
            continue
        rng = make_rng(f"{seed}/{n}")
        subject = decompose(n)
        passing = []
        for _ in range(samples):
            search = select_params(n, bound, rng)
            if search.status != PARAMS_FOUND:
                if search.status == COMPOSITE_BY_GCD:
                    continue
                break
            if qft_core_fast(subject, search.b, search.c).is_probable_prime:
                passing.append([search.b, search.c])
        if passing:
            yield {"command": "search", "n": n, "passing": passing,
                   "samples": samples, "seed": seed}
