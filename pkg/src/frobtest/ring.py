"""Arithmetic in Z[x]/(n, x^2 - b*x - c).

Elements are ``d*x + e`` with both coordinates reduced to ``[0, n)``.  Every
multiplication mod n is charged to the ring's meter at the fixed costs
5 (product), 3 (triple doubling), 8 (chain addition), 2 (x^j recovery),
1 (Frobenius map) and 2 (scalar times element).
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .meter import Meter


class ContextMismatch(ValueError):
    pass


class RingElement:
    __slots__ = ("d", "e", "ring")

    def __init__(self, d: int, e: int, ring: "QuadRing"):
        self.d = d
        self.e = e
        self.ring = ring

    def __mul__(self, other):
        return self.ring.mul(self, other)

    def __pow__(self, m):
        return self.ring.pow_naive(self, m)

    def __eq__(self, other):
        if not isinstance(other, RingElement):
            return NotImplemented
        return (self.d == other.d and self.e == other.e
                and self.ring.key == other.ring.key)

    def __hash__(self):
        return hash((self.d, self.e, self.ring.key))

    def __repr__(self):
        return f"RingElement({self.d}*x + {self.e} mod {self.ring})"

    @property
    def coords(self) -> tuple[int, int]:
        return self.d, self.e

    def is_scalar(self) -> bool:
        return self.d == 0


class AbcTriple(NamedTuple):
    """``A = x^j + (b-x)^j``, ``B = (x^j - (b-x)^j)/(2x-b)``, ``C = c^j``, reduced mod n."""

    j: int
    A: int
    B: int
    C: int

    @property
    def parity(self) -> int:
        return self.j & 1


class QuadRing:
    """The quotient ring for one modulus and one parameter pair."""

    __slots__ = ("n", "b", "c", "delta", "half", "meter")

    def __init__(self, n: int, b: int, c: int, meter: Optional[Meter] = None):
        if n <= 1 or not n & 1:
            raise ValueError(f"modulus must be odd and > 1, got {n}")
        self.n = n
        self.b = b % n
        self.c = c % n
        self.delta = (b * b + 4 * c) % n
        self.half = (n + 1) >> 1
        self.meter = meter

    def __repr__(self):
        return f"(n={self.n}, x^2-{self.b}x-{self.c})"

    @property
    def key(self) -> tuple[int, int, int]:
        return self.n, self.b, self.c

    # -- elements -------------------------------------------------------

    def element(self, d: int, e: int) -> RingElement:
        return RingElement(d % self.n, e % self.n, self)

    def scalar(self, e: int) -> RingElement:
        return RingElement(0, e % self.n, self)

    @property
    def one(self) -> RingElement:
        return RingElement(0, 1 % self.n, self)

    @property
    def x(self) -> RingElement:
        return RingElement(1, 0, self)

    def _check(self, u: RingElement) -> None:
        if u.ring is not self and u.ring.key != self.key:
            raise ContextMismatch(f"element of {u.ring} used in {self}")

    # -- operations -----------------------------------------------------

    def mul(self, u: RingElement, v: RingElement) -> RingElement:
        """Product via df, eg, b(df), c(df), (d+e)(f+g)."""
        if u.ring is not self or v.ring is not self:
            self._check(u)
            self._check(v)
        n = self.n
        d, e, f, g = u.d, u.e, v.d, v.e
        df = d * f % n
        eg = e * g % n
        bdf = self.b * df % n
        cdf = self.c * df % n
        cross = (d + e) * (f + g) % n
        if self.meter is not None:
            self.meter.mults += 5
        return RingElement((cross + bdf - df - eg) % n, (eg + cdf) % n, self)

    def square(self, u: RingElement) -> RingElement:
        return self.mul(u, u)

    def scale(self, u: RingElement, k: int) -> RingElement:
        n = self.n
        if self.meter is not None:
            self.meter.mults += 2
        return RingElement(k * u.d % n, k * u.e % n, self)

    def frobenius(self, u: RingElement) -> RingElement:
        """The map x -> b - x: ``(d, e) -> (-d, e + b*d)``."""
        n = self.n
        if self.meter is not None:
            self.meter.mults += 1
        return RingElement(-u.d % n, (u.e + self.b * u.d) % n, self)

    def pow_naive(self, u: RingElement, m: int) -> RingElement:
        """Left-to-right square-and-multiply using :meth:`mul` only."""
        if m < 0:
            raise ValueError("negative exponent")
        result = self.one
        for bit in bin(m)[2:] if m else "":
            result = self.mul(result, result)
            if bit == "1":
                result = self.mul(result, u)
        return result

    # -- (A, B, C) triples ---------------------------------------------

    def triple_identity(self) -> AbcTriple:
        return AbcTriple(0, 2 % self.n, 0, 1 % self.n)

    def triple_base(self) -> AbcTriple:
        return AbcTriple(1, self.b, 1 % self.n, self.c)

    def triple_double(self, T: AbcTriple) -> AbcTriple:
        n = self.n
        A, B, C = T.A, T.B, T.C
        # 2*(-1)^j*C by additions only
        twoC = C + C if T.j & 1 == 0 else -(C + C)
        if self.meter is not None:
            self.meter.mults += 3
        return AbcTriple(T.j << 1, (A * A - twoC) % n, A * B % n, C * C % n)

    def triple_add(self, T1: AbcTriple, T2: AbcTriple) -> AbcTriple:
        n, h = self.n, self.half
        BB = T1.B * T2.B % n
        A = h * ((T1.A * T2.A + self.delta * BB) % n) % n
        B = h * ((T1.A * T2.B + T2.A * T1.B) % n) % n
        if self.meter is not None:
            self.meter.mults += 8
        return AbcTriple(T1.j + T2.j, A, B, T1.C * T2.C % n)

    def x_power_from_triple(self, T: AbcTriple) -> RingElement:
        """``x^j = B*x + (A - b*B)/2``."""
        n = self.n
        if self.meter is not None:
            self.meter.mults += 2
        return RingElement(T.B, self.half * (T.A - self.b * T.B % n) % n, self)

    def triple_power(self, j: int, window: Optional[int] = None) -> AbcTriple:
        """The triple at index ``j`` by a left-to-right sliding-window chain.

        Doublings cost 3 and chain additions 8, so the window width is picked
        to minimise ``8 * (precomputed odd triples + windows)``.  ``window=1``
        gives plain binary double-and-add.
        """
        if j < 0:
            raise ValueError("negative index")
        if j == 0:
            return self.triple_identity()
        bits = bin(j)[2:]
        w = window or chain_window(len(bits))
        base = self.triple_base()
        table = {1: base}
        if w > 1:
            two = self.triple_double(base)
            for k in range(3, 1 << w, 2):
                table[k] = self.triple_add(table[k - 2], two)
        acc = None
        i, L = 0, len(bits)
        while i < L:
            if bits[i] == "0":
                acc = self.triple_double(acc)
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
                    acc = self.triple_double(acc)
                acc = self.triple_add(acc, table[digit])
            i = end
        return acc


def chain_window(nbits: int) -> int:
    """Window width minimising the expected chain-addition count for ``nbits``."""
    best, best_cost = 1, None
    for w in range(1, 9):
        cost = (1 << (w - 1)) - 1 + (1 if w > 1 else 0) * 3 / 8 + nbits / (w + 1)
        if best_cost is None or cost < best_cost:
            best, best_cost = w, cost
    return best
