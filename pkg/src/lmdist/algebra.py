"""Exact scalar arithmetic: prime fields, big binomials, factorial-ratio logs.

Everything here is exact except the two ``ln_*`` helpers, which return
64-bit floats of exactly-defined sums.  Coefficient domains for the
polynomial layer (`PrimeField`, `QQ`) share a small duck-typed surface:
``zero``, ``one``, ``add``, ``sub``, ``mul``, ``neg``, ``inv``, ``embed``.
"""

from __future__ import annotations

import math
from fractions import Fraction

DEFAULT_PRIME = (1 << 61) - 1  # Mersenne prime, single machine word

# Witness set making Miller-Rabin deterministic for all n < 3.3 * 10^24,
# which covers every word-sized modulus this package accepts.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic primality test for word-sized integers."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, r = n - 1, 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def largest_prime_in(lo: int, hi: int) -> int | None:
    """Largest prime p with lo <= p <= hi, or None if the interval has none."""
    for p in range(hi, max(lo, 2) - 1, -1):
        if is_prime(p):
            return p
    return None


class PrimeField:
    """GF(p) with elements represented as plain ints in [0, p).

    The modulus is checked prime at construction.  All operations are pure;
    instances are immutable and safe to share.
    """

    __slots__ = ("p",)

    def __init__(self, p: int = DEFAULT_PRIME):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        self.p = p

    zero = 0

    @property
    def one(self) -> int:
        return 1 % self.p

    def embed(self, x) -> int:
        """Map an int or Fraction into the field."""
        if isinstance(x, Fraction):
            return x.numerator % self.p * self.inv(x.denominator % self.p) % self.p
        return x % self.p

    def add(self, a: int, b: int) -> int:
        s = a + b
        return s - self.p if s >= self.p else s

    def sub(self, a: int, b: int) -> int:
        s = a - b
        return s + self.p if s < 0 else s

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def neg(self, a: int) -> int:
        return self.p - a if a else 0

    def inv(self, a: int) -> int:
        if a % self.p == 0:
            raise ZeroDivisionError(f"0 has no inverse mod {self.p}")
        return pow(a, self.p - 2, self.p)

    def __eq__(self, other) -> bool:
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self) -> int:
        return hash(("PrimeField", self.p))

    def __repr__(self) -> str:
        return f"PrimeField({self.p})"


class Rationals:
    """Exact rational coefficients: ints stay ints, fractions stay reduced.

    `Fraction` keeps denominators positive and coprime to numerators, which
    is exactly the canonical form the polynomial layer relies on.
    """

    __slots__ = ()

    zero = 0
    one = 1

    @staticmethod
    def embed(x):
        return x

    @staticmethod
    def add(a, b):
        return a + b

    @staticmethod
    def sub(a, b):
        return a - b

    @staticmethod
    def mul(a, b):
        return a * b

    @staticmethod
    def neg(a):
        return -a

    @staticmethod
    def inv(a):
        if a == 0:
            raise ZeroDivisionError("0 has no inverse")
        r = Fraction(1) / Fraction(a)
        return int(r) if r.denominator == 1 else r

    def __eq__(self, other) -> bool:
        return isinstance(other, Rationals)

    def __hash__(self) -> int:
        return hash("Rationals")

    def __repr__(self) -> str:
        return "QQ"


QQ = Rationals()


def binomial_exact(a: int, b: int) -> int:
    """C(a, b) as an exact big integer; 0 when b > a."""
    if a < 0 or b < 0:
        raise ValueError("binomial arguments must be nonnegative")
    if b > a:
        return 0
    return math.comb(a, b)


def ln_big(x: int) -> float:
    """Natural log of a positive big integer, safe beyond float range."""
    if x <= 0:
        raise ValueError("ln of a nonpositive integer")
    if x.bit_length() <= 900:
        return math.log(x)
    shift = x.bit_length() - 64
    return math.log(x >> shift) + shift * math.log(2)


def ln_binomial(a: int, b: int) -> float:
    """ln C(a, b) via lgamma; for arguments too large to expand exactly."""
    if b > a or b < 0:
        raise ValueError("empty binomial has no logarithm")
    return math.lgamma(a + 1) - math.lgamma(b + 1) - math.lgamma(a - b + 1)


def ln_factorial_ratio_exact(a: int, f: int, g: int) -> float:
    """ln((a+f)! / (a-g)!) summed term by term, no Stirling shortcut."""
    if f < 0 or g < 0:
        raise ValueError("f and g must be nonnegative")
    if a - g < 0:
        raise ValueError(f"a - g = {a - g} < 0: ratio is not a factorial quotient")
    return sum(math.log(j) for j in range(a - g + 1, a + f + 1))


def ln_factorial_ratio_estimate(a: int, f: int, g: int) -> tuple[float, float]:
    """First-order estimate of ln((a+f)!/(a-g)!) with its error budget.

    Returns ((f+g) * ln a, (f+g)**2 / a).  Valid in the regime f + g < a;
    outside it the error term is not small and the call is rejected.
    """
    if f < 0 or g < 0:
        raise ValueError("f and g must be nonnegative")
    if f + g == 0:
        return 0.0, 0.0
    if f + g >= a:
        raise ValueError(f"regime violation: f + g = {f + g} >= a = {a}")
    return (f + g) * math.log(a), (f + g) ** 2 / a
