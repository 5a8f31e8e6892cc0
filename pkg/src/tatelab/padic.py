"""Exact arithmetic in Q_p at finite relative precision.

A nonzero value is stored as ``p**valuation * unit`` where ``unit`` is an
integer in ``[0, p**precision)`` prime to p.  Zero carries an absolute
precision exponent instead (it means "0 mod p**abs_prec").
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator


class PrecisionError(ValueError):
    """Raised when a result would need digits that are not known."""


class NonConvergenceError(RuntimeError):
    pass


def ord_p(n: int, p: int) -> int:
    """Exponent of p in the nonzero integer n."""
    if n == 0:
        raise ValueError("ord_p(0) is infinite")
    n = abs(n)
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def ord_p_rational(x: Fraction, p: int) -> int:
    x = Fraction(x)
    return ord_p(x.numerator, p) - ord_p(x.denominator, p)


def _strip(n: int, p: int) -> tuple[int, int]:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


@dataclass(frozen=True)
class PadicNumber:
    prime: int
    valuation: int
    unit: int
    precision: int

    # construction ---------------------------------------------------------

    @classmethod
    def zero(cls, p: int, abs_prec: int) -> "PadicNumber":
        return cls(p, abs_prec, 0, 0)

    @classmethod
    def _make(cls, p: int, value: int, v: int, abs_prec: int) -> "PadicNumber":
        # value * p**v known modulo p**abs_prec
        if abs_prec <= v:
            return cls.zero(p, abs_prec)
        value %= p ** (abs_prec - v)
        if value == 0:
            return cls.zero(p, abs_prec)
        k, u = _strip(value, p)
        v += k
        return cls(p, v, u, abs_prec - v)

    @classmethod
    def from_rational(cls, numer, denom: int = 1, p: int = 2, N: int = 20) -> "PadicNumber":
        """Embed numer/denom in Q_p with N significant digits.

        >>> PadicNumber.from_rational(24, 17, 3, 10).digits
        (1, 0, 1, 0, 2, 0, 1, 1, 2, 2)
        """
        if N < 1:
            raise ValueError("precision must be at least 1")
        x = Fraction(numer) / Fraction(denom)
        if x == 0:
            return cls.zero(p, N)
        v_num, a = _strip(x.numerator, p)
        v_den, b = _strip(x.denominator, p)
        mod = p**N
        return cls(p, v_num - v_den, a * pow(b, -1, mod) % mod, N)

    @classmethod
    def from_int(cls, n: int, p: int, N: int = 20) -> "PadicNumber":
        return cls.from_rational(n, 1, p, N)

    @classmethod
    def from_digits(cls, p: int, valuation: int, digits: Iterable[int]) -> "PadicNumber":
        digits = list(digits)
        if not digits or digits[0] == 0:
            raise ValueError("leading digit must be nonzero")
        if any(not 0 <= d < p for d in digits):
            raise ValueError("digit out of range")
        unit = sum(d * p**i for i, d in enumerate(digits))
        return cls(p, valuation, unit, len(digits))

    # inspection -----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.unit == 0

    @property
    def abs_precision(self) -> int:
        """Exponent M such that the value is known modulo p**M."""
        return self.valuation + self.precision

    @property
    def digits(self) -> tuple[int, ...]:
        p, u, out = self.prime, self.unit, []
        for _ in range(self.precision):
            u, d = divmod(u, p)
            out.append(d)
        return tuple(out)

    def v(self) -> int:
        if self.is_zero:
            raise ValueError("valuation of zero is not defined")
        return self.valuation

    def abs_p(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.prime) ** (-self.valuation)

    def unit_part(self) -> "PadicNumber":
        if self.is_zero:
            raise ValueError("unit part of zero is not defined")
        return PadicNumber(self.prime, 0, self.unit, self.precision)

    def is_unit(self) -> bool:
        return not self.is_zero and self.valuation == 0

    def to_fraction(self) -> Fraction:
        """The truncated value sum a_i p^(v+i) as an exact rational."""
        if self.is_zero:
            return Fraction(0)
        return self.unit * Fraction(self.prime) ** self.valuation

    def residue(self, k: int) -> Fraction:
        """Canonical representative of x mod p**k in Z[1/p] ∩ [0, p**k)."""
        if self.abs_precision < k:
            raise PrecisionError(f"value only known modulo p^{self.abs_precision}")
        if self.is_zero or self.valuation >= k:
            return Fraction(0)
        p = self.prime
        return (self.unit % p ** (k - self.valuation)) * Fraction(p) ** self.valuation

    # arithmetic -----------------------------------------------------------

    def _check(self, other: "PadicNumber") -> "PadicNumber":
        if not isinstance(other, PadicNumber):
            # an exact rational gets enough digits to cost neither relative nor absolute precision
            q, p = Fraction(other), self.prime
            if q == 0:
                return PadicNumber.zero(p, self.abs_precision)
            n = max(self.precision, self.abs_precision - ord_p_rational(q, p), 1)
            return PadicNumber.from_rational(q, 1, p, n)
        if other.prime != self.prime:
            raise ValueError(f"prime mismatch: {self.prime} vs {other.prime}")
        return other

    def __add__(self, other) -> "PadicNumber":
        other = self._check(other)
        p = self.prime
        m = min(self.abs_precision, other.abs_precision)
        if self.is_zero and other.is_zero:
            return PadicNumber.zero(p, m)
        if self.is_zero:
            return PadicNumber._make(p, other.unit, other.valuation, m)
        if other.is_zero:
            return PadicNumber._make(p, self.unit, self.valuation, m)
        v = min(self.valuation, other.valuation)
        total = self.unit * p ** (self.valuation - v) + other.unit * p ** (other.valuation - v)
        return PadicNumber._make(p, total, v, m)

    __radd__ = __add__

    def __neg__(self) -> "PadicNumber":
        if self.is_zero:
            return self
        return PadicNumber(self.prime, self.valuation, (-self.unit) % self.prime**self.precision, self.precision)

    def __sub__(self, other) -> "PadicNumber":
        return self + (-self._check(other))

    def __rsub__(self, other) -> "PadicNumber":
        return self._check(other) - self

    def __mul__(self, other) -> "PadicNumber":
        other = self._check(other)
        p = self.prime
        if self.is_zero and other.is_zero:
            return PadicNumber.zero(p, self.valuation + other.valuation)
        if self.is_zero:
            return PadicNumber.zero(p, self.valuation + other.valuation)
        if other.is_zero:
            return PadicNumber.zero(p, self.valuation + other.valuation)
        n = min(self.precision, other.precision)
        return PadicNumber(p, self.valuation + other.valuation, self.unit * other.unit % p**n, n)

    __rmul__ = __mul__

    def inverse(self) -> "PadicNumber":
        if self.is_zero:
            raise ZeroDivisionError("inverse of a p-adic zero")
        mod = self.prime**self.precision
        return PadicNumber(self.prime, -self.valuation, pow(self.unit, -1, mod), self.precision)

    def __truediv__(self, other) -> "PadicNumber":
        return self * self._check(other).inverse()

    def __rtruediv__(self, other) -> "PadicNumber":
        return self._check(other) * self.inverse()

    def __pow__(self, k: int) -> "PadicNumber":
        if k < 0:
            return self.inverse() ** (-k)
        if self.is_zero:
            return PadicNumber.zero(self.prime, self.valuation * k) if k else PadicNumber.from_int(1, self.prime, 1)
        mod = self.prime**self.precision
        return PadicNumber(self.prime, self.valuation * k, pow(self.unit, k, mod), self.precision)

    def with_precision(self, n: int) -> "PadicNumber":
        """Truncate to at most n significant digits."""
        if self.is_zero or n >= self.precision:
            return self
        return PadicNumber(self.prime, self.valuation, self.unit % self.prime**n, n)

    def equals(self, other: "PadicNumber") -> bool:
        """Agreement modulo the coarser of the two absolute precisions."""
        return (self - other).is_zero

    # text and json --------------------------------------------------------

    def __str__(self) -> str:
        if self.is_zero:
            return f"p={self.prime} zero abs_prec={self.valuation}"
        ds = ",".join(map(str, self.digits))
        return f"p={self.prime} v={self.valuation} digits=[{ds}] prec={self.precision}"

    def to_json(self) -> dict:
        if self.is_zero:
            return {"p": self.prime, "zero": True, "abs_prec": self.valuation}
        return {"p": self.prime, "v": self.valuation, "digits": list(self.digits), "prec": self.precision}

    @classmethod
    def from_json(cls, data) -> "PadicNumber":
        if isinstance(data, str):
            data = json.loads(data)
        if data.get("zero"):
            return cls.zero(int(data["p"]), int(data["abs_prec"]))
        x = cls.from_digits(int(data["p"]), int(data["v"]), data["digits"])
        if x.precision != int(data["prec"]):
            raise ValueError("prec does not match digit count")
        return x

    _TEXT = re.compile(r"p=(\d+) v=(-?\d+) digits=\[([\d,]*)\] prec=(\d+)$")
    _ZERO = re.compile(r"p=(\d+) zero abs_prec=(-?\d+)$")

    @classmethod
    def parse(cls, text: str) -> "PadicNumber":
        text = text.strip()
        m = cls._ZERO.match(text)
        if m:
            return cls.zero(int(m[1]), int(m[2]))
        m = cls._TEXT.match(text)
        if not m:
            raise ValueError(f"not a p-adic text form: {text!r}")
        digits = [int(d) for d in m[3].split(",")] if m[3] else []
        x = cls.from_digits(int(m[1]), int(m[2]), digits)
        if x.precision != int(m[4]):
            raise ValueError("prec does not match digit count")
        return x


def from_rational(numer, denom, p, N) -> PadicNumber:
    return PadicNumber.from_rational(numer, denom, p, N)


def valuation(x: PadicNumber) -> int:
    return x.v()


def abs_p(x: PadicNumber) -> Fraction:
    return x.abs_p()


def unit_part(x: PadicNumber) -> PadicNumber:
    return x.unit_part()


def inverse(x: PadicNumber) -> PadicNumber:
    return x.inverse()


def factorial_valuation(n: int, p: int) -> int:
    """ord_p(n!) by Legendre's formula."""
    total, pk = 0, p
    while pk <= n:
        total += n // pk
        pk *= p
    return total


def series_sum(
    terms: Iterable[PadicNumber],
    p: int,
    target: int,
    *,
    tail_valuation: Callable[[int], int] | None = None,
    budget: int | None = None,
) -> PadicNumber:
    """Sum a convergent series modulo p**target.

    Stops once every remaining term is known to be divisible by p**target.
    ``tail_valuation(i)`` is a lower bound for the valuations of terms
    i, i+1, ...; without it the term valuations are assumed to be
    nondecreasing.  ``budget`` defaults to 10*target terms.
    """
    if budget is None:
        budget = 10 * max(target, 1)
    acc = PadicNumber.zero(p, target)
    for i, t in enumerate(terms):
        if i >= budget:
            raise NonConvergenceError(f"valuations did not reach {target} within {budget} terms")
        if tail_valuation is not None:
            if tail_valuation(i) >= target:
                return acc
        elif t.is_zero and t.abs_precision >= target:
            return acc
        elif not t.is_zero and t.valuation >= target:
            return acc
        if not t.is_zero and t.abs_precision < target:
            raise PrecisionError("term precision below the target")
        acc = acc + t
    return acc


def partial_sums(terms: Iterable[PadicNumber]) -> Iterator[PadicNumber]:
    acc = None
    for t in terms:
        acc = t if acc is None else acc + t
        yield acc


def _lift_odd_sqrt(u: int, p: int, n: int) -> int | None:
    if pow(u, (p - 1) // 2, p) != 1:
        return None
    r = next(a for a in range(1, p) if a * a % p == u % p)
    k = 1
    while k < n:
        k = min(2 * k, n)
        mod = p**k
        r = (r - (r * r - u) * pow(2 * r, -1, mod)) % mod
    return r


def hensel_sqrt(x: PadicNumber) -> PadicNumber | None:
    """A square root of x, or None when x is not a square.

    For p = 2 the root is determined one digit less precisely than x.
    """
    if x.is_zero:
        raise ValueError("square root of zero is not supported")
    p, n = x.prime, x.precision
    if x.valuation % 2:
        return None
    if p != 2:
        r = _lift_odd_sqrt(x.unit, p, n)
        if r is None:
            return None
        return PadicNumber(p, x.valuation // 2, r, n)
    if n < 3:
        raise PrecisionError("need at least 3 digits to decide squares in Q_2")
    if x.unit % 8 != 1:
        return None
    # r^2 = u mod 2^k for increasing k; r is then known mod 2^(k-1)
    r = 1
    for k in range(3, n):
        if (r * r - x.unit) % 2 ** (k + 1):
            r += 2 ** (k - 1)
    return PadicNumber(2, x.valuation // 2, r % 2 ** (n - 1), n - 1)


@lru_cache(maxsize=None)
def _primes_below(limit: int) -> tuple[int, ...]:
    sieve = bytearray([1]) * limit
    sieve[:2] = b"\x00\x00"
    for d in range(2, math.isqrt(limit - 1) + 1):
        if sieve[d]:
            sieve[d * d :: d] = bytes(len(range(d * d, limit, d)))
    return tuple(i for i, flag in enumerate(sieve) if flag)


def _prime_factors(n: int) -> list[int]:
    out = []
    # round the sieve size up to a power of two so the cache stays small
    for d in _primes_below(1 << math.isqrt(n).bit_length() + 1):
        if d * d > n:
            break
        if n % d == 0:
            out.append(d)
            n //= d
            while n % d == 0:
                n //= d
    if n > 1:
        out.append(n)
    return out


def is_primitive_root(g: int, m: int, order: int) -> bool:
    return all(pow(g, order // r, m) != 1 for r in _prime_factors(order))


def smallest_primitive_root(p: int) -> int:
    return next(g for g in range(2, p) if is_primitive_root(g, p, p - 1)) if p > 2 else 1


def teichmuller(p: int, N: int = 20) -> PadicNumber:
    """The (p-1)-st root of unity lifting the smallest primitive root mod p."""
    if p == 2:
        raise ValueError("the Teichmüller generator needs an odd prime")
    g = smallest_primitive_root(p)
    mod = p**N
    # g^(p^(N-1)) is fixed by x -> x^p modulo p^N
    return PadicNumber(p, 0, pow(g, p ** (N - 1), mod), N)


def abs_real(x: Fraction) -> Fraction:
    return abs(Fraction(x))


def product_formula(x: Fraction) -> tuple[Fraction, dict[int, Fraction]]:
    """All nontrivial local absolute values of a nonzero rational.

    Returns the product over every place together with the finite factors.
    """
    x = Fraction(x)
    if x == 0:
        raise ValueError("product formula needs a nonzero rational")
    a, b = abs(x.numerator), x.denominator
    places: dict[int, Fraction] = {}
    # integer bookkeeping: the product is num/den, reduced only once at the end
    num, den = a, b
    for p in sorted(_prime_factors(a) + _prime_factors(b)):
        v = ord_p(a, p) - ord_p(b, p)
        places[p] = Fraction(1, p**v) if v > 0 else Fraction(p**-v)
        if v > 0:
            den *= p**v
        else:
            num *= p**-v
    return Fraction(num, den), places
