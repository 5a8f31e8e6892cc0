"""Square classes of Q_p^x and arithmetic in the quadratic extensions Q_p(sqrt tau)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .padic import PadicNumber, PrecisionError, ord_p_rational


def smallest_nonresidue(p: int) -> int:
    return next(a for a in range(2, p) if pow(a, (p - 1) // 2, p) == p - 1)


_TAGS_ODD = {(0, 0): "1", (0, 1): "u", (1, 0): "p", (1, 1): "up"}
_KEYS_ODD = {v: k for k, v in _TAGS_ODD.items()}
# unit mod 8 -> sign/odd part of the tag
_UNIT8 = {1: 1, 3: -5, 5: 5, 7: -1}
_KEYS_TWO = {1: (0, 1), -1: (0, 7), 5: (0, 5), -5: (0, 3), 2: (1, 1), -2: (1, 7), 10: (1, 5), -10: (1, 3)}


@dataclass(frozen=True)
class SquareClass:
    """A class in Q_p^x / (Q_p^x)^2.

    ``parity`` is v(x) mod 2; ``residue`` is the unit part's class: 0/1
    (residue / non-residue) for odd p, the unit mod 8 for p = 2.
    """

    p: int
    parity: int
    residue: int

    @property
    def tag(self) -> str:
        if self.p == 2:
            t = _UNIT8[self.residue] * (2 if self.parity else 1)
            return str(t)
        return _TAGS_ODD[(self.parity, self.residue)]

    @classmethod
    def from_tag(cls, p: int, tag: str | int) -> "SquareClass":
        if p == 2:
            parity, residue = _KEYS_TWO[int(tag)]
            return cls(2, parity, residue)
        return cls(p, *_KEYS_ODD[str(tag)])

    @property
    def is_square(self) -> bool:
        return self.parity == 0 and self.residue == (1 if self.p == 2 else 0)

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if other.p != self.p:
            raise ValueError("prime mismatch")
        if self.p == 2:
            return SquareClass(2, self.parity ^ other.parity, self.residue * other.residue % 8)
        return SquareClass(self.p, self.parity ^ other.parity, self.residue ^ other.residue)

    def rational_representative(self) -> Fraction:
        """A small rational in this class (u is the least non-residue)."""
        if self.p == 2:
            return Fraction(int(self.tag))
        u = smallest_nonresidue(self.p)
        return Fraction((u if self.residue else 1) * (self.p if self.parity else 1))

    def representative(self, N: int = 20) -> PadicNumber:
        """The class representative with u taken as a Teichmüller lift."""
        p = self.p
        if p == 2:
            return PadicNumber.from_rational(int(self.tag), 1, 2, N)
        unit = 1
        if self.residue:
            mod = p**N
            unit = pow(smallest_nonresidue(p), p ** (N - 1), mod)
        return PadicNumber(p, self.parity, unit, N)

    def __str__(self) -> str:
        return self.tag


def all_classes(p: int) -> list[SquareClass]:
    if p == 2:
        return [SquareClass.from_tag(2, t) for t in (1, -1, 2, -2, 5, -5, 10, -10)]
    return [SquareClass.from_tag(p, t) for t in ("1", "u", "p", "up")]


def square_class(x) -> SquareClass:
    """Class of a nonzero p-adic number (or of a rational, given as (x, p))."""
    if isinstance(x, tuple):
        return square_class_rational(*x)
    if x.is_zero:
        raise ValueError("zero has no square class")
    p = x.prime
    need = 4 if p == 2 else 3
    if x.precision < need:
        raise PrecisionError(f"square class needs at least {need} digits")
    if p == 2:
        return SquareClass(2, x.valuation % 2, x.unit % 8)
    return SquareClass(p, x.valuation % 2, 0 if pow(x.unit, (p - 1) // 2, p) == 1 else 1)


def square_class_rational(x, p: int) -> SquareClass:
    x = Fraction(x)
    if x == 0:
        raise ValueError("zero has no square class")
    v = ord_p_rational(x, p)
    u = x / Fraction(p) ** v
    mod = 8 if p == 2 else p
    r = u.numerator * pow(u.denominator, -1, mod) % mod
    if p == 2:
        return SquareClass(2, v % 2, r)
    return SquareClass(p, v % 2, 0 if pow(r, (p - 1) // 2, p) == 1 else 1)


def is_square(x) -> bool:
    return square_class(x).is_square


@dataclass(frozen=True)
class RamificationData:
    e: int
    f: int


def classify_quadratic(tau: SquareClass) -> RamificationData:
    if tau.p == 2:
        raise ValueError("ramification data is only computed for odd p")
    if tau.is_square:
        raise ValueError("tau = 1 does not give a quadratic extension")
    if tau.parity:
        return RamificationData(2, 1)
    return RamificationData(1, 2)


@dataclass(frozen=True)
class HalfPower:
    """The positive real p**exponent with a half-integer exponent."""

    p: int
    exponent: Fraction

    def squared(self) -> Fraction:
        return Fraction(self.p) ** int(2 * self.exponent)

    def __float__(self) -> float:
        return float(self.p) ** float(self.exponent)


def _as_padic(a, p: int, N: int) -> PadicNumber:
    return a if isinstance(a, PadicNumber) else PadicNumber.from_rational(Fraction(a), 1, p, N)


@dataclass(frozen=True)
class QuadExtElement:
    """x + y*sqrt(tau) in Q_p(sqrt tau)."""

    tau: PadicNumber
    x: PadicNumber
    y: PadicNumber

    @classmethod
    def make(cls, tau, x, y, p: int | None = None, N: int = 20) -> "QuadExtElement":
        if p is None:
            p = next(v.prime for v in (tau, x, y) if isinstance(v, PadicNumber))
        tau, x, y = (_as_padic(v, p, N) for v in (tau, x, y))
        if not tau.is_zero and square_class(tau).is_square:
            raise ValueError("tau must be a non-square")
        return cls(tau, x, y)

    def _same(self, other: "QuadExtElement") -> None:
        if not (self.tau - other.tau).is_zero:
            raise ValueError("elements of different extensions")

    def __add__(self, other: "QuadExtElement") -> "QuadExtElement":
        self._same(other)
        return QuadExtElement(self.tau, self.x + other.x, self.y + other.y)

    def __neg__(self) -> "QuadExtElement":
        return QuadExtElement(self.tau, -self.x, -self.y)

    def __sub__(self, other: "QuadExtElement") -> "QuadExtElement":
        return self + (-other)

    def __mul__(self, other: "QuadExtElement") -> "QuadExtElement":
        self._same(other)
        x = self.x * other.x + self.tau * self.y * other.y
        y = self.x * other.y + self.y * other.x
        return QuadExtElement(self.tau, x, y)

    def conjugate(self) -> "QuadExtElement":
        return QuadExtElement(self.tau, self.x, -self.y)

    def norm(self) -> PadicNumber:
        return self.x * self.x - self.tau * self.y * self.y

    def abs_canonical(self) -> HalfPower | int:
        n = self.norm()
        if n.is_zero:
            return 0
        return HalfPower(n.prime, Fraction(-n.valuation, 2))

    def abs_normalized(self) -> Fraction:
        return self.norm().abs_p()


def norm(a: QuadExtElement) -> PadicNumber:
    return a.norm()


@lru_cache(maxsize=None)
def norm_group(tau: SquareClass) -> frozenset[SquareClass]:
    """Square classes of nonzero values a^2 - tau*b^2, by direct search."""
    p = tau.p
    if p == 2:
        raise ValueError("the norm-group table is only built for odd p")
    t = tau.rational_representative()
    found = set()
    for a in range(1, p * p):
        for b in range(1, p * p):
            value = a * a - t * b * b
            if value:
                found.add(square_class_rational(value, p))
        if len(found) == 2:
            # an index-2 subgroup: nothing more can turn up
            break
    return frozenset(found)


def sgn_tau(tau, x) -> int:
    """+1 when x is a norm from Q_p(sqrt tau), -1 otherwise."""
    if not isinstance(tau, SquareClass):
        tau = square_class(tau)
    if tau.p == 2:
        raise ValueError("sgn_tau is not implemented for p = 2")
    if tau.is_square:
        raise ValueError("tau must be a non-square")
    cls = square_class(x) if isinstance(x, PadicNumber) else square_class_rational(x, tau.p)
    return 1 if cls in norm_group(tau) else -1
