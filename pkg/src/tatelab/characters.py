"""Additive characters of Q_p and multiplicative characters of Q_p^x.

Character values of modulus one are exact :class:`RationalAngle` objects.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .cyclotomic import RationalAngle
from .padic import PadicNumber, PrecisionError, _prime_factors, is_primitive_root, ord_p, ord_p_rational

# -- fractional parts --------------------------------------------------------


def fractional_part(x, p: int | None = None) -> Fraction:
    """The p-adic fractional part f(x) in [0, 1) ∩ Z[1/p]."""
    if isinstance(x, PadicNumber):
        if x.is_zero:
            if x.valuation < 0:
                raise PrecisionError("zero known only modulo a negative power of p")
            return Fraction(0)
        if x.valuation >= 0:
            return Fraction(0)
        if x.abs_precision < 0:
            raise PrecisionError("not enough digits to read off the fractional part")
        k = -x.valuation
        return Fraction(x.unit % x.prime**k, x.prime**k)
    if p is None:
        raise ValueError("a rational input needs the prime")
    return reduce_mod(Fraction(x), p, 0)


def reduce_mod(x: Fraction, p: int, k: int) -> Fraction:
    """Representative of x + p^k Z_p in Z[1/p] ∩ [0, p^k)."""
    x = Fraction(x)
    if x == 0:
        return x
    d = x.denominator
    e = 0
    while d % p == 0:
        d //= p
        e += 1
    # x = a / (p^e d) with d prime to p; shift so the modulus is an integer
    shift = max(e, -k, 0)
    scale = p**shift
    m = p ** (k + shift)
    num = x.numerator * (scale // p**e) * pow(d, -1, m) % m
    return Fraction(num, scale)


def integral_part(x, p: int | None = None):
    if isinstance(x, PadicNumber):
        return x - PadicNumber.from_rational(fractional_part(x), 1, x.prime, max(x.precision, 1))
    return Fraction(x) - fractional_part(x, p)


# -- additive characters -----------------------------------------------------


@dataclass(frozen=True)
class AdditiveCharacter:
    """x -> chi_p(t x) = exp(2 pi i f(t x))."""

    p: int
    t: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "t", Fraction(self.t))

    def conductor_exponent(self) -> int | None:
        """k with conductor p^k Z_p (None for the trivial character)."""
        if self.t == 0:
            return None
        return -ord_p_rational(self.t, self.p)

    def __call__(self, x) -> RationalAngle:
        return additive_eval(self, x)


def chi_p(p: int, x) -> RationalAngle:
    return RationalAngle(fractional_part(x, p))


def additive_eval(chi: AdditiveCharacter, x) -> RationalAngle:
    if chi.t == 0:
        return RationalAngle(0)
    if isinstance(x, PadicNumber):
        if x.prime != chi.p:
            raise ValueError("prime mismatch")
        if x.is_zero:
            if x.valuation + ord_p_rational(chi.t, chi.p) < 0:
                raise PrecisionError("zero known too coarsely for this twist")
            return RationalAngle(0)
        tx = x * PadicNumber.from_rational(chi.t, 1, chi.p, x.precision)
        return RationalAngle(fractional_part(tx))
    return RationalAngle(fractional_part(chi.t * Fraction(x), chi.p))


def _primes_of(n: int) -> list[int]:
    return _prime_factors(abs(n)) if n not in (0, 1, -1) else []


def product_principle_check(x) -> int:
    """Integer M with sum_p f_p(x) - x = M, witnessing prod_v chi_v(x) = 1.

    The real character is taken as exp(-2 pi i x).
    """
    x = Fraction(x)
    if x == 0:
        raise ValueError("need a nonzero rational")
    total = sum((fractional_part(x, p) for p in _primes_of(x.denominator)), Fraction(0))
    witness = total - x
    if witness.denominator != 1:
        raise AssertionError("fractional parts failed to cancel")
    return int(witness)


# -- discrete logarithms -----------------------------------------------------


@lru_cache(maxsize=128)
def _bsgs_table(g: int, mod: int, order: int) -> tuple[dict[int, int], int, int]:
    m = math.isqrt(order - 1) + 1 if order > 1 else 1
    if m > 10**6:
        raise ValueError("discrete-log table would exceed 10^6 entries")
    table, e = {}, 1
    for j in range(m):
        table.setdefault(e, j)
        e = e * g % mod
    giant = pow(g, -m, mod)
    return table, m, giant


def discrete_log(h: int, g: int, mod: int, order: int) -> int:
    """x in [0, order) with g^x = h mod `mod`, by baby-step giant-step."""
    table, m, giant = _bsgs_table(g, mod, order)
    y = h % mod
    for i in range(m + 1):
        j = table.get(y)
        if j is not None:
            return (i * m + j) % order
        y = y * giant % mod
    raise ValueError(f"{h} is not a power of {g} mod {mod}")


@lru_cache(maxsize=None)
def unit_generator(p: int) -> int:
    """Least primitive root mod p that stays primitive mod p^2 (odd p)."""
    if p == 2:
        raise ValueError("(Z/2^nZ)^x is not cyclic; use the pair (-1, 5)")
    for g in range(2, p * p):
        if g % p and is_primitive_root(g, p * p, p * (p - 1)):
            return g
    raise AssertionError("no primitive root found")


# -- multiplicative characters -----------------------------------------------


def _degree_odd(p: int, angle: RationalAngle) -> int:
    d = angle.order
    if d == 1:
        return 0
    return ord_p(d, p) + 1


def _degree_two(a_minus: RationalAngle, a_five: RationalAngle) -> int:
    if a_five.order == 1:
        return 0 if a_minus.order == 1 else 2
    return ord_p(a_five.order, 2) + 2


@dataclass(frozen=True)
class MultCharacter:
    """chi = |.|_p^s times a finite-order character of Z_p^x of degree n.

    For odd p the finite part is given by its value on the fixed generator
    ``unit_generator(p)``; for p = 2 by its values on -1 and 5.
    """

    p: int
    s: complex = 0j
    n: int = 0
    angle: RationalAngle = field(default_factory=RationalAngle)
    angle_minus: RationalAngle = field(default_factory=RationalAngle)

    def __post_init__(self):
        object.__setattr__(self, "s", complex(self.s))
        for name in ("angle", "angle_minus"):
            a = getattr(self, name)
            if not isinstance(a, RationalAngle):
                object.__setattr__(self, name, RationalAngle(Fraction(a)))
        p, n = self.p, self.n
        if p == 2:
            if self.angle_minus.theta not in (0, Fraction(1, 2)):
                raise ValueError("the value at -1 must be a sign")
            deg = _degree_two(self.angle_minus, self.angle)
        else:
            if self.angle_minus.theta:
                raise ValueError("angle_minus is only used for p = 2")
            if n >= 1 and ((p - 1) * p ** (n - 1)) % self.angle.order:
                raise ValueError("angle order does not divide (p-1)p^(n-1)")
            deg = _degree_odd(p, self.angle)
        if deg != n:
            raise ValueError(f"finite part has degree {deg}, not {n}")

    # constructors ---------------------------------------------------------

    @classmethod
    def unramified(cls, p: int, s: complex = 0j) -> "MultCharacter":
        return cls(p, s)

    @classmethod
    def from_angle(cls, p: int, angle, s: complex = 0j, angle_minus=0) -> "MultCharacter":
        """Infer the degree from the angle(s)."""
        angle = angle if isinstance(angle, RationalAngle) else RationalAngle(Fraction(angle))
        am = angle_minus if isinstance(angle_minus, RationalAngle) else RationalAngle(Fraction(angle_minus))
        n = _degree_two(am, angle) if p == 2 else _degree_odd(p, angle)
        return cls(p, s, n, angle, am)

    @classmethod
    def unitary(cls, p: int, n: int, angle=0, w: float = 0.0, angle_minus=0) -> "MultCharacter":
        """omega = (finite part) * |.|_p^(-i w)."""
        return cls(p, complex(0, -w), n, RationalAngle(Fraction(angle)), RationalAngle(Fraction(angle_minus)))

    @classmethod
    def legendre(cls, p: int, s: complex = 0j) -> "MultCharacter":
        return cls(p, s, 1, RationalAngle(Fraction(1, 2)))

    # derived characters ---------------------------------------------------

    @property
    def is_ramified(self) -> bool:
        return self.n > 0

    def with_s(self, s: complex) -> "MultCharacter":
        return MultCharacter(self.p, s, self.n, self.angle, self.angle_minus)

    def shift(self, s: complex) -> "MultCharacter":
        """chi * |.|^s."""
        return self.with_s(self.s + complex(s))

    def dual(self) -> "MultCharacter":
        """chi^(-1) |.|."""
        return MultCharacter(self.p, 1 - self.s, self.n, -self.angle, -self.angle_minus)

    def conj(self) -> "MultCharacter":
        return MultCharacter(self.p, self.s.conjugate(), self.n, -self.angle, -self.angle_minus)

    def finite_part(self) -> "MultCharacter":
        return self.with_s(0)

    # evaluation -----------------------------------------------------------

    def unit_angle(self, u) -> RationalAngle:
        """Exact value of the finite part at a p-adic unit (integer or rational)."""
        return mult_unit_angle(self, u)

    def value_at_p(self) -> complex:
        """chi(p) = p^(-s)."""
        return cmath.exp(-self.s * math.log(self.p))

    def to_json(self) -> dict:
        d = {"p": self.p, "s": [self.s.real, self.s.imag], "n": self.n, "generator_angle": str(self.angle.theta)}
        if self.p == 2:
            d["angle_minus_one"] = str(self.angle_minus.theta)
        return d

    @classmethod
    def from_json(cls, d: dict) -> "MultCharacter":
        s = d.get("s", [0, 0])
        return cls(
            int(d["p"]),
            complex(s[0], s[1]),
            int(d.get("n", 0)),
            RationalAngle(Fraction(d.get("generator_angle", "0"))),
            RationalAngle(Fraction(d.get("angle_minus_one", "0"))),
        )


def _unit_residue(u, p: int, n: int) -> int:
    if isinstance(u, PadicNumber):
        if u.is_zero or u.valuation != 0:
            raise ValueError("not a p-adic unit")
        if u.precision < n:
            raise PrecisionError(f"need {n} digits of the unit part")
        return u.unit % p**n
    u = Fraction(u)
    if u.numerator % p == 0 or u.denominator % p == 0:
        raise ValueError("not a p-adic unit")
    m = p**n
    return u.numerator * pow(u.denominator, -1, m) % m


def mult_unit_angle(chi: MultCharacter, u) -> RationalAngle:
    p, n = chi.p, chi.n
    if n == 0:
        _unit_residue(u, p, 1)
        return RationalAngle(0)
    r = _unit_residue(u, p, n)
    mod = p**n
    if p != 2:
        order = (p - 1) * p ** (n - 1)
        return chi.angle * discrete_log(r, unit_generator(p), mod, order)
    sign = 0
    if r % 4 == 3:
        sign, r = 1, (-r) % mod
    if n <= 2:
        return chi.angle_minus * sign
    k = discrete_log(r, 5, mod, 2 ** (n - 2))
    return chi.angle_minus * sign + chi.angle * k


def mult_eval(chi: MultCharacter, x) -> complex:
    """chi(x) = p^(-v(x) s) * (finite part)(u(x))."""
    if isinstance(x, PadicNumber):
        if x.is_zero:
            raise ValueError("characters of Q_p^x are not defined at 0")
        v, u = x.valuation, x.unit_part()
    else:
        x = Fraction(x)
        if x == 0:
            raise ValueError("characters of Q_p^x are not defined at 0")
        v = ord_p_rational(x, chi.p)
        u = x / Fraction(chi.p) ** v
    ang = mult_unit_angle(chi, u)
    return cmath.exp(-v * chi.s * math.log(chi.p)) * ang.to_complex()


def chi_minus_one(chi: MultCharacter) -> int:
    a = mult_unit_angle(chi, -1)
    return 1 if a.theta == 0 else -1


def enumerate_degree(p: int, n: int) -> int:
    """Number of characters of (Z/p^nZ)^x of exact degree n (odd p)."""
    if p == 2:
        raise ValueError("the closed count is stated for odd p")
    if n < 1:
        raise ValueError("n must be at least 1")
    if n == 1:
        return p - 2
    return p ** (n - 2) * (p - 1) ** 2


def enumerate_characters(p: int, n: int, s: complex = 0j) -> Iterator[MultCharacter]:
    """All characters of exact degree n (finite part), in a fixed order."""
    if n == 0:
        yield MultCharacter(p, s)
        return
    if p != 2:
        order = (p - 1) * p ** (n - 1)
        for a in range(order):
            ang = RationalAngle(Fraction(a, order))
            if _degree_odd(p, ang) == n:
                yield MultCharacter(p, s, n, ang)
        return
    order5 = 2 ** max(n - 2, 0)
    for sign in (0, Fraction(1, 2)):
        for a in range(order5):
            ang = RationalAngle(Fraction(a, order5))
            if _degree_two(RationalAngle(sign), ang) == n:
                yield MultCharacter(2, s, n, ang, RationalAngle(sign))
