"""Exact roots of unity and rational linear combinations of them.

Elements of Q(mu_infinity) are kept in a normal form that does not depend on
any ambient order: every angle a/N is split by CRT into prime-power parts,
and each part exp(2 pi i b/q), q = l^k, is written in the basis
{b = j*l^(k-1) + r : 0 <= j <= l-2, 0 <= r < l^(k-1)}.  Two elements are
equal iff their normal-form dictionaries are equal.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product

from gmpy2 import mpq

_MPQ = type(mpq(0))


@dataclass(frozen=True, order=True)
class RationalAngle:
    """exp(2 pi i theta) with theta an exact rational taken mod 1."""

    theta: Fraction

    def __init__(self, theta=0):
        object.__setattr__(self, "theta", Fraction(theta) % 1)

    def __add__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle(self.theta + other.theta)

    def __sub__(self, other: "RationalAngle") -> "RationalAngle":
        return RationalAngle(self.theta - other.theta)

    def __neg__(self) -> "RationalAngle":
        return RationalAngle(-self.theta)

    def __mul__(self, k: int) -> "RationalAngle":
        return RationalAngle(self.theta * k)

    __rmul__ = __mul__

    @property
    def order(self) -> int:
        return self.theta.denominator

    def to_complex(self) -> complex:
        return _root_of_unity(self.theta)

    def __str__(self) -> str:
        return str(self.theta)

    @classmethod
    def parse(cls, text: str) -> "RationalAngle":
        return cls(Fraction(text))


@lru_cache(maxsize=65536)
def _root_of_unity(theta: Fraction) -> complex:
    # exact values on the axes keep cancellations clean
    q = theta * 4
    if q.denominator == 1:
        return (1 + 0j, 1j, -1 + 0j, -1j)[int(q) % 4]
    return cmath.exp(2j * math.pi * float(theta))


def _factor(n: int) -> list[tuple[int, int]]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            k = 0
            while n % d == 0:
                n //= d
                k += 1
            out.append((d, k))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


Key = tuple  # (numerator, denominator) of an angle in [0, 1), in lowest terms


def _key(theta) -> Key:
    if type(theta) is tuple:
        return theta
    if isinstance(theta, RationalAngle):
        theta = theta.theta
    theta = Fraction(theta) % 1
    return (theta.numerator, theta.denominator)


def _add_keys(a: Key, b: Key) -> Key:
    n = a[0] * b[1] + b[0] * a[1]
    d = a[1] * b[1]
    g = math.gcd(n, d)
    n, d = n // g, d // g
    return (n % d, d)


@lru_cache(maxsize=1 << 18)
def _basis_expansion(key: Key) -> tuple[tuple[Key, int], ...]:
    """exp(2 pi i a/n) as a signed sum of normal-form basis angles."""
    a, n = key
    if n == 1:
        return (((0, 1), 1),)
    parts = []
    for ell, k in _factor(n):
        q = ell**k
        rest = n // q
        # component b/q with b = a * rest^-1 mod q
        b = a * pow(rest, -1, q) % q
        step = q // ell
        j, r = divmod(b, step)
        if j < ell - 1:
            parts.append((((b, q), 1),))
        else:
            parts.append(tuple(((jj * step + r, q), -1) for jj in range(ell - 1)))
    out: dict[Key, int] = {}
    for combo in product(*parts):
        ang = (0, 1)
        sign = 1
        for kk, sg in combo:
            ang = _add_keys(ang, kk)
            sign *= sg
        out[ang] = out.get(ang, 0) + sign
    return tuple((k, v) for k, v in out.items() if v)


@lru_cache(maxsize=1 << 16)
def _root_of_unity_key(key: Key) -> complex:
    a, n = key
    if 4 % n == 0:
        return (1 + 0j, 1j, -1 + 0j, -1j)[a * (4 // n) % 4]
    return cmath.exp(2j * math.pi * a / n)


class Cyclotomic:
    """A finite sum sum_j c_j exp(2 pi i theta_j) with rational c_j."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms=None, *, _normal: bool = False):
        if _normal:
            self.terms = terms if terms is not None else {}
        else:
            acc: dict[Key, mpq] = {}
            for ang, c in (terms or {}).items():
                _accumulate(acc, _key(ang), _q(c))
            self.terms = acc
        self._hash = None

    @classmethod
    def rational(cls, c) -> "Cyclotomic":
        c = _q(c)
        return cls({(0, 1): c}, _normal=True) if c else cls()

    @classmethod
    def root(cls, angle, coeff=1) -> "Cyclotomic":
        acc: dict[Key, mpq] = {}
        _accumulate(acc, _key(angle), _q(coeff))
        return cls(acc, _normal=True)

    @classmethod
    def sum_of(cls, items) -> "Cyclotomic":
        acc: dict[Key, mpq] = {}
        for ang, c in items:
            _accumulate(acc, _key(ang), _q(c))
        return cls(acc, _normal=True)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Cyclotomic):
            if isinstance(other, (int, Fraction, _MPQ)):
                other = Cyclotomic.rational(other)
            else:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset((k, (v.numerator, v.denominator)) for k, v in self.terms.items()))
        return self._hash

    def __add__(self, other) -> "Cyclotomic":
        other = _coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        acc = dict(self.terms)
        for k, v in other.terms.items():
            cur = acc.get(k)
            if cur is None:
                acc[k] = v
                continue
            s = cur + v
            if s:
                acc[k] = s
            else:
                del acc[k]
        return Cyclotomic(acc, _normal=True)

    __radd__ = __add__

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic({k: -v for k, v in self.terms.items()}, _normal=True)

    def __sub__(self, other) -> "Cyclotomic":
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Cyclotomic":
        return _coerce(other) - self

    def scale(self, c) -> "Cyclotomic":
        c = _q(c)
        if not c:
            return Cyclotomic()
        if c == 1:
            return self
        return Cyclotomic({k: v * c for k, v in self.terms.items()}, _normal=True)

    def rotate(self, angle) -> "Cyclotomic":
        """Multiply by exp(2 pi i angle)."""
        a, b = angle if type(angle) is tuple else _key(angle)
        if a == 0:
            return self
        acc: dict[Key, mpq] = {}
        _rotate_into(acc, self.terms, a, b)
        return Cyclotomic(acc, _normal=True)

    @classmethod
    def combine(cls, pairs) -> "Cyclotomic":
        """Sum of c.rotate(angle) over (c, angle) pairs, accumulated in one dict."""
        acc: dict[Key, mpq] = {}
        for c, angle in pairs:
            a, b = angle if type(angle) is tuple else _key(angle)
            _rotate_into(acc, c.terms, a, b)
        return cls(acc, _normal=True)

    def __mul__(self, other) -> "Cyclotomic":
        if isinstance(other, RationalAngle):
            return self.rotate(other)
        if isinstance(other, (int, Fraction, _MPQ)):
            return self.scale(other)
        other = _coerce(other)
        acc: dict[Key, mpq] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                _accumulate(acc, _add_keys(k1, k2), v1 * v2)
        return Cyclotomic(acc, _normal=True)

    __rmul__ = __mul__

    def conjugate(self) -> "Cyclotomic":
        acc: dict[Key, mpq] = {}
        for (n, d), v in self.terms.items():
            _accumulate(acc, ((-n) % d, d), v)
        return Cyclotomic(acc, _normal=True)

    def to_complex(self) -> complex:
        vals = [(float(v), _root_of_unity_key(k)) for k, v in self.terms.items()]
        re = math.fsum(c * z.real for c, z in vals)
        im = math.fsum(c * z.imag for c, z in vals)
        return complex(re, im)

    __complex__ = to_complex

    def as_rational(self) -> Fraction | None:
        if not self.terms:
            return Fraction(0)
        if set(self.terms) == {(0, 1)}:
            return Fraction(self.terms[(0, 1)])
        return None

    def as_root(self) -> tuple[Fraction, RationalAngle] | None:
        """(c, angle) when the element is a single scaled root of unity."""
        if len(self.terms) == 1:
            (k, v), = self.terms.items()
            return Fraction(v), RationalAngle(Fraction(*k))
        return None

    def items(self):
        """(angle as Fraction, coefficient) pairs in a fixed order."""
        return [(Fraction(*k), Fraction(v)) for k, v in sorted(self.terms.items(), key=lambda kv: Fraction(*kv[0]))]

    def to_json(self) -> list:
        return [[str(a), str(c)] for a, c in self.items()]

    @classmethod
    def from_json(cls, data) -> "Cyclotomic":
        if isinstance(data, (int, float, str)) and not isinstance(data, bool):
            return cls.rational(Fraction(str(data)))
        return cls.sum_of((Fraction(a), mpq(c)) for a, c in data)

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*e({a})" if a else f"{c}" for a, c in self.items())


def _rotate_into(acc: dict, terms: dict, a: int, b: int) -> None:
    gcd = math.gcd
    for (n, d), v in terms.items():
        num = n * b + a * d
        den = d * b
        g = gcd(num, den)
        den //= g
        for ang, sign in _basis_expansion((num // g % den, den)):
            cur = acc.get(ang)
            if cur is None:
                acc[ang] = v if sign == 1 else -v
                continue
            s = cur + v if sign == 1 else cur - v
            if s:
                acc[ang] = s
            else:
                del acc[ang]


def _accumulate(acc: dict, key: Key, c) -> None:
    if not c:
        return
    for ang, sign in _basis_expansion(key):
        cur = acc.get(ang)
        if cur is None:
            acc[ang] = c if sign == 1 else -c
            continue
        s = cur + c if sign == 1 else cur - c
        if s:
            acc[ang] = s
        else:
            del acc[ang]


def _coerce(x) -> Cyclotomic:
    if isinstance(x, Cyclotomic):
        return x
    if isinstance(x, RationalAngle):
        return Cyclotomic.root(x)
    if isinstance(x, (int, Fraction, _MPQ)):
        return Cyclotomic.rational(x)
    raise TypeError(f"cannot treat {type(x).__name__} as an exact cyclotomic number")


def _q(c):
    if isinstance(c, float):
        raise TypeError("float coefficients are not exact")
    return mpq(c)
