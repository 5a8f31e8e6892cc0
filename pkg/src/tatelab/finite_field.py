"""Finite fields F_{p^m}, Frobenius, norm and trace, and the map rec_q.

F_{p^m} is F_p[X] / (f) for the lexicographically least monic irreducible f
of degree m, where polynomials are compared by their coefficient sequence
from the top degree down.  Elements are stored as integers
c_0 + c_1 p + ... + c_{m-1} p^(m-1); fields up to TABLE_LIMIT elements also
get log / exp tables.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .padic import _prime_factors

TABLE_LIMIT = 1 << 16
ENUMERATION_BOUND = 10**4


class EnumerationBoundError(ValueError):
    pass


# -- polynomials over F_p as little-endian coefficient lists ---------------------------------


def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], f: list[int], p: int) -> list[int]:
    a = _trim([c % p for c in a])
    m = len(f) - 1
    inv = pow(f[-1], -1, p)
    while len(a) > m:
        c = a[-1] * inv % p
        shift = len(a) - 1 - m
        for i, fc in enumerate(f):
            a[shift + i] = (a[shift + i] - c * fc) % p
        _trim(a)
    return a


def _poly_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return [c % p for c in out]


def _poly_mulmod(a, b, f, p):
    return _poly_mod(_poly_mul(a, b, p), f, p)


def _poly_powmod(a: list[int], e: int, f: list[int], p: int) -> list[int]:
    result, base = [1], _poly_mod(list(a), f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    return result


def _poly_sub(a, b, p):
    n = max(len(a), len(b))
    return _trim([((a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0)) % p for i in range(n)])


def _poly_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _poly_mod(a, b, p)
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def is_irreducible(f: list[int], p: int) -> bool:
    """Rabin's test for a monic f of degree m."""
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    x = [0, 1]
    if _poly_sub(_poly_powmod(x, p**m, f, p), x, p):
        return False
    for r in _prime_factors(m):
        h = _poly_sub(_poly_powmod(x, p ** (m // r), f, p), x, p)
        if len(_poly_gcd(f, h, p)) > 1:
            return False
    return True


@lru_cache(maxsize=None)
def least_irreducible(p: int, m: int) -> tuple[int, ...]:
    """Least monic irreducible of degree m (top coefficients compared first)."""
    for tail in product(range(p), repeat=m):
        f = list(reversed(tail)) + [1]
        if f[0] == 0 and m > 1:
            continue
        if is_irreducible(f, p):
            return tuple(f)
    raise ArithmeticError(f"no irreducible polynomial of degree {m} over F_{p}")


# -- fields --------------------------------------------------------------------------------


class FiniteField:
    def __init__(self, p: int, m: int = 1):
        if p < 2 or _prime_factors(p) != [p]:
            raise ValueError(f"{p} is not prime")
        if m < 1:
            raise ValueError("degree must be at least 1")
        self.p, self.m = p, m
        self.size = p**m
        self.modulus = least_irreducible(p, m)
        self._log: list[int] | None = None
        self._exp: list[int] | None = None
        self._gen: int | None = None
        if self.size <= TABLE_LIMIT:
            self._build_tables()

    # encoding
    def to_coeffs(self, a: int) -> list[int]:
        out = []
        for _ in range(self.m):
            a, r = divmod(a, self.p)
            out.append(r)
        return _trim(out)

    def from_coeffs(self, c) -> int:
        c = _poly_mod(list(c), list(self.modulus), self.p)
        return sum(x * self.p**i for i, x in enumerate(c))

    def _mul_poly(self, a: int, b: int) -> int:
        return self.from_coeffs(_poly_mul(self.to_coeffs(a), self.to_coeffs(b), self.p))

    def _order_divides(self, a: int, d: int) -> bool:
        return self._pow_poly(a, d) == 1

    def _pow_poly(self, a: int, e: int) -> int:
        return self.from_coeffs(_poly_powmod(self.to_coeffs(a), e, list(self.modulus), self.p))

    def generator(self) -> int:
        """Least element (by encoding) generating the multiplicative group."""
        if self._gen is None:
            n = self.size - 1
            for g in range(1, self.size):
                if all(not self._order_divides(g, n // r) for r in _prime_factors(n)):
                    self._gen = g
                    break
            if self.size == 2:
                self._gen = 1
        return self._gen

    def _build_tables(self):
        g = self.generator()
        n = self.size - 1
        exp = [0] * n
        log = [0] * self.size
        x = 1
        for k in range(n):
            exp[k] = x
            log[x] = k
            x = self._mul_poly(x, g)
        self._exp, self._log = exp, log

    # arithmetic on encodings
    def add(self, a: int, b: int) -> int:
        ca, cb = self.to_coeffs(a), self.to_coeffs(b)
        n = max(len(ca), len(cb))
        return sum(((ca[i] if i < len(ca) else 0) + (cb[i] if i < len(cb) else 0)) % self.p * self.p**i for i in range(n))

    def neg(self, a: int) -> int:
        return sum((-c) % self.p * self.p**i for i, c in enumerate(self.to_coeffs(a)))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self._log is not None:
            return self._exp[(self._log[a] + self._log[b]) % (self.size - 1)]
        return self._mul_poly(a, b)

    def power(self, a: int, e: int) -> int:
        if a == 0:
            if e < 0:
                raise ZeroDivisionError("0 has no inverse")
            return 1 if e == 0 else 0
        if self._log is not None:
            return self._exp[self._log[a] * e % (self.size - 1)]
        return self._pow_poly(a, e % (self.size - 1))

    def inv(self, a: int) -> int:
        return self.power(a, -1)

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("0 has no discrete log")
        if self._log is None:
            raise ValueError("no log table for a field this large")
        return self._log[a]

    def element(self, a) -> "FqElement":
        if isinstance(a, (list, tuple)):
            a = self.from_coeffs(a)
        return FqElement(self, a % self.size)

    def elements(self):
        return (FqElement(self, a) for a in range(self.size))

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.m) == (other.p, other.m)

    def __hash__(self) -> int:
        return hash((self.p, self.m))

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})"


@lru_cache(maxsize=64)
def field(p: int, m: int = 1) -> FiniteField:
    return FiniteField(p, m)


@dataclass(frozen=True)
class FqElement:
    field: FiniteField
    value: int

    def _same(self, other) -> int:
        if isinstance(other, FqElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        return self.field.from_coeffs([int(other)])

    def __add__(self, other) -> "FqElement":
        return FqElement(self.field, self.field.add(self.value, self._same(other)))

    __radd__ = __add__

    def __neg__(self) -> "FqElement":
        return FqElement(self.field, self.field.neg(self.value))

    def __sub__(self, other) -> "FqElement":
        return self + (-FqElement(self.field, self._same(other)))

    def __mul__(self, other) -> "FqElement":
        return FqElement(self.field, self.field.mul(self.value, self._same(other)))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "FqElement":
        return FqElement(self.field, self.field.power(self.value, e))

    def inverse(self) -> "FqElement":
        return FqElement(self.field, self.field.inv(self.value))

    def __truediv__(self, other) -> "FqElement":
        return self * FqElement(self.field, self._same(other)).inverse()

    @property
    def coeffs(self) -> list[int]:
        c = self.field.to_coeffs(self.value)
        return c + [0] * (self.field.m - len(c))

    def is_zero(self) -> bool:
        return self.value == 0

    def __repr__(self) -> str:
        return f"{self.field!r}{self.coeffs}"


# -- Frobenius, norm, trace --------------------------------------------------------------------


def _check_q(F: FiniteField, q: int) -> int:
    """Degree f of F_q as a subfield of F, for q = p^f with f | m."""
    f, r = 0, q
    while r % F.p == 0:
        r //= F.p
        f += 1
    if r != 1 or f == 0 or F.m % f:
        raise ValueError(f"F_{q} is not a subfield of {F!r}")
    return f


def frobenius(x: FqElement, q: int) -> FqElement:
    _check_q(x.field, q)
    return x**q


def frobenius_power(x: FqElement, q: int, k: int) -> FqElement:
    _check_q(x.field, q)
    return x ** (q ** (k % (x.field.m // _check_q(x.field, q))))


def norm(x: FqElement, q: int) -> FqElement:
    """N(x) = x^((q^n - 1)/(q - 1)) for F = F_{q^n}."""
    n = x.field.m // _check_q(x.field, q)
    return x ** ((q**n - 1) // (q - 1))


def trace(x: FqElement, q: int) -> FqElement:
    n = x.field.m // _check_q(x.field, q)
    acc, y = x.field.element(0), x
    for _ in range(n):
        acc = acc + y
        y = y**q
    return acc


def norm_by_conjugates(x: FqElement, q: int) -> FqElement:
    n = x.field.m // _check_q(x.field, q)
    acc, y = x.field.element(1), x
    for _ in range(n):
        acc = acc * y
        y = y**q
    return acc


def subfield_elements(F: FiniteField, q: int) -> list[FqElement]:
    """The copy of F_q inside F: fixed points of x -> x^q."""
    _check_q(F, q)
    return [x for x in F.elements() if x**q == x]


def frobenius_order(p: int, f: int, n: int, bound: int = ENUMERATION_BOUND) -> int:
    """Least k >= 1 with x^(q^k) = x for every x in F_{q^n}, q = p^f, by enumeration."""
    F = _bounded_field(p, f * n, bound)
    q = p**f
    elems = list(F.elements())
    images = elems
    for k in range(1, n + 1):
        images = [y**q for y in images]
        if images == elems:
            return k
    raise ArithmeticError("Frobenius order exceeds the extension degree")


def fixed_point_count(p: int, f: int, n: int, d: int, bound: int = ENUMERATION_BOUND) -> int:
    """Number of x in F_{q^n} fixed by the d-th Frobenius power."""
    F = _bounded_field(p, f * n, bound)
    qd = p ** (f * d)
    return sum(1 for x in F.elements() if x**qd == x)


def _bounded_field(p: int, m: int, bound: int) -> FiniteField:
    if p**m > bound:
        raise EnumerationBoundError(f"{p}^{m} exceeds the enumeration bound {bound}")
    return field(p, m)


@dataclass(frozen=True)
class SurjectivityReport:
    surjective: bool
    image_size: int
    target_size: int
    fibre_sizes: tuple


def norm_surjectivity_check(p: int, f: int, n: int, bound: int = ENUMERATION_BOUND) -> SurjectivityReport:
    F = _bounded_field(p, f * n, bound)
    q = p**f
    counts: dict[int, int] = {}
    for a in range(1, F.size):
        y = norm(FqElement(F, a), q)
        counts[y.value] = counts.get(y.value, 0) + 1
    target = {x.value for x in subfield_elements(F, q) if x.value}
    ok = set(counts) == target
    return SurjectivityReport(ok, len(counts), len(target), tuple(sorted(counts.values())))


def embed(small: FiniteField, big: FiniteField) -> FqElement:
    """Image of the class of X under an embedding small -> big: a root of small's modulus."""
    if small.p != big.p or big.m % small.m:
        raise ValueError(f"{small!r} does not embed in {big!r}")
    g = big.generator()
    step = (big.size - 1) // (small.size - 1)
    f = small.modulus
    # the subfield is 0 together with the powers of g^step
    candidates = [0] + [big.power(g, step * k) for k in range(small.size - 1)]
    for c in candidates:
        x = FqElement(big, c)
        acc = big.element(0)
        for coeff in reversed(f):
            acc = acc * x + coeff
        if acc.is_zero():
            return x
    raise ArithmeticError("no root found")


# -- the Galois group and rec_q --------------------------------------------------------------------


@dataclass(frozen=True)
class GaloisElement:
    """sigma_{q,n}^k in Gal(F_{q^n}/F_q)."""

    n: int
    k: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        object.__setattr__(self, "k", self.k % self.n)

    def __mul__(self, other: "GaloisElement") -> "GaloisElement":
        if other.n != self.n:
            raise ValueError("elements of different Galois groups")
        return GaloisElement(self.n, self.k + other.k)

    def inverse(self) -> "GaloisElement":
        return GaloisElement(self.n, -self.k)

    def restrict(self, m: int) -> "GaloisElement":
        """Image under Gal(F_{q^n}/F_q) -> Gal(F_{q^m}/F_q) for m | n."""
        if self.n % m:
            raise ValueError(f"{m} does not divide {self.n}")
        return GaloisElement(m, self.k)

    def apply(self, x: FqElement, q: int) -> FqElement:
        return x ** (q**self.k)

    @property
    def is_identity(self) -> bool:
        return self.k == 0


def rec_q(k: int, n: int) -> GaloisElement:
    """1 -> Frobenius, at the finite level n."""
    return GaloisElement(n, k)


def rec_compatible(k: int, n: int, m: int) -> bool:
    return rec_q(k, n).restrict(m) == rec_q(k, m)
