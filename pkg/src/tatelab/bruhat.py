"""Bruhat functions on Q_p: finite sums of twisted coset indicators.

A term (c, tw, x, n) is the function t -> c * chi_p(tw * t) on x + p^n Z_p.
Coefficients are exact cyclotomic numbers, so the Fourier transform and all
Haar integrals below are exact.

Canonical form: the support is cut into the maximal cosets C on which f
equals c * chi_p(tw * .) for a single character.  Such cosets are disjoint
and unique, every coset carries a reduced twist (mod p^-n) and a canonical
center in [0, p^n), so two functions agree iff their canonical term sets
agree.
"""

from __future__ import annotations

import cmath
import json
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .characters import MultCharacter, chi_p, mult_unit_angle, reduce_mod
from .cyclotomic import Cyclotomic, RationalAngle
from .padic import ord_p_rational

MAX_TERMS = 10**5


class TermLimitError(RuntimeError):
    pass


class DivergenceError(ValueError):
    pass


def _val(x: Fraction, p: int) -> float:
    return math.inf if x == 0 else ord_p_rational(x, p)


@dataclass(frozen=True)
class BruhatTerm:
    coeff: Cyclotomic
    twist: Fraction
    center: Fraction
    level: int

    def normalized(self, p: int) -> "BruhatTerm":
        center = reduce_mod(self.center, p, self.level)
        twist = reduce_mod(self.twist, p, -self.level)
        coeff = self.coeff
        if twist != self.twist:
            coeff = coeff.rotate(chi_p(p, (self.twist - twist) * center))
        return BruhatTerm(coeff, twist, center, self.level)

    def contains(self, t: Fraction, p: int) -> bool:
        return _val(Fraction(t) - self.center, p) >= self.level


def term(coeff, twist, center, level) -> BruhatTerm:
    c = coeff if isinstance(coeff, Cyclotomic) else Cyclotomic.rational(Fraction(coeff))
    return BruhatTerm(c, Fraction(twist), Fraction(center), int(level))


class BruhatFunction:
    __slots__ = ("p", "terms", "is_canonical")

    def __init__(self, p: int, terms: Iterable[BruhatTerm] = (), *, _canonical: bool = False):
        self.p = p
        self.terms = tuple(terms)
        self.is_canonical = _canonical
        if len(self.terms) > MAX_TERMS:
            raise TermLimitError(f"more than {MAX_TERMS} terms")

    # constructors ---------------------------------------------------------

    @classmethod
    def indicator(cls, p: int, center=0, level=0, coeff=1, twist=0) -> "BruhatFunction":
        return cls(p, [term(coeff, twist, center, level)])

    @classmethod
    def units(cls, p: int) -> "BruhatFunction":
        return cls.indicator(p) - cls.indicator(p, 0, 1)

    # algebra --------------------------------------------------------------

    def __add__(self, other: "BruhatFunction") -> "BruhatFunction":
        if other.p != self.p:
            raise ValueError("prime mismatch")
        return BruhatFunction(self.p, self.terms + other.terms)

    def scale(self, c) -> "BruhatFunction":
        c = c if isinstance(c, Cyclotomic) else Cyclotomic.rational(Fraction(c))
        return BruhatFunction(self.p, [BruhatTerm(t.coeff * c, t.twist, t.center, t.level) for t in self.terms])

    def __neg__(self) -> "BruhatFunction":
        return self.scale(-1)

    def __sub__(self, other: "BruhatFunction") -> "BruhatFunction":
        return self + (-other)

    def __rmul__(self, c) -> "BruhatFunction":
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BruhatFunction):
            return NotImplemented
        return self.p == other.p and canonicalize(self).terms == canonicalize(other).terms

    def __hash__(self) -> int:
        return hash((self.p, canonicalize(self).terms))

    def is_zero(self) -> bool:
        return not canonicalize(self).terms

    def __repr__(self) -> str:
        return f"BruhatFunction(p={self.p}, terms={list(self.terms)!r})"

    # evaluation -----------------------------------------------------------

    def __call__(self, t) -> Cyclotomic:
        return evaluate(self, t)

    # serialization --------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "terms": [
                {"coeff": t.coeff.to_json(), "twist": str(t.twist), "center": str(t.center), "level": t.level}
                for t in self.terms
            ],
        }

    @classmethod
    def from_json(cls, data) -> "BruhatFunction":
        if isinstance(data, str):
            data = json.loads(data)
        p = int(data["p"])
        terms = [
            BruhatTerm(
                Cyclotomic.from_json(t.get("coeff", 1)),
                Fraction(str(t.get("twist", 0))),
                Fraction(str(t.get("center", 0))),
                int(t["level"]),
            )
            for t in data["terms"]
        ]
        return cls(p, terms)


# -- canonical form ------------------------------------------------------------
#
# The working representation scales every center and twist by p^E so that
# all of them are integers; reductions become integer remainders and the
# angles chi_p(a*b) are read off from a single product.


class _Scaled:
    def __init__(self, p: int, E: int):
        self.p, self.E = p, E
        self._pows = [p**k for k in range(2 * E + 3)]
        # every angle chi_p(a*b) here is a multiple of 1/m; phases are kept as integers mod m
        self.m = self._pows[2 * E]

    def pw(self, k: int) -> int:
        return self._pows[k] if k < len(self._pows) else self.p**k

    def center(self, X: int, level: int) -> int:
        k = level + self.E
        return X % self._pows[k] if k > 0 else 0

    def twist(self, T: int, level: int) -> int:
        k = self.E - level
        return T % self._pows[k] if k > 0 else 0

    def angle(self, a: int, b: int) -> tuple[int, int]:
        return (a * b % self.m, self.m)

    def restrict(self, phase: int, T: int, X: int, level: int):
        """Reduce the twist of c*chi(T t) on the coset (X, level); the
        coefficient change is folded into the pending phase."""
        T2 = self.twist(T, level)
        if T2 != T:
            phase = (phase + (T - T2) * X) % self.m
        return phase, T2


def _resolve(sc: _Scaled, X: int, level: int, terms: list, out: list) -> None:
    # terms are (coeff, pending phase, twist, center, level); rotations are
    # applied only where coefficients have to be compared or emitted
    m = sc.m
    full: dict[int, list] = {}
    finer = []
    for t in terms:
        if t[4] == level:
            full.setdefault(t[2], []).append(t)
        else:
            finer.append(t)
    for tw in list(full):
        group = full[tw]
        if len(group) > 1:
            c = Cyclotomic.combine((g[0], (g[1], m)) for g in group)
            if c:
                full[tw] = [(c, 0, tw, X, level)]
            else:
                del full[tw]
    if not finer:
        if not full:
            return
        if len(full) == 1:
            (t,), = full.values()
            out.append((t[0].rotate((t[1], m)), t[2], X, level))
            return
    if len(out) > MAX_TERMS:
        raise TermLimitError(f"canonical form exceeds {MAX_TERMS} terms")
    step = sc.pw(level + sc.E)
    groups: dict[int, list] = defaultdict(list)
    for t in finer:
        groups[sc.center(t[3], level + 1)].append(t)
    tops = [g[0] for g in full.values()]
    for j in range(sc.p):
        child = X + j * step
        bucket = groups.get(child, [])
        if not bucket and not tops:
            continue
        for c, ph, tw, _, _ in tops:
            ph2, tw2 = sc.restrict(ph, tw, child, level + 1)
            bucket.append((c, ph2, tw2, child, level + 1))
        _resolve(sc, child, level + 1, bucket, out)


def _try_merge(sc: _Scaled, level: int, children: list):
    """Single-character form on a parent coset at `level`, or None."""
    base = children[0][1]
    if any(tw != base for _, tw, _ in children):
        return None
    k = sc.E - level - 1
    candidates = [base + j * sc.pw(k) for j in range(sc.p)] if k >= 0 else [base]
    # floating values only rule candidates out; a surviving one is confirmed exactly
    zs = [c.to_complex() for _, _, c in children]
    tol = 1e-9 * (1 + max(abs(z) for z in zs))
    m = sc.pw(2 * sc.E)
    for tw in candidates:
        ref = None
        for (X, _, _), z in zip(children, zs):
            w = z * cmath.exp(2j * math.pi * ((base - tw) * X % m) / m)
            if ref is None:
                ref = w
            elif abs(w - ref) > tol:
                break
        else:
            first = None
            for X, _, c in children:
                c2 = c.rotate(sc.angle(base - tw, X))
                if first is None:
                    first = c2
                elif c2 != first:
                    break
            else:
                return tw, first
    return None


def _merge(sc: _Scaled, leaves: list) -> list:
    by_level: dict[int, dict[int, tuple[int, Cyclotomic]]] = defaultdict(dict)
    for c, tw, X, lv in leaves:
        by_level[lv][X] = (tw, c)
    if not by_level:
        return []
    level = max(by_level)
    while level >= min(by_level):
        current = by_level.get(level, {})
        parents: dict[int, list[int]] = defaultdict(list)
        for X in current:
            parents[sc.center(X, level - 1)].append(X)
        for parent, kids in parents.items():
            if len(kids) != sc.p:
                continue
            merged = _try_merge(sc, level - 1, [(X, *current[X]) for X in kids])
            if merged is None:
                continue
            for X in kids:
                del current[X]
            by_level[level - 1][parent] = merged
        level -= 1
    return [(c, tw, X, lv) for lv, cells in by_level.items() for X, (tw, c) in cells.items()]


def _p_exponent(d: int, p: int) -> int:
    k = 0
    while d % p == 0:
        d //= p
        k += 1
    return k


def canonicalize(f: BruhatFunction) -> BruhatFunction:
    """Maximal single-character coset form; pointwise values are unchanged."""
    if f.is_canonical:
        return f
    p = f.p
    terms = [t for t in f.terms if t.coeff]
    if not terms:
        return BruhatFunction(p, (), _canonical=True)
    E = 0
    for t in terms:
        # merges up to level L can need twists with denominator p^L
        E = max(E, -t.level, t.level, _p_exponent(t.center.denominator, p), _p_exponent(t.twist.denominator, p))
    sc = _Scaled(p, E)
    P = sc.pw(E)
    items = []
    for t in terms:
        c, w = t.center, t.twist
        if P % c.denominator == 0 and P % w.denominator == 0:
            X = sc.center(c.numerator * (P // c.denominator), t.level)
            phase, T = sc.restrict(0, w.numerator * (P // w.denominator), X, t.level)
            items.append((t.coeff, phase, T, X, t.level))
        else:
            t = t.normalized(p)
            items.append((t.coeff, 0, int(t.twist * P), int(t.center * P), t.level))
    items.sort(key=lambda t: t[4])
    roots: list[tuple[int, int]] = []
    grouped: dict[tuple[int, int], list] = defaultdict(list)
    for t in items:
        for X, lv in roots:
            if sc.center(t[3], lv) == X:
                grouped[(X, lv)].append(t)
                break
        else:
            roots.append((t[3], t[4]))
            grouped[(t[3], t[4])].append(t)
    leaves: list = []
    for (X, lv), bucket in grouped.items():
        _resolve(sc, X, lv, bucket, leaves)
    merged = sorted(_merge(sc, leaves), key=lambda t: (t[3], t[2], t[1]))
    out = [BruhatTerm(c, Fraction(tw, P), Fraction(X, P), lv) for c, tw, X, lv in merged]
    return BruhatFunction(p, out, _canonical=True)


def equals(f: BruhatFunction, g: BruhatFunction) -> bool:
    return f == g


# -- pointwise operations ------------------------------------------------------


def evaluate(f: BruhatFunction, t) -> Cyclotomic:
    t = Fraction(t)
    acc = Cyclotomic()
    for tm in f.terms:
        if tm.contains(t, f.p):
            acc = acc + tm.coeff.rotate(chi_p(f.p, tm.twist * t))
    return acc


def fourier(f: BruhatFunction) -> BruhatFunction:
    """f^(y) = integral of f(t) chi_p(y t) dt, in canonical form."""
    p = f.p
    out = []
    for t in f.terms:
        c = t.coeff.rotate(chi_p(p, t.twist * t.center)).scale(Fraction(p) ** (-t.level))
        out.append(BruhatTerm(c, t.center, -t.twist, -t.level))
    return canonicalize(BruhatFunction(p, out))


def reflect(f: BruhatFunction) -> BruhatFunction:
    """x -> f(-x)."""
    return BruhatFunction(f.p, [BruhatTerm(t.coeff, -t.twist, -t.center, t.level) for t in f.terms])


def conj(f: BruhatFunction) -> BruhatFunction:
    return BruhatFunction(f.p, [BruhatTerm(t.coeff.conjugate(), -t.twist, t.center, t.level) for t in f.terms])


def scale_argument(f: BruhatFunction, a) -> BruhatFunction:
    """x -> f(x / a)."""
    a = Fraction(a)
    va = ord_p_rational(a, f.p)
    return BruhatFunction(f.p, [BruhatTerm(t.coeff, t.twist / a, t.center * a, t.level + va) for t in f.terms])


def multiply_character(f: BruhatFunction, y) -> BruhatFunction:
    """x -> f(x) chi_p(y x)."""
    y = Fraction(y)
    return BruhatFunction(f.p, [BruhatTerm(t.coeff, t.twist + y, t.center, t.level) for t in f.terms])


# -- additive Haar measure -----------------------------------------------------


def _coset_character_integral(p: int, twist: Fraction, center: Fraction, level: int) -> Cyclotomic:
    """Integral of chi_p(twist t) over center + p^level Z_p."""
    if _val(twist, p) < -level:
        return Cyclotomic()
    return Cyclotomic.root(chi_p(p, twist * center), Fraction(p) ** (-level))


def integrate_additive(f: BruhatFunction) -> Cyclotomic:
    acc = Cyclotomic()
    for t in f.terms:
        acc = acc + t.coeff * _coset_character_integral(f.p, t.twist, t.center, t.level)
    return acc


def shell_volume(p: int, n: int) -> Fraction:
    f = BruhatFunction.indicator(p, 0, n) - BruhatFunction.indicator(p, 0, n + 1)
    return integrate_additive(f).as_rational()


def log_abs_integral(p: int, K: int) -> float:
    """Partial sum of the integral of log|x|_p over Z_p, shells n <= K."""
    return -math.log(p) * math.fsum(n * (p ** (-n) - p ** (-n - 1)) for n in range(K + 1))


# -- shells and the multiplicative measure -------------------------------------


def _unit_integral(p: int, v: Fraction, chi: MultCharacter | None) -> Cyclotomic:
    """Integral over Z_p^x of chi_p(v u) * chi(u) du (additive measure)."""
    d = chi.n if chi is not None else 0
    vv = _val(v, p)
    if d == 0:
        out = Cyclotomic()
        if vv >= 0:
            out = out + Cyclotomic.rational(1)
        if vv >= -1:
            out = out - Cyclotomic.rational(Fraction(1, p))
        return out
    if vv >= 0:
        return Cyclotomic()
    e = int(-vv)
    m = max(d, e)
    if e != d and p**m > 50000:
        # the sum below vanishes off the conductor; skip the long loop
        return Cyclotomic()
    mod = p**m
    items = []
    for u in range(1, mod):
        if u % p:
            items.append((mult_unit_angle(chi, u).theta + reduce_mod(v * u, p, 0), 1))
    return Cyclotomic.sum_of(items).scale(Fraction(1, mod))


def _term_shell(p: int, t: BruhatTerm, chi: MultCharacter | None, k: int) -> Cyclotomic:
    """Integral of the term times chi(u(x)) over the shell p^k Z_p^x."""
    d = chi.n if chi is not None else 0
    if t.center != 0:
        if ord_p_rational(t.center, p) != k:
            return Cyclotomic()
        if t.level - k >= d:
            ang = mult_unit_angle(chi, t.center / Fraction(p) ** k) if d else RationalAngle(0)
            return (t.coeff * _coset_character_integral(p, t.twist, t.center, t.level)).rotate(ang)
        m = k + d
        step = Fraction(p) ** t.level
        acc = Cyclotomic()
        for j in range(p ** (m - t.level)):
            y = t.center + j * step
            ang = mult_unit_angle(chi, y / Fraction(p) ** k)
            acc = acc + _coset_character_integral(p, t.twist, y, m).rotate(ang)
        return t.coeff * acc
    if k < t.level:
        return Cyclotomic()
    pk = Fraction(p) ** k
    return (t.coeff * _unit_integral(p, t.twist * pk, chi)).scale(1 / pk)


@dataclass
class ShellData:
    """Shell integrals I_k = integral over p^k Z_p^x of f(x) chi(u(x)) dx.

    ``finite`` holds k in [low, tail_start); for k >= tail_start the
    integrand is f(0) chi(u(x)) and I_k is given in closed form.
    """

    finite: dict[int, Cyclotomic]
    tail_start: int
    f0: Cyclotomic


def shell_data(f: BruhatFunction, chi: MultCharacter | None = None) -> ShellData:
    p = f.p
    if chi is not None and chi.n == 0:
        chi = None
    terms = [t.normalized(p) for t in f.terms if t.coeff]
    low, high = None, None
    for t in terms:
        if t.center != 0:
            k0, k1 = ord_p_rational(t.center, p), ord_p_rational(t.center, p) + 1
        else:
            k0 = t.level
            k1 = max(t.level, int(-_val(t.twist, p)) if t.twist else t.level)
        low = k0 if low is None else min(low, k0)
        high = k1 if high is None else max(high, k1)
    if low is None:
        return ShellData({}, 0, Cyclotomic())
    finite = {}
    for k in range(low, high):
        acc = Cyclotomic()
        for t in terms:
            acc = acc + _term_shell(p, t, chi, k)
        finite[k] = acc
    return ShellData(finite, high, evaluate(f, 0))


def _shell_weight(p: int, k: int, s: complex) -> complex:
    # (p/(p-1)) * |x|^-1 * |x|^s on the shell p^k Z_p^x
    return p / (p - 1) * complex(p) ** (k * (1 - s))


def integrate_multiplicative(f: BruhatFunction, chi: MultCharacter | None = None) -> complex:
    """Integral of f(x) chi(x) d^x x, with d^x x = p/(p-1) dx/|x|_p."""
    p = f.p
    s = chi.s if chi is not None else 0j
    data = shell_data(f, chi)
    total = sum((_shell_weight(p, k, s) * v.to_complex() for k, v in data.finite.items()), 0j)
    if data.f0 and (chi is None or chi.n == 0):
        if s.real <= 0:
            raise DivergenceError("f(0) != 0 and the shell series does not converge")
        x = complex(p) ** (-s)
        total += data.f0.to_complex() * x ** data.tail_start / (1 - x)
    return total


def mellin_indicator_unit(chi: MultCharacter) -> complex:
    """Mellin transform of 1_{Z_p^x}, by an explicit character sum."""
    p, n = chi.p, max(chi.n, 1)
    mod = p**n
    units = [u for u in range(1, mod) if u % p]
    total = Cyclotomic.sum_of((mult_unit_angle(chi, u), 1) for u in units)
    return total.scale(Fraction(1, len(units))).to_complex()


def mellin_indicator_unit_exact(chi: MultCharacter) -> Cyclotomic:
    p, n = chi.p, max(chi.n, 1)
    mod = p**n
    units = [u for u in range(1, mod) if u % p]
    return Cyclotomic.sum_of((mult_unit_angle(chi, u), 1) for u in units).scale(Fraction(1, len(units)))


def unit_volume(p: int) -> Fraction:
    return integrate_additive(BruhatFunction.units(p)).as_rational()
