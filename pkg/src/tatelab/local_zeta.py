"""Local zeta integrals over Q_p^x and R^x, with their rho / L / epsilon factors.

Two parameterizations are in use.  A ``MultCharacter`` carries its own
exponent, chi = |.|^s * (finite part), and the functions here that take
only ``chi`` read s from it.  The unitary form omega = (finite part) *
|.|^(-i w) with a separate s corresponds to ``omega.shift(s)``; the
``*_unitary`` helpers do that conversion.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

from .bruhat import (
    BruhatFunction,
    BruhatTerm,
    fourier,
    integrate_additive,
    integrate_multiplicative,
)
from .characters import MultCharacter, chi_minus_one, mult_unit_angle, reduce_mod
from .cyclotomic import Cyclotomic, RationalAngle
from .padic import ord_p_rational


@dataclass(frozen=True)
class Pole:
    """Tagged result for an evaluation that lands on a pole."""

    location: complex

    def to_json(self) -> dict:
        return {"pole": True, "location": [self.location.real, self.location.imag]}


class PoleError(ValueError):
    pass


# -- Gauss sums ------------------------------------------------------------------


@dataclass(frozen=True)
class GaussSum:
    chi: MultCharacter
    exact: Cyclotomic
    terms: tuple  # (residue e, angle of finite_part(e) + e/p^n)

    @property
    def value(self) -> complex:
        return self.exact.to_complex()


def _units(p: int, n: int) -> list[int]:
    return [e for e in range(1, p**n) if e % p]


def gauss_sum(chi: MultCharacter) -> GaussSum:
    """tau(chi) = sum over (Z/p^n)^x of finite_part(e) exp(2 pi i e / p^n)."""
    p, n = chi.p, chi.n
    if n < 1:
        raise ValueError("the Gauss sum is defined for ramified characters")
    mod = p**n
    terms = tuple((e, mult_unit_angle(chi, e) + RationalAngle(Fraction(e, mod))) for e in _units(p, n))
    return GaussSum(chi, Cyclotomic.sum_of((a, 1) for _, a in terms), terms)


def vanishing_lemma_check(chi: MultCharacter, v) -> complex:
    """Integral over Z_p^x of chi_p(v u) finite_part(u) d^x u, by a direct residue sum.

    It vanishes unless |v|_p = p^n; the sum runs over a modulus fine enough
    for both factors to be constant on residue classes.
    """
    p, n = chi.p, chi.n
    v = Fraction(v)
    if v == 0:
        raise ValueError("v must be nonzero")
    m = max(n, -ord_p_rational(v, p), 1)
    mod = p**m
    items = [(mult_unit_angle(chi, u).theta + reduce_mod(v * u, p, 0), 1) for u in _units(p, m)]
    # each residue class has additive volume 1/p^m; d^x u = p/(p-1) du on units
    total = Cyclotomic.sum_of(items).scale(Fraction(p, (p - 1) * mod))
    return total.to_complex()


def unit_subgroup_volume(p: int, n: int) -> Fraction:
    """Volume of U_{p,n} = 1 + p^n Z_p for d^x u, n >= 1."""
    if n < 1:
        raise ValueError("n must be at least 1")
    f = BruhatFunction.indicator(p, 1, n)
    return integrate_additive(f).as_rational() * Fraction(p, p - 1)


# -- zeta integrals ---------------------------------------------------------------


def local_zeta(f: BruhatFunction, chi: MultCharacter, s: complex | None = None) -> complex:
    """Z(f, chi) = integral of f(x) chi(x) d^x x over Q_p^x.

    With ``s`` given, chi is replaced by its finite part times |.|^s.
    """
    if f.p != chi.p:
        raise ValueError("prime mismatch")
    if s is not None:
        chi = chi.with_s(s)
    return integrate_multiplicative(f, chi)


def local_zeta_unitary(f: BruhatFunction, omega: MultCharacter, s: complex) -> complex:
    """Z(f, omega, s) = integral of f(x) omega(x) |x|^s d^x x."""
    return local_zeta(f, omega.shift(s))


def phi(p: int, n: int) -> BruhatFunction:
    """chi_p(x) * 1_{p^-n Z_p}(x)."""
    return BruhatFunction(p, [BruhatTerm(Cyclotomic.rational(1), Fraction(1), Fraction(0), -n)])


def zeta_phi_closed_form(chi: MultCharacter) -> complex:
    """Z(phi_n, chi) for chi ramified of degree n."""
    p, n = chi.p, chi.n
    return gauss_sum(chi).value * complex(p) ** (1 + n * (chi.s - 1)) / (p - 1)


# -- rho, L, epsilon ----------------------------------------------------------------


def L_factor(chi: MultCharacter, s: complex | None = None):
    """(1 - chi(p))^-1 when unramified, 1 when ramified; a ``Pole`` at chi(p) = 1."""
    if s is not None:
        chi = chi.with_s(s)
    if chi.is_ramified:
        return 1 + 0j
    x = chi.value_at_p()
    if abs(1 - x) < 1e-15:
        return Pole(chi.s)
    return 1 / (1 - x)


def _rho_closed(chi: MultCharacter):
    p = chi.p
    if chi.is_ramified:
        return gauss_sum(chi).value * chi_minus_one(chi) * complex(p) ** (chi.n * (chi.s - 1))
    num = 1 - chi.dual().value_at_p()
    den = 1 - chi.value_at_p()
    if abs(den) < 1e-15:
        return Pole(chi.s)
    return num / den


def rho(chi: MultCharacter, s: complex | None = None):
    """The functional-equation quotient, closed form."""
    if s is not None:
        chi = chi.with_s(s)
    return _rho_closed(chi)


def rho_unitary(omega: MultCharacter, s: complex):
    """rho(omega, s) for omega = finite part * |.|^(-i w); the w-shift enters as s - i w."""
    return rho(omega.shift(s))


def rho_quotient(chi: MultCharacter, f: BruhatFunction, s: complex | None = None) -> complex:
    """rho computed from its definition Z(f, chi) / Z(f^, chi dual)."""
    if s is not None:
        chi = chi.with_s(s)
    return local_zeta(f, chi) / local_zeta(fourier(f), chi.dual())


def rho_residue_at_zero(p: int) -> float:
    """Residue at s = 0 of (1 - p^-(1-s)) / (1 - p^-s)."""
    return (p - 1) / (p * math.log(p))


def epsilon(chi: MultCharacter, s: complex | None = None) -> complex:
    if s is not None:
        chi = chi.with_s(s)
    if not chi.is_ramified:
        return 1 + 0j
    return _rho_closed(chi)


def root_number(chi: MultCharacter) -> complex:
    """W = epsilon(|.|^(1/2) times the finite part of chi)."""
    if not chi.is_ramified:
        return 1 + 0j
    return epsilon(chi.with_s(0.5))


def functional_equation_check(f: BruhatFunction, g: BruhatFunction, chi: MultCharacter, s: complex | None = None):
    """(|Z(f)Z(g^,dual) - Z(f^,dual)Z(g)|, |Z(f) - rho Z(f^,dual)|)."""
    if s is not None:
        chi = chi.with_s(s)
    if not 0 < chi.s.real < 1:
        raise ValueError("both sides converge only for 0 < Re(s) < 1")
    d = chi.dual()
    zf, zg = local_zeta(f, chi), local_zeta(g, chi)
    zfh, zgh = local_zeta(fourier(f), d), local_zeta(fourier(g), d)
    r = rho(chi)
    return abs(zf * zgh - zfh * zg), abs(zf - r * zfh)


@dataclass(frozen=True)
class LocalFactor:
    """A local factor as a function of s; ``place`` is a prime or "inf"."""

    kind: str  # nonarch-L, nonarch-eps, nonarch-rho, arch-L, arch-rho
    place: int | str
    chi: MultCharacter | None = None
    sigma: int = 0
    w: float = 0.0

    def __call__(self, s: complex):
        s = complex(s)
        if self.kind == "nonarch-L":
            return L_factor(self.chi.shift(s))
        if self.kind == "nonarch-eps":
            return epsilon(self.chi.shift(s))
        if self.kind == "nonarch-rho":
            return rho(self.chi.shift(s))
        if self.kind == "arch-L":
            return L_arch(self.sigma, self.w, s)
        if self.kind == "arch-rho":
            return rho_arch(self.sigma, self.w, s)
        raise ValueError(f"unknown factor kind {self.kind!r}")


# -- the archimedean place -----------------------------------------------------------

# B_2k for the Stirling series
_BERNOULLI = [
    Fraction(1, 6),
    Fraction(-1, 30),
    Fraction(1, 42),
    Fraction(-1, 30),
    Fraction(5, 66),
    Fraction(-691, 2730),
    Fraction(7, 6),
    Fraction(-3617, 510),
    Fraction(43867, 798),
    Fraction(-174611, 330),
]
_STIRLING = [float(b / (2 * k * (2 * k - 1))) for k, b in enumerate(_BERNOULLI, start=1)]
_SHIFT = 16.0


def _log_gamma_large(z: complex) -> complex:
    # Re z >= _SHIFT; the truncated series is good far below double precision there
    zi = 1 / z
    zi2 = zi * zi
    acc = 0j
    for c in reversed(_STIRLING):
        acc = acc * zi2 + c
    return (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2 * math.pi) + acc * zi


def gamma(z: complex) -> complex:
    """Complex Gamma: Stirling series after an upward shift, reflection for Re z < 1/2."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at {z.real:g}")
    if z.real < 0.5:
        return math.pi / (cmath.sin(math.pi * z) * gamma(1 - z))
    shift = max(0, math.ceil(_SHIFT - z.real))
    prod = 1 + 0j
    for k in range(shift):
        prod *= z + k
    return cmath.exp(_log_gamma_large(z + shift)) / prod


def gamma_R(s: complex) -> complex:
    s = complex(s)
    return cmath.exp(-s / 2 * math.log(math.pi)) * gamma(s / 2)


def gamma_C(s: complex) -> complex:
    s = complex(s)
    return cmath.exp((1 - s) * math.log(2 * math.pi)) * gamma(s)


def L_arch(sigma: int, w: float, s: complex) -> complex:
    """Gamma_R(s - i w + sigma) for omega = sgn^sigma |.|^(-i w)."""
    if sigma not in (0, 1):
        raise ValueError("sigma must be 0 or 1")
    return gamma_R(complex(s) - 1j * w + sigma)


def rho_arch(sigma: int, w: float, s: complex) -> complex:
    """L(omega, s) / L(conj omega, 1 - s), times -i when sigma = 1."""
    s = complex(s)
    q = L_arch(sigma, w, s) / L_arch(sigma, -w, 1 - s)
    return -1j * q if sigma else q


def rho_arch_closed(sigma: int, s: complex) -> complex:
    """The w = 0 quotient through Gamma(s) and a cosine or sine."""
    s = complex(s)
    base = cmath.exp((1 - s) * math.log(2) - s * math.log(math.pi)) * gamma(s)
    if sigma:
        return -1j * base * cmath.sin(math.pi * s / 2)
    return base * cmath.cos(math.pi * s / 2)
