"""Desk-scale adeles and ideles of Q, theta, completed zeta and global L-functions.

An adele is a rational r placed diagonally, with finitely many local
components overridden by p-adic numbers and optionally a real component.
That closure of Q under finitely many local edits is enough for |.|_A,
fundamental-domain reduction and Poisson summation to be exact.
"""

from __future__ import annotations

import cmath
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .bruhat import BruhatFunction, integrate_additive
from .characters import MultCharacter, chi_minus_one, fractional_part, mult_unit_angle
from .local_zeta import L_arch, Pole, epsilon
from .padic import PadicNumber, _prime_factors, ord_p_rational

DEFAULT_PRECISION = 20


def _primes_of_rational(r: Fraction) -> set[int]:
    return set(_prime_factors(abs(r.numerator))) | set(_prime_factors(r.denominator)) if r else set()


@dataclass(frozen=True)
class Adele:
    """Component at p: overrides[p] if present, else r in Q_p.  At infinity: real or r."""

    r: Fraction = Fraction(0)
    overrides: dict = field(default_factory=dict)
    real: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        for p, x in self.overrides.items():
            if not isinstance(x, PadicNumber) or x.prime != p:
                raise ValueError(f"override at {p} must be a {p}-adic number")

    def component(self, p: int, N: int = DEFAULT_PRECISION) -> PadicNumber:
        if p in self.overrides:
            return self.overrides[p]
        return PadicNumber.from_rational(self.r, 1, p, N)

    def valuation_at(self, p: int) -> float:
        if p in self.overrides:
            x = self.overrides[p]
            return math.inf if x.is_zero else x.valuation
        return math.inf if self.r == 0 else ord_p_rational(self.r, p)

    @property
    def infinite(self) -> float:
        return float(self.r) if self.real is None else self.real

    def support(self) -> set[int]:
        """Primes where the component may fail to be a p-adic unit."""
        return _primes_of_rational(self.r) | set(self.overrides)

    def non_integral_primes(self) -> list[int]:
        return sorted(p for p in self.support() if self.valuation_at(p) < 0)

    def shift(self, q: Fraction) -> "Adele":
        """self - q, with q placed diagonally."""
        q = Fraction(q)
        over = {p: x - q for p, x in self.overrides.items()}
        real = None if self.real is None else self.real - float(q)
        return type(self)(self.r - q, over, real)

    def in_fundamental_domain(self) -> bool:
        if self.non_integral_primes():
            return False
        if self.real is None:
            return 0 <= self.r < 1
        return 0 <= self.real < 1

    def to_json(self) -> dict:
        return {
            "r": str(self.r),
            "overrides": {str(p): x.to_json() for p, x in sorted(self.overrides.items())},
            "real": self.real,
        }

    @classmethod
    def from_json(cls, d: dict) -> "Adele":
        over = {int(p): PadicNumber.from_json(x) for p, x in d.get("overrides", {}).items()}
        return cls(Fraction(d.get("r", "0")), over, d.get("real"))


class Idele(Adele):
    def __post_init__(self):
        super().__post_init__()
        if self.r == 0:
            # every prime outside the overrides would carry a zero component
            raise ValueError("an idele needs a nonzero diagonal part")
        if self.real is not None and self.real == 0:
            raise ValueError("the real component of an idele is nonzero")
        if any(x.is_zero for x in self.overrides.values()):
            raise ValueError("idele components are nonzero")


def adelic_abs(x: Adele) -> tuple[Fraction, float]:
    """(product of the finite |x_p|_p, |x_inf|)."""
    fin = Fraction(1)
    for p in sorted(x.support()):
        v = x.valuation_at(p)
        if v == math.inf:
            return Fraction(0), abs(x.infinite)
        fin *= Fraction(p) ** (-int(v))
    return fin, abs(x.infinite)


def fundamental_domain_reduce(x: Adele) -> tuple[Adele, Fraction]:
    """x = d + r with d in prod Z_p x [0, 1) and r rational."""
    r = Fraction(0)
    for p in x.non_integral_primes():
        r += fractional_part(x.component(p), p) if p in x.overrides else fractional_part(x.r, p)
    d = x.shift(r)
    k = math.floor(d.r) if d.real is None else math.floor(d.real)
    d = d.shift(k)
    if d.real is not None and d.real >= 1.0:
        # a tiny negative real part minus k rounds up to 1.0; the exact value is just below 1
        d = type(d)(d.r, d.overrides, math.nextafter(1.0, 0.0))
    return d, r + k


def idele_unit_decomposition(x: Idele) -> tuple[Fraction, Idele]:
    """x = q u with q > 0 rational and every finite u_p a unit; the real part is ignored."""
    q = Fraction(1)
    for p in sorted(x.support()):
        q *= Fraction(p) ** int(x.valuation_at(p))
    over = {p: c * PadicNumber.from_rational(1 / q, 1, p, max(c.precision, 1)) for p, c in x.overrides.items()}
    return q, Idele(x.r / q, over, None)


def measure_scaling(x: Idele) -> tuple[Fraction, float]:
    """mu(x D) / mu(D) for D = prod Z_p x [0, 1), from local volumes."""
    fin = Fraction(1)
    for p in sorted(x.support()):
        v = int(x.valuation_at(p))
        # x_p Z_p = p^v Z_p
        vol = integrate_additive(BruhatFunction.indicator(p, 0, v)).as_rational()
        base = integrate_additive(BruhatFunction.indicator(p, 0, 0)).as_rational()
        fin *= vol / base
    return fin, abs(x.infinite)


# -- theta and completed zeta --------------------------------------------------------


def _theta_terms(x: float, start: int) -> list[float]:
    out = []
    n = start
    while True:
        t = math.exp(-math.pi * n * n * x)
        if t < 1e-18 and n > 0:
            break
        out.append(t)
        n += 1
    return out


def psi(x: float) -> float:
    """sum over n >= 1 of exp(-pi n^2 x)."""
    if x <= 0:
        raise ValueError("x must be positive")
    return math.fsum(_theta_terms(x, 1))


def theta(x: float) -> float:
    if x <= 0:
        raise ValueError("x must be positive")
    return 1 + 2 * psi(x)


@lru_cache(maxsize=8)
def _gauss_nodes(order: int):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    return tuple(nodes), tuple(weights)


def _panel_integral(g, a: float, b: float, order: int) -> complex:
    nodes, weights = _gauss_nodes(order)
    half, mid = (b - a) / 2, (a + b) / 2
    return half * sum(w * g(mid + half * t) for t, w in zip(nodes, weights))


def _cutoff(s: complex, tol: float) -> float:
    # psi(x) <= 1.0001 e^(-pi x) for x >= 1 and the weight is at most x^(c/2 - 1)
    c = max(abs(s.real), abs(1 - s.real)) + 1
    X = 2.0
    while 1.0001 * math.exp(-math.pi * X) * X ** (c / 2) * 2 / math.pi > tol:
        X += 0.5
    return X


@dataclass(frozen=True)
class QuadratureResult:
    value: complex
    error: float


def theta_integral(s: complex, tol: float = 1e-14, panel: float = 0.5) -> QuadratureResult:
    """The integral over [1, inf) of psi(x) (x^(s/2) + x^((1-s)/2)) dx / x."""
    s = complex(s)
    X = _cutoff(s, tol)

    def g(x: float) -> complex:
        lx = math.log(x)
        return psi(x) * (cmath.exp(s / 2 * lx) + cmath.exp((1 - s) / 2 * lx)) / x

    edges = np.arange(1.0, X + panel / 2, panel)
    hi = sum((_panel_integral(g, float(a), float(b), 20) for a, b in zip(edges[:-1], edges[1:])), 0j)
    lo = sum((_panel_integral(g, float(a), float(b), 14) for a, b in zip(edges[:-1], edges[1:])), 0j)
    return QuadratureResult(hi, abs(hi - lo) + tol)


def completed_zeta(s: complex, tol: float = 1e-14):
    """Lambda(s) = pi^(-s/2) Gamma(s/2) zeta(s) through the theta integral; a Pole at 0 and 1."""
    s = complex(s)
    if s == 0 or s == 1:
        return Pole(s)
    q = theta_integral(s, tol)
    return 1 / (s - 1) - 1 / s + q.value


def completed_zeta_with_error(s: complex, tol: float = 1e-14) -> QuadratureResult:
    s = complex(s)
    if s == 0 or s == 1:
        raise ValueError("Lambda has poles at 0 and 1")
    q = theta_integral(s, tol)
    return QuadratureResult(1 / (s - 1) - 1 / s + q.value, q.error)


# -- Poisson summation at desk scale ----------------------------------------------------


def _gauss_sum_lattice(step: float, tail: float = 1e-16) -> float:
    """sum over n in Z of exp(-pi (n step)^2)."""
    terms = [1.0]
    n = 1
    while True:
        t = math.exp(-math.pi * (n * step) ** 2)
        if t < tail:
            break
        terms.append(2 * t)
        n += 1
    return math.fsum(terms)


@dataclass(frozen=True)
class PoissonReport:
    lhs: float
    rhs: float
    residual: float
    lattice: Fraction


def poisson_check(x: Idele, levels: dict[int, int] | None = None) -> PoissonReport:
    """Both sides of sum_r Phi(r x) = |x|_A^-1 sum_q Phi^(q / x).

    Phi is exp(-pi t^2) at infinity and 1_{p^k Z_p} at p, with k = levels[p]
    (default 0).
    """
    levels = dict(levels or {})
    a = Fraction(1)
    for p in sorted(x.support() | set(levels)):
        a *= Fraction(p) ** (levels.get(p, 0) - int(x.valuation_at(p)))
    t = abs(x.infinite)
    # Phi(r x) != 0 exactly when r lies in a Z
    lhs = _gauss_sum_lattice(float(a) * t)
    # Phi^ = prod p^-k 1_{p^-k Z_p} x Gaussian; q / x_p in p^-k Z_p means q in a^-1 Z
    const = Fraction(1)
    for p, k in levels.items():
        const *= Fraction(p) ** (-k)
    fin, inf = adelic_abs(x)
    rhs = float(const / fin) / inf * _gauss_sum_lattice(1 / (float(a) * t))
    return PoissonReport(lhs, rhs, abs(lhs - rhs), a)


# -- global characters and L-functions --------------------------------------------------


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    sieve = np.ones(n + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(n) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return np.nonzero(sieve)[0]


@dataclass(frozen=True)
class GlobalCharacter:
    """omega = (finite parts at ramified primes) * sgn^sigma at infinity * |.|_A^(-i w)."""

    w: float = 0.0
    ramified: dict = field(default_factory=dict)  # prime -> MultCharacter (finite part, degree >= 1)
    sigma: int = 0

    def __post_init__(self):
        if self.sigma not in (0, 1):
            raise ValueError("sigma must be 0 or 1")
        for p, chi in self.ramified.items():
            if chi.p != p or chi.n < 1:
                raise ValueError(f"the component at {p} must be a ramified character of Q_{p}^x")
        sign = (-1) ** self.sigma
        for chi in self.ramified.values():
            sign *= chi_minus_one(chi)
        if sign != 1:
            raise ValueError("omega must be trivial on -1: the signs at the ramified primes and at infinity disagree")

    @property
    def is_trivial(self) -> bool:
        return not self.ramified and self.sigma == 0 and self.w == 0

    def angle_at(self, p: int) -> Fraction:
        """theta with omega_p(p) = p^(i w) exp(2 pi i theta), from triviality on p in Q^x."""
        theta = Fraction(0)
        for q, chi in self.ramified.items():
            if q != p:
                theta -= mult_unit_angle(chi, p).theta
        return theta % 1

    def alpha(self, p: int) -> complex:
        return cmath.exp(1j * (self.w * math.log(p) + 2 * math.pi * float(self.angle_at(p))))

    def local(self, p: int) -> MultCharacter:
        """omega_p as a MultCharacter with the value at p folded into its exponent."""
        arg = self.w * math.log(p) + 2 * math.pi * float(self.angle_at(p))
        s = complex(0, -arg / math.log(p))
        if p in self.ramified:
            return self.ramified[p].with_s(s)
        return MultCharacter(p, s)


@dataclass(frozen=True)
class GlobalLResult:
    value: complex
    error: float
    prime_bound: int


def _chunk_log(chunk: np.ndarray, s: complex, alphas: np.ndarray | None) -> complex:
    x = np.exp(-s * np.log(chunk.astype(float)))
    if alphas is not None:
        x = x * alphas
    return complex(np.sum(-np.log1p(-x)))


def global_L(omega: GlobalCharacter, s: complex, prime_bound: int = 10**5, workers: int = 1, chunk: int = 1 << 14) -> GlobalLResult:
    """Truncated Euler product over p <= prime_bound times the archimedean factor."""
    s = complex(s)
    if s.real <= 1:
        raise ValueError("the Euler product converges only for Re(s) > 1")
    primes = primes_up_to(prime_bound)
    primes = primes[~np.isin(primes, list(omega.ramified))] if omega.ramified else primes
    alphas = None
    if not omega.is_trivial:
        alphas = np.array([omega.alpha(int(p)) for p in primes], dtype=complex)
    chunks = [(primes[i : i + chunk], None if alphas is None else alphas[i : i + chunk]) for i in range(0, len(primes), chunk)]
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            parts = list(ex.map(lambda c: _chunk_log(c[0], s, c[1]), chunks))
    else:
        parts = [_chunk_log(c, s, a) for c, a in chunks]
    # summation in chunk order keeps the result independent of the worker count
    total = 0j
    for part in parts:
        total += part
    value = cmath.exp(total) * L_arch(omega.sigma, omega.w, s)
    sig = s.real
    P = max(prime_bound, 2)
    tail = P ** (1 - sig) / ((sig - 1) * (1 - P ** (-sig)))
    return GlobalLResult(value, abs(value) * math.expm1(tail), prime_bound)


def global_epsilon(omega: GlobalCharacter, s: complex) -> complex:
    """Product of the local epsilon factors at the ramified primes."""
    s = complex(s)
    out = 1 + 0j
    for p in sorted(omega.ramified):
        out *= epsilon(omega.local(p).shift(s))
    return out


# -- Euler factors and residues ----------------------------------------------------------


@dataclass(frozen=True, order=True)
class EulerFactor:
    """1 - alpha p^-s with alpha = p^(i w) exp(2 pi i theta)."""

    p: int
    w: Fraction = Fraction(0)
    theta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "w", Fraction(self.w))
        object.__setattr__(self, "theta", Fraction(self.theta) % 1)

    def __call__(self, s: complex) -> complex:
        alpha = cmath.exp(1j * (float(self.w) * math.log(self.p) + 2 * math.pi * float(self.theta)))
        return 1 - alpha * complex(self.p) ** (-complex(s))


@dataclass(frozen=True)
class FactorRatio:
    numerator: tuple
    denominator: tuple

    @property
    def is_identically_one(self) -> bool:
        return not self.numerator and not self.denominator

    def __call__(self, s: complex) -> complex:
        out = 1 + 0j
        for f in self.numerator:
            out *= f(s)
        for f in self.denominator:
            out /= f(s)
        return out


def euler_factor_ratio(numerator, denominator) -> FactorRatio:
    """Cancel equal factors symbolically; what remains is returned in sorted order."""
    num = sorted(numerator)
    den = sorted(denominator)
    rest_num = []
    for f in num:
        if f in den:
            den.remove(f)
        else:
            rest_num.append(f)
    return FactorRatio(tuple(rest_num), tuple(den))


def local_factor_data(omega: GlobalCharacter, p: int) -> EulerFactor | None:
    """The factor with L(omega_p, s) = 1 / factor, or None when omega is ramified at p."""
    if p in omega.ramified:
        return None
    return EulerFactor(p, Fraction(omega.w).limit_denominator(10**12), omega.angle_at(p))


def rigidity_ratio(omega1: GlobalCharacter, omega2: GlobalCharacter, S) -> FactorRatio:
    """prod over p in S of L(omega2_p, s) / L(omega1_p, s) as cancelled factor lists."""
    num, den = [], []
    for p in sorted(S):
        a, b = local_factor_data(omega1, p), local_factor_data(omega2, p)
        if a is not None:
            num.append(a)
        if b is not None:
            den.append(b)
    return euler_factor_ratio(num, den)


@dataclass(frozen=True)
class Extrapolation:
    value: complex
    error: float


def residue_extrapolation(func, s0: complex, h0: float = 0.1, levels: int = 6) -> Extrapolation:
    """Limit of (s - s0) func(s) as s -> s0, by Neville extrapolation in h."""
    s0 = complex(s0)
    hs = [h0 / 2**k for k in range(levels)]
    vals = [h * complex(func(s0 + h)) for h in hs]
    table = [vals[:]]
    for m in range(1, levels):
        prev = table[-1]
        row = []
        for i in range(len(prev) - 1):
            h_lo, h_hi = hs[i], hs[i + m]
            row.append((h_lo * prev[i + 1] - h_hi * prev[i]) / (h_lo - h_hi))
        table.append(row)
    best = table[-1][0]
    return Extrapolation(best, abs(best - table[-2][0]))


def lambda_residues(**kw) -> tuple[Extrapolation, Extrapolation]:
    """Residues of Lambda at s = 1 and s = 0."""
    return residue_extrapolation(completed_zeta, 1, **kw), residue_extrapolation(completed_zeta, 0, **kw)

