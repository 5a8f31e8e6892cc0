import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from strategies import nonzero_rationals, primes
from tatelab import characters
from tatelab.characters import AdditiveCharacter, MultCharacter
from tatelab.cyclotomic import RationalAngle
from tatelab.padic import PadicNumber, ord_p_rational


def brute_log_table(g: int, mod: int) -> dict[int, int]:
    table, x, k = {}, 1, 0
    while x not in table:
        table[x] = k
        x, k = x * g % mod, k + 1
    return table


def count_by_conductor(p: int, n: int) -> int:
    """Characters of (Z/p^n)^x, built from generator images, whose conductor is exactly p^n."""
    mod = p**n
    order = (p - 1) * p ** (n - 1)
    g = next(a for a in range(2, mod) if a % p and len(brute_log_table(a, mod)) == order)
    logs = brute_log_table(g, mod)
    count = 0
    for k in range(order):
        def trivial_on(m):
            return all(k * logs[u] % order == 0 for u in range(1, mod, 1) if u % p and (u - 1) % p**m == 0)
        if not trivial_on(n - 1):
            count += 1
    return count


def test_fractional_part_examples():
    assert characters.fractional_part(Fraction(12, 7), 3) == 0
    assert characters.fractional_part(Fraction(2, 5) + 15, 5) == Fraction(2, 5)
    x = PadicNumber.from_rational(Fraction(3, 7) + 14, 1, 7, 10)
    assert characters.fractional_part(x) == Fraction(3, 7)


@given(nonzero_rationals, nonzero_rationals, primes)
def test_fractional_part_is_additive_mod_integers(x, y, p):
    f = lambda z: characters.fractional_part(z, p)
    assert (f(x + y) - f(x) - f(y)).denominator == 1
    assert 0 <= f(x) < 1
    assert (x - f(x)).denominator % p != 0


def test_additive_character_basics():
    chi = AdditiveCharacter(5)
    assert chi(Fraction(7, 3)).theta == 0
    assert chi(Fraction(1, 5)).theta == Fraction(1, 5)
    assert abs(RationalAngle(Fraction(1, 5)).to_complex() - cmath.exp(2j * math.pi / 5)) < 1e-15


@given(nonzero_rationals, primes, st.integers(-4, 4))
def test_conductor_law(t, p, shift):
    t = t * Fraction(p) ** shift
    chi = AdditiveCharacter(p, t)
    k = chi.conductor_exponent()
    assert k == -ord_p_rational(t, p)
    for j in range(1, 6):
        assert chi(j * Fraction(p) ** k).theta == 0
    assert any(chi(j * Fraction(p) ** (k - 1)).theta != 0 for j in range(1, p))


def test_product_principle_examples():
    assert characters.product_principle_check(Fraction(1, 7)) == 0
    assert characters.product_principle_check(Fraction(-12)) == 12
    # f_7 = 1/7 and f_5 = 3/5 by partial fractions, so the witness is 26/35 - 131/35
    assert characters.product_principle_check(Fraction(22, 7) + Fraction(3, 5)) == -3


@given(nonzero_rationals)
def test_product_principle_always_gives_an_integer(x):
    w = characters.product_principle_check(x)
    assert isinstance(w, int)


def test_mult_eval_examples():
    chi = MultCharacter.unramified(5, 0.3 + 0.2j)
    assert abs(characters.mult_eval(chi, 5) - 5 ** -(0.3 + 0.2j)) < 1e-15
    assert characters.mult_eval(chi, 1) == 1
    g = characters.unit_generator(5)
    quartic = MultCharacter.from_angle(5, Fraction(1, 4))
    assert (4 % quartic.angle.order) == 0
    assert abs(characters.mult_eval(quartic, g) - 1j) < 1e-15


@st.composite
def characters_and_units(draw):
    p = draw(st.sampled_from([2, 3, 5, 7]))
    n = draw(st.integers(0, 3).filter(lambda k: not (p == 2 and k == 1)))
    chars = list(characters.enumerate_characters(p, n))
    chi = draw(st.sampled_from(chars))
    s = complex(draw(st.floats(-2, 2)), draw(st.floats(-2, 2)))
    return chi.with_s(s)


@given(characters_and_units(), nonzero_rationals, nonzero_rationals)
def test_mult_eval_is_multiplicative(chi, x, y):
    p = chi.p
    ux = x / Fraction(p) ** ord_p_rational(x, p)
    uy = y / Fraction(p) ** ord_p_rational(y, p)
    assert characters.mult_unit_angle(chi, ux * uy) == characters.mult_unit_angle(chi, ux) + characters.mult_unit_angle(chi, uy)
    lhs = characters.mult_eval(chi, x * y)
    rhs = characters.mult_eval(chi, x) * characters.mult_eval(chi, y)
    assert abs(lhs - rhs) <= 1e-9 * max(1.0, abs(rhs))


@pytest.mark.parametrize("p,n,expected", [(5, 1, 3), (5, 2, 16), (3, 3, 12)])
def test_enumerate_degree_examples(p, n, expected):
    assert characters.enumerate_degree(p, n) == expected


@pytest.mark.parametrize("p,n", [(p, n) for p in (3, 5, 7, 11, 13) for n in (1, 2, 3) if p**n <= 200])
def test_enumerate_degree_against_brute_force(p, n):
    expected = count_by_conductor(p, n)
    assert characters.enumerate_degree(p, n) == expected
    assert len(list(characters.enumerate_characters(p, n))) == expected


@pytest.mark.parametrize("p,n", [(2, 2), (2, 3), (2, 4), (3, 2), (5, 2), (7, 1)])
def test_degree_is_the_conductor_exponent(p, n):
    for chi in characters.enumerate_characters(p, n):
        mod = p**n
        if n >= 1:
            assert all(chi.unit_angle(u).theta == 0 for u in range(1, mod * p, mod))
        if n >= 2 or (p != 2 and n == 1):
            prev = p ** (n - 1)
            assert any(chi.unit_angle(1 + k * prev).theta != 0 for k in range(1, p))


def test_chi_minus_one_values():
    assert characters.chi_minus_one(MultCharacter.unramified(7)) == 1
    assert characters.chi_minus_one(MultCharacter.legendre(5)) == 1
    assert characters.chi_minus_one(MultCharacter.legendre(3)) == -1
    assert characters.chi_minus_one(MultCharacter(2, 0j, 2, 0, Fraction(1, 2))) == -1


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_legendre_character_matches_eulers_criterion(p):
    chi = MultCharacter.legendre(p)
    for u in range(1, p):
        expected = 1 if pow(u, (p - 1) // 2, p) == 1 else -1
        assert chi.unit_angle(u).to_complex().real == pytest.approx(expected)


def test_bad_character_data_is_rejected():
    with pytest.raises(ValueError):
        MultCharacter(5, 0j, 2, RationalAngle(Fraction(1, 4)))
    with pytest.raises(ValueError):
        MultCharacter(2, 0j, 2, 0, Fraction(1, 3))
    with pytest.raises(ValueError):
        characters.mult_eval(MultCharacter.legendre(5), 0)


def test_dual_and_conjugate():
    chi = MultCharacter.from_angle(7, Fraction(1, 6), 0.3 + 0.4j)
    d = chi.dual()
    assert d.s == 1 - chi.s and (d.angle + chi.angle).theta == 0
    c = chi.conj()
    assert c.s == chi.s.conjugate()
    assert MultCharacter.from_json(chi.to_json()) == chi
