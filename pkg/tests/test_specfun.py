import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest

from susy_graphene.specfun import (SpecialValue, gamma_ratio, hermite, kummer_m,
                                   kummer_m_deriv, laguerre, log_gamma,
                                   tricomi_u, tricomi_u_deriv)

from fdtools import fd_first_richardson

mp.mp.dps = 40


def as_float(sv: SpecialValue) -> float:
    return sv.value * math.exp(sv.log_scale)


# --- independent oracles ---------------------------------------------------

def kummer_series_exact(a: Fraction, b: Fraction, z: Fraction, terms=200) -> float:
    """Exact-rational truncated power series; the 200-term tail at |z| <= 4
    is far below double precision."""
    term = Fraction(1)
    total = Fraction(1)
    for k in range(terms):
        term *= (a + k) * z / ((b + k) * (k + 1))
        total += term
    return float(total)


def tricomi_integral(a: float, b: float, z: float) -> float:
    """U via its Laplace integral (a > 0), high-order quadrature."""
    val = mp.quad(lambda t: mp.e ** (-z * t) * t ** (a - 1) * (1 + t) ** (b - a - 1),
                  [0, 1, mp.inf]) / mp.gamma(a)
    return float(val)


# --- kummer_m --------------------------------------------------------------

def test_kummer_at_zero_is_one():
    assert as_float(kummer_m(0.3, 0.5, 0.0)) == 1.0


def test_kummer_equal_parameters_is_exp():
    got = as_float(kummer_m(0.7, 0.7, 1.3))
    assert abs(got - math.exp(1.3)) < 1e-14


def test_kummer_against_exact_series():
    expected = 7.327596768555187  # frozen from the rational oracle below
    oracle = kummer_series_exact(Fraction(1, 10), Fraction(1, 2), Fraction(4))
    assert abs(oracle - expected) < 1e-15
    got = as_float(kummer_m(0.1, 0.5, 4.0))
    assert abs(got - expected) <= 1e-12 * abs(expected)


def test_kummer_rejects_nonpositive_integer_b():
    with pytest.raises(ValueError):
        kummer_m(0.3, 0.0, 1.0)
    with pytest.raises(ValueError):
        kummer_m(0.3, -2.0, 1.0)


def test_kummer_large_argument_scaled():
    # beyond exp overflow the result must arrive as mantissa + log_scale
    sv = kummer_m(0.5, 1.5, 800.0)
    assert math.isfinite(sv.value) and abs(sv.value) < 1e3
    assert sv.log_scale > 700.0
    ref = mp.hyp1f1(0.5, 1.5, 800)
    got = mp.mpf(sv.value) * mp.exp(mp.mpf(sv.log_scale))
    assert abs((got - ref) / ref) < 1e-11


def test_contiguous_relation_random():
    rng = np.random.default_rng(42)
    for _ in range(200):
        a = rng.uniform(0.1, 3.5)
        b = rng.uniform(0.4, 3.8)
        z = rng.uniform(-25.0, 190.0)
        ms = [kummer_m(a - 1, b, z), kummer_m(a, b, z), kummer_m(a + 1, b, z)]
        top = max(sv.log_abs() for sv in ms)
        vals = [sv.value * math.exp(sv.log_scale - top) for sv in ms]
        terms = [(b - a) * vals[0], (2 * a - b + z) * vals[1], -a * vals[2]]
        scale = max(abs(t) for t in terms)
        assert abs(sum(terms)) <= 1e-9 * scale


def test_kummer_transformation_random():
    rng = np.random.default_rng(43)
    for _ in range(200):
        a = rng.uniform(0.1, 3.5)
        b = rng.uniform(0.4, 3.8)
        z = rng.uniform(-190.0, 190.0)
        lhs = kummer_m(a, b, z)
        rhs = kummer_m(b - a, b, -z)
        # compare as sign * log magnitude, the stable frame for e^z scales
        assert lhs.sign() == rhs.sign()
        assert abs(lhs.log_abs() - (rhs.log_abs() + z)) < 1e-10 * max(1.0, abs(z))


# --- derivatives -----------------------------------------------------------

def test_kummer_deriv_at_zero():
    got = as_float(kummer_m_deriv(0.3, 0.7, 0.0))
    assert abs(got - 0.3 / 0.7) < 1e-15


def test_tricomi_deriv_a_zero():
    assert as_float(tricomi_u_deriv(0.0, 1.3, 2.0)) == 0.0


def test_kummer_deriv_against_richardson():
    a, b, z = 0.1, 0.5, 2.0
    fd = fd_first_richardson(lambda t: as_float(kummer_m(a, b, t)), z, 1e-3)
    fd_fine = fd_first_richardson(lambda t: as_float(kummer_m(a, b, t)), z, 5e-4)
    assert abs(fd - fd_fine) < 1e-10  # h-sweep stability of the oracle itself
    got = as_float(kummer_m_deriv(a, b, z))
    assert abs(got - fd_fine) <= 1e-9 * max(1.0, abs(fd_fine))


def test_tricomi_deriv_against_richardson():
    a, b, z = 0.8, 3.7, 6.0
    fd = fd_first_richardson(lambda t: as_float(tricomi_u(a, b, t)), z, 1e-3)
    got = as_float(tricomi_u_deriv(a, b, z))
    assert abs(got - fd) <= 1e-9 * max(1.0, abs(fd))


# --- tricomi_u -------------------------------------------------------------

def test_tricomi_a_zero_is_one():
    for b, z in [(0.7, 0.3), (4.4, 12.0), (2.0, 55.0)]:
        assert as_float(tricomi_u(0.0, b, z)) == 1.0


def test_tricomi_requires_positive_z():
    with pytest.raises(ValueError):
        tricomi_u(0.5, 1.5, 0.0)
    with pytest.raises(ValueError):
        tricomi_u(0.5, 1.5, -1.0)


def test_tricomi_against_integral_oracle():
    expected = 0.5963473623231941  # frozen from the quadrature oracle below
    oracle = tricomi_integral(1.0, 1.0, 1.0)
    assert abs(oracle - expected) < 1e-13
    got = as_float(tricomi_u(1.0, 1.0, 1.0))
    assert abs(got - expected) <= 1e-10 * expected


def test_tricomi_integral_oracle_noninteger_b():
    for a, b, z in [(0.4427, 13.885, 5.0), (0.4427, 13.885, 109.0),
                    (1.2, 4.6, 0.2), (0.7, 8.3, 30.0)]:
        ref = tricomi_integral(a, b, z)
        got = as_float(tricomi_u(a, b, z))
        assert abs(got - ref) <= 1e-10 * abs(ref), (a, b, z)


def test_tricomi_large_z_asymptotic():
    # truncated large-z series, built here independently
    a, b, z = 0.7, 2.3, 50.0
    got = as_float(tricomi_u(a, b, z)) * z ** a
    t1 = -a * (a - b + 1.0) / z
    t2 = a * (a + 1.0) * (a - b + 1.0) * (a - b + 2.0) / (2.0 * z * z)
    assert abs(got - 1.0) <= 2.0 * abs(t1)
    assert abs(got - (1.0 + t1 + t2)) <= 1e-4 * abs(got)


# --- polynomials -----------------------------------------------------------

def test_hermite_low_orders():
    assert hermite(0, 0.37) == 1.0
    assert hermite(1, 0.7) == 1.4


def test_hermite_degree_six():
    # explicit coefficients 64 x^6 - 480 x^4 + 720 x^2 - 120 at x = 1.3
    x = Fraction(13, 10)
    expected = float(64 * x ** 6 - 480 * x ** 4 + 720 * x ** 2 - 120)
    assert abs(hermite(6, 1.3) - expected) < 1e-10 * abs(expected)


def test_hermite_recurrence_exact_at_dyadic_points():
    # dyadic x keeps all recurrence arithmetic exact in doubles
    def hermite_fraction(n, x):
        h_prev, h = Fraction(1), 2 * x
        if n == 0:
            return Fraction(1)
        for k in range(1, n):
            h_prev, h = h, 2 * x * h - 2 * k * h_prev
        return h

    for x in (Fraction(1, 2), Fraction(3, 2), Fraction(-5, 4)):
        for n in range(11):
            assert hermite(n, float(x)) == float(hermite_fraction(n, x))


def test_laguerre_values():
    assert laguerre(0, 1.1, 0.9) == 1.0
    assert laguerre(1, 2.0, 0.5) == 2.5  # closed form 1 + alpha - x
    got = laguerre(3, 2.5, 0.7)
    ref = float(mp.laguerre(3, 2.5, 0.7))
    assert abs(got - ref) < 1e-12 * abs(ref)


def test_polynomials_reject_negative_order():
    with pytest.raises(ValueError):
        hermite(-1, 0.0)
    with pytest.raises(ValueError):
        laguerre(-2, 0.0, 0.0)


# --- log gamma -------------------------------------------------------------

def test_log_gamma_unit_values():
    assert abs(log_gamma(1.0)) < 1e-14
    assert abs(log_gamma(2.0)) < 1e-14


def test_log_gamma_half():
    assert abs(log_gamma(0.5) - math.log(math.sqrt(math.pi))) < 1e-14


def test_log_gamma_pole():
    for x in (0.0, -1.0, -7.0):
        with pytest.raises(ValueError):
            log_gamma(x)


def test_gamma_ratio_against_high_precision():
    expected = 0.15653450819419703  # frozen: Gamma(0.6)/Gamma(0.1) at 40 digits
    ref = float(mp.gamma(mp.mpf("0.6")) / mp.gamma(mp.mpf("0.1")))
    assert abs(ref - expected) < 1e-16
    got = gamma_ratio(0.6, 0.1)
    assert abs(got - expected) <= 1e-13 * expected


def test_gamma_ratio_pole_in_denominator_is_zero():
    assert gamma_ratio(0.5, 0.0) == 0.0
    assert gamma_ratio(1.5, -3.0) == 0.0
