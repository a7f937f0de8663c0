import math

import numpy as np
import pytest

from susy_graphene.fields import Grid
from susy_graphene.model import ModelSpec, base_potential
from susy_graphene.seeds import (NodelessInconclusiveError, SeedSolution,
                                 certify_nodeless, morse_seed, oscillator_seed)
from susy_graphene.specfun import kummer_m


def cert_grid(model, n=4001):
    x0, x1 = model.default_range()
    return Grid(x0, x1, n)


# --- oscillator family -----------------------------------------------------

def test_zero_energy_seed_is_gaussian_shape(osc_model):
    u = oscillator_seed(osc_model, 0.0, 0.0)
    # u * exp(+zeta^2/2) must be constant
    ref = u.value_fn(0.0) * math.exp(osc_model.zeta(0.0) ** 2 / 2.0)
    for x in (-4.0, -2.0, 1.0, 3.0):
        got = u.value_fn(x) * math.exp(osc_model.zeta(x) ** 2 / 2.0)
        assert abs(got - ref) < 1e-12 * abs(ref)


def test_seed_even_in_zeta_for_symmetric_member(osc_model):
    u = oscillator_seed(osc_model, -0.2, 0.0)
    center = -2.0  # -2 k / omega
    for d in (0.37, 1.1, 2.9):
        left = u.value_fn(center - d)
        right = u.value_fn(center + d)
        assert abs(left - right) <= 1e-12 * abs(right)


def test_seed_log_derivative_matches_worked_ratio(osc_model):
    # for eps = -omega/5, nu = 0 the log-derivative collapses to
    # (omega/2) (x + 2k/omega) (-1 + (2/5) M[11/10,3/2,.]/M[1/10,1/2,.])
    u = oscillator_seed(osc_model, -0.2, 0.0)
    for x in (-3.0, -1.0, 0.3, 1.7):
        z2 = osc_model.zeta(x) ** 2
        ratio = (float(kummer_m(1.1, 1.5, z2).value)
                 * math.exp(kummer_m(1.1, 1.5, z2).log_scale - kummer_m(0.1, 0.5, z2).log_scale)
                 / kummer_m(0.1, 0.5, z2).value)
        expected = 0.5 * (x + 2.0) * (-1.0 + 0.4 * ratio)
        v, d, _ = u.eval_scaled(x)
        assert abs(d / v - expected) < 1e-11 * max(1.0, abs(expected))


def test_seed_derivative_finite_difference(osc_model, morse_model):
    for seed in (oscillator_seed(osc_model, -0.2, 0.5),
                 morse_seed(morse_model, -5.5, -1.5)):
        for x in (-1.2, 0.4, 2.5):
            fd = (seed.value_fn(x + 5e-7) - seed.value_fn(x - 5e-7)) / 1e-6
            assert abs(fd - seed.deriv_fn(x)) <= 1e-7 * max(1.0, abs(fd))


def test_seed_schrodinger_residual(osc_model, morse_model):
    # 4th-order stencil at h = 1e-3, pointwise bound relative to local size
    h = 1e-3
    cases = [(osc_model, oscillator_seed(osc_model, -0.2, 0.5), (-9.0, 5.0)),
             (morse_model, morse_seed(morse_model, -5.5, -1.5), (-3.0, 10.0))]
    for model, seed, window in cases:
        eps = seed.epsilon
        for x in np.linspace(*window, 101):
            u = seed.value_fn
            d2 = (-u(x + 2 * h) + 16 * u(x + h) - 30 * u(x)
                  + 16 * u(x - h) - u(x - 2 * h)) / (12 * h * h)
            res = -d2 + (base_potential(model, "minus", x) - eps) * u(x)
            assert abs(res) <= 1e-6 * max(abs(u(x)), 1.0), (model.kind, x)


def test_oscillator_nodeless_interval(osc_model):
    grid = cert_grid(osc_model)
    for nu in (-0.9, -0.5, 0.0, 0.5, 0.9):
        assert certify_nodeless(oscillator_seed(osc_model, -0.2, nu), grid), nu
    for nu in (-1.5, 1.5):
        assert not certify_nodeless(oscillator_seed(osc_model, -0.2, nu), grid), nu


def test_certify_sets_flag(osc_model):
    seed = oscillator_seed(osc_model, -0.2, 0.0)
    assert not seed.nodeless_certified
    certify_nodeless(seed, cert_grid(osc_model))
    assert seed.nodeless_certified


# --- Morse family ----------------------------------------------------------

def test_morse_seed_nu_minus_one_is_pure_first_kind(morse_model):
    # the family coefficient (2k/alpha)(1 + 1/nu) vanishes at nu = -1
    u = morse_seed(morse_model, -5.5, -1.0)
    kappa = math.sqrt(36.0 + 5.5)
    a = -6.0 + kappa
    b = 1.0 + 2.0 * kappa
    for x in (0.5, 2.0):
        z = morse_model.morse_z(x)
        m = kummer_m(a, b, z)
        expected = math.exp(-z / 2.0 - kappa * x + m.log_scale) * m.value
        assert abs(u.value_fn(x) - expected) < 1e-12 * abs(expected)


def test_morse_seed_rejects_nu_zero(morse_model):
    with pytest.raises(ValueError):
        morse_seed(morse_model, -5.5, 0.0)


def test_morse_seed_asymptotic_slopes(morse_model):
    # generic members grow like exp(+kappa x); the pure-M member decays
    # like exp(-kappa x).  Fit the log slope far to the right.
    kappa = math.sqrt(36.0 + 5.5)
    xs = np.linspace(20.0, 30.0, 11)

    def log_slope(seed):
        logs = [math.log(abs(seed.eval_scaled(x)[0])) + seed.eval_scaled(x)[2]
                for x in xs]
        return np.polyfit(xs, logs, 1)[0]

    assert abs(log_slope(morse_seed(morse_model, -5.5, -1.5)) - kappa) < 1e-6
    assert abs(log_slope(morse_seed(morse_model, -5.5, -1.0)) + kappa) < 1e-6


def test_morse_nodeless_interval(morse_model):
    grid = cert_grid(morse_model)
    for nu in (-1.5, 1.0, 5.0):
        assert certify_nodeless(morse_seed(morse_model, -5.5, nu), grid), nu
    assert not certify_nodeless(morse_seed(morse_model, -5.5, -0.5), grid)


# --- family structure ------------------------------------------------------

def test_oscillator_superposition(osc_model):
    # the family is affine in nu: u(nu1) + u(nu2) = 2 u((nu1+nu2)/2)
    eps = -0.6
    ua = oscillator_seed(osc_model, eps, 0.8)
    ub = oscillator_seed(osc_model, eps, -0.4)
    um = oscillator_seed(osc_model, eps, 0.2)
    for x in (-3.0, 0.5, 2.0):
        got = ua.value_fn(x) + ub.value_fn(x)
        assert abs(got - 2.0 * um.value_fn(x)) < 1e-11 * max(1.0, abs(got))


def test_branch_wronskian_nonzero(osc_model, morse_model):
    x = -0.7
    even = oscillator_seed(osc_model, -0.2, 0.0)
    mixed = oscillator_seed(osc_model, -0.2, 0.5)
    odd_v = mixed.value_fn(x) - even.value_fn(x)
    odd_d = mixed.deriv_fn(x) - even.deriv_fn(x)
    wr = even.value_fn(x) * odd_d - even.deriv_fn(x) * odd_v
    assert abs(wr) > 1e-8

    pure = morse_seed(morse_model, -5.5, -1.0)
    full = morse_seed(morse_model, -5.5, -1.5)
    second_v = full.value_fn(x) - pure.value_fn(x)
    second_d = full.deriv_fn(x) - pure.deriv_fn(x)
    wr = pure.value_fn(x) * second_d - pure.deriv_fn(x) * second_v
    assert abs(wr) > 1e-8


def test_positive_energy_rejected(osc_model, morse_model):
    with pytest.raises(ValueError):
        oscillator_seed(osc_model, 0.1, 0.0)
    with pytest.raises(ValueError):
        morse_seed(morse_model, 0.1, -1.5)


def test_exact_zero_sample_is_a_node():
    # a function crossing zero exactly on a grid point must not certify
    seed = SeedSolution(epsilon=0.0, nu=0.0,
                        eval_scaled=lambda x: (x, 1.0, 0.0))
    grid = Grid(-1.0, 1.0, 5)  # sample at x = 0 exactly
    assert not certify_nodeless(seed, grid)


def test_grazing_minimum_is_inconclusive():
    # quadratic touching ~1e-22: refinement cannot exclude a node
    def ev(x):
        v = x * x + 1e-22
        return v, 2.0 * x, 0.0

    seed = SeedSolution(epsilon=0.0, nu=0.0, eval_scaled=ev)
    with pytest.raises(NodelessInconclusiveError):
        certify_nodeless(seed, Grid(-1.0, 1.0, 101))
