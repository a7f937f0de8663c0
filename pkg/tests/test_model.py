import math

import numpy as np
import pytest
from scipy.integrate import quad

from susy_graphene.model import (ModelSpec, UnitSystem, base_field,
                                 base_potential, base_potential_derivs,
                                 base_spectrum, bound_state_count,
                                 superpotential_w0, superpotential_w0_prime)

from fdtools import fd_second


def test_superpotential_values():
    osc = ModelSpec.oscillator(omega=1.0, k_wave=0.0)
    assert superpotential_w0(osc, 0.0) == 0.0
    mor = ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0)
    assert abs(superpotential_w0(mor, 40.0) - 6.0) < 1e-12
    assert superpotential_w0(mor, 0.0) == 5.0


def test_base_potential_values():
    osc = ModelSpec.oscillator(omega=1.0, k_wave=0.0)
    assert base_potential(osc, "minus", 0.0) == -0.5
    mor = ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0)
    assert abs(base_potential(mor, "minus", 40.0) - 36.0) < 1e-12


def test_base_potential_matches_superpotential_composition():
    rng = np.random.default_rng(5)
    for m in (ModelSpec.oscillator(omega=1.3, k_wave=0.7),
              ModelSpec.morse(alpha=0.8, d_strength=1.4, k_wave=5.0)):
        for x in rng.uniform(-3.0, 6.0, 25):
            w = superpotential_w0(m, x)
            wp = superpotential_w0_prime(m, x)
            assert abs(base_potential(m, "minus", x) - (w * w - wp)) < 1e-12 * max(1, w * w)
            assert abs(base_potential(m, "plus", x) - (w * w + wp)) < 1e-12 * max(1, w * w)


def test_base_potential_rejects_bad_sign():
    m = ModelSpec.oscillator()
    with pytest.raises(ValueError):
        base_potential(m, "up", 0.0)


def test_partner_gap_is_twice_w0_prime():
    for m in (ModelSpec.oscillator(omega=2.0, k_wave=1.0),
              ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0)):
        x0, x1 = m.default_range()
        for x in np.linspace(x0, x1, 101):
            gap = base_potential(m, "plus", x) - base_potential(m, "minus", x)
            assert abs(gap - 2.0 * superpotential_w0_prime(m, x)) < 1e-12 * max(1, abs(gap))


def test_base_field_values():
    osc = ModelSpec.oscillator(omega=1.0, k_wave=1.0)
    for x in (-5.0, 0.0, 3.3):
        assert base_field(osc, x) == 0.5
    mor = ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0)
    assert abs(base_field(mor, 0.0) - 1.0) < 1e-14  # D alpha c hbar / e with D = 1
    assert abs(base_field(mor, 1.0) / base_field(mor, 0.0) - math.exp(-1.0)) < 1e-14


def test_base_field_uses_units():
    units = UnitSystem(hbar=2.0, c=3.0, e_charge=0.5)
    osc = ModelSpec.oscillator(omega=1.0, k_wave=0.0, units=units)
    assert abs(base_field(osc, 0.0) - (3.0 * 2.0 / 0.5) * 0.5) < 1e-14


def test_oscillator_spectrum_is_linear():
    m = ModelSpec.oscillator(omega=1.0, k_wave=1.0)
    entries = base_spectrum(m, 3)
    assert [e.schrodinger_energy for e in entries] == [0.0, 1.0, 2.0, 3.0]
    assert entries[2].dirac_energy == math.sqrt(2.0)


def test_morse_spectrum_first_level():
    m = ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0)
    entries = base_spectrum(m, 3)
    assert abs(entries[1].schrodinger_energy - 11.0) < 1e-12
    assert [e.schrodinger_energy for e in entries] == [0.0, 11.0, 20.0, 27.0]


def test_morse_bound_state_count():
    m = ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0)
    assert bound_state_count(m) == 6  # n = 0..5, k - alpha n > 0
    assert bound_state_count(ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=5.7)) == 6
    # clamping: asking for more levels returns only the bound ones
    assert len(base_spectrum(m, 50)) == 6


def test_eigenfunctions_normalized_by_quadrature():
    for m in (ModelSpec.oscillator(omega=1.0, k_wave=1.0),
              ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0)):
        x0, x1 = m.default_range()
        for entry in base_spectrum(m, 3):
            total, err = quad(lambda x: entry.eigenfunction(x) ** 2, x0 - 4, x1 + 4,
                              limit=300)
            assert err < 1e-7
            assert abs(total - 1.0) < 1e-8, (m.kind, entry.n)


def test_ground_state_annihilated():
    for m in (ModelSpec.oscillator(omega=1.0, k_wave=1.0),
              ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0)):
        psi = base_spectrum(m, 0)[0].eigenfunction
        x0, x1 = m.default_range()
        worst = max(abs(psi.deriv(x) + superpotential_w0(m, x) * psi.value(x))
                    for x in np.linspace(x0, x1, 401))
        assert worst <= 1e-10


def test_eigenfunction_schrodinger_residual():
    # independent check: 4th-order stencil at h = 1e-3 against the closed forms
    for m, window in ((ModelSpec.oscillator(omega=1.0, k_wave=1.0), (-9.0, 5.0)),
                      (ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0), (-3.0, 10.0))):
        for entry in base_spectrum(m, 3):
            psi = entry.eigenfunction
            xs = np.linspace(*window, 81)
            peak = max(abs(psi(x)) for x in xs)
            for x in xs:
                res = (-fd_second(psi.value, x)
                       + (base_potential(m, "minus", x) - entry.schrodinger_energy)
                       * psi.value(x))
                assert abs(res) <= 1e-6 * peak


def test_eigenfunction_deriv_consistent():
    m = ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0)
    psi = base_spectrum(m, 2)[2].eigenfunction
    for x in (-1.0, 0.5, 2.0):
        fd = (psi.value(x + 5e-6) - psi.value(x - 5e-6)) / 1e-5
        assert abs(fd - psi.deriv(x)) < 1e-7 * max(1.0, abs(fd))


def test_potential_derivative_table():
    m = ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=6.0)
    x = 0.4
    table = base_potential_derivs(m, x, 3)
    fd1 = (base_potential(m, "minus", x + 1e-5) - base_potential(m, "minus", x - 1e-5)) / 2e-5
    assert abs(table[1] - fd1) < 1e-7 * max(1.0, abs(fd1))
    assert abs(table[0] - base_potential(m, "minus", x)) == 0.0


def test_modelspec_validation():
    with pytest.raises(ValueError):
        ModelSpec.oscillator(omega=0.0)
    with pytest.raises(ValueError):
        ModelSpec.morse(alpha=1.0, d_strength=-1.0, k_wave=6.0)
    with pytest.raises(ValueError):
        ModelSpec.morse(alpha=1.0, d_strength=1.0, k_wave=0.0)
    with pytest.raises(ValueError):
        ModelSpec(kind="box", k_wave=1.0)
    with pytest.raises(ValueError):
        UnitSystem(hbar=-1.0)


def test_dirac_energy_attached_to_entries():
    units = UnitSystem(hbar=2.0, v_fermi=3.0)
    m = ModelSpec.oscillator(omega=4.0, k_wave=0.0, units=units)
    entries = base_spectrum(m, 1)
    assert abs(entries[1].dirac_energy - 2.0 * 3.0 * 2.0) < 1e-12
