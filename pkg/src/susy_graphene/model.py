"""Base shape-invariant systems: constant-field oscillator and decaying-field Morse.

Both systems are defined by a superpotential W0 whose square and derivative
give the partner potentials V+/- = W0^2 +/- W0', with the magnetic field
proportional to W0'.  Closed-form spectra and normalized bound states are
provided for the lower partner, which is the departure point for all the
intertwining chains.

Model parameters are interpreted in natural units; the UnitSystem scales
only observable outputs (magnetic field, energies, currents).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .specfun import hermite, laguerre, log_gamma


@dataclass(frozen=True)
class UnitSystem:
    hbar: float = 1.0
    c: float = 1.0
    e_charge: float = 1.0
    v_fermi: float = 1.0

    def __post_init__(self):
        for name in ("hbar", "c", "e_charge", "v_fermi"):
            if getattr(self, name) <= 0.0:
                raise ValueError(f"UnitSystem.{name} must be positive")

    @property
    def field_scale(self) -> float:
        """c*hbar/e, the factor converting W' to a magnetic field."""
        return self.c * self.hbar / self.e_charge


OSCILLATOR = "oscillator"
MORSE = "morse"


@dataclass(frozen=True)
class ModelSpec:
    """A base system: kind plus its physical parameters.

    Use the ``oscillator`` / ``morse`` factories rather than the raw
    constructor; they validate the parameter set for the chosen kind.
    """

    kind: str
    k_wave: float
    omega: float | None = None
    alpha: float | None = None
    d_strength: float | None = None
    units: UnitSystem = field(default_factory=UnitSystem)

    def __post_init__(self):
        if self.kind == OSCILLATOR:
            if self.omega is None or self.omega <= 0.0:
                raise ValueError("oscillator requires omega > 0")
        elif self.kind == MORSE:
            if self.alpha is None or self.alpha <= 0.0:
                raise ValueError("morse requires alpha > 0")
            if self.d_strength is None or self.d_strength <= 0.0:
                raise ValueError("morse requires d_strength > 0")
            if self.k_wave <= 0.0:
                raise ValueError("morse bound states require k_wave > 0")
        else:
            raise ValueError(f"unknown model kind {self.kind!r}")

    @classmethod
    def oscillator(cls, omega: float = 1.0, k_wave: float = 1.0,
                   units: UnitSystem | None = None) -> "ModelSpec":
        return cls(kind=OSCILLATOR, k_wave=k_wave, omega=omega,
                   units=units or UnitSystem())

    @classmethod
    def morse(cls, alpha: float = 1.0, d_strength: float = 1.0, k_wave: float = 6.0,
              units: UnitSystem | None = None) -> "ModelSpec":
        return cls(kind=MORSE, k_wave=k_wave, alpha=alpha, d_strength=d_strength,
                   units=units or UnitSystem())

    # scaled coordinate about the well minimum (oscillator only)
    def zeta(self, x: float) -> float:
        return math.sqrt(self.omega / 2.0) * (x + 2.0 * self.k_wave / self.omega)

    # exponential argument of the Morse functions
    def morse_z(self, x: float) -> float:
        return (2.0 * self.d_strength / self.alpha) * math.exp(-self.alpha * x)

    def default_range(self) -> tuple[float, float]:
        """Window covering the bound states; overridable from configs."""
        if self.kind == OSCILLATOR:
            center = -2.0 * self.k_wave / self.omega
            half = 10.0 / math.sqrt(self.omega)
            return center - half, center + half
        left = -math.log(4.0 * self.k_wave / self.d_strength) / self.alpha - 2.0
        return left, 12.0 / self.alpha


@dataclass(frozen=True)
class SpectrumEntry:
    n: int
    schrodinger_energy: float
    dirac_energy: float
    eigenfunction: Callable[[float], float]


class BoundState:
    """Normalized bound state of the lower partner with analytic derivative."""

    def __init__(self, model: ModelSpec, n: int):
        self.model = model
        self.n = n
        if model.kind == OSCILLATOR:
            w = model.omega
            self._norm = math.sqrt(math.sqrt(w / (2.0 * math.pi))
                                   / (2.0 ** n * math.factorial(n)))
        else:
            k, a = model.k_wave, model.alpha
            s = k / a - n
            if s <= 0.0:
                raise ValueError(f"Morse level n={n} is not normalizable (k/alpha={k / a})")
            log_norm = (s * math.log(2.0 * model.d_strength / a)
                        + 0.5 * (math.log(2.0 * a * s) + math.log(math.factorial(n))
                                 - log_gamma(2.0 * k / a - n + 1.0)))
            self._norm = math.exp(log_norm)

    def value(self, x: float) -> float:
        m, n = self.model, self.n
        if m.kind == OSCILLATOR:
            z = m.zeta(x)
            return self._norm * math.exp(-z * z / 2.0) * hermite(n, z)
        a, k = m.alpha, m.k_wave
        z = m.morse_z(x)
        return self._norm * math.exp(-z / 2.0 - (k - a * n) * x) * laguerre(n, 2.0 * k / a - 2.0 * n, z)

    def deriv(self, x: float) -> float:
        m, n = self.model, self.n
        if m.kind == OSCILLATOR:
            z = m.zeta(x)
            dh = 2.0 * n * hermite(n - 1, z) if n > 0 else 0.0
            return (self._norm * math.sqrt(m.omega / 2.0) * math.exp(-z * z / 2.0)
                    * (dh - z * hermite(n, z)))
        a, k = m.alpha, m.k_wave
        z = m.morse_z(x)
        lag = laguerre(n, 2.0 * k / a - 2.0 * n, z)
        dlag = -laguerre(n - 1, 2.0 * k / a - 2.0 * n + 1.0, z) if n > 0 else 0.0
        pref = self._norm * math.exp(-z / 2.0 - (k - a * n) * x)
        return pref * ((a * z / 2.0 - (k - a * n)) * lag - a * z * dlag)

    def __call__(self, x: float) -> float:
        return self.value(x)


def superpotential_w0(m: ModelSpec, x: float) -> float:
    if m.kind == OSCILLATOR:
        return (m.omega / 2.0) * x + m.k_wave
    return m.k_wave - m.d_strength * math.exp(-m.alpha * x)


def superpotential_w0_prime(m: ModelSpec, x: float) -> float:
    if m.kind == OSCILLATOR:
        return m.omega / 2.0
    return m.alpha * m.d_strength * math.exp(-m.alpha * x)


def base_potential(m: ModelSpec, sign: str, x: float) -> float:
    """Partner potential V+ or V- = W0^2 +/- W0'."""
    if sign not in ("plus", "minus"):
        raise ValueError(f"sign must be 'plus' or 'minus', got {sign!r}")
    if m.kind == OSCILLATOR:
        quad = (m.omega ** 2 / 4.0) * (x + 2.0 * m.k_wave / m.omega) ** 2
        return quad + (m.omega / 2.0 if sign == "plus" else -m.omega / 2.0)
    k, d, a = m.k_wave, m.d_strength, m.alpha
    e1 = math.exp(-a * x)
    shift = -a / 2.0 if sign == "plus" else a / 2.0
    return k * k + d * d * e1 * e1 - 2.0 * d * (k + shift) * e1


def base_potential_derivs(m: ModelSpec, x: float, order: int) -> list[float]:
    """[V-, V-', ..., V-^(order)] closed-form derivatives of the lower partner."""
    out = [base_potential(m, "minus", x)]
    if m.kind == OSCILLATOR:
        w, k = m.omega, m.k_wave
        if order >= 1:
            out.append((w * w / 2.0) * (x + 2.0 * k / w))
        if order >= 2:
            out.append(w * w / 2.0)
        out.extend(0.0 for _ in range(3, order + 1))
        return out
    k, d, a = m.k_wave, m.d_strength, m.alpha
    e1 = math.exp(-a * x)
    e2 = e1 * e1
    c1 = -2.0 * d * (k + a / 2.0)
    for p in range(1, order + 1):
        out.append(d * d * (-2.0 * a) ** p * e2 + c1 * (-a) ** p * e1)
    return out


def base_field(m: ModelSpec, x: float) -> float:
    """Magnetic field of the undeformed system, (c hbar / e) * W0'."""
    return m.units.field_scale * superpotential_w0_prime(m, x)


def bound_state_count(m: ModelSpec) -> int:
    """Number of normalizable Morse levels (k - alpha*n > 0); unbounded for the oscillator."""
    if m.kind == OSCILLATOR:
        raise ValueError("oscillator spectrum is unbounded")
    ratio = m.k_wave / m.alpha
    count = math.ceil(ratio) - 1 if ratio == int(ratio) else math.floor(ratio)
    count += 1  # levels n = 0 .. count-1 inclusive
    if count <= 0:
        raise ValueError(f"no Morse bound state for k={m.k_wave}, alpha={m.alpha}")
    return count


def schrodinger_levels(m: ModelSpec, n: int) -> float:
    """Closed-form level n of the lower partner (ground state at zero)."""
    if m.kind == OSCILLATOR:
        return m.omega * n
    return m.alpha * n * (2.0 * m.k_wave - m.alpha * n)


def base_spectrum(m: ModelSpec, n_max: int) -> list[SpectrumEntry]:
    """Levels 0..n_max of the lower partner with normalized eigenfunctions.

    For the Morse system n_max is clamped to the finite bound-state count.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    top = n_max
    if m.kind == MORSE:
        top = min(n_max, bound_state_count(m) - 1)
    entries = []
    for n in range(top + 1):
        energy = schrodinger_levels(m, n)
        entries.append(SpectrumEntry(
            n=n,
            schrodinger_energy=energy,
            dirac_energy=m.units.hbar * m.units.v_fermi * math.sqrt(energy),
            eigenfunction=BoundState(m, n),
        ))
    return entries
