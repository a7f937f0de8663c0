"""Spinor assembly and measurable quantities: density, current, energies.

A level-n spinor of a depth-k chain pairs the level-(n-1) eigenfunction of
the depth-(k-1) system (upper component) with the level-n eigenfunction of
the depth-k system (the imaginary lower component).  The ground state has
an identically vanishing upper component, which makes its probability
current zero by construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from .chain import ChainState, eigenfunction_k, schrodinger_level
from .model import UnitSystem


def _zero(x: float) -> float:
    return 0.0


@dataclass(frozen=True)
class SpinorState:
    k_wave: float
    upper: Callable[[float], float]
    lower: Callable[[float], float]
    level: int
    dirac_energy: float
    units: UnitSystem


def dirac_energy(units: UnitSystem, schrodinger_energy: float) -> float:
    """E = hbar v_F sqrt(curly-E); the reduced problem's energy map."""
    if schrodinger_energy < 0.0:
        raise ValueError(f"negative reduced energy {schrodinger_energy}")
    return units.hbar * units.v_fermi * math.sqrt(schrodinger_energy)


def assemble_spinor(c: ChainState, n: int) -> SpinorState:
    """Overall-normalized two-component state at level n of a depth>=1 chain."""
    if c.depth < 1:
        raise ValueError("spinor assembly needs at least one chain step")
    if n < 0:
        raise ValueError("level index must be >= 0")
    units = c.model.units
    energy = schrodinger_level(c, n)
    lower_fn = eigenfunction_k(c, n)
    if n == 0:
        return SpinorState(k_wave=c.model.k_wave, upper=_zero,
                           lower=lower_fn.value, level=0,
                           dirac_energy=0.0, units=units)
    upper_fn = eigenfunction_k(c.parent, n - 1)
    inv_root2 = 1.0 / math.sqrt(2.0)
    return SpinorState(
        k_wave=c.model.k_wave,
        upper=lambda x: inv_root2 * upper_fn.value(x),
        lower=lambda x: inv_root2 * lower_fn.value(x),
        level=n,
        dirac_energy=dirac_energy(units, energy),
        units=units,
    )


def probability_density(s: SpinorState, x: float) -> float:
    return s.upper(x) ** 2 + s.lower(x) ** 2


def probability_current(s: SpinorState, x: float) -> float:
    return s.units.e_charge * s.units.v_fermi * s.upper(x) * s.lower(x)
