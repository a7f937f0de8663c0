"""Seed solutions of the base Schrodinger problem at shifted factorization energies.

A seed is a generally non-normalizable solution u of
``-u'' + V-(x) u = eps * u`` with ``eps <= 0``, drawn from the
two-parameter family (eps, nu) the closed forms provide.  Seeds carry an
analytic derivative and a factored log scale so that the exponentially
growing tails never overflow; downstream chain algebra only ever consumes
scale-free ratios.

Seeds are deliberately left unnormalized: every derived quantity
(log-derivatives, log-Wronskian curvatures, renormalized eigenfunctions)
is invariant under rescaling, and the tests pin that invariance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

from .fields import Grid
from .model import MORSE, OSCILLATOR, ModelSpec
from .specfun import (SpecialValue, gamma_ratio, kummer_m, kummer_m_deriv,
                      tricomi_u, tricomi_u_deriv)

NODELESS_FLAG_RATIO = 1e-8     # sample-to-max ratio that triggers refinement
NODE_DECISION_RATIO = 1e-10    # mantissa ratio below which a node cannot be excluded
REFINE_ITERATIONS = 60


class NodelessInconclusiveError(RuntimeError):
    """Refinement could not separate a grazing minimum from a true node."""


ScaledEval = Callable[[float], tuple[float, float, float]]


@dataclass
class SeedSolution:
    """u with analytic u' at factorization energy ``epsilon``, family member ``nu``.

    ``eval_scaled(x)`` returns (v, d, s) with u = v*exp(s), u' = d*exp(s).
    """

    epsilon: float
    nu: float
    eval_scaled: ScaledEval
    level: int = 1
    nodeless_certified: bool = field(default=False)

    def value_fn(self, x: float) -> float:
        v, _, s = self.eval_scaled(x)
        return v * math.exp(s)

    def deriv_fn(self, x: float) -> float:
        _, d, s = self.eval_scaled(x)
        return d * math.exp(s)


def _combine(value_terms, deriv_terms):
    """Merge signed log-magnitude terms into (v, d, shared log scale)."""
    logs = [m for _, m in value_terms + deriv_terms if m > -math.inf]
    if not logs:
        return 0.0, 0.0, 0.0
    top = max(logs)
    v = math.fsum(sg * math.exp(m - top) for sg, m in value_terms)
    d = math.fsum(sg * math.exp(m - top) for sg, m in deriv_terms)
    return v, d, top


def _term(coef: float, sv: SpecialValue) -> tuple[float, float]:
    if coef == 0.0 or sv.value == 0.0:
        return 0.0, -math.inf
    return math.copysign(1.0, coef) * sv.sign(), math.log(abs(coef)) + sv.log_abs()


def oscillator_seed(m: ModelSpec, epsilon_sum: float, nu: float) -> SeedSolution:
    """General solution at energy ``epsilon_sum`` for the constant-field system.

    u = exp(-zeta^2/2) (M[a,1/2,zeta^2] + 2 nu (Gamma(a+1/2)/Gamma(a)) zeta M[a+1/2,3/2,zeta^2])
    with a = -epsilon_sum / (2 omega).  At a = 0 the gamma ratio vanishes
    and the seed degenerates to the gaussian ground-state shape.
    """
    if m.kind != OSCILLATOR:
        raise ValueError("oscillator_seed requires an oscillator model")
    if epsilon_sum > 0.0:
        raise ValueError("factorization energy must be <= 0")
    w = m.omega
    a = -epsilon_sum / (2.0 * w)
    c = 0.0 if a == 0.0 else 2.0 * nu * gamma_ratio(a + 0.5, a)
    root = math.sqrt(w / 2.0)

    def eval_scaled(x: float):
        z = m.zeta(x)
        z2 = z * z
        m1 = kummer_m(a, 0.5, z2)
        value_terms = [_term(1.0, m1)]
        # d(g)/dzeta - zeta*g, with g the bracketed combination
        dm1 = kummer_m_deriv(a, 0.5, z2)
        deriv_terms = [_term(2.0 * z, dm1), _term(-z, m1)]
        if c != 0.0:
            m2 = kummer_m(a + 0.5, 1.5, z2)
            dm2 = kummer_m_deriv(a + 0.5, 1.5, z2)
            value_terms.append(_term(c * z, m2))
            deriv_terms.append(_term(c, m2))
            deriv_terms.append(_term(2.0 * c * z2, dm2))
            deriv_terms.append(_term(-c * z2, m2))
        v, d, top = _combine(value_terms, deriv_terms)
        return v, root * d, top - z2 / 2.0

    return SeedSolution(epsilon=epsilon_sum, nu=nu, eval_scaled=eval_scaled)


def morse_seed(m: ModelSpec, epsilon_sum: float, nu: float) -> SeedSolution:
    """General solution at energy ``epsilon_sum`` for the decaying-field system.

    u = exp(-z/2) exp(-kappa x) (M[a,b,z] + (2k/alpha)(1 + 1/nu) U[a,b,z])
    with z = (2D/alpha) exp(-alpha x), kappa = sqrt(k^2 - eps),
    a = (kappa - k)/alpha and b = 1 + 2 kappa / alpha.
    """
    if m.kind != MORSE:
        raise ValueError("morse_seed requires a Morse model")
    if epsilon_sum > 0.0:
        raise ValueError("factorization energy must be <= 0")
    if nu == 0.0:
        raise ValueError("nu = 0 leaves the family coefficient (1 + 1/nu) undefined")
    k, alpha = m.k_wave, m.alpha
    kappa = math.sqrt(k * k - epsilon_sum)
    a = (kappa - k) / alpha
    b = 1.0 + 2.0 * kappa / alpha
    coef = (2.0 * k / alpha) * (1.0 + 1.0 / nu)

    def eval_scaled(x: float):
        z = m.morse_z(x)
        mv = kummer_m(a, b, z)
        dm = kummer_m_deriv(a, b, z)
        pref = alpha * z / 2.0 - kappa
        value_terms = [_term(1.0, mv)]
        deriv_terms = [_term(pref, mv), _term(-alpha * z, dm)]
        if coef != 0.0:
            uv = tricomi_u(a, b, z)
            du = tricomi_u_deriv(a, b, z)
            value_terms.append(_term(coef, uv))
            deriv_terms.append(_term(pref * coef, uv))
            deriv_terms.append(_term(-alpha * z * coef, du))
        v, d, top = _combine(value_terms, deriv_terms)
        return v, d, top - z / 2.0 - kappa * x

    return SeedSolution(epsilon=epsilon_sum, nu=nu, eval_scaled=eval_scaled)


def _refine_minimum(s: SeedSolution, lo: float, hi: float):
    """Locate the extremum of u inside [lo, hi] by bisection on u'.

    Returns (sign at extremum, mantissa |v|, slope reference) where the
    mantissa comes from the scaled evaluation: it measures how much of the
    locally dominant contribution survives the combination, which is the
    honest yardstick for "did this cancel down to noise".
    """
    width = hi - lo
    _, dlo, _ = s.eval_scaled(lo)
    _, dhi, _ = s.eval_scaled(hi)
    if dlo == 0.0 or dhi == 0.0 or (dlo > 0) == (dhi > 0):
        # no derivative sign change: scan the bracket directly
        best = (0.0, math.inf, 1.0)
        for i in range(33):
            x = lo + width * i / 32.0
            v, d, _ = s.eval_scaled(x)
            if v == 0.0:
                return 0.0, 0.0, 1.0
            if abs(v) < best[1]:
                best = (math.copysign(1.0, v), abs(v), max(1.0, abs(d) * width))
        return best
    for _ in range(REFINE_ITERATIONS):
        mid = 0.5 * (lo + hi)
        _, dm, _ = s.eval_scaled(mid)
        if dm == 0.0:
            lo = hi = mid
            break
        if (dm > 0) == (dlo > 0):
            lo = mid
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    v, _, _ = s.eval_scaled(x)
    if v == 0.0:
        return 0.0, 0.0, 1.0
    ref = max(1.0, abs(dlo) * width, abs(dhi) * width)
    return math.copysign(1.0, v), abs(v), ref


def certify_nodeless(s: SeedSolution, grid: Grid) -> bool:
    """Certify that u keeps one sign across the grid.

    Any sign change (or exact zero sample) is a node.  Interior local
    minima of |u| below ``NODELESS_FLAG_RATIO`` of the grid maximum are
    refined by bisection on the analytic derivative.  At the refined
    minimum the decision uses the evaluation mantissa: seeds grow like
    exp(+zeta^2/2), so a perfectly healthy interior minimum can sit 12+
    orders below the edge maxima, and only the surviving fraction of the
    locally dominant terms tells a small value from a cancelled one.  A
    mantissa below ``NODE_DECISION_RATIO`` of its local reference cannot
    be told apart from a node and raises ``NodelessInconclusiveError``.
    """
    xs = grid.xs
    signs = []
    mags = []
    for x in xs:
        v, _, sc = s.eval_scaled(x)
        if v == 0.0:
            s.nodeless_certified = False
            return False
        signs.append(1.0 if v > 0 else -1.0)
        mags.append(math.log(abs(v)) + sc)
    for i in range(len(xs) - 1):
        if signs[i] != signs[i + 1]:
            s.nodeless_certified = False
            return False
    top = max(mags)
    flag = top + math.log(NODELESS_FLAG_RATIO)
    for i in range(1, len(xs) - 1):
        if mags[i] <= flag and mags[i] <= mags[i - 1] and mags[i] <= mags[i + 1]:
            sign_min, mantissa, ref = _refine_minimum(s, xs[i - 1], xs[i + 1])
            if sign_min == 0.0 or sign_min != signs[i]:
                s.nodeless_certified = False
                return False
            if mantissa <= NODE_DECISION_RATIO * ref:
                raise NodelessInconclusiveError(
                    f"grazing minimum near x={xs[i]:.6g}: the surviving "
                    f"fraction {mantissa:.3e} of the dominant terms is below "
                    f"the {NODE_DECISION_RATIO:g} decision ratio")
    s.nodeless_certified = True
    return True
