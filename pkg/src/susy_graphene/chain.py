"""Iterated intertwining engine: deformed potentials, fields and eigen-ladders.

A depth-k chain is an ordered list of (epsilon_i, nu_i) steps.  Step i
contributes a base seed at energy sum(epsilon_1..epsilon_i); seeds are
pushed through the earlier first-order operators
``L_i = -d/dx + W_i`` to become the transformation functions of their own
level.  Everything downstream is algebraic:

* superpotentials  W_i = u_i'/u_i  of the propagated seeds,
* potentials       V_i = 2 W_i^2 - V_{i-1} + epsilon_i,
* fields           B_i proportional to W_i' = V_{i-1} - epsilon_i - W_i^2,
* derivatives of propagated seeds from the Schrodinger relation
  u'' = (V - sigma) u  -- never from numerical differencing, which the
  exponentially growing seeds would not survive.

A second, independent evaluation path reconstructs V_k from the
log-curvature of the seed Wronskian with analytic row derivatives; the
two paths are cross-checked in the tests.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .fields import Grid
from .model import (MORSE, OSCILLATOR, BoundState, ModelSpec, SpectrumEntry,
                    base_field, base_potential, base_potential_derivs,
                    base_spectrum, bound_state_count, schrodinger_levels,
                    superpotential_w0_prime)
from .seeds import (NodelessInconclusiveError, SeedSolution, certify_nodeless,
                    morse_seed, oscillator_seed)

CERTIFICATION_POINTS = 4001
_RESCALE_BOUND = 1e120


class ChainConstructionError(RuntimeError):
    """A chain step could not be built."""

    def __init__(self, message: str, level: int, epsilon: float, nu: float):
        super().__init__(message)
        self.level = level
        self.epsilon = epsilon
        self.nu = nu


class ChainNodeError(ChainConstructionError):
    """The would-be transformation function has a node."""


class ChainOrderingError(ValueError):
    """Factorization energies must satisfy eps_k < ... < eps_1 <= 0."""


class SingularEvaluationError(RuntimeError):
    """A transformation function vanished at the evaluation point."""


class NonNormalizableError(RuntimeError):
    """The inverse-seed ground state is not square integrable."""


@dataclass(frozen=True)
class ChainStep:
    epsilon: float
    nu: float
    seed: SeedSolution


class _Point:
    """Everything the chain knows at one x: seed columns, W_i, V_i."""

    __slots__ = ("history", "superpotentials", "potentials")

    def __init__(self, history, superpotentials, potentials):
        self.history = history            # history[i][j] = (v, d, s) of u_{j+1} after L_1..L_i
        self.superpotentials = superpotentials
        self.potentials = potentials      # V_0 .. V_k


class ChainState:
    """Immutable chain of intertwining steps over a base model.

    New states are produced by :func:`extend_chain`; evaluation results are
    memoized per point, which keeps repeated potential / field /
    eigenfunction sampling on a common grid cheap.
    """

    def __init__(self, model: ModelSpec, steps: tuple[ChainStep, ...],
                 parent: "ChainState | None"):
        self.model = model
        self.steps = steps
        self.parent = parent
        self._eps_prefix = [0.0]
        for st in steps:
            self._eps_prefix.append(self._eps_prefix[-1] + st.epsilon)
        self._cache: dict[float, _Point] = {}
        self._eigen_cache: dict[int, "_Eigenfunction"] = {}

    @property
    def depth(self) -> int:
        return len(self.steps)

    @property
    def cumulative_shift(self) -> float:
        return self._eps_prefix[-1]

    @property
    def epsilons(self) -> tuple[float, ...]:
        return tuple(st.epsilon for st in self.steps)

    @property
    def superpotentials(self) -> list[Callable[[float], float]]:
        return [self.superpotential(i) for i in range(1, self.depth + 1)]

    def superpotential(self, level: int) -> Callable[[float], float]:
        if not 1 <= level <= self.depth:
            raise ValueError(f"level must be in 1..{self.depth}")
        return lambda x: self._point(x).superpotentials[level - 1]

    def propagated(self, j: int, i: int) -> tuple[Callable, Callable]:
        """(value_fn, deriv_fn) of seed j pushed through L_1..L_i, i < j <= depth."""
        if not 0 <= i < j <= self.depth:
            raise ValueError("propagated requires 0 <= i < j <= depth")

        def value(x: float) -> float:
            v, _, s = self._point(x).history[i][j - 1]
            return v * math.exp(s)

        def deriv(x: float) -> float:
            _, d, s = self._point(x).history[i][j - 1]
            return d * math.exp(s)

        return value, deriv

    def transformation_function(self, level: int) -> SeedSolution:
        """u_level propagated to its own level, as an evaluable seed."""
        if not 1 <= level <= self.depth:
            raise ValueError(f"level must be in 1..{self.depth}")
        step = self.steps[level - 1]
        if level == 1:
            return step.seed

        def eval_scaled(x: float):
            return self._point(x).history[level - 1][level - 1]

        return SeedSolution(epsilon=step.epsilon, nu=step.nu,
                            eval_scaled=eval_scaled, level=level)

    def _sigma(self, i: int, j: int) -> float:
        # energy of column j relative to V_i: sum eps_{i+1..j}
        return self._eps_prefix[j] - self._eps_prefix[i]

    def _point(self, x: float) -> _Point:
        pt = self._cache.get(x)
        if pt is not None:
            return pt
        k = self.depth
        cols = [list(st.seed.eval_scaled(x)) for st in self.steps]
        history = [ [tuple(c) for c in cols] ]
        pots = [base_potential(self.model, "minus", x)]
        sups = []
        for i in range(1, k + 1):
            v, d, _ = cols[i - 1]
            if v == 0.0:
                raise SingularEvaluationError(
                    f"transformation function of level {i} vanishes at x={x}")
            w = d / v
            sups.append(w)
            pots.append(2.0 * w * w - pots[-1] + self.steps[i - 1].epsilon)
            for j in range(i + 1, k + 1):
                vj, dj, sj = cols[j - 1]
                sigma = self._sigma(i, j)
                nv = -dj + w * vj
                nd = (sigma - w * w) * vj + w * dj
                mag = max(abs(nv), abs(nd))
                if mag > _RESCALE_BOUND or (0.0 < mag < 1.0 / _RESCALE_BOUND):
                    ln = math.log(mag)
                    nv *= math.exp(-ln)
                    nd *= math.exp(-ln)
                    sj += ln
                cols[j - 1] = [nv, nd, sj]
            history.append([tuple(c) for c in cols])
        pt = _Point(history, sups, pots)
        self._cache[x] = pt
        return pt


def new_chain(model: ModelSpec) -> ChainState:
    return ChainState(model, (), None)


def _make_seed(model: ModelSpec, epsilon_sum: float, nu: float) -> SeedSolution:
    if model.kind == OSCILLATOR:
        return oscillator_seed(model, epsilon_sum, nu)
    return morse_seed(model, epsilon_sum, nu)


def extend_chain(c: ChainState, epsilon_next: float, nu_next: float) -> ChainState:
    """One more intertwining step; certifies the new transformation function."""
    if c.depth == 0:
        if epsilon_next > 0.0:
            raise ChainOrderingError(
                f"first factorization energy must be <= 0, got {epsilon_next}")
    elif epsilon_next >= c.steps[-1].epsilon:
        raise ChainOrderingError(
            f"factorization energies must decrease strictly: "
            f"{epsilon_next} not below {c.steps[-1].epsilon}")
    seed = _make_seed(c.model, c.cumulative_shift + epsilon_next, nu_next)
    return extend_chain_with_seed(c, ChainStep(epsilon_next, nu_next, seed))


def extend_chain_with_seed(c: ChainState, step: ChainStep) -> ChainState:
    new = ChainState(c.model, c.steps + (step,), parent=c)
    level = new.depth
    transform = new.transformation_function(level)
    x0, x1 = c.model.default_range()
    grid = Grid(x0, x1, CERTIFICATION_POINTS)
    try:
        ok = certify_nodeless(transform, grid)
    except NodelessInconclusiveError as err:
        raise ChainConstructionError(
            f"level {level} nodelessness inconclusive for "
            f"(epsilon={step.epsilon}, nu={step.nu}): {err}",
            level, step.epsilon, step.nu) from err
    if not ok:
        raise ChainNodeError(
            f"node detected in the level-{level} transformation function "
            f"(epsilon={step.epsilon}, nu={step.nu}); the potential would be singular",
            level, step.epsilon, step.nu)
    return new


def build_chain(model: ModelSpec, steps: list[tuple[float, float]]) -> ChainState:
    c = new_chain(model)
    for eps, nu in steps:
        c = extend_chain(c, eps, nu)
    return c


def potential_k(c: ChainState, x: float) -> float:
    """Deformed potential after all chain steps (V- for an empty chain)."""
    return c._point(x).potentials[-1]


def field_k(c: ChainState, x: float) -> float:
    """Magnetic field of the deepest level, from the algebraic W_k'."""
    if c.depth == 0:
        return base_field(c.model, x)
    pt = c._point(x)
    w = pt.superpotentials[-1]
    w_prime = pt.potentials[-2] - c.steps[-1].epsilon - w * w
    return c.model.units.field_scale * w_prime


def _wronskian_tables(c: ChainState, x: float, max_order: int):
    """Per-column derivative lists u^(0..max_order) in mantissa space."""
    k = c.depth
    vd = base_potential_derivs(c.model, x, max(0, max_order - 2))
    tables = []
    for j in range(1, k + 1):
        v, d, _ = c.steps[j - 1].seed.eval_scaled(x)
        derivs = [v, d]
        e_j = c._sigma(0, j)
        for p in range(max_order - 1):
            acc = -e_j * derivs[p]
            for q in range(min(p, len(vd) - 1) + 1):
                acc += math.comb(p, q) * vd[q] * derivs[p - q]
            derivs.append(acc)
        tables.append(derivs)
    return tables


def potential_k_wronskian(c: ChainState, x: float) -> float:
    """Cross-validation path: V- - 2 (ln Wronskian)'' - sum(eps).

    Wronskian derivatives are assembled analytically from the Schrodinger
    relation; the per-column exponential scales cancel in the ratios.
    """
    k = c.depth
    if k == 0:
        return base_potential(c.model, "minus", x)
    tables = _wronskian_tables(c, x, k + 1)

    def det_rows(rows):
        mat = np.array([[tables[j][p] for j in range(k)] for p in rows])
        if k == 1:
            return mat[0, 0]
        return float(np.linalg.det(mat))

    w0 = det_rows(list(range(k)))
    if w0 == 0.0:
        raise SingularEvaluationError(f"Wronskian vanishes at x={x}")
    w1 = det_rows(list(range(k - 1)) + [k])
    w2 = det_rows(list(range(k - 1)) + [k + 1])
    if k >= 2:
        w2 += det_rows(list(range(k - 2)) + [k - 1, k])
    log_curv = w2 / w0 - (w1 / w0) ** 2
    return (base_potential(c.model, "minus", x) - 2.0 * log_curv
            - c.cumulative_shift)


def field_k_recursive(c: ChainState, x: float) -> float:
    """Cross-validation path: B_k = -B_{k-1} + scale * (ln W[u_{k-1}, u_k])''.

    The two-seed Wronskian derivative collapses to -eps_k u_{k-1} u_k,
    so the curvature needs only the propagated values and derivatives.
    """
    k = c.depth
    if k == 0:
        return base_field(c.model, x)
    if k == 1:
        # B_1 = -B_0 + scale * (ln[u_1 / psi_0])'' with (ln psi_0)'' = -W_0'
        v, d, _ = c.steps[0].seed.eval_scaled(x)
        w = d / v
        w_prime = (base_potential(c.model, "minus", x) - c.steps[0].epsilon
                   - w * w)
        return -base_field(c.model, x) + c.model.units.field_scale * (
            w_prime + superpotential_w0_prime(c.model, x))
    pt = c._point(x)
    va, da, sa = pt.history[k - 2][k - 2]
    vb, db, sb = pt.history[k - 2][k - 1]
    scale = math.exp(sb - sa) if abs(sb - sa) < 700 else None
    if scale is None:
        # evaluate the ratio pieces in a common frame
        top = max(sa, sb)
        va, da = va * math.exp(sa - top), da * math.exp(sa - top)
        vb, db = vb * math.exp(sb - top), db * math.exp(sb - top)
    else:
        vb, db = vb * scale, db * scale
    eps_k = c.steps[-1].epsilon
    wr = va * db - da * vb
    if wr == 0.0:
        raise SingularEvaluationError(f"two-seed Wronskian vanishes at x={x}")
    wr1 = -eps_k * va * vb
    wr2 = -eps_k * (da * vb + va * db)
    log_curv = wr2 / wr - (wr1 / wr) ** 2
    return -field_k(c.parent, x) + c.model.units.field_scale * log_curv


def schrodinger_level(c: ChainState, n: int) -> float:
    """Level n of the depth-k system, zero at its own ground state."""
    if n < 0:
        raise ValueError("level index must be >= 0")
    if c.depth == 0:
        return schrodinger_levels(c.model, n)
    if n == 0:
        return 0.0
    return schrodinger_level(c.parent, n - 1) - c.steps[-1].epsilon


def level_count(c: ChainState, requested: int) -> int:
    if c.model.kind == MORSE:
        return min(requested, bound_state_count(c.model) + c.depth - 1)
    return requested


class _Eigenfunction:
    """Normalized bound state of the depth-k system with analytic derivative."""

    def __init__(self, chain: ChainState, n: int):
        self.chain = chain
        self.n = n
        self.energy = schrodinger_level(chain, n)
        self._norm: float | None = None
        if chain.depth == 0:
            self._base = BoundState(chain.model, n)
        elif n == 0:
            self._base = None
        else:
            self._child = eigenfunction_k(chain.parent, n - 1, normalized=False)
            self._denom = math.sqrt(self._child.energy - chain.steps[-1].epsilon)

    def raw(self, x: float) -> tuple[float, float]:
        c, n = self.chain, self.n
        if c.depth == 0:
            return self._base.value(x), self._base.deriv(x)
        if n == 0:
            v, d, s = c._point(x).history[c.depth - 1][c.depth - 1]
            if v == 0.0:
                raise SingularEvaluationError(f"inverse seed singular at x={x}")
            inv = math.exp(-s) / v
            return inv, -(d / v) * inv
        vc, dc = self._child.raw(x)
        w = c._point(x).superpotentials[-1]
        value = (-dc + w * vc) / self._denom
        deriv = ((self.energy - w * w) * vc + w * dc) / self._denom
        return value, deriv

    def _normalization(self) -> float:
        if self._norm is None:
            self._norm = _l2_norm(self.raw, self.chain.model)
        return self._norm

    def value(self, x: float) -> float:
        return self.raw(x)[0] / self._normalization()

    def deriv(self, x: float) -> float:
        return self.raw(x)[1] / self._normalization()

    def __call__(self, x: float) -> float:
        return self.value(x)


def _simpson(xs: np.ndarray, ys: np.ndarray) -> float:
    h = xs[1] - xs[0]
    n = len(xs)
    if n % 2 == 1:
        return float(h / 3.0 * (ys[0] + ys[-1] + 4.0 * ys[1:-1:2].sum()
                                + 2.0 * ys[2:-2:2].sum()))
    core = _simpson(xs[:-1], ys[:-1])
    return core + float(0.5 * h * (ys[-2] + ys[-1]))


def _l2_norm(raw, model: ModelSpec) -> float:
    x0, x1 = model.default_range()
    xs = np.linspace(x0, x1, 2001)
    ys = np.array([raw(x)[0] ** 2 for x in xs])
    total = _simpson(xs, ys)
    peak = ys.max()
    chunk = (x1 - x0) / 4.0
    for edge, direction in ((x1, 1.0), (x0, -1.0)):
        prev_max = math.inf
        for _ in range(40):
            if direction > 0:
                cxs = np.linspace(edge, edge + chunk, 257)
            else:
                cxs = np.linspace(edge - chunk, edge, 257)
            cys = np.array([raw(x)[0] ** 2 for x in cxs])
            cmax = cys.max()
            if cmax <= 1e-14 * peak:
                break
            if cmax > prev_max:
                raise NonNormalizableError(
                    "tail integrand grows away from the well; the state is "
                    "not square integrable")
            total += _simpson(cxs, cys)
            peak = max(peak, cmax)
            prev_max = cmax
            edge += direction * chunk
        else:
            raise NonNormalizableError("tail integrand never fell below threshold")
    if total <= 0.0 or not math.isfinite(total):
        raise NonNormalizableError(f"norm integral came out {total}")
    return math.sqrt(total)


def eigenfunction_k(c: ChainState, n: int, normalized: bool = True):
    """Eigenfunction n of the deepest system; callable with .value/.deriv/.energy."""
    if n < 0:
        raise ValueError("eigenfunction index must be >= 0")
    if c.model.kind == MORSE and n > level_count(c, n):
        raise ValueError(f"level {n} is beyond the bound spectrum")
    cached = c._eigen_cache.get(n)
    if cached is None:
        cached = _Eigenfunction(c, n)
        c._eigen_cache[n] = cached
    if normalized:
        cached._normalization()
    return cached


def spectrum_k(c: ChainState, n_max: int) -> list[SpectrumEntry]:
    """Levels 0..n_max of the deepest system with normalized eigenfunctions."""
    if c.depth == 0:
        return base_spectrum(c.model, n_max)
    top = level_count(c, n_max)
    entries = []
    u = c.model.units
    for n in range(top + 1):
        energy = schrodinger_level(c, n)
        entries.append(SpectrumEntry(
            n=n,
            schrodinger_energy=energy,
            dirac_energy=u.hbar * u.v_fermi * math.sqrt(energy),
            eigenfunction=eigenfunction_k(c, n),
        ))
    return entries
