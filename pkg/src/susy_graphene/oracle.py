"""Independent numerical ground truth: finite-difference diagonalization.

The three-point discretization of -d2/dx2 + V on a uniform grid with
Dirichlet boundaries is a symmetric tridiagonal matrix.  Its lowest
eigenpairs are found with a Sturm-sequence bisection for the values and
inverse iteration for the vectors, implemented here directly so the
oracle shares no code path with the analytic construction it checks.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .fields import Grid, ScalarField


class ConvergenceError(RuntimeError):
    pass


class BoundaryLeakWarning(UserWarning):
    """An eigenvector has non-negligible amplitude at the grid edge."""


@dataclass(frozen=True)
class DiagonalizationResult:
    eigenvalues: list[float]
    eigenvectors: list[np.ndarray]
    grid: Grid


def _check_uniform(xs: np.ndarray) -> float:
    steps = np.diff(xs)
    h = steps.mean()
    if np.max(np.abs(steps - h)) > 1e-9 * abs(h):
        raise ValueError("diagonalize requires a uniform grid")
    return float(h)


def _sturm_counts(diag: np.ndarray, e2: float, lams: np.ndarray) -> np.ndarray:
    """Number of eigenvalues strictly below each lambda (vectorized)."""
    q = diag[0] - lams
    counts = (q < 0).astype(int)
    tiny = 1e-300
    for i in range(1, len(diag)):
        q = np.where(q == 0.0, -tiny, q)
        q = diag[i] - lams - e2 / q
        counts += q < 0
    return counts


def _solve_tridiagonal(diag, off, rhs):
    """(T - shift) v = rhs by LU with partial pivoting; T tridiagonal symmetric."""
    n = len(diag)
    a = diag.copy()
    b = np.full(n - 1, off)     # superdiagonal
    c = np.full(n - 1, off)     # subdiagonal
    extra = np.zeros(n)         # second superdiagonal created by row swaps
    r = rhs.copy()
    for i in range(n - 1):
        if abs(c[i]) > abs(a[i]):
            # swap rows i, i+1
            a[i], c[i] = c[i], a[i]
            save = b[i]
            b[i] = a[i + 1]
            a[i + 1] = save
            extra[i] = b[i + 1] if i + 1 < n - 1 else 0.0
            if i + 1 < n - 1:
                b[i + 1] = 0.0
            r[i], r[i + 1] = r[i + 1], r[i]
        if a[i] == 0.0:
            a[i] = 1e-300
        m = c[i] / a[i]
        a[i + 1] -= m * b[i]
        if i + 1 < n - 1:
            b[i + 1] -= m * extra[i]
        r[i + 1] -= m * r[i]
    if a[-1] == 0.0:
        a[-1] = 1e-300
    v = np.zeros(n)
    v[-1] = r[-1] / a[-1]
    v[-2] = (r[-2] - b[-2] * v[-1]) / a[-2]
    for i in range(n - 3, -1, -1):
        v[i] = (r[i] - b[i] * v[i + 1] - extra[i] * v[i + 2]) / a[i]
    return v


def diagonalize(v: ScalarField, m_lowest: int) -> DiagonalizationResult:
    """Lowest eigenpairs of -psi'' + V psi on the sampled grid (Dirichlet edges)."""
    if m_lowest < 1:
        raise ValueError("m_lowest must be >= 1")
    h = _check_uniform(v.xs)
    n = len(v.xs)
    if m_lowest > n - 2:
        raise ValueError("more eigenpairs requested than the grid supports")
    diag = v.values + 2.0 / h ** 2
    off = -1.0 / h ** 2
    e2 = off * off
    radius = 2.0 * abs(off)
    lo = np.full(m_lowest, float(diag.min() - radius))
    hi = np.full(m_lowest, float(diag.max() + radius))
    scale = max(abs(lo[0]), abs(hi[0]), 1.0)
    idx = np.arange(m_lowest)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        counts = _sturm_counts(diag, e2, mid)
        take = counts <= idx
        lo = np.where(take, mid, lo)
        hi = np.where(take, hi, mid)
        if np.all(hi - lo <= 1e-13 * scale):
            break
    else:
        raise ConvergenceError("Sturm bisection did not converge")
    eigenvalues = [float(x) for x in 0.5 * (lo + hi)]

    rng = np.random.default_rng(987654321)
    vectors: list[np.ndarray] = []
    for j, lam in enumerate(eigenvalues):
        shift = lam + 1e-11 * scale
        vec = rng.standard_normal(n)
        vec /= np.linalg.norm(vec)
        ok = False
        for _ in range(10):
            vec = _solve_tridiagonal(diag - shift, off, vec)
            for jj in range(j):
                if abs(eigenvalues[jj] - lam) < 1e-6 * scale:
                    vec -= (vectors[jj] @ vec) * vectors[jj]
            norm = np.linalg.norm(vec)
            if norm == 0.0 or not np.isfinite(norm):
                vec = rng.standard_normal(n)
                vec /= np.linalg.norm(vec)
                continue
            vec /= norm
            resid = np.abs(diag * vec - lam * vec
                           + off * np.concatenate(([0.0], vec[:-1]))
                           + off * np.concatenate((vec[1:], [0.0]))).max()
            if resid <= 1e-8 * scale:
                ok = True
                break
        if not ok:
            raise ConvergenceError(
                f"inverse iteration stalled for eigenvalue {lam}")
        if vec[np.argmax(np.abs(vec))] < 0:
            vec = -vec
        peak = np.abs(vec).max()
        if abs(vec[0]) > 1e-6 * peak or abs(vec[-1]) > 1e-6 * peak:
            warnings.warn(
                f"eigenvector {j} has edge amplitude above 1e-6 of its peak; "
                "the box may be too small", BoundaryLeakWarning)
        vectors.append(vec)
    grid = Grid(float(v.xs[0]), float(v.xs[-1]), n)
    return DiagonalizationResult(eigenvalues, vectors, grid)


def residual(v: ScalarField, psi: ScalarField, energy: float) -> float:
    """max interior |(-D2 + V - E) psi| / max |psi| with the 3-point stencil."""
    if not np.array_equal(v.xs, psi.xs):
        raise ValueError("residual requires a common grid")
    h = _check_uniform(v.xs)
    p = psi.values
    d2 = (p[2:] - 2.0 * p[1:-1] + p[:-2]) / h ** 2
    r = -d2 + (v.values[1:-1] - energy) * p[1:-1]
    return float(np.abs(r).max() / np.abs(p).max())


def inner_product(f: ScalarField, g: ScalarField) -> float:
    """Composite-Simpson integral of f*g on the shared grid.

    An even point count leaves one panel over; it is closed with the
    trapezoid rule.
    """
    if not np.array_equal(f.xs, g.xs):
        raise ValueError("inner_product requires a common grid")
    h = _check_uniform(f.xs)
    y = f.values * g.values
    n = len(y)
    if n % 2 == 0:
        simpson_part = y[:-1]
        tail = 0.5 * h * (y[-2] + y[-1])
    else:
        simpson_part = y
        tail = 0.0
    s = simpson_part[0] + simpson_part[-1] + 4.0 * simpson_part[1:-1:2].sum() \
        + 2.0 * simpson_part[2:-2:2].sum()
    return float(h / 3.0 * s + tail)
