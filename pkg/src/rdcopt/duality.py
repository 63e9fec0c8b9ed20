"""Grid-based numerical checks of Fenchel-conjugate duality.

The tangent-bundle conjugate f*(p, X) = sup_q { <X, log_p(q)>_p - f(q) } is
approximated by a discrete sup over a sample grid. On flat space this
reduces to the classical conjugate shifted by <X, p>, which provides the
independent analytic cross-checks; the checks themselves (Fenchel-Young
gaps, primal-dual value equality, the per-iteration DC sandwich) are run on
low-dimensional Euclidean instances where a grid sup is trustworthy.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .manifolds import Euclidean, Geometry
from .solvers import SolverTrace

__all__ = [
    "Grid1D",
    "ConjugateEvaluation",
    "SandwichRow",
    "SandwichReport",
    "conjugate_grid",
    "fenchel_young_gap",
    "primal_dual_sandwich_check",
]


@dataclass(frozen=True)
class Grid1D:
    """Uniform sample grid on [lower, upper] with ``count`` points."""

    lower: float
    upper: float
    count: int

    def __post_init__(self):
        if not self.lower < self.upper:
            raise ValueError("grid needs lower < upper")
        if self.count < 2:
            raise ValueError("grid needs at least two points")

    @property
    def spacing(self) -> float:
        return (self.upper - self.lower) / (self.count - 1)

    def points(self) -> np.ndarray:
        return np.linspace(self.lower, self.upper, self.count)


@dataclass(frozen=True)
class ConjugateEvaluation:
    """Sampled value of f*(p, X) together with the maximizing sample point."""

    base_point: np.ndarray
    covector: np.ndarray
    value: float
    maximizer: np.ndarray


def _as_point_array(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    return pts


def _sample_cost(f: Callable, pts: np.ndarray) -> np.ndarray:
    """Evaluate f on every sample point, batched when f supports it."""
    try:
        vals = np.asarray(f(pts), dtype=float)
        if vals.shape == (pts.shape[0],):
            return vals
    except Exception:
        pass
    return np.asarray([float(f(q)) for q in pts])


def conjugate_grid(f: Callable, geometry: Geometry, points, p, x) -> ConjugateEvaluation:
    """Discrete Fenchel conjugate: max over the sample points of
    <x, log_p(q)>_p - f(q).

    Monotone under grid refinement (a superset never yields a smaller
    value). Raises ValueError for an empty grid.
    """
    pts = _as_point_array(points)
    if pts.shape[0] == 0:
        raise ValueError("empty grid")
    p_arr = np.atleast_1d(np.asarray(p, dtype=float))
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    if isinstance(geometry, Euclidean):
        values = (pts - p_arr) @ x_arr - _sample_cost(f, pts)
    else:
        values = np.asarray(
            [geometry.inner(p_arr, x_arr, geometry.log(p_arr, q)) - f(q) for q in pts])
    best = int(np.argmax(values))
    return ConjugateEvaluation(p_arr, x_arr, float(values[best]), pts[best])


def fenchel_young_gap(f: Callable, geometry: Geometry,
                      conj: ConjugateEvaluation, q) -> float:
    """f(q) + f*(p, X) - <X, log_p(q)>: nonnegative for the exact conjugate,
    >= -eps_grid for the sampled one."""
    q_arr = np.atleast_1d(np.asarray(q, dtype=float))
    pairing = geometry.inner(conj.base_point, conj.covector,
                             geometry.log(conj.base_point, q_arr))
    return float(f(q_arr)) + conj.value - pairing


@dataclass(frozen=True)
class SandwichRow:
    k: int
    primal: float          # g(p_k) - h(p_k)
    dual: float            # h*(p_k, X_k) - g*(p_k, X_k)
    primal_next: float     # g(p_{k+1}) - h(p_{k+1})
    lower_residual: float  # dual - primal_next  (>= -tol)
    upper_residual: float  # primal - dual       (>= -tol)


@dataclass
class SandwichReport:
    rows: list[SandwichRow]
    tolerance: float
    final_gap: float  # |primal - dual| at the last recorded iterate

    @property
    def passed(self) -> bool:
        ok = all(r.lower_residual >= -self.tolerance
                 and r.upper_residual >= -self.tolerance for r in self.rows)
        return ok and self.final_gap <= self.tolerance


def primal_dual_sandwich_check(trace: SolverTrace, g: Callable, h: Callable,
                               geometry: Geometry, points,
                               tolerance: float = 1e-3,
                               conj_h: Optional[Callable] = None,
                               conj_g: Optional[Callable] = None) -> SandwichReport:
    """Check the primal-dual sandwich along a DC solver trace.

    For every consecutive pair of iterates the dual value
    h*(p_k, X_k) - g*(p_k, X_k) must sit between the primal values at
    p_{k+1} and p_k (up to the grid tolerance), and both value sequences
    must meet at the end. The trace must have recorded points and
    subgradients; only low-dimensional Euclidean problems are supported
    (the grid sup is intractable elsewhere).

    ``conj_h``/``conj_g`` override the grid conjugates (used as a negative
    control in tests).
    """
    if not isinstance(geometry, Euclidean) or geometry.dim > 2:
        raise ValueError("grid conjugate intractable")
    if trace.points is None or trace.subgradients is None:
        raise ValueError("trace has no recorded points/subgradients")

    def default_conj(fun):
        return lambda p, x: conjugate_grid(fun, geometry, points, p, x).value

    hstar = conj_h or default_conj(h)
    gstar = conj_g or default_conj(g)

    pts = trace.points
    subs = trace.subgradients
    primal = [float(g(np.atleast_1d(p))) - float(h(np.atleast_1d(p))) for p in pts]
    rows = []
    for k in range(len(pts) - 1):
        p_k = np.atleast_1d(np.asarray(pts[k], dtype=float))
        x_k = np.atleast_1d(np.asarray(subs[k], dtype=float))
        dual = hstar(p_k, x_k) - gstar(p_k, x_k)
        rows.append(SandwichRow(
            k=k,
            primal=primal[k],
            dual=dual,
            primal_next=primal[k + 1],
            lower_residual=dual - primal[k + 1],
            upper_residual=primal[k] - dual,
        ))
    if rows:
        final_gap = abs(rows[-1].primal_next - rows[-1].dual)
    else:
        p0 = np.atleast_1d(np.asarray(pts[0], dtype=float))
        x0 = np.atleast_1d(np.asarray(subs[0], dtype=float))
        final_gap = abs(primal[0] - (hstar(p0, x0) - gstar(p0, x0)))
    return SandwichReport(rows=rows, tolerance=tolerance, final_gap=final_gap)
