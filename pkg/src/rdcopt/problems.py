"""Concrete DC problem families used by the benchmarks.

* log-det costs ``phi1(det p) - phi2(det p)`` on the SPD cone, whose DC
  subproblem has the closed scalar structure
  ``psi(p) = phi1(det p) - phi2'(det q) det q (log det p - log det q)``;
* trace/det costs ``phi1(tr p) - phi2(det p)``;
* the Rosenbrock function split as ``g - h`` with
  ``g = a(x1^2-x2)^2 + 2(x1-b)^2`` and ``h = (x1-b)^2``, on flat space or on
  the valley-adapted plane metric;
* box-constrained maximization of the Frechet variance on the SPD cone,
  with its linear subproblem over a Loewner interval solved to optimality
  and a feasibility safeguard for round-off violations.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .manifolds import Euclidean, RosenbrockPlane, SPDManifold
from .matfun import (
    SPD_RTOL,
    assert_spd,
    spd_cholesky,
    spd_logdet,
    spd_sqrt_inv_sqrt,
    sym_dlog,
    sym_eig,
    symmetrize,
)
from .solvers import DCProblem

__all__ = [
    "ScalarFunction",
    "log_power",
    "power",
    "LogDetProblem",
    "logdet_dcproblem",
    "logdet_subproblem",
    "TrDetProblem",
    "trdet_dcproblem",
    "RosenbrockProblem",
    "rosenbrock_cost",
    "rosenbrock_grad",
    "rosenbrock_dcproblem",
    "rosenbrock_subproblem",
    "FrechetBoxProblem",
    "frechet_variance",
    "frechet_grad",
    "frechet_grad_alt",
    "frechet_subproblem_matrix",
    "frechet_subproblem_matrix_alt",
    "box_linear_subproblem",
    "box_slack",
    "box_feasible",
    "feasibility_safeguard",
    "frechet_dcproblem",
    "frechet_linear_oracle",
    "random_frechet_instance",
    "save_frechet_spec",
    "load_frechet_instance",
]


@dataclass(frozen=True)
class ScalarFunction:
    """A scalar function with its first two derivatives."""

    value: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Callable[[float], float]


def log_power(k: int) -> ScalarFunction:
    """phi(t) = (log t)^k on t > 0."""

    def value(t):
        return math.log(t) ** k

    def d1(t):
        return k * math.log(t) ** (k - 1) / t

    def d2(t):
        u = math.log(t)
        return (k * (k - 1) * u ** (k - 2) - k * u ** (k - 1)) / (t * t)

    return ScalarFunction(value, d1, d2)


def power(a: float, b: float) -> ScalarFunction:
    """phi(t) = a t^b on t > 0."""
    return ScalarFunction(
        lambda t: a * t ** b,
        lambda t: a * b * t ** (b - 1),
        lambda t: a * b * (b - 1) * t ** (b - 2),
    )


_SAMPLE_T = np.logspace(-3.0, 6.0, 40)


def _det_convexity_defect(phi: ScalarFunction) -> float:
    """min over sampled t of phi''(t) t^2 + phi'(t) t.

    Nonnegativity of this expression certifies geodesic convexity of
    p -> phi(det p) on the SPD cone.
    """
    return min(phi.d2(t) * t * t + phi.d1(t) * t for t in _SAMPLE_T)


@dataclass(frozen=True)
class LogDetProblem:
    """min phi1(det p) - phi2(det p) over SPD matrices of size n.

    Defaults to phi1 = (log t)^4, phi2 = (log t)^2, the benchmark family
    whose critical points satisfy log det p in {0, +-1/sqrt(2)}; on the
    nontrivial branches the cost is -1/4, and descent runs converge to the
    branch whose sign matches log det of the starting point.
    """

    n: int
    phi1: ScalarFunction = field(default_factory=lambda: log_power(4))
    phi2: ScalarFunction = field(default_factory=lambda: log_power(2))

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        for name, phi in (("phi1", self.phi1), ("phi2", self.phi2)):
            if _det_convexity_defect(phi) < -1e-9:
                raise ValueError(f"{name} violates the det-convexity condition")


def _det(p: np.ndarray) -> float:
    return math.exp(spd_logdet(p))


def logdet_dcproblem(spec: LogDetProblem) -> DCProblem:
    """DCProblem for the log-det family, with its closed-form subproblem."""
    geom = SPDManifold(spec.n)
    phi1, phi2 = spec.phi1, spec.phi2

    return DCProblem(
        geometry=geom,
        g_cost=lambda p: phi1.value(_det(p)),
        h_cost=lambda p: phi2.value(_det(p)),
        g_rgrad=lambda p: _det_grad(phi1, p),
        h_rgrad=lambda p: _det_grad(phi2, p),
        subproblem=lambda q, x: logdet_subproblem(spec, q),
    )


def _det_grad(phi: ScalarFunction, p: np.ndarray) -> np.ndarray:
    # grad phi(det p) = (phi'(det p) det p) p
    t = _det(p)
    return (phi.d1(t) * t) * p


def logdet_subproblem(spec: LogDetProblem, q: np.ndarray):
    """Cost and Riemannian gradient of the DC surrogate at the iterate q.

    psi(p) = phi1(det p) - c (log det p - log det q) with
    c = phi2'(det q) det q; grad psi(p) = (phi1'(det p) det p - c) p. The
    surrogate is geodesically convex because -log det has zero Hessian.
    """
    tq = _det(q)
    c = spec.phi2.d1(tq) * tq
    log_det_q = spd_logdet(q)
    phi1 = spec.phi1

    def cost(p):
        return phi1.value(_det(p)) - c * (spd_logdet(p) - log_det_q)

    def rgrad(p):
        t = _det(p)
        return (phi1.d1(t) * t - c) * p

    return cost, rgrad


@dataclass(frozen=True)
class TrDetProblem:
    """min phi1(tr p) - phi2(det p) over SPD matrices of size n.

    Defaults to phi1 = t^2, phi2 = 2n t, for which the identity is a
    critical point (phi1'(tr I) I = phi2'(det I) det I I).
    """

    n: int
    phi1: ScalarFunction | None = None
    phi2: ScalarFunction | None = None

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be positive")
        if self.phi1 is None:
            object.__setattr__(self, "phi1", power(1.0, 2.0))
        if self.phi2 is None:
            object.__setattr__(self, "phi2", power(2.0 * self.n, 1.0))
        if any(self.phi1.d1(t) < -1e-12 or self.phi1.d2(t) < -1e-12 for t in _SAMPLE_T):
            raise ValueError("phi1 must be nondecreasing and convex")
        if _det_convexity_defect(self.phi2) < -1e-9:
            raise ValueError("phi2 violates the det-convexity condition")


def trdet_dcproblem(spec: TrDetProblem) -> DCProblem:
    """DCProblem for the trace/det family.

    grad g(p) = phi1'(tr p) p^2, grad h(p) = (phi2'(det p) det p) p; the DC
    surrogate mirrors the log-det one with phi1(tr p) as the convex part.
    """
    geom = SPDManifold(spec.n)
    phi1, phi2 = spec.phi1, spec.phi2

    def g_rgrad(p):
        return phi1.d1(float(np.trace(p))) * symmetrize(p @ p)

    def subproblem(q, x):
        tq = _det(q)
        c = phi2.d1(tq) * tq
        log_det_q = spd_logdet(q)

        def cost(p):
            return phi1.value(float(np.trace(p))) - c * (spd_logdet(p) - log_det_q)

        def rgrad(p):
            return g_rgrad(p) - c * p

        return cost, rgrad

    return DCProblem(
        geometry=geom,
        g_cost=lambda p: phi1.value(float(np.trace(p))),
        h_cost=lambda p: phi2.value(_det(p)),
        g_rgrad=g_rgrad,
        h_rgrad=lambda p: _det_grad(phi2, p),
        subproblem=subproblem,
    )


@dataclass(frozen=True)
class RosenbrockProblem:
    """min a (x1^2 - x2)^2 + (x1 - b)^2; minimizer (b, b^2)."""

    a: float = 2e5
    b: float = 1.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0):
            raise ValueError("a and b must be positive")


def rosenbrock_cost(spec: RosenbrockProblem, p) -> float:
    x1, x2 = float(p[0]), float(p[1])
    v = x1 * x1 - x2
    w = x1 - spec.b
    return spec.a * v * v + w * w


def rosenbrock_grad(spec: RosenbrockProblem, p) -> np.ndarray:
    """Euclidean gradient (4a x1 (x1^2-x2) + 2(x1-b), -2a (x1^2-x2))."""
    x1, x2 = float(p[0]), float(p[1])
    v = spec.a * (x1 * x1 - x2)
    return np.array([4.0 * v * x1 + 2.0 * (x1 - spec.b), -2.0 * v])


def rosenbrock_dcproblem(spec: RosenbrockProblem, geometry: str = "rb") -> DCProblem:
    """DC split of the Rosenbrock cost on flat space or the adapted plane.

    g(x) = a(x1^2-x2)^2 + 2(x1-b)^2 and h(x) = (x1-b)^2; on the adapted
    metric both components are geodesically convex (h composed with the
    chart isometry is (x1-b)^2).
    """
    if geometry == "euclidean":
        geom = Euclidean(2)
    elif geometry == "rb":
        geom = RosenbrockPlane()
    else:
        raise ValueError("geometry must be 'euclidean' or 'rb'")
    a, b = spec.a, spec.b

    def g_cost(p):
        x1, x2 = float(p[0]), float(p[1])
        v = x1 * x1 - x2
        w = x1 - b
        return a * v * v + 2.0 * w * w

    def h_cost(p):
        w = float(p[0]) - b
        return w * w

    def g_egrad(p):
        x1, x2 = float(p[0]), float(p[1])
        v = a * (x1 * x1 - x2)
        return np.array([4.0 * v * x1 + 4.0 * (x1 - b), -2.0 * v])

    def h_egrad(p):
        return np.array([2.0 * (float(p[0]) - b), 0.0])

    def subproblem(q, x):
        cost, egrad = rosenbrock_subproblem(spec, q)
        return cost, lambda p: geom.egrad_to_rgrad(p, egrad(p))

    return DCProblem(
        geometry=geom,
        g_cost=g_cost,
        h_cost=h_cost,
        g_rgrad=lambda p: geom.egrad_to_rgrad(p, g_egrad(p)),
        h_rgrad=lambda p: geom.egrad_to_rgrad(p, h_egrad(p)),
        subproblem=subproblem,
    )


def rosenbrock_subproblem(spec: RosenbrockProblem, q):
    """DC surrogate at iterate q (cost and Euclidean gradient).

    phi(p) = a(p1^2-p2)^2 + 2(p1-b)^2 - 2(q1-b) p1 up to a constant; the
    linear term is <grad h(q), log_q(p)> evaluated through the plane metric,
    and the same expression is the flat-space surrogate.
    """
    a, b = spec.a, spec.b
    c = 2.0 * (float(q[0]) - b)

    def cost(p):
        x1, x2 = float(p[0]), float(p[1])
        v = x1 * x1 - x2
        w = x1 - b
        return a * v * v + 2.0 * w * w - c * x1

    def egrad(p):
        x1, x2 = float(p[0]), float(p[1])
        v = a * (x1 * x1 - x2)
        return np.array([4.0 * v * x1 + 4.0 * (x1 - b) - c, -2.0 * v])

    return cost, egrad


@dataclass(frozen=True)
class FrechetBoxProblem:
    """Maximize the weighted Frechet variance over a Loewner box.

    ``points`` are SPD data matrices q_j with nonnegative weights summing
    to one; the feasible set is {p : lower <= p <= upper} in the Loewner
    order, with upper - lower positive definite.
    """

    points: np.ndarray  # (m, n, n)
    weights: np.ndarray  # (m,)
    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        wts = np.asarray(self.weights, dtype=float)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", wts)
        if pts.ndim != 3 or pts.shape[1] != pts.shape[2]:
            raise ValueError("points must be an (m, n, n) array")
        if wts.shape != (pts.shape[0],) or np.any(wts < 0):
            raise ValueError("weights must be nonnegative, one per point")
        if abs(float(wts.sum()) - 1.0) > 1e-12:
            raise ValueError("weights must sum to one")
        _assert_box(self.lower, self.upper)

    @property
    def n(self) -> int:
        return self.points.shape[1]

    @property
    def m(self) -> int:
        return self.points.shape[0]


def _assert_box(lower, upper):
    assert_spd(lower, "lower bound")
    assert_spd(upper, "upper bound")
    w = np.linalg.eigvalsh(symmetrize(np.asarray(upper) - np.asarray(lower)))
    if w[0] <= SPD_RTOL * max(1.0, w[-1]):
        raise ValueError("degenerate box")


def frechet_variance(prob: FrechetBoxProblem, p) -> float:
    """sum_j mu_j d^2(p, q_j) with the affine-invariant distance."""
    _, si = spd_sqrt_inv_sqrt(p)
    total = 0.0
    for mu, q in zip(prob.weights, prob.points):
        w, _ = sym_eig(symmetrize(si @ q @ si))
        total += mu * float(np.sum(np.log(w) ** 2))
    return total


def frechet_grad(prob: FrechetBoxProblem, p) -> np.ndarray:
    """grad h(p) = -2 sum_j mu_j p^{1/2} log(p^{-1/2} q_j p^{-1/2}) p^{1/2},
    i.e. -2 sum_j mu_j log_p(q_j)."""
    s, si = spd_sqrt_inv_sqrt(p)
    acc = np.zeros_like(np.asarray(p, dtype=float))
    for mu, q in zip(prob.weights, prob.points):
        w, v = sym_eig(symmetrize(si @ q @ si))
        acc += mu * symmetrize((v * np.log(w)) @ v.T)
    return -2.0 * symmetrize(s @ acc @ s)


def frechet_grad_alt(prob: FrechetBoxProblem, p) -> np.ndarray:
    """Equivalent form 2 sum_j mu_j p^{1/2} log(p^{1/2} q_j^{-1} p^{1/2}) p^{1/2}."""
    s, _ = spd_sqrt_inv_sqrt(p)
    acc = np.zeros_like(np.asarray(p, dtype=float))
    for mu, q in zip(prob.weights, prob.points):
        w, v = sym_eig(symmetrize(s @ np.linalg.inv(q) @ s))
        acc += mu * symmetrize((v * np.log(w)) @ v.T)
    return 2.0 * symmetrize(s @ acc @ s)


def frechet_subproblem_matrix(prob: FrechetBoxProblem, p) -> np.ndarray:
    """s = 2 sum_j mu_j log(p^{-1/2} q_j p^{-1/2}) = -p^{-1/2} grad h(p) p^{-1/2}."""
    _, si = spd_sqrt_inv_sqrt(p)
    acc = np.zeros_like(np.asarray(p, dtype=float))
    for mu, q in zip(prob.weights, prob.points):
        w, v = sym_eig(symmetrize(si @ q @ si))
        acc += mu * symmetrize((v * np.log(w)) @ v.T)
    return 2.0 * acc


def frechet_subproblem_matrix_alt(prob: FrechetBoxProblem, p) -> np.ndarray:
    """Equivalent form -2 sum_j mu_j log(p^{1/2} q_j^{-1} p^{1/2})."""
    s, _ = spd_sqrt_inv_sqrt(p)
    acc = np.zeros_like(np.asarray(p, dtype=float))
    for mu, q in zip(prob.weights, prob.points):
        w, v = sym_eig(symmetrize(s @ np.linalg.inv(q) @ s))
        acc += mu * symmetrize((v * np.log(w)) @ v.T)
    return -2.0 * acc


def box_slack(p, lower, upper) -> float:
    """min eigenvalue slack of the two Loewner constraints (negative when violated)."""
    lo = np.linalg.eigvalsh(symmetrize(np.asarray(p) - lower))[0]
    hi = np.linalg.eigvalsh(symmetrize(np.asarray(upper) - p))[0]
    return float(min(lo, hi))


def box_feasible(p, lower, upper) -> bool:
    return box_slack(p, lower, upper) >= 0.0


def _spectral_clip01(v: np.ndarray) -> np.ndarray:
    w, q = np.linalg.eigh(symmetrize(v))
    return symmetrize((q * np.clip(w, 0.0, 1.0)) @ q.T)


def _tr_d_log(d: np.ndarray, z: np.ndarray) -> float:
    # tr(diag(d) log z) for SPD z
    w, q = np.linalg.eigh(z)
    if w[0] <= 0.0:
        return np.inf
    return float(np.sum(d * ((q * np.log(w)) @ q.T).diagonal()))


def box_linear_subproblem(s: np.ndarray, x: np.ndarray, lower: np.ndarray,
                          upper: np.ndarray) -> np.ndarray:
    """Minimize tr(s log(x z x)) over the Loewner box lower <= z <= upper.

    Diagonalizing s = Q D Q^T and congruence-transforming with X Q turns the
    problem into min tr(D log Zh) over Lh <= Zh <= Uh with Lh = Q^T X L X Q,
    Uh = Q^T X U X Q. The spectral corner Zh = P^T [-sgn(D)]_+ P + Lh with
    P^T P = Uh - Lh (exact whenever everything commutes, e.g. diagonal data)
    seeds a deterministic multi-start projected-gradient refinement, which
    is required because the corner alone is not optimal for non-commuting
    instances. The returned z is feasible up to eigensolver round-off.

    Raises ValueError("degenerate box") when upper - lower is not positive
    definite.
    """
    s = symmetrize(s)
    x = assert_spd(x, "congruence factor")
    _assert_box(lower, upper)
    n = s.shape[0]
    d, q = sym_eig(s)
    xq = x @ q
    lh = symmetrize(xq.T @ lower @ xq)
    uh = symmetrize(xq.T @ upper @ xq)
    b = symmetrize(uh - lh)
    wb, qb = sym_eig(b)
    if wb[0] <= SPD_RTOL * max(1.0, wb[-1]):
        raise ValueError("degenerate box")
    b_sqrt = symmetrize((qb * np.sqrt(wb)) @ qb.T)
    b_inv_sqrt = symmetrize((qb / np.sqrt(wb)) @ qb.T)

    # spectral-corner candidates from both standard factors of Uh - Lh
    mask = np.diag((d < 0.0).astype(float))
    p_chol = spd_cholesky(b)
    corners = [symmetrize(p_chol.T @ mask @ p_chol), symmetrize(b_sqrt @ mask @ b_sqrt)]

    starts = [_spectral_clip01(b_inv_sqrt @ w @ b_inv_sqrt) for w in corners]
    starts += [
        np.zeros((n, n)),
        np.eye(n),
        0.5 * np.eye(n),
        _spectral_clip01(b_inv_sqrt @ (np.eye(n) - lh) @ b_inv_sqrt),
    ]

    def objective(v):
        return _tr_d_log(d, symmetrize(lh + b_sqrt @ v @ b_sqrt))

    best_v, best_f = None, np.inf
    for v0 in starts:
        v, f = _box_projected_gradient(d, lh, b_sqrt, v0, objective)
        if f < best_f:
            best_v, best_f = v, f
    zh = symmetrize(lh + b_sqrt @ best_v @ b_sqrt)
    x_inv = np.linalg.inv(x)
    return symmetrize(x_inv @ q @ zh @ q.T @ x_inv)


def _box_projected_gradient(d, lh, b_sqrt, v0, objective, max_iter: int = 300):
    """Projected gradient on v in [0, I] for tr(D log(Lh + B^{1/2} v B^{1/2}))."""
    v = _spectral_clip01(v0)
    f = objective(v)
    t = 1.0
    d_mat = np.diag(d)
    for _ in range(max_iter):
        z = symmetrize(lh + b_sqrt @ v @ b_sqrt)
        g = symmetrize(b_sqrt @ sym_dlog(z, d_mat) @ b_sqrt)
        t = min(4.0 * t, 1e8)
        improved = False
        while t > 1e-18:
            v_new = _spectral_clip01(v - t * g)
            f_new = objective(v_new)
            if f_new < f - 1e-15 * (1.0 + abs(f)):
                v, f = v_new, f_new
                improved = True
                break
            t *= 0.25
        if not improved:
            break
    return v, f


_SAFEGUARD_SCHEDULE = (0.0,) + tuple(1e-12 * 10.0 ** j for j in range(13))


def feasibility_safeguard(p_prev, q_star, lower, upper):
    """Pull an almost-feasible subproblem solution back into the box.

    Walks the geodesic from q_star toward the (feasible) previous iterate
    with the schedule {0} u {1e-12 * 10^j}, capped at 1, returning the first
    point whose Loewner slacks are nonnegative. t = 0 returns q_star
    untouched; t = 1 is p_prev itself, so the search always succeeds.
    """
    if box_feasible(q_star, lower, upper):
        return q_star
    geom = SPDManifold(np.asarray(p_prev).shape[0])
    direction = geom.log(p_prev, q_star)
    for t in _SAFEGUARD_SCHEDULE[1:]:
        if t >= 1.0:
            break
        cand = geom.exp(p_prev, (1.0 - t) * direction)
        if box_feasible(cand, lower, upper):
            return cand
    return p_prev


def frechet_linear_oracle(prob: FrechetBoxProblem):
    """Linear oracle (p, G) -> argmin over the box of <G, log_p(q)>_p.

    <G, log_p(q)>_p = tr((p^{-1/2} G p^{-1/2}) log(p^{-1/2} q p^{-1/2})), so
    the box subproblem applies with s = p^{-1/2} G p^{-1/2}, x = p^{-1/2}.
    """

    def oracle(p, grad_vec):
        _, si = spd_sqrt_inv_sqrt(p)
        s = symmetrize(si @ grad_vec @ si)
        return box_linear_subproblem(s, si, prob.lower, prob.upper)

    return oracle


def frechet_dcproblem(prob: FrechetBoxProblem) -> DCProblem:
    """DC formulation: f = indicator(box) - variance.

    g is the indicator of the box, so the DC subproblem is the constrained
    linear problem min over the box of <-grad h(p_k), log_{p_k} p>; it is
    solved in closed form by the box oracle and safeguarded back to
    feasibility.
    """
    oracle = frechet_linear_oracle(prob)

    def g_cost(p):
        return 0.0 if box_feasible(p, prob.lower, prob.upper) else np.inf

    midpoint = symmetrize(0.5 * (np.asarray(prob.lower) + np.asarray(prob.upper)))

    def hook(p, x):
        z = oracle(p, -x)
        # the safeguard walks toward the previous iterate; from an infeasible
        # start (DCA allows one) it anchors at the strictly feasible box
        # midpoint instead
        anchor = p if box_feasible(p, prob.lower, prob.upper) else midpoint
        return feasibility_safeguard(anchor, z, prob.lower, prob.upper)

    return DCProblem(
        geometry=SPDManifold(prob.n),
        g_cost=g_cost,
        h_cost=lambda p: frechet_variance(prob, p),
        h_rgrad=lambda p: frechet_grad(prob, p),
        constrained_subsolver=hook,
    )


def random_frechet_instance(n: int, m: int, seed: int):
    """Seed-deterministic random instance plus its feasible starting point.

    Data q_j = B B^T + n 1e-3 I with standard normal B; weights uniform,
    normalized. The box is [weighted harmonic mean, weighted arithmetic
    mean] and the start is their average, always feasible. Raises
    ValueError("degenerate box") when the data make the box collapse
    (e.g. m = 1).
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be positive")
    rng = np.random.default_rng(seed)
    eye = np.eye(n)
    points = np.empty((m, n, n))
    for j in range(m):
        b = rng.standard_normal((n, n))
        points[j] = symmetrize(b @ b.T + n * 1e-3 * eye)
    weights = rng.uniform(0.0, 1.0, size=m)
    weights = weights / weights.sum()
    arith = symmetrize(np.einsum("j,jkl->kl", weights, points))
    harm = symmetrize(np.linalg.inv(
        np.einsum("j,jkl->kl", weights, np.linalg.inv(points))))
    p0 = symmetrize(0.5 * (harm + arith))
    prob = FrechetBoxProblem(points=points, weights=weights, lower=harm, upper=arith)
    return prob, p0


def save_frechet_spec(path, n: int, m: int, seed: int) -> None:
    """Record an instance as (n, m, seed); regeneration is by seed."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump({"n": n, "m": m, "seed": seed}, fh)
        fh.write("\n")


def load_frechet_instance(path):
    with open(path, "r", encoding="utf-8") as fh:
        spec = json.load(fh)
    return random_frechet_instance(int(spec["n"]), int(spec["m"]), int(spec["seed"]))
