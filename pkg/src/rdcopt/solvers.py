"""DC algorithms on Hadamard manifolds and their sub-solvers.

Contains the difference-of-convex algorithm (``dca_solve``), its proximal
variant (``dcppa_solve``), the Riemannian Frank-Wolfe method, and the two
smooth sub-solvers used for the DC subproblems (Armijo gradient descent and
a trust-region method with truncated CG and a finite-difference Hessian).

The DC iteration linearizes the second component at the current iterate
p_k using X_k = grad h(p_k) and minimizes the convex surrogate

    g(p) - <X_k, log_{p_k}(p)>_{p_k}        (+ d^2(p, p_k)/(2 lambda) for DCPPA)

either through a problem-supplied closed form, a generic construction based
on the adjoint differential of the log map, or a constrained closed-form
hook when g is an indicator function.
"""

from __future__ import annotations

import time
from array import array
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .manifolds import Euclidean, Geometry, RosenbrockPlane

__all__ = [
    "ArmijoParams",
    "TrustRegionParams",
    "StoppingCriterion",
    "SubSolverSpec",
    "SolverTrace",
    "DCProblem",
    "LineSearchError",
    "SolverError",
    "armijo_linesearch",
    "gradient_descent",
    "fd_hessian_apply",
    "trust_region_solve",
    "dca_solve",
    "dcppa_solve",
    "frank_wolfe_solve",
    "strongly_convexify",
    "is_critical",
]


class LineSearchError(RuntimeError):
    """Backtracking exhausted or the direction is not a descent direction."""


class SolverError(RuntimeError):
    """Hard failure, e.g. a non-finite cost value along the iteration."""


@dataclass(frozen=True)
class ArmijoParams:
    initial_step: float = 1.0
    contraction: float = 0.5
    sufficient_decrease: float = 1e-4
    max_backtracks: int = 60

    def __post_init__(self):
        if not (self.initial_step > 0 and 0 < self.contraction < 1):
            raise ValueError("invalid line-search parameters")
        if not (0 < self.sufficient_decrease < 1 and self.max_backtracks >= 1):
            raise ValueError("invalid line-search parameters")


@dataclass(frozen=True)
class TrustRegionParams:
    initial_radius: float = 1.0
    max_radius: float = 8.0
    accept_ratio: float = 0.1
    expand_ratio: float = 0.75
    shrink_factor: float = 0.25
    fd_step_scale: float = 1e-8
    cg_max_iter: Optional[int] = None
    # regularizes the acceptance ratio against cost-difference round-off;
    # without it, steps whose true decrease is below one ulp of f are
    # rejected forever and the solver stalls above tight gradient tolerances
    rho_regularization: float = 1e3


@dataclass(frozen=True)
class StoppingCriterion:
    """Disjunction of stopping clauses; the first satisfied one is recorded.

    Clauses are evaluated each iteration in the order gradient-norm,
    iterate-change, gradient-change, with the max-iteration fallback last.
    """

    max_iter: int
    grad_norm_tol: Optional[float] = None
    iterate_change_tol: Optional[float] = None
    grad_change_tol: Optional[float] = None

    def __post_init__(self):
        if self.max_iter < 1:
            raise ValueError("max_iter must be positive")
        for tol in (self.grad_norm_tol, self.iterate_change_tol, self.grad_change_tol):
            if tol is not None and not tol > 0:
                raise ValueError("tolerances must be positive")


class SolverTrace:
    """Per-iteration records of a solver run.

    Row ``k`` holds the cost at the k-th iterate, the step distance
    d(p_{k-1}, p_k) (zero for k = 0), the stopping-gradient norm at the
    iterate and the wall-clock seconds elapsed since the solver started.
    Points and DC subgradients are kept only when requested.
    """

    def __init__(self, record_points: bool = False):
        self.f = array("d")
        self.step = array("d")
        self.grad_norm = array("d")
        self.seconds = array("d")
        self.reason: Optional[str] = None
        self.points: Optional[list] = [] if record_points else None
        self.subgradients: Optional[list] = [] if record_points else None
        self.subsolver_failures: list[int] = []
        self.extra: dict[str, list] = {}

    def append(self, f: float, step: float, grad_norm: float, seconds: float,
               point=None, subgradient=None) -> None:
        self.f.append(f)
        self.step.append(step)
        self.grad_norm.append(grad_norm)
        self.seconds.append(seconds)
        if self.points is not None and point is not None:
            self.points.append(point)
        if self.subgradients is not None:
            self.subgradients.append(subgradient)

    def __len__(self) -> int:
        return len(self.f)

    @property
    def iterations(self) -> int:
        """Number of recorded rows (the initial point is row 0)."""
        return len(self.f)

    def as_arrays(self) -> dict[str, np.ndarray]:
        return {
            "f": np.asarray(self.f),
            "step": np.asarray(self.step),
            "grad_norm": np.asarray(self.grad_norm),
            "seconds": np.asarray(self.seconds),
        }


@dataclass
class DCProblem:
    """A DC objective f = g - h on one geometry.

    ``g_rgrad`` may be omitted when g is an indicator function; such
    problems must provide ``constrained_subsolver(p, X) -> point`` solving
    the DC subproblem in closed form over the constraint set. Smooth
    problems may provide ``subproblem(q, X) -> (cost, rgrad)`` returning a
    closed form of the linearized surrogate; otherwise the surrogate is
    built generically from the geometry's adjoint log differential.

    ``sigma`` is the strong-convexity modulus of both components when known
    (set by :func:`strongly_convexify`), ``f_lower`` an optional lower bound
    on f.
    """

    geometry: Geometry
    g_cost: Callable
    h_cost: Callable
    h_rgrad: Callable
    g_rgrad: Optional[Callable] = None
    sigma: Optional[float] = None
    f_lower: Optional[float] = None
    subproblem: Optional[Callable] = None
    constrained_subsolver: Optional[Callable] = None

    def cost(self, p) -> float:
        return float(self.g_cost(p)) - float(self.h_cost(p))

    def grad(self, p):
        """Gradient of f; requires both components to be smooth."""
        if self.g_rgrad is None:
            raise ValueError("g is not smooth; gradient of f is unavailable")
        return self.g_rgrad(p) - self.h_rgrad(p)

    def stopping_grad(self, p, h_grad=None):
        """Gradient used by stopping rules: grad f when g is smooth,
        otherwise grad h (the working subgradient)."""
        hg = self.h_rgrad(p) if h_grad is None else h_grad
        if self.g_rgrad is None:
            return hg
        return self.g_rgrad(p) - hg


def _require_finite(value: float, what: str) -> float:
    if not np.isfinite(value):
        raise SolverError(f"non-finite {what}: {value!r}")
    return value


def _same_point(a, b) -> bool:
    return a is b or np.array_equal(np.asarray(a), np.asarray(b))


def armijo_linesearch(geometry: Geometry, f: Callable, p, direction,
                      params: ArmijoParams = ArmijoParams(), *,
                      f_at_p: Optional[float] = None,
                      slope: Optional[float] = None,
                      initial_step: Optional[float] = None):
    """Backtracking line search along exp_p(t * direction).

    Returns ``(t, point, value)`` for the largest t = t0 * beta^m satisfying
    f(exp_p(t d)) <= f(p) + c t <grad f(p), d>_p. ``slope`` is that inner
    product; it must be negative (descent direction) or LineSearchError is
    raised, as it is when the backtrack budget runs out. ``initial_step``
    overrides t0 from the parameters (used by callers that warm-start the
    search from the previously accepted step).
    """
    if slope is None:
        raise ValueError("armijo_linesearch needs the directional slope")
    if not slope < 0:
        raise LineSearchError("not a descent direction")
    f0 = float(f(p)) if f_at_p is None else f_at_p
    t = params.initial_step if initial_step is None else initial_step
    c = params.sufficient_decrease
    exp = geometry.exp
    for _ in range(params.max_backtracks + 1):
        cand = exp(p, t * direction)
        fc = float(f(cand))
        if fc <= f0 + c * t * slope:
            return t, cand, fc
        t *= params.contraction
    raise LineSearchError("line search exhausted its backtrack budget")


def gradient_descent(geometry: Geometry, f: Callable, rgrad: Callable, p0,
                     linesearch: ArmijoParams, stop: StoppingCriterion,
                     record_points: bool = False):
    """Riemannian steepest descent with Armijo backtracking.

    Steps p <- exp_p(-t grad f(p)); strictly decreasing f until a stopping
    clause fires. A stalled line search terminates the run with reason
    "linesearch stalled" instead of raising.
    """
    t0 = time.perf_counter()
    trace = SolverTrace(record_points)
    p = p0
    fp = _require_finite(float(f(p)), "cost")
    g = rgrad(p)
    gn = geometry.norm(p, g)
    trace.append(fp, 0.0, gn, time.perf_counter() - t0, point=p)
    steps = 0
    max_iter = stop.max_iter
    grad_tol = stop.grad_norm_tol
    change_tol = stop.iterate_change_tol
    gchange_tol = stop.grad_change_tol
    # each search warm-starts from the previous accepted step (with room to
    # grow back), which keeps the backtrack count small on stiff valleys
    t_guess = linesearch.initial_step
    while True:
        if gn == 0.0 or (grad_tol is not None and gn <= grad_tol):
            trace.reason = "gradient norm"
            break
        if steps >= max_iter:
            trace.reason = "max iterations"
            break
        try:
            t, p_next, f_next = armijo_linesearch(
                geometry, f, p, -g, linesearch, f_at_p=fp, slope=-gn * gn,
                initial_step=t_guess)
        except LineSearchError:
            trace.reason = "linesearch stalled"
            break
        _require_finite(f_next, "cost")
        t_guess = min(linesearch.initial_step, 4.0 * t)
        step_dist = t * gn  # distance along the geodesic exp_p(-t g)
        g_next = rgrad(p_next)
        gn_next = geometry.norm(p_next, g_next)
        steps += 1
        trace.append(f_next, step_dist, gn_next, time.perf_counter() - t0, point=p_next)
        if change_tol is not None and step_dist <= change_tol:
            p, fp, g, gn = p_next, f_next, g_next, gn_next
            trace.reason = "iterate change"
            break
        if gchange_tol is not None:
            moved = geometry.transport(p, p_next, g)
            if geometry.norm(p_next, moved - g_next) <= gchange_tol:
                p, fp, g, gn = p_next, f_next, g_next, gn_next
                trace.reason = "gradient change"
                break
        p, fp, g, gn = p_next, f_next, g_next, gn_next
    return p, trace


def fd_hessian_apply(geometry: Geometry, rgrad: Callable, p, x,
                     step: Optional[float] = None, rgrad_p=None):
    """Hessian-vector product by a Riemannian forward difference.

    (transport_{q->p}(grad f(q)) - grad f(p)) * (||x|| / h) with
    q = exp_p(h x/||x||); returns the zero tangent for x = 0. The default
    step is 1e-8 (1 + ||p||).
    """
    xnorm = geometry.norm(p, x)
    if xnorm == 0.0:
        return np.zeros_like(np.asarray(x, dtype=float))
    h = step if step is not None else 1e-8 * (1.0 + geometry.point_norm(p))
    q = geometry.exp(p, (h / xnorm) * x)
    gq = geometry.transport(q, p, rgrad(q))
    gp = rgrad(p) if rgrad_p is None else rgrad_p
    return (gq - gp) * (xnorm / h)


def _truncated_cg(geometry: Geometry, p, g, hvp, radius: float,
                  tol: float, max_iter: int):
    """Steihaug-Toint CG for the trust-region model; returns (step, hit_boundary)."""
    eta = np.zeros_like(np.asarray(g, dtype=float))
    r = np.asarray(g, dtype=float).copy()
    d = -r
    r2 = geometry.inner(p, r, r)
    if r2 == 0.0:
        return eta, False
    ee = 0.0
    for _ in range(max_iter):
        hd = hvp(d)
        kappa = geometry.inner(p, d, hd)
        dd = geometry.inner(p, d, d)
        ed = geometry.inner(p, eta, d)
        if kappa <= 0.0:
            tau = _boundary_tau(dd, ed, ee, radius)
            return eta + tau * d, True
        alpha = r2 / kappa
        if ee + 2.0 * alpha * ed + alpha * alpha * dd >= radius * radius:
            tau = _boundary_tau(dd, ed, ee, radius)
            return eta + tau * d, True
        eta = eta + alpha * d
        ee = ee + 2.0 * alpha * ed + alpha * alpha * dd
        r = r + alpha * hd
        r2_new = geometry.inner(p, r, r)
        if np.sqrt(r2_new) <= tol:
            return eta, False
        d = -r + (r2_new / r2) * d
        r2 = r2_new
    return eta, False


def _boundary_tau(dd: float, ed: float, ee: float, radius: float) -> float:
    disc = max(ed * ed - dd * (ee - radius * radius), 0.0)
    return (-ed + np.sqrt(disc)) / dd


def trust_region_solve(geometry: Geometry, f: Callable, rgrad: Callable, p0,
                       stop: StoppingCriterion,
                       params: TrustRegionParams = TrustRegionParams(),
                       record_points: bool = False):
    """Riemannian trust-region method with a finite-difference Hessian.

    The quadratic model m(X) = f(p) + <grad f, X> + <H X, X>/2 uses
    :func:`fd_hessian_apply`; the subproblem is solved by truncated CG with
    the kappa-theta rule min(0.5, sqrt(||g||)) ||g||, and the radius follows
    the classic rho-based update. Rejected steps are recorded as rows with
    zero step distance.
    """
    t0 = time.perf_counter()
    trace = SolverTrace(record_points)
    p = p0
    fp = _require_finite(float(f(p)), "cost")
    g = rgrad(p)
    gn = geometry.norm(p, g)
    trace.append(fp, 0.0, gn, time.perf_counter() - t0, point=p)
    radius = params.initial_radius
    fd_step = params.fd_step_scale * (1.0 + geometry.point_norm(p))
    cg_budget = params.cg_max_iter or max(geometry.dim, 10)
    steps = 0
    while True:
        if gn == 0.0 or (stop.grad_norm_tol is not None and gn <= stop.grad_norm_tol):
            trace.reason = "gradient norm"
            break
        if steps >= stop.max_iter:
            trace.reason = "max iterations"
            break

        def hvp(v, _p=p, _g=g):
            return fd_hessian_apply(geometry, rgrad, _p, v, step=fd_step, rgrad_p=_g)

        inner_tol = gn * min(0.5, np.sqrt(gn))
        eta, boundary = _truncated_cg(geometry, p, g, hvp, radius, inner_tol, cg_budget)
        model_decrease = -(geometry.inner(p, g, eta)
                           + 0.5 * geometry.inner(p, hvp(eta), eta))
        cand = geometry.exp(p, eta)
        f_cand = _require_finite(float(f(cand)), "cost")
        reg = params.rho_regularization * np.finfo(float).eps * max(1.0, abs(fp))
        if model_decrease + reg > 0.0:
            rho = (fp - f_cand + reg) / (model_decrease + reg)
        else:
            rho = -np.inf
        steps += 1
        if rho >= params.accept_ratio:
            step_dist = geometry.norm(p, eta)
            g_prev, p_prev = g, p
            p, fp = cand, f_cand
            g = rgrad(p)
            gn = geometry.norm(p, g)
            fd_step = params.fd_step_scale * (1.0 + geometry.point_norm(p))
            trace.append(fp, step_dist, gn, time.perf_counter() - t0, point=p)
            if stop.iterate_change_tol is not None and step_dist <= stop.iterate_change_tol:
                trace.reason = "iterate change"
                break
            if stop.grad_change_tol is not None:
                moved = geometry.transport(p_prev, p, g_prev)
                if geometry.norm(p, moved - g) <= stop.grad_change_tol:
                    trace.reason = "gradient change"
                    break
        else:
            trace.append(fp, 0.0, gn, time.perf_counter() - t0, point=p)
        if rho < 0.25:
            radius *= params.shrink_factor
        elif rho > params.expand_ratio and boundary:
            radius = min(2.0 * radius, params.max_radius)
    return p, trace


@dataclass(frozen=True)
class SubSolverSpec:
    """How DC subproblems are minimized: solver kind plus its parameters."""

    kind: str = "trust_region"  # "trust_region" | "gradient_descent"
    criterion: StoppingCriterion = StoppingCriterion(max_iter=5000, grad_norm_tol=1e-10)
    armijo: ArmijoParams = field(default_factory=ArmijoParams)
    trust_region: TrustRegionParams = field(default_factory=TrustRegionParams)

    def __post_init__(self):
        if self.kind not in ("trust_region", "gradient_descent"):
            raise ValueError(f"unknown sub-solver kind {self.kind!r}")


def _surrogate(problem: DCProblem, p_k, x_k, lam: Optional[float]):
    """Cost/gradient of the linearized (possibly proximal) DC subproblem."""
    geom = problem.geometry
    if problem.subproblem is not None:
        base_cost, base_grad = problem.subproblem(p_k, x_k)
    else:
        def base_cost(z):
            return float(problem.g_cost(z)) - geom.inner(p_k, x_k, geom.log(p_k, z))

        def base_grad(z):
            return problem.g_rgrad(z) - geom.adjoint_log_diff(p_k, z, x_k)

    if lam is None:
        return base_cost, base_grad

    half_inv_lam = 0.5 / lam

    def cost(z):
        return base_cost(z) + half_inv_lam * geom.dist(z, p_k) ** 2

    def grad(z):
        return base_grad(z) - (1.0 / lam) * geom.log(z, p_k)

    return cost, grad


def _descend_2d(plane: bool, cost, egrad, start, params: ArmijoParams,
                max_iter: int, grad_tol: float):
    """Scalar Armijo descent on the two 2-D geometries (flat / adapted plane).

    Same iteration as :func:`gradient_descent` without trace bookkeeping;
    the multi-million inner iterations of the DC benchmarks make the array
    round-trips of the generic path the dominant cost. Returns
    ``(point, hit_max_iter)``.
    """
    x1, x2 = float(start[0]), float(start[1])
    beta = params.contraction
    c = params.sufficient_decrease
    max_bt = params.max_backtracks
    t0 = params.initial_step
    tol2 = grad_tol * grad_tol
    f = float(cost((x1, x2)))
    t_guess = t0
    it = 0
    while True:
        g1, g2 = egrad((x1, x2))
        g1, g2 = float(g1), float(g2)
        if plane:
            two_p1 = 2.0 * x1
            r1 = g1 + two_p1 * g2
            r2 = two_p1 * g1 + (1.0 + two_p1 * two_p1) * g2
            n2 = g1 * r1 + g2 * r2  # <rgrad, rgrad>_G = egrad . rgrad
        else:
            r1, r2 = g1, g2
            n2 = g1 * g1 + g2 * g2
        if n2 <= tol2:
            return np.array([x1, x2]), False
        if it >= max_iter:
            return np.array([x1, x2]), True
        slope = -n2
        t = t_guess
        accepted = False
        for _ in range(max_bt + 1):
            c1 = x1 - t * r1
            c2 = x2 - t * r2 + (t * t * r1 * r1 if plane else 0.0)
            fc = float(cost((c1, c2)))
            if fc <= f + c * t * slope:
                accepted = True
                break
            t *= beta
        if not accepted:  # stalled line search: no measurable progress left
            return np.array([x1, x2]), False
        x1, x2, f = c1, c2, fc
        t_guess = min(t0, 4.0 * t)
        it += 1


def _minimize(geometry, cost, grad, start, sub: SubSolverSpec):
    if sub.kind == "gradient_descent":
        crit = sub.criterion
        if (crit.iterate_change_tol is None and crit.grad_change_tol is None
                and geometry.dim == 2
                and isinstance(geometry, (Euclidean, RosenbrockPlane))):
            return _descend_2d(isinstance(geometry, RosenbrockPlane), cost, grad,
                               start, sub.armijo, crit.max_iter,
                               crit.grad_norm_tol or 0.0)
        point, inner = gradient_descent(geometry, cost, grad, start,
                                        sub.armijo, sub.criterion)
    else:
        point, inner = trust_region_solve(geometry, cost, grad, start,
                                          sub.criterion, sub.trust_region)
    failed = inner.reason == "max iterations"
    return point, failed


def _dc_loop(problem: DCProblem, p0, sub: Optional[SubSolverSpec],
             stop: StoppingCriterion, lam: Optional[float],
             record_points: bool):
    geom = problem.geometry
    if problem.constrained_subsolver is None:
        if sub is None:
            raise ValueError("smooth DC problems need a sub-solver spec")
        if problem.subproblem is None and problem.g_rgrad is None:
            raise ValueError("the generic surrogate needs a smooth g "
                             "(provide g_rgrad, subproblem, or constrained_subsolver)")
    elif lam is not None:
        raise ValueError("the proximal variant needs a smooth surrogate; "
                         "constrained closed-form hooks solve the plain DC subproblem")
    t0 = time.perf_counter()
    trace = SolverTrace(record_points)
    p = p0
    f = problem.cost(p)
    if problem.constrained_subsolver is None or np.isnan(f):
        # an indicator-valued g may be +inf at the start (DCA needs no
        # feasible starting point); everything after the first step is finite
        _require_finite(f, "cost")
    x = problem.h_rgrad(p)
    gs = problem.stopping_grad(p, x)
    gn = geom.norm(p, gs)
    trace.append(f, 0.0, gn, time.perf_counter() - t0, point=p, subgradient=x)
    steps = 0
    while True:
        if problem.constrained_subsolver is not None:
            p_next = problem.constrained_subsolver(p, x)
        else:
            cost, grad = _surrogate(problem, p, x, lam)
            p_next, failed = _minimize(geom, cost, grad, p, sub)
            if failed:
                trace.subsolver_failures.append(steps)
        if _same_point(p_next, p):
            trace.reason = "fixed point"
            break
        f_next = _require_finite(problem.cost(p_next), "cost")
        x_next = problem.h_rgrad(p_next)
        gs_next = problem.stopping_grad(p_next, x_next)
        gn_next = geom.norm(p_next, gs_next)
        step_dist = geom.dist(p, p_next)
        steps += 1
        trace.append(f_next, step_dist, gn_next, time.perf_counter() - t0,
                     point=p_next, subgradient=x_next)
        if stop.grad_norm_tol is not None and gn_next <= stop.grad_norm_tol:
            trace.reason = "gradient norm"
        elif stop.iterate_change_tol is not None and step_dist <= stop.iterate_change_tol:
            trace.reason = "iterate change"
        elif stop.grad_change_tol is not None and geom.norm(
                p_next, geom.transport(p, p_next, gs) - gs_next) <= stop.grad_change_tol:
            trace.reason = "gradient change"
        elif steps >= stop.max_iter:
            trace.reason = "max iterations"
        p, f, x, gs, gn = p_next, f_next, x_next, gs_next, gn_next
        if trace.reason is not None:
            break
    return p, trace


def dca_solve(problem: DCProblem, p0, sub: Optional[SubSolverSpec],
              stop: StoppingCriterion, record_points: bool = True):
    """Difference-of-convex algorithm.

    Each iteration takes X_k = grad h(p_k) and moves to a minimizer of the
    convex surrogate g(p) - <X_k, log_{p_k}(p)>, solved by the configured
    sub-solver (warm-started at p_k) or by the problem's constrained
    closed-form hook. The cost sequence is nonincreasing; a subproblem
    returning p_k exactly ends the run as a fixed point.
    """
    return _dc_loop(problem, p0, sub, stop, lam=None, record_points=record_points)


def dcppa_solve(problem: DCProblem, p0, lam: float, sub: Optional[SubSolverSpec],
                stop: StoppingCriterion, record_points: bool = True):
    """Proximal-point DC algorithm: the DCA surrogate plus d^2(p, p_k)/(2 lam)."""
    if not lam > 0:
        raise ValueError("proximal parameter must be positive")
    return _dc_loop(problem, p0, sub, stop, lam=lam, record_points=record_points)


def frank_wolfe_solve(geometry: Geometry, rgrad_f: Callable, linear_oracle: Callable,
                      p0, stop: StoppingCriterion, cost: Optional[Callable] = None,
                      feasible: Optional[Callable] = None,
                      record_points: bool = True):
    """Riemannian Frank-Wolfe with the diminishing steps s_k = 2/(2+k).

    ``linear_oracle(p, G) -> point`` must return a minimizer of
    <G, log_p(q)> over the constraint set; iterates move along the geodesic
    toward the oracle point, so with a geodesically convex set they stay
    feasible. The start must be feasible.
    """
    if feasible is not None and not feasible(p0):
        raise ValueError("Frank-Wolfe requires feasible start")
    t0 = time.perf_counter()
    trace = SolverTrace(record_points)
    trace.extra["step_size"] = []
    p = p0
    f = _require_finite(float(cost(p)), "cost") if cost is not None else np.nan
    g = rgrad_f(p)
    gn = geometry.norm(p, g)
    trace.append(f, 0.0, gn, time.perf_counter() - t0, point=p, subgradient=g)
    k = 0
    while True:
        q = linear_oracle(p, g)
        s_k = 2.0 / (2.0 + k)
        p_next = geometry.geodesic(p, q, s_k)
        trace.extra["step_size"].append(s_k)
        if _same_point(p_next, p):
            trace.reason = "fixed point"
            break
        f_next = _require_finite(float(cost(p_next)), "cost") if cost is not None else np.nan
        g_next = rgrad_f(p_next)
        gn_next = geometry.norm(p_next, g_next)
        step_dist = geometry.dist(p, p_next)
        k += 1
        trace.append(f_next, step_dist, gn_next, time.perf_counter() - t0,
                     point=p_next, subgradient=g_next)
        if stop.grad_norm_tol is not None and gn_next <= stop.grad_norm_tol:
            trace.reason = "gradient norm"
        elif stop.iterate_change_tol is not None and step_dist <= stop.iterate_change_tol:
            trace.reason = "iterate change"
        elif stop.grad_change_tol is not None and geometry.norm(
                p_next, geometry.transport(p, p_next, g) - g_next) <= stop.grad_change_tol:
            trace.reason = "gradient change"
        elif k >= stop.max_iter:
            trace.reason = "max iterations"
        p, f, g, gn = p_next, f_next, g_next, gn_next
        if trace.reason is not None:
            break
    return p, trace


def strongly_convexify(problem: DCProblem, sigma: float, anchor) -> DCProblem:
    """Add (sigma/2) d^2(anchor, .) to both DC components.

    f = g - h is unchanged pointwise while both components gain strong
    convexity sigma; the gradients pick up -sigma log_p(anchor). Closed-form
    subproblem hooks of the original problem do not apply to the wrapped
    components and are dropped (the generic surrogate path is used).
    """
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    geom = problem.geometry
    half = 0.5 * sigma

    def quad(p):
        return half * geom.dist(anchor, p) ** 2

    def quad_grad(p):
        return -sigma * geom.log(p, anchor)

    g_cost, h_cost = problem.g_cost, problem.h_cost
    g_rgrad, h_rgrad = problem.g_rgrad, problem.h_rgrad
    return DCProblem(
        geometry=geom,
        g_cost=lambda p: g_cost(p) + quad(p),
        h_cost=lambda p: h_cost(p) + quad(p),
        h_rgrad=lambda p: h_rgrad(p) + quad_grad(p),
        g_rgrad=(None if g_rgrad is None
                 else (lambda p: g_rgrad(p) + quad_grad(p))),
        sigma=(problem.sigma or 0.0) + sigma,
        f_lower=problem.f_lower,
    )


def is_critical(problem: DCProblem, p, tol: float):
    """Smooth criticality check ||grad g(p) - grad h(p)||_p <= tol.

    Returns ``(passed, residual)``.
    """
    if problem.g_rgrad is None:
        raise ValueError("criticality check needs a smooth g")
    residual = problem.geometry.norm(p, problem.g_rgrad(p) - problem.h_rgrad(p))
    return residual <= tol, residual
