"""Benchmark runners behind the CLI: three experiments plus duality checks.

Each runner writes per-iteration trace CSVs (UTF-8, header row, floats with
17 significant digits) and returns a summary dict. Wall-clock timing wraps
the solver call only; problem construction is excluded. Trace files contain
no timing columns, so identical seeds and configs reproduce them
byte-for-byte.
"""

from __future__ import annotations

import math
import os
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .duality import Grid1D, conjugate_grid, fenchel_young_gap, primal_dual_sandwich_check
from .manifolds import Euclidean
from .problems import (
    LogDetProblem,
    RosenbrockProblem,
    box_slack,
    frechet_dcproblem,
    frechet_grad,
    frechet_linear_oracle,
    frechet_variance,
    logdet_dcproblem,
    random_frechet_instance,
    rosenbrock_cost,
    rosenbrock_dcproblem,
    rosenbrock_grad,
    save_frechet_spec,
)
from .solvers import (
    ArmijoParams,
    DCProblem,
    SolverError,
    StoppingCriterion,
    SubSolverSpec,
    dca_solve,
    dcppa_solve,
    frank_wolfe_solve,
    gradient_descent,
)

__all__ = [
    "ExperimentConfig",
    "run_dca_vs_dcppa",
    "run_rosenbrock",
    "run_frechet",
    "run_duality_checks",
]

DEFAULT_SEED_ENV = "RDCOPT_SEED"


def default_seed() -> int:
    return int(os.environ.get(DEFAULT_SEED_ENV, "42"))


@dataclass
class ExperimentConfig:
    """Knobs shared by the experiment runners."""

    out_dir: Path
    seed: int = 42
    # log-det comparison
    n_min: int = 2
    n_max: int = 20
    outer_max_iter: int = 100
    outer_grad_tol: float = 1e-10
    inner_max_iter: int = 5000
    inner_grad_tol: float = 1e-10
    # rosenbrock
    a: float = 2e5
    b: float = 1.0
    long_run: bool = False
    # frechet
    n: int = 5
    m: int = 20

    def __post_init__(self):
        self.out_dir = Path(self.out_dir)
        self.out_dir.mkdir(parents=True, exist_ok=True)


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".17g")
    return str(x)


def _write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _timed(fn, *args, **kwargs):
    t0 = time.perf_counter()
    result = fn(*args, **kwargs)
    return result, time.perf_counter() - t0


def run_dca_vs_dcppa(config: ExperimentConfig) -> dict:
    """DCA vs DCPPA on the log-det family for each matrix size n.

    Both start from p0 = log(n) I_n, stop when the gradient of f drops
    below the outer tolerance (fallback: outer_max_iter), and solve their
    subproblems with the trust-region sub-solver; DCPPA uses the constant
    proximal parameter lambda = 1/(2n).
    """
    if config.n_min < 2 or config.n_max > 80 or config.n_min > config.n_max:
        raise ValueError("n range must lie within [2, 80]")
    sub = SubSolverSpec(
        kind="trust_region",
        criterion=StoppingCriterion(max_iter=config.inner_max_iter,
                                    grad_norm_tol=config.inner_grad_tol))
    stop = StoppingCriterion(max_iter=config.outer_max_iter,
                             grad_norm_tol=config.outer_grad_tol)
    target = -0.25
    timing_rows = []
    results = []
    failures = []
    for n in range(config.n_min, config.n_max + 1):
        problem = logdet_dcproblem(LogDetProblem(n))
        p0 = math.log(n) * np.eye(n)
        row = {"n": n, "d": n * (n + 1) // 2}
        try:
            (p_dca, tr_dca), sec_dca = _timed(
                dca_solve, problem, p0, sub, stop, record_points=False)
            (p_ppa, tr_ppa), sec_ppa = _timed(
                dcppa_solve, problem, p0, 1.0 / (2.0 * n), sub, stop,
                record_points=False)
        except SolverError as exc:
            failures.append({"n": n, "error": str(exc)})
            timing_rows.append([n, row["d"], math.nan, math.nan, 0, 0])
            continue
        for tag, trace in (("dca", tr_dca), ("dcppa", tr_ppa)):
            _write_csv(config.out_dir / f"{tag}_n{n}.csv", ["i", "f", "fabs"],
                       ((i, f, abs(f - target))
                        for i, f in enumerate(trace.f)))
        row.update({
            "dca_seconds": sec_dca, "dcppa_seconds": sec_ppa,
            "dca_iters": tr_dca.iterations, "dcppa_iters": tr_ppa.iterations,
            "dca_final_f": tr_dca.f[-1], "dcppa_final_f": tr_ppa.f[-1],
            "dca_reason": tr_dca.reason, "dcppa_reason": tr_ppa.reason,
        })
        timing_rows.append([n, row["d"], sec_dca, sec_ppa,
                            tr_dca.iterations, tr_ppa.iterations])
        results.append(row)
    _write_csv(config.out_dir / "timing.csv",
               ["n", "d", "dca_seconds", "dcppa_seconds", "dca_iters", "dcppa_iters"],
               timing_rows)
    return {"experiment": "dca-vs-dcppa", "results": results, "failures": failures}


_ROSENBROCK_ALGORITHMS = ("euclidean_gd", "euclidean_dca", "riemannian_gd", "riemannian_dca")


def run_rosenbrock(config: ExperimentConfig) -> dict:
    """Four first-order methods on the Rosenbrock problem from p0 = (0.1, 0.2).

    All use Armijo line searches and stop on an iterate change below 1e-16
    (or the 10-million-step cap); DC subproblems run gradient descent down
    to gradient norm 1e-16 or 1000 inner iterations. The Euclidean
    gradient-descent run is capped at 200 000 iterations unless
    ``long_run`` restores the full-length run.
    """
    spec = RosenbrockProblem(config.a, config.b)
    p0 = np.array([0.1, 0.2])
    cap = 10_000_000
    gd_cap = cap if config.long_run else 200_000
    change_tol = 1e-16
    armijo = ArmijoParams()
    sub = SubSolverSpec(
        kind="gradient_descent",
        criterion=StoppingCriterion(max_iter=1000, grad_norm_tol=1e-16),
        armijo=armijo)

    runs = {}
    euclid = Euclidean(2)
    runs["euclidean_gd"], sec_egd = _timed(
        gradient_descent, euclid,
        lambda p: rosenbrock_cost(spec, p), lambda p: rosenbrock_grad(spec, p),
        p0, armijo, StoppingCriterion(max_iter=gd_cap, iterate_change_tol=change_tol))

    dc_euclid = rosenbrock_dcproblem(spec, "euclidean")
    runs["euclidean_dca"], sec_edca = _timed(
        dca_solve, dc_euclid, p0, sub,
        StoppingCriterion(max_iter=cap, iterate_change_tol=change_tol),
        record_points=False)

    dc_plane = rosenbrock_dcproblem(spec, "rb")
    plane = dc_plane.geometry
    runs["riemannian_gd"], sec_rgd = _timed(
        gradient_descent, plane,
        lambda p: rosenbrock_cost(spec, p),
        lambda p: plane.egrad_to_rgrad(p, rosenbrock_grad(spec, p)),
        p0, armijo, StoppingCriterion(max_iter=cap, iterate_change_tol=change_tol))

    runs["riemannian_dca"], sec_rdca = _timed(
        dca_solve, dc_plane, p0, sub,
        StoppingCriterion(max_iter=cap, iterate_change_tol=change_tol),
        record_points=False)

    seconds = {"euclidean_gd": sec_egd, "euclidean_dca": sec_edca,
               "riemannian_gd": sec_rgd, "riemannian_dca": sec_rdca}
    solution = np.array([spec.b, spec.b * spec.b])
    summary_rows = []
    results = {}
    for name in _ROSENBROCK_ALGORITHMS:
        point, trace = runs[name]
        _write_csv(config.out_dir / f"{name}.csv", ["i", "f"],
                   ((i, f) for i, f in enumerate(trace.f)))
        summary_rows.append([name, seconds[name], trace.iterations])
        results[name] = {
            "seconds": seconds[name],
            "iterations": trace.iterations,
            "final_point": [float(point[0]), float(point[1])],
            "final_cost": trace.f[-1],
            "distance_to_solution": float(np.linalg.norm(np.asarray(point) - solution)),
            "reason": trace.reason,
        }
    _write_csv(config.out_dir / "summary.csv",
               ["algorithm", "seconds", "iterations"], summary_rows)
    return {"experiment": "rosenbrock", "initial_cost": rosenbrock_cost(spec, p0),
            "results": results}


def run_frechet(config: ExperimentConfig) -> dict:
    """Box-constrained Frechet-variance maximization: DCA vs Frank-Wolfe.

    Both start from the box midpoint of a seeded random instance. DCA uses
    the closed-form box oracle plus the feasibility safeguard and stops on
    iterate change < 1e-14 or transported-gradient change < 1e-9;
    Frank-Wolfe then runs for exactly as many iterations for a row-aligned
    comparison.
    """
    if config.n < 2 or config.m < 2:
        raise ValueError("frechet experiment needs n >= 2 and m >= 2")
    prob, p0 = random_frechet_instance(config.n, config.m, config.seed)
    save_frechet_spec(config.out_dir / "instance.json", config.n, config.m, config.seed)
    dc = frechet_dcproblem(prob)
    stop = StoppingCriterion(max_iter=1000, iterate_change_tol=1e-14,
                             grad_change_tol=1e-9)
    (p_dca, tr_dca), sec_dca = _timed(dca_solve, dc, p0, None, stop,
                                      record_points=True)

    fw_steps = max(tr_dca.iterations - 1, 1)
    oracle = frechet_linear_oracle(prob)
    (p_fw, tr_fw), sec_fw = _timed(
        frank_wolfe_solve, dc.geometry,
        lambda p: -frechet_grad(prob, p), oracle, p0,
        StoppingCriterion(max_iter=fw_steps, iterate_change_tol=1e-14,
                          grad_change_tol=1e-9),
        lambda p: -frechet_variance(prob, p),
        lambda p: box_slack(p, prob.lower, prob.upper) >= 0.0,
        True)

    def rows(trace):
        for i, (f, point) in enumerate(zip(trace.f, trace.points)):
            yield i, -f, box_slack(point, prob.lower, prob.upper)

    _write_csv(config.out_dir / "frechet_dca.csv", ["i", "h", "feas_slack"], rows(tr_dca))
    _write_csv(config.out_dir / "frechet_fw.csv", ["i", "h", "feas_slack"], rows(tr_fw))

    summary = {
        "experiment": "frechet",
        "n": config.n, "m": config.m, "seed": config.seed,
        "dca": {
            "iterations": tr_dca.iterations,
            "seconds": sec_dca,
            "seconds_per_iteration": sec_dca / max(tr_dca.iterations - 1, 1),
            "reason": tr_dca.reason,
            "final_h": -tr_dca.f[-1],
        },
        "frank_wolfe": {
            "iterations": tr_fw.iterations,
            "seconds": sec_fw,
            "seconds_per_iteration": sec_fw / max(tr_fw.iterations - 1, 1),
            "reason": tr_fw.reason,
            "final_h": -tr_fw.f[-1],
            "first_step_sizes": tr_fw.extra["step_size"][:2],
        },
    }
    return summary


def _quartic_dc_problem() -> DCProblem:
    """1-D family g(x) = x^4 + x^2, h(x) = 2x^2: f = x^4 - x^2, f* = -1/4.

    The costs accept batched sample arrays so the grid conjugates vectorize.
    """

    def g_cost(x):
        u = np.asarray(x, dtype=float)[..., 0]
        return u ** 4 + u ** 2

    def h_cost(x):
        u = np.asarray(x, dtype=float)[..., 0]
        return 2.0 * u ** 2

    return DCProblem(
        geometry=Euclidean(1),
        g_cost=g_cost,
        h_cost=h_cost,
        g_rgrad=lambda x: np.array([4.0 * float(x[0]) ** 3 + 2.0 * float(x[0])]),
        h_rgrad=lambda x: np.array([4.0 * float(x[0])]),
    )


def run_duality_checks(config: ExperimentConfig, tamper: bool = False) -> dict:
    """Numerical duality suite on the 1-D quartic family.

    Verifies the analytic conjugate reductions, Fenchel-Young gaps, the
    primal-dual value equality, and the per-iteration DC sandwich along a
    DCA trace. ``tamper`` negates the grid conjugate of h as a negative
    control; the suite must then fail.
    """
    geom = Euclidean(1)
    grid = Grid1D(-10.0, 10.0, 20001)
    pts = grid.points()
    gap_floor = 10.0 * grid.spacing
    checks = []

    def check(name, passed, detail):
        checks.append({"name": name, "passed": bool(passed), "detail": detail})

    half_square = lambda x: 0.5 * np.asarray(x, dtype=float)[..., 0] ** 2

    # conjugate of x^2/2 at p = 0 is y^2/2; at p = 1, X = 1 it is -1/2
    worst = 0.0
    for y in (-3.0, -1.0, 0.5, 2.0):
        val = conjugate_grid(half_square, geom, pts, np.zeros(1), np.array([y])).value
        worst = max(worst, abs(val - 0.5 * y * y))
    check("conjugate of x^2/2 at p=0", worst <= gap_floor, f"max |err| = {worst:.3e}")

    val = conjugate_grid(half_square, geom, pts, np.ones(1), np.ones(1)).value
    check("conjugate reduction at p=1, X=1", abs(val - (-0.5)) <= gap_floor,
          f"value = {val:.6f}, analytic -0.5")

    val = conjugate_grid(lambda x: 0.0, geom, pts, np.zeros(1), np.zeros(1)).value
    check("conjugate of 0 at X=0", val == 0.0, f"value = {val!r}")

    # Fenchel-Young gaps over sampled (p, X, q)
    worst_gap = np.inf
    for p in (-1.0, 0.0, 2.0):
        for x in (-2.0, 1.0, 3.0):
            conj = conjugate_grid(half_square, geom, pts, np.array([p]), np.array([x]))
            for q in (-2.5, 0.0, 1.0, 4.0):
                worst_gap = min(worst_gap, fenchel_young_gap(
                    half_square, geom, conj, np.array([q])))
    check("Fenchel-Young gaps", worst_gap >= -gap_floor,
          f"min gap = {worst_gap:.3e} >= {-gap_floor:.3e}")

    problem = _quartic_dc_problem()
    sub = SubSolverSpec(kind="trust_region",
                        criterion=StoppingCriterion(max_iter=500, grad_norm_tol=1e-11))
    stop = StoppingCriterion(max_iter=200, grad_norm_tol=1e-10)
    _, trace = dca_solve(problem, np.array([2.0]), sub, stop)

    conj_h = None
    if tamper:
        conj_h = lambda p, x: -conjugate_grid(problem.h_cost, geom, pts, p, x).value
    report = primal_dual_sandwich_check(trace, problem.g_cost, problem.h_cost,
                                        geom, pts, tolerance=1e-3, conj_h=conj_h)
    check("DCA primal-dual sandwich", report.passed,
          f"{len(report.rows)} iterations, final gap = {report.final_gap:.3e}")

    # primal and dual grid minima agree (both -1/4 for the quartic family)
    f_primal = np.min(pts ** 4 - pts ** 2)
    xs = np.linspace(-10.0, 10.0, 2001)
    dual_vals = [
        conjugate_grid(problem.h_cost, geom, pts, np.zeros(1), np.array([x])).value
        - conjugate_grid(problem.g_cost, geom, pts, np.zeros(1), np.array([x])).value
        for x in xs
    ]
    f_dual = float(np.min(dual_vals))
    check("primal-dual value equality", abs(f_primal - f_dual) <= 1e-3,
          f"primal {f_primal:.6f} vs dual {f_dual:.6f}")

    passed = all(c["passed"] for c in checks)
    lines = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}: {c['detail']}"
             for c in checks]
    lines.append(f"{'PASS' if passed else 'FAIL'}  duality suite")
    (config.out_dir / "duality_report.txt").write_text("\n".join(lines) + "\n",
                                                       encoding="utf-8")
    _write_csv(config.out_dir / "sandwich.csv",
               ["k", "primal", "dual", "primal_next", "lower_residual", "upper_residual"],
               ([r.k, r.primal, r.dual, r.primal_next, r.lower_residual, r.upper_residual]
                for r in report.rows))
    return {"experiment": "duality", "passed": passed, "checks": checks}
