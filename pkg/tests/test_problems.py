import math

import numpy as np
import pytest

from rdcopt.manifolds import SPDManifold
from rdcopt.matfun import spd_logdet, sym_apply, symmetrize
from rdcopt.problems import (
    FrechetBoxProblem,
    LogDetProblem,
    RosenbrockProblem,
    ScalarFunction,
    TrDetProblem,
    box_feasible,
    box_linear_subproblem,
    box_slack,
    feasibility_safeguard,
    frechet_dcproblem,
    frechet_grad,
    frechet_grad_alt,
    frechet_linear_oracle,
    frechet_subproblem_matrix,
    frechet_subproblem_matrix_alt,
    frechet_variance,
    load_frechet_instance,
    log_power,
    logdet_dcproblem,
    logdet_subproblem,
    power,
    random_frechet_instance,
    rosenbrock_cost,
    rosenbrock_dcproblem,
    rosenbrock_grad,
    rosenbrock_subproblem,
    save_frechet_spec,
    trdet_dcproblem,
)
from rdcopt.solvers import (
    StoppingCriterion,
    SubSolverSpec,
    dca_solve,
    is_critical,
    trust_region_solve,
)

from conftest import check_gradient, random_spd, random_sym, sample_directions


TR_SUB = SubSolverSpec("trust_region", StoppingCriterion(max_iter=5000, grad_norm_tol=1e-10))


def logm_sym(a):
    return sym_apply(a, np.log)


def box_objective(s, x, z):
    return float(np.trace(s @ logm_sym(symmetrize(x @ z @ x))))


def brute_force_box_optimum(s, x, lower, upper, n_angles=91, n_axis=61):
    """Dense grid oracle for the 2x2 Loewner-box linear subproblem.

    Transformed problem: minimize tr(D log Zh) over Lh <= Zh <= Uh with
    Zh = Lh + B^{1/2} V B^{1/2}, V = R(theta) diag(v1, v2) R(theta)^T in
    [0, I]; the grid over (theta, v1, v2) covers the feasible set, followed
    by a local refinement around the best cell. Uses the closed-form 2x2
    symmetric eigenvalues, fully vectorized.
    """
    d, q = np.linalg.eigh(symmetrize(s))
    xq = x @ q
    lh = symmetrize(xq.T @ lower @ xq)
    uh = symmetrize(xq.T @ upper @ xq)
    b = symmetrize(uh - lh)
    w, v = np.linalg.eigh(b)
    b_sqrt = (v * np.sqrt(w)) @ v.T

    def batch(thetas, v1s, v2s):
        t, v1, v2 = np.meshgrid(thetas, v1s, v2s, indexing="ij")
        c, sn = np.cos(t), np.sin(t)
        va = c * c * v1 + sn * sn * v2
        vb = c * sn * (v1 - v2)
        vc = sn * sn * v1 + c * c * v2
        b11, b12, b22 = b_sqrt[0, 0], b_sqrt[0, 1], b_sqrt[1, 1]
        m11 = va * b11 + vb * b12
        m12 = va * b12 + vb * b22
        m21 = vb * b11 + vc * b12
        m22 = vb * b12 + vc * b22
        a = lh[0, 0] + b11 * m11 + b12 * m21
        bb = lh[0, 1] + b11 * m12 + b12 * m22
        cc = lh[1, 1] + b12 * m12 + b22 * m22
        half = 0.5 * (a + cc)
        rad = np.sqrt(np.maximum(0.25 * (a - cc) ** 2 + bb ** 2, 0.0))
        l1 = np.maximum(half - rad, 1e-300)
        l2 = np.maximum(half + rad, 1e-300)
        near = (l2 - l1) <= 1e-14 * np.maximum(1.0, l2)
        with np.errstate(divide="ignore", invalid="ignore"):
            beta = np.where(near, 1.0 / half, (np.log(l2) - np.log(l1)) / (l2 - l1))
        alpha = np.log(l1) - beta * l1
        return d[0] * (alpha + beta * a) + d[1] * (alpha + beta * cc)

    thetas = np.linspace(0.0, np.pi, n_angles)
    axis = np.linspace(0.0, 1.0, n_axis)
    values = batch(thetas, axis, axis)
    idx = np.unravel_index(np.argmin(values), values.shape)
    best = float(values[idx])
    t0, v10, v20 = thetas[idx[0]], axis[idx[1]], axis[idx[2]]
    dt, dv = np.pi / (n_angles - 1), 1.0 / (n_axis - 1)
    for _ in range(3):
        ts = np.linspace(t0 - dt, t0 + dt, 21)
        v1s = np.clip(np.linspace(v10 - dv, v10 + dv, 21), 0.0, 1.0)
        v2s = np.clip(np.linspace(v20 - dv, v20 + dv, 21), 0.0, 1.0)
        values = batch(ts, v1s, v2s)
        idx = np.unravel_index(np.argmin(values), values.shape)
        best = min(best, float(values[idx]))
        t0, v10, v20 = ts[idx[0]], v1s[idx[1]], v2s[idx[2]]
        dt, dv = dt / 10.0, dv / 10.0
    return best


class TestScalarFunctions:
    def test_log_power_derivatives(self):
        phi = log_power(4)
        for t in (0.5, 1.3, 7.0):
            h = 1e-6 * t
            fd1 = (phi.value(t + h) - phi.value(t - h)) / (2 * h)
            fd2 = (phi.d1(t + h) - phi.d1(t - h)) / (2 * h)
            assert abs(phi.d1(t) - fd1) <= 1e-5 * (1 + abs(fd1))
            assert abs(phi.d2(t) - fd2) <= 1e-5 * (1 + abs(fd2))

    def test_convexity_condition_enforced(self):
        bad = ScalarFunction(lambda t: -t * t, lambda t: -2.0 * t, lambda t: -2.0)
        with pytest.raises(ValueError, match="convexity"):
            LogDetProblem(3, phi1=bad)

    def test_trdet_condition_enforced(self):
        decreasing = ScalarFunction(lambda t: -t, lambda t: -1.0, lambda t: 0.0)
        with pytest.raises(ValueError):
            TrDetProblem(3, phi1=decreasing)


class TestLogDetProblem:
    def test_identity_point(self):
        problem = logdet_dcproblem(LogDetProblem(3))
        eye = np.eye(3)
        assert problem.cost(eye) == 0.0
        assert np.abs(problem.g_rgrad(eye)).max() == 0.0
        assert np.abs(problem.h_rgrad(eye)).max() == 0.0

    def test_critical_set(self):
        n = 4
        problem = logdet_dcproblem(LogDetProblem(n))
        p = math.exp(1.0 / (n * math.sqrt(2.0))) * np.eye(n)
        ok, residual = is_critical(problem, p, 1e-8)
        assert ok, residual
        assert abs(problem.cost(p) + 0.25) <= 1e-12

    def test_initial_cost_scalar_oracle(self):
        for n in (2, 5, 8):
            problem = logdet_dcproblem(LogDetProblem(n))
            p0 = math.log(n) * np.eye(n)
            t = n * math.log(math.log(n))
            assert problem.cost(p0) == pytest.approx(t ** 4 - t ** 2, rel=1e-12)

    def test_gradients_match_finite_differences(self, rng):
        problem = logdet_dcproblem(LogDetProblem(3))
        geom = problem.geometry
        for _ in range(5):
            p = random_spd(rng, 3)
            dirs = sample_directions(geom, rng, p, 3)
            check_gradient(geom, problem.g_cost, problem.g_rgrad, p, dirs)
            check_gradient(geom, problem.h_cost, problem.h_rgrad, p, dirs)

    def test_subproblem_value_at_iterate(self, rng):
        spec = LogDetProblem(3)
        q = random_spd(rng, 3)
        cost, _ = logdet_subproblem(spec, q)
        det_q = math.exp(spd_logdet(q))
        assert cost(q) == pytest.approx(spec.phi1.value(det_q), rel=1e-12)

    def test_subproblem_gradient_fd(self, rng):
        spec = LogDetProblem(3)
        geom = SPDManifold(3)
        q = random_spd(rng, 3)
        cost, rgrad = logdet_subproblem(spec, q)
        for _ in range(3):
            p = random_spd(rng, 3)
            check_gradient(geom, cost, rgrad, p, sample_directions(geom, rng, p, 3))

    def test_subproblem_minimizer_stationarity(self, rng):
        # for the defaults the minimizer satisfies 4 (log det p)^3 = 2 log det q
        spec = LogDetProblem(3)
        geom = SPDManifold(3)
        q = random_spd(rng, 3, scale=1.5)
        cost, rgrad = logdet_subproblem(spec, q)
        p_hat, trace = trust_region_solve(
            geom, cost, rgrad, q, StoppingCriterion(max_iter=5000, grad_norm_tol=1e-10))
        assert trace.reason == "gradient norm"
        lhs = 4.0 * spd_logdet(p_hat) ** 3
        rhs = 2.0 * spd_logdet(q)
        assert abs(lhs - rhs) <= 1e-8 * (1.0 + abs(rhs))

    def test_convexity_certificates(self, rng):
        geom = SPDManifold(3)
        spec = LogDetProblem(3)
        for _ in range(10):
            p = random_spd(rng, 3)
            x = random_sym(rng, 3)
            assert geom.det_hessian_quadform(p, spec.phi1.d1, spec.phi1.d2, x) >= -1e-10
            assert geom.det_hessian_quadform(p, spec.phi2.d1, spec.phi2.d2, x) >= -1e-10
            # -log det has exactly zero Hessian
            neg_log = (lambda t: -1.0 / t, lambda t: 1.0 / t ** 2)
            q = geom.det_hessian_quadform(p, *neg_log, x)
            assert abs(q) <= 1e-10 * (1.0 + geom.inner(p, x, x))


class TestTrDetProblem:
    def test_gradient_at_identity(self):
        spec = TrDetProblem(3)
        problem = trdet_dcproblem(spec)
        eye = np.eye(3)
        np.testing.assert_allclose(problem.g_rgrad(eye), spec.phi1.d1(3.0) * eye)

    def test_identity_is_critical_for_default_family(self):
        # a1 b1 n^(b1-1) = a2 b2 pins the identity as a critical point
        for n in (2, 3, 5):
            problem = trdet_dcproblem(TrDetProblem(n))
            ok, residual = is_critical(problem, np.eye(n), 1e-10)
            assert ok, residual

    def test_gradients_match_finite_differences(self, rng):
        problem = trdet_dcproblem(TrDetProblem(3))
        geom = problem.geometry
        for _ in range(5):
            p = random_spd(rng, 3)
            dirs = sample_directions(geom, rng, p, 3)
            check_gradient(geom, problem.g_cost, problem.g_rgrad, p, dirs)
            check_gradient(geom, problem.h_cost, problem.h_rgrad, p, dirs)

    def test_descent_from_twice_identity(self):
        problem = trdet_dcproblem(TrDetProblem(3))
        _, trace = dca_solve(problem, 2.0 * np.eye(3), TR_SUB,
                             StoppingCriterion(max_iter=4))
        fs = np.asarray(trace.f)
        assert len(fs) >= 3
        assert np.all(np.diff(fs) <= 1e-10)


class TestRosenbrock:
    def test_initial_cost(self):
        spec = RosenbrockProblem(a=2e5, b=1.0)
        assert rosenbrock_cost(spec, np.array([0.1, 0.2])) == pytest.approx(7220.81, abs=1e-9)

    def test_minimizer(self):
        spec = RosenbrockProblem(a=2e5, b=1.0)
        p_star = np.array([1.0, 1.0])
        assert rosenbrock_cost(spec, p_star) == 0.0
        np.testing.assert_allclose(rosenbrock_grad(spec, p_star), np.zeros(2))

    def test_h_gradient_form(self, rng):
        spec = RosenbrockProblem(a=2e5, b=1.0)
        problem = rosenbrock_dcproblem(spec, "euclidean")
        for _ in range(5):
            p = rng.standard_normal(2)
            np.testing.assert_allclose(problem.h_rgrad(p),
                                       [2.0 * (p[0] - spec.b), 0.0], atol=1e-14)

    @pytest.mark.parametrize("geometry", ["euclidean", "rb"])
    def test_gradients_match_finite_differences(self, geometry, rng):
        spec = RosenbrockProblem(a=10.0, b=1.0)  # moderate scale for fd accuracy
        problem = rosenbrock_dcproblem(spec, geometry)
        geom = problem.geometry
        for _ in range(5):
            p = rng.standard_normal(2)
            dirs = sample_directions(geom, rng, p, 3)
            check_gradient(geom, problem.g_cost, problem.g_rgrad, p, dirs)
            check_gradient(geom, problem.h_cost, problem.h_rgrad, p, dirs)
            check_gradient(geom, lambda z: rosenbrock_cost(spec, z),
                           lambda z: geom.egrad_to_rgrad(z, rosenbrock_grad(spec, z)),
                           p, dirs)

    def test_split_reconstructs_cost(self, rng):
        spec = RosenbrockProblem(a=2e5, b=1.0)
        problem = rosenbrock_dcproblem(spec, "rb")
        for _ in range(10):
            p = rng.standard_normal(2)
            assert problem.cost(p) == pytest.approx(rosenbrock_cost(spec, p), rel=1e-12)

    def test_subproblem_reduces_to_g_when_linear_term_vanishes(self, rng):
        spec = RosenbrockProblem(a=3.0, b=1.0)
        problem = rosenbrock_dcproblem(spec, "euclidean")
        cost, _ = rosenbrock_subproblem(spec, np.array([spec.b, 0.37]))
        for _ in range(5):
            p = rng.standard_normal(2)
            assert cost(p) == pytest.approx(problem.g_cost(p), rel=1e-12)

    def test_subproblem_gradient(self, rng):
        spec = RosenbrockProblem(a=7.0, b=2.0)
        q = rng.standard_normal(2)
        cost, egrad = rosenbrock_subproblem(spec, q)
        # vanishing at the minimizer when the iterate already sits there
        cost0, egrad0 = rosenbrock_subproblem(spec, np.array([spec.b, spec.b ** 2]))
        np.testing.assert_allclose(egrad0(np.array([spec.b, spec.b ** 2])), np.zeros(2),
                                   atol=1e-14)
        for _ in range(5):
            p = rng.standard_normal(2)
            h = 1e-6
            for e in (np.array([1.0, 0.0]), np.array([0.0, 1.0])):
                fd = (cost(p + h * e) - cost(p - h * e)) / (2 * h)
                assert abs(float(egrad(p) @ e) - fd) <= 1e-5 * (1.0 + abs(fd))
        # second gradient component zero forces p2 = p1^2
        p = rng.standard_normal(2)
        g = egrad(p)
        if abs(g[1]) < 1e-12:
            assert abs(p[0] ** 2 - p[1]) < 1e-10

    def test_h_convex_along_plane_geodesics(self, rng):
        spec = RosenbrockProblem(a=2e5, b=1.0)
        problem = rosenbrock_dcproblem(spec, "rb")
        geom = problem.geometry
        for _ in range(10):
            p, q = rng.standard_normal(2), rng.standard_normal(2)
            mid = geom.geodesic(p, q, 0.5)
            second_diff = problem.h_cost(p) + problem.h_cost(q) - 2.0 * problem.h_cost(mid)
            assert second_diff >= -1e-10


@pytest.fixture
def frechet_instance(rng):
    prob, p0 = random_frechet_instance(4, 8, seed=7)
    return prob, p0


class TestFrechetProblem:
    def test_single_point_variance(self, rng):
        q = random_spd(rng, 3)
        prob = FrechetBoxProblem(points=q[None, :, :], weights=np.ones(1),
                                 lower=0.5 * np.eye(3), upper=10.0 * np.eye(3))
        assert frechet_variance(prob, q) == pytest.approx(0.0, abs=1e-18)
        np.testing.assert_allclose(frechet_grad(prob, q), np.zeros((3, 3)), atol=1e-10)
        np.testing.assert_allclose(frechet_subproblem_matrix(prob, q),
                                   np.zeros((3, 3)), atol=1e-10)

    def test_gradient_forms_agree(self, frechet_instance, rng):
        prob, _ = frechet_instance
        for _ in range(5):
            p = random_spd(rng, prob.n)
            g1 = frechet_grad(prob, p)
            g2 = frechet_grad_alt(prob, p)
            assert np.abs(g1 - g2).max() <= 1e-9 * (1.0 + np.abs(g1).max())
            s1 = frechet_subproblem_matrix(prob, p)
            s2 = frechet_subproblem_matrix_alt(prob, p)
            assert np.abs(s1 - s2).max() <= 1e-9 * (1.0 + np.abs(s1).max())

    def test_gradient_is_weighted_log_mean(self, frechet_instance, rng):
        prob, _ = frechet_instance
        geom = SPDManifold(prob.n)
        for _ in range(3):
            p = random_spd(rng, prob.n)
            expected = -2.0 * sum(mu * geom.log(p, q)
                                  for mu, q in zip(prob.weights, prob.points))
            np.testing.assert_allclose(frechet_grad(prob, p), expected, atol=1e-9)
            check_gradient(geom, lambda z: frechet_variance(prob, z),
                           lambda z: frechet_grad(prob, z), p,
                           sample_directions(geom, rng, p, 3))

    def test_subproblem_matrix_pairing_identity(self, frechet_instance, rng):
        # <-grad h(p), log_p(z)>_p = tr(s log(p^-1/2 z p^-1/2))
        prob, _ = frechet_instance
        geom = SPDManifold(prob.n)
        from rdcopt.matfun import spd_sqrt_inv_sqrt
        for _ in range(5):
            p = random_spd(rng, prob.n)
            z = random_spd(rng, prob.n)
            lhs = geom.inner(p, -frechet_grad(prob, p), geom.log(p, z))
            s = frechet_subproblem_matrix(prob, p)
            _, si = spd_sqrt_inv_sqrt(p)
            rhs = float(np.trace(s @ logm_sym(symmetrize(si @ z @ si))))
            assert abs(lhs - rhs) <= 1e-9 * (1.0 + abs(lhs))


class TestBoxLinearSubproblem:
    def test_diagonal_worked_instance(self):
        z = box_linear_subproblem(np.diag([-1.0, 1.0]), np.eye(2),
                                  0.5 * np.eye(2), 2.0 * np.eye(2))
        np.testing.assert_allclose(z, np.diag([2.0, 0.5]), atol=1e-9)

    def test_zero_objective_returns_lower_anchor(self, rng):
        lower = random_spd(rng, 2, 0.5)
        upper = symmetrize(lower + random_spd(rng, 2))
        x = random_spd(rng, 2)
        z = box_linear_subproblem(np.zeros((2, 2)), x, lower, upper)
        np.testing.assert_allclose(z, lower, atol=1e-9)
        assert box_slack(z, lower, upper) >= -1e-10

    def test_random_instances_beat_brute_force(self, rng):
        for _ in range(25):
            s = random_sym(rng, 2)
            x = random_spd(rng, 2)
            lower = random_spd(rng, 2, 0.5)
            upper = symmetrize(lower + random_spd(rng, 2))
            z = box_linear_subproblem(s, x, lower, upper)
            assert box_slack(z, lower, upper) >= -1e-10
            obj = box_objective(s, x, z)
            brute = brute_force_box_optimum(s, x, lower, upper)
            assert obj <= brute + 1e-6

    def test_deterministic(self, rng):
        s = random_sym(rng, 3)
        x = random_spd(rng, 3)
        lower = random_spd(rng, 3, 0.5)
        upper = symmetrize(lower + random_spd(rng, 3))
        z1 = box_linear_subproblem(s, x, lower, upper)
        z2 = box_linear_subproblem(s, x, lower, upper)
        np.testing.assert_array_equal(z1, z2)

    def test_degenerate_box_rejected(self, rng):
        lower = random_spd(rng, 2)
        with pytest.raises(ValueError, match="degenerate box"):
            box_linear_subproblem(np.eye(2), np.eye(2), lower, lower)


class TestSafeguard:
    def test_feasible_returned_unchanged(self, rng):
        lower = 0.5 * np.eye(2)
        upper = 2.0 * np.eye(2)
        q = np.eye(2)
        assert feasibility_safeguard(np.eye(2), q, lower, upper) is q

    def test_small_violation_restored(self):
        lower = 0.5 * np.eye(2)
        upper = 2.0 * np.eye(2)
        p_prev = np.eye(2)
        q_star = upper + 2e-13 * np.eye(2)  # the violation scale seen in practice
        assert not box_feasible(q_star, lower, upper)
        out = feasibility_safeguard(p_prev, q_star, lower, upper)
        assert box_feasible(out, lower, upper)
        assert SPDManifold(2).dist(out, q_star) <= 1e-9

    def test_previous_iterate_is_fallback(self):
        lower = 0.5 * np.eye(2)
        upper = 2.0 * np.eye(2)
        p_prev = np.eye(2)
        out = feasibility_safeguard(p_prev, p_prev, lower, upper)
        assert out is p_prev


class TestRandomInstance:
    def test_single_point_degenerate(self):
        with pytest.raises(ValueError, match="degenerate box"):
            random_frechet_instance(3, 1, seed=0)

    def test_box_well_ordered_and_start_feasible(self):
        prob, p0 = random_frechet_instance(5, 20, seed=42)
        w = np.linalg.eigvalsh(prob.upper - prob.lower)
        assert w[0] > 0.0
        assert box_feasible(p0, prob.lower, prob.upper)
        assert prob.weights.sum() == pytest.approx(1.0, abs=1e-12)

    def test_seed_determinism(self):
        a, pa = random_frechet_instance(4, 6, seed=3)
        b, pb = random_frechet_instance(4, 6, seed=3)
        np.testing.assert_array_equal(a.points, b.points)
        np.testing.assert_array_equal(a.weights, b.weights)
        np.testing.assert_array_equal(pa, pb)

    def test_spec_roundtrip(self, tmp_path):
        path = tmp_path / "instance.json"
        save_frechet_spec(path, 4, 6, 3)
        prob, p0 = load_frechet_instance(path)
        ref, ref_p0 = random_frechet_instance(4, 6, 3)
        np.testing.assert_array_equal(prob.points, ref.points)
        np.testing.assert_array_equal(p0, ref_p0)


class TestFrechetDCParts:
    def test_oracle_matches_constrained_hook(self, frechet_instance):
        prob, p0 = frechet_instance
        dc = frechet_dcproblem(prob)
        oracle = frechet_linear_oracle(prob)
        x0 = dc.h_rgrad(p0)
        z_hook = dc.constrained_subsolver(p0, x0)
        z_oracle = oracle(p0, -x0)
        assert dc.geometry.dist(z_hook, z_oracle) <= 1e-10 or np.allclose(z_hook, z_oracle)

    def test_dca_monotone_and_feasible(self, frechet_instance):
        prob, p0 = frechet_instance
        dc = frechet_dcproblem(prob)
        stop = StoppingCriterion(max_iter=100, iterate_change_tol=1e-14,
                                 grad_change_tol=1e-9)
        _, trace = dca_solve(dc, p0, None, stop, record_points=True)
        h = -np.asarray(trace.f)
        if len(h) > 1:
            assert np.all(np.diff(h) >= -1e-12)
        for point in trace.points:
            assert box_slack(point, prob.lower, prob.upper) >= -1e-10

    def test_dca_accepts_infeasible_start(self, frechet_instance, rng):
        # DCA needs no feasible starting point: the first subproblem step
        # lands in the box and the cost is finite from then on
        prob, _ = frechet_instance
        dc = frechet_dcproblem(prob)
        p0 = symmetrize(prob.upper * 4.0)  # outside the box
        assert not box_feasible(p0, prob.lower, prob.upper)
        stop = StoppingCriterion(max_iter=50, iterate_change_tol=1e-14,
                                 grad_change_tol=1e-9)
        p, trace = dca_solve(dc, p0, None, stop, record_points=True)
        assert np.isinf(trace.f[0])
        assert np.all(np.isfinite(np.asarray(trace.f)[1:]))
        assert box_slack(p, prob.lower, prob.upper) >= -1e-10
