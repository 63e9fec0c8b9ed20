"""The three Hadamard geometries used by the solvers and benchmarks.

* :class:`Euclidean` — flat space, the reference geometry.
* :class:`SPDManifold` — the cone of symmetric positive definite matrices
  with the affine-invariant metric ``<X,Y>_p = tr(X p^-1 Y p^-1)``.
* :class:`RosenbrockPlane` — the plane with the valley-adapted metric
  ``G_p = [[1+4p1^2, -2p1], [-2p1, 1]]`` under which the Rosenbrock coupling
  term becomes geodesically convex.

Points and tangent vectors are plain numpy arrays (vectors for the flat and
plane geometries, symmetric matrices for the SPD cone). Every operation takes
its base point explicitly; gradients at different iterates are only compared
after :meth:`Geometry.transport`.
"""

from __future__ import annotations

import math

import numpy as np

from .matfun import (
    spd_logdet,
    spd_sqrt_inv_sqrt,
    sym_apply,
    sym_dlog,
    sym_eig,
    symmetrize,
)

__all__ = ["Geometry", "Euclidean", "SPDManifold", "RosenbrockPlane"]


class Geometry:
    """Interface shared by the concrete geometries.

    Subclasses implement ``inner``, ``exp``, ``log``, ``transport`` and
    ``egrad_to_rgrad``; distance and geodesic points are derived from
    those (exact on Hadamard manifolds, where exp/log are global).
    """

    dim: int

    def inner(self, p, x, y) -> float:
        raise NotImplementedError

    def norm(self, p, x) -> float:
        return math.sqrt(max(self.inner(p, x, x), 0.0))

    def exp(self, p, x):
        raise NotImplementedError

    def log(self, p, q):
        raise NotImplementedError

    def dist(self, p, q) -> float:
        return self.norm(p, self.log(p, q))

    def geodesic(self, p, q, t: float):
        """Point gamma(t) on the geodesic from p (t=0) to q (t=1)."""
        if not 0.0 <= t <= 1.0:
            raise ValueError("parameter out of range")
        return self.exp(p, t * self.log(p, q))

    def transport(self, p, q, x):
        """Parallel transport of the tangent x from p to q."""
        raise NotImplementedError

    def egrad_to_rgrad(self, p, g):
        """Riemannian gradient from the Euclidean gradient at p."""
        raise NotImplementedError

    def adjoint_log_diff(self, q, p, x):
        """Gradient at p of the linear model term ell(p) = <x, log_q(p)>_q.

        This is the adjoint of the differential of ``p -> log_q(p)`` applied
        to the tangent ``x`` at q; it is what the generic DC subproblem
        gradient needs.
        """
        raise NotImplementedError

    def point_norm(self, p) -> float:
        """Ambient size of a point, used to scale finite-difference steps."""
        return float(np.linalg.norm(np.asarray(p).ravel()))


class Euclidean(Geometry):
    """Flat R^d with the dot-product metric."""

    def __init__(self, dim: int):
        self.dim = int(dim)

    def inner(self, p, x, y) -> float:
        return float(np.dot(np.ravel(x), np.ravel(y)))

    def exp(self, p, x):
        return np.asarray(p, dtype=float) + x

    def log(self, p, q):
        return np.asarray(q, dtype=float) - p

    def dist(self, p, q) -> float:
        return float(np.linalg.norm(np.asarray(q, dtype=float) - p))

    def transport(self, p, q, x):
        return np.asarray(x, dtype=float)

    def egrad_to_rgrad(self, p, g):
        return np.asarray(g, dtype=float)

    def adjoint_log_diff(self, q, p, x):
        return np.asarray(x, dtype=float)


class SPDManifold(Geometry):
    """SPD(n) with the affine-invariant metric tr(X p^-1 Y p^-1).

    exp_p(X) = p^{1/2} expm(p^{-1/2} X p^{-1/2}) p^{1/2} and its inverse
    log_p(q) = p^{1/2} logm(p^{-1/2} q p^{-1/2}) p^{1/2}; both are global
    diffeomorphisms (Hadamard manifold). The manifold dimension is
    n(n+1)/2.
    """

    def __init__(self, n: int):
        self.n = int(n)
        self.dim = self.n * (self.n + 1) // 2

    def random_point(self, rng: np.random.Generator, scale: float = 1.0):
        b = rng.standard_normal((self.n, self.n))
        return symmetrize(b @ b.T + self.n * 1e-3 * np.eye(self.n)) * scale

    def random_tangent(self, rng: np.random.Generator, scale: float = 1.0):
        return symmetrize(rng.standard_normal((self.n, self.n))) * scale

    def inner(self, p, x, y) -> float:
        px = np.linalg.solve(p, x)
        py = np.linalg.solve(p, y)
        return float(np.trace(px @ py))

    def exp(self, p, x):
        s, si = spd_sqrt_inv_sqrt(p)
        inner = symmetrize(si @ x @ si)
        return symmetrize(s @ sym_apply(inner, np.exp) @ s)

    def log(self, p, q):
        s, si = spd_sqrt_inv_sqrt(p)
        inner = symmetrize(si @ q @ si)
        return symmetrize(s @ sym_apply(inner, np.log) @ s)

    def dist(self, p, q) -> float:
        # ||logm(p^-1/2 q p^-1/2)||_F from the eigenvalues directly
        _, si = spd_sqrt_inv_sqrt(p)
        w, _ = sym_eig(symmetrize(si @ q @ si))
        if w[0] <= 0.0:
            raise ValueError("spectrum outside domain")
        return float(np.sqrt(np.sum(np.log(w) ** 2)))

    def transport(self, p, q, x):
        # E X E^T with E = (q p^-1)^{1/2} = p^{1/2}(p^{-1/2} q p^{-1/2})^{1/2} p^{-1/2}
        s, si = spd_sqrt_inv_sqrt(p)
        mid = sym_apply(symmetrize(si @ q @ si), np.sqrt)
        e = s @ mid @ si
        return symmetrize(e @ x @ e.T)

    def egrad_to_rgrad(self, p, g):
        return symmetrize(p @ symmetrize(g) @ p)

    def adjoint_log_diff(self, q, p, x):
        # ell(p) = tr(Xhat logm(M)) with Xhat = q^-1/2 X q^-1/2, M = q^-1/2 p q^-1/2;
        # Euclidean gradient q^-1/2 Dlogm(M)[Xhat] q^-1/2 by Daleckii-Krein,
        # then converted with p G p.
        _, qi = spd_sqrt_inv_sqrt(q)
        m = symmetrize(qi @ p @ qi)
        xhat = symmetrize(qi @ x @ qi)
        egrad = qi @ sym_dlog(m, xhat) @ qi
        return self.egrad_to_rgrad(p, egrad)

    def det_hessian_quadform(self, p, phi_d1, phi_d2, x) -> float:
        """<Hess phi(det(.))(p) X, X>_p for a det-composed cost.

        Equals (phi''(t) t^2 + phi'(t) t) tr(p^-1 X) <p, X>_p with t = det p;
        nonnegative for all X exactly when phi(det(.)) is geodesically convex.
        """
        t = float(np.exp(spd_logdet(p)))
        coeff = phi_d2(t) * t * t + phi_d1(t) * t
        tr_pinv_x = float(np.trace(np.linalg.solve(p, x)))
        return coeff * tr_pinv_x * self.inner(p, p, x)


class RosenbrockPlane(Geometry):
    """R^2 with the metric G_p = [[1+4p1^2, -2p1], [-2p1, 1]].

    The map psi(z) = (z1, z1^2 - z2) is an isometry from flat R^2, so
    geodesics are images of straight lines and exp/log have the closed forms

        exp_p(X) = (p1 + X1, p2 + X2 + X1^2)
        log_p(q) = (q1 - p1, q2 - p2 - (q1 - p1)^2)
    """

    dim = 2

    def metric_tensor(self, p) -> tuple[np.ndarray, np.ndarray]:
        """(G_p, G_p^{-1}); det G_p = 1 for every p."""
        p1 = float(p[0])
        g = np.array([[1.0 + 4.0 * p1 * p1, -2.0 * p1], [-2.0 * p1, 1.0]])
        ginv = np.array([[1.0, 2.0 * p1], [2.0 * p1, 1.0 + 4.0 * p1 * p1]])
        return g, ginv

    def inner(self, p, x, y) -> float:
        p1 = float(p[0])
        x1, x2 = float(x[0]), float(x[1])
        y1, y2 = float(y[0]), float(y[1])
        return (
            (1.0 + 4.0 * p1 * p1) * x1 * y1
            - 2.0 * p1 * (x1 * y2 + x2 * y1)
            + x2 * y2
        )

    def exp(self, p, x):
        x1 = float(x[0])
        return np.array([p[0] + x1, p[1] + x[1] + x1 * x1])

    def log(self, p, q):
        u = float(q[0]) - float(p[0])
        return np.array([u, q[1] - p[1] - u * u])

    def transport(self, p, q, x):
        # in the flat chart transport is the identity; conjugating with the
        # chart differentials gives (X1, X2 + 2(q1 - p1) X1)
        x1 = float(x[0])
        return np.array([x1, x[1] + 2.0 * (float(q[0]) - float(p[0])) * x1])

    def egrad_to_rgrad(self, p, g):
        p1 = float(p[0])
        g1, g2 = float(g[0]), float(g[1])
        return np.array([g1 + 2.0 * p1 * g2,
                         2.0 * p1 * g1 + (1.0 + 4.0 * p1 * p1) * g2])

    def adjoint_log_diff(self, q, p, x):
        # ell(p) = alpha u + beta w with (alpha, beta) = G_q x,
        # u = p1 - q1, w = p2 - q2 - u^2
        gq, _ = self.metric_tensor(q)
        alpha, beta = gq @ np.asarray(x, dtype=float)
        u = float(p[0]) - float(q[0])
        egrad = np.array([alpha - 2.0 * beta * u, beta])
        return self.egrad_to_rgrad(p, egrad)
