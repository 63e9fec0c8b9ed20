import numpy as np
import pytest

from rdcopt.manifolds import Euclidean, RosenbrockPlane, SPDManifold
from rdcopt.matfun import symmetrize


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_spd(rng, n, scale=1.0):
    b = rng.standard_normal((n, n))
    return symmetrize(b @ b.T + 0.5 * np.eye(n)) * scale


def random_sym(rng, n, scale=1.0):
    return symmetrize(rng.standard_normal((n, n))) * scale


def fd_slope(geometry, f, p, v, step=None):
    """Central-difference directional derivative of f along exp_p(t v)."""
    h = step if step is not None else 1e-6 * (1.0 + geometry.point_norm(p))
    return (f(geometry.exp(p, h * v)) - f(geometry.exp(p, -h * v))) / (2.0 * h)


def check_gradient(geometry, f, rgrad, p, directions, rel_tol=1e-5):
    """Assert <grad f(p), v> matches finite differences for every direction."""
    g = rgrad(p)
    worst = 0.0
    for v in directions:
        analytic = geometry.inner(p, g, v)
        numeric = fd_slope(geometry, f, p, v)
        err = abs(analytic - numeric) / max(1.0, abs(analytic))
        worst = max(worst, err)
    assert worst <= rel_tol, f"gradient mismatch: relative error {worst:.3e}"
    return worst


def sample_directions(geometry, rng, p, count):
    if isinstance(geometry, SPDManifold):
        return [random_sym(rng, geometry.n) for _ in range(count)]
    return [rng.standard_normal(geometry.dim) for _ in range(count)]


def sample_point(geometry, rng, scale=1.0):
    if isinstance(geometry, SPDManifold):
        return random_spd(rng, geometry.n, scale)
    if isinstance(geometry, RosenbrockPlane):
        return rng.standard_normal(2) * scale
    assert isinstance(geometry, Euclidean)
    return rng.standard_normal(geometry.dim) * scale
