"""Shared oracles and generators for the test suite.

Everything here is deliberately independent of the package internals:
densities are built from raw matrix algebra, and the enclosing-ellipse
oracle is a direct parameter search, so tests compare two routes to the
same quantity.
"""

import numpy as np
from scipy.optimize import minimize

PAULIS = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


def random_density(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_pure_density(d, rng):
    psi = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    psi /= np.linalg.norm(psi)
    return np.outer(psi, psi.conj())


def random_hermitian(d, rng):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return (g + g.conj().T) / 2


def bloch_qubit(b):
    b = np.asarray(b, dtype=float)
    rho = np.eye(2, dtype=complex) / 2
    for k in range(3):
        rho += b[k] * PAULIS[k] / 2
    return rho


def enclosing_ellipse_bruteforce(vertices, starts=6, seed=0):
    """Minimum-area ellipse containing 2-d points, by parameter search.

    Parametrizes (x - c)^T H (x - c) <= 1 with H = L L^T lower
    triangular and minimizes -log det H under the containment
    constraints, from several starts.  Returns (center, H).
    """
    vertices = np.asarray(vertices, dtype=float)
    rng = np.random.default_rng(seed)
    centroid = vertices.mean(axis=0)
    spread = max(np.linalg.norm(vertices - centroid, axis=1).max(), 1e-9)

    def unpack(z):
        c = z[:2]
        low = np.array([[z[2], 0.0], [z[3], z[4]]])
        return c, low @ low.T

    def objective(z):
        _, quad = unpack(z)
        sign, logdet = np.linalg.slogdet(quad)
        return -logdet if sign > 0 else 1e9

    def constraints(z):
        c, quad = unpack(z)
        diff = vertices - c
        return 1.0 - np.einsum("ij,jk,ik->i", diff, quad, diff)

    best = None
    for k in range(starts):
        jitter = 0.3 * spread * rng.standard_normal(2) if k else np.zeros(2)
        z0 = np.array([*(centroid + jitter), 1.0 / spread, 0.0, 1.0 / spread])
        res = minimize(objective, z0, method="SLSQP",
                       constraints=[{"type": "ineq", "fun": constraints}],
                       options={"maxiter": 400, "ftol": 1e-14})
        if res.success and constraints(res.x).min() > -1e-9:
            if best is None or res.fun < best.fun:
                best = res
    assert best is not None, "oracle failed to find an enclosing ellipse"
    return unpack(best.x)


def triangle_area(points2d):
    a, b, c = np.asarray(points2d, dtype=float)
    return 0.5 * abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))
