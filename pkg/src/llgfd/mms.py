"""Manufactured exact solutions, forcing construction, and order estimation.

Both solution families have the form

    m_e = (cos(g) sin t,  sin(g) sin t,  cos t),

with g = cos(pi x) in 1D and g = cos(pi x) cos(pi y) cos(pi z) in 3D, so
|m_e| = 1 identically and the spatial structure enters only through g,
|grad g|^2 and lap g:

    d/dt m_e       = (cos g cos t, sin g cos t, -sin t)
    lap m_e        = sin t (-sin g lap g - cos g |grad g|^2,
                             cos g lap g - sin g |grad g|^2, 0)
    |grad m_e|^2   = sin^2 t |grad g|^2
    m_e x lap m_e  = (-sin t cos t (cos g lap g - sin g |grad g|^2),
                       sin t cos t (-sin g lap g - cos g |grad g|^2),
                       sin^2 t lap g)

The prescribed fields do not solve the homogeneous equation, so runs add the
induced source

    f = d/dt m_e + m_e x lap m_e - alpha lap m_e - alpha |grad m_e|^2 m_e

evaluated at the implicit time level.  `GriddedForcing` caches the spatial
factors once per grid so per-step evaluation is a few vector operations.
"""

from dataclasses import dataclass

import numpy as np

from llgfd.grid import GridMismatchError, VectorField, fill_ghosts, sample
from llgfd import ops


@dataclass(frozen=True)
class ManufacturedSolution:
    """Analytic descriptor of one solution family.

    g, grad_sq_g and lap_g take the broadcastable coordinate arrays of a
    grid (or plain floats) and return arrays of the broadcast shape;
    grad_g returns the tuple of per-axis partials of g.
    """

    dim: int
    g: callable
    grad_sq_g: callable
    lap_g: callable
    grad_g: callable

    def value(self, *coords_t):
        *coords, t = coords_t
        gv = self.g(*coords)
        s, c = np.sin(t), np.cos(t)
        one = np.ones_like(gv)
        return np.stack([np.cos(gv) * s, np.sin(gv) * s, c * one])

    def time_derivative(self, *coords_t):
        *coords, t = coords_t
        gv = self.g(*coords)
        s, c = np.sin(t), np.cos(t)
        one = np.ones_like(gv)
        return np.stack([np.cos(gv) * c, np.sin(gv) * c, -s * one])

    def laplacian(self, *coords_t):
        *coords, t = coords_t
        gv = self.g(*coords)
        g2 = self.grad_sq_g(*coords)
        lg = self.lap_g(*coords)
        s = np.sin(t)
        return np.stack(
            [
                s * (-np.sin(gv) * lg - np.cos(gv) * g2),
                s * (np.cos(gv) * lg - np.sin(gv) * g2),
                np.zeros_like(gv),
            ]
        )

    def grad_sq(self, *coords_t):
        *coords, t = coords_t
        return np.sin(t) ** 2 * self.grad_sq_g(*coords)

    def gradient(self, axis, *coords_t):
        """Per-axis spatial partial of m_e (axis 0=x, 1=y, 2=z)."""
        *coords, t = coords_t
        gv = self.g(*coords)
        ga = self.grad_g(*coords)[axis]
        s = np.sin(t)
        return np.stack(
            [-np.sin(gv) * s * ga, np.cos(gv) * s * ga, np.zeros_like(gv)]
        )


def _g_1d(x):
    return np.cos(np.pi * x)


def _g2_1d(x):
    return np.pi**2 * np.sin(np.pi * x) ** 2


def _lapg_1d(x):
    return -np.pi**2 * np.cos(np.pi * x)


def _gradg_1d(x):
    return (-np.pi * np.sin(np.pi * x),)


SOLUTION_1D = ManufacturedSolution(
    dim=1, g=_g_1d, grad_sq_g=_g2_1d, lap_g=_lapg_1d, grad_g=_gradg_1d
)


def _g_3d(x, y, z):
    return np.cos(np.pi * x) * np.cos(np.pi * y) * np.cos(np.pi * z)


def _g2_3d(x, y, z):
    sx, cx = np.sin(np.pi * x), np.cos(np.pi * x)
    sy, cy = np.sin(np.pi * y), np.cos(np.pi * y)
    sz, cz = np.sin(np.pi * z), np.cos(np.pi * z)
    return np.pi**2 * (
        (sx * cy * cz) ** 2 + (cx * sy * cz) ** 2 + (cx * cy * sz) ** 2
    )


def _lapg_3d(x, y, z):
    return -3.0 * np.pi**2 * _g_3d(x, y, z)


def _gradg_3d(x, y, z):
    sx, cx = np.sin(np.pi * x), np.cos(np.pi * x)
    sy, cy = np.sin(np.pi * y), np.cos(np.pi * y)
    sz, cz = np.sin(np.pi * z), np.cos(np.pi * z)
    return (-np.pi * sx * cy * cz, -np.pi * cx * sy * cz, -np.pi * cx * cy * sz)


SOLUTION_3D = ManufacturedSolution(
    dim=3, g=_g_3d, grad_sq_g=_g2_3d, lap_g=_lapg_3d, grad_g=_gradg_3d
)


def solution_for(dim):
    if dim == 1:
        return SOLUTION_1D
    if dim == 3:
        return SOLUTION_3D
    raise ValueError(f"no manufactured solution for dim {dim}")


def exact(sol, grid, t):
    """Point-wise sample of m_e at cell centers (ghosts unfilled)."""
    if sol.dim != grid.dim:
        raise GridMismatchError(
            f"solution is {sol.dim}D but grid is {grid.dim}D"
        )
    return sample(grid, sol.value, t)


def forcing(sol, alpha):
    """Analytic source f(x, t) induced by m_e in the rewritten equation."""

    def f(*coords_t):
        *coords, t = coords_t
        gv = sol.g(*coords)
        g2 = sol.grad_sq_g(*coords)
        lg = sol.lap_g(*coords)
        s, c = np.sin(t), np.cos(t)
        cg, sg = np.cos(gv), np.sin(gv)
        lap1 = s * (-sg * lg - cg * g2)
        lap2 = s * (cg * lg - sg * g2)
        cross1 = -c * s * (cg * lg - sg * g2)
        cross2 = c * s * (-sg * lg - cg * g2)
        cross3 = s * s * lg
        ag2 = alpha * s * s * g2
        one = np.ones_like(gv)
        return np.stack(
            [
                cg * c + cross1 - alpha * lap1 - ag2 * cg * s,
                sg * c + cross2 - alpha * lap2 - ag2 * sg * s,
                -s * one + cross3 - ag2 * c,
            ]
        )

    return f


class GriddedForcing:
    """Forcing evaluator with the grid-dependent trig factors precomputed."""

    def __init__(self, sol, grid, alpha):
        if sol.dim != grid.dim:
            raise GridMismatchError(
                f"solution is {sol.dim}D but grid is {grid.dim}D"
            )
        self.grid = grid
        self.alpha = alpha
        coords = grid.meshes()
        gv = np.broadcast_to(sol.g(*coords), grid.shape_int)
        self.cg = np.cos(gv)
        self.sg = np.sin(gv)
        self.g2 = np.broadcast_to(sol.grad_sq_g(*coords), grid.shape_int).copy()
        self.lg = np.broadcast_to(sol.lap_g(*coords), grid.shape_int).copy()

    def eval(self, t, out):
        """Write f(., t) into `out` of shape (3, *shape_int)."""
        s, c = np.sin(t), np.cos(t)
        a = self.alpha
        A = self.cg * self.lg - self.sg * self.g2
        B = -self.sg * self.lg - self.cg * self.g2
        ag2 = a * s * s * self.g2
        out[0] = self.cg * c - c * s * A - a * s * B - ag2 * self.cg * s
        out[1] = self.sg * c + c * s * B - a * s * A - ag2 * self.sg * s
        out[2] = -s + s * s * self.lg - ag2 * c
        return out


class GriddedExact:
    """Exact-solution evaluator with spatial trig factors precomputed."""

    def __init__(self, sol, grid):
        if sol.dim != grid.dim:
            raise GridMismatchError(
                f"solution is {sol.dim}D but grid is {grid.dim}D"
            )
        self.grid = grid
        coords = grid.meshes()
        gv = np.broadcast_to(sol.g(*coords), grid.shape_int)
        self.cg = np.cos(gv)
        self.sg = np.sin(gv)

    def eval(self, t, out):
        s, c = np.sin(t), np.cos(t)
        out[0] = self.cg * s
        out[1] = self.sg * s
        out[2] = c
        return out


def error_report(numeric, sol, t):
    """linf/l2/H1 norms of numeric - m_e(t).

    The error halo is mirror-filled for the pointwise norms.  The H1
    gradient part compares the long-stencil first derivative of the numeric
    field against the analytic gradient of m_e at cell centers, the flavor
    whose magnitudes track the reference tables (the face-based grad_h of
    the reflected error underestimates them by ~2x).
    """
    grid = numeric.grid
    e = VectorField(grid)
    e.interior[...] = numeric.interior
    e.interior[...] -= exact(sol, grid, t).interior
    fill_ghosts(e)
    l2sq = ops.inner_l2(e, e)
    linf = ops.norm_linf(e)
    if not numeric.ghosts_filled:
        fill_ghosts(numeric)
    w = grid.h**grid.dim
    gsq = 0.0
    coords = grid.meshes()
    for axis in range(grid.dim):
        ge = ops.d1_long(numeric, axis).interior - sol.gradient(axis, *coords, t)
        gsq += w * float(np.sum(ge * ge))
    return {
        "linf": linf,
        "l2": np.sqrt(max(l2sq, 0.0)),
        "h1": np.sqrt(max(l2sq + gsq, 0.0)),
    }


def observed_order(pairs):
    """Least-squares slope of log(error) against log(resolution).

    `pairs` is a sequence of (resolution, error); errors must be positive and
    at least two pairs are needed.
    """
    slope, _ = order_fit(pairs)
    return slope


def order_fit(pairs):
    """Slope and fit residual (rms of log-space misfit) for an order study."""
    pairs = list(pairs)
    if len(pairs) < 2:
        raise ValueError("need at least two (resolution, error) pairs")
    res = np.array([p[0] for p in pairs], dtype=float)
    err = np.array([p[1] for p in pairs], dtype=float)
    if np.any(err <= 0):
        raise ValueError("errors must be positive for a log-log fit")
    if np.any(res <= 0):
        raise ValueError("resolutions must be positive")
    coeffs, residuals, *_ = np.polynomial.polynomial.polyfit(
        np.log(res), np.log(err), 1, full=True
    )
    slope = float(coeffs[1])
    misfit = np.log(err) - np.polynomial.polynomial.polyval(np.log(res), coeffs)
    return slope, float(np.sqrt(np.mean(misfit**2)))
