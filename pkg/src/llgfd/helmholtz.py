"""Direct solver for (a I - alpha lap4) u = f with mirror-halo walls.

The mirror extrapolation is exactly the half-sample even symmetry of the
type-II cosine transform, so the long-stencil Laplacian is diagonal in the
per-axis DCT-II basis cos(pi q (i - 1/2)/N).  Its 1D symbol is

    lam_q = mu_q (1 - h^2/12 mu_q),   mu_q = -(4/h^2) sin^2(pi q / (2N)),

the symbol of D^2 (1 - h^2/12 D^2).  A plan precomputes the eigenvalues and
validates them by applying the actual stencil (ghost fill included) to every
1D basis vector; a dense factorization of the same operator serves as an
independent reference for small grids.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.fft
import scipy.linalg

from llgfd import backend
from llgfd.grid import GHOST, VectorField, Field, fill_ghosts


class PlanValidationError(RuntimeError):
    pass


class NonZeroMeanError(ValueError):
    pass


_VALIDATE_TOL = 1e-12
_VALIDATE_CHUNK = 256


def eigenvalues_1d(n):
    """Symbol of the 1D long-stencil second derivative on N cosine modes."""
    h = 1.0 / n
    q = np.arange(n)
    mu = -(4.0 / (h * h)) * np.sin(np.pi * q / (2.0 * n)) ** 2
    lam = mu * (1.0 - (h * h / 12.0) * mu)
    lam[0] = 0.0
    return lam


def _validate_eigenvalues(n, lam):
    """Apply the stencil to each cosine basis vector and compare with lam*v.

    The phase q (2i - 1) / (2N) is reduced modulo the period with exact
    integer arithmetic before the cosine call; naive evaluation loses
    ~eps * pi * q * N absolute accuracy to argument reduction, which at
    N = 1e4 already exceeds the validation tolerance.
    """
    h = 1.0 / n
    two_i_minus_1 = np.arange(1, 2 * n, 2, dtype=np.int64)
    scale = 1.0 + np.abs(lam).max()
    worst = 0.0
    for q0 in range(0, n, _VALIDATE_CHUNK):
        q = np.arange(q0, min(q0 + _VALIDATE_CHUNK, n), dtype=np.int64)
        phase = (q[:, None] * two_i_minus_1[None, :]) % (4 * n)
        basis = np.cos((np.pi / (2 * n)) * phase)
        ext = np.empty((len(q), n + 2 * GHOST))
        ext[:, GHOST:-GHOST] = basis
        backend.impl.fill_ghosts(ext, 1)
        out = np.empty_like(basis)
        backend.impl.d2_long(ext, 1, 0, h, out)
        out -= lam[q, None] * basis
        worst = max(worst, float(np.abs(out).max()) / scale)
    if worst > _VALIDATE_TOL:
        raise PlanValidationError(
            f"cosine-basis validation failed: max relative defect {worst:.3e}"
        )
    return worst


@dataclass
class SpectralPlan:
    """Cosine-diagonalization of (a I - alpha lap4) on one grid.

    Immutable after build; safe to share read-only across workers.
    """

    grid: object
    a: float
    alpha: float
    lam: np.ndarray  # per-axis 1D eigenvalues, shape (N,)
    lam_sum: np.ndarray = field(repr=False, default=None)  # interior-shaped
    denom: np.ndarray = field(repr=False, default=None)  # a - alpha*lam_sum

    @property
    def axes(self):
        return tuple(range(-self.grid.dim, 0))


def build_plan(grid, a, alpha):
    if a <= 0:
        raise ValueError(f"shift a must be positive, got {a}")
    if alpha <= 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    lam = eigenvalues_1d(grid.n)
    if np.any(np.diff(lam) >= 0):
        raise PlanValidationError("eigenvalues are not strictly decreasing")
    _validate_eigenvalues(grid.n, lam)
    lam_sum = np.zeros(grid.shape_int)
    for axis in range(grid.dim):
        shape = [1] * grid.dim
        shape[grid.dim - 1 - axis] = grid.n
        lam_sum = lam_sum + lam.reshape(shape)
    denom = a - alpha * lam_sum
    if denom.min() <= 0:
        raise PlanValidationError("operator is not positive definite")
    return SpectralPlan(grid=grid, a=a, alpha=alpha, lam=lam, lam_sum=lam_sum, denom=denom)


def solve_interior(plan, rhs_int, out_int):
    """Per-component DCT solve on raw interior arrays (3, *shape_int)."""
    axes = plan.axes
    for c in range(rhs_int.shape[0]):
        fhat = scipy.fft.dctn(rhs_int[c], type=2, norm="ortho", axes=axes)
        fhat /= plan.denom
        out_int[c] = scipy.fft.idctn(fhat, type=2, norm="ortho", axes=axes)
    return out_int


def solve(plan, rhs):
    """Solve (a I - alpha lap4) u = rhs; returns u with a fresh halo."""
    out = VectorField(plan.grid)
    solve_interior(plan, rhs.interior, out.interior)
    return fill_ghosts(out)


def apply_operator(plan, u):
    """(a I - alpha lap4) u on a ghost-filled field, as raw interior data."""
    out = np.empty((u.ncomp,) + plan.grid.shape_int)
    backend.impl.laplacian4(u.data, plan.grid.dim, plan.grid.h, out)
    out *= -plan.alpha
    out += plan.a * u.interior
    return out


def residual(plan, u, rhs):
    """Relative residual |(aI - alpha lap4) u - rhs|_2 / |rhs|_2."""
    r = apply_operator(plan, u) - rhs.interior
    num = float(np.sqrt(np.sum(r * r)))
    den = float(np.sqrt(np.sum(rhs.interior**2)))
    return num / den if den > 0 else num


_DENSE_CAP = 4096
_dense_lap_cache = {}


def _dense_lap4(grid):
    """Dense matrix of lap4 with mirror-halo rows folded in (cached per grid)."""
    key = (grid.dim, grid.n)
    if key in _dense_lap_cache:
        return _dense_lap_cache[key]
    ncells = grid.ncells
    mat = np.empty((ncells, ncells))
    chunk = max(1, min(256, ncells))
    for j0 in range(0, ncells, chunk):
        m = min(chunk, ncells - j0)
        ext = np.zeros((m,) + grid.shape_ext)
        eye = np.zeros((m, ncells))
        eye[np.arange(m), j0 + np.arange(m)] = 1.0
        sl = (slice(None),) + (slice(GHOST, -GHOST),) * grid.dim
        ext[sl] = eye.reshape((m,) + grid.shape_int)
        backend.impl.fill_ghosts(ext, grid.dim)
        out = np.empty((m,) + grid.shape_int)
        backend.impl.laplacian4(ext, grid.dim, grid.h, out)
        mat[:, j0 : j0 + m] = out.reshape(m, ncells).T
    _dense_lap_cache[key] = mat
    return mat


def solve_reference(grid, a, alpha, rhs):
    """Dense-factorization oracle for the spectral solve (small grids only)."""
    if grid.ncells > _DENSE_CAP:
        raise ValueError(
            f"dense reference capped at {_DENSE_CAP} cells, grid has {grid.ncells}"
        )
    mat = a * np.eye(grid.ncells) - alpha * _dense_lap4(grid)
    out = VectorField(grid)
    flat = rhs.interior.reshape(rhs.ncomp, grid.ncells)
    sol = scipy.linalg.solve(mat, flat.T, assume_a="sym")
    out.interior[...] = sol.T.reshape((rhs.ncomp,) + grid.shape_int)
    return fill_ghosts(out)


def _component_means(f):
    w = f.grid.h**f.grid.dim
    return w * f.interior.reshape(f.ncomp, -1).sum(axis=1)


def inv_neg_laplacian(plan, f):
    """psi with -lap4 psi = f and zero mean, for zero-mean f.

    The constant cosine mode is pinned to zero, which fixes the additive
    constant; rejects input whose componentwise mean exceeds 1e-12 |f|_2.
    """
    means = _component_means(f)
    l2 = np.sqrt(
        plan.grid.h**plan.grid.dim * float(np.sum(f.interior**2))
    )
    if np.abs(means).max() > 1e-12 * max(l2, 1e-300):
        raise NonZeroMeanError(
            f"inverse Laplacian needs zero-mean input, means={means}"
        )
    axes = plan.axes
    out = type(f)(plan.grid)
    invlam = np.zeros_like(plan.lam_sum)
    nz = plan.lam_sum < 0
    invlam[nz] = -1.0 / plan.lam_sum[nz]
    for c in range(f.ncomp):
        fhat = scipy.fft.dctn(f.interior[c], type=2, norm="ortho", axes=axes)
        fhat *= invlam
        out.interior[c] = scipy.fft.idctn(fhat, type=2, norm="ortho", axes=axes)
    return fill_ghosts(out)


def hminus1_norm(plan, f):
    """Discrete H^-1 norm sqrt(<(-lap4)^-1 f, f>) for zero-mean f."""
    psi = inv_neg_laplacian(plan, f)
    w = plan.grid.h**plan.grid.dim
    val = w * float(np.sum(psi.interior * f.interior))
    return np.sqrt(max(val, 0.0))
