"""Executable checks of the discrete identities and inequalities the solver
relies on: summation by parts, gradient-norm bounds, the cross-product
adjoint identity, projection stability, the BDF3 telescope decomposition,
and the boundary-extrapolation consistency orders.

Equality checks are algebraic identities of the discrete operators; any
violation beyond accumulated roundoff is an implementation bug, never
statistical noise.  Inequality checks are proven theorems and are enforced
with zero tolerance.
"""

import json
from dataclasses import asdict, dataclass
from importlib import resources

import numpy as np
from scipy.optimize import least_squares

from llgfd import ops
from llgfd.grid import VectorField, fill_ghosts, make_grid
from llgfd.mms import order_fit

BDF3_WEIGHTS = np.array([11.0 / 6.0, -3.0, 1.5, -1.0 / 3.0])
TEST_WEIGHTS = np.array([2.0, -1.0, 0.0, 0.0])

EQUALITY_TOL = 1e-12
TELESCOPE_TOL = 1e-10


@dataclass
class TelescopeCoefficients:
    """Weights a_1..a_10 of the telescoped quadratic-form decomposition.

    For all scalar sequences (e3, e2, e1, e0),

        (11/6 e3 - 3 e2 + 3/2 e1 - 1/3 e0) (2 e3 - e2)
          = (a1 e3)^2 - (a1 e2)^2
          + (a2 e3 + a3 e2)^2 - (a2 e2 + a3 e1)^2
          + (a4 e3 + a5 e2 + a6 e1)^2 - (a4 e2 + a5 e1 + a6 e0)^2
          + (a7 e3 + a8 e2 + a9 e1 + a10 e0)^2.
    """

    alpha: np.ndarray

    def groups(self):
        a = self.alpha
        return (
            np.array([a[0]]),
            np.array([a[1], a[2]]),
            np.array([a[3], a[4], a[5]]),
            np.array([a[6], a[7], a[8], a[9]]),
        )


@dataclass
class LemmaReport:
    lemma: str
    trials: int
    max_violation: float
    tol: float
    passed: bool
    detail: str = ""

    def as_dict(self):
        return asdict(self)


def _matching_residual(alpha):
    """Upper-triangle mismatch of the two quadratic forms in (e3,e2,e1,e0)."""
    ql = 0.5 * (
        np.outer(BDF3_WEIGHTS, TEST_WEIGHTS) + np.outer(TEST_WEIGHTS, BDF3_WEIGHTS)
    )
    a1, a2, a3, a4, a5, a6, a7, a8, a9, a10 = alpha
    q = np.zeros((4, 4))
    q[0, 0] += a1 * a1
    q[1, 1] -= a1 * a1
    for vec, sign in (
        (np.array([a2, a3, 0, 0]), 1),
        (np.array([0, a2, a3, 0]), -1),
        (np.array([a4, a5, a6, 0]), 1),
        (np.array([0, a4, a5, a6]), -1),
        (np.array([a7, a8, a9, a10]), 1),
    ):
        q += sign * np.outer(vec, vec)
    return (q - ql)[np.triu_indices(4)]


def derive_telescope_coeffs(seed=0, max_starts=200, residual_tol=1e-10):
    """Solve the 10 quadratic matching equations numerically."""
    rng = np.random.default_rng(seed)
    best = None
    for _ in range(max_starts):
        sol = least_squares(
            _matching_residual,
            rng.standard_normal(10),
            xtol=3e-16,
            ftol=3e-16,
            gtol=3e-16,
            max_nfev=10000,
        )
        if best is None or sol.cost < best.cost:
            best = sol
        if np.abs(_matching_residual(best.x)).max() <= residual_tol:
            break
    alpha = best.x
    if np.abs(_matching_residual(alpha)).max() > residual_tol:
        raise RuntimeError(
            "telescope coefficient solve did not reach the residual tolerance"
        )
    # fix the sign freedoms so the result is reproducible
    if alpha[0] < 0:
        alpha[0] = -alpha[0]
    if alpha[1] < 0:
        alpha[1:3] = -alpha[1:3]
    if alpha[3] < 0:
        alpha[3:6] = -alpha[3:6]
    if alpha[6] < 0:
        alpha[6:10] = -alpha[6:10]
    return TelescopeCoefficients(alpha=alpha)


def load_telescope_coeffs():
    """Pinned coefficients from the committed fixture, re-validated on load."""
    payload = json.loads(
        resources.files("llgfd.data").joinpath("telescope_coeffs.json").read_text()
    )
    coeffs = TelescopeCoefficients(alpha=np.asarray(payload["alpha"], dtype=float))
    worst = float(np.abs(_matching_residual(coeffs.alpha)).max())
    if worst > 1e-12:
        raise RuntimeError(f"telescope fixture fails re-validation: {worst:.3e}")
    return coeffs


def _random_field(grid, rng, smooth=False):
    f = VectorField(grid)
    f.set_interior(rng.uniform(-1.0, 1.0, (3,) + grid.shape_int))
    fill_ghosts(f)
    if smooth:
        lap = ops.laplacian4(f)
        f.interior[...] += 0.2 * grid.h**2 * lap.interior
        fill_ghosts(f)
    return f


def _rel(lhs, rhs):
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300)


def check_telescope(coeffs, trials=100, dim=1, n=16, seed=2024):
    """Identity check on random vector-field sequences via the L2 pairing."""
    rng = np.random.default_rng(seed)
    grid = make_grid(dim, n)
    g1, g2, g3, g4 = coeffs.groups()
    worst = 0.0
    for _ in range(trials):
        seq = [_random_field(grid, rng) for _ in range(4)]  # e3, e2, e1, e0
        combo = VectorField(grid)
        combo.interior[...] = sum(
            w * f.interior for w, f in zip(BDF3_WEIGHTS, seq)
        )
        test = VectorField(grid)
        test.interior[...] = 2.0 * seq[0].interior - seq[1].interior
        lhs = ops.inner_l2(combo, test)

        def gnorm_sq(weights, fields):
            acc = VectorField(grid)
            acc.interior[...] = sum(w * f.interior for w, f in zip(weights, fields))
            return ops.inner_l2(acc, acc)

        rhs = (
            gnorm_sq(g1, seq[:1])
            - gnorm_sq(g1, seq[1:2])
            + gnorm_sq(g2, seq[:2])
            - gnorm_sq(g2, seq[1:3])
            + gnorm_sq(g3, seq[:3])
            - gnorm_sq(g3, seq[1:4])
            + gnorm_sq(g4, seq[:4])
        )
        worst = max(worst, _rel(lhs, rhs))
    return LemmaReport(
        lemma=f"telescope-identity-{dim}d",
        trials=trials,
        max_violation=worst,
        tol=TELESCOPE_TOL,
        passed=worst <= TELESCOPE_TOL,
    )


def _d4_axis(field, axis):
    """(D_a^2)^2 with the intermediate field re-mirrored."""
    mid = ops.d2_std(field, axis)
    fill_ghosts(mid)
    return ops.d2_std(mid, axis)


def check_operator_lemmas(trials=100, dim=1, n=16, seed=7):
    """Summation-by-parts identities, gradient-norm bounds, cross-product lemma."""
    rng = np.random.default_rng(seed)
    grid = make_grid(dim, n)
    eq = {"sum1": 0.0, "sum2": 0.0, "sum3": 0.0, "cross-adjoint": 0.0}
    ineq = {"gradient-sandwich": 0.0, "tilde-bound": 0.0, "cross-4over3": 0.0}
    for t in range(trials):
        smooth = t % 4 == 3
        f = _random_field(grid, rng, smooth=smooth)
        g = _random_field(grid, rng, smooth=smooth)

        lhs = -ops.inner_l2(ops.laplacian_h(f), g)
        rhs = ops.grad_h(f).inner(ops.grad_h(g))
        eq["sum1"] = max(eq["sum1"], _rel(lhs, rhs))

        for axis in range(dim):
            lhs = ops.inner_l2(_d4_axis(f, axis), g)
            rhs = ops.inner_l2(ops.d2_std(f, axis), ops.d2_std(g, axis))
            eq["sum2"] = max(eq["sum2"], _rel(lhs, rhs))

        lhs = -ops.inner_l2(ops.laplacian4(f), g)
        rhs = ops.inner_nabla4(f, g)
        eq["sum3"] = max(eq["sum3"], _rel(lhs, rhs))

        gh = np.sqrt(ops.grad_h(f).norm_sq())
        g4 = np.sqrt(max(ops.inner_nabla4(f, f), 0.0))
        gt_sq = grid.h**grid.dim * float(ops.grad_sq_tilde4(f).interior.sum())
        gt = np.sqrt(max(gt_sq, 0.0))
        ineq["gradient-sandwich"] = max(
            ineq["gradient-sandwich"], gh - g4, g4 - 2.0 / np.sqrt(3.0) * gh
        )
        ineq["tilde-bound"] = max(ineq["tilde-bound"], gt - 5.0 / 3.0 * gh)

        w = VectorField(grid)
        # cross product of mirror-consistent fields keeps a mirror halo
        for c in range(3):
            i, j = (c + 1) % 3, (c + 2) % 3
            w.data[c] = f.data[i] * g.data[j] - f.data[j] * g.data[i]
        w.ghosts_filled = True
        wn4 = ops.inner_nabla4(w, w)
        wgh = ops.grad_h(w).norm_sq()
        ineq["cross-4over3"] = max(ineq["cross-4over3"], wn4 - 4.0 / 3.0 * wgh)

        ghat = _random_field(grid, rng)
        lapg = ops.laplacian4(g)
        c1 = VectorField(grid)
        c1.interior[...] = np.cross(f.interior, lapg.interior, axis=0)
        c2 = VectorField(grid)
        c2.interior[...] = np.cross(ghat.interior, f.interior, axis=0)
        lhs = ops.inner_l2(c1, ghat)
        rhs = ops.inner_l2(c2, lapg)
        eq["cross-adjoint"] = max(eq["cross-adjoint"], _rel(lhs, rhs))

    reports = [
        LemmaReport(
            lemma=f"{name}-{dim}d",
            trials=trials,
            max_violation=val,
            tol=EQUALITY_TOL,
            passed=val <= EQUALITY_TOL,
        )
        for name, val in eq.items()
    ]
    reports += [
        LemmaReport(
            lemma=f"{name}-{dim}d",
            trials=trials,
            max_violation=max(val, 0.0),
            tol=0.0,
            passed=val <= 0.0,
        )
        for name, val in ineq.items()
    ]
    return reports


def check_projection_stability(trials=1000, dim=1, n=16, seed=11):
    """|m/|m| - u|_2 <= 2 |m - u|_2 for unit u and |m| >= 1/2 pointwise."""
    rng = np.random.default_rng(seed)
    grid = make_grid(dim, n)
    worst = 0.0
    for _ in range(trials):
        u = rng.standard_normal((3,) + grid.shape_int)
        u /= np.sqrt((u**2).sum(axis=0))
        while True:
            mt = u + rng.uniform(-0.5, 0.5, u.shape)
            if np.sqrt((mt**2).sum(axis=0)).min() >= 0.5:
                break
        m = mt / np.sqrt((mt**2).sum(axis=0))
        w = grid.h**dim
        lhs = np.sqrt(w * ((m - u) ** 2).sum())
        rhs = 2.0 * np.sqrt(w * ((mt - u) ** 2).sum())
        worst = max(worst, lhs - rhs)
    return LemmaReport(
        lemma=f"projection-stability-{dim}d",
        trials=trials,
        max_violation=max(worst, 0.0),
        tol=0.0,
        passed=worst <= 0.0,
    )


def _probe_a(z):
    # f' = f''' = 0 but f^(5) != 0 at z = 0 and z = 1
    return np.cos(np.pi * z) + np.sin(np.pi * z) ** 5


def _probe_b(z):
    # f' = 0 but f''' != 0 at z = 0 and z = 1
    return np.cos(np.pi * z) + np.sin(np.pi * z) ** 3


def mirror_extrapolation_error(func, n):
    """Max over both walls of |f(ghost center) - f(mirror interior center)|."""
    h = 1.0 / n
    pairs = [(-0.5 * h, 0.5 * h), (1.0 + 0.5 * h, 1.0 - 0.5 * h)]
    return max(abs(func(zg) - func(zi)) for zg, zi in pairs)


def check_boundary_extrapolation(meshes=(16, 32, 64, 128, 256)):
    """Observed order of the mirror-ghost consistency error.

    Probe (a) has vanishing first and third wall derivatives, so the h^3
    term of the one-sided Taylor expansion drops and the error decays at
    fifth order; probe (b) keeps a nonzero third derivative and decays at
    third order.
    """
    reports = []
    for name, func, target, tol in (
        ("boundary-extrapolation-a", _probe_a, 5.0, 0.3),
        ("boundary-extrapolation-b", _probe_b, 3.0, 0.3),
    ):
        pairs = [(1.0 / n, mirror_extrapolation_error(func, n)) for n in meshes]
        slope, _ = order_fit(pairs)
        reports.append(
            LemmaReport(
                lemma=name,
                trials=len(meshes),
                max_violation=abs(slope - target),
                tol=tol,
                passed=abs(slope - target) <= tol,
                detail=f"observed order {slope:.3f}, target {target}",
            )
        )
    return reports


def run_all(trials_eq=100, trials_proj=1000, seed=7):
    """Full lemma suite in 1D (N=16) and 3D (N=8); returns all reports."""
    coeffs = load_telescope_coeffs()
    reports = []
    for dim, n in ((1, 16), (3, 8)):
        reports.append(
            check_telescope(coeffs, trials=trials_eq, dim=dim, n=n, seed=seed)
        )
        reports.extend(
            check_operator_lemmas(trials=trials_eq, dim=dim, n=n, seed=seed + dim)
        )
        reports.append(
            check_projection_stability(trials=trials_proj, dim=dim, n=n, seed=seed + 5)
        )
    reports.extend(check_boundary_extrapolation())
    return reports
