import numpy as np
import pytest

from llgfd import ops
from llgfd.grid import (
    GHOST,
    GhostsNotFilledError,
    GridMismatchError,
    ScalarField,
    VectorField,
    fill_ghosts,
    make_grid,
    sample,
)


def _random_filled(grid, seed):
    rng = np.random.default_rng(seed)
    f = VectorField(grid)
    f.set_interior(rng.standard_normal((3,) + grid.shape_int))
    return fill_ghosts(f)


def _poly_field_1d(grid, coeffs):
    """Polynomial samples with exact (manually set) ghost values."""
    f = VectorField(grid)
    xg = (np.arange(-GHOST, grid.n + GHOST) + 0.5) * grid.h
    vals = np.polynomial.polynomial.polyval(xg, coeffs)
    f.data[0] = vals
    f.data[1] = 0.0
    f.data[2] = 0.0
    f.ghosts_filled = True
    return f


def test_requires_ghost_fill():
    g = make_grid(1, 8)
    f = VectorField(g)
    with pytest.raises(GhostsNotFilledError):
        ops.d1_long(f, 0)


def test_d1_constant_zero():
    g = make_grid(1, 8)
    f = _poly_field_1d(g, [4.2])
    # exact cancellation up to the evaluation order of the active kernel lane
    assert np.abs(ops.d1_long(f, 0).interior[0]).max() < 1e-13


def test_d1_exact_linear():
    g = make_grid(1, 8)
    f = _poly_field_1d(g, [0.0, 1.0])
    assert np.abs(ops.d1_long(f, 0).interior[0] - 1.0).max() < 1e-14


def test_d1_exact_degree4():
    g = make_grid(1, 16)
    coeffs = [0.3, -1.0, 2.0, 0.5, -0.25]
    f = _poly_field_1d(g, coeffs)
    x = g.cell_centers()
    want = np.polynomial.polynomial.polyval(
        x, np.polynomial.polynomial.polyder(coeffs)
    )
    got = ops.d1_long(f, 0).interior[0]
    assert np.abs(got - want).max() < 1e-11


def test_d2_exact_quadratic():
    g = make_grid(1, 8)
    f = _poly_field_1d(g, [0.0, 0.0, 1.0])
    assert np.abs(ops.d2_long(f, 0).interior[0] - 2.0).max() < 1e-11


def test_d2_exact_degree5():
    g = make_grid(1, 16)
    coeffs = [0.1, -0.4, 0.9, -1.3, 0.8, 0.37]
    f = _poly_field_1d(g, coeffs)
    x = g.cell_centers()
    d2 = np.polynomial.polynomial.polyder(coeffs, 2)
    want = np.polynomial.polynomial.polyval(x, d2)
    got = ops.d2_long(f, 0).interior[0]
    assert np.abs(got - want).max() < 1e-9


def _cos_field(grid):
    def func(*coords_t):
        *coords, t = coords_t
        v = np.ones_like(sum(coords))
        for c in coords:
            v = v * np.cos(np.pi * c)
        return (v, 0 * v, 0 * v)

    return fill_ghosts(sample(grid, func, 0.0))


def _order(err_coarse, err_fine):
    return np.log2(err_coarse / err_fine)


def test_d1_fourth_order_on_cosine():
    errs = []
    for n in (32, 64):
        g = make_grid(1, n)
        f = _cos_field(g)
        x = g.cell_centers()
        errs.append(
            np.abs(ops.d1_long(f, 0).interior[0] + np.pi * np.sin(np.pi * x)).max()
        )
    assert abs(_order(*errs) - 4.0) < 0.1


def test_d2_fourth_order_on_cosine():
    errs = []
    for n in (32, 64):
        g = make_grid(1, n)
        f = _cos_field(g)
        x = g.cell_centers()
        errs.append(
            np.abs(
                ops.d2_long(f, 0).interior[0] + np.pi**2 * np.cos(np.pi * x)
            ).max()
        )
    assert abs(_order(*errs) - 4.0) < 0.1


def test_laplacian4_equals_d2_in_1d():
    g = make_grid(1, 16)
    f = _random_filled(g, 0)
    assert np.array_equal(
        ops.laplacian4(f).interior, ops.d2_long(f, 0).interior
    )


def test_laplacian4_3d_cosine_order4():
    errs = []
    for n in (8, 16):
        g = make_grid(3, n)
        f = _cos_field(g)
        want = -3 * np.pi**2 * f.interior[0]
        errs.append(np.abs(ops.laplacian4(f).interior[0] - want).max())
    assert abs(_order(*errs) - 4.0) < 0.15


def test_grad_sq_constant_zero():
    g = make_grid(3, 5)
    f = VectorField(g)
    f.set_interior(np.ones((3,) + g.shape_int))
    fill_ghosts(f)
    assert np.abs(ops.grad_sq_tilde4(f).values).max() == 0.0


def test_grad_sq_linear_component():
    g = make_grid(1, 8)
    f = _poly_field_1d(g, [0.0, 1.0])
    assert np.abs(ops.grad_sq_tilde4(f).values - 1.0).max() < 1e-13


def test_grad_sq_chain_rule_order4():
    def func(x, t):
        gg = np.cos(np.pi * x)
        return (np.sin(gg), np.cos(gg), 0 * x)

    errs = []
    for n in (32, 64):
        g = make_grid(1, n)
        f = fill_ghosts(sample(g, func, 0.0))
        x = g.cell_centers()
        want = np.pi**2 * np.sin(np.pi * x) ** 2  # |g'|^2
        errs.append(np.abs(ops.grad_sq_tilde4(f).values - want).max())
    assert abs(_order(*errs) - 4.0) < 0.1


def test_grad_h_constant():
    g = make_grid(2, 6)
    f = VectorField(g)
    f.set_interior(np.full((3,) + g.shape_int, 2.5))
    fill_ghosts(f)
    fg = ops.grad_h(f)
    for arr in fg.axes:
        assert np.abs(arr).max() == 0.0


def test_grad_h_1d_values():
    g = make_grid(1, 5)
    f = VectorField(g)
    f.interior[0] = [0.0, 1.0, 2.0, 3.0, 4.0]
    fill_ghosts(f)
    fg = ops.grad_h(f)
    vals = fg.axes[0][0]
    assert vals.shape == (g.n + 1,)
    assert vals[0] == 0.0 and vals[-1] == 0.0
    assert np.allclose(vals[1:-1], 1.0 / g.h)


def test_inner_l2_unit_constant():
    g = make_grid(1, 16)
    f = VectorField(g)
    f.set_interior(np.full((3,) + g.shape_int, 1.0 / np.sqrt(3)))
    assert abs(ops.inner_l2(f, f) - 1.0) < 1e-14


def test_inner_l2_orthogonal():
    g = make_grid(1, 16)
    f = VectorField(g)
    f.interior[0] = 1.0
    h = VectorField(g)
    h.interior[1] = 1.0
    assert ops.inner_l2(f, h) == 0.0


def test_inner_l2_grid_mismatch():
    f = VectorField(make_grid(1, 16))
    h = VectorField(make_grid(1, 32))
    with pytest.raises(GridMismatchError):
        ops.inner_l2(f, h)


def test_inner_l2_converges_to_integral():
    # int_0^1 e^{2x} dx = (e^2 - 1)/2; midpoint rule converges at O(h^2)
    want = (np.e**2 - 1) / 2
    errs = []
    for n in (16, 32):
        g = make_grid(1, n)
        f = sample(g, lambda x, t: (np.exp(x), 0 * x, 0 * x), 0.0)
        errs.append(abs(ops.inner_l2(f, f) - want))
    assert errs[1] < errs[0] / 3.0


def test_norms_constant_unit_z():
    g = make_grid(3, 6)
    f = VectorField(g)
    f.interior[2] = 1.0
    fill_ghosts(f)
    n = ops.norms(f)
    assert abs(n.l2 - 1.0) < 1e-14
    assert n.linf == 1.0
    assert abs(n.h1 - 1.0) < 1e-14


def test_norms_zero():
    g = make_grid(1, 8)
    f = fill_ghosts(VectorField(g))
    n = ops.norms(f)
    assert n.l2 == 0.0 and n.linf == 0.0 and n.h1 == 0.0


@pytest.mark.parametrize("dim,n", [(1, 16), (3, 8)])
def test_sbp_identity_sum1(dim, n):
    g = make_grid(dim, n)
    f = _random_filled(g, 3)
    h = _random_filled(g, 4)
    lhs = -ops.inner_l2(ops.laplacian_h(f), h)
    rhs = ops.grad_h(f).inner(ops.grad_h(h))
    assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs))


@pytest.mark.parametrize("dim,n", [(1, 16), (3, 8)])
def test_inner_nabla4_matches_weak_form(dim, n):
    g = make_grid(dim, n)
    f = _random_filled(g, 5)
    h = _random_filled(g, 6)
    lhs = -ops.inner_l2(ops.laplacian4(f), h)
    rhs = ops.inner_nabla4(f, h)
    assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs))


def test_inner_nabla4_constant_zero():
    g = make_grid(1, 16)
    f = VectorField(g)
    f.set_interior(np.ones((3,) + g.shape_int))
    fill_ghosts(f)
    assert abs(ops.inner_nabla4(f, f)) < 1e-14


@pytest.mark.parametrize("dim,n", [(1, 16), (3, 8)])
def test_gradient_norm_sandwich(dim, n):
    for seed in range(20):
        g = make_grid(dim, n)
        f = _random_filled(g, seed)
        gh = np.sqrt(ops.grad_h(f).norm_sq())
        g4 = np.sqrt(ops.inner_nabla4(f, f))
        gt = np.sqrt(
            g.h**dim * float(ops.grad_sq_tilde4(f).interior.sum())
        )
        assert gh <= g4 <= 2.0 / np.sqrt(3.0) * gh
        assert gt <= 5.0 / 3.0 * gh


@pytest.mark.parametrize("dim,n", [(1, 16), (3, 8)])
def test_laplacian4_self_adjoint(dim, n):
    g = make_grid(dim, n)
    f = _random_filled(g, 8)
    h = _random_filled(g, 9)
    lhs = ops.inner_l2(ops.laplacian4(f), h)
    rhs = ops.inner_l2(f, ops.laplacian4(h))
    assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs))


def test_cross_adjoint_identity():
    g = make_grid(3, 8)
    f = _random_filled(g, 10)
    h = _random_filled(g, 11)
    ghat = _random_filled(g, 12)
    lap = ops.laplacian4(h)
    c1 = VectorField(g)
    c1.interior[...] = np.cross(f.interior, lap.interior, axis=0)
    c2 = VectorField(g)
    c2.interior[...] = np.cross(ghat.interior, f.interior, axis=0)
    lhs = ops.inner_l2(c1, ghat)
    rhs = ops.inner_l2(c2, lap)
    assert abs(lhs - rhs) <= 1e-12 * max(abs(lhs), abs(rhs))
