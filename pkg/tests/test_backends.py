"""The compiled kernel lane must match the numpy reference lane to roundoff."""

import numpy as np
import pytest

from llgfd import backend
from llgfd import _kernels_np as knp

kcy = pytest.importorskip("llgfd._kernels")


@pytest.fixture(params=[1, 2, 3])
def dim(request):
    return request.param


def _ext_shape(dim, n):
    return (3,) + (n + 4,) * dim


def test_fill_ghosts_parity(dim):
    rng = np.random.default_rng(dim)
    a = rng.standard_normal(_ext_shape(dim, 7))
    b = a.copy()
    knp.fill_ghosts(a, dim)
    kcy.fill_ghosts(b, dim)
    assert np.array_equal(a, b)


def test_stencil_parity(dim):
    rng = np.random.default_rng(10 + dim)
    n = 8
    a = rng.standard_normal(_ext_shape(dim, n))
    knp.fill_ghosts(a, dim)
    h = 1.0 / n
    intr = (3,) + (n,) * dim
    for axis in range(dim):
        o1, o2 = np.empty(intr), np.empty(intr)
        knp.d1_long(a, dim, axis, h, o1)
        kcy.d1_long(a, dim, axis, h, o2)
        assert np.allclose(o1, o2, rtol=0, atol=1e-12 * np.abs(o1).max())
        knp.d2_long(a, dim, axis, h, o1)
        kcy.d2_long(a, dim, axis, h, o2)
        assert np.allclose(o1, o2, rtol=0, atol=1e-12 * np.abs(o1).max())
    o1, o2 = np.empty(intr), np.empty(intr)
    knp.laplacian4(a, dim, h, o1)
    kcy.laplacian4(a, dim, h, o2)
    assert np.allclose(o1, o2, rtol=0, atol=1e-12 * np.abs(o1).max())
    g1, g2 = np.empty((n,) * dim), np.empty((n,) * dim)
    knp.grad_sq4(a, dim, h, g1)
    kcy.grad_sq4(a, dim, h, g2)
    assert np.allclose(g1, g2, rtol=0, atol=1e-12 * np.abs(g1).max())


def test_pointwise_parity_on_strided_views(dim):
    """Interior views are strided; kernel writes must land in the parent array."""
    rng = np.random.default_rng(20 + dim)
    n = 6
    intr = (3,) + (n,) * dim
    src = rng.standard_normal(intr) + 3.0
    other = rng.standard_normal(intr)
    gs = rng.standard_normal((n,) * dim)
    tt = rng.standard_normal(intr)

    pa = np.zeros(_ext_shape(dim, n))
    pb = np.zeros(_ext_shape(dim, n))
    sl = (slice(None),) + (slice(2, -2),) * dim
    r1 = knp.project(src, pa[sl], 0.25)
    r2 = kcy.project(src, pb[sl], 0.25)
    assert np.array_equal(pa, pb)
    assert pa[sl].any(), "write through strided view must reach the parent"
    assert abs(r1[0] - r2[0]) < 1e-15 and abs(r1[1] - r2[1]) < 1e-15

    o1, o2 = np.empty(intr), np.empty(intr)
    knp.cross(src, other, o1)
    kcy.cross(src, other, o2)
    assert np.array_equal(o1, o2)

    knp.assemble_rhs(tt, src, other, gs, 10.0, o1)
    kcy.assemble_rhs(tt, src, other, gs, 10.0, o2)
    assert np.allclose(o1, o2, rtol=1e-15, atol=1e-14)

    e1, e2 = np.empty(intr), np.empty(intr)
    knp.lincomb2(2.0, src, -1.0, other, e1)
    kcy.lincomb2(2.0, src, -1.0, other, e2)
    assert np.allclose(e1, e2, rtol=1e-15, atol=1e-15)
    knp.lincomb3(3.0, src, -3.0, other, 1.0, tt, e1)
    kcy.lincomb3(3.0, src, -3.0, other, 1.0, tt, e2)
    assert np.allclose(e1, e2, rtol=1e-15, atol=1e-15)


def test_project_floor_parity():
    src = np.full((3, 8), 0.05)
    out1 = np.zeros((3, 8))
    out2 = np.zeros((3, 8))
    r1 = knp.project(src, out1, 0.25)
    r2 = kcy.project(src, out2, 0.25)
    assert r1[1] == -1.0 and r2[1] == -1.0
    assert abs(r1[0] - r2[0]) < 1e-15


def test_backend_switch_and_integration_parity():
    from llgfd import make_grid, mms, stepper

    results = {}
    for name in ("numpy", "cython"):
        backend.use(name)
        assert backend.name() == name
        g = make_grid(1, 16)
        p = stepper.SchemeParams(
            alpha=10.0, k=1e-3, t_final=0.05,
            forcing=mms.GriddedForcing(mms.SOLUTION_1D, g, 10.0),
        )
        r = stepper.run(g, p, mms.SOLUTION_1D.value)
        results[name] = r.m.interior.copy()
    backend.use("cython")
    diff = np.abs(results["numpy"] - results["cython"]).max()
    assert diff < 1e-12


def test_backend_use_rejects_unknown():
    with pytest.raises(ValueError):
        backend.use("fortran")
    backend.use("cython")
