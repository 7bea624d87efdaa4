import numpy as np
import pytest

from llgfd import backend
from llgfd.grid import (
    GHOST,
    VectorField,
    constant_field,
    fill_ghosts,
    make_grid,
    sample,
)


def test_make_grid_spacing():
    g = make_grid(1, 16)
    assert g.h == 1.0 / 16
    assert g.h * g.n == 1.0


def test_make_grid_3d_cells():
    g = make_grid(3, 12)
    assert g.shape_int == (12, 12, 12)
    assert g.ncells == 12**3


@pytest.mark.parametrize("dim,n", [(0, 16), (4, 16), (1, 4), (2, 3)])
def test_make_grid_rejects(dim, n):
    with pytest.raises(ValueError):
        make_grid(dim, n)


def test_cell_centers():
    g = make_grid(1, 8)
    assert np.allclose(g.cell_centers(), (np.arange(1, 9) - 0.5) / 8)


def test_fill_ghosts_1d_pattern():
    g = make_grid(1, 5)
    f = VectorField(g)
    f.interior[0] = [1.0, 2.0, 3.0, 4.0, 5.0]
    fill_ghosts(f)
    assert np.array_equal(f.data[0], [2, 1, 1, 2, 3, 4, 5, 5, 4])


def test_fill_ghosts_constant():
    g = make_grid(3, 5)
    f = constant_field(g, (0.3, -1.2, 2.0))
    fill_ghosts(f)
    for c, v in enumerate((0.3, -1.2, 2.0)):
        assert np.all(f.data[c] == v)


def test_fill_ghosts_cosine_even_extension():
    g = make_grid(1, 16)
    f = sample(g, lambda x, t: (np.cos(np.pi * x), 0 * x, 0 * x), 0.0)
    fill_ghosts(f)
    xg = (np.arange(-GHOST, g.n + GHOST) + 0.5) * g.h
    assert np.abs(f.data[0] - np.cos(np.pi * xg)).max() < 1e-15


def test_fill_ghosts_idempotent_bit_exact():
    g = make_grid(3, 6)
    rng = np.random.default_rng(0)
    f = VectorField(g)
    f.set_interior(rng.standard_normal((3,) + g.shape_int))
    fill_ghosts(f)
    snap = f.data.copy()
    fill_ghosts(f)
    assert np.array_equal(f.data, snap)


def test_fill_ghosts_axis_order_independent():
    g = make_grid(3, 6)
    rng = np.random.default_rng(1)
    interior = rng.standard_normal((3,) + g.shape_int)
    a = VectorField(g)
    a.set_interior(interior)
    backend.impl.fill_ghosts(a.data, 3)  # x, then y, then z

    b = VectorField(g)
    b.set_interior(interior)
    # apply single-axis reflections in reversed order by slicing manually
    for np_ax in (1, 2, 3):  # z, y, x among (comp, z, y, x)
        sl = lambda i: tuple(
            i if j == np_ax else slice(None) for j in range(4)
        )
        b.data[sl(1)] = b.data[sl(2)]
        b.data[sl(0)] = b.data[sl(3)]
        b.data[sl(-2)] = b.data[sl(-3)]
        b.data[sl(-1)] = b.data[sl(-4)]
    assert np.array_equal(a.data, b.data)


def test_ghosts_are_value_copies():
    g = make_grid(2, 7)
    rng = np.random.default_rng(2)
    f = VectorField(g)
    f.set_interior(rng.standard_normal((3,) + g.shape_int))
    fill_ghosts(f)
    assert np.abs(f.data).max() == np.abs(f.interior).max()


def test_sample_constant():
    g = make_grid(3, 5)
    f = sample(g, lambda x, y, z, t: (0 * x, 0 * x, 1.0 + 0 * x), 1.7)
    assert np.all(f.interior[2] == 1.0)
    assert np.all(f.interior[:2] == 0.0)
    assert not f.ghosts_filled


def test_sample_coordinates_match_layout():
    # a function of x alone must vary along the last array axis
    g = make_grid(3, 6)
    f = sample(g, lambda x, y, z, t: (x + 0 * y + 0 * z, 0 * x, 0 * x), 0.0)
    col = f.interior[0][0, 0, :]
    assert np.allclose(col, g.cell_centers())
    assert np.all(f.interior[0] == f.interior[0][0, 0][None, None, :])


def test_sample_exact_solution_at_zero_time():
    from llgfd import mms

    g = make_grid(1, 16)
    f = sample(g, mms.SOLUTION_1D.value, 0.0)
    assert np.abs(f.interior[0]).max() == 0.0
    assert np.abs(f.interior[1]).max() == 0.0
    assert np.all(f.interior[2] == 1.0)


def test_sample_exact_solution_first_cell():
    from llgfd import mms

    g = make_grid(1, 16)
    t = np.pi / 2
    f = sample(g, mms.SOLUTION_1D.value, t)
    gval = np.cos(np.pi * g.h / 2)
    assert abs(f.interior[0][0] - np.cos(gval)) < 1e-15
    assert abs(f.interior[1][0] - np.sin(gval)) < 1e-15
    assert abs(f.interior[2][0] - np.cos(t)) < 1e-15
