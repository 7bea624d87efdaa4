"""Cell-centered grid on [0,1]^d and field storage with a 2-cell mirror halo.

Cell centers sit at (i - 1/2) h, i = 1..N, per axis.  Field arrays are
float64, C-contiguous, shaped (ncomp, *spatial_ext) with the spatial axes
ordered so x varies fastest (last axis); y and z, when present, precede it.
The halo is filled by symmetric extrapolation: f_0 = f_1, f_-1 = f_2 and the
mirrored pair at the far face, applied independently per axis.
"""

from dataclasses import dataclass

import numpy as np

from llgfd import backend

GHOST = 2


class GridMismatchError(ValueError):
    pass


class GhostsNotFilledError(RuntimeError):
    pass


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centered mesh descriptor for [0,1]^dim with N cells/axis."""

    dim: int
    n: int

    @property
    def h(self):
        return 1.0 / self.n

    @property
    def shape_int(self):
        return (self.n,) * self.dim

    @property
    def shape_ext(self):
        return (self.n + 2 * GHOST,) * self.dim

    @property
    def ncells(self):
        return self.n**self.dim

    def cell_centers(self):
        """1D array of per-axis cell-center coordinates (i - 1/2) h."""
        return (np.arange(1, self.n + 1) - 0.5) * self.h

    def meshes(self):
        """Coordinate arrays (X[, Y[, Z]]) broadcastable to shape_int.

        X varies along the last array axis, matching the storage layout.
        """
        c = self.cell_centers()
        out = []
        for axis in range(self.dim):
            shape = [1] * self.dim
            shape[self.dim - 1 - axis] = self.n
            out.append(c.reshape(shape))
        return tuple(out)


def make_grid(dim, n):
    if dim not in (1, 2, 3):
        raise ValueError(f"dim must be 1, 2 or 3, got {dim}")
    n = int(n)
    if n < 5:
        raise ValueError(f"need at least 5 cells per axis for the long stencil, got {n}")
    return Grid(dim=dim, n=n)


class Field:
    """Grid function with `ncomp` components and the 2-cell halo.

    `ghosts_filled` tracks whether the halo is current; operators that need
    ghost values refuse to run on a stale halo rather than filling implicitly.
    """

    __slots__ = ("grid", "data", "ncomp", "ghosts_filled")

    def __init__(self, grid, ncomp, data=None):
        self.grid = grid
        self.ncomp = ncomp
        if data is None:
            data = np.zeros((ncomp,) + grid.shape_ext, dtype=np.float64)
        else:
            expect = (ncomp,) + grid.shape_ext
            if data.shape != expect:
                raise ValueError(f"expected data shape {expect}, got {data.shape}")
        self.data = data
        self.ghosts_filled = False

    @property
    def interior(self):
        sl = (slice(None),) + (slice(GHOST, -GHOST),) * self.grid.dim
        return self.data[sl]

    def set_interior(self, values):
        self.interior[...] = values
        self.ghosts_filled = False
        return self

    def copy(self):
        out = type(self)(self.grid)
        out.data[...] = self.data
        out.ghosts_filled = self.ghosts_filled
        return out


class VectorField(Field):
    def __init__(self, grid, data=None):
        super().__init__(grid, 3, data)


class ScalarField(Field):
    def __init__(self, grid, data=None):
        super().__init__(grid, 1, data)

    @property
    def values(self):
        """Interior values without the component axis."""
        return self.interior[0]


def fill_ghosts(field):
    """Fill the halo by per-axis mirror reflection (in place)."""
    backend.impl.fill_ghosts(field.data, field.grid.dim)
    field.ghosts_filled = True
    return field


def sample(grid, func, t):
    """Point-wise sample of a vector function at cell centers.

    `func(*coords, t)` receives the broadcastable coordinate arrays from
    `grid.meshes()` and must return three components; ghosts are left
    unfilled.
    """
    vals = func(*grid.meshes(), t)
    out = VectorField(grid)
    for c in range(3):
        out.interior[c] = vals[c]
    return out


def constant_field(grid, vec):
    out = VectorField(grid)
    for c in range(3):
        out.data[c] = vec[c]
    out.ghosts_filled = True
    return out
