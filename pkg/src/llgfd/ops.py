"""Spatial difference operators, discrete inner products and norms.

The long-stencil operators are fourth-order accurate five-point formulas; the
standard 3-point second difference and the face-based gradient are kept
alongside because the summation-by-parts identities pair them:

    <-lap_h f, g>     = <grad_h f, grad_h g>
    <-lap4_h f, g>    = <grad_h f, grad_h g> + h^2/12 sum_a <D_a^2 f, D_a^2 g>

with mirror halos on both fields.  All operators require an explicit prior
ghost fill (tracked by the field's flag) and return fields with an unfilled
halo.
"""

from dataclasses import dataclass

import numpy as np

from llgfd import backend
from llgfd.grid import (
    GHOST,
    Field,
    GhostsNotFilledError,
    GridMismatchError,
    ScalarField,
    VectorField,
)


def _require_filled(field):
    if not field.ghosts_filled:
        raise GhostsNotFilledError(
            "operator needs ghost values; call fill_ghosts() first"
        )


def _out_like(field):
    return type(field)(field.grid) if field.ncomp in (1, 3) else Field(
        field.grid, field.ncomp
    )


def _check_axis(field, axis):
    if not 0 <= axis < field.grid.dim:
        raise ValueError(f"axis {axis} out of range for dim {field.grid.dim}")


def d1_long(field, axis):
    """Fourth-order first derivative along `axis` (0=x, 1=y, 2=z)."""
    _require_filled(field)
    _check_axis(field, axis)
    out = _out_like(field)
    backend.impl.d1_long(field.data, field.grid.dim, axis, field.grid.h, out.interior)
    return out


def d2_long(field, axis):
    """Fourth-order second derivative along `axis`."""
    _require_filled(field)
    _check_axis(field, axis)
    out = _out_like(field)
    backend.impl.d2_long(field.data, field.grid.dim, axis, field.grid.h, out.interior)
    return out


def laplacian4(field):
    """Fourth-order Laplacian: sum of d2_long over all axes."""
    _require_filled(field)
    out = _out_like(field)
    backend.impl.laplacian4(field.data, field.grid.dim, field.grid.h, out.interior)
    return out


def grad_sq_tilde4(field):
    """Pointwise |grad|^2 proxy from long first derivatives.

    Sums (D1_a f_l)^2 over components l and axes a; returns a ScalarField.
    """
    _require_filled(field)
    out = ScalarField(field.grid)
    backend.impl.grad_sq4(
        field.data, field.grid.dim, field.grid.h, out.interior[0]
    )
    return out


def _int_slices(dim, np_ax=None, repl=None):
    sl = [slice(GHOST, -GHOST)] * dim
    if np_ax is not None:
        sl[np_ax] = repl
    return tuple(sl)


def d2_std(field, axis):
    """Standard 3-point second difference along `axis`."""
    _require_filled(field)
    _check_axis(field, axis)
    a = field.data
    h = field.grid.h
    dim = field.grid.dim
    np_ax = dim - 1 - axis  # position among the spatial axes
    out = _out_like(field)
    lo = (slice(None),) + _int_slices(dim, np_ax, slice(GHOST - 1, -GHOST - 1))
    hi = (slice(None),) + _int_slices(dim, np_ax, slice(GHOST + 1, a.shape[1 + np_ax] - GHOST + 1))
    mid = (slice(None),) + _int_slices(dim)
    out.interior[...] = (a[lo] - 2.0 * a[mid] + a[hi]) / (h * h)
    return out


def laplacian_h(field):
    """Standard 3-point-per-axis Laplacian."""
    out = d2_std(field, 0)
    for axis in range(1, field.grid.dim):
        out.interior[...] += d2_std(field, axis).interior
    return out


@dataclass
class FaceGradient:
    """Per-axis face differences (f_{i+1} - f_i)/h on N+1 faces per axis line.

    Boundary faces are exactly zero once the halo is mirror-filled.
    """

    grid: object
    axes: tuple  # one array per axis, shape (ncomp, ..., N+1 along that axis)

    def norm_sq(self):
        w = self.grid.h**self.grid.dim
        return w * sum(float(np.sum(a * a)) for a in self.axes)

    def inner(self, other):
        if other.grid != self.grid:
            raise GridMismatchError("face gradients on different grids")
        w = self.grid.h**self.grid.dim
        return w * sum(
            float(np.sum(a * b)) for a, b in zip(self.axes, other.axes)
        )


def grad_h(field):
    """Face-based forward-difference gradient (the SBP partner of lap_h)."""
    _require_filled(field)
    a = field.data
    h = field.grid.h
    dim = field.grid.dim
    arrays = []
    for axis in range(dim):
        np_ax = dim - 1 - axis
        lo = (slice(None),) + _int_slices(dim, np_ax, slice(GHOST - 1, -GHOST))
        hi = (slice(None),) + _int_slices(dim, np_ax, slice(GHOST, -GHOST + 1))
        arrays.append((a[hi] - a[lo]) / h)
    return FaceGradient(grid=field.grid, axes=tuple(arrays))


def inner_l2(f, g):
    """Discrete L2 inner product h^d sum_cells f . g over interior cells."""
    if f.grid != g.grid:
        raise GridMismatchError("fields on different grids")
    if f.ncomp != g.ncomp:
        raise GridMismatchError("fields with different component counts")
    return f.grid.h**f.grid.dim * float(np.sum(f.interior * g.interior))


def norm_l2(f):
    return np.sqrt(max(inner_l2(f, f), 0.0))


def norm_linf(f):
    return float(np.abs(f.interior).max())


@dataclass
class FieldNorms:
    l2: float
    linf: float
    h1: float

    def as_dict(self):
        return {"l2": self.l2, "linf": self.linf, "h1": self.h1}


def norms(f):
    """l2, componentwise max, and H1 = sqrt(l2^2 + |grad_h f|_2^2)."""
    _require_filled(f)
    l2sq = inner_l2(f, f)
    gsq = grad_h(f).norm_sq()
    return FieldNorms(
        l2=np.sqrt(max(l2sq, 0.0)),
        linf=norm_linf(f),
        h1=np.sqrt(max(l2sq + gsq, 0.0)),
    )


def inner_nabla4(f, g):
    """<grad_h f, grad_h g> + h^2/12 sum_axes <D_a^2 f, D_a^2 g>.

    Equals <-lap4_h f, g> exactly for mirror-filled fields (summation by
    parts); the second-difference factors use the standard 3-point stencil.
    """
    _require_filled(f)
    _require_filled(g)
    if f.grid != g.grid:
        raise GridMismatchError("fields on different grids")
    total = grad_h(f).inner(grad_h(g))
    h = f.grid.h
    for axis in range(f.grid.dim):
        total += h * h / 12.0 * inner_l2(d2_std(f, axis), d2_std(g, axis))
    return total
