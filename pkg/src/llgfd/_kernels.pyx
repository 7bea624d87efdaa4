# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled twin of the numpy kernel lane (see _kernels_np.py).

Arrays arrive shaped (ncomp, *spatial) with x the last axis; views are
normalized to 4D (comp, z, y, x) by inserting singleton axes (never a copy,
so writes through strided interior views propagate), then dispatched to
typed loops.  Results must match the numpy lane to roundoff.
"""

import numpy as np

cimport cython
from libc.math cimport sqrt, fabs

NAME = "cython"


def _halo4(a, int dim):
    """(lead..., *spatial_ext) -> (ncomp, z, y, x) view; fake axes size 1."""
    nd = a.ndim
    lead = a.shape[: nd - dim]
    ncomp = 1
    for s in lead:
        ncomp *= s
    return a.reshape((ncomp,) + (1,) * (3 - dim) + a.shape[nd - dim :])


def _cells4(a):
    """(comp, *cells) -> (comp, z, y, x) view via singleton insertion."""
    return a.reshape(a.shape[:1] + (1,) * (4 - a.ndim) + a.shape[1:])


def _flat4(a):
    """(*cells) -> (1, z, y, x) view via singleton insertion."""
    return a.reshape((1,) * (4 - a.ndim) + a.shape)


cdef void _fill_axis_x(double[:, :, :, :] a) noexcept nogil:
    cdef Py_ssize_t c, z, y, nx = a.shape[3]
    for c in range(a.shape[0]):
        for z in range(a.shape[1]):
            for y in range(a.shape[2]):
                a[c, z, y, 1] = a[c, z, y, 2]
                a[c, z, y, 0] = a[c, z, y, 3]
                a[c, z, y, nx - 2] = a[c, z, y, nx - 3]
                a[c, z, y, nx - 1] = a[c, z, y, nx - 4]


cdef void _fill_axis_y(double[:, :, :, :] a) noexcept nogil:
    cdef Py_ssize_t c, z, x, ny = a.shape[2]
    for c in range(a.shape[0]):
        for z in range(a.shape[1]):
            for x in range(a.shape[3]):
                a[c, z, 1, x] = a[c, z, 2, x]
                a[c, z, 0, x] = a[c, z, 3, x]
                a[c, z, ny - 2, x] = a[c, z, ny - 3, x]
                a[c, z, ny - 1, x] = a[c, z, ny - 4, x]


cdef void _fill_axis_z(double[:, :, :, :] a) noexcept nogil:
    cdef Py_ssize_t c, y, x, nz = a.shape[1]
    for c in range(a.shape[0]):
        for y in range(a.shape[2]):
            for x in range(a.shape[3]):
                a[c, 1, y, x] = a[c, 2, y, x]
                a[c, 0, y, x] = a[c, 3, y, x]
                a[c, nz - 2, y, x] = a[c, nz - 3, y, x]
                a[c, nz - 1, y, x] = a[c, nz - 4, y, x]


def fill_ghosts(a, int dim):
    cdef double[:, :, :, :] v = _halo4(a, dim)
    _fill_axis_x(v)
    if dim > 1:
        _fill_axis_y(v)
    if dim > 2:
        _fill_axis_z(v)
    return a


# Stencil loops index `out` over the interior extents; `a` carries the halo
# along real axes only, so the per-axis input offsets differ between the
# derivative direction (0..4 window) and the transverse real axes (+2).

cdef void _d1_x(double[:, :, :, :] a, double[:, :, :, :] out,
                Py_ssize_t gz, Py_ssize_t gy, double s, bint accum_sq) noexcept nogil:
    cdef Py_ssize_t c, z, y, x
    cdef double v
    for c in range(a.shape[0]):
        for z in range(out.shape[1]):
            for y in range(out.shape[2]):
                for x in range(out.shape[3]):
                    v = s * (
                        a[c, z + gz, y + gy, x]
                        - 8.0 * a[c, z + gz, y + gy, x + 1]
                        + 8.0 * a[c, z + gz, y + gy, x + 3]
                        - a[c, z + gz, y + gy, x + 4]
                    )
                    if accum_sq:
                        out[0, z, y, x] += v * v
                    else:
                        out[c, z, y, x] = v


cdef void _d1_y(double[:, :, :, :] a, double[:, :, :, :] out,
                Py_ssize_t gz, double s, bint accum_sq) noexcept nogil:
    cdef Py_ssize_t c, z, y, x
    cdef double v
    for c in range(a.shape[0]):
        for z in range(out.shape[1]):
            for y in range(out.shape[2]):
                for x in range(out.shape[3]):
                    v = s * (
                        a[c, z + gz, y, x + 2]
                        - 8.0 * a[c, z + gz, y + 1, x + 2]
                        + 8.0 * a[c, z + gz, y + 3, x + 2]
                        - a[c, z + gz, y + 4, x + 2]
                    )
                    if accum_sq:
                        out[0, z, y, x] += v * v
                    else:
                        out[c, z, y, x] = v


cdef void _d1_z(double[:, :, :, :] a, double[:, :, :, :] out,
                double s, bint accum_sq) noexcept nogil:
    cdef Py_ssize_t c, z, y, x
    cdef double v
    for c in range(a.shape[0]):
        for z in range(out.shape[1]):
            for y in range(out.shape[2]):
                for x in range(out.shape[3]):
                    v = s * (
                        a[c, z, y + 2, x + 2]
                        - 8.0 * a[c, z + 1, y + 2, x + 2]
                        + 8.0 * a[c, z + 3, y + 2, x + 2]
                        - a[c, z + 4, y + 2, x + 2]
                    )
                    if accum_sq:
                        out[0, z, y, x] += v * v
                    else:
                        out[c, z, y, x] = v


def d1_long(a, int dim, int axis, double h, out):
    cdef double[:, :, :, :] va = _halo4(a, dim)
    cdef double[:, :, :, :] vo = _cells4(out) if out.ndim > dim else _flat4(out)
    cdef double s = 1.0 / (12.0 * h)
    cdef Py_ssize_t gz = 2 if dim > 2 else 0
    cdef Py_ssize_t gy = 2 if dim > 1 else 0
    if axis == 0:
        _d1_x(va, vo, gz, gy, s, False)
    elif axis == 1:
        _d1_y(va, vo, gz, s, False)
    else:
        _d1_z(va, vo, s, False)
    return out


cdef void _d2_x(double[:, :, :, :] a, double[:, :, :, :] out,
                Py_ssize_t gz, Py_ssize_t gy, double s, bint accum) noexcept nogil:
    cdef Py_ssize_t c, z, y, x
    cdef double v
    for c in range(a.shape[0]):
        for z in range(out.shape[1]):
            for y in range(out.shape[2]):
                for x in range(out.shape[3]):
                    v = s * (
                        -a[c, z + gz, y + gy, x]
                        + 16.0 * a[c, z + gz, y + gy, x + 1]
                        - 30.0 * a[c, z + gz, y + gy, x + 2]
                        + 16.0 * a[c, z + gz, y + gy, x + 3]
                        - a[c, z + gz, y + gy, x + 4]
                    )
                    if accum:
                        out[c, z, y, x] += v
                    else:
                        out[c, z, y, x] = v


cdef void _d2_y(double[:, :, :, :] a, double[:, :, :, :] out,
                Py_ssize_t gz, double s, bint accum) noexcept nogil:
    cdef Py_ssize_t c, z, y, x
    cdef double v
    for c in range(a.shape[0]):
        for z in range(out.shape[1]):
            for y in range(out.shape[2]):
                for x in range(out.shape[3]):
                    v = s * (
                        -a[c, z + gz, y, x + 2]
                        + 16.0 * a[c, z + gz, y + 1, x + 2]
                        - 30.0 * a[c, z + gz, y + 2, x + 2]
                        + 16.0 * a[c, z + gz, y + 3, x + 2]
                        - a[c, z + gz, y + 4, x + 2]
                    )
                    if accum:
                        out[c, z, y, x] += v
                    else:
                        out[c, z, y, x] = v


cdef void _d2_z(double[:, :, :, :] a, double[:, :, :, :] out,
                double s, bint accum) noexcept nogil:
    cdef Py_ssize_t c, z, y, x
    cdef double v
    for c in range(a.shape[0]):
        for z in range(out.shape[1]):
            for y in range(out.shape[2]):
                for x in range(out.shape[3]):
                    v = s * (
                        -a[c, z, y + 2, x + 2]
                        + 16.0 * a[c, z + 1, y + 2, x + 2]
                        - 30.0 * a[c, z + 2, y + 2, x + 2]
                        + 16.0 * a[c, z + 3, y + 2, x + 2]
                        - a[c, z + 4, y + 2, x + 2]
                    )
                    if accum:
                        out[c, z, y, x] += v
                    else:
                        out[c, z, y, x] = v


def d2_long(a, int dim, int axis, double h, out):
    cdef double[:, :, :, :] va = _halo4(a, dim)
    cdef double[:, :, :, :] vo = _cells4(out) if out.ndim > dim else _flat4(out)
    cdef double s = 1.0 / (12.0 * h * h)
    cdef Py_ssize_t gz = 2 if dim > 2 else 0
    cdef Py_ssize_t gy = 2 if dim > 1 else 0
    if axis == 0:
        _d2_x(va, vo, gz, gy, s, False)
    elif axis == 1:
        _d2_y(va, vo, gz, s, False)
    else:
        _d2_z(va, vo, s, False)
    return out


def laplacian4(a, int dim, double h, out):
    cdef double[:, :, :, :] va = _halo4(a, dim)
    cdef double[:, :, :, :] vo = _cells4(out) if out.ndim > dim else _flat4(out)
    cdef double s = 1.0 / (12.0 * h * h)
    cdef Py_ssize_t gz = 2 if dim > 2 else 0
    cdef Py_ssize_t gy = 2 if dim > 1 else 0
    _d2_x(va, vo, gz, gy, s, False)
    if dim > 1:
        _d2_y(va, vo, gz, s, True)
    if dim > 2:
        _d2_z(va, vo, s, True)
    return out


def grad_sq4(a, int dim, double h, out):
    cdef double[:, :, :, :] va = _halo4(a, dim)
    cdef double[:, :, :, :] vo = _flat4(out)
    cdef double s = 1.0 / (12.0 * h)
    cdef Py_ssize_t gz = 2 if dim > 2 else 0
    cdef Py_ssize_t gy = 2 if dim > 1 else 0
    out[...] = 0.0
    _d1_x(va, vo, gz, gy, s, True)
    if dim > 1:
        _d1_y(va, vo, gz, s, True)
    if dim > 2:
        _d1_z(va, vo, s, True)
    return out


def cross(a, b, out):
    cdef double[:, :, :, :] x = _cells4(a)
    cdef double[:, :, :, :] y = _cells4(b)
    cdef double[:, :, :, :] o = _cells4(out)
    cdef Py_ssize_t iz, iy, ix
    with nogil:
        for iz in range(o.shape[1]):
            for iy in range(o.shape[2]):
                for ix in range(o.shape[3]):
                    o[0, iz, iy, ix] = (
                        x[1, iz, iy, ix] * y[2, iz, iy, ix]
                        - x[2, iz, iy, ix] * y[1, iz, iy, ix]
                    )
                    o[1, iz, iy, ix] = (
                        x[2, iz, iy, ix] * y[0, iz, iy, ix]
                        - x[0, iz, iy, ix] * y[2, iz, iy, ix]
                    )
                    o[2, iz, iy, ix] = (
                        x[0, iz, iy, ix] * y[1, iz, iy, ix]
                        - x[1, iz, iy, ix] * y[0, iz, iy, ix]
                    )
    return out


def project(src, out, double floor):
    cdef double[:, :, :, :] s = _cells4(src)
    cdef double[:, :, :, :] o = _cells4(out)
    cdef Py_ssize_t iz, iy, ix
    cdef double nrm, mn = 1e300, dev = 0.0, d
    with nogil:
        for iz in range(s.shape[1]):
            for iy in range(s.shape[2]):
                for ix in range(s.shape[3]):
                    nrm = sqrt(
                        s[0, iz, iy, ix] * s[0, iz, iy, ix]
                        + s[1, iz, iy, ix] * s[1, iz, iy, ix]
                        + s[2, iz, iy, ix] * s[2, iz, iy, ix]
                    )
                    if nrm < mn:
                        mn = nrm
    if mn < floor:
        return mn, -1.0
    with nogil:
        for iz in range(s.shape[1]):
            for iy in range(s.shape[2]):
                for ix in range(s.shape[3]):
                    nrm = sqrt(
                        s[0, iz, iy, ix] * s[0, iz, iy, ix]
                        + s[1, iz, iy, ix] * s[1, iz, iy, ix]
                        + s[2, iz, iy, ix] * s[2, iz, iy, ix]
                    )
                    o[0, iz, iy, ix] = s[0, iz, iy, ix] / nrm
                    o[1, iz, iy, ix] = s[1, iz, iy, ix] / nrm
                    o[2, iz, iy, ix] = s[2, iz, iy, ix] / nrm
                    d = fabs(
                        sqrt(
                            o[0, iz, iy, ix] * o[0, iz, iy, ix]
                            + o[1, iz, iy, ix] * o[1, iz, iy, ix]
                            + o[2, iz, iy, ix] * o[2, iz, iy, ix]
                        )
                        - 1.0
                    )
                    if d > dev:
                        dev = d
    return mn, dev


def lincomb2(double w1, a, double w2, b, out):
    cdef double[:, :, :, :] x = _cells4(a)
    cdef double[:, :, :, :] y = _cells4(b)
    cdef double[:, :, :, :] o = _cells4(out)
    cdef Py_ssize_t c, iz, iy, ix
    with nogil:
        for c in range(o.shape[0]):
            for iz in range(o.shape[1]):
                for iy in range(o.shape[2]):
                    for ix in range(o.shape[3]):
                        o[c, iz, iy, ix] = w1 * x[c, iz, iy, ix] + w2 * y[c, iz, iy, ix]
    return out


def lincomb3(double w1, a, double w2, b, double w3, c, out):
    cdef double[:, :, :, :] x = _cells4(a)
    cdef double[:, :, :, :] y = _cells4(b)
    cdef double[:, :, :, :] z = _cells4(c)
    cdef double[:, :, :, :] o = _cells4(out)
    cdef Py_ssize_t ic, iz, iy, ix
    with nogil:
        for ic in range(o.shape[0]):
            for iz in range(o.shape[1]):
                for iy in range(o.shape[2]):
                    for ix in range(o.shape[3]):
                        o[ic, iz, iy, ix] = (
                            w1 * x[ic, iz, iy, ix]
                            + w2 * y[ic, iz, iy, ix]
                            + w3 * z[ic, iz, iy, ix]
                        )
    return out


def assemble_rhs(tt, m_hat, lap, gs, double alpha, out):
    cdef double[:, :, :, :] t = _cells4(tt)
    cdef double[:, :, :, :] m = _cells4(m_hat)
    cdef double[:, :, :, :] l = _cells4(lap)
    cdef double[:, :, :, :] g = _flat4(gs)
    cdef double[:, :, :, :] o = _cells4(out)
    cdef Py_ssize_t iz, iy, ix
    cdef double ag
    with nogil:
        for iz in range(o.shape[1]):
            for iy in range(o.shape[2]):
                for ix in range(o.shape[3]):
                    ag = alpha * g[0, iz, iy, ix]
                    o[0, iz, iy, ix] = (
                        t[0, iz, iy, ix]
                        - (
                            m[1, iz, iy, ix] * l[2, iz, iy, ix]
                            - m[2, iz, iy, ix] * l[1, iz, iy, ix]
                        )
                        + ag * m[0, iz, iy, ix]
                    )
                    o[1, iz, iy, ix] = (
                        t[1, iz, iy, ix]
                        - (
                            m[2, iz, iy, ix] * l[0, iz, iy, ix]
                            - m[0, iz, iy, ix] * l[2, iz, iy, ix]
                        )
                        + ag * m[1, iz, iy, ix]
                    )
                    o[2, iz, iy, ix] = (
                        t[2, iz, iy, ix]
                        - (
                            m[0, iz, iy, ix] * l[1, iz, iy, ix]
                            - m[1, iz, iy, ix] * l[0, iz, iy, ix]
                        )
                        + ag * m[2, iz, iy, ix]
                    )
    return out
