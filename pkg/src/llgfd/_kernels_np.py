"""Pure-numpy implementations of the hot field kernels.

All functions operate on raw float64 arrays shaped (ncomp, *spatial) where the
spatial axes are ordered so that x is the last (fastest-varying) axis.  Arrays
with a ghost halo carry two extra cells on every face of each real spatial
axis; interior-only arrays carry none.  `dim` counts the trailing real spatial
axes; any leading axes are treated as independent components.

This module is the reference lane: the compiled extension in ``_kernels.pyx``
must match it to roundoff.
"""

import numpy as np

NAME = "numpy"


def _axslice(nd, ax, idx):
    sl = [slice(None)] * nd
    sl[ax] = idx
    return tuple(sl)


def fill_ghosts(a, dim):
    """Mirror-extrapolate the 2-deep halo in place, one axis at a time.

    Each pass copies whole hyperplanes (including halo zones set by earlier
    passes), so corner/edge ghosts compose per-axis reflections and the result
    is independent of the axis order.
    """
    nd = a.ndim
    for ax in range(nd - dim, nd):
        a[_axslice(nd, ax, 1)] = a[_axslice(nd, ax, 2)]
        a[_axslice(nd, ax, 0)] = a[_axslice(nd, ax, 3)]
        a[_axslice(nd, ax, -2)] = a[_axslice(nd, ax, -3)]
        a[_axslice(nd, ax, -1)] = a[_axslice(nd, ax, -4)]
    return a


def _shift_view(a, dim, np_ax, shift):
    """Interior-sized view of `a` shifted along `np_ax` by `shift` cells."""
    nd = a.ndim
    sl = []
    for j in range(nd):
        if j == np_ax:
            sl.append(slice(2 + shift, a.shape[j] - 2 + shift))
        elif j >= nd - dim:
            sl.append(slice(2, -2))
        else:
            sl.append(slice(None))
    return a[tuple(sl)]


def d1_long(a, dim, axis, h, out):
    """Five-point fourth-order first derivative along spatial axis `axis`."""
    np_ax = a.ndim - 1 - axis
    v = lambda s: _shift_view(a, dim, np_ax, s)
    np.subtract(v(1), v(-1), out=out)
    out *= 8.0
    out += v(-2)
    out -= v(2)
    out /= 12.0 * h
    return out


def d2_long(a, dim, axis, h, out):
    """Five-point fourth-order second derivative along spatial axis `axis`."""
    np_ax = a.ndim - 1 - axis
    v = lambda s: _shift_view(a, dim, np_ax, s)
    np.add(v(-1), v(1), out=out)
    out *= 16.0
    out -= v(-2)
    out -= v(2)
    out -= 30.0 * v(0)
    out /= 12.0 * h * h
    return out


def laplacian4(a, dim, h, out):
    """Sum of the long-stencil second derivatives over all spatial axes."""
    d2_long(a, dim, 0, h, out)
    if dim > 1:
        tmp = np.empty_like(out)
        for axis in range(1, dim):
            out += d2_long(a, dim, axis, h, tmp)
    return out


def grad_sq4(a, dim, h, out):
    """Pointwise sum over components and axes of squared long first derivatives.

    `a` has shape (ncomp, *ext); `out` is interior-shaped with no component
    axis.
    """
    tmp = np.empty((a.shape[0],) + out.shape, dtype=np.float64)
    out[...] = 0.0
    for axis in range(dim):
        d1_long(a, dim, axis, h, tmp)
        np.square(tmp, out=tmp)
        out += tmp.sum(axis=0)
    return out


def cross(a, b, out):
    """Componentwise cross product a x b; `out` must not alias a or b."""
    np.multiply(a[1], b[2], out=out[0])
    out[0] -= a[2] * b[1]
    np.multiply(a[2], b[0], out=out[1])
    out[1] -= a[0] * b[2]
    np.multiply(a[0], b[1], out=out[2])
    out[2] -= a[1] * b[0]
    return out


def project(src, out, floor):
    """Normalize each 3-vector of `src` into `out`.

    Returns (min_norm, max_unit_dev).  If the smallest pointwise magnitude is
    below `floor`, `out` is left untouched and max_unit_dev is -1.
    """
    norm = np.sqrt(src[0] * src[0] + src[1] * src[1] + src[2] * src[2])
    min_norm = float(norm.min())
    if min_norm < floor:
        return min_norm, -1.0
    np.divide(src, norm, out=out)
    dev = np.abs(
        np.sqrt(out[0] * out[0] + out[1] * out[1] + out[2] * out[2]) - 1.0
    )
    return min_norm, float(dev.max())


def lincomb2(w1, a, w2, b, out):
    np.multiply(a, w1, out=out)
    out += w2 * b
    return out


def lincomb3(w1, a, w2, b, w3, c, out):
    np.multiply(a, w1, out=out)
    out += w2 * b
    out += w3 * c
    return out


def assemble_rhs(tt, m_hat, lap, gs, alpha, out):
    """out = tt - m_hat x lap + alpha * gs * m_hat  (pointwise over cells).

    `out` may alias `tt`; it must not alias `m_hat` or `lap`.
    """
    ags = alpha * gs
    out[0] = tt[0] - (m_hat[1] * lap[2] - m_hat[2] * lap[1]) + ags * m_hat[0]
    out[1] = tt[1] - (m_hat[2] * lap[0] - m_hat[0] * lap[2]) + ags * m_hat[1]
    out[2] = tt[2] - (m_hat[0] * lap[1] - m_hat[1] * lap[0]) + ags * m_hat[2]
    return out
