"""Field snapshot files: a JSON sidecar next to flat little-endian binary.

The binary holds float64 interior cells only, component-interleaved
(m1, m2, m3 per cell) with x varying fastest across cells; the sidecar
records {dim, n, h, t, components, layout, endianness}.
"""

import json
import pathlib

import numpy as np

from llgfd.grid import VectorField, make_grid

LAYOUT = "row-major-x-fastest"


def write_field(field, prefix, t):
    """Write <prefix>.json and <prefix>.bin; returns the two paths."""
    prefix = pathlib.Path(prefix)
    prefix.parent.mkdir(parents=True, exist_ok=True)
    grid = field.grid
    header = {
        "dim": grid.dim,
        "n": grid.n,
        "h": grid.h,
        "t": t,
        "components": 3,
        "layout": LAYOUT,
        "endianness": "little",
    }
    jpath = prefix.with_suffix(".json")
    bpath = prefix.with_suffix(".bin")
    jpath.write_text(json.dumps(header, indent=1) + "\n")
    interleaved = np.ascontiguousarray(np.moveaxis(field.interior, 0, -1))
    interleaved.astype("<f8").tofile(bpath)
    return jpath, bpath


def read_field(prefix):
    """Read a snapshot pair; returns (VectorField, t)."""
    prefix = pathlib.Path(prefix)
    header = json.loads(prefix.with_suffix(".json").read_text())
    if header.get("layout") != LAYOUT:
        raise ValueError(f"unsupported layout {header.get('layout')!r}")
    if header.get("endianness") != "little":
        raise ValueError("only little-endian snapshots supported")
    grid = make_grid(header["dim"], header["n"])
    raw = np.fromfile(prefix.with_suffix(".bin"), dtype="<f8")
    expect = 3 * grid.ncells
    if raw.size != expect:
        raise ValueError(f"snapshot holds {raw.size} values, expected {expect}")
    data = raw.reshape(grid.shape_int + (3,))
    field = VectorField(grid)
    field.interior[...] = np.moveaxis(data, -1, 0)
    return field, header["t"]
