"""Fourth-order finite-difference / BDF3 solver for the Landau-Lifshitz-Gilbert
equation on [0,1]^d with homogeneous Neumann walls, plus the verification
harness (manufactured solutions, convergence studies, discrete-identity
checks)."""

__version__ = "0.1.0"

from llgfd import backend
from llgfd.grid import (
    Grid,
    VectorField,
    ScalarField,
    make_grid,
    fill_ghosts,
    sample,
    constant_field,
)

kernel_backend = backend.name
