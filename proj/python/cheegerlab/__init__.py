"""Eigenvalues, Cheeger constants and the ratio F_{p,q} on planar grid domains.

Masks and fields are numpy arrays of shape (ny, nx); row j holds the cells
with y-index j, so row 0 is the bottom of the domain.
"""

from ._cheegerlab import (
    Grid2D,
    InvalidArgument,
    SolverError,
    SolverOptions,
    cheeger,
    cheeger_bruteforce,
    cheeger_convex_oracle,
    domain_grid,
    eigen_1d,
    gamma_distance,
    inf,
    inradius,
    make_grid,
    perimeter_area,
    pi_p,
    principal_eigen,
    puncture_experiment,
    rasterize,
    ratio_F,
    rescale_spacing,
    run_cli,
    torsion,
)


def shape_problem(shape, resolution=128, min_short_cells=0):
    """Grid and mask for a shape string such as "unit-disk" or "rect-0.2"."""
    grid = domain_grid(shape, resolution, min_short_cells)
    return grid, rasterize(shape, grid)


__all__ = [name for name in dir() if not name.startswith("_")]
