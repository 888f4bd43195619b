"""Initial-data generators on the solver grid."""

from __future__ import annotations

import numpy as np

from .spectral import Grid, RealField


def zero_field(grid: Grid) -> RealField:
    return RealField(grid, np.zeros(grid.shape))


def gaussian_field(
    grid: Grid,
    amplitude: float,
    width: float,
    center: float | tuple[float, ...] = 0.0,
) -> RealField:
    """amplitude * exp(-|x - center|^2 / width^2).

    The width must be a few grid spacings so the spectral tail is
    negligible, and the center far enough from the boundary that the
    tail at the box edge is below machine precision.
    """
    if not width > 0.0:
        raise ValueError(f"width must be positive, got {width}")
    if np.isscalar(center):
        center = (float(center),) * grid.dim
    if len(center) != grid.dim:
        raise ValueError(f"center needs {grid.dim} coordinates, got {len(center)}")
    r_sq = np.zeros(grid.shape)
    for x, c in zip(grid.coords(), center):
        r_sq += (x - c) ** 2
    return RealField(grid, amplitude * np.exp(-r_sq / width**2))


def modulated_gaussian_field(
    grid: Grid,
    amplitude: float,
    width: float,
    center: float | tuple[float, ...] = 0.0,
) -> RealField:
    """x_1 * gaussian: an odd, zero-mean profile for the audits."""
    base = gaussian_field(grid, amplitude, width, center)
    x1 = grid.coords()[0]
    if np.isscalar(center):
        c1 = float(center)
    else:
        c1 = float(center[0])
    return RealField(grid, (x1 - c1) * base.values)
