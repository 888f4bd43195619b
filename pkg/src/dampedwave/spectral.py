"""Periodic grid management, FFTs, and the damped-wave Fourier multipliers.

The continuum problem lives on R^N; here it is truncated to a periodic
box [-L, L)^dim sampled with M points per axis, so the discrete
frequencies are xi_k = pi*k/L for k in the standard FFT index set.  The
solution operator of u_tt - Lap u + u_t = 0 acts diagonally in frequency
through two scalar multipliers evaluated by :func:`greens_multiplier`
and :func:`greens_multiplier_dt`; both switch between a sinh branch
(|xi| < 1/2), a sin branch (|xi| > 1/2) and a short Taylor series near
the branch point where the closed forms cancel catastrophically.

FFT normalization: forward transform unscaled, inverse divides by
M^dim (the numpy convention).  Physical-space norms carry the h^dim
quadrature weight so they approximate continuum L^p norms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Width of the Taylor window around the branch point xi_sq = 1/4.
BRANCH_TOL = 1e-8

# Boundary values above this fraction of the field maximum indicate that
# the truncated box is too small for the run.
BOUNDARY_FRACTION = 1e-8


@dataclass(frozen=True)
class Grid:
    """Periodic box [-half_width, half_width)^dim with ``points`` samples
    per axis.  ``points`` must be even and at least 8; three-dimensional
    grids are capped at 128 points per axis to bound memory."""

    dim: int
    half_width: float
    points: int

    def __post_init__(self) -> None:
        if self.dim not in (1, 2, 3):
            raise ValueError(f"dim must be 1, 2 or 3, got {self.dim}")
        if not self.half_width > 0.0:
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if self.points < 8 or self.points % 2 != 0:
            raise ValueError(
                f"points must be an even integer >= 8, got {self.points}"
            )
        if self.dim == 3 and self.points > 128:
            raise ValueError("3-d grids are capped at 128 points per axis")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.points

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dim

    @property
    def size(self) -> int:
        return self.points**self.dim

    @property
    def cell_volume(self) -> float:
        return self.spacing**self.dim

    def axis_coords(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.points)

    def coords(self) -> tuple[np.ndarray, ...]:
        """Meshgrid coordinates, one full array per axis."""
        axes = (self.axis_coords(),) * self.dim
        return tuple(np.meshgrid(*axes, indexing="ij"))

    def radius_sq(self) -> np.ndarray:
        out = np.zeros(self.shape)
        for x in self.coords():
            out += x * x
        return out

    def axis_freqs(self) -> np.ndarray:
        """Angular frequencies pi*k/L along one axis, FFT layout."""
        return 2.0 * np.pi * np.fft.fftfreq(self.points, d=self.spacing)

    def freq_sq(self) -> np.ndarray:
        xi = self.axis_freqs()
        out = np.zeros(self.shape)
        for axis in range(self.dim):
            shape = [1] * self.dim
            shape[axis] = self.points
            out += (xi**2).reshape(shape)
        return out

    def boundary_mask(self) -> np.ndarray:
        """Outermost grid layer on every axis (the shell watched for
        contamination by the periodic images)."""
        mask = np.zeros(self.shape, dtype=bool)
        for axis in range(self.dim):
            index = [slice(None)] * self.dim
            index[axis] = 0
            mask[tuple(index)] = True
            index[axis] = self.points - 1
            mask[tuple(index)] = True
        return mask


@dataclass
class RealField:
    """Real-valued grid function; non-finite entries are rejected because
    they signal blow-up, which the solver handles explicitly."""

    grid: Grid
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != self.grid.shape:
            raise ValueError(
                f"values shape {self.values.shape} does not match grid "
                f"shape {self.grid.shape}"
            )
        if not np.all(np.isfinite(self.values)):
            raise ValueError("field contains non-finite values")

    def l2_norm(self) -> float:
        return float(np.sqrt(self.grid.cell_volume * np.sum(self.values**2)))

    def linf_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def mean(self) -> float:
        return float(np.mean(self.values))


@dataclass
class SpectralField:
    """FFT coefficients of a grid function (numpy layout, unscaled)."""

    grid: Grid
    coeffs: np.ndarray

    def __post_init__(self) -> None:
        self.coeffs = np.asarray(self.coeffs, dtype=np.complex128)
        if self.coeffs.shape != self.grid.shape:
            raise ValueError(
                f"coeffs shape {self.coeffs.shape} does not match grid "
                f"shape {self.grid.shape}"
            )

    def l2_norm(self) -> float:
        return float(
            np.sqrt(
                self.grid.cell_volume
                * np.sum(np.abs(self.coeffs) ** 2)
                / self.grid.size
            )
        )


def transform_forward(field: RealField) -> SpectralField:
    return SpectralField(field.grid, np.fft.fftn(field.values))


def transform_inverse(sf: SpectralField, check: bool = True) -> RealField:
    """Inverse transform back to a real field.

    With ``check`` the imaginary residue (which must vanish for
    Hermitian-symmetric coefficients) is verified against 1e-8 of the
    field scale.
    """
    w = np.fft.ifftn(sf.coeffs)
    if check:
        scale = np.max(np.abs(w)) + 1e-300
        imag = np.max(np.abs(w.imag))
        if imag > 1e-8 * scale:
            raise ValueError(
                f"inverse transform left imaginary residue {imag:.3e} "
                f"(field scale {scale:.3e}); coefficients are not "
                "Hermitian-symmetric"
            )
    return RealField(sf.grid, w.real)


def apply_multiplier(sf: SpectralField, multiplier) -> SpectralField:
    """Multiply coefficient k by m(|xi_k|^2).

    ``multiplier`` is either a callable of the squared frequency or a
    precomputed array on ``grid.shape``.  Real multipliers preserve
    Hermitian symmetry.  Non-finite multiplier values are an error.
    """
    if callable(multiplier):
        values = np.asarray(multiplier(sf.grid.freq_sq()))
    else:
        values = np.asarray(multiplier)
    if values.shape != sf.grid.shape:
        raise ValueError(
            f"multiplier shape {values.shape} does not match grid shape "
            f"{sf.grid.shape}"
        )
    if not np.all(np.isfinite(values)):
        raise ValueError("multiplier contains non-finite values")
    return SpectralField(sf.grid, sf.coeffs * values)


# ---------------------------------------------------------------------------
# Damped-wave multipliers
# ---------------------------------------------------------------------------
#
# With omega = sqrt(1/4 - xi_sq) the Green's multiplier is
#     g(t) = exp(-t/2) * sinh(t*omega)/omega          (xi_sq < 1/4)
#          = exp(-t/2) * t                            (xi_sq = 1/4)
#          = exp(-t/2) * sin(t*nu)/nu                 (xi_sq > 1/4),
# nu = sqrt(xi_sq - 1/4).  The sinh branch is evaluated in the
# overflow-free form (exp(t*(omega-1/2)) - exp(-t*(omega+1/2)))/(2*omega):
# omega <= 1/2 keeps both exponents nonpositive for every t >= 0, so the
# expression stays finite no matter how large t grows.  Near the branch
# point both closed forms cancel; there we use 4 terms of the Taylor
# series of sinh(x)/x and cosh(x) in z = t^2*(1/4 - xi_sq), which is
# valid for either sign of z.


def _split_branches(xi_sq: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    delta = 0.25 - xi_sq
    near = np.abs(delta) < BRANCH_TOL
    low = delta >= BRANCH_TOL
    high = delta <= -BRANCH_TOL
    return delta, low, high, near


def greens_multiplier(t: float, xi_sq) -> np.ndarray | float:
    """Multiplier of the operator mapping initial velocity to the solution
    of the linear damped wave equation at time t."""
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    xi_sq = np.asarray(xi_sq, dtype=np.float64)
    scalar = xi_sq.ndim == 0
    xi_sq = np.atleast_1d(xi_sq)
    delta, low, high, near = _split_branches(xi_sq)
    out = np.empty_like(delta)

    omega = np.sqrt(delta[low])
    out[low] = (np.exp(t * (omega - 0.5)) - np.exp(-t * (omega + 0.5))) / (
        2.0 * omega
    )
    nu = np.sqrt(-delta[high])
    out[high] = np.exp(-0.5 * t) * np.sin(t * nu) / nu
    z = t * t * delta[near]
    out[near] = (
        np.exp(-0.5 * t)
        * t
        * (1.0 + z / 6.0 + z * z / 120.0 + z * z * z / 5040.0)
    )
    return float(out[0]) if scalar else out


def greens_multiplier_dt(t: float, xi_sq) -> np.ndarray | float:
    """Time derivative of :func:`greens_multiplier`:
    exp(-t/2) * (cosh(t*omega) - sinh(t*omega)/(2*omega)) and its sin/cos
    counterpart past the branch point."""
    if t < 0.0:
        raise ValueError(f"t must be nonnegative, got {t}")
    xi_sq = np.asarray(xi_sq, dtype=np.float64)
    scalar = xi_sq.ndim == 0
    xi_sq = np.atleast_1d(xi_sq)
    delta, low, high, near = _split_branches(xi_sq)
    out = np.empty_like(delta)

    omega = np.sqrt(delta[low])
    e_plus = np.exp(t * (omega - 0.5))
    e_minus = np.exp(-t * (omega + 0.5))
    out[low] = 0.5 * (e_plus + e_minus) - 0.5 * (e_plus - e_minus) / (2.0 * omega)
    nu = np.sqrt(-delta[high])
    out[high] = np.exp(-0.5 * t) * (
        np.cos(t * nu) - 0.5 * np.sin(t * nu) / nu
    )
    z = t * t * delta[near]
    cosh_series = 1.0 + z / 2.0 + z * z / 24.0 + z * z * z / 720.0
    sinhc_series = 1.0 + z / 6.0 + z * z / 120.0 + z * z * z / 5040.0
    out[near] = np.exp(-0.5 * t) * (cosh_series - 0.5 * t * sinhc_series)
    return float(out[0]) if scalar else out


def boundary_contaminated(values: np.ndarray, grid: Grid) -> bool:
    """True when the boundary shell carries more than BOUNDARY_FRACTION of
    the field maximum, i.e. the periodic images have started to talk."""
    peak = np.max(np.abs(values))
    if peak == 0.0 or not np.isfinite(peak):
        return False
    edge = np.max(np.abs(values[grid.boundary_mask()]))
    return bool(edge > BOUNDARY_FRACTION * peak)
