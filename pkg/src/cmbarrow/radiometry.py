"""Blackbody radiometry in frequency space.

Energy density per unit frequency, its peak, and the photon number density.
All functions take frequencies in Hz and temperatures in kelvin.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .constants import C, H, K_B
from .errors import DomainError

__all__ = [
    "SpectralGrid",
    "SpectrumSamples",
    "linear_grid",
    "planck_energy_density",
    "wien_peak_x",
    "planck_peak_frequency",
    "photon_number_density",
    "grid_argmax",
]

# Dimensionless quadrature range for x^2/(e^x - 1); the tail past 50 is ~1e-19 relative.
_NGAMMA_X_MAX = 50.0
_NGAMMA_PANELS = 50
_NGAMMA_ORDER = 20


@dataclass(frozen=True)
class SpectralGrid:
    """Strictly increasing positive frequency axis in Hz."""

    frequencies: np.ndarray

    def __post_init__(self):
        nu = np.asarray(self.frequencies, dtype=np.float64)
        if nu.ndim != 1 or nu.size < 2:
            raise DomainError("a spectral grid needs at least 2 frequencies")
        if not np.all(np.isfinite(nu)) or np.any(nu <= 0):
            raise DomainError("grid frequencies must be finite and positive")
        if np.any(np.diff(nu) <= 0):
            raise DomainError("grid frequencies must be strictly increasing")
        nu.setflags(write=False)
        object.__setattr__(self, "frequencies", nu)

    def __len__(self) -> int:
        return self.frequencies.size


@dataclass(frozen=True)
class SpectrumSamples:
    """Spectrum values (J m^-3 Hz^-1) on a grid, with optional 1-sigma errors."""

    grid: SpectralGrid
    values: np.ndarray
    sigmas: np.ndarray | None = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.grid.frequencies.shape:
            raise DomainError("values must match the grid length")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.sigmas is not None:
            sigmas = np.asarray(self.sigmas, dtype=np.float64)
            if sigmas.shape != values.shape:
                raise DomainError("sigmas must match the grid length")
            if np.any(~np.isfinite(sigmas)) or np.any(sigmas < 0):
                raise DomainError("sigmas must be finite and nonnegative")
            sigmas.setflags(write=False)
            object.__setattr__(self, "sigmas", sigmas)

    @property
    def frequencies(self) -> np.ndarray:
        return self.grid.frequencies

    def __len__(self) -> int:
        return self.values.size


def linear_grid(lo: float, hi: float, n: int) -> SpectralGrid:
    """Linearly spaced grid of ``n`` points from ``lo`` to ``hi`` (Hz)."""
    if n < 2:
        raise DomainError("a grid needs n >= 2")
    return SpectralGrid(np.linspace(lo, hi, int(n)))


def _check_temperature(T: float, allow_zero: bool = False) -> float:
    T = float(T)
    if not np.isfinite(T) or T < 0 or (T == 0 and not allow_zero):
        raise DomainError(f"temperature must be {'>= 0' if allow_zero else '> 0'} K, got {T!r}")
    return T


def planck_energy_density(nu, T: float):
    """Planck spectral energy density u(nu, T) = (8 pi h / c^3) nu^3 / (exp(h nu / k T) - 1).

    Parameters
    ----------
    nu : float or array_like
        Frequency in Hz, strictly positive.
    T : float
        Temperature in K, strictly positive.

    Returns
    -------
    float or np.ndarray
        Energy density in J m^-3 Hz^-1, same shape as ``nu``.
    """
    T = _check_temperature(T)
    nu_arr = np.asarray(nu, dtype=np.float64)
    if np.any(~np.isfinite(nu_arr)) or np.any(nu_arr <= 0):
        raise DomainError("frequency must be finite and positive")
    x = H * nu_arr / (K_B * T)
    u = (8.0 * np.pi * H / C**3) * nu_arr**3 / np.expm1(x)
    return float(u) if np.ndim(u) == 0 else u


@lru_cache(maxsize=None)
def wien_peak_x() -> float:
    """Root x* of x = 3 (1 - exp(-x)), the peak of x^3 / (e^x - 1)."""
    return brentq(lambda x: x - 3.0 * -np.expm1(-x), 1.0, 5.0, xtol=1e-15, rtol=4 * np.finfo(float).eps)


def planck_peak_frequency(T: float) -> float:
    """Frequency (Hz) maximizing :func:`planck_energy_density` at temperature ``T``."""
    T = _check_temperature(T)
    return wien_peak_x() * K_B * T / H


@lru_cache(maxsize=None)
def _bose_integral() -> float:
    # integral of x^2 / (e^x - 1) over [0, X_MAX], composite Gauss-Legendre
    nodes, weights = np.polynomial.legendre.leggauss(_NGAMMA_ORDER)
    edges = np.linspace(0.0, _NGAMMA_X_MAX, _NGAMMA_PANELS + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * nodes[None, :]).ravel()
    w = (half[:, None] * weights[None, :]).ravel()
    return float(np.sum(w * x * x / np.expm1(x)))


def photon_number_density(T: float) -> float:
    """Blackbody photon number density (m^-3), integrated by quadrature.

    Integrates (8 pi nu^2 / c^3) / (exp(h nu / k T) - 1) over frequency after
    substituting x = h nu / k T, so the quadrature error does not depend on T.
    Returns 0 at T = 0.
    """
    T = _check_temperature(T, allow_zero=True)
    if T == 0:
        return 0.0
    scale = K_B * T / (H * C)
    return 8.0 * np.pi * scale**3 * _bose_integral()


def grid_argmax(values) -> int:
    """Index of the largest value; ties go to the lowest index (lowest frequency)."""
    return int(np.argmax(np.asarray(values)))
