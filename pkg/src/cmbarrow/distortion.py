"""Two-photon absorption distortion of a blackbody spectrum and its fitting.

The distorted spectrum is G(nu) = E(nu) - alpha * E(nu / 2), where E is the
Planck energy density and alpha a frequency-independent absorption factor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .errors import DomainError
from .radiometry import (
    SpectralGrid,
    SpectrumSamples,
    planck_energy_density,
    planck_peak_frequency,
)

__all__ = [
    "DistortionModel",
    "FitResult",
    "Bounds",
    "DEFAULT_BOUNDS",
    "distorted_spectrum",
    "deviation_profile",
    "peak_deviation_frequency",
    "fit_planck_temperature",
    "fit_distortion",
    "synthesize_observation",
]

N_T_STARTS = 64
N_ALPHA_STARTS = 32
N_REFINED = 4
MAX_ITER = 4000
OBJECTIVE_TOL = 1e-10


@dataclass(frozen=True)
class DistortionModel:
    T: float
    alpha: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.T) and self.T > 0):
            raise DomainError(f"T must be > 0 K, got {self.T!r}")
        if not (0.0 <= self.alpha < 1.0):
            raise DomainError(f"alpha must lie in [0, 1), got {self.alpha!r}")


@dataclass(frozen=True)
class Bounds:
    """Box constraints for (T, alpha); equal endpoints fix a parameter."""

    T: tuple[float, float] = (0.5, 20.0)
    alpha: tuple[float, float] = (0.0, 0.9)

    def __post_init__(self):
        t_lo, t_hi = self.T
        a_lo, a_hi = self.alpha
        if not (0 < t_lo <= t_hi and math.isfinite(t_hi)):
            raise DomainError(f"invalid temperature bounds {self.T}")
        if not (0 <= a_lo <= a_hi < 1):
            raise DomainError(f"invalid alpha bounds {self.alpha}")


DEFAULT_BOUNDS = Bounds()


@dataclass
class FitResult:
    params: DistortionModel
    residual_norm: float
    iterations: int
    converged: bool
    covariance_diag: tuple[float, ...] | None = None
    n_eval: int = 0
    free: tuple[str, ...] = field(default=("T", "alpha"))

    def to_dict(self) -> dict:
        return {
            "T": self.params.T,
            "alpha": self.params.alpha,
            "residual_norm": self.residual_norm,
            "iterations": self.iterations,
            "converged": self.converged,
            "covariance_diag": list(self.covariance_diag) if self.covariance_diag is not None else None,
            "n_eval": self.n_eval,
            "free": list(self.free),
        }


def distorted_spectrum(grid: SpectralGrid, model: DistortionModel) -> SpectrumSamples:
    """Sample G(nu) = E(nu) - alpha E(nu/2) on ``grid``.

    ``E(nu/2)`` is evaluated from the closed form, never interpolated.
    """
    nu = grid.frequencies
    E = planck_energy_density(nu, model.T)
    return SpectrumSamples(grid, E - model.alpha * planck_energy_density(nu / 2.0, model.T))


def deviation_profile(grid: SpectralGrid, model: DistortionModel) -> SpectrumSamples:
    """Sample the absorption loss F(nu) = alpha E(nu/2)."""
    return SpectrumSamples(grid, model.alpha * planck_energy_density(grid.frequencies / 2.0, model.T))


def peak_deviation_frequency(T: float) -> float:
    """Frequency of maximum absorption loss, twice the Planck peak. Independent of alpha."""
    return 2.0 * planck_peak_frequency(T)


# -- fitting ---------------------------------------------------------------


class _Objective:
    """Normalized weighted least-squares objective.

    Residuals are divided by the weighted RMS of the data, so a uniform
    rescaling of the sigmas leaves every evaluation bit-identical.
    """

    def __init__(self, samples: SpectrumSamples):
        self.nu = samples.frequencies
        self.nu_half = self.nu / 2.0
        self.values = samples.values
        if samples.sigmas is None:
            self.w = np.ones_like(self.values)
        else:
            if np.any(samples.sigmas == 0):
                raise DomainError("sigmas must be strictly positive for weighting")
            self.w = 1.0 / samples.sigmas**2
        self.sqrt_w = np.sqrt(self.w)
        self.scale = math.sqrt(float(np.mean(self.w * self.values**2)))
        self.n_eval = 0

    def model(self, T: float, alpha: float) -> np.ndarray:
        return planck_energy_density(self.nu, T) - alpha * planck_energy_density(self.nu_half, T)

    def residuals(self, T: float, alpha: float) -> np.ndarray:
        return self.sqrt_w * (self.values - self.model(T, alpha)) / self.scale

    def __call__(self, T: float, alpha: float) -> float:
        self.n_eval += 1
        r = self.residuals(T, alpha)
        return float(np.mean(r * r))

    def residual_norm(self, T: float, alpha: float) -> float:
        # weighted RMS in data units
        return self.scale * math.sqrt(self(T, alpha))


def _validate_for_fit(samples: SpectrumSamples, min_points: int) -> None:
    if len(samples) < min_points:
        raise DomainError(f"fitting needs at least {min_points} samples, got {len(samples)}")
    if not np.all(np.isfinite(samples.values)):
        raise DomainError("sample values must be finite")


def _covariance_diag(obj: _Objective, T: float, alpha: float, free: tuple[str, ...], has_sigmas: bool):
    # Gauss-Newton covariance from a central-difference Jacobian of the model
    cols = []
    for name in free:
        step = 1e-6 * T if name == "T" else 1e-6
        if name == "T":
            d = (obj.model(T + step, alpha) - obj.model(T - step, alpha)) / (2 * step)
        else:
            d = -planck_energy_density(obj.nu_half, T)
        cols.append(obj.sqrt_w * d)
    if not cols:
        return (0.0, 0.0)
    J = np.stack(cols, axis=1)
    try:
        cov = np.linalg.inv(J.T @ J)
    except np.linalg.LinAlgError:
        return None
    if not has_sigmas:
        dof = max(len(obj.values) - len(free), 1)
        r = obj.sqrt_w * (obj.values - obj.model(T, alpha))
        cov = cov * float(r @ r) / dof
    diag = dict(zip(free, np.abs(np.diag(cov))))
    return (float(diag.get("T", 0.0)), float(diag.get("alpha", 0.0)))


def _refine_1d(obj: _Objective, lo: float, hi: float, alpha: float):
    res = minimize_scalar(
        lambda T: obj(T, alpha),
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12, "maxiter": MAX_ITER},
    )
    return float(res.x), float(res.fun), int(res.nit), bool(res.success)


def _refine_2d(obj: _Objective, x0, bounds: Bounds):
    res = minimize(
        lambda p: obj(p[0], p[1]),
        np.asarray(x0, dtype=float),
        method="Nelder-Mead",
        bounds=[bounds.T, bounds.alpha],
        options={"xatol": OBJECTIVE_TOL, "fatol": OBJECTIVE_TOL, "maxiter": MAX_ITER, "maxfev": 4 * MAX_ITER},
    )
    return float(res.x[0]), float(res.x[1]), float(res.fun), int(res.nit), bool(res.success)


def _best(candidates):
    # best objective; ties by lowest T, then lowest alpha
    return min(candidates, key=lambda c: (c["fun"], c["T"], c["alpha"]))


def _fit(samples: SpectrumSamples, bounds: Bounds, min_points: int) -> FitResult:
    _validate_for_fit(samples, min_points)
    if np.all(samples.values == samples.values[0]):
        raise DomainError("degenerate data: all sample values are equal")
    obj = _Objective(samples)
    if obj.scale == 0:
        raise DomainError("degenerate data: all sample values are zero")

    t_lo, t_hi = bounds.T
    a_lo, a_hi = bounds.alpha
    T_starts = np.linspace(t_lo, t_hi, N_T_STARTS) if t_hi > t_lo else np.array([t_lo])
    a_starts = np.linspace(a_lo, a_hi, N_ALPHA_STARTS) if a_hi > a_lo else np.array([a_lo])
    free = tuple(name for name, (lo, hi) in (("T", bounds.T), ("alpha", bounds.alpha)) if hi > lo)

    grid_vals = np.array([[obj(T, a) for a in a_starts] for T in T_starts])
    # lexicographic order over (objective, T index, alpha index) keeps the start order deterministic
    order = np.lexsort((np.tile(np.arange(a_starts.size), T_starts.size),
                        np.repeat(np.arange(T_starts.size), a_starts.size),
                        grid_vals.ravel()))
    candidates = []

    def bracket(i):
        return T_starts[max(i - 1, 0)], T_starts[min(i + 1, T_starts.size - 1)]

    if "alpha" not in free:
        if "T" not in free:
            T, fun, nit, ok = t_lo, obj(t_lo, a_lo), 0, True
        else:
            i = int(order[0] // a_starts.size)
            lo, hi = bracket(i)
            T, fun, nit, ok = _refine_1d(obj, lo, hi, a_lo)
        candidates.append(dict(T=T, alpha=a_lo, fun=fun, nit=nit, ok=ok))
    else:
        for flat in order[:N_REFINED]:
            i, j = divmod(int(flat), a_starts.size)
            if "T" in free:
                T, a, fun, nit, ok = _refine_2d(obj, (T_starts[i], a_starts[j]), bounds)
            else:
                res = minimize_scalar(lambda a: obj(t_lo, a), bounds=(a_lo, a_hi), method="bounded",
                                      options={"xatol": 1e-12, "maxiter": MAX_ITER})
                T, a, fun, nit, ok = t_lo, float(res.x), float(res.fun), int(res.nit), bool(res.success)
            candidates.append(dict(T=T, alpha=a, fun=fun, nit=nit, ok=ok))
        if "T" in free:
            # the alpha = lower-bound nested model is always a candidate
            i = int(np.argmin(grid_vals[:, 0]))
            lo, hi = bracket(i)
            T, fun, nit, ok = _refine_1d(obj, lo, hi, a_lo)
            candidates.append(dict(T=T, alpha=a_lo, fun=fun, nit=nit, ok=ok))

    best = _best(candidates)
    iterations = sum(c["nit"] for c in candidates)
    converged = best["ok"] and best["nit"] < MAX_ITER
    model = DistortionModel(best["T"], best["alpha"])
    return FitResult(
        params=model,
        residual_norm=obj.residual_norm(best["T"], best["alpha"]),
        iterations=iterations,
        converged=converged,
        covariance_diag=_covariance_diag(obj, best["T"], best["alpha"], free, samples.sigmas is not None),
        n_eval=obj.n_eval,
        free=free,
    )


def fit_planck_temperature(samples: SpectrumSamples, T_bounds: tuple[float, float] = DEFAULT_BOUNDS.T) -> FitResult:
    """Best-fit pure Planck temperature (the apparent blackbody temperature).

    Minimizes sum w_i (values_i - E(nu_i, T))^2 with w_i = 1/sigma_i^2, or
    unit weights when sigmas are absent. Coarse grid over ``T_bounds``
    followed by bounded Brent refinement.
    """
    return _fit(samples, Bounds(T=T_bounds, alpha=(0.0, 0.0)), min_points=3)


def fit_distortion(samples: SpectrumSamples, bounds: Bounds = DEFAULT_BOUNDS) -> FitResult:
    """Joint weighted least-squares estimate of (T, alpha).

    A 64 x 32 grid of starts covers the bound box; the best few are refined
    with bounded Nelder-Mead, together with the alpha-at-lower-bound 1-D
    solution, and the lowest objective wins.
    """
    return _fit(samples, bounds, min_points=4)


def synthesize_observation(model: DistortionModel, grid: SpectralGrid, noise_rel: float, seed: int) -> SpectrumSamples:
    """Distorted spectrum with multiplicative Gaussian noise.

    values_i = G_i (1 + noise_rel z_i), with z_i drawn by
    ``numpy.random.default_rng(seed).standard_normal`` (PCG64), and
    sigmas_i = noise_rel G_i. With ``noise_rel == 0`` the exact distorted
    spectrum is returned, without sigmas.
    """
    if not (math.isfinite(noise_rel) and noise_rel >= 0):
        raise DomainError(f"noise_rel must be >= 0, got {noise_rel!r}")
    clean = distorted_spectrum(grid, model)
    if noise_rel == 0:
        return clean
    z = np.random.default_rng(seed).standard_normal(len(grid))
    G = clean.values
    return SpectrumSamples(grid, G * (1.0 + noise_rel * z), noise_rel * np.abs(G))
