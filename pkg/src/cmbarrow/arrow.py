"""Regularized retarded and advanced double time integrals.

Units are hbar = c = 1. With the outer phase f(t) = exp(i (E_f - omega) t)
and inner phase g(t') = exp(-i (E_i + omega') t'), write
beta = E_i + omega' and the detuning Delta = E_f - E_i - omega - omega'.
Regulators: outer exp(-eps t); inner exp(+eta t') (retarded) or
exp(-eta t') (advanced), with 0 < eta < eps.

Closed forms (outer integral over [0, inf))::

    retarded   A_R = exp(-(eta - i beta) rho) / ((eta - i beta) (eps - eta - i Delta))
    advanced   A_A = exp(-(eta + i beta) rho) / ((eta + i beta) (eps + eta - i Delta))

|A_R| is the square root of a Lorentzian in Delta with half width eps - eta,
and its peak diverges as 1 / (eps - eta). |A_A| has width eps + eta and its
peak stays below 1 / (eps |eta + i beta|).

The signal-linked variant restricts the inner integral to t' in [0, t - rho],
empty for t < rho, and integrates t over the finite window [0, t_max]; it is
exactly zero once rho >= t_max. The EPR variant is the retarded amplitude
with the inner upper limit t, i.e. ``rho = 0``.

Numeric modes integrate the outer variable by composite Gauss-Legendre on
[0, t_max] with the inner integral in closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import DomainError

__all__ = [
    "TransitionConfig",
    "AmplitudeScan",
    "retarded_amplitude",
    "advanced_amplitude",
    "epr_amplitude",
    "signal_linked_retarded_amplitude",
    "amplitude",
    "rounding_floor",
    "scan_delta",
    "regulator_sweep",
    "VARIANTS",
]

VARIANTS = ("retarded", "advanced", "signal_linked")

GAUSS_ORDER = 8
PANEL_PHASE = 0.1
_CHUNK = 1 << 15


@dataclass(frozen=True)
class TransitionConfig:
    E_i: float = 1.0
    E_f: float = 2.0
    omega: float = 0.5
    omega_prime: float = 0.5
    rho: float = 0.0
    epsilon: float = 0.02
    eta: float = 0.01
    t_max: float = 2500.0

    def __post_init__(self):
        if not (self.epsilon > 0 and self.eta > 0):
            raise DomainError("regulators must be positive")
        if self.eta >= self.epsilon:
            raise DomainError(f"need eta < epsilon, got eta={self.eta}, epsilon={self.epsilon}")
        if self.rho < 0:
            raise DomainError("rho must be >= 0")
        if not self.t_max > 0:
            raise DomainError("t_max must be > 0")

    @property
    def beta(self) -> float:
        return self.E_i + self.omega_prime

    @property
    def outer_frequency(self) -> float:
        return self.E_f - self.omega

    @property
    def delta(self) -> float:
        return self.E_f - self.E_i - self.omega - self.omega_prime

    def with_delta(self, delta: float) -> "TransitionConfig":
        """Same config with E_f moved so that the detuning equals ``delta``."""
        return replace(self, E_f=self.E_i + self.omega + self.omega_prime + delta)

    def with_regulators(self, epsilon: float, eta: float) -> "TransitionConfig":
        return replace(self, epsilon=epsilon, eta=eta)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


@dataclass(frozen=True)
class AmplitudeScan:
    which: str
    deltas: np.ndarray
    magnitudes: np.ndarray
    peak_delta: float
    peak_magnitude: float
    half_width: float

    def summary(self) -> dict:
        return {
            "which": self.which,
            "peak_delta": self.peak_delta,
            "peak_magnitude": self.peak_magnitude,
            "half_width": self.half_width,
            "n_points": int(self.deltas.size),
        }


def _check_mode(mode: str) -> str:
    if mode not in ("analytic", "numeric"):
        raise DomainError(f"mode must be 'analytic' or 'numeric', got {mode!r}")
    return mode


def _panel_width(cfg: TransitionConfig) -> float:
    # the closed-form inner pieces oscillate at beta and E_f - omega, the product at Delta
    fastest = max(1.0, abs(cfg.delta), abs(cfg.beta), abs(cfg.outer_frequency), cfg.epsilon)
    return PANEL_PHASE / fastest


def _gauss(fn, a: float, b: float, width: float) -> complex:
    """Composite Gauss-Legendre integral of a vectorized ``fn`` over [a, b]."""
    if b <= a:
        return 0j
    n_panels = max(1, math.ceil((b - a) / width))
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_ORDER)
    edges = np.linspace(a, b, n_panels + 1)
    total = 0j
    for start in range(0, n_panels, _CHUNK):
        e = edges[start:start + _CHUNK + 1]
        half = 0.5 * np.diff(e)
        mid = 0.5 * (e[1:] + e[:-1])
        t = mid[:, None] + half[:, None] * nodes[None, :]
        total += complex(np.sum(fn(t) * (half[:, None] * weights[None, :])))
    return total


def _outer(cfg: TransitionConfig, t):
    return np.exp((-cfg.epsilon + 1j * cfg.outer_frequency) * t)


def _retarded_integrand(cfg: TransitionConfig, inner_lower: float):
    q = cfg.eta - 1j * cfg.beta

    def fn(t):
        inner = np.exp(q * (t - cfg.rho))
        if inner_lower != -math.inf:
            inner = inner - np.exp(q * inner_lower)
        return _outer(cfg, t) * inner / q

    return fn


def retarded_amplitude(cfg: TransitionConfig, mode: str = "analytic", inner_lower: float = -math.inf) -> complex:
    """Retarded double integral, inner t' over (inner_lower, t - rho].

    A finite ``inner_lower`` is only supported in numeric mode.
    """
    _check_mode(mode)
    if mode == "analytic":
        if inner_lower != -math.inf:
            raise DomainError("analytic mode covers the inner lower limit -inf only")
        q = cfg.eta - 1j * cfg.beta
        return complex(np.exp(-q * cfg.rho) / (q * (cfg.epsilon - cfg.eta - 1j * cfg.delta)))
    return _gauss(_retarded_integrand(cfg, inner_lower), 0.0, cfg.t_max, _panel_width(cfg))


def advanced_amplitude(cfg: TransitionConfig, mode: str = "analytic") -> complex:
    """Advanced double integral, inner t' over [t + rho, inf)."""
    _check_mode(mode)
    p = cfg.eta + 1j * cfg.beta
    if mode == "analytic":
        return complex(np.exp(-p * cfg.rho) / (p * (cfg.epsilon + cfg.eta - 1j * cfg.delta)))

    def fn(t):
        return _outer(cfg, t) * np.exp(-p * (t + cfg.rho)) / p

    return _gauss(fn, 0.0, cfg.t_max, _panel_width(cfg))


def epr_amplitude(cfg: TransitionConfig, mode: str = "analytic") -> complex:
    """Retarded amplitude with inner upper limit t, independent of rho."""
    return retarded_amplitude(replace(cfg, rho=0.0), mode)


def _exp_integral(c: complex, a: float, b: float) -> complex:
    return (np.exp(c * b) - np.exp(c * a)) / c


def signal_linked_retarded_amplitude(cfg: TransitionConfig, mode: str = "analytic") -> complex:
    """Retarded amplitude with x and x' signal-linked.

    Inner t' runs over [0, t - rho] and is empty for t < rho; outer t runs
    over [0, t_max]. Returns exactly 0 when rho >= t_max.
    """
    _check_mode(mode)
    lo, hi = cfg.rho, cfg.t_max
    if lo >= hi:
        return 0j
    if mode == "numeric":
        return _gauss(_retarded_integrand(cfg, 0.0), lo, hi, _panel_width(cfg))
    q = cfg.eta - 1j * cfg.beta
    c_outer = -cfg.epsilon + 1j * cfg.outer_frequency
    linked = np.exp(-q * cfg.rho) * _exp_integral(c_outer + q, lo, hi)
    return complex((linked - _exp_integral(c_outer, lo, hi)) / q)


def amplitude(cfg: TransitionConfig, which: str, mode: str = "analytic") -> complex:
    if which == "retarded":
        return retarded_amplitude(cfg, mode)
    if which == "advanced":
        return advanced_amplitude(cfg, mode)
    if which == "signal_linked":
        return signal_linked_retarded_amplitude(cfg, mode)
    raise DomainError(f"unknown variant {which!r}; expected one of {VARIANTS}")


def rounding_floor(cfg: TransitionConfig) -> float:
    """Machine epsilon times the integral of |integrand| of the EPR amplitude on [0, t_max].

    A computed amplitude below this level cannot be told apart from
    cancellation noise.
    """
    fn = _retarded_integrand(replace(cfg, rho=0.0), -math.inf)
    absolute = _gauss(lambda t: np.abs(fn(t)), 0.0, cfg.t_max, _panel_width(cfg)).real
    return float(np.finfo(float).eps * absolute)


def _half_width(deltas: np.ndarray, mags: np.ndarray, i_peak: int) -> float:
    level = mags[i_peak] / math.sqrt(2.0)
    if not level > 0:
        return math.nan

    def crossing(indices):
        prev = i_peak
        for i in indices:
            if mags[i] <= level:
                # linear interpolation between prev (above) and i (below)
                frac = (mags[prev] - level) / (mags[prev] - mags[i])
                return deltas[prev] + frac * (deltas[i] - deltas[prev])
            prev = i
        return None

    right = crossing(range(i_peak + 1, deltas.size))
    left = crossing(range(i_peak - 1, -1, -1))
    widths = [abs(x - deltas[i_peak]) for x in (left, right) if x is not None]
    if not widths:
        return math.nan
    if len(widths) == 1:
        return float(widths[0])
    return float(0.5 * (right - left))


def scan_delta(cfg_base: TransitionConfig, delta_range: tuple[float, float], n_points: int,
               which: str = "retarded", mode: str = "analytic") -> AmplitudeScan:
    """Sweep the detuning by moving E_f and measure the resulting peak.

    ``half_width`` is the distance from the peak to where |A| has dropped by
    sqrt(2), averaged over both sides, with linear interpolation between grid
    points; NaN when the peak is not resolved.
    """
    lo, hi = delta_range
    if n_points < 11:
        raise DomainError("a scan needs at least 11 points")
    if not lo <= 0 <= hi or lo == hi:
        raise DomainError("the detuning interval must contain 0")
    deltas = np.linspace(lo, hi, int(n_points))
    mags = np.array([abs(amplitude(cfg_base.with_delta(float(d)), which, mode)) for d in deltas])
    i_peak = int(np.argmax(mags))
    return AmplitudeScan(
        which=which,
        deltas=deltas,
        magnitudes=mags,
        peak_delta=float(deltas[i_peak]),
        peak_magnitude=float(mags[i_peak]),
        half_width=_half_width(deltas, mags, i_peak),
    )


def _schedule(cfg: TransitionConfig, gap: float, schedule: str) -> TransitionConfig:
    if schedule == "proportional":
        # eta = eps / 2, so eps - eta = gap
        return cfg.with_regulators(2.0 * gap, gap)
    if schedule == "fixed_eps":
        return cfg.with_regulators(cfg.epsilon, cfg.epsilon - gap)
    raise DomainError(f"unknown schedule {schedule!r}")


def regulator_sweep(cfg_base: TransitionConfig, gaps=(1e-1, 1e-2, 1e-3), schedule: str = "proportional") -> dict:
    """Peak magnitude |A(Delta=0)| of both variants as eps - eta shrinks.

    Schedules: ``proportional`` keeps eta = eps / 2; ``fixed_eps`` holds
    eps and moves eta towards it. Slopes are least-squares fits of
    log|A(0)| against log(eps - eta).
    """
    gaps = np.asarray(gaps, dtype=float)
    cfg0 = cfg_base.with_delta(0.0)
    peaks = {"retarded": [], "advanced": []}
    for g in gaps:
        cfg = _schedule(cfg0, float(g), schedule)
        peaks["retarded"].append(abs(retarded_amplitude(cfg)))
        peaks["advanced"].append(abs(advanced_amplitude(cfg)))
    slopes = {k: float(np.polyfit(np.log(gaps), np.log(v), 1)[0]) for k, v in peaks.items()}
    diff = slopes["retarded"] - slopes["advanced"]
    if abs(diff) < 0.05:
        stronger = "comparable"
    else:
        stronger = "retarded" if diff < 0 else "advanced"
    return {
        "schedule": schedule,
        "gaps": gaps.tolist(),
        "peak_retarded": peaks["retarded"],
        "peak_advanced": peaks["advanced"],
        "slope_retarded": slopes["retarded"],
        "slope_advanced": slopes["advanced"],
        "stronger_growth": stronger,
    }
