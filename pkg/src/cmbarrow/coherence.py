"""Second-order coherence diagnostics for correlated two-photon absorption."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .errors import DomainError
from .radiometry import photon_number_density

DEFAULT_PHASE_THRESHOLD = 0.1
DEFAULT_DENSITY_MARGIN = 1e3


@dataclass(frozen=True)
class CoherenceReport:
    phase_gap: float
    threshold: float
    satisfied: bool

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class DensityRatioReport:
    photon_density: float
    absorber_density: float
    ratio: float
    margin: float
    satisfied: bool

    def to_dict(self) -> dict:
        return asdict(self)


def phase_gap(nu: float, delta_t: float, threshold: float = DEFAULT_PHASE_THRESHOLD) -> CoherenceReport:
    """Phase difference 2 pi nu dt between two absorption events.

    ``nu`` in Hz, ``delta_t`` in seconds. The condition counts as satisfied
    when the gap is strictly below ``threshold``.
    """
    if not (math.isfinite(nu) and nu > 0):
        raise DomainError(f"frequency must be > 0, got {nu!r}")
    if not (math.isfinite(delta_t) and delta_t >= 0):
        raise DomainError(f"time gap must be >= 0, got {delta_t!r}")
    gap = 2.0 * math.pi * nu * delta_t
    return CoherenceReport(gap, float(threshold), gap < threshold)


def density_margin(T: float, absorber_density: float, margin: float = DEFAULT_DENSITY_MARGIN) -> DensityRatioReport:
    """Compare the blackbody photon density at ``T`` with an absorber density (m^-3)."""
    if not (math.isfinite(T) and T > 0):
        raise DomainError(f"temperature must be > 0 K, got {T!r}")
    if not (math.isfinite(absorber_density) and absorber_density > 0):
        raise DomainError(f"absorber density must be > 0, got {absorber_density!r}")
    n_gamma = photon_number_density(T)
    ratio = n_gamma / absorber_density
    return DensityRatioReport(n_gamma, float(absorber_density), ratio, float(margin), ratio > margin)
