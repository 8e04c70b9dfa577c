"""Experiment suites shared by the CLI, scripts and the acceptance tests."""

from __future__ import annotations

import numpy as np

from . import arrow
from . import nonlocal_lattice as nl

COUPLINGS = (1e-2, 5e-3, 2.5e-3)


def gauge_suite(lat: nl.Lattice, seed: int = 0, trials: int = 100, couplings=COUPLINGS) -> dict:
    """Invariance, necessity and covariance checks on seeded random kernels.

    Each trial draws a potential and a gauge kernel from one generator seeded
    with ``seed``. Commutator residuals are maxima over all index pairs.
    """
    rng = np.random.default_rng(seed)
    s = nl.reference_modulation(lat)
    pairs = [(0, 0), (0, 1), (1, 0), (1, 1)]
    rows = []
    for _ in range(trials):
        A = nl.random_potential(lat, rng)
        Lam = nl.random_kernel(lat, rng)
        rows.append({
            "gauge_standard": nl.gauge_invariance_residual(lat, A, Lam),
            "gauge_broken": nl.gauge_invariance_residual(lat, A, Lam, s),
            "commutator_standard": max(nl.commutator_residual(lat, Lam, m, n) for m, n in pairs),
            "commutator_broken": max(nl.commutator_residual(lat, Lam, m, n, s) for m, n in pairs),
        })

    phi = nl.random_field(lat, rng)
    A = nl.random_potential(lat, rng)
    Lam = nl.random_kernel(lat, rng)
    cov = [nl.covariance_residual(lat, phi, A, Lam, e) for e in couplings]
    slope = float(np.polyfit(np.log(couplings), np.log(cov), 1)[0])

    def col(key):
        return [r[key] for r in rows]

    return {
        "lattice": {"n_t": lat.n_t, "n_z": lat.n_z, "h_t": lat.h_t, "h_z": lat.h_z},
        "seed": seed,
        "trials": trials,
        "max_gauge_standard": max(col("gauge_standard")),
        "max_commutator_standard": max(col("commutator_standard")),
        "min_gauge_broken": min(col("gauge_broken")),
        "min_commutator_broken": min(col("commutator_broken")),
        "covariance": {"couplings": list(couplings), "residuals": cov, "slope": slope},
        "per_trial": rows,
    }


def arrow_scan_table(cfg: arrow.TransitionConfig, delta_range, n_points: int, mode: str = "analytic") -> dict:
    """Scans of all three variants on a shared detuning grid."""
    scans = {w: arrow.scan_delta(cfg, delta_range, n_points, w, mode) for w in arrow.VARIANTS}
    return scans


def arrow_summary(cfg: arrow.TransitionConfig, scans: dict, variant: str) -> dict:
    gap = cfg.epsilon - cfg.eta
    gaps = (gap, gap / 10.0, gap / 100.0)
    return {
        "variant": variant,
        "peak_delta": scans[variant].peak_delta,
        "peak_magnitude": scans[variant].peak_magnitude,
        "half_width": scans[variant].half_width,
        "width_over_gap": scans[variant].half_width / gap,
        "variants": {w: s.summary() for w, s in scans.items()},
        "scaling": {
            "proportional": arrow.regulator_sweep(cfg, gaps, "proportional"),
            "fixed_eps": arrow.regulator_sweep(cfg, gaps, "fixed_eps"),
        },
        "rounding_floor": arrow.rounding_floor(cfg),
    }
