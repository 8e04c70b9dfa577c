"""Recover (T, alpha) from seeded synthetic observations at several noise levels."""

import argparse

from cmbarrow.distortion import DistortionModel, fit_distortion, fit_planck_temperature, synthesize_observation
from cmbarrow.radiometry import linear_grid


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--temp-k", type=float, default=2.725)
    ap.add_argument("--alpha", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=42)
    args = ap.parse_args()

    grid = linear_grid(30e9, 600e9, 100)
    model = DistortionModel(args.temp_k, args.alpha)
    print(f"{'noise':>8} {'T_fit':>12} {'alpha_fit':>12} {'T_planck_only':>14} {'resid':>10}")
    for noise in (0.0, 0.001, 0.01, 0.05):
        obs = synthesize_observation(model, grid, noise, args.seed)
        fit = fit_distortion(obs)
        planck = fit_planck_temperature(obs)
        print(f"{noise:8.3f} {fit.params.T:12.6f} {fit.params.alpha:12.6f} "
              f"{planck.params.T:14.6f} {fit.residual_norm:10.3e}")


if __name__ == "__main__":
    main()
