"""Peak magnitude of the retarded and advanced amplitudes as the regulator gap closes."""

import argparse

import numpy as np

from cmbarrow.arrow import TransitionConfig, regulator_sweep


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--schedule", choices=("proportional", "fixed_eps"), default="proportional")
    args = ap.parse_args()

    gaps = tuple(np.logspace(-1, -3, 5))
    base = TransitionConfig()
    if args.schedule == "fixed_eps":
        # eta = eps - gap must stay positive for the widest gap
        base = base.with_regulators(2 * max(gaps), max(gaps))
    out = regulator_sweep(base, gaps, args.schedule)
    print(f"schedule={args.schedule}")
    print(f"{'gap':>10} {'|A_ret(0)|':>14} {'|A_adv(0)|':>14}")
    for g, r, a in zip(out["gaps"], out["peak_retarded"], out["peak_advanced"]):
        print(f"{g:10.2e} {r:14.6e} {a:14.6e}")
    print(f"slopes: retarded {out['slope_retarded']:.4f}, advanced {out['slope_advanced']:.4f}, "
          f"stronger growth: {out['stronger_growth']}")


if __name__ == "__main__":
    main()
