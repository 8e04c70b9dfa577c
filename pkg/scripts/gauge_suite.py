"""Run the non-local gauge suite and print its headline residuals."""

import argparse
import time

from cmbarrow.nonlocal_lattice import Lattice
from cmbarrow.suites import gauge_suite


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=16)
    ap.add_argument("--trials", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    t0 = time.perf_counter()
    rep = gauge_suite(Lattice.unit_box(args.n), args.seed, args.trials)
    print(f"lattice {args.n}x{args.n}, {args.trials} trials, {time.perf_counter() - t0:.1f}s")
    for key in ("max_gauge_standard", "max_commutator_standard", "min_gauge_broken", "min_commutator_broken"):
        print(f"  {key:<24} {rep[key]:.3e}")
    cov = rep["covariance"]
    print("  covariance residuals", ", ".join(f"{r:.3e}" for r in cov["residuals"]), f"slope {cov['slope']:.4f}")


if __name__ == "__main__":
    main()
