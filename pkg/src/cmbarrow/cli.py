"""Command-line front end.

Every subcommand prints a JSON run report (or writes it to ``--out``) and,
where it produces bulk arrays, also writes them as CSV to ``--csv``.

Exit codes: 0 success, 1 usage/domain/validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import arrow, coherence, distortion, radiometry, suites
from .constants import GHZ, PS
from .errors import DomainError
from .io import (
    dumps_report,
    format_spectrum,
    load_spectrum,
    make_report,
    parameters_digest,
    sha256_bytes,
)
from .nonlocal_lattice import Lattice

COMMANDS = ("spectrum", "distort", "synth", "fit", "coherence", "gauge-check", "arrow-scan")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.format_usage()}{self.prog}: error: {message}")


def _grid_spec(text: str) -> tuple[float, float, int]:
    try:
        lo, hi, n = text.split(":")
        return float(lo), float(hi), int(n)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi:n, got {text!r}") from None


def _bounds_spec(text: str) -> tuple[float, float]:
    try:
        lo, hi = text.split(":")
        return float(lo), float(hi)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}") from None


def _lattice_spec(text: str) -> tuple[int, int]:
    try:
        nt, nz = text.lower().split("x")
        return int(nt), int(nz)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected NtxNz, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cmbarrow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", parser_class=_Parser, required=True)

    def common(p):
        p.add_argument("--out", type=Path, help="write the JSON report here instead of stdout")

    def bulk(p):
        p.add_argument("--csv", type=Path, help="write bulk arrays as CSV")

    def grid(p):
        p.add_argument("--grid", type=_grid_spec, default=(30.0, 600.0, 100),
                       help="linear frequency grid lo:hi:n in GHz (default 30:600:100)")

    p = sub.add_parser("spectrum", help="Planck spectrum samples")
    p.add_argument("--temp-k", type=float, required=True)
    grid(p), bulk(p), common(p)

    p = sub.add_parser("distort", help="distorted spectrum G = E - alpha E(nu/2)")
    p.add_argument("--temp-k", type=float, required=True)
    p.add_argument("--alpha", type=float, required=True)
    grid(p), bulk(p), common(p)

    p = sub.add_parser("synth", help="seeded noisy observation of the distorted spectrum")
    p.add_argument("--temp-k", type=float, required=True)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--noise-rel", type=float, default=0.01)
    p.add_argument("--seed", type=int, default=0)
    grid(p), bulk(p), common(p)

    p = sub.add_parser("fit", help="fit a spectrum file")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--model", choices=("planck", "distortion"), default="distortion")
    p.add_argument("--t-bounds", type=_bounds_spec, default=distortion.DEFAULT_BOUNDS.T)
    p.add_argument("--alpha-bounds", type=_bounds_spec, default=distortion.DEFAULT_BOUNDS.alpha)
    common(p)

    p = sub.add_parser("coherence", help="phase-gap and density-ratio criteria")
    p.add_argument("--freq-ghz", type=float, required=True)
    p.add_argument("--dt-ps", type=float, required=True)
    p.add_argument("--threshold", type=float, default=coherence.DEFAULT_PHASE_THRESHOLD)
    p.add_argument("--temp-k", type=float)
    p.add_argument("--absorber-density", type=float, help="m^-3")
    p.add_argument("--margin", type=float, default=coherence.DEFAULT_DENSITY_MARGIN)
    common(p)

    p = sub.add_parser("gauge-check", help="non-local gauge invariance suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--lattice", type=_lattice_spec, default=(16, 16))
    p.add_argument("--trials", type=int, default=100)
    common(p)

    p = sub.add_parser("arrow-scan", help="retarded/advanced/signal-linked detuning scan")
    p.add_argument("--eps", type=float, default=0.02)
    p.add_argument("--eta", type=float, default=0.01)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--delta", type=_grid_spec, default=(-1.0, 1.0, 2001))
    p.add_argument("--variant", choices=arrow.VARIANTS, default="retarded")
    p.add_argument("--t-max", type=float, help="outer window (default 50/eps)")
    p.add_argument("--e-i", type=float, default=1.0)
    p.add_argument("--omega", type=float, default=0.5)
    p.add_argument("--omega-prime", type=float, default=0.5)
    p.add_argument("--mode", choices=("analytic", "numeric"), default="analytic")
    bulk(p), common(p)
    return parser


# -- subcommands -----------------------------------------------------------


def _grid_from(args) -> radiometry.SpectralGrid:
    lo, hi, n = args.grid
    return radiometry.linear_grid(lo * GHZ, hi * GHZ, n)


def _spectrum_results(samples, args) -> dict:
    text = format_spectrum(samples)
    if args.csv is not None:
        args.csv.write_text(text)
    return {
        "n_points": len(samples),
        "freq_ghz": (samples.frequencies / GHZ).tolist(),
        "intensity": samples.values.tolist(),
        "sigma": None if samples.sigmas is None else samples.sigmas.tolist(),
        "csv": None if args.csv is None else str(args.csv),
        "csv_sha256": sha256_bytes(text.encode()),
    }


def _cmd_spectrum(args):
    params = {"temp_k": args.temp_k, "grid_ghz": list(args.grid)}
    samples = distortion.distorted_spectrum(_grid_from(args), distortion.DistortionModel(args.temp_k, 0.0))
    return params, _spectrum_results(samples, args), {}, None


def _cmd_distort(args):
    params = {"temp_k": args.temp_k, "alpha": args.alpha, "grid_ghz": list(args.grid)}
    samples = distortion.distorted_spectrum(_grid_from(args), distortion.DistortionModel(args.temp_k, args.alpha))
    return params, _spectrum_results(samples, args), {}, None


def _cmd_synth(args):
    params = {"temp_k": args.temp_k, "alpha": args.alpha, "noise_rel": args.noise_rel,
              "grid_ghz": list(args.grid), "generator": "numpy.random.default_rng(PCG64).standard_normal"}
    model = distortion.DistortionModel(args.temp_k, args.alpha)
    samples = distortion.synthesize_observation(model, _grid_from(args), args.noise_rel, args.seed)
    return params, _spectrum_results(samples, args), {"noise": args.seed}, None


def _cmd_fit(args):
    data = args.input.read_bytes()
    samples = load_spectrum(args.input)
    params = {"input": str(args.input), "model": args.model,
              "t_bounds": list(args.t_bounds), "alpha_bounds": list(args.alpha_bounds)}
    if args.model == "planck":
        result = distortion.fit_planck_temperature(samples, tuple(args.t_bounds))
    else:
        bounds = distortion.Bounds(T=tuple(args.t_bounds), alpha=tuple(args.alpha_bounds))
        result = distortion.fit_distortion(samples, bounds)
    return params, result.to_dict(), {}, sha256_bytes(data)


def _cmd_coherence(args):
    params = {"freq_ghz": args.freq_ghz, "dt_ps": args.dt_ps, "threshold": args.threshold,
              "temp_k": args.temp_k, "absorber_density": args.absorber_density, "margin": args.margin}
    results = {"phase": coherence.phase_gap(args.freq_ghz * GHZ, args.dt_ps * PS, args.threshold).to_dict()}
    if (args.temp_k is None) != (args.absorber_density is None):
        raise DomainError("--temp-k and --absorber-density must be given together")
    if args.temp_k is not None:
        results["density"] = coherence.density_margin(args.temp_k, args.absorber_density, args.margin).to_dict()
    return params, results, {}, None


def _cmd_gauge_check(args):
    nt, nz = args.lattice
    if args.trials < 1:
        raise DomainError("--trials must be >= 1")
    lat = Lattice.unit_box(nt, nz)
    params = {"lattice": f"{nt}x{nz}", "trials": args.trials, "modulation": "1 + 0.5 sin(2 pi t / L_t)"}
    report = suites.gauge_suite(lat, args.seed, args.trials)
    report["passed"] = {
        "invariance": report["max_gauge_standard"] <= 1e-12 and report["max_commutator_standard"] <= 1e-12,
        "necessity": report["min_gauge_broken"] >= 1e-3 and report["min_commutator_broken"] >= 1e-3,
        "covariance_order": abs(report["covariance"]["slope"] - 2.0) <= 0.1,
    }
    return params, report, {"kernels": args.seed}, None


def _cmd_arrow_scan(args):
    t_max = args.t_max if args.t_max is not None else 50.0 / args.eps
    base = arrow.TransitionConfig(E_i=args.e_i, omega=args.omega, omega_prime=args.omega_prime,
                                  rho=args.rho, epsilon=args.eps, eta=args.eta, t_max=t_max)
    lo, hi, n = args.delta
    scans = suites.arrow_scan_table(base, (lo, hi), n, args.mode)
    params = {"config": base.to_dict(), "delta": [lo, hi, n], "variant": args.variant, "mode": args.mode}

    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["delta", "magnitude_retarded", "magnitude_advanced", "magnitude_signal_linked"])
    for i, d in enumerate(scans["retarded"].deltas):
        writer.writerow(["%.17g" % d] + ["%.17g" % scans[w].magnitudes[i] for w in arrow.VARIANTS])
    text = buf.getvalue()
    if args.csv is not None:
        args.csv.write_text(text)
    results = suites.arrow_summary(base, scans, args.variant)
    results["csv"] = None if args.csv is None else str(args.csv)
    results["csv_sha256"] = sha256_bytes(text.encode())
    return params, results, {}, None


_HANDLERS = {
    "spectrum": _cmd_spectrum,
    "distort": _cmd_distort,
    "synth": _cmd_synth,
    "fit": _cmd_fit,
    "coherence": _cmd_coherence,
    "gauge-check": _cmd_gauge_check,
    "arrow-scan": _cmd_arrow_scan,
}


def dispatch(argv) -> tuple[int, dict | None, str]:
    """Run one command. Returns (exit code, report or None, error text)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return 1, None, str(exc)
    try:
        params, results, seeds, digest = _HANDLERS[args.command](args)
    except DomainError as exc:
        return 1, None, f"error: {exc}"
    except OSError as exc:
        return 2, None, f"I/O error: {exc}"
    except ValueError as exc:
        return 1, None, f"error: {exc}"
    report = make_report(
        args.command, params, results, seeds,
        input_digest=digest if digest is not None else parameters_digest(params),
        timestamp=datetime.now(timezone.utc).isoformat(),
    )
    text = dumps_report(report)
    if args.out is not None:
        try:
            args.out.write_text(text)
        except OSError as exc:
            return 2, report, f"I/O error: {exc}"
    else:
        sys.stdout.write(text)
    return 0, report, ""


def main(argv=None) -> int:
    code, _, err = dispatch(sys.argv[1:] if argv is None else argv)
    if err:
        print(err, file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
