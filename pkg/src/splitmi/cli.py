"""Command-line interface: single-shot MI, ratio sweeps, gain tables.

All commands emit CSV (header always included, numbers with 6
significant digits, rows newline-terminated) to stdout or ``--out``.
Exit codes: 0 success, 2 flag/validation error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import analytic
from .channel import ChannelParams, NoiseProfile
from .density import DensityUnderflowError, QuadratureError
from .estimator import EstimatorConfig, estimate_mi, sweep_rho
from .optimize import argmax_mc

__all__ = ["main", "snr_db_to_power", "power_to_snr_db", "DEFAULT_NOISE_ROWS"]

# builtin scenario set for the `table` command: every combination of
# antenna noise {0.01, 1} with rectifier noise {1, 0.1, 0.01, 0.001}
# at unit conversion noise
DEFAULT_NOISE_ROWS = [
    NoiseProfile(0.01, 1.0, 1.0),
    NoiseProfile(0.01, 1.0, 0.1),
    NoiseProfile(0.01, 1.0, 0.01),
    NoiseProfile(0.01, 1.0, 0.001),
    NoiseProfile(1.0, 1.0, 1.0),
    NoiseProfile(1.0, 1.0, 0.1),
    NoiseProfile(1.0, 1.0, 0.01),
    NoiseProfile(1.0, 1.0, 0.001),
]
DEFAULT_POWERS = [10.0, 100.0, 1000.0, 10000.0]


def snr_db_to_power(db: float) -> float:
    """Map an SNR in dB to linear transmit power (unit channel gain)."""
    return 10.0 ** (db / 10.0)


def power_to_snr_db(power: float) -> float:
    db = 10.0 * np.log10(power)
    # exact round trip for powers produced from integer dB values
    snapped = float(np.round(db))
    if snr_db_to_power(snapped) == power:
        return snapped
    return float(db)


def _fmt(x) -> str:
    """One CSV field: 6 significant digits, empty for missing."""
    if x is None:
        return ""
    return f"{float(x):.6g}"


def _row(*fields) -> str:
    return ",".join(_fmt(f) if not isinstance(f, str) else f for f in fields) + "\n"


def _add_scenario_args(p: argparse.ArgumentParser, need_power: bool = True):
    p.add_argument("--sigma-a2", type=float, required=True,
                   help="antenna noise variance (linear)")
    p.add_argument("--sigma-cov2", type=float, required=True,
                   help="CD conversion noise variance (linear)")
    p.add_argument("--sigma-rec2", type=float, required=True,
                   help="ED rectifier noise variance (linear)")
    if need_power:
        g = p.add_mutually_exclusive_group(required=True)
        g.add_argument("--power", type=float, help="transmit power P (linear)")
        g.add_argument("--snr-db", type=float, help="transmit power as 10^(dB/10)")
    p.add_argument("--h-mag", type=float, default=1.0, help="channel magnitude |h|")


def _add_estimator_args(p: argparse.ArgumentParser):
    p.add_argument("--samples", type=int, default=200_000, help="outer sample count")
    p.add_argument("--mixture", type=int, default=4096, help="marginal mixture size")
    p.add_argument("--quad-order", type=int, default=32, help="Gauss-Hermite order")
    p.add_argument("--batches", type=int, default=20, help="batch count for stderr")
    p.add_argument("--seed", type=int, default=42, help="master seed")


def _params(args) -> ChannelParams:
    noise = NoiseProfile(args.sigma_a2, args.sigma_cov2, args.sigma_rec2)
    power = args.power if args.power is not None else snr_db_to_power(args.snr_db)
    return ChannelParams(power=power, h_mag=args.h_mag, noise=noise)


def _config(args) -> EstimatorConfig:
    return EstimatorConfig(n_outer=args.samples, l_mixture=args.mixture,
                           quad_order=args.quad_order, n_batches=args.batches,
                           seed=args.seed)


def _cmd_mi(args, out) -> None:
    params = _params(args)
    if args.mode in ("approx", "both") and args.rho == 0.0:
        raise _UsageError("mode 'approx' requires rho > 0")
    out.write("rho,mi_mc,stderr,mi_approx\n")
    mi_mc = stderr = approx = None
    if args.mode in ("mc", "both"):
        est = estimate_mi(params, args.rho, _config(args))
        mi_mc, stderr = est.bits, est.stderr
    if args.mode in ("approx", "both"):
        approx = analytic.mi_high_snr(params, args.rho)
    out.write(_row(args.rho, mi_mc, stderr, approx))


def _cmd_sweep(args, out) -> None:
    params = _params(args)
    step = args.grid_step
    if step <= 0 or step > 1:
        raise _UsageError("--grid-step must lie in (0, 1]")
    n = int(round(1.0 / step))
    grid = np.minimum(np.arange(n + 1) * step, 1.0)
    results = sweep_rho(params, grid, _config(args))
    out.write("rho,mi_mc,stderr,mi_approx\n")
    for rho, est in results:
        approx = analytic.mi_high_snr(params, rho) if rho > 0 else None
        out.write(_row(rho, est.bits, est.stderr, approx))


def _cmd_table(args, out) -> None:
    if (args.sigma_a2 is None) != (args.sigma_cov2 is None) or \
       (args.sigma_a2 is None) != (args.sigma_rec2 is None):
        raise _UsageError("give all three --sigma-* flags or none")
    if args.sigma_a2 is not None:
        rows = [NoiseProfile(args.sigma_a2, args.sigma_cov2, args.sigma_rec2)]
    else:
        rows = DEFAULT_NOISE_ROWS
    powers = [args.power] if args.power is not None else DEFAULT_POWERS
    header = "sigma_a2,sigma_cov2,sigma_rec2,power,rho_star,g_mi,g_mi_pct,beta"
    if args.mc:
        header += ",rho_star_mc,g_mi_mc"
    out.write(header + "\n")
    for noise in rows:
        beta = analytic.gain_asymptotic(noise).beta
        for power in powers:
            params = ChannelParams(power=power, h_mag=args.h_mag, noise=noise)
            fin = analytic.gain_finite(params)
            fields = [noise.sigma_a2, noise.sigma_cov2, noise.sigma_rec2, power,
                      fin.rho_star, fin.g_mi, fin.g_mi_pct, beta]
            if args.mc:
                cfg = _config(args)
                scan = argmax_mc(params, cfg, np.arange(0.0, 1.0001, 0.05))
                base = estimate_mi(params, 1.0, cfg)
                fields += [scan.rho_star, scan.value - base.bits]
            out.write(_row(*fields))


def _cmd_optimal_rho(args, out) -> None:
    noise = NoiseProfile(args.sigma_a2, args.sigma_cov2, args.sigma_rec2)
    brk = analytic.gain_asymptotic(noise)
    rho_star = analytic.optimal_rho(noise).rho
    out.write("rho_star,regime,upsilon,phi,psi\n")
    ups = None if np.isnan(brk.upsilon) else brk.upsilon
    phi = None if np.isnan(brk.phi) else brk.phi
    out.write(_row(rho_star, brk.regime, ups, phi, brk.psi))


class _UsageError(ValueError):
    pass


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitmi",
        description="Mutual-information analysis of the ED-CD splitting receiver",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mi = sub.add_parser("mi", help="MI at a single splitting ratio")
    _add_scenario_args(p_mi)
    _add_estimator_args(p_mi)
    p_mi.add_argument("--rho", type=float, required=True)
    p_mi.add_argument("--mode", choices=["mc", "approx", "both"], default="both")
    p_mi.set_defaults(func=_cmd_mi)

    p_sw = sub.add_parser("sweep", help="MI over a grid of splitting ratios")
    _add_scenario_args(p_sw)
    _add_estimator_args(p_sw)
    p_sw.add_argument("--grid-step", type=float, default=0.05)
    p_sw.set_defaults(func=_cmd_sweep)

    p_tb = sub.add_parser("table", help="optimal ratios and gains per scenario")
    p_tb.add_argument("--sigma-a2", type=float)
    p_tb.add_argument("--sigma-cov2", type=float)
    p_tb.add_argument("--sigma-rec2", type=float)
    p_tb.add_argument("--power", type=float,
                      help="single power (default: 10, 100, 1000, 10000)")
    p_tb.add_argument("--h-mag", type=float, default=1.0)
    p_tb.add_argument("--mc", action="store_true",
                      help="add Monte-Carlo verification columns")
    _add_estimator_args(p_tb)
    p_tb.set_defaults(func=_cmd_table)

    p_or = sub.add_parser("optimal-rho", help="closed-form optimal splitting ratio")
    _add_scenario_args(p_or, need_power=False)
    p_or.set_defaults(func=_cmd_optimal_rho)

    for p in (p_mi, p_sw, p_tb, p_or):
        p.add_argument("--out", type=str, default=None, help="output path (default stdout)")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.out:
            with open(args.out, "w", newline="") as fh:
                args.func(args, fh)
        else:
            args.func(args, sys.stdout)
    except (_UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DensityUnderflowError, QuadratureError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":
    sys.exit(main())
