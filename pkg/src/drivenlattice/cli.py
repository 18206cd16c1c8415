"""Command-line front end.

Subcommands: gamma-scan, propagate, zeros, classify, continuum.  Every
command is deterministic for a given configuration and writes CSV with a
one-line '#' metadata header echoing the full configuration, so each
output file is reproducible on its own.  All physics is in reduced units
(hbar = 1; lattice period d = 1 for the lattice commands, d = 2*pi in the
continuum); no unit conversion happens here.

Exit codes: 0 success, 2 invalid configuration, 3 numeric failure
(window overflow, quadrature non-convergence, wrap-around).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import continuum as ct
from . import model, phases, specialfn, wavepacket
from .phases import QuadratureError
from .wavepacket import WindowOverflowError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3


@dataclass
class RunConfig:
    """One command invocation: everything needed to reproduce its output."""

    command: str
    params: dict = field(default_factory=dict)
    out: str | None = None

    def header(self) -> str:
        echo = json.dumps(self.params, sort_keys=True, default=str)
        return f"# command={self.command} config={echo}"


def _fmt(x) -> str:
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def _write_csv(path: str, config: RunConfig, columns: list, rows) -> None:
    lines = [config.header(), ",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _parse_range(text: str):
    """'lo:hi:n' -> (lo, hi, n)."""
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"range must be lo:hi:n, got {text!r}")
    lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    if not (math.isfinite(lo) and math.isfinite(hi)) or n < 1 or hi < lo:
        raise ValueError(f"range {text!r} is empty or not finite")
    return lo, hi, n


def _parse_grid(text: str):
    """'u0:u1:nu[,v0:v1:nv]' -> (u-range, v-range or None)."""
    parts = text.split(",")
    if len(parts) == 1:
        return _parse_range(parts[0]), None
    if len(parts) == 2:
        return _parse_range(parts[0]), _parse_range(parts[1])
    raise ValueError(f"grid must be u0:u1:nu[,v0:v1:nv], got {text!r}")


def _load_profile(args) -> model.DriveProfile:
    if getattr(args, "profile", None):
        with open(args.profile) as fh:
            return model.profile_from_dict(json.load(fh))
    return model.Bichromatic.resonant(
        p=args.p, q=args.q, n=args.n, u=args.u, v=args.v, delta=args.delta
    )


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------


def cmd_gamma_scan(args) -> int:
    rc = model.solve_diophantine(args.p, args.q, args.n)
    if not rc.resonant:
        verdict = model.classify_transport(
            Fraction(args.q, args.p), Fraction(args.n, args.p)
        )
        print(
            f"(p={args.p}, q={args.q}, n={args.n}) is not resonant: "
            f"gcd(p, q) does not divide n; verdict: {verdict.value}",
            file=sys.stderr,
        )
        return EXIT_CONFIG
    (u0, u1, nu), vrange = _parse_grid(args.grid)
    us = np.linspace(u0, u1, nu)
    if vrange is None:
        vs = np.array([args.v])
    else:
        v0, v1, nv = vrange
        vs = np.linspace(v0, v1, nv)
    config = RunConfig(
        command="gamma-scan",
        params={
            "p": args.p, "q": args.q, "n": args.n, "g": args.g,
            "delta": args.delta, "grid": args.grid, "v": args.v,
        },
    )
    z = complex(math.cos(rc.p * args.delta), math.sin(rc.p * args.delta))
    pref = 2.0 * args.g * complex(np.exp(1j * rc.N * args.delta))
    rows = []
    for v in vs:
        vals = pref * specialfn.gen_bessel_2d_slice(rc, us, float(v), z)
        for u, val in zip(us, vals):
            rows.append((u, v, val.real, val.imag, abs(val)))
    _write_csv(args.out, config, ["u", "v", "re_gamma", "im_gamma", "abs_gamma"], rows)
    return EXIT_OK


def cmd_propagate(args) -> int:
    profile = _load_profile(args)
    T = model.period(profile)
    if T is None:
        print("profile has no period; cannot sample by periods", file=sys.stderr)
        return EXIT_CONFIG
    coeff = phases.gamma(profile, g=args.g)
    state = wavepacket.gaussian_state(args.sigma, args.kappa0, args.center)
    coh = wavepacket.coherence_params(state)
    n0 = wavepacket.position_mean(state)
    var0 = wavepacket.position_variance(state)
    nsamp = args.periods * args.samples_per_period
    times = [T * i / args.samples_per_period for i in range(nsamp + 1)]
    config = RunConfig(
        command="propagate",
        params={
            "profile": model.profile_to_dict(profile), "g": args.g,
            "sigma": args.sigma, "kappa0": args.kappa0, "center": args.center,
            "periods": args.periods, "samples_per_period": args.samples_per_period,
            "overlay": bool(args.overlay),
        },
    )
    columns = ["t", "mean_n", "var_n", "norm"]
    if args.overlay:
        columns += ["mean_n_closed", "var_n_closed", "gamma_t"]
    snap_rows = []
    rows = []
    for t in times:
        evolved = wavepacket.evolve(state, profile, t, g=args.g)
        row = [
            t,
            wavepacket.position_mean(evolved),
            wavepacket.position_variance(evolved),
            wavepacket.norm(evolved),
        ]
        if args.overlay:
            pp = phases.chi(profile, t, g=args.g)
            row += [
                wavepacket.position_expectation(coh, n0, pp),
                wavepacket.width_evolution(coh, pp, mean0=n0, var0=var0),
                abs(coeff.gamma) * t,
            ]
        rows.append(row)
        if args.snapshots:
            dens = np.abs(evolved.amplitudes) ** 2
            keep = dens > 1e-14
            for l, p in zip(evolved.sites[keep], dens[keep]):
                snap_rows.append((t, int(l), p))
    _write_csv(args.out, config, columns, rows)
    if args.snapshots:
        _write_csv(args.snapshots, config, ["t", "l", "abs2"], snap_rows)
    return EXIT_OK


def cmd_zeros(args) -> int:
    lo, hi, _ = _parse_range(args.range)
    config = RunConfig(
        command="zeros",
        params={
            "family": args.family, "range": args.range, "tol": args.tol,
            "p": args.p, "q": args.q, "n": args.n, "v": args.v, "mu": args.mu,
        },
    )
    asymptotic: list = []
    if args.family == "bichromatic":
        fn = phases.bichromatic_gamma_slice(args.p, args.q, args.n, args.v)
        zeros = phases.find_localization_zeros(fn, lo, hi, tol=args.tol)
        try:
            est = specialfn.asymptotic_zero_estimates(
                abs(args.n), args.v, max(1, len(zeros))
            )
            asymptotic = [u for u in est if lo <= u <= hi]
        except ValueError:
            asymptotic = []
    elif args.family == "mono":
        fn = lambda u: specialfn.bessel_j(args.mu, u)
        zeros = phases.find_localization_zeros(fn, lo, hi, tol=args.tol)
    elif args.family == "flipped":
        # scan variable is s = a*f1*T; gamma vanishes with sin(s/2)
        fn = lambda s: math.sin(0.5 * s)
        zeros = phases.find_localization_zeros(fn, lo, hi, tol=args.tol)
    else:
        print(f"unknown family {args.family!r}", file=sys.stderr)
        return EXIT_CONFIG
    rows = []
    for i, z in enumerate(zeros):
        a = asymptotic[i] if i < len(asymptotic) else float("nan")
        rows.append((i + 1, z, a))
    _write_csv(args.out, config, ["index", "u_zero", "u_asymptotic"], rows)
    return EXIT_OK


def cmd_classify(args) -> int:
    r21 = model.parse_ratio(args.ratio21)
    rb1 = model.parse_ratio(args.ratioB1)
    verdict = model.classify_transport(r21, rb1)
    doc = {
        "ratio21": args.ratio21,
        "ratioB1": args.ratioB1,
        "verdict": verdict.value,
    }
    if isinstance(r21, Fraction) and isinstance(rb1, Fraction):
        p, q = r21.denominator, r21.numerator
        n_frac = rb1 * p
        if n_frac.denominator == 1:
            rc = model.solve_diophantine(p, q, int(n_frac))
            doc["resonance"] = {
                "p": rc.p, "q": rc.q, "n": rc.n,
                "resonant": rc.resonant, "M": rc.M, "N": rc.N,
            }
    print(f"verdict: {verdict.value}")
    print(json.dumps(doc, sort_keys=True))
    return EXIT_OK


def cmd_continuum(args) -> int:
    if args.band_only:
        width = ct.band_structure(args.v0)
        print(json.dumps({"v0": args.v0, "band_width": width}, sort_keys=True))
        return EXIT_OK
    F0 = args.famp
    f_reduced = ct.LATTICE_PERIOD * abs(F0) if F0 != 0.0 else 0.0
    if F0 == 0.0:
        print("--famp must be nonzero (use --band-only for statics)", file=sys.stderr)
        return EXIT_CONFIG
    TB = 2.0 * math.pi / f_reduced
    T = args.drive_periods_per_bloch * TB
    fld = model.Flipped(f1=F0, f2=-F0, a=args.a, T=T)
    grid = ct.ContinuumGrid(
        n_periods=args.domain_periods,
        points_per_period=args.points_per_period,
        dt=TB / args.steps_per_bloch,
    )
    center = args.start_period * ct.LATTICE_PERIOD
    state = ct.lowest_band_packet(
        grid, width=args.width, center=center, k0=args.kappa0, v0=args.v0
    )
    config = RunConfig(
        command="continuum",
        params={
            "famp": F0, "a": args.a, "v0": args.v0,
            "drive_periods_per_bloch": args.drive_periods_per_bloch,
            "periods": args.periods, "domain_periods": args.domain_periods,
            "points_per_period": args.points_per_period,
            "steps_per_bloch": args.steps_per_bloch,
            "width": args.width, "start_period": args.start_period,
            "kappa0": args.kappa0,
        },
    )
    result = ct.split_step_propagate(state, fld, args.periods * TB, v0=args.v0)
    rows = list(zip(result.times, result.mean_x, result.var_x, result.norm))
    _write_csv(args.out, config, ["t", "mean_x", "var_x", "norm"], rows)
    if args.snapshots:
        dens = np.abs(result.state.psi) ** 2
        keep = dens > 1e-14
        snap = list(zip(grid.x[keep], dens[keep]))
        _write_csv(args.snapshots, config, ["x", "abs2"], snap)
    drift = ct.drift_velocity(result.times, result.mean_x)
    print(
        json.dumps(
            {"drift_velocity": drift, "drift_periods_per_bloch": drift * TB / ct.LATTICE_PERIOD},
            sort_keys=True,
        )
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="drivenlattice",
        description="Transport and dynamic localization in driven biased lattices",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    ps = sub.add_parser("gamma-scan", help="tabulate the transport coefficient")
    ps.add_argument("--p", type=int, required=True)
    ps.add_argument("--q", type=int, required=True)
    ps.add_argument("--n", type=int, required=True)
    ps.add_argument("--g", type=float, default=1.0)
    ps.add_argument("--delta", type=float, default=0.0)
    ps.add_argument("--grid", required=True, help="u0:u1:nu[,v0:v1:nv]")
    ps.add_argument("--v", type=float, default=1.0, help="fixed v for slice scans")
    ps.add_argument("--out", required=True)
    ps.set_defaults(func=cmd_gamma_scan)

    pp = sub.add_parser("propagate", help="lattice wave-packet trajectory")
    pp.add_argument("--profile", help="drive profile JSON file")
    pp.add_argument("--p", type=int, default=1)
    pp.add_argument("--q", type=int, default=2)
    pp.add_argument("--n", type=int, default=1)
    pp.add_argument("--u", type=float, default=-4.68)
    pp.add_argument("--v", type=float, default=1.0)
    pp.add_argument("--delta", type=float, default=0.0)
    pp.add_argument("--g", type=float, default=1.0)
    pp.add_argument("--sigma", type=float, default=10.0)
    pp.add_argument("--kappa0", type=float, default=0.0)
    pp.add_argument("--center", type=int, default=0)
    pp.add_argument("--periods", type=int, default=10)
    pp.add_argument("--samples-per-period", type=int, default=8)
    pp.add_argument("--overlay", action="store_true", help="closed-form columns")
    pp.add_argument("--snapshots", help="per-sample density CSV (t,l,abs2)")
    pp.add_argument("--out", required=True)
    pp.set_defaults(func=cmd_propagate)

    pz = sub.add_parser("zeros", help="dynamic-localization points")
    pz.add_argument("--family", choices=["bichromatic", "mono", "flipped"], required=True)
    pz.add_argument("--p", type=int, default=1)
    pz.add_argument("--q", type=int, default=2)
    pz.add_argument("--n", type=int, default=1)
    pz.add_argument("--v", type=float, default=1.0)
    pz.add_argument("--mu", type=int, default=0, help="harmonic for the mono family")
    pz.add_argument("--range", required=True, help="u0:u1:n (n ignored)")
    pz.add_argument("--tol", type=float, default=1e-6)
    pz.add_argument("--out", required=True)
    pz.set_defaults(func=cmd_zeros)

    pc = sub.add_parser("classify", help="transport taxonomy from declared ratios")
    pc.add_argument("--ratio21", required=True, help="'q/p' or 'irrational'")
    pc.add_argument("--ratioB1", required=True, help="'a/b' or 'irrational'")
    pc.set_defaults(func=cmd_classify)

    pq = sub.add_parser("continuum", help="continuum split-step validation run")
    pq.add_argument("--famp", type=float, default=0.0003, help="force amplitude F")
    pq.add_argument("--a", type=float, default=0.5, help="duty fraction")
    pq.add_argument("--v0", type=float, default=0.125)
    pq.add_argument("--drive-periods-per-bloch", type=float, default=1.0)
    pq.add_argument("--periods", type=float, default=4.0, help="run length in Bloch periods")
    pq.add_argument("--domain-periods", type=int, default=512)
    pq.add_argument("--points-per-period", type=int, default=8)
    pq.add_argument("--steps-per-bloch", type=int, default=65536)
    pq.add_argument("--width", type=float, default=15.0 * math.pi)
    pq.add_argument("--start-period", type=float, default=160.0)
    pq.add_argument("--kappa0", type=float, default=0.0)
    pq.add_argument("--band-only", action="store_true", help="print the band width and exit")
    pq.add_argument("--snapshots", help="final density CSV (x,abs2)")
    pq.add_argument("--out", default="-")
    pq.set_defaults(func=cmd_continuum)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (WindowOverflowError, QuadratureError, ct.WrapAroundError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
