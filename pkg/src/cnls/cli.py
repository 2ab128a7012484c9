"""Command-line surface: every module exposed with reproducible file-based
outputs.

Exit codes: 0 success, 1 invariant failure, 2 usage error.  CSV bodies use
17-significant-digit decimals so identical flags produce byte-identical
files; each --out run writes a manifest.json next to its data.
"""

from __future__ import annotations

import argparse
import datetime
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .dynamics import Perturbation, SimConfig, run_experiment
from .moments import PhysParams, moments, moment_printed
from .numerics import NumericsError, QuadratureSpec
from .spectrum import classify
from .variational import MollifierSpec, petviashvili_solve
from .waves import (pohozaev_check, sobolev_constant,
                    sobolev_constant_printed_check, soliton_profile)


class UsageError(Exception):
    pass


def _fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, (bool, int, np.integer)):
        return str(int(x))
    return f"{float(x):.17g}"


def _parse_range(text: str) -> np.ndarray:
    """Inclusive range `lo:hi:count`."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"range must be lo:hi:count, got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as e:
        raise UsageError(f"bad range {text!r}: {e}") from None
    if count < 1 or (count == 1 and lo != hi) or hi < lo:
        raise UsageError(f"bad range {text!r}")
    return np.linspace(lo, hi, count)


def _params_from(args) -> PhysParams:
    try:
        return PhysParams(n=args.n, s=args.s, omega=args.omega,
                          sigma=getattr(args, "sigma", 1.0))
    except NumericsError as e:
        raise UsageError(str(e)) from None


def _write_manifest(out_dir: Path, command: str, parameters: dict,
                    outputs: list[str], summary: dict) -> None:
    manifest = {
        "command": command,
        "parameters": parameters,
        "code_version": __version__,
        "timestamp": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        "outputs": outputs,
        "summary": summary,
    }
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, indent=2, default=float) + "\n")


def _emit(args, command: str, rows: list[dict], header: list[str],
          parameters: dict, summary: dict, basename: str) -> None:
    """Write rows as CSV or JSON to --out (plus manifest) or stdout."""
    if args.format == "json":
        body = json.dumps({"rows": rows, "summary": summary},
                          indent=2, default=float) + "\n"
        fname = f"{basename}.json"
    else:
        lines = [",".join(header)]
        lines += [",".join(_fmt(r[h]) for h in header) for r in rows]
        body = "\n".join(lines) + "\n"
        fname = f"{basename}.csv"
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / fname).write_text(body)
        _write_manifest(out_dir, command, parameters, [fname], summary)
    else:
        sys.stdout.write(body)


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_constants(args) -> int:
    p = _params_from(args)
    spec = QuadratureSpec(rel_tol=args.tol, abs_tol=args.tol * 1e-2)
    closed = moments(p, method="closed_form")
    quad = moments(p, method="quadrature")
    corrected, printed = sobolev_constant_printed_check(p.n, p.s)
    rows = [
        {"quantity": "m1_closed", "value": closed.m1},
        {"quantity": "m2_closed", "value": closed.m2},
        {"quantity": "m3_closed", "value": closed.m3},
        {"quantity": "m1_quadrature", "value": quad.m1},
        {"quantity": "m2_quadrature", "value": quad.m2},
        {"quantity": "m3_quadrature", "value": quad.m3},
        {"quantity": "m1_as_printed", "value": moment_printed(1, p)},
        {"quantity": "c2", "value": sobolev_constant(p)},
        {"quantity": "c2_formula_corrected_omega1", "value": corrected},
        {"quantity": "c2_formula_as_printed_omega1", "value": printed},
    ]
    summary = {"m1": closed.m1, "c2": sobolev_constant(p)}
    _emit(args, "constants", rows, ["quantity", "value"],
          vars_of(args), summary, "constants")
    return 0


def cmd_profile(args) -> int:
    p = _params_from(args)
    radii = _parse_range(args.r_range)
    if radii[0] != 0.0:
        radii = np.concatenate([[0.0], radii])
    prof = soliton_profile(radii, p)
    rows = [{"r": r, "phi": v} for r, v in zip(prof.radii, prof.values)]
    summary = {"center_value": prof.center_value, "samples": len(rows)}
    _emit(args, "profile", rows, ["r", "phi"], vars_of(args), summary,
          "profile")
    return 0


def cmd_pohozaev(args) -> int:
    p = _params_from(args)
    rep = pohozaev_check(p, use_quadrature=args.quadrature)
    rows = [
        {"quantity": "l2_mass", "value": rep.l2_mass},
        {"quantity": "homog_seminorm_sq", "value": rep.homog_seminorm_sq},
        {"quantity": "center_pow", "value": rep.center_pow},
        {"quantity": "residual_mass_identity",
         "value": rep.residual_mass_identity},
        {"quantity": "residual_seminorm_identity",
         "value": rep.residual_seminorm_identity},
        {"quantity": "residual_energy_identity",
         "value": rep.residual_energy_identity},
    ]
    worst = max(rep.residual_mass_identity, rep.residual_seminorm_identity,
                rep.residual_energy_identity)
    summary = {"worst_residual": worst}
    _emit(args, "pohozaev", rows, ["quantity", "value"], vars_of(args),
          summary, "pohozaev")
    return 0 if worst < args.tol else 1


def cmd_spectrum(args) -> int:
    p = _params_from(args)
    rep = classify(p, want_unstable_lambda=not args.no_lambda)
    obj = {
        "params": {"n": p.n, "s": p.s, "omega": p.omega, "sigma": p.sigma},
        "c2": rep.c2,
        "mu_minus": rep.mu_minus,
        "mu_plus": rep.mu_plus,
        "lplus_negative_eig": rep.lplus_negative_eig,
        "vk_quantity": rep.vk_quantity,
        "n_L": rep.n_L,
        "n_D": rep.n_D,
        "k_r": rep.k_r,
        "classification": rep.classification,
        "unstable_lambda": rep.unstable_lambda,
    }
    if args.format == "csv":
        rows = [{"field": k, "value": v} for k, v in obj.items()
                if k != "params"]
        _emit(args, "spectrum", rows, ["field", "value"], vars_of(args),
              {"classification": rep.classification}, "spectrum")
    else:
        body = json.dumps(obj, indent=2, default=float) + "\n"
        if args.out:
            out_dir = Path(args.out)
            out_dir.mkdir(parents=True, exist_ok=True)
            (out_dir / "spectrum.json").write_text(body)
            _write_manifest(out_dir, "spectrum", vars_of(args),
                            ["spectrum.json"],
                            {"classification": rep.classification})
        else:
            sys.stdout.write(body)
    return 0


def _map_cell(task):
    n, s, sigma, omega, want_lambda = task
    p = PhysParams(n=n, s=s, omega=omega, sigma=sigma)
    rep = classify(p, want_unstable_lambda=want_lambda)
    return {"s": s, "sigma": sigma, "Q": rep.vk_quantity,
            "classification": rep.classification, "k_r": rep.k_r,
            "unstable_lambda": rep.unstable_lambda}


def cmd_stability_map(args) -> int:
    s_vals = _parse_range(args.s_range)
    sig_vals = _parse_range(args.sigma_range)
    if np.any(s_vals <= args.n / 2):
        raise UsageError(f"requires s > n/2 = {args.n / 2:g} across the range")
    tasks = [(args.n, float(s), float(sig), args.omega, args.with_lambda)
             for s in s_vals for sig in sig_vals]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_map_cell, tasks, chunksize=16))
    else:
        rows = [_map_cell(t) for t in tasks]
    counts = {}
    for r in rows:
        counts[r["classification"]] = counts.get(r["classification"], 0) + 1
    _emit(args, "stability-map", rows,
          ["s", "sigma", "Q", "classification", "k_r", "unstable_lambda"],
          vars_of(args), {"cells": len(rows), **counts}, "stability_map")
    return 0


def _variational_cell(task):
    n, s, omega, sigma, scale = task
    p = PhysParams(n=n, s=s, omega=omega, sigma=sigma)
    r = petviashvili_solve(p, MollifierSpec(scale=scale))
    gap = r.m_N - sobolev_constant(p)
    return {"N": scale, "m_N": r.m_N, "gap": gap,
            "iterations": r.iterations, "residual": r.residual}


def cmd_variational(args) -> int:
    try:
        scales = [float(t) for t in args.scales.split(",")]
    except ValueError as e:
        raise UsageError(f"bad --scales: {e}") from None
    p = _params_from(args)  # validates
    tasks = [(p.n, p.s, p.omega, p.sigma, sc) for sc in scales]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_variational_cell, tasks))
    else:
        rows = [_variational_cell(t) for t in tasks]
    gaps = [r["gap"] for r in rows]
    monotone = all(a > b for a, b in zip(gaps, gaps[1:]))
    _emit(args, "variational", rows,
          ["N", "m_N", "gap", "iterations", "residual"], vars_of(args),
          {"gap_monotone_decreasing": monotone, "c2": sobolev_constant(p)},
          "variational")
    return 0


_SIM_KEYS = {"n": int, "s": float, "omega": float, "sigma": float,
             "half_length": float, "modes": int, "dt": float,
             "t_final": float, "eps": float, "shape": str, "seed": int,
             "sample_every": int}


def _parse_sim_config(path: str) -> dict:
    values = {}
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise UsageError(f"cannot read config: {e}") from None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected `key = value`")
        key, _, val = line.partition("=")
        key, val = key.strip(), val.strip()
        if key not in _SIM_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        try:
            values[key] = _SIM_KEYS[key](val)
        except ValueError:
            raise UsageError(f"{path}:{lineno}: bad value for {key}") from None
    return values


def cmd_simulate(args) -> int:
    if not args.out:
        raise UsageError("simulate requires --out <dir>")
    cfgv = _parse_sim_config(args.config)
    try:
        p = PhysParams(n=cfgv.get("n", 1), s=cfgv.get("s", 1.0),
                       omega=cfgv.get("omega", 1.0),
                       sigma=cfgv.get("sigma", 1.0))
        pert = Perturbation(eps=cfgv.get("eps", 0.0),
                            shape=cfgv.get("shape", "greens-bump"),
                            seed=cfgv.get("seed", 0))
        cfg = SimConfig(params=p,
                        half_length=cfgv.get("half_length", 40.0),
                        modes=cfgv.get("modes", 1024),
                        dt=cfgv.get("dt", 1e-3),
                        t_final=cfgv.get("t_final", 10.0),
                        perturbation=pert,
                        sample_every=cfgv.get("sample_every", 100))
    except NumericsError as e:
        raise UsageError(str(e)) from None

    series = run_experiment(cfg)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    header = ["t", "mass_drift", "energy_drift", "center_modulus",
              "mod_distance"]
    lines = [",".join(header)]
    for i in range(series.times.size):
        lines.append(",".join(_fmt(v) for v in (
            series.times[i], series.mass_drift[i], series.energy_drift[i],
            series.center_modulus[i], series.mod_distance[i])))
    (out_dir / "series.csv").write_text("\n".join(lines) + "\n")
    summary = {
        "max_mass_drift": float(np.nanmax(series.mass_drift)),
        "max_mod_distance": float(np.max(series.mod_distance)),
    }
    if series.growth_rate is not None:
        summary["growth_rate"] = series.growth_rate
    if series.blow_up_time is not None:
        summary["blow_up_time"] = series.blow_up_time
    _write_manifest(out_dir, "simulate", cfgv, ["series.csv"], summary)
    return 0


def cmd_verify(args) -> int:
    from .verify import run_all
    results = run_all(jobs=args.jobs)
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}")
    body = "\n".join(lines) + "\n"
    sys.stdout.write(body)
    all_ok = all(r.passed for r in results)
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        (out_dir / "verify.txt").write_text(body)
        _write_manifest(out_dir, "verify", vars_of(args), ["verify.txt"],
                        {"passed": sum(r.passed for r in results),
                         "failed": sum(not r.passed for r in results)})
    if not all_ok:
        failing = [r.name for r in results if not r.passed]
        sys.stderr.write(f"invariant failure: {', '.join(failing)}\n")
        return 1
    return 0


def vars_of(args) -> dict:
    return {k: v for k, v in vars(args).items()
            if k not in ("func",) and v is not None}


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        # argparse exits 2 already, but with a usage dump; one line instead
        self.exit(2, f"error: {message}\n")


def _add_common(sub, sigma=True):
    sub.add_argument("--n", type=int, default=1)
    sub.add_argument("--s", type=float, default=1.0)
    sub.add_argument("--omega", type=float, default=1.0)
    if sigma:
        sub.add_argument("--sigma", type=float, default=1.0)


def _global_flags(parser, top_level):
    # accepted both before and after the subcommand; SUPPRESS on the
    # subparser copy so its default cannot clobber a top-level value
    default = (lambda v: v) if top_level else (lambda v: argparse.SUPPRESS)
    parser.add_argument("--format", choices=("csv", "json"),
                        default=default("csv"))
    parser.add_argument("--out", type=str, default=default(None))
    parser.add_argument("--jobs", type=int, default=default(1))
    parser.add_argument("--tol", type=float, default=default(1e-8),
                        help="relative tolerance for residual gates and "
                             "quadrature overrides")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cnls", description=__doc__)
    _global_flags(parser, top_level=True)
    common = _Parser(add_help=False)
    _global_flags(common, top_level=False)
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=lambda **kw: _Parser(
                                    parents=[common], **kw))

    c = sub.add_parser("constants", help="moment integrals and the sharp "
                                         "embedding constant")
    _add_common(c, sigma=False)
    c.set_defaults(func=cmd_constants, sigma=1.0)

    c = sub.add_parser("profile", help="sample the solitary-wave profile")
    _add_common(c)
    c.add_argument("--r-range", type=str, default="0:10:201")
    c.set_defaults(func=cmd_profile)

    c = sub.add_parser("pohozaev", help="identity residual report")
    _add_common(c)
    c.add_argument("--quadrature", action="store_true",
                   help="use the quadrature oracle instead of closed forms")
    c.set_defaults(func=cmd_pohozaev)

    c = sub.add_parser("spectrum", help="spectral stability report")
    _add_common(c)
    c.add_argument("--no-lambda", action="store_true",
                   help="skip the unstable-eigenvalue root search")
    c.set_defaults(func=cmd_spectrum)

    c = sub.add_parser("stability-map", help="classification sweep over "
                                             "(s, sigma)")
    c.add_argument("--n", type=int, default=1)
    c.add_argument("--omega", type=float, default=1.0)
    c.add_argument("--s-range", type=str, required=True)
    c.add_argument("--sigma-range", type=str, required=True)
    c.add_argument("--with-lambda", action="store_true",
                   help="also solve for the unstable eigenvalue per cell")
    c.set_defaults(func=cmd_stability_map)

    c = sub.add_parser("variational", help="mollified minimization "
                                           "convergence study")
    _add_common(c)
    c.add_argument("--scales", type=str, default="4,8,16,32",
                   help="comma-separated mollifier scales N")
    c.set_defaults(func=cmd_variational)

    c = sub.add_parser("simulate", help="split-step time integration")
    c.add_argument("--config", type=str, required=True)
    c.set_defaults(func=cmd_simulate)

    c = sub.add_parser("verify", help="run the full invariant suite")
    c.set_defaults(func=cmd_verify)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except NumericsError as e:
        sys.stderr.write(f"error: {e}\n")
        return 2
    except Exception as e:  # invariant / numerical failure
        sys.stderr.write(f"failure: {type(e).__name__}: {e}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
