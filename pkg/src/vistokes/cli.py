"""Command-line driver: simulate fringes, extract visibilities, reconstruct.

Exit codes: 0 success, 1 usage or config error, 2 infeasible environment
triple (slack printed to stderr), 3 fringe-fit failure, 4 scenario mismatch
or data inconsistent with the requested scenario.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .config import ConfigError, RunConfig, dump_json, load_config, write_json
from .environment import InfeasibleTripleError, random_feasible_triple, embed
from .fringes import FitError, fit, read_fringe_csv, write_fringe_csv
from .interferometer import IdlerPrep, analytic_visibilities_mixed
from .pipeline import extract_visibilities, simulate_fringes
from .polarization import BASIS_LABELS, BasisVisibilities
from .reconstruct import (
    InfeasibleDataError,
    Scenario,
    ScenarioMismatchError,
    enumerate_consistent_states,
    reconstruct_hv_asymmetric,
    reconstruct_pure,
    reconstruct_symmetric,
)
from .stokes import (
    InconsistentVisibilitiesError,
    bounds_check,
    consistency_ball,
    identities_check,
    standard_stokes,
    visibility_ellipsoid,
    visibility_stokes,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE_ENV = 2
EXIT_FIT_FAILURE = 3
EXIT_SCENARIO_MISMATCH = 4


class _Parser(argparse.ArgumentParser):
    """argparse variant that exits with the artifact's usage code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="vistokes",
        description="Tomography of undetected photons from fringe visibilities.",
    )
    parser.add_argument("--version", action="version", version=f"vistokes {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="synthesize the six MUB-round fringes")
    p_sim.add_argument("--config", required=True, help="TOML run config")
    p_sim.add_argument("--out-dir", default=None, help="override outputs.dir")
    p_sim.add_argument("--seed", type=int, default=None, help="override noise.seed")

    p_ext = sub.add_parser("extract", help="fit fringe CSVs to visibilities")
    p_ext.add_argument("csvs", nargs="+", help="six fringe CSV files (H,V,D,A,L,R)")
    p_ext.add_argument("--out-dir", default=".", help="output directory")

    p_rec = sub.add_parser("reconstruct", help="reconstruct a state from visibilities")
    p_rec.add_argument("visibilities", help="visibilities JSON from extract")
    p_rec.add_argument("--scenario", required=True,
                       choices=[s.value for s in Scenario])
    p_rec.add_argument("--which", choices=["H", "V"], default="H",
                       help="coherent polarization for hv-asymmetric")
    p_rec.add_argument("--transmission", type=float, default=1.0,
                       help="measured transmission divided out before squaring")
    p_rec.add_argument("--spread-tol", type=float, default=1e-6,
                       help="allowed spread of the three s0 estimates")
    p_rec.add_argument("--scenario-tol", type=float, default=None,
                       help="scenario gate tolerance (default 1e-6; widen "
                            "for shot-noise data)")
    p_rec.add_argument("--samples", type=int, default=100,
                       help="sample count for unknown-environment")
    p_rec.add_argument("--seed", type=int, default=None)
    p_rec.add_argument("--out-dir", default=".", help="output directory")

    p_chk = sub.add_parser("check", help="identity residuals and geometry stats")
    p_chk.add_argument("--config", required=True, help="TOML run config")
    p_chk.add_argument("--samples", type=int, default=1000,
                       help="random feasible environments to test")
    p_chk.add_argument("--seed", type=int, default=0)
    p_chk.add_argument("--out-dir", default=None, help="override outputs.dir")
    return parser


def _resolve_out_dir(cfg: RunConfig | None, flag_value: str | None) -> Path:
    if flag_value is not None:
        out = Path(flag_value)
    elif cfg is not None:
        out = Path(cfg.out_dir)
    else:
        out = Path(".")
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    out_dir = _resolve_out_dir(cfg, args.out_dir)
    seed = args.seed if args.seed is not None else cfg.seed
    records = simulate_fringes(
        cfg.setup,
        n_points=cfg.grid_points,
        counts=cfg.counts_per_point,
        seed=seed,
    )
    for basis in BASIS_LABELS:
        path = out_dir / f"fringe_{basis}.csv"
        write_fringe_csv(path, records[basis])
        print(path)
    return EXIT_OK


def cmd_extract(args) -> int:
    out_dir = _resolve_out_dir(None, args.out_dir)
    records = {}
    for path in args.csvs:
        rec = read_fringe_csv(path)
        if rec.basis in records:
            raise ConfigError(f"duplicate fringe basis {rec.basis!r} in inputs")
        records[rec.basis] = rec
    missing = [b for b in BASIS_LABELS if b not in records]
    if missing:
        raise ConfigError(f"missing fringes for bases {missing}")

    fits = {}
    errors = {}
    for basis in BASIS_LABELS:
        try:
            fits[basis] = fit(records[basis])
        except FitError as exc:
            errors[basis] = str(exc)

    report: dict = {"schema_version": 1, "errors": errors}
    if not errors:
        summary = extract_visibilities(fits)
        vis = summary.visibilities
        sums = vis.pair_sums()
        report["visibilities"] = {b: vis.as_dict()[b] for b in BASIS_LABELS}
        report["residual_rms"] = summary.residual_rms
        report["phase_offsets"] = summary.phase_offsets
        report["unit_violations"] = summary.unit_violations
        report["s0_estimates"] = {"HV": sums[0], "DA": sums[1], "LR": sums[2]}
        report["s0_spread"] = max(sums) - min(sums)
    write_json(out_dir / "visibilities.json", report)
    print(out_dir / "visibilities.json")
    if errors:
        for basis, message in errors.items():
            print(f"fit failed for {basis}: {message}", file=sys.stderr)
        return EXIT_FIT_FAILURE
    return EXIT_OK


def _read_visibilities_json(path) -> BasisVisibilities:
    import json

    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise ConfigError(f"visibilities file not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON: {exc}") from exc
    if data.get("errors"):
        raise ConfigError(f"{path} records fit errors; re-run extract")
    table = data.get("visibilities")
    if not isinstance(table, dict):
        raise ConfigError(f"{path}: missing visibilities table")
    missing = [b for b in BASIS_LABELS if b not in table]
    if missing:
        raise ConfigError(f"{path}: missing visibilities {missing}")
    try:
        return BasisVisibilities(**{b.lower(): float(table[b]) for b in BASIS_LABELS})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{path}: bad visibility value: {exc}") from exc


def cmd_reconstruct(args) -> int:
    out_dir = _resolve_out_dir(None, args.out_dir)
    vis = _read_visibilities_json(args.visibilities)
    if not 0.0 < args.transmission <= 1.0:
        raise ConfigError("--transmission must lie in (0, 1]")
    vs = visibility_stokes(vis, transmission=args.transmission,
                           spread_tol=args.spread_tol)
    scenario = Scenario(args.scenario)
    report: dict = {
        "schema_version": 1,
        "stokes": {"s0": vs.s0, "sx": vs.sx, "sy": vs.sy, "sz": vs.sz,
                   "spread": vs.spread, "norm_residual": vs.norm_residual,
                   "transmission": vs.transmission},
    }
    if scenario is Scenario.UNKNOWN_ENVIRONMENT:
        samples = enumerate_consistent_states(vs, samples=args.samples,
                                              seed=args.seed)
        ball = consistency_ball(vs)
        report["ball"] = {
            "center": list(ball.center.as_array()),
            "radius": ball.radius,
            "degenerate": ball.degenerate,
        }
        report["samples"] = [
            {
                "bloch": {"x": s.bloch.x, "y": s.bloch.y, "z": s.bloch.z},
                "alpha": s.alpha,
                "beta": s.beta,
                "xi": s.xi,
                "q": s.triple.q,
                "m_h": s.triple.m_h,
                "m_v": s.triple.m_v,
                "delta_phi": s.triple.delta_phi,
            }
            for s in samples
        ]
    else:
        gate_kwargs = {}
        if args.scenario_tol is not None:
            gate_kwargs["tol"] = args.scenario_tol
        if scenario is Scenario.PURE_COHERENT:
            result = reconstruct_pure(vs, **gate_kwargs)
        elif scenario is Scenario.HV_ASYMMETRIC:
            result = reconstruct_hv_asymmetric(vs, which=args.which, **gate_kwargs)
            report["which"] = args.which
        else:
            result = reconstruct_symmetric(vs, **gate_kwargs)
        report["result"] = result.to_json_dict()
    write_json(out_dir / "state.json", report)
    print(out_dir / "state.json")
    return EXIT_OK


def cmd_check(args) -> int:
    cfg = load_config(args.config)
    out_dir = _resolve_out_dir(cfg, args.out_dir)
    if args.samples <= 0:
        raise ConfigError("--samples must be positive")
    setup = cfg.setup

    vis = analytic_visibilities_mixed(setup)
    vs = visibility_stokes(vis, transmission=setup.transmission, spread_tol=1e-9)
    residuals = identities_check(vis, transmission=setup.transmission)

    rng = np.random.default_rng(args.seed)
    idler = setup.idler
    counts = {"ball": 0, "ellipsoid": 0, "purity_upper": 0,
              "purity_lower": 0, "s0_upper": 0}
    worst = math.inf
    for _ in range(args.samples):
        triple = random_feasible_triple(rng)
        env = embed(triple, dim=3)
        sampled = IdlerPrep(idler.alpha, idler.beta, idler.xi, env)
        r_vec = standard_stokes(sampled.reduced_density())
        sample_vs = visibility_stokes(
            analytic_visibilities_mixed(replace(setup, idler=sampled)),
            transmission=setup.transmission, spread_tol=1e-9)
        report = bounds_check(r_vec, sample_vs)
        ellipsoid = visibility_ellipsoid(r_vec)
        if report.ball_margin < -1e-10:
            counts["ball"] += 1
        if not ellipsoid.contains(sample_vs.vector):
            counts["ellipsoid"] += 1
        if report.purity_upper_margin < -1e-10:
            counts["purity_upper"] += 1
        if math.isfinite(report.purity_lower_margin) and report.purity_lower_margin < -1e-10:
            counts["purity_lower"] += 1
        if report.s0_upper_margin < -1e-10:
            counts["s0_upper"] += 1
        margins = [report.ball_margin, report.purity_upper_margin,
                   report.s0_upper_margin]
        if math.isfinite(report.purity_lower_margin):
            margins.append(report.purity_lower_margin)
        worst = min(worst, min(margins))

    report = {
        "schema_version": 1,
        "stokes": {"s0": vs.s0, "sx": vs.sx, "sy": vs.sy, "sz": vs.sz},
        "identity_residuals": {
            "sum_squares": residuals.sum_squares,
            "sum_fourth": residuals.sum_fourth,
            "pair_products": residuals.pair_products,
        },
        "norm_residual": vs.norm_residual,
        "geometry": {
            "samples": args.samples,
            "violations": counts,
            "worst_margin": worst,
        },
    }
    write_json(out_dir / "check.json", report)
    print(out_dir / "check.json")
    if any(counts.values()):
        print("geometry violations detected", file=sys.stderr)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "simulate":
            return cmd_simulate(args)
        if args.command == "extract":
            return cmd_extract(args)
        if args.command == "reconstruct":
            return cmd_reconstruct(args)
        if args.command == "check":
            return cmd_check(args)
        parser.error(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleTripleError as exc:
        print(f"infeasible environment: {exc}", file=sys.stderr)
        print(f"slack = {exc.slack}", file=sys.stderr)
        return EXIT_INFEASIBLE_ENV
    except FitError as exc:
        print(f"fit failure: {exc}", file=sys.stderr)
        return EXIT_FIT_FAILURE
    except (ScenarioMismatchError, InfeasibleDataError,
            InconsistentVisibilitiesError) as exc:
        print(f"scenario mismatch: {exc}", file=sys.stderr)
        return EXIT_SCENARIO_MISMATCH
    except ValueError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


def entrypoint() -> None:
    sys.exit(main())
