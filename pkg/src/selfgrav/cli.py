"""Command-line front end.

Subcommands: scales, metric, coupling, evolve, sweep, verify.
Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 completed with regime warnings.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

import numpy as np

from .config import ScenarioConfig, load_config
from .coupling import compute_couplings
from .errors import ConfigError, DomainError
from .gravity import metric_for_state, stress_energy_source
from .grids import write_field
from .pipeline import (
    SWEEP_COLUMNS,
    build_metric_basis,
    grid_from_config,
    packet_from_config,
    run_sweep,
)
from .scales import RegimeThresholds, check_regime, compute_scales
from .verify import report, run_checks

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_REGIME_WARNING = 3


def _json_default(obj):
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if dataclasses.is_dataclass(obj):
        return dataclasses.asdict(obj)
    if isinstance(obj, np.ndarray):
        raise TypeError("refusing to serialize a full grid into JSON")
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _dump_json(payload: dict, out_path: Path | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
    print(text)
    if out_path is not None:
        out_path.write_text(text + "\n")


def _load(args: argparse.Namespace) -> ScenarioConfig:
    cfg = load_config(args.config)
    if getattr(args, "grid_n", None):
        cfg = dataclasses.replace(cfg, grid_n=args.grid_n).validate()
    return cfg


def _out_dir(args: argparse.Namespace, cfg: ScenarioConfig) -> Path:
    out = Path(args.out) if getattr(args, "out", None) else Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _scales_payload(cfg: ScenarioConfig, t_s: float) -> dict:
    scales = compute_scales(cfg.mass_kg, cfg.size_m, cfg.separation_l0 * cfg.size_m)
    thresholds = RegimeThresholds(cfg.eps_xi, cfg.eps_static, cfg.eps_time)
    regime = check_regime(scales, t_s, thresholds)
    return {
        "scales": dataclasses.asdict(scales),
        "regime_at_t_end": dataclasses.asdict(regime),
        "t_s": t_s,
    }


def cmd_scales(args: argparse.Namespace) -> int:
    cfg = _load(args)
    payload = _scales_payload(cfg, cfg.t_end_s)
    out = _out_dir(args, cfg) if args.out else None
    _dump_json(payload, out / "scales.json" if out else None)
    return EXIT_OK


def cmd_metric(args: argparse.Namespace) -> int:
    cfg = _load(args)
    out = _out_dir(args, cfg)
    packet = packet_from_config(cfg)
    spec = grid_from_config(cfg)
    src = stress_energy_source(packet, cfg.alpha, cfg.beta, spec)
    metric = metric_for_state(packet, cfg.alpha, cfg.beta, spec)
    files = {}
    for name, fld in (
        ("source", src),
        ("h00", metric.h00),
        ("h_spatial_trace", metric.h_spatial_trace),
        ("trace_h", metric.trace_h),
    ):
        bin_path, json_path = write_field(fld, out / name)
        files[name] = {"bin": str(bin_path), "header": str(json_path)}
    payload = {
        "gauge": metric.gauge,
        "grid": {"n": spec.n, "box_l0": spec.box_l0},
        "source_integral": float(np.real(src.integrate())),
        "h00_min": float(np.min(np.real(metric.h00.values))),
        "files": files,
    }
    _dump_json(payload, out / "metric.json")
    return EXIT_OK


def cmd_coupling(args: argparse.Namespace) -> int:
    cfg = _load(args)
    scales = compute_scales(cfg.mass_kg, cfg.size_m, cfg.separation_l0 * cfg.size_m)
    packet = packet_from_config(cfg)
    spec = grid_from_config(cfg)
    metric = metric_for_state(packet, cfg.alpha, cfg.beta, spec)
    t_nat = scales.seconds_to_natural(cfg.t_end_s)
    coup = compute_couplings(packet, metric, scales.mass_natural(), t_nat)
    payload = {
        "kA_plus_per_mt": coup.kA_plus,
        "kA_minus_per_mt": coup.kA_minus,
        "kB_plus_p": coup.kB_plus_p,
        "kB_plus_m": coup.kB_plus_m,
        "kB_minus": coup.kB_minus,
        "kappa_ab": coup.kappa_ab,
        "omega_natural": coup.omega,
        "t_natural": coup.t_ref,
        "phase_unreliable": coup.phase_unreliable,
        "oscillatory_pairs": {
            k: {"amplitude": amp, "frequency": freq}
            for k, (amp, freq) in coup.oscillatory_pairs.items()
        },
    }
    out = _out_dir(args, cfg) if args.out else None
    _dump_json(payload, out / "coupling.json" if out else None)
    return EXIT_OK


def _write_sweep(cfg: ScenarioConfig, out: Path, name: str) -> int:
    result = run_sweep(cfg)
    csv_path = out / name
    csv_path.write_text(result.to_csv())
    payload = {
        "rows": len(result.rows),
        "columns": list(SWEEP_COLUMNS),
        "csv": str(csv_path),
        "regime_warning": result.any_regime_violation,
    }
    _dump_json(payload, out / (name.replace(".csv", "") + ".json"))
    return EXIT_REGIME_WARNING if result.any_regime_violation else EXIT_OK


def cmd_evolve(args: argparse.Namespace) -> int:
    cfg = dataclasses.replace(
        _load(args), sweep_alphas=[], sweep_betas=[], sweep_separations_l0=[]
    ).validate()
    return _write_sweep(cfg, _out_dir(args, cfg), "evolve.csv")


def cmd_sweep(args: argparse.Namespace) -> int:
    cfg = _load(args)
    return _write_sweep(cfg, _out_dir(args, cfg), "sweep.csv")


def cmd_verify(args: argparse.Namespace) -> int:
    results = run_checks(args.level)
    payload = report(results)
    out = Path(args.out) if args.out else None
    if out:
        out.mkdir(parents=True, exist_ok=True)
    _dump_json(payload, out / "verify.json" if out else None)
    for r in results:
        print(f"{'PASS' if r.passed else 'FAIL'} {r.check_id}: {r.detail}", file=sys.stderr)
    return EXIT_OK if payload["passed"] else EXIT_VERIFY_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="selfgrav",
        description="Self-gravity of a two-site massive particle: scales, metric, couplings, dynamics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, needs_config=True):
        p = sub.add_parser(name)
        if needs_config:
            p.add_argument("--config", required=True, help="scenario INI file")
            p.add_argument("--grid-n", type=int, default=None, help="override grid resolution")
        p.add_argument("--out", default=None, help="output directory")
        p.set_defaults(fn=fn)
        return p

    add("scales", cmd_scales)
    add("metric", cmd_metric)
    add("coupling", cmd_coupling)
    add("evolve", cmd_evolve)
    add("sweep", cmd_sweep)
    p_verify = add("verify", cmd_verify, needs_config=False)
    p_verify.add_argument("--level", choices=("quick", "full"), default="quick")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR


if __name__ == "__main__":
    sys.exit(main())
