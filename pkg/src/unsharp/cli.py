"""Command-line front end: ``compile``, ``estimate``, ``prepare``, ``estimate-params``.

Every run writes its data files into ``--out`` and finishes with
``manifest.json`` holding the resolved config, the master seed, the package
version, a SHA-256 per output file and the wall-clock duration.  Passing that
manifest back as ``--config`` replays the run.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
import warnings
from dataclasses import replace
from pathlib import Path

from . import __version__
from .applications.estimation import check_timescales, estimation_records, sweep_estimation
from .applications.preparation import preparation_records, sweep_preparation
from .applications.sweep import dump_jsonl, fmt_real, monotone_within
from .budget import CODATA, dipole_force_budget, shelving_budget
from .compiler import compile_scheme1, compile_scheme2, verify_compilation
from .compiler.scheme2 import chi_for_p0, scheme2_effective_povm
from .config import (
    SCHEMAS,
    ConfigError,
    apply_override,
    build_estimation,
    build_laser,
    build_preparation,
    describe,
    load_raw,
    validate,
)
from .qubit import MeasurementAxis, build_symmetric_povm

MANIFEST_NAME = "manifest.json"
MANIFEST_VERSION = 1
U64_MAX = 2**64 - 1

# recorded in every manifest so a reader sees the fixed modelling choices
DECISIONS = {
    "estimate": {
        "fidelity_statistic": "per-trajectory time average over the recorded window, then mean over trajectories",
        "estimator_initial_state": "experiment.estimator_state, after experiment.transient_skip_periods of burn-in",
        "dephasing_default_model": "quasi_static",
    },
    "prepare": {
        "wrong_direction_rule": "reset when the stage distance exceeds its entry value by more than the guard band",
        "noise_scope": "error channels act on unsharp measurements only, not on projective resets",
        "count_column": "includes resets when experiment.count_resets is true",
    },
}


class CommandFailed(RuntimeError):
    pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_text(path: Path, text: str) -> Path:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    return path


def _write_json(path: Path, obj) -> Path:
    return _write_text(path, json.dumps(obj, indent=2, sort_keys=True, allow_nan=True) + "\n")


def write_manifest(out: Path, command: str, config: dict, seed, outputs: list[Path], started: float, extra=None) -> Path:
    manifest = {
        "manifest_version": MANIFEST_VERSION,
        "command": command,
        "artifact_version": __version__,
        "seed": seed,
        "config": config,
        "outputs": {p.name: _sha256(p) for p in outputs},
        "wall_clock_seconds": time.perf_counter() - started,
    }
    if extra:
        manifest.update(extra)
    return _write_json(out / MANIFEST_NAME, manifest)


def resolve_config(command: str, args) -> dict:
    raw = load_raw(args.config) if args.config else {}
    for assignment in args.set or []:
        apply_override(raw, assignment)
    if getattr(args, "seed", None) is not None and "seed" in SCHEMAS[command]:
        raw["seed"] = args.seed
    return validate(raw, SCHEMAS[command])


# --------------------------------------------------------------------- compile
def cmd_compile(args) -> int:
    started = time.perf_counter()
    raw = load_raw(args.config) if args.config else {}
    for assignment in args.set or []:
        apply_override(raw, assignment)
    for name in ("p0", "theta", "phi", "scheme"):
        value = getattr(args, name)
        if value is not None:
            raw[name] = value
    cfg = validate(raw, SCHEMAS["compile"])
    if not 0.0 <= cfg["p0"] <= 0.5:
        raise ConfigError("p0", f"{cfg['p0']} outside [0, 0.5]")
    try:
        axis = MeasurementAxis(cfg["theta"], cfg["phi"])
    except ValueError as exc:
        raise ConfigError("theta", str(exc)) from exc
    if cfg["scheme"] == 1:
        program = compile_scheme1(cfg["p0"], axis)
        povm = build_symmetric_povm(cfg["p0"], axis)
    elif cfg["scheme"] == 2:
        if not axis.is_z:
            raise ConfigError("theta", "scheme 2 supports the z axis only (theta = 0)")
        program = compile_scheme2(cfg["p0"], axis)
        povm = scheme2_effective_povm(chi_for_p0(cfg["p0"]))
    else:
        raise ConfigError("scheme", f"expected 1 or 2, got {cfg['scheme']}")
    report = verify_compilation(program, povm)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    prog_path = _write_text(out / "program.txt", program.dumps())
    body = report.to_dict()
    body.update({"n_pulses": len(program.pulses), "passed": report.passed(args.tolerance), "tolerance": args.tolerance})
    rep_path = _write_json(out / "report.json", body)
    write_manifest(out, "compile", cfg, None, [prog_path, rep_path], started)
    flag = " zero-information" if report.zero_information else ""
    print(f"scheme {cfg['scheme']}: {len(program.pulses)} pulses, max deviation {report.max_deviation:.3e}{flag}")
    if not report.passed(args.tolerance):
        raise CommandFailed(f"verification failed: deviation {report.max_deviation:.3e} >= {args.tolerance:g}")
    return 0


# -------------------------------------------------------------------- sweeps
def _sweep_summary(result, with_counts: bool) -> dict:
    f, fse = result.fidelity_curve()
    c, cse = result.count_curve()
    summary = {
        "variable": result.variable,
        "grid": [float(g) for g in result.grid()],
        "mean_fidelity": f.tolist(),
        "stderr_fidelity": fse.tolist(),
        "mean_count": c.tolist(),
        "stderr_count": cse.tolist(),
        "fidelity_non_increasing_3sigma": monotone_within(f, fse, increasing=False),
    }
    if with_counts:
        summary["count_non_decreasing_3sigma"] = monotone_within(c, cse, increasing=True)
        summary["converged_fraction"] = [float(p.converged.mean()) for p in result.points]
    return summary


def _run_sweeps(command: str, args, cfg: dict, exp_cfg, sweep_fn, records_fn) -> int:
    started = time.perf_counter()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    outputs, summaries = [], []
    for variable in cfg["sweep"]["variables"]:
        result = sweep_fn(exp_cfg, variable, cfg["sweep"]["grid"], jobs=args.jobs)
        path = out / f"{command}_{variable}.csv"
        result.write_csv(path)
        outputs.append(path)
        summaries.append(_sweep_summary(result, with_counts=command == "prepare"))
        n_dump = cfg["output"]["jsonl_trajectories"]
        if n_dump > 0:
            jpath = out / f"{command}_{variable}_trajectories.jsonl"
            with open(jpath, "w", encoding="utf-8", newline="") as fh:
                for i, g in enumerate(cfg["sweep"]["grid"]):
                    point_cfg = replace(exp_cfg, noise=exp_cfg.noise.with_error(variable, g))
                    recs = records_fn(point_cfg, i, n_dump)
                    for r in recs:
                        r.summary["grid_value"] = g
                    dump_jsonl(recs, fh)
            outputs.append(jpath)
        print(f"{variable}: " + ", ".join(
            f"{fmt_real(g)} -> F={f:.4f}" for g, f in zip(summaries[-1]["grid"], summaries[-1]["mean_fidelity"])))
    rep_path = _write_json(out / "report.json", {"sweeps": summaries, "decisions": DECISIONS[command]})
    outputs.append(rep_path)
    write_manifest(out, command, cfg, cfg["seed"], outputs, started, {"decisions": DECISIONS[command]})
    return 0


def cmd_estimate(args) -> int:
    cfg = resolve_config("estimate", args)
    exp_cfg = build_estimation(cfg)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        check_timescales(exp_cfg)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)

    def records(c, i, n):
        return estimation_records(c, i, limit=n)

    return _run_sweeps("estimate", args, cfg, exp_cfg, sweep_estimation, records)


def cmd_prepare(args) -> int:
    cfg = resolve_config("prepare", args)
    exp_cfg = build_preparation(cfg)

    def records(c, i, n):
        return preparation_records(c, i, limit=n)

    return _run_sweeps("prepare", args, cfg, exp_cfg, sweep_preparation, records)


# ----------------------------------------------------------- estimate-params
def cmd_estimate_params(args) -> int:
    started = time.perf_counter()
    cfg = resolve_config("estimate-params", args)
    laser = build_laser(cfg)
    try:
        if cfg["chain"] == "shelving":
            report = shelving_budget(laser=laser, **cfg["shelving"])
        elif cfg["chain"] == "dipole_force":
            d = dict(cfg["dipole_force"])
            report = dipole_force_budget(
                laser=laser,
                mass=d.pop("mass_amu") * CODATA.amu,
                excited_population_target=d.pop("excited_population"),
                **d,
            )
        else:
            raise ConfigError("chain", f"expected shelving or dipole_force, got {cfg['chain']!r}")
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(cfg["chain"], str(exc)) from exc
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    lines = report.as_lines()
    txt = _write_text(out / "params.txt", "\n".join(lines) + "\n")
    js = _write_json(out / "params.json", {"chain": report.chain, "values": report.values, "inputs": report.inputs})
    write_manifest(out, "estimate-params", cfg, None, [txt, js], started)
    print("\n".join(lines))
    return 0


# ----------------------------------------------------------------- argparse
def _u64(text: str) -> int:
    value = int(text)
    if not 0 <= value <= U64_MAX:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML config, or a manifest.json to replay")
    p.add_argument("--seed", type=_u64, help="master seed; overrides the config")
    p.add_argument("--out", default="out", help="output directory (default: out)")
    p.add_argument("--jobs", type=_positive_int, default=1, help="worker processes (results do not depend on it)")
    p.add_argument("--set", action="append", metavar="KEY.PATH=VALUE", help="override a config key; repeatable")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="unsharp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    fmt = argparse.RawDescriptionHelpFormatter

    def add(name, fn, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text,
                           epilog="config keys:\n" + "\n".join(describe(SCHEMAS[name])), formatter_class=fmt)
        _common(p)
        p.set_defaults(func=fn)
        return p

    p = add("compile", cmd_compile, "compile a symmetric measurement to a pulse program and verify it")
    p.add_argument("--p0", type=float)
    p.add_argument("--theta", type=float)
    p.add_argument("--phi", type=float)
    p.add_argument("--scheme", type=int, choices=(1, 2))
    p.add_argument("--tolerance", type=float, default=1e-10, help="maximum allowed deviation (default 1e-10)")
    add("estimate", cmd_estimate, "state-estimation fidelity sweeps versus P_w / P_sp")
    add("prepare", cmd_prepare, "measurement-only state-preparation sweeps versus P_sp / P_w")
    add("estimate-params", cmd_estimate_params, "error-budget chains from laboratory parameters")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
    except (CommandFailed, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
    return 1


if __name__ == "__main__":
    sys.exit(main())
