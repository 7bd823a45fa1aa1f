"""Command line interface.

Subcommands:

* ``cke sweep <scenario.json>``        run a homodyne-angle sweep
* ``cke realizable <system.json>``     physical-realizability certificate
* ``cke gridsearch <config.json>``     exhaustive squeezer/angle search
* ``cke oracle <scenario.json> --theta <deg>``  Riccati vs joint-Lyapunov cost

Exit codes: 0 success, 1 solver failure (including a not-realizable verdict),
2 configuration error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .errors import CkeError, ConfigError, SweepFailure, SynthesisError
from .experiments import (
    emit,
    grid_search_controller,
    load_plant,
    load_scenario,
    render_csv,
    render_json,
    run_sweep,
)
from .homodyne import quadrature_selector
from .qsystem import NotRealizable, check_physical_realizability
from .synthesis import cost_via_joint_lyapunov, synthesize_estimator


def _common_flags(parser: argparse.ArgumentParser, top_level: bool = False) -> None:
    # subcommand copies use SUPPRESS so they do not clobber a value parsed at
    # the top-level position (cke --tol 1e-8 sweep ...)
    default = None if top_level else argparse.SUPPRESS
    parser.add_argument("--tol", type=float, default=default, help="solver tolerance override")
    parser.add_argument("--out", type=Path, default=default, help="output file path")
    parser.add_argument(
        "--format", choices=("csv", "json"), default=default, help="output format"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cke",
        description="Coherent-classical estimation for linear quantum optical systems.",
    )
    _common_flags(parser, top_level=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sweep = sub.add_parser("sweep", help="run a homodyne-angle sweep scenario")
    p_sweep.add_argument("scenario", type=Path)
    p_sweep.add_argument(
        "--allow-failures",
        action="store_true",
        help="record per-angle solver failures instead of failing the run",
    )
    _common_flags(p_sweep)

    p_real = sub.add_parser("realizable", help="check physical realizability")
    p_real.add_argument("system", type=Path)
    _common_flags(p_real)

    p_grid = sub.add_parser("gridsearch", help="search squeezer parameters and angles")
    p_grid.add_argument("config", type=Path)
    _common_flags(p_grid)

    p_oracle = sub.add_parser(
        "oracle", help="compare the Riccati cost with the joint-Lyapunov cost"
    )
    p_oracle.add_argument("scenario", type=Path)
    p_oracle.add_argument("--theta", type=float, required=True, help="detector angle (deg)")
    _common_flags(p_oracle)

    return parser


def _read_json(path: Path, what: str):
    try:
        return json.loads(path.read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"{what} file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{what} file {path} is not valid JSON: {exc}") from exc


def _matrix_lines(name: str, m) -> str:
    body = np.array2string(
        np.asarray(m), precision=6, suppress_small=True, separator=", "
    )
    return f"{name}:\n{body}"


def _cmd_sweep(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.tol is not None:
        scenario = _with_tolerance(scenario, args.tol)
    try:
        result = run_sweep(scenario, allow_failures=args.allow_failures)
    except SweepFailure as exc:
        print(f"sweep failed: {exc}", file=sys.stderr)
        return 1
    fmt = args.format or scenario.output_format
    out = args.out or scenario.output_path
    if out is not None:
        path = emit(result, fmt, out)
        print(f"{scenario.name}: {len(result.rows)} rows -> {path}")
    else:
        text = render_csv(result) if fmt == "csv" else render_json(result)
        sys.stdout.write(text)
    if result.failures:
        for theta, message in result.failures:
            print(f"failed at {theta} deg: {message}", file=sys.stderr)
    return 0


def _with_tolerance(scenario, tol: float):
    from dataclasses import replace

    return replace(scenario, tolerance=tol)


def _cmd_realizable(args) -> int:
    data = _read_json(args.system, "system")
    plant = load_plant(data)
    tol = args.tol if args.tol is not None else 1e-9
    verdict = check_physical_realizability(plant, tol=tol)
    if isinstance(verdict, NotRealizable):
        print(f"not physically realizable: {verdict}")
        return 1
    print("physically realizable")
    print(_matrix_lines("commutation matrix", verdict.commutation))
    print(_matrix_lines("hamiltonian matrix", verdict.hamiltonian))
    print(_matrix_lines("coupling matrix", verdict.coupling))
    if verdict.padded_outputs:
        print(f"padded unused outputs: {', '.join(verdict.padded_outputs)}")
    print(f"max residual: {verdict.max_residual:.3e}")
    return 0


def _cmd_gridsearch(args) -> int:
    data = _read_json(args.config, "grid search config")
    if not isinstance(data, dict):
        raise ConfigError("grid search config must be a JSON object")
    plant = load_plant(data.get("plant"))
    try:
        chi_grid = [
            v if isinstance(v, (int, float)) else complex(v[0], v[1])
            for v in data["chi_grid"]
        ]
        kappa_grid = [float(v) for v in data["kappa_grid"]]
        theta_grid = [float(v) for v in data["theta_grid_deg"]]
    except (KeyError, TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"invalid grid search config: {exc}") from exc
    tol = args.tol if args.tol is not None else float(data.get("tolerance", 1e-10))
    best = grid_search_controller(plant, chi_grid, kappa_grid, theta_grid, tol=tol)
    chi = best.chi
    chi_text = f"{chi.real:g}" if chi.imag == 0 else f"{chi.real:g}{chi.imag:+g}j"
    print(
        f"best: chi={chi_text} kappa={best.kappa:g} theta={best.theta_deg:g} deg "
        f"cost={best.cost:.12g} ({best.evaluated} candidates evaluated, "
        f"{len(best.skipped)} skipped)"
    )
    for chi_s, kappa_s, reason in best.skipped:
        print(f"skipped chi={chi_s} kappa={kappa_s}: {reason}", file=sys.stderr)
    return 0


def _cmd_oracle(args) -> int:
    scenario = load_scenario(args.scenario)
    tol = args.tol if args.tol is not None else scenario.tolerance
    from .experiments import build_augmented, _offsets_for

    aug = build_augmented(scenario)
    offsets = _offsets_for(scenario, aug)
    scheme = quadrature_selector([args.theta + off for off in offsets])
    est = synthesize_estimator(aug, scheme, tol=tol, noise_model=scenario.noise_model)
    oracle = cost_via_joint_lyapunov(aug, est, scheme, noise_model=scenario.noise_model)
    diff = abs(est.cost - oracle)
    bound = 1e-8 * (1.0 + abs(est.cost))
    print(f"theta: {args.theta:g} deg")
    print(f"riccati cost: {est.cost:.12g}")
    print(f"joint-lyapunov cost: {oracle:.12g}")
    print(f"difference: {diff:.3e} (bound {bound:.3e})")
    return 0 if diff <= bound else 1


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "sweep": _cmd_sweep,
        "realizable": _cmd_realizable,
        "gridsearch": _cmd_gridsearch,
        "oracle": _cmd_oracle,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except (SynthesisError, CkeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
