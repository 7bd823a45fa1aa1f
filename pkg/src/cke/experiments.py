"""Scenario runner: homodyne-angle sweeps, controller grid search, emitters.

A scenario bundles a plant, an optional coherent controller, and an angle
grid.  ``run_sweep`` synthesizes the optimal classical estimator at every
angle and records the cost alongside the independent joint-Lyapunov
cross-check; ``emit`` writes the rows as deterministic CSV or JSON.  Two
canonical scenarios ship with the package: ``fig3`` (classical-only cavity
baseline) and ``fig4`` (cavity with squeezer feedback controller).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .doubled import matrix_from_json, matrix_to_json
from .errors import (
    ChannelMismatch,
    ConfigError,
    ControllerNotRealizable,
    NoFeasibleCandidate,
    SweepFailure,
    SynthesisError,
)
from .homodyne import quadrature_selector
from .interconnect import AugmentedSystem, classical_only, close_loop
from .qsystem import (
    CoherentController,
    InputChannel,
    OutputChannel,
    QuantumLinearSystem,
    build_beam_splitter_controller,
    build_cavity_plant,
    build_squeezer_controller,
)
from .synthesis import cost_via_joint_lyapunov, synthesize_estimator

__all__ = [
    "AngleGrid",
    "GridSearchResult",
    "Scenario",
    "SweepResult",
    "SweepRow",
    "augmented_to_json",
    "build_augmented",
    "builtin_scenario",
    "emit",
    "grid_search_controller",
    "load_controller",
    "load_plant",
    "load_scenario",
    "run_sweep",
]

CSV_HEADER = "theta_deg,cost,gain_norm,residual,stabilizing,oracle_cost"


@dataclass(frozen=True)
class AngleGrid:
    """Half-open degree grid [start, stop) with a positive step."""

    start: float
    stop: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")
        if not self.stop > self.start:
            raise ValueError("grid is empty: stop must exceed start")

    def angles(self) -> tuple[float, ...]:
        count = int(math.ceil((self.stop - self.start) / self.step - 1e-12))
        return tuple(self.start + k * self.step for k in range(max(count, 1)))


@dataclass(frozen=True)
class Scenario:
    """A sweep setup: plant, optional controller, angle grid, tolerances."""

    name: str
    plant: QuantumLinearSystem
    controller: CoherentController | None
    grid: AngleGrid
    angle_offsets_deg: tuple[float, ...] | None = None
    tolerance: float = 1e-10
    noise_model: str = "canonical"
    output_path: str | None = None
    output_format: str = "csv"


@dataclass(frozen=True)
class SweepRow:
    theta_deg: float
    cost: float
    gain_norm: float
    residual: float
    stabilizing: bool
    oracle_cost: float


@dataclass(frozen=True)
class SweepResult:
    scenario: str
    rows: tuple[SweepRow, ...]
    failures: tuple[tuple[float, str], ...] = ()


@dataclass(frozen=True)
class GridSearchResult:
    chi: complex
    kappa: float
    theta_deg: float
    cost: float
    evaluated: int
    skipped: tuple[tuple[complex, float, str], ...] = ()


# -- configuration loading ---------------------------------------------------


def _complex_from_json(value, name: str) -> complex:
    if isinstance(value, (int, float)):
        return complex(value)
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return complex(float(value[0]), float(value[1]))
    raise ConfigError(f"{name} must be a number or an [re, im] pair, got {value!r}")


def _require_mapping(obj, name: str) -> Mapping:
    if not isinstance(obj, Mapping):
        raise ConfigError(f"{name} must be an object, got {type(obj).__name__}")
    return obj


def load_plant(spec) -> QuantumLinearSystem:
    """Build a plant from its JSON description.

    Accepted forms: ``{"cavity": {"kappa1": .., "kappa2": .., "chi": ..}}``
    or ``{"raw": {...}}`` with explicit matrices in the [re, im] literal
    format.
    """
    spec = _require_mapping(spec, "plant")
    if set(spec) == {"cavity"}:
        params = _require_mapping(spec["cavity"], "plant.cavity")
        try:
            return build_cavity_plant(
                float(params["kappa1"]),
                float(params["kappa2"]),
                _complex_from_json(params.get("chi", 0.0), "chi"),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"invalid cavity plant parameters: {exc}") from exc
    if set(spec) == {"raw"}:
        return _raw_plant(_require_mapping(spec["raw"], "plant.raw"))
    raise ConfigError(
        f"plant must be {{'cavity': ...}} or {{'raw': ...}}, got keys {sorted(spec)}"
    )


def _raw_plant(raw: Mapping) -> QuantumLinearSystem:
    try:
        n = int(raw["n"])
        drift = matrix_from_json(raw["F"], "F")
        inputs = []
        for entry in raw["inputs"]:
            entry = _require_mapping(entry, "plant.raw.inputs[]")
            drive = matrix_from_json(entry["G"], f"inputs[{entry.get('name')}].G")
            inputs.append(InputChannel(str(entry["name"]), drive.shape[1] // 2, drive))
        outputs = []
        for entry in raw["outputs"]:
            entry = _require_mapping(entry, "plant.raw.outputs[]")
            readout = matrix_from_json(entry["H"], f"outputs[{entry.get('name')}].H")
            feed = {
                str(k): matrix_from_json(v, f"outputs[{entry.get('name')}].K[{k}]")
                for k, v in _require_mapping(entry.get("K", {}), "K").items()
            }
            outputs.append(
                OutputChannel(str(entry["name"]), readout.shape[0] // 2, readout, feed)
            )
        cost = matrix_from_json(raw["C"], "C") if "C" in raw else None
        return QuantumLinearSystem(n, drift, tuple(inputs), tuple(outputs), cost)
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid raw plant description: {exc}") from exc


def load_controller(spec) -> CoherentController | None:
    """Build a controller from its JSON description (``None`` stays none).

    Accepted forms: ``{"squeezer": {"kappa1", "kappa2", "chi"}}``,
    ``{"beam_splitter": {"theta_mix_deg": ..}}``, or ``{"raw": {...}}``
    giving the controller matrices literally (this is how a printed matrix
    set that disagrees with the builder convention can be entered verbatim).
    """
    if spec is None:
        return None
    spec = _require_mapping(spec, "controller")
    if set(spec) == {"squeezer"}:
        params = _require_mapping(spec["squeezer"], "controller.squeezer")
        try:
            return build_squeezer_controller(
                float(params["kappa1"]),
                float(params["kappa2"]),
                _complex_from_json(params.get("chi", 0.0), "chi"),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"invalid squeezer parameters: {exc}") from exc
    if set(spec) == {"beam_splitter"}:
        params = _require_mapping(spec["beam_splitter"], "controller.beam_splitter")
        try:
            return build_beam_splitter_controller(
                math.radians(float(params["theta_mix_deg"]))
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"invalid beam splitter parameters: {exc}") from exc
    if set(spec) == {"raw"}:
        return _raw_controller(_require_mapping(spec["raw"], "controller.raw"))
    raise ConfigError(
        "controller must be null, {'squeezer': ...}, {'beam_splitter': ...} "
        f"or {{'raw': ...}}, got keys {sorted(spec)}"
    )


def _raw_controller(raw: Mapping) -> CoherentController:
    try:
        n_c = int(raw["n_c"])
        drift = matrix_from_json(raw["Fc"], "Fc")
        g_vac = matrix_from_json(raw["Gc1"], "Gc1")
        g_meas = matrix_from_json(raw["Gc2"], "Gc2")
        est_readout = matrix_from_json(raw["Hct"], "Hct")
        est_feed = {}
        if "Kct1" in raw:
            est_feed["Atilde"] = matrix_from_json(raw["Kct1"], "Kct1")
        if "Kct2" in raw:
            est_feed["Y"] = matrix_from_json(raw["Kct2"], "Kct2")
        outputs = [
            OutputChannel("Ytilde", est_readout.shape[0] // 2, est_readout, est_feed)
        ]
        if any(k in raw for k in ("Hc", "Kc1", "Kc2")):
            fb_readout = matrix_from_json(raw["Hc"], "Hc")
            fb_feed = {}
            if "Kc1" in raw:
                fb_feed["Atilde"] = matrix_from_json(raw["Kc1"], "Kc1")
            if "Kc2" in raw:
                fb_feed["Y"] = matrix_from_json(raw["Kc2"], "Kc2")
            outputs.append(
                OutputChannel("U", fb_readout.shape[0] // 2, fb_readout, fb_feed)
            )
        return CoherentController(
            n=n_c,
            drift=drift,
            inputs=(
                InputChannel("Atilde", g_vac.shape[1] // 2, g_vac),
                InputChannel("Y", g_meas.shape[1] // 2, g_meas),
            ),
            outputs=tuple(outputs),
        )
    except ConfigError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid raw controller description: {exc}") from exc


def load_scenario(source) -> Scenario:
    """Load a scenario from a JSON file path or an already-parsed mapping."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        try:
            data = json.loads(path.read_text())
        except FileNotFoundError as exc:
            raise ConfigError(f"scenario file not found: {path}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"scenario file {path} is not valid JSON: {exc}") from exc
        name_default = path.stem.removesuffix(".scenario")
    else:
        data = source
        name_default = "scenario"
    data = _require_mapping(data, "scenario")

    plant = load_plant(data.get("plant"))
    controller = load_controller(data.get("controller"))
    grid_spec = _require_mapping(
        data.get("angles_deg", {"start": 0.0, "stop": 180.0, "step": 1.0}),
        "angles_deg",
    )
    try:
        grid = AngleGrid(
            float(grid_spec["start"]), float(grid_spec["stop"]), float(grid_spec["step"])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid angle grid: {exc}") from exc

    offsets = data.get("angle_offsets_deg")
    if offsets is not None:
        if not isinstance(offsets, Sequence) or isinstance(offsets, (str, bytes)):
            raise ConfigError("angle_offsets_deg must be a list of degrees")
        offsets = tuple(float(v) for v in offsets)

    noise_model = data.get("noise_model", "canonical")
    if noise_model not in ("canonical", "vacuum"):
        raise ConfigError(f"unknown noise_model {noise_model!r}")

    output = data.get("output")
    output_path = None
    output_format = "csv"
    if output is not None:
        output = _require_mapping(output, "output")
        output_path = output.get("path")
        output_format = output.get("format", "csv")
        if output_format not in ("csv", "json"):
            raise ConfigError(f"unknown output format {output_format!r}")

    return Scenario(
        name=str(data.get("name", name_default)),
        plant=plant,
        controller=controller,
        grid=grid,
        angle_offsets_deg=offsets,
        tolerance=float(data.get("tolerance", 1e-10)),
        noise_model=noise_model,
        output_path=output_path,
        output_format=output_format,
    )


def builtin_scenario(name: str) -> Scenario:
    """Load one of the scenarios shipped with the package (fig3, fig4)."""
    ref = resources.files("cke").joinpath(f"scenarios/{name}.scenario.json")
    try:
        data = json.loads(ref.read_text())
    except FileNotFoundError as exc:
        raise ConfigError(f"no builtin scenario named {name!r}") from exc
    return load_scenario(data)


# -- sweep execution ----------------------------------------------------------


def augmented_to_json(aug: AugmentedSystem) -> dict:
    """Debug view of an augmented system, matrices in the [re, im] literal
    format."""
    return {
        "state_half_widths": list(aug.state_half_widths),
        "noise_channels": [[name, w] for name, w in aug.noise_channels],
        "measured_half_width": aug.measured_half_width,
        "drift": matrix_to_json(aug.drift),
        "drive": matrix_to_json(aug.drive),
        "readout": matrix_to_json(aug.readout),
        "feedthrough": matrix_to_json(aug.feedthrough),
        "cost_row": None if aug.cost_row is None else matrix_to_json(aug.cost_row),
    }


def build_augmented(scenario: Scenario) -> AugmentedSystem:
    """Augmented system for the scenario: closed loop, or the baseline."""
    if scenario.controller is None:
        return classical_only(scenario.plant)
    return close_loop(scenario.plant, scenario.controller)


def _offsets_for(scenario: Scenario, aug: AugmentedSystem) -> tuple[float, ...]:
    width = aug.measured_half_width
    offsets = scenario.angle_offsets_deg
    if offsets is None:
        return (0.0,) * width
    if len(offsets) != width:
        raise ConfigError(
            f"scenario declares {len(offsets)} angle offsets but the measured "
            f"channel has half-width {width}"
        )
    return offsets


def run_sweep(scenario: Scenario, allow_failures: bool = False) -> SweepResult:
    """Synthesize the optimal estimator at every grid angle.

    Each row records the cost, the filter gain Frobenius norm, the Riccati
    residual, and the joint-Lyapunov cross-check.  Rows are ordered by angle
    and the computation is deterministic, so repeated runs emit identical
    bytes.  A row whose solve fails is recorded with NaN entries; unless
    ``allow_failures`` is set, any failure raises :class:`SweepFailure` after
    the sweep completes.
    """
    aug = build_augmented(scenario)
    offsets = _offsets_for(scenario, aug)
    rows: list[SweepRow] = []
    failures: list[tuple[float, str]] = []
    for theta in scenario.grid.angles():
        scheme = quadrature_selector([theta + off for off in offsets])
        try:
            est = synthesize_estimator(
                aug, scheme, tol=scenario.tolerance, noise_model=scenario.noise_model
            )
            oracle = cost_via_joint_lyapunov(
                aug, est, scheme, noise_model=scenario.noise_model
            )
            if abs(oracle - est.cost) > 1e-8 * (1.0 + abs(est.cost)):
                raise SynthesisError(
                    f"cost {est.cost:.12g} disagrees with the joint-covariance "
                    f"cross-check {oracle:.12g}"
                )
            rows.append(
                SweepRow(
                    theta_deg=theta,
                    cost=est.cost,
                    gain_norm=float(np.linalg.norm(est.filter_gain)),
                    residual=est.riccati.residual,
                    stabilizing=est.riccati.stabilizing,
                    oracle_cost=oracle,
                )
            )
        except SynthesisError as exc:
            failures.append((theta, str(exc)))
            rows.append(
                SweepRow(
                    theta_deg=theta,
                    cost=math.nan,
                    gain_norm=math.nan,
                    residual=math.nan,
                    stabilizing=False,
                    oracle_cost=math.nan,
                )
            )
    result = SweepResult(scenario.name, tuple(rows), tuple(failures))
    if failures and not allow_failures:
        first = failures[0]
        raise SweepFailure(
            f"{len(failures)} of {len(rows)} angles failed; first at "
            f"{first[0]} deg: {first[1]}",
            result=result,
        )
    return result


def grid_search_controller(
    plant: QuantumLinearSystem,
    chi_grid: Sequence[complex],
    kappa_grid: Sequence[float],
    theta_grid_deg: Sequence[float],
    tol: float = 1e-10,
    noise_model: str = "canonical",
) -> GridSearchResult:
    """Exhaustive search over squeezer controllers and detector angles.

    Every (chi, kappa) candidate is built with equal mirror rates; candidates
    that fail realizability or whose synthesis fails are skipped with the
    reason recorded.  The feasible tuple with minimal cost wins; cost ties
    (within 1e-9) break toward the smallest |chi|, then kappa, then angle.
    """
    if not chi_grid or not kappa_grid or not theta_grid_deg:
        raise ValueError("grids must be non-empty")
    candidates: list[tuple[float, complex, float, float]] = []
    skipped: list[tuple[complex, float, str]] = []
    for chi in chi_grid:
        for kappa in kappa_grid:
            try:
                controller = build_squeezer_controller(kappa, kappa, chi)
                aug = close_loop(plant, controller)
            except (ValueError, ChannelMismatch, ControllerNotRealizable) as exc:
                skipped.append((chi, kappa, str(exc)))
                continue
            for theta in theta_grid_deg:
                scheme = quadrature_selector([theta] * aug.measured_half_width)
                try:
                    est = synthesize_estimator(
                        aug, scheme, tol=tol, noise_model=noise_model
                    )
                except SynthesisError as exc:
                    skipped.append((chi, kappa, f"theta {theta}: {exc}"))
                    continue
                candidates.append((est.cost, complex(chi), float(kappa), float(theta)))
    if not candidates:
        raise NoFeasibleCandidate(
            f"all {len(skipped)} candidates were rejected; first: {skipped[0][2]}"
            if skipped
            else "no candidates evaluated"
        )
    best_cost = min(c[0] for c in candidates)
    tied = [c for c in candidates if c[0] <= best_cost + 1e-9]
    cost, chi, kappa, theta = min(tied, key=lambda c: (abs(c[1]), c[2], c[3]))
    return GridSearchResult(
        chi=chi,
        kappa=kappa,
        theta_deg=theta,
        cost=cost,
        evaluated=len(candidates),
        skipped=tuple(skipped),
    )


# -- emitters ------------------------------------------------------------------


def _g12(x: float) -> str:
    return format(float(x), ".12g")


def render_csv(result: SweepResult) -> str:
    """Render rows as CSV: fixed column order, 12 significant digits, LF."""
    lines = [CSV_HEADER]
    for r in result.rows:
        lines.append(
            ",".join(
                [
                    _g12(r.theta_deg),
                    _g12(r.cost),
                    _g12(r.gain_norm),
                    _g12(r.residual),
                    "true" if r.stabilizing else "false",
                    _g12(r.oracle_cost),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def render_json(result: SweepResult) -> str:
    """Render rows as a JSON array of objects with the CSV field names."""
    def num(x: float):
        return float(_g12(x)) if math.isfinite(x) else None

    payload = [
        {
            "theta_deg": num(r.theta_deg),
            "cost": num(r.cost),
            "gain_norm": num(r.gain_norm),
            "residual": num(r.residual),
            "stabilizing": r.stabilizing,
            "oracle_cost": num(r.oracle_cost),
        }
        for r in result.rows
    ]
    return json.dumps(payload, indent=2) + "\n"


def emit(result: SweepResult, format: str, path) -> Path:
    """Write the sweep result to ``path`` as ``csv`` or ``json``."""
    if format == "csv":
        text = render_csv(result)
    elif format == "json":
        text = render_json(result)
    else:
        raise ValueError(f"unknown format {format!r}")
    path = Path(path)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return path
