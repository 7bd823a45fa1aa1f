"""Closed-loop interconnection of a quantum plant with a coherent controller.

``close_loop`` feeds the plant output ``Y`` into the controller and, when the
controller exposes a feedback output ``U``, that field back into the plant's
control input.  ``classical_only`` is the measurement-only baseline where the
control input is driven by fresh vacuum and the plant output is homodyned
directly.  Both return the augmented matrices consumed by the estimator
synthesis.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .doubled import (
    DEFAULT_TOL,
    ComplexMatrix,
    as_complex_matrix,
    is_delta_structured,
    subsystem_permutation,
)
from .errors import ChannelMismatch, ControllerNotRealizable
from .qsystem import (
    CoherentController,
    NotRealizable,
    QuantumLinearSystem,
    check_physical_realizability,
    is_bogoliubov,
)

__all__ = ["AugmentedSystem", "classical_only", "close_loop"]


def _frozen(m) -> ComplexMatrix:
    out = np.array(as_complex_matrix(m), dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class AugmentedSystem:
    """Joint plant + controller matrices in per-subsystem stacking order.

    States are stacked [plant doubled state; controller doubled state] and
    noise columns [plant channels in declared order; controller vacuum], with
    each subsystem/channel keeping its own doubled pair.  The globally
    re-sorted doubled structure is verified through the stacking permutation.
    ``cost_row`` is the plant's estimation target extended by zeros over the
    controller state.
    """

    state_half_widths: tuple[int, int]
    noise_channels: tuple[tuple[str, int], ...]
    measured_half_width: int
    drift: ComplexMatrix
    drive: ComplexMatrix
    readout: ComplexMatrix
    feedthrough: ComplexMatrix
    cost_row: ComplexMatrix | None = None

    def __post_init__(self):
        n, n_c = self.state_half_widths
        if n < 0 or n_c < 0:
            raise ValueError("state half widths must be non-negative")
        object.__setattr__(self, "noise_channels", tuple(self.noise_channels))
        dim = 2 * (n + n_c)
        noise_dim = 2 * sum(w for _, w in self.noise_channels)
        meas_dim = 2 * self.measured_half_width

        drift = _frozen(self.drift)
        drive = _frozen(self.drive)
        readout = _frozen(self.readout)
        feed = _frozen(self.feedthrough)
        if drift.shape != (dim, dim):
            raise ValueError(f"drift must be {dim}x{dim}, got {drift.shape}")
        if drive.shape != (dim, noise_dim):
            raise ValueError(f"drive must be {dim}x{noise_dim}, got {drive.shape}")
        if readout.shape != (meas_dim, dim):
            raise ValueError(f"readout must be {meas_dim}x{dim}, got {readout.shape}")
        if feed.shape != (meas_dim, noise_dim):
            raise ValueError(
                f"feedthrough must be {meas_dim}x{noise_dim}, got {feed.shape}"
            )

        state_perm = subsystem_permutation(self.state_half_widths)
        noise_perm = subsystem_permutation([w for _, w in self.noise_channels])
        meas_perm = subsystem_permutation([self.measured_half_width])
        checks = (
            ("drift", drift[np.ix_(state_perm, state_perm)]),
            ("drive", drive[np.ix_(state_perm, noise_perm)]),
            ("readout", readout[np.ix_(meas_perm, state_perm)]),
            ("feedthrough", feed[np.ix_(meas_perm, noise_perm)]),
        )
        for name, mat in checks:
            if not is_delta_structured(mat, DEFAULT_TOL):
                raise ValueError(f"augmented {name} is not doubled-structured")

        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "drive", drive)
        object.__setattr__(self, "readout", readout)
        object.__setattr__(self, "feedthrough", feed)
        if self.cost_row is not None:
            row = _frozen(self.cost_row)
            if row.shape != (1, dim):
                raise ValueError(f"cost_row must be 1x{dim}, got {row.shape}")
            object.__setattr__(self, "cost_row", row)

    @property
    def noise_half_widths(self) -> tuple[int, int]:
        """(plant-side noise modes, controller vacuum modes)."""
        m_tilde = sum(w for name, w in self.noise_channels if name == "Atilde")
        m = sum(w for name, w in self.noise_channels if name != "Atilde")
        return m, m_tilde

    def global_form(self, which: str) -> ComplexMatrix:
        """A stored matrix re-sorted into the global doubled ordering."""
        state_perm = subsystem_permutation(self.state_half_widths)
        noise_perm = subsystem_permutation([w for _, w in self.noise_channels])
        meas_perm = subsystem_permutation([self.measured_half_width])
        if which == "drift":
            return self.drift[np.ix_(state_perm, state_perm)]
        if which == "drive":
            return self.drive[np.ix_(state_perm, noise_perm)]
        if which == "readout":
            return self.readout[np.ix_(meas_perm, state_perm)]
        if which == "feedthrough":
            return self.feedthrough[np.ix_(meas_perm, noise_perm)]
        raise ValueError(f"unknown matrix {which!r}")


def _zeros(rows: int, cols: int) -> ComplexMatrix:
    return np.zeros((rows, cols), dtype=complex)


def close_loop(
    plant: QuantumLinearSystem,
    controller: CoherentController,
    tol: float = DEFAULT_TOL,
) -> AugmentedSystem:
    """Interconnect plant and controller into the augmented system.

    The plant output ``Y`` drives the controller's ``Y`` input; when the
    controller has a ``U`` output, that field drives the plant's ``U`` input,
    otherwise a plant ``U`` input is reclassified as vacuum noise.  The
    measured channel of the result is the controller's ``Ytilde`` output.

    Dynamic controllers must pass the open-oscillator realizability check
    (with unused-output padding); a static controller's scattering must
    preserve field commutators.
    """
    if not plant.has_output("Y"):
        raise ChannelMismatch("plant has no output channel named 'Y'")
    y_width = plant.output("Y").half_width
    if controller.input("Y").half_width != y_width:
        raise ChannelMismatch(
            f"plant output Y half-width {y_width} != controller Y input "
            f"half-width {controller.input('Y').half_width}"
        )
    feedback = controller.has_feedback
    if feedback:
        if not plant.has_input("U"):
            raise ChannelMismatch("controller feeds back but plant has no input 'U'")
        if plant.input("U").half_width != controller.output("U").half_width:
            raise ChannelMismatch(
                f"controller U half-width {controller.output('U').half_width} != "
                f"plant U half-width {plant.input('U').half_width}"
            )

    if controller.n > 0:
        verdict = check_physical_realizability(controller, tol)
        if isinstance(verdict, NotRealizable):
            raise ControllerNotRealizable(str(verdict))
    else:
        if not is_bogoliubov(controller.gathered_feedthrough(), tol):
            raise ControllerNotRealizable(
                "static controller scattering does not preserve field commutators"
            )

    n, n_c = plant.n, controller.n
    plant_drift = plant.drift
    plant_readout = plant.output("Y").readout
    c_meas_drive = controller.input("Y").drive
    c_vac_drive = controller.input("Atilde").drive
    vac_width = controller.input("Atilde").half_width
    est = controller.output("Ytilde")
    est_from_vac = controller.feedthrough_block("Ytilde", "Atilde")
    est_from_meas = controller.feedthrough_block("Ytilde", "Y")

    if feedback:
        fb_drive = plant.input("U").drive
        fb_readout = controller.output("U").readout
        fb_from_vac = controller.feedthrough_block("U", "Atilde")
        fb_from_meas = controller.feedthrough_block("U", "Y")
        drift = np.block(
            [
                [plant_drift + fb_drive @ fb_from_meas @ plant_readout, fb_drive @ fb_readout],
                [c_meas_drive @ plant_readout, controller.drift],
            ]
        )
    else:
        drift = np.block(
            [
                [plant_drift, _zeros(2 * n, 2 * n_c)],
                [c_meas_drive @ plant_readout, controller.drift],
            ]
        )

    # noise columns: plant channels in declared order (a fed-back U is not
    # noise), then the controller vacuum
    noise_channels: list[tuple[str, int]] = []
    drive_cols: list[ComplexMatrix] = []
    feed_cols: list[ComplexMatrix] = []
    for ch in plant.inputs:
        if feedback and ch.name == "U":
            continue
        noise_channels.append((ch.name, ch.half_width))
        y_feed = plant.feedthrough_block("Y", ch.name)
        plant_block = ch.drive
        if feedback:
            plant_block = plant_block + fb_drive @ fb_from_meas @ y_feed
        drive_cols.append(np.vstack([plant_block, c_meas_drive @ y_feed]))
        feed_cols.append(est_from_meas @ y_feed)
    noise_channels.append(("Atilde", vac_width))
    plant_vac_block = (
        fb_drive @ fb_from_vac if feedback else _zeros(2 * n, 2 * vac_width)
    )
    drive_cols.append(np.vstack([plant_vac_block, c_vac_drive]))
    feed_cols.append(est_from_vac)

    drive = np.hstack(drive_cols)
    readout = np.hstack([est_from_meas @ plant_readout, est.readout])
    feedthrough = np.hstack(feed_cols)
    cost_row = None
    if plant.cost_row is not None:
        cost_row = np.hstack([plant.cost_row, _zeros(1, 2 * n_c)])

    return AugmentedSystem(
        state_half_widths=(n, n_c),
        noise_channels=tuple(noise_channels),
        measured_half_width=est.half_width,
        drift=drift,
        drive=drive,
        readout=readout,
        feedthrough=feedthrough,
        cost_row=cost_row,
    )


def classical_only(plant: QuantumLinearSystem) -> AugmentedSystem:
    """Measurement-only baseline: every plant input is vacuum noise.

    The control input (if any) is reclassified as a vector of quantum noises
    and the plant output ``Y`` itself is the measured channel.
    """
    if not plant.has_output("Y"):
        raise ChannelMismatch("plant has no output channel named 'Y'")
    out = plant.output("Y")
    drive_cols = [ch.drive for ch in plant.inputs]
    feed_cols = [plant.feedthrough_block("Y", ch.name) for ch in plant.inputs]
    return AugmentedSystem(
        state_half_widths=(plant.n, 0),
        noise_channels=tuple((ch.name, ch.half_width) for ch in plant.inputs),
        measured_half_width=out.half_width,
        drift=plant.drift,
        drive=np.hstack(drive_cols) if drive_cols else _zeros(2 * plant.n, 0),
        readout=out.readout,
        feedthrough=np.hstack(feed_cols) if feed_cols else _zeros(2 * out.half_width, 0),
        cost_row=plant.cost_row,
    )
