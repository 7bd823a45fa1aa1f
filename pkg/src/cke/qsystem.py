"""Linear quantum system models, optical device builders, and the open
harmonic oscillator realizability check.

A system is a set of Ito evolution matrices acting on the doubled mode vector
[a; a#], with named input and output field channels.  Builders cover the two
devices used throughout: a two-mirror cavity with an optional internal
squeezing nonlinearity (serving as plant or as coherent feedback controller)
and a static beam splitter.  ``check_physical_realizability`` decides whether
given matrices describe a legal open quantum harmonic oscillator and, when
they do, returns its commutation, Hamiltonian, and coupling matrices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .doubled import (
    DEFAULT_TOL,
    ComplexMatrix,
    adjoint,
    as_complex_matrix,
    block_delta,
    delta_blocks,
    delta_embed,
    hstack_delta,
    inertia,
    is_delta_structured,
    signature_matrix,
    vstack_delta,
)

__all__ = [
    "CoherentController",
    "InputChannel",
    "NotRealizable",
    "OutputChannel",
    "PhysicalRealization",
    "QuantumLinearSystem",
    "RealizabilityFailure",
    "build_beam_splitter_controller",
    "build_cavity_plant",
    "build_squeezer_controller",
    "check_physical_realizability",
    "is_bogoliubov",
    "realize",
]


def _frozen(m: ComplexMatrix) -> ComplexMatrix:
    out = np.array(m, dtype=complex)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class InputChannel:
    """Named input field of ``half_width`` modes and its state drive block."""

    name: str
    half_width: int
    drive: ComplexMatrix  # 2n x 2*half_width

    def __post_init__(self):
        object.__setattr__(self, "drive", _frozen(as_complex_matrix(self.drive, "drive")))


@dataclass(frozen=True)
class OutputChannel:
    """Named output field with its state readout and per-input feedthrough."""

    name: str
    half_width: int
    readout: ComplexMatrix  # 2*half_width x 2n
    feedthrough: Mapping[str, ComplexMatrix] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "readout", _frozen(as_complex_matrix(self.readout, "readout"))
        )
        ft = {
            name: _frozen(as_complex_matrix(block, f"feedthrough[{name}]"))
            for name, block in self.feedthrough.items()
        }
        object.__setattr__(self, "feedthrough", ft)


@dataclass(frozen=True)
class QuantumLinearSystem:
    """Ito-form linear quantum system on the doubled mode vector [a; a#].

    ``n`` is the number of internal modes.  Every block (drift, channel
    drives, readouts, feedthroughs) must carry the doubled structure; shapes
    must conform to the declared channel half-widths.  ``cost_row`` is an
    optional 1 x 2n row selecting the scalar variable to be estimated.
    Instances are immutable and safe to share between threads.
    """

    n: int
    drift: ComplexMatrix
    inputs: tuple[InputChannel, ...]
    outputs: tuple[OutputChannel, ...]
    cost_row: ComplexMatrix | None = None

    def __post_init__(self):
        n = self.n
        if n < 0:
            raise ValueError("mode count must be non-negative")
        drift = _frozen(as_complex_matrix(self.drift, "drift"))
        if drift.shape != (2 * n, 2 * n):
            raise ValueError(f"drift must be {2*n}x{2*n}, got {drift.shape}")
        if not is_delta_structured(drift, DEFAULT_TOL):
            raise ValueError("drift is not doubled-structured")
        object.__setattr__(self, "drift", drift)
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))

        names = [ch.name for ch in self.inputs] + [ch.name for ch in self.outputs]
        if len(set(names)) != len(names):
            raise ValueError(f"channel names must be unique, got {names}")

        for ch in self.inputs:
            if ch.half_width < 0:
                raise ValueError(f"input {ch.name}: negative half width")
            if ch.drive.shape != (2 * n, 2 * ch.half_width):
                raise ValueError(
                    f"input {ch.name}: drive must be {2*n}x{2*ch.half_width}, "
                    f"got {ch.drive.shape}"
                )
            if not is_delta_structured(ch.drive, DEFAULT_TOL):
                raise ValueError(f"input {ch.name}: drive is not doubled-structured")

        input_widths = {ch.name: ch.half_width for ch in self.inputs}
        for ch in self.outputs:
            if ch.half_width < 0:
                raise ValueError(f"output {ch.name}: negative half width")
            if ch.readout.shape != (2 * ch.half_width, 2 * n):
                raise ValueError(
                    f"output {ch.name}: readout must be {2*ch.half_width}x{2*n}, "
                    f"got {ch.readout.shape}"
                )
            if not is_delta_structured(ch.readout, DEFAULT_TOL):
                raise ValueError(f"output {ch.name}: readout is not doubled-structured")
            for src, block in ch.feedthrough.items():
                if src not in input_widths:
                    raise ValueError(
                        f"output {ch.name}: feedthrough references unknown input {src}"
                    )
                want = (2 * ch.half_width, 2 * input_widths[src])
                if block.shape != want:
                    raise ValueError(
                        f"output {ch.name}: feedthrough[{src}] must be "
                        f"{want[0]}x{want[1]}, got {block.shape}"
                    )
                if not is_delta_structured(block, DEFAULT_TOL):
                    raise ValueError(
                        f"output {ch.name}: feedthrough[{src}] is not doubled-structured"
                    )

        if self.cost_row is not None:
            row = _frozen(as_complex_matrix(self.cost_row, "cost_row"))
            if row.shape != (1, 2 * n):
                raise ValueError(f"cost_row must be 1x{2*n}, got {row.shape}")
            object.__setattr__(self, "cost_row", row)

    # -- channel access -----------------------------------------------------

    def input(self, name: str) -> InputChannel:
        for ch in self.inputs:
            if ch.name == name:
                return ch
        raise ValueError(f"no input channel named {name!r}")

    def output(self, name: str) -> OutputChannel:
        for ch in self.outputs:
            if ch.name == name:
                return ch
        raise ValueError(f"no output channel named {name!r}")

    def has_input(self, name: str) -> bool:
        return any(ch.name == name for ch in self.inputs)

    def has_output(self, name: str) -> bool:
        return any(ch.name == name for ch in self.outputs)

    @property
    def total_input_half_width(self) -> int:
        return sum(ch.half_width for ch in self.inputs)

    @property
    def total_output_half_width(self) -> int:
        return sum(ch.half_width for ch in self.outputs)

    def feedthrough_block(self, output: str, input_: str) -> ComplexMatrix:
        """Feedthrough block, a zero matrix when none was declared."""
        out = self.output(output)
        block = out.feedthrough.get(input_)
        if block is not None:
            return block
        w_in = self.input(input_).half_width
        return np.zeros((2 * out.half_width, 2 * w_in), dtype=complex)

    # -- channel-gathered matrices (global doubled ordering) ----------------

    def gathered_drive(self) -> ComplexMatrix:
        """All input drives as one doubled matrix, inputs in declared order."""
        if not self.inputs:
            return np.zeros((2 * self.n, 0), dtype=complex)
        return hstack_delta([ch.drive for ch in self.inputs])

    def gathered_readout(self) -> ComplexMatrix:
        """All output readouts as one doubled matrix, outputs in declared order."""
        if not self.outputs:
            return np.zeros((0, 2 * self.n), dtype=complex)
        return vstack_delta([ch.readout for ch in self.outputs])

    def gathered_feedthrough(self) -> ComplexMatrix:
        """Full feedthrough over all declared outputs and inputs."""
        if not self.outputs or not self.inputs:
            rows = 2 * self.total_output_half_width
            cols = 2 * self.total_input_half_width
            return np.zeros((rows, cols), dtype=complex)
        grid = [
            [self.feedthrough_block(out.name, ch.name) for ch in self.inputs]
            for out in self.outputs
        ]
        return block_delta(grid)


class CoherentController(QuantumLinearSystem):
    """A quantum system wired as a coherent estimator/feedback controller.

    Channel contract: inputs are ``Atilde`` (fresh vacuum, possibly zero
    width) and ``Y`` (the plant output it processes); outputs are ``Ytilde``
    (the estimation field that gets homodyned) and, when the controller feeds
    back to the plant, ``U``.
    """

    def __post_init__(self):
        super().__post_init__()
        in_names = [ch.name for ch in self.inputs]
        if in_names != ["Atilde", "Y"]:
            raise ValueError(
                f"controller inputs must be ('Atilde', 'Y'), got {tuple(in_names)}"
            )
        out_names = [ch.name for ch in self.outputs]
        if out_names not in (["Ytilde"], ["Ytilde", "U"]):
            raise ValueError(
                "controller outputs must be ('Ytilde',) or ('Ytilde', 'U'), "
                f"got {tuple(out_names)}"
            )

    @property
    def has_feedback(self) -> bool:
        return self.has_output("U")


def _check_rates(kappa1: float, kappa2: float) -> None:
    if not (kappa1 > 0 and kappa2 > 0):
        raise ValueError(f"mirror rates must be positive, got {kappa1}, {kappa2}")


def build_cavity_plant(
    kappa1: float, kappa2: float, chi: complex = 0.0
) -> QuantumLinearSystem:
    """Two-mirror optical cavity plant, optionally squeezing internally.

    The single mode obeys

        da = -(gamma/2) a dt - chi a* dt - sqrt(kappa1) dA - sqrt(kappa2) dU

    with gamma = kappa1 + kappa2.  The mirror-1 field sqrt(kappa1) a dt + dA
    is the measured output ``Y``; ``U`` is the control field entering at
    mirror 2.  The estimation target is the scaled momentum-like quadrature
    (a - a#)/sqrt(2).
    """
    _check_rates(kappa1, kappa2)
    gamma = kappa1 + kappa2
    eye2 = np.eye(2, dtype=complex)
    return QuantumLinearSystem(
        n=1,
        drift=delta_embed(-gamma / 2, -chi).full,
        inputs=(
            InputChannel("A", 1, delta_embed(-np.sqrt(kappa1), 0).full),
            InputChannel("U", 1, delta_embed(-np.sqrt(kappa2), 0).full),
        ),
        outputs=(
            OutputChannel(
                "Y", 1, delta_embed(np.sqrt(kappa1), 0).full, {"A": eye2}
            ),
        ),
        cost_row=np.array([[1 / np.sqrt(2), -1 / np.sqrt(2)]], dtype=complex),
    )


def build_squeezer_controller(
    kappa1: float, kappa2: float, chi: complex
) -> CoherentController:
    """Dynamic squeezer cavity wired as a coherent feedback controller.

    Same mode dynamics as the cavity plant, with the plant output ``Y``
    driving mirror 2.  The mirror-1 field sqrt(kappa1) a dt + dAtilde is the
    estimation output ``Ytilde``; the mirror-2 field sqrt(kappa2) a dt + dY
    is fed back to the plant as ``U``.  With chi = 0 this is a plain cavity
    rewired as a controller.
    """
    _check_rates(kappa1, kappa2)
    gamma = kappa1 + kappa2
    eye2 = np.eye(2, dtype=complex)
    return CoherentController(
        n=1,
        drift=delta_embed(-gamma / 2, -chi).full,
        inputs=(
            InputChannel("Atilde", 1, delta_embed(-np.sqrt(kappa1), 0).full),
            InputChannel("Y", 1, delta_embed(-np.sqrt(kappa2), 0).full),
        ),
        outputs=(
            OutputChannel(
                "Ytilde", 1, delta_embed(np.sqrt(kappa1), 0).full, {"Atilde": eye2}
            ),
            OutputChannel(
                "U", 1, delta_embed(np.sqrt(kappa2), 0).full, {"Y": eye2}
            ),
        ),
    )


def build_beam_splitter_controller(theta_mix: float) -> CoherentController:
    """Static two-port mixer of the measured field with fresh vacuum.

    Output pair (no internal mode, no feedback path):

        Ytilde_1 =  cos(theta_mix) Y + sin(theta_mix) Atilde
        Ytilde_2 = -sin(theta_mix) Y + cos(theta_mix) Atilde

    theta_mix = pi/4 gives the 50/50 splitter used for dual homodyne
    detection.  The scattering matrix is a rotation, hence unitary.
    """
    c, s = np.cos(theta_mix), np.sin(theta_mix)
    zeros_col = np.zeros((2, 1))
    k_vacuum = delta_embed([[s], [c]], zeros_col).full
    k_measured = delta_embed([[c], [-s]], zeros_col).full
    return CoherentController(
        n=0,
        drift=np.zeros((0, 0), dtype=complex),
        inputs=(
            InputChannel("Atilde", 1, np.zeros((0, 2), dtype=complex)),
            InputChannel("Y", 1, np.zeros((0, 2), dtype=complex)),
        ),
        outputs=(
            OutputChannel(
                "Ytilde",
                2,
                np.zeros((4, 0), dtype=complex),
                {"Atilde": k_vacuum, "Y": k_measured},
            ),
        ),
    )


def is_bogoliubov(k, tol: float = DEFAULT_TOL) -> bool:
    """True when a static scattering matrix preserves field commutators.

    The condition is K J_in K^dag = J_out with J the signature matrix of the
    respective doubled field space; it requires as many outputs as inputs.
    For a passive doubled rotation it reduces to unitarity of the top block.
    """
    k = as_complex_matrix(k)
    if k.shape[0] % 2 or k.shape[1] % 2:
        raise ValueError("scattering matrix needs even dimensions")
    m_out, m_in = k.shape[0] // 2, k.shape[1] // 2
    if m_out != m_in:
        return False
    j_in = signature_matrix(m_in)
    j_out = signature_matrix(m_out)
    defect = np.max(np.abs(k @ j_in @ adjoint(k) - j_out), initial=0.0)
    return bool(defect <= tol)


# -- physical realizability ----------------------------------------------------


class RealizabilityFailure(enum.Enum):
    """Which clause of the open-oscillator conditions failed."""

    K_NOT_IDENTITY = "KNotIdentity"
    NO_COMMUTATION_MATRIX = "NoCommutationMatrix"
    WRONG_INERTIA = "WrongInertia"
    COUPLING_MISMATCH = "CouplingMismatch"
    M_NOT_HERMITIAN = "MNotHermitian"


@dataclass(frozen=True)
class NotRealizable:
    """Verdict for a system that is not an open quantum harmonic oscillator."""

    reason: RealizabilityFailure
    detail: str

    def __str__(self) -> str:
        return f"{self.reason.value}: {self.detail}"


@dataclass(frozen=True)
class PhysicalRealization:
    """Certificate that a system is a legal open quantum harmonic oscillator.

    ``commutation`` is Hermitian with inertia (n, 0, n); ``hamiltonian`` is
    Hermitian and doubled-structured; ``coupling`` collects one doubled row
    block per input channel (including any synthetic unused outputs added to
    complete the feedthrough to the identity, listed in ``padded_outputs``).
    ``residuals`` reports the max absolute defect of each defining equation.
    """

    commutation: ComplexMatrix
    hamiltonian: ComplexMatrix
    coupling: ComplexMatrix
    residuals: Mapping[str, float]
    padded_outputs: tuple[str, ...] = ()

    def __post_init__(self):
        theta = _frozen(as_complex_matrix(self.commutation, "commutation"))
        ham = _frozen(as_complex_matrix(self.hamiltonian, "hamiltonian"))
        coup = _frozen(as_complex_matrix(self.coupling, "coupling"))
        object.__setattr__(self, "commutation", theta)
        object.__setattr__(self, "hamiltonian", ham)
        object.__setattr__(self, "coupling", coup)
        object.__setattr__(self, "residuals", dict(self.residuals))
        object.__setattr__(self, "padded_outputs", tuple(self.padded_outputs))

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)


def _solve_commutation(
    drift: ComplexMatrix, rhs: ComplexMatrix
) -> tuple[ComplexMatrix, float]:
    """Hermitian Theta with F Theta + Theta F^dag = rhs, nearest to diag(I, -I).

    Solved as a real least-squares problem over the Hermitian perturbation
    E = Theta - J; when J itself satisfies the equation the minimum-norm
    answer is exactly J.  Returns the solution and the equation residual.
    """
    dim = drift.shape[0]
    j = signature_matrix(dim // 2)
    target = rhs - (drift @ j + j @ adjoint(drift))

    # real parametrization of Hermitian E: symmetric real part, antisymmetric
    # imaginary part
    basis: list[ComplexMatrix] = []
    for i in range(dim):
        for k in range(i, dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, k] = 1.0
            e[k, i] = 1.0
            basis.append(e)
    for i in range(dim):
        for k in range(i + 1, dim):
            e = np.zeros((dim, dim), dtype=complex)
            e[i, k] = 1.0j
            e[k, i] = -1.0j
            basis.append(e)

    columns = []
    for e in basis:
        image = drift @ e + e @ adjoint(drift)
        columns.append(np.concatenate([image.real.ravel(), image.imag.ravel()]))
    a = np.column_stack(columns) if basis else np.zeros((2 * dim * dim, 0))
    b = np.concatenate([target.real.ravel(), target.imag.ravel()])
    coeffs, *_ = np.linalg.lstsq(a, b, rcond=None)

    perturbation = np.zeros((dim, dim), dtype=complex)
    for c, e in zip(coeffs, basis):
        perturbation += c * e
    theta = j + perturbation
    residual = float(
        np.max(np.abs(drift @ theta + theta @ adjoint(drift) - rhs), initial=0.0)
    )
    return theta, residual


def _selection_map(
    k1: ComplexMatrix, tol: float
) -> list[int] | None:
    """Interpret the top feedthrough block as a row-wise unit selection.

    Returns, per output half-row, the index of the input it passes through,
    or None when the block is not a 0/1 selection with distinct columns.
    """
    m_out, m_in = k1.shape
    selection: list[int] = []
    used: set[int] = set()
    for row in range(m_out):
        ones = [col for col in range(m_in) if abs(k1[row, col] - 1.0) <= tol]
        zeros_ok = all(
            abs(k1[row, col]) <= tol for col in range(m_in) if col not in ones
        )
        if len(ones) != 1 or not zeros_ok or ones[0] in used:
            return None
        used.add(ones[0])
        selection.append(ones[0])
    return selection


def check_physical_realizability(
    system: QuantumLinearSystem, tol: float = DEFAULT_TOL
) -> PhysicalRealization | NotRealizable:
    """Decide whether the system is a legal open quantum harmonic oscillator.

    The feedthrough over all declared channels must concatenate to the
    identity.  When it is instead a unit-selection sub-block of a permuted
    identity (some input's feedthrough never reaches a declared output, as
    for a plant whose second mirror field is simply not observed), synthetic
    unused outputs complete it before testing; their readout rows are the
    unique ones compatible with the drive blocks.

    The commutation matrix is obtained from the covariance balance equation
    ``F Theta + Theta F^dag + G J G^dag = 0`` as the Hermitian solution
    nearest to the signature matrix; the inertia, coupling, and Hamiltonian
    conditions are then verified in order.  The first failed clause is
    reported as a :class:`NotRealizable` verdict; otherwise the certificate
    carries the max absolute defect of each defining equation.
    """
    n = system.n
    drift = system.drift
    drive = system.gathered_drive()
    readout = system.gathered_readout()
    feed = system.gathered_feedthrough()
    m_in = system.total_input_half_width
    m_out = system.total_output_half_width

    # feedthrough must be (completable to) the identity
    k1, k2 = delta_blocks(feed) if feed.size else (
        np.zeros((m_out, m_in)), np.zeros((m_out, m_in)),
    )
    k2_defect = float(np.max(np.abs(k2), initial=0.0))
    if k2_defect > tol:
        return NotRealizable(
            RealizabilityFailure.K_NOT_IDENTITY,
            "feedthrough couples annihilation and creation field sectors",
        )
    selection = _selection_map(k1, tol)
    if selection is None:
        return NotRealizable(
            RealizabilityFailure.K_NOT_IDENTITY,
            "feedthrough is not a unit sub-block of a permuted identity",
        )
    k1_defect = 0.0
    for row, col in enumerate(selection):
        pattern = np.zeros(m_in)
        pattern[col] = 1.0
        k1_defect = max(k1_defect, float(np.max(np.abs(k1[row] - pattern))))

    j_field = signature_matrix(m_in)
    theta, lyap_residual = _solve_commutation(
        drift, -(drive @ j_field @ adjoint(drive))
    )
    if lyap_residual > tol:
        return NotRealizable(
            RealizabilityFailure.NO_COMMUTATION_MATRIX,
            f"covariance balance equation unsolvable (residual {lyap_residual:.3e})",
        )
    theta_inertia = inertia(theta, tol)
    if theta_inertia != (n, 0, n):
        return NotRealizable(
            RealizabilityFailure.WRONG_INERTIA,
            f"commutation matrix inertia {theta_inertia}, need ({n}, 0, {n})",
        )

    # full coupling: declared readout rows at their selected slots, synthetic
    # rows taken from the unique N compatible with the drive blocks
    theta_inv = np.linalg.inv(theta)
    required = -j_field @ adjoint(drive) @ theta_inv
    coupling = np.array(required)
    declared_rows: list[tuple[int, int]] = []  # (slot, declared half-row)
    for row, col in enumerate(selection):
        coupling[col] = readout[row]
        coupling[m_in + col] = readout[m_out + row]
        declared_rows.append((col, row))
    padded_slots = sorted(set(range(m_in)) - {col for col, _ in declared_rows})

    coupling_defect = float(
        np.max(np.abs(drive + theta @ adjoint(coupling) @ j_field), initial=0.0)
    )
    if coupling_defect > tol:
        return NotRealizable(
            RealizabilityFailure.COUPLING_MISMATCH,
            f"drive is not -Theta N^dag J for the declared readout "
            f"(defect {coupling_defect:.3e})",
        )

    hamiltonian = 1j * theta_inv @ drift + 0.5j * adjoint(coupling) @ j_field @ coupling
    herm_defect = float(
        np.max(np.abs(hamiltonian - adjoint(hamiltonian)), initial=0.0)
    )
    if herm_defect > tol:
        return NotRealizable(
            RealizabilityFailure.M_NOT_HERMITIAN,
            f"recovered Hamiltonian matrix is not Hermitian (defect {herm_defect:.3e})",
        )
    if n and not is_delta_structured(hamiltonian, tol):
        return NotRealizable(
            RealizabilityFailure.M_NOT_HERMITIAN,
            "recovered Hamiltonian matrix is not doubled-structured",
        )
    hamiltonian = 0.5 * (hamiltonian + adjoint(hamiltonian))

    drift_defect = float(
        np.max(
            np.abs(
                drift
                + 1j * theta @ hamiltonian
                + 0.5 * theta @ adjoint(coupling) @ j_field @ coupling
            ),
            initial=0.0,
        )
    )
    readout_defect = 0.0
    for col, row in declared_rows:
        readout_defect = max(
            readout_defect,
            float(np.max(np.abs(coupling[col] - readout[row]))),
            float(np.max(np.abs(coupling[m_in + col] - readout[m_out + row]))),
        )

    slot_names = [
        f"unused:{ch.name}[{k}]" for ch in system.inputs for k in range(ch.half_width)
    ]
    padded = tuple(slot_names[i] for i in padded_slots)

    return PhysicalRealization(
        commutation=theta,
        hamiltonian=hamiltonian,
        coupling=coupling,
        residuals={
            "drift": drift_defect,
            "input_coupling": coupling_defect,
            "output_coupling": readout_defect,
            "feedthrough": max(k1_defect, k2_defect),
        },
        padded_outputs=padded,
    )


def realize(
    theta,
    hamiltonian,
    coupling,
    input_name: str = "A",
    output_name: str = "Aout",
) -> QuantumLinearSystem:
    """Construct the open oscillator with the given defining matrices.

    Forward direction of the realizability conditions: the drift is
    ``-i Theta M - (1/2) Theta N^dag J N``, the drive ``-Theta N^dag J``, the
    readout ``N``, and the feedthrough the identity.  The result has a single
    input channel and a single output channel.
    """
    theta = as_complex_matrix(theta, "theta")
    ham = as_complex_matrix(hamiltonian, "hamiltonian")
    coup = as_complex_matrix(coupling, "coupling")
    if theta.shape[0] != theta.shape[1] or theta.shape[0] % 2:
        raise ValueError(f"theta must be square with even dimension, got {theta.shape}")
    n = theta.shape[0] // 2
    if np.max(np.abs(theta - adjoint(theta)), initial=0.0) > DEFAULT_TOL:
        raise ValueError("theta must be Hermitian")
    if inertia(theta) != (n, 0, n):
        raise ValueError(f"theta must have inertia ({n}, 0, {n}), got {inertia(theta)}")
    if ham.shape != (2 * n, 2 * n):
        raise ValueError(f"hamiltonian must be {2*n}x{2*n}, got {ham.shape}")
    if np.max(np.abs(ham - adjoint(ham)), initial=0.0) > DEFAULT_TOL:
        raise ValueError("hamiltonian must be Hermitian")
    if 2 * n and not is_delta_structured(ham):
        raise ValueError("hamiltonian must be doubled-structured")
    if coup.shape[1] != 2 * n or coup.shape[0] % 2:
        raise ValueError(f"coupling must be 2m x {2*n}, got {coup.shape}")
    if coup.size and not is_delta_structured(coup):
        raise ValueError("coupling must be doubled-structured")
    m = coup.shape[0] // 2

    j_field = signature_matrix(m)
    drift = -1j * theta @ ham - 0.5 * theta @ adjoint(coup) @ j_field @ coup
    drive = -theta @ adjoint(coup) @ j_field
    return QuantumLinearSystem(
        n=n,
        drift=drift,
        inputs=(InputChannel(input_name, m, drive),),
        outputs=(
            OutputChannel(output_name, m, coup, {input_name: np.eye(2 * m, dtype=complex)}),
        ),
    )
