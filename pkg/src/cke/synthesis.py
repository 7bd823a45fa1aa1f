"""Optimal classical estimator synthesis for the augmented quantum system.

The homodyne record is a classical signal, so the optimal estimator is the
steady-state (complex) Kalman filter of the augmented system.  Its error
covariance is the stabilizing solution of an algebraic Riccati equation with
a drive/feedthrough cross term; the filter gain, dynamics, and the scalar
estimation cost follow from it.  ``cost_via_joint_lyapunov`` rebuilds the
same cost from the joint closed system + filter covariance as an independent
cross-check.

Noise convention: the doubled noise increment vector has identity Ito
covariance (d w d w^dag = I dt), which makes the Riccati data literally
``G G^dag``, ``G K^dag`` and ``K K^dag``.  The alternative vacuum Ito matrix
diag(I, 0) per channel is available through ``noise_model="vacuum"`` for
experimentation, default off.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, solve_continuous_are, solve_continuous_lyapunov

from .doubled import ComplexMatrix, adjoint, as_complex_matrix
from .errors import (
    IllConditioned,
    NoStabilizingSolution,
    NotHurwitz,
    SingularInnovation,
    SynthesisError,
)
from .homodyne import HomodyneScheme
from .interconnect import AugmentedSystem

__all__ = [
    "EstimatorSynthesis",
    "RiccatiSolution",
    "cost_via_joint_lyapunov",
    "is_hurwitz",
    "solve_filter_riccati",
    "solve_lyapunov",
    "synthesize_estimator",
]

#: Default relative solver tolerance.
DEFAULT_SOLVER_TOL = 1e-10

_NOISE_MODELS = ("canonical", "vacuum")


def is_hurwitz(a, margin: float = 0.0) -> bool:
    """True when every eigenvalue real part lies strictly below ``-margin``."""
    a = as_complex_matrix(a)
    if a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got {a.shape}")
    if a.size == 0:
        return True
    return bool(np.max(np.linalg.eigvals(a).real) < -margin)


def solve_lyapunov(a, q, tol: float = DEFAULT_SOLVER_TOL) -> ComplexMatrix:
    """Unique Hermitian X with ``a X + X a^dag + q = 0`` for Hurwitz ``a``."""
    a = as_complex_matrix(a)
    q = as_complex_matrix(q)
    if a.shape[0] != a.shape[1] or q.shape != a.shape:
        raise ValueError(f"need conforming square matrices, got {a.shape}, {q.shape}")
    if np.max(np.abs(q - adjoint(q)), initial=0.0) > 1e-9:
        raise ValueError("q must be Hermitian")
    if not is_hurwitz(a):
        raise NotHurwitz("coefficient matrix has an eigenvalue with Re >= 0")
    if a.size == 0:
        return np.zeros((0, 0), dtype=complex)
    x = solve_continuous_lyapunov(a, -q)
    x = 0.5 * (x + adjoint(x))
    residual = float(np.max(np.abs(a @ x + x @ adjoint(a) + q), initial=0.0))
    if residual > tol * (1.0 + np.linalg.norm(x, 2)):
        raise IllConditioned(
            f"Lyapunov residual {residual:.3e} exceeds tolerance"
        )
    return x


@dataclass(frozen=True)
class RiccatiSolution:
    """Stabilizing Riccati solution with its certification evidence.

    ``covariance`` is Hermitian positive semidefinite; ``residual`` is the
    max absolute defect of the Riccati equation; ``stabilizing`` is always
    True for returned solutions (failures raise instead); ``detectable``
    reports the eigenvector test on the measured pair, it is informational
    and not enforced.
    """

    covariance: ComplexMatrix
    residual: float
    stabilizing: bool
    detectable: bool


@dataclass(frozen=True)
class EstimatorSynthesis:
    """Steady-state Kalman filter matrices and the achieved estimation cost.

    The filter evolves as dx = filter_dynamics x dt + filter_gain dy with the
    scalar estimate estimate_row @ x; ``cost`` is the steady mean square
    estimation error.
    """

    filter_dynamics: ComplexMatrix
    filter_gain: ComplexMatrix
    estimate_row: ComplexMatrix
    riccati: RiccatiSolution
    cost: float


def _noise_covariance(
    noise_channels: tuple[tuple[str, int], ...], noise_model: str
) -> ComplexMatrix:
    """Ito covariance of the stacked doubled noise vector."""
    if noise_model not in _NOISE_MODELS:
        raise ValueError(f"noise_model must be one of {_NOISE_MODELS}, got {noise_model!r}")
    blocks = []
    for _, w in noise_channels:
        if noise_model == "canonical":
            blocks.append(np.eye(2 * w, dtype=complex))
        else:
            blocks.append(np.diag(np.concatenate([np.ones(w), np.zeros(w)])).astype(complex))
    if not blocks:
        return np.zeros((0, 0), dtype=complex)
    total = sum(b.shape[0] for b in blocks)
    out = np.zeros((total, total), dtype=complex)
    at = 0
    for b in blocks:
        out[at : at + b.shape[0], at : at + b.shape[0]] = b
        at += b.shape[0]
    return out


def _riccati_data(aug: AugmentedSystem, scheme: HomodyneScheme, noise_model: str):
    """Assemble (measurement row, innovation covariance, cross term, drive cov)."""
    if scheme.half_width != aug.measured_half_width:
        raise ValueError(
            f"scheme has {scheme.half_width} detector angles but the measured "
            f"channel has half-width {aug.measured_half_width}"
        )
    selector = scheme.selector.astype(complex)
    sigma = _noise_covariance(aug.noise_channels, noise_model)
    meas_row = selector @ aug.readout
    innovation = selector @ aug.feedthrough @ sigma @ adjoint(aug.feedthrough) @ adjoint(selector)
    cross = aug.drive @ sigma @ adjoint(aug.feedthrough) @ adjoint(selector)
    drive_cov = aug.drive @ sigma @ adjoint(aug.drive)
    return meas_row, innovation, cross, drive_cov


def _check_innovation(innovation: ComplexMatrix) -> ComplexMatrix:
    """Validate the homodyne innovation covariance; return it symmetrized."""
    imag_defect = float(np.max(np.abs(innovation.imag), initial=0.0))
    scale = 1.0 + float(np.max(np.abs(innovation.real), initial=0.0))
    if imag_defect > 1e-9 * scale:
        raise IllConditioned(
            f"innovation covariance has imaginary part {imag_defect:.3e}; "
            "the homodyne record would not be a real signal"
        )
    r = 0.5 * (innovation + adjoint(innovation))
    eigs = np.linalg.eigvalsh(r)
    top = float(eigs[-1]) if eigs.size else 0.0
    bottom = float(eigs[0]) if eigs.size else 0.0
    if bottom <= 1e-14 * (1.0 + top):
        raise SingularInnovation(
            "a measured quadrature carries no shot noise "
            f"(innovation eigenvalues in [{bottom:.3e}, {top:.3e}])"
        )
    if top / bottom >= 1e12:
        raise IllConditioned(
            f"innovation covariance condition number {top / bottom:.3e} >= 1e12"
        )
    return r


def _pbh_detectable(drift: ComplexMatrix, meas_row: ComplexMatrix) -> bool:
    """Eigenvector test: every non-decaying mode must be visible to the row."""
    if drift.size == 0:
        return True
    scale = max(1.0, float(np.linalg.norm(drift, 2)))
    eigs = np.linalg.eigvals(drift)
    dim = drift.shape[0]
    for lam in eigs:
        if lam.real < -1e-9 * scale:
            continue
        pencil = np.vstack([lam * np.eye(dim) - drift, meas_row])
        smallest = np.linalg.svd(pencil, compute_uv=False)[-1]
        if smallest <= 1e-9 * scale:
            return False
    return True


def _riccati_residual(p, drift, drive_cov, meas_row, cross, innovation) -> float:
    w = cross + p @ adjoint(meas_row)
    gain_term = w @ np.linalg.solve(innovation, adjoint(w))
    defect = drift @ p + p @ adjoint(drift) + drive_cov - gain_term
    return float(np.max(np.abs(defect), initial=0.0))


def solve_filter_riccati(
    aug: AugmentedSystem,
    scheme: HomodyneScheme,
    tol: float = DEFAULT_SOLVER_TOL,
    noise_model: str = "canonical",
) -> RiccatiSolution:
    """Stabilizing solution of the filter Riccati equation.

    Solves, for Hermitian positive semidefinite P,

        F P + P F^dag + G S G^dag
          - (G S K^dag + P H^dag) L^T R^-1 (G S K^dag + P H^dag)^dag = 0

    with R = L K S K^dag L^T the innovation covariance, L the quadrature
    selector, and S the noise Ito covariance (identity by default).  The
    solution comes from the invariant-subspace method and is certified by
    (i) an equation residual below ``tol * (1 + ||P||)``, refined by Newton
    steps when needed, and (ii) a Hurwitz filter dynamics matrix.

    Raises :class:`SingularInnovation`, :class:`IllConditioned`, or
    :class:`NoStabilizingSolution`; detectability of the measured pair is
    reported on the result, not enforced.
    """
    meas_row, innovation, cross, drive_cov = _riccati_data(aug, scheme, noise_model)
    innovation = _check_innovation(innovation)
    drive_cov = 0.5 * (drive_cov + adjoint(drive_cov))
    detectable = _pbh_detectable(aug.drift, meas_row)

    try:
        p = solve_continuous_are(
            adjoint(aug.drift),
            adjoint(meas_row),
            drive_cov,
            innovation,
            s=cross,
        )
    except (LinAlgError, ValueError) as exc:
        raise NoStabilizingSolution(f"Riccati solver failed: {exc}") from exc
    p = 0.5 * (p + adjoint(p))

    # Newton polish: the residual equation is linear in the update around the
    # closed-loop filter dynamics
    residual = _riccati_residual(p, aug.drift, drive_cov, meas_row, cross, innovation)
    for _ in range(3):
        if residual <= 1e-13 * (1.0 + np.linalg.norm(p, 2)):
            break
        w = cross + p @ adjoint(meas_row)
        gain = w @ np.linalg.inv(innovation)
        closed = aug.drift - gain @ meas_row
        if not is_hurwitz(closed):
            break
        defect = (
            aug.drift @ p
            + p @ adjoint(aug.drift)
            + drive_cov
            - gain @ innovation @ adjoint(gain)
        )
        update = solve_continuous_lyapunov(closed, -defect)
        p = 0.5 * (p + update + adjoint(p + update))
        residual = _riccati_residual(p, aug.drift, drive_cov, meas_row, cross, innovation)

    bound = tol * (1.0 + float(np.linalg.norm(p, 2))) if p.size else tol
    if residual > bound:
        raise NoStabilizingSolution(
            f"Riccati residual {residual:.3e} exceeds certification bound {bound:.3e}"
        )
    if p.size and float(np.linalg.eigvalsh(p)[0]) < -1e-10:
        raise NoStabilizingSolution("Riccati solution is not positive semidefinite")
    gain = (cross + p @ adjoint(meas_row)) @ np.linalg.inv(innovation)
    if not is_hurwitz(aug.drift - gain @ meas_row):
        raise NoStabilizingSolution("induced filter dynamics are not Hurwitz")

    return RiccatiSolution(
        covariance=p, residual=residual, stabilizing=True, detectable=detectable
    )


def synthesize_estimator(
    aug: AugmentedSystem,
    scheme: HomodyneScheme,
    tol: float = DEFAULT_SOLVER_TOL,
    noise_model: str = "canonical",
) -> EstimatorSynthesis:
    """Optimal classical estimator of the augmented system's target variable.

    The filter gain is (G S K^dag + P H^dag) L^T R^-1 with P the stabilizing
    Riccati solution, the filter dynamics F - gain L H, and the estimate row
    the augmented cost row.  The cost is cost_row P cost_row^dag, which must
    be real; an imaginary part above 1e-10 signals a broken Hermiticity
    invariant upstream and raises.
    """
    if aug.cost_row is None:
        raise ValueError("augmented system has no cost row to estimate")
    ric = solve_filter_riccati(aug, scheme, tol, noise_model)
    meas_row, innovation, cross, _ = _riccati_data(aug, scheme, noise_model)
    innovation = _check_innovation(innovation)
    gain = (cross + ric.covariance @ adjoint(meas_row)) @ np.linalg.inv(innovation)
    dynamics = aug.drift - gain @ meas_row

    value = (aug.cost_row @ ric.covariance @ adjoint(aug.cost_row))[0, 0]
    if abs(value.imag) > 1e-10:
        raise SynthesisError(
            f"estimation cost has imaginary part {value.imag:.3e}; "
            "an upstream Hermiticity invariant is broken"
        )
    return EstimatorSynthesis(
        filter_dynamics=dynamics,
        filter_gain=gain,
        estimate_row=aug.cost_row,
        riccati=ric,
        cost=float(value.real),
    )


def cost_via_joint_lyapunov(
    aug: AugmentedSystem,
    est: EstimatorSynthesis,
    scheme: HomodyneScheme,
    noise_model: str = "canonical",
) -> float:
    """Steady error variance from the joint system + filter covariance.

    Drives the filter with the same noise columns through the homodyne record
    and reads the variance of (target - estimate) off the joint steady-state
    Lyapunov solution.  Independent of the Riccati path: for a correctly
    synthesized estimator it agrees with ``est.cost``.
    """
    if aug.cost_row is None:
        raise ValueError("augmented system has no cost row to estimate")
    selector = scheme.selector.astype(complex)
    sigma = _noise_covariance(aug.noise_channels, noise_model)
    dim = aug.drift.shape[0]
    joint_drift = np.block(
        [
            [aug.drift, np.zeros((dim, dim), dtype=complex)],
            [est.filter_gain @ selector @ aug.readout, est.filter_dynamics],
        ]
    )
    joint_drive = np.vstack([aug.drive, est.filter_gain @ selector @ aug.feedthrough])
    if not is_hurwitz(joint_drift):
        raise NotHurwitz("joint system + filter dynamics are not Hurwitz")
    covariance = solve_lyapunov(joint_drift, joint_drive @ sigma @ adjoint(joint_drive))
    error_row = np.hstack([aug.cost_row, -est.estimate_row])
    value = (error_row @ covariance @ adjoint(error_row))[0, 0]
    if abs(value.imag) > 1e-10:
        raise SynthesisError(
            f"steady error variance has imaginary part {value.imag:.3e}"
        )
    return float(value.real)
