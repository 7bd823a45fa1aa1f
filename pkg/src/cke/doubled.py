"""Doubled-up complex matrix algebra for annihilation/creation mode pairs.

Every linear object in this package acts on a stacked vector [a; a#] of mode
operators and their adjoints.  Matrices compatible with that stacking carry a
characteristic block structure

    [[b1, b2],
     [conj(b2), conj(b1)]]

called the doubled (or delta) form here.  This module provides the embedding,
the structure predicate, adjoints, inertia counts, the signature matrix
diag(I, -I), and the stacking/permutation helpers used by the system builders
and solvers.  All matrices are dense complex arrays; the systems of interest
have at most a few modes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numpy.typing import NDArray

ComplexMatrix = NDArray[np.complex128]

#: Absolute per-entry tolerance used by the structural predicates by default.
DEFAULT_TOL = 1e-9

__all__ = [
    "ComplexMatrix",
    "DEFAULT_TOL",
    "DoubledMatrix",
    "SignatureMatrix",
    "adjoint",
    "as_complex_matrix",
    "block_delta",
    "delta_blocks",
    "delta_embed",
    "hstack_delta",
    "inertia",
    "is_delta_structured",
    "matrix_from_json",
    "matrix_to_json",
    "signature_matrix",
    "subsystem_permutation",
    "vstack_delta",
]


def as_complex_matrix(data, name: str = "matrix") -> ComplexMatrix:
    """Coerce input to a finite 2-D complex array; scalars become 1x1."""
    m = np.atleast_2d(np.asarray(data, dtype=complex))
    if m.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {m.shape}")
    if m.size and not np.all(np.isfinite(m)):
        raise ValueError(f"{name} contains non-finite entries")
    return m


def adjoint(m) -> ComplexMatrix:
    """Conjugate transpose."""
    return as_complex_matrix(m).conj().T


@dataclass(frozen=True)
class DoubledMatrix:
    """A doubled matrix stored by its two defining top blocks.

    The full matrix [[b1, b2], [conj(b2), conj(b1)]] is materialized on
    demand, so the structure cannot drift after construction.
    """

    block1: ComplexMatrix
    block2: ComplexMatrix

    def __post_init__(self):
        b1 = as_complex_matrix(self.block1, "block1")
        b2 = as_complex_matrix(self.block2, "block2")
        if b1.shape != b2.shape:
            raise ValueError(
                f"blocks must share a shape, got {b1.shape} and {b2.shape}"
            )
        b1.setflags(write=False)
        b2.setflags(write=False)
        object.__setattr__(self, "block1", b1)
        object.__setattr__(self, "block2", b2)

    @property
    def shape(self) -> tuple[int, int]:
        p, q = self.block1.shape
        return 2 * p, 2 * q

    @property
    def full(self) -> ComplexMatrix:
        return np.block(
            [[self.block1, self.block2], [self.block2.conj(), self.block1.conj()]]
        )


def delta_embed(a1, a2) -> DoubledMatrix:
    """Embed two equal-shape blocks into their doubled form."""
    return DoubledMatrix(a1, a2)


def is_delta_structured(m, tol: float = DEFAULT_TOL) -> bool:
    """True when the lower blocks equal the conjugated upper blocks entrywise.

    Requires even dimensions; only the cross-block consistency is checked, the
    upper blocks themselves are arbitrary.
    """
    m = as_complex_matrix(m)
    rows, cols = m.shape
    if rows % 2 or cols % 2:
        raise ValueError(f"a doubled matrix needs even dimensions, got {m.shape}")
    p, q = rows // 2, cols // 2
    lower_left = np.max(np.abs(m[p:, :q] - m[:p, q:].conj()), initial=0.0)
    lower_right = np.max(np.abs(m[p:, q:] - m[:p, :q].conj()), initial=0.0)
    return bool(lower_left <= tol and lower_right <= tol)


def delta_blocks(m, tol: float = DEFAULT_TOL) -> tuple[ComplexMatrix, ComplexMatrix]:
    """Split a doubled matrix into its two defining top blocks."""
    m = as_complex_matrix(m)
    if not is_delta_structured(m, tol):
        raise ValueError("matrix is not doubled-structured within tolerance")
    p, q = m.shape[0] // 2, m.shape[1] // 2
    return m[:p, :q].copy(), m[:p, q:].copy()


def hstack_delta(blocks: Sequence[ComplexMatrix], tol: float = DEFAULT_TOL) -> ComplexMatrix:
    """Concatenate doubled blocks along columns, preserving the structure.

    The inputs share a row space; the result is the doubled matrix whose top
    blocks are the horizontal concatenations of the inputs' top blocks.
    """
    if not blocks:
        raise ValueError("need at least one block")
    pairs = [delta_blocks(b, tol) for b in blocks]
    b1 = np.hstack([p[0] for p in pairs])
    b2 = np.hstack([p[1] for p in pairs])
    return DoubledMatrix(b1, b2).full


def vstack_delta(blocks: Sequence[ComplexMatrix], tol: float = DEFAULT_TOL) -> ComplexMatrix:
    """Concatenate doubled blocks along rows, preserving the structure."""
    if not blocks:
        raise ValueError("need at least one block")
    pairs = [delta_blocks(b, tol) for b in blocks]
    b1 = np.vstack([p[0] for p in pairs])
    b2 = np.vstack([p[1] for p in pairs])
    return DoubledMatrix(b1, b2).full


def block_delta(
    grid: Sequence[Sequence[ComplexMatrix]], tol: float = DEFAULT_TOL
) -> ComplexMatrix:
    """Assemble a 2-D grid of doubled blocks into one doubled matrix."""
    if not grid or not grid[0]:
        raise ValueError("need a non-empty grid of blocks")
    pairs = [[delta_blocks(b, tol) for b in row] for row in grid]
    b1 = np.block([[p[0] for p in row] for row in pairs])
    b2 = np.block([[p[1] for p in row] for row in pairs])
    return DoubledMatrix(b1, b2).full


def subsystem_permutation(half_widths: Sequence[int]) -> NDArray[np.intp]:
    """Index map from per-subsystem stacking to one global doubled ordering.

    Per-subsystem stacking lists each subsystem's doubled pair in turn,
    [x1; x1#; x2; x2#; ...]; the global ordering lists all annihilation halves
    first, [x1; x2; ...; x1#; x2#; ...].  The returned index array ``p``
    satisfies ``global = mixed[p]``.
    """
    annihilation: list[int] = []
    creation: list[int] = []
    offset = 0
    for w in half_widths:
        if w < 0:
            raise ValueError("half widths must be non-negative")
        annihilation.extend(range(offset, offset + w))
        creation.extend(range(offset + w, offset + 2 * w))
        offset += 2 * w
    return np.asarray(annihilation + creation, dtype=np.intp)


def inertia(m, tol: float = DEFAULT_TOL) -> tuple[int, int, int]:
    """Count (positive, zero, negative) eigenvalues of a Hermitian matrix.

    Eigenvalues with magnitude below ``tol`` count as zero.
    """
    m = as_complex_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ValueError(f"inertia needs a square matrix, got {m.shape}")
    if np.max(np.abs(m - m.conj().T), initial=0.0) > tol:
        raise ValueError("inertia needs a Hermitian matrix")
    eigs = np.linalg.eigvalsh(m)
    n_zero = int(np.sum(np.abs(eigs) < tol))
    n_pos = int(np.sum(eigs >= tol))
    n_neg = int(np.sum(eigs <= -tol))
    return n_pos, n_zero, n_neg


@dataclass(frozen=True)
class SignatureMatrix:
    """The signature matrix diag(I_n, -I_n) on a doubled space of n modes."""

    half_dim: int

    def __post_init__(self):
        if self.half_dim < 0:
            raise ValueError("half_dim must be non-negative")

    @property
    def full(self) -> ComplexMatrix:
        n = self.half_dim
        return np.diag(np.concatenate([np.ones(n), -np.ones(n)])).astype(complex)


def signature_matrix(half_dim: int) -> ComplexMatrix:
    """Shortcut for ``SignatureMatrix(half_dim).full``."""
    return SignatureMatrix(half_dim).full


def matrix_from_json(data, name: str = "matrix") -> ComplexMatrix:
    """Parse the matrix literal format: array-of-arrays of [re, im] pairs."""
    if not isinstance(data, list) or not all(isinstance(r, list) for r in data):
        raise ValueError(f"{name} literal must be an array of arrays")
    rows = []
    for r in data:
        row = []
        for entry in r:
            if not isinstance(entry, (list, tuple)) or len(entry) != 2:
                raise ValueError(
                    f"{name} literal entries must be [re, im] pairs, got {entry!r}"
                )
            row.append(complex(float(entry[0]), float(entry[1])))
        rows.append(row)
    if rows and any(len(r) != len(rows[0]) for r in rows):
        raise ValueError(f"{name} literal rows have inconsistent lengths")
    return as_complex_matrix(rows, name)


def matrix_to_json(m) -> list[list[list[float]]]:
    """Render a matrix in the [re, im] pair literal format."""
    m = as_complex_matrix(m)
    return [[[float(v.real), float(v.imag)] for v in row] for row in m]
