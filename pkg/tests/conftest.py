"""Shared fixtures: canonical devices and random matrix generators."""

from __future__ import annotations

import numpy as np
import pytest

import cke


@pytest.fixture
def cavity():
    return cke.build_cavity_plant(0.5, 0.5, 0.0)


@pytest.fixture
def squeezer():
    return cke.build_squeezer_controller(5.0, 5.0, -0.5)


def random_doubled(rng, rows: int, cols: int) -> np.ndarray:
    """Random doubled matrix with standard-normal complex top blocks."""
    b1 = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    b2 = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    return cke.delta_embed(b1, b2).full


def random_oscillator_matrices(rng, n: int, m: int):
    """Random legal open-oscillator data (theta = signature, M Hermitian
    doubled, N doubled) with a well-conditioned covariance balance pencil."""
    for _ in range(50):
        m1 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        m1 = 0.5 * (m1 + m1.conj().T)
        m2 = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        m2 = 0.5 * (m2 + m2.T)
        ham = cke.delta_embed(m1, m2).full
        n1 = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        n2 = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
        coup = cke.delta_embed(n1, n2).full
        system = cke.realize(cke.signature_matrix(n), ham, coup)
        # the commutation solve needs lam_i + conj(lam_j) != 0
        eigs = np.linalg.eigvals(system.drift)
        gaps = np.abs(eigs[:, None] + eigs[None, :].conj())
        if gaps.min() > 1e-3:
            return ham, coup
    raise RuntimeError("could not draw a well-conditioned oscillator")


@pytest.fixture
def oscillator_factory():
    return random_oscillator_matrices
