"""Physical realizability: which matrices describe a real open oscillator?

Arbitrary state-space matrices in the doubled form generally do not
correspond to any physical device.  A legal open quantum harmonic oscillator
is pinned down by a commutation matrix, a Hamiltonian matrix, and a coupling
matrix; the checker recovers them (or names the violated condition).
"""

import dataclasses

import numpy as np

from cke import (
    NotRealizable,
    OutputChannel,
    build_cavity_plant,
    build_squeezer_controller,
    check_physical_realizability,
    delta_embed,
    realize,
    signature_matrix,
)

print("== a two-mirror cavity is realizable ==")
cavity = build_cavity_plant(kappa1=0.5, kappa2=0.5, chi=0.0)
cert = check_physical_realizability(cavity, tol=1e-9)
print("commutation matrix (the canonical one):\n", cert.commutation.real)
print("hamiltonian matrix (free cavity, no detuning):\n", cert.hamiltonian.real)
print("padded unused outputs:", cert.padded_outputs)
print("  (the second mirror's field exists physically even though the model")
print("   never observes it; the checker completes it automatically)")
print("max residual of the defining equations:", f"{cert.max_residual:.2e}")

print("\n== a squeezer stores its nonlinearity in the Hamiltonian matrix ==")
squeezer = build_squeezer_controller(kappa1=5.0, kappa2=5.0, chi=-0.5)
cert = check_physical_realizability(squeezer, tol=1e-9)
print(cert.hamiltonian)

print("\n== scaling the feedthrough breaks physicality ==")
mutated = dataclasses.replace(
    cavity,
    outputs=(
        OutputChannel(
            "Y", 1, cavity.output("Y").readout, {"A": 2.0 * np.eye(2, dtype=complex)}
        ),
    ),
)
verdict = check_physical_realizability(mutated, tol=1e-9)
assert isinstance(verdict, NotRealizable)
print("verdict:", verdict)

print("\n== realize() is the forward direction ==")
rebuilt = realize(cert.commutation, cert.hamiltonian, cert.coupling)
print("drift of the rebuilt squeezer:\n", rebuilt.drift.real)
print("matches the builder?", np.allclose(rebuilt.drift, squeezer.drift))

print("\n== a damped mode with no bath is NOT a legal closed system ==")
from cke import QuantumLinearSystem

lonely = QuantumLinearSystem(
    n=1, drift=delta_embed(-0.5, 0).full, inputs=(), outputs=()
)
print("verdict:", check_physical_realizability(lonely, tol=1e-9))
print("(decay requires a place for the energy to go)")
print("\nsignature matrix for reference:\n", signature_matrix(1).real)
