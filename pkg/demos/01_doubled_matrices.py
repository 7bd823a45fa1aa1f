"""Doubled-up matrices: the block convention every model in cke lives in.

A linear quantum mode couples its annihilation operator a and its adjoint a*,
so every system matrix acts on the stacked vector [a; a#].  Matrices
compatible with that stacking have mirrored lower blocks: the doubled form.
"""

import numpy as np

from cke import (
    SignatureMatrix,
    adjoint,
    delta_embed,
    inertia,
    is_delta_structured,
    signature_matrix,
)

print("== embedding two blocks ==")
m = delta_embed([[1.0, 2.0]], [[0.5j, 0.0]])
print("top blocks:\n", m.block1, "\n", m.block2)
print("full doubled matrix:\n", m.full)
print("structured?", is_delta_structured(m.full, 1e-12))

print("\n== the structure is a real constraint ==")
rotation = np.array([[0.0, 1.0], [-1.0, 0.0]])
print("rotation structured?", is_delta_structured(rotation, 1e-12))

print("\n== adjoints swap and transpose the defining blocks ==")
rng = np.random.default_rng(0)
a1 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
a2 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
lhs = adjoint(delta_embed(a1, a2).full)
rhs = delta_embed(a1.conj().T, a2.T).full
print("adjoint(delta(a1,a2)) == delta(a1^dag, a2^T)?", np.allclose(lhs, rhs))

print("\n== the signature matrix diag(I, -I) ==")
j = SignatureMatrix(2)
print(j.full.real)
print("squares to identity?", np.allclose(j.full @ j.full, np.eye(4)))
print("inertia (pos, zero, neg):", inertia(j.full))
print("note: the signature matrix itself is NOT doubled-structured:",
      is_delta_structured(signature_matrix(1), 1e-12))
