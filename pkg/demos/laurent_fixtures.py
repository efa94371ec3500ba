"""
Laurent expansions at the two singular fixtures
===============================================

On the singular surface J^2 = g^2 - gamma^2 the generator has no inverse, so
the response (theta sn - sH)^-1 blows up as theta -> 0. The order of that
blow-up (the pole order s) is what sets the error scaling later on.
"""

import numpy as np

from hedsense import build_perturbation, build_singular_generator, evaluate, expand_generator
from hedsense.laurent import augmented_ranks

np.set_printoptions(precision=3, suppress=True, linewidth=110)
pert = build_perturbation("uniform_frequency")   # n = I: shift every mode frequency

# HED point: g = gamma = 1, J = 0
hed = build_singular_generator(1.0, 1.0)

# The pole order is read off the ranks of the block Toeplitz matrices: it is
# the first t whose rank exceeds the previous one by the full dimension (8).
print("augmented ranks (HED):", augmented_ranks(-hed.sH, pert.sn, 3))

exp = expand_generator(hed.sH, pert.sn, K=6)
print("pole order:", exp.pole_order, " nonzero orders:", exp.nonzero_orders())

# The series terminates: X0 is the embedded generator itself, X1 the identity.
print("X0 == sH:", np.allclose(exp.X0, hed.sH), " X1 == I:", np.allclose(exp.coefficients[1], np.eye(8)))

# Off the HED line the pole is simple and every order contributes.
nonhed = build_singular_generator(np.sqrt(2.0), 1.0)
exp2 = expand_generator(nonhed.sH, pert.sn, K=6)
print("\nnon-HED pole order:", exp2.pole_order)
print("coefficient norms:", [round(float(np.linalg.norm(X)), 4) for X in exp2.coefficients])
print("X0 =\n", exp2.X0)

# Compare the truncated series with a dense inverse.
for theta in (1e-1, 1e-2, 1e-3):
    D = np.linalg.inv(theta * pert.sn - nonhed.sH)
    err = np.linalg.norm(evaluate(exp2, theta) - D) / np.linalg.norm(D)
    print(f"theta={theta:.0e}  relative error {err:.2e}")
