"""
Where are the singularities?
============================

Classify a (g, J) grid at gamma = 1 and look at the eigenvalue structure at
one representative point of each class.
"""

from collections import Counter

import numpy as np

from hedsense.model import generator_matrix
from hedsense.survey import classify, eigen_structure, grid, sweep_surface

cells = sweep_surface(grid(0.5, 3.0, 26), 1.0, grid(0.0, 3.0, 31))
print("class counts on a 26 x 31 grid:", dict(Counter(c.kind for c in cells)))

# The singular surface is a curve in this slice; sample it directly.
gs = grid(1.0, 3.0, 9)
for g, J in zip(gs, np.sqrt(gs ** 2 - 1.0)):
    c = classify(g, 1.0, J)
    print(f"g={g:.2f} J={J:.3f}  {c.kind:26s} |det H|={abs(np.linalg.det(generator_matrix(g, J, 1.0))):.1e}")

# Exceptional point: eigenvalues coalesce and eigenvectors go with them
# (geometric multiplicity < algebraic). Diabolic point: degenerate but with a
# full eigenspace.
for label, (g, J) in {"exceptional": (1.0, 1.0), "diabolic": (2.0, 0.0), "HED": (1.0, 0.0)}.items():
    rows = eigen_structure(generator_matrix(g, J, 1.0))
    desc = ", ".join(f"{mu.real:+.3f}{mu.imag:+.3f}j (alg {a}, geo {m})" for mu, a, m in rows)
    print(f"{label:12s} {desc}")
