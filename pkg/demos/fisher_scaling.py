"""
Estimation error near the singularities
=======================================

QFI and heterodyne CFI on a log grid of theta for the HED point, a non-HED
point of the singular surface and a regular point, followed by log-log fits
of the Cramer-Rao error bounds.
"""

import numpy as np

from hedsense import (InputSpec, asymptotic_a0, asymptotic_b0, build_couplings, build_generator,
                      build_perturbation, expand_generator, fig3_params, fisher_curve, fit_scaling)
from hedsense.survey import theta_grid

pert = build_perturbation()
inp = InputSpec()                      # coherent drive on all four q quadratures, thermal n=1
grid = theta_grid(1e-3, 1e-2, 20)

points = {
    "HED (g=1, J=0)": fig3_params(g=1.0, J=0.0),
    "non-HED (g=sqrt2, J=1)": fig3_params(g=np.sqrt(2.0), J=1.0),
    "regular (g=2, J=0.5)": fig3_params(g=2.0, J=0.5),
}

for label, params in points.items():
    gen, cpl = build_generator(params), build_couplings(params)
    samples = fisher_curve(gen, pert, inp, cpl, grid)
    q, c = fit_scaling(samples, "quantum"), fit_scaling(samples, "classical")
    print(f"{label:26s} delta_Q ~ theta^{q.slope:.3f}   delta_C ~ theta^{c.slope:.3f}")

    # Leading small-theta coefficient: a constant QFI at the regular point,
    # theta^(-2s) growth with coefficient b0 on the surface.
    exp = expand_generator(gen.sH, pert.sn)
    if exp.pole_order == 0:
        print(f"{'':26s} a0 = {asymptotic_a0(gen, pert, inp, cpl).a0:.5f}, "
              f"QFI(1e-3) = {samples[0].qfi:.5f}")
    else:
        s = exp.pole_order
        co = asymptotic_b0(exp, pert, inp, cpl)
        print(f"{'':26s} b0 = {co.b0:.4f} vs theta^{2 * s} QFI = {samples[0].qfi * grid[0] ** (2 * s):.4f}; "
              f"c0 = {co.c0:.4f} vs theta^{2 * s} CFI = {samples[0].cfi * grid[0] ** (2 * s):.4f}")
