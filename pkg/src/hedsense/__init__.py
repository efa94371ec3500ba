"""Fisher-information analysis of a four-mode loss/gain bosonic sensor near
exceptional, diabolic and hybrid (HED) singularities of its generator."""

__version__ = "0.1.0"

from .matops import (DimensionError, assemble_augmented, phase_space_embed,
                     pseudoinverse, rank_with_tolerance, symplectic_form)
from .model import (CouplingSet, DynamicalGenerator, InputSpec, Perturbation, SystemParams,
                    build_couplings, build_generator, build_perturbation,
                    build_singular_generator, fig3_params)
from .laurent import (LaurentExpansion, PoleOrderError, evaluate, expand, expand_generator,
                      pole_order)
from .response import (GaussianState, ResponseFunction, heterodyne_statistics,
                       output_amplitude, output_covariance, response_direct,
                       response_from_expansion, theta_derivatives)
from .fisher import (AsymptoticCoefficients, FisherSample, asymptotic_a0, asymptotic_b0,
                     fisher_curve, gaussian_cfi_heterodyne, gaussian_qfi)
from .survey import ScalingFit, SingularityClass, classify, fit_scaling, run_scenario, sweep_surface

__all__ = [name for name in dir() if not name.startswith("_")]
