"""Resonance response function and Gaussian input-output maps for the probe port."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .laurent import LaurentExpansion, evaluate, evaluate_derivative
from .matops import symplectic_form
from .model import CouplingSet, DynamicalGenerator, InputSpec, Perturbation

# Condition numbers above this count as "on the singularity".
SINGULAR_CONDITION = 1e13


class SingularEvaluationError(ArithmeticError):
    """The pencil is numerically singular at the requested theta."""


class UnphysicalCovarianceError(ArithmeticError):
    """An output covariance came out non positive definite."""


@dataclass(frozen=True)
class ResponseFunction:
    G: np.ndarray
    theta: float
    source: str = "direct_inverse"


@dataclass(frozen=True)
class GaussianState:
    amplitude: np.ndarray
    covariance: np.ndarray


def response_direct(gen: DynamicalGenerator, pert: Perturbation, theta: float,
                    omega: float = 0.0, omega0: float = 0.0) -> ResponseFunction:
    """``sform @ ((omega - omega0) I + theta sn - sH)^-1`` by dense inversion."""
    dim = gen.sH.shape[0]
    M = (omega - omega0) * np.eye(dim) + theta * pert.sn - gen.sH
    if np.linalg.cond(M) > SINGULAR_CONDITION:
        raise SingularEvaluationError(
            f"response evaluated on a singularity at theta={theta!r}")
    G = symplectic_form(dim // 2) @ np.linalg.inv(M)
    return ResponseFunction(G, float(theta), "direct_inverse")


def response_from_expansion(exp: LaurentExpansion, theta: float) -> ResponseFunction:
    G = symplectic_form(exp.dim // 2) @ evaluate(exp, theta)
    return ResponseFunction(G, float(theta), f"laurent({exp.truncation_order})")


def _transfer(G: np.ndarray, couplings: CouplingSet):
    W = couplings.sK_probe @ G
    return W, np.eye(W.shape[0]) - W


def output_amplitude(G: ResponseFunction, inp: InputSpec, couplings: CouplingSet) -> np.ndarray:
    """``S_out = (I - sK_probe G) S_in``; bath means vanish for thermal baths."""
    _, T = _transfer(G.G, couplings)
    return T @ inp.S_in


def _bath_noise(inp: InputSpec, couplings: CouplingSet) -> np.ndarray:
    return couplings.Kcal @ inp.V_in_B @ couplings.Kcal.T


def output_covariance(G: ResponseFunction, inp: InputSpec, couplings: CouplingSet,
                      check: bool = True) -> np.ndarray:
    """Probe-port output covariance.

    ``V = T V_A T^T + W Kcal V_B Kcal^T W^T`` with ``W = sK_probe G`` and
    ``T = I - W``. The bath term uses ``W`` on both sides so that it is a
    congruence (and so matches the ``kappa * Kcal (.) Kcal^T`` noise term of
    the small-theta analysis).
    """
    W, T = _transfer(G.G, couplings)
    V = T @ inp.V_in_A @ T.T + W @ _bath_noise(inp, couplings) @ W.T
    V = 0.5 * (V + V.T)
    if check:
        try:
            np.linalg.cholesky(V)
        except np.linalg.LinAlgError:
            raise UnphysicalCovarianceError(
                f"output covariance is not positive definite at theta={G.theta!r}") from None
    return V


def output_state(G: ResponseFunction, inp: InputSpec, couplings: CouplingSet) -> GaussianState:
    return GaussianState(output_amplitude(G, inp, couplings),
                         output_covariance(G, inp, couplings))


def heterodyne_statistics(state: GaussianState) -> GaussianState:
    """Heterodyne outcome statistics: same mean, covariance plus one vacuum unit."""
    C = state.covariance + np.eye(state.covariance.shape[0])
    return GaussianState(state.amplitude, C)


def state_builder(gen: DynamicalGenerator, pert: Perturbation, inp: InputSpec,
                  couplings: CouplingSet, expansion: LaurentExpansion | None = None,
                  detuning: float = 0.0) -> Callable[[float], GaussianState]:
    """``theta -> output state``, via dense inversion or a Laurent series."""
    if expansion is None:
        def build(theta):
            return output_state(response_direct(gen, pert, theta, detuning, 0.0), inp, couplings)
    else:
        def build(theta):
            return output_state(response_from_expansion(expansion, theta), inp, couplings)
    return build


def default_step(theta: float) -> float:
    return max(1e-6, 1e-4 * abs(theta))


def _central(builder, theta, h):
    plus, minus = builder(theta + h), builder(theta - h)
    return ((plus.amplitude - minus.amplitude) / (2 * h),
            (plus.covariance - minus.covariance) / (2 * h))


def theta_derivatives(builder: Callable[[float], GaussianState], theta: float,
                      h: float | None = None):
    """Central differences with one Richardson step: ``(4 D(h/2) - D(h)) / 3``."""
    if h is None:
        h = default_step(theta)
    dS1, dV1 = _central(builder, theta, h)
    dS2, dV2 = _central(builder, theta, h / 2)
    return (4 * dS2 - dS1) / 3, (4 * dV2 - dV1) / 3


def laurent_state_derivatives(exp: LaurentExpansion, theta: float, inp: InputSpec,
                              couplings: CouplingSet):
    """Analytic ``dS/dtheta`` and ``dV/dtheta`` from the term-by-term series derivative."""
    sform = symplectic_form(exp.dim // 2)
    G = sform @ evaluate(exp, theta)
    dG = sform @ evaluate_derivative(exp, theta)
    W, T = _transfer(G, couplings)
    dW = couplings.sK_probe @ dG
    N = _bath_noise(inp, couplings)
    VA = inp.V_in_A
    dS = -dW @ inp.S_in
    dV = -dW @ VA @ T.T - T @ VA @ dW.T + dW @ N @ W.T + W @ N @ dW.T
    return dS, dV
