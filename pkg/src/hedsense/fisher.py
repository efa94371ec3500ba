"""Gaussian Fisher information, Cramer-Rao bounds and small-theta coefficients."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .laurent import LaurentExpansion
from .matops import symplectic_form
from .model import CouplingSet, DynamicalGenerator, InputSpec, Perturbation
from .response import (SingularEvaluationError, UnphysicalCovarianceError,
                       heterodyne_statistics, laurent_state_derivatives,
                       state_builder, theta_derivatives)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class FisherSample:
    theta: float
    qfi: float
    cfi: float

    @property
    def dq_error(self) -> float:
        return 1.0 / np.sqrt(self.qfi) if self.qfi > 0 else np.inf

    @property
    def dc_error(self) -> float:
        return 1.0 / np.sqrt(self.cfi) if self.cfi > 0 else np.inf


@dataclass(frozen=True)
class AsymptoticCoefficients:
    """Leading small-theta Fisher coefficients and the matrices behind them.

    ``a0`` is filled for a nonsingular generator (QFI tends to a constant),
    ``b0``/``c0`` for a singular one (QFI and heterodyne CFI grow as
    ``theta^(-2s)``). Unused matrices are ``None``.
    """

    a0: float | None = None
    b0: float | None = None
    c0: float | None = None
    Y: np.ndarray | None = None
    Z: np.ndarray | None = None
    Lambda: np.ndarray | None = None
    g0: np.ndarray | None = None
    g1: np.ndarray | None = None
    noise: np.ndarray | None = None


def _check_pd(V, name):
    V = np.asarray(V, dtype=float)
    try:
        np.linalg.cholesky(0.5 * (V + V.T))
    except np.linalg.LinAlgError:
        raise ValueError(f"{name} must be symmetric positive definite") from None
    return V


def _gaussian_information(S_dot, V, V_dot) -> float:
    VinvdV = np.linalg.solve(V, V_dot)
    mean = S_dot @ np.linalg.solve(V, S_dot)
    return float(0.5 * np.trace(VinvdV @ VinvdV) + 2.0 * mean)


def gaussian_qfi(S, V, dS, dV) -> float:
    """``1/2 Tr[dV V^-1 dV V^-1] + 2 dS^T V^-1 dS``.

    ``S`` is accepted for symmetry with the state it describes; the value
    depends on it only through ``dS``.
    """
    V = _check_pd(V, "covariance")
    return max(0.0, _gaussian_information(np.asarray(dS, float), V, np.asarray(dV, float)))


def gaussian_cfi_heterodyne(x, C, dx, dC) -> float:
    """Fisher information of heterodyne outcomes with mean ``x`` and covariance ``C``."""
    C = _check_pd(C, "heterodyne covariance")
    return max(0.0, _gaussian_information(np.asarray(dx, float), C, np.asarray(dC, float)))


def fisher_sample(builder, theta: float, derivatives=None, h: float | None = None) -> FisherSample:
    state = builder(theta)
    if derivatives is None:
        dS, dV = theta_derivatives(builder, theta, h)
    else:
        dS, dV = derivatives(theta)
    het = heterodyne_statistics(state)
    qfi = gaussian_qfi(state.amplitude, state.covariance, dS, dV)
    cfi = gaussian_cfi_heterodyne(het.amplitude, het.covariance, dS, dV)
    return FisherSample(float(theta), qfi, cfi)


def fisher_curve(gen: DynamicalGenerator, pert: Perturbation, inp: InputSpec,
                 couplings: CouplingSet, theta_grid: Iterable[float],
                 expansion: LaurentExpansion | None = None,
                 analytic: bool = False, diagnostics: list | None = None) -> list[FisherSample]:
    """QFI and heterodyne CFI along a positive, increasing theta grid.

    States come from dense inversion unless ``expansion`` is given. With
    ``analytic=True`` (requires ``expansion``) the theta-derivatives are taken
    term by term from the series instead of by finite differences. Samples
    that hit a singularity or an unphysical covariance are skipped and noted
    in ``diagnostics``.
    """
    grid = np.asarray(list(theta_grid), dtype=float)
    if grid.size and (np.any(grid <= 0) or np.any(np.diff(grid) <= 0)):
        raise ValueError("theta grid must be strictly positive and increasing")
    if analytic and expansion is None:
        raise ValueError("analytic derivatives need a Laurent expansion")
    builder = state_builder(gen, pert, inp, couplings, expansion)
    deriv = None
    if analytic:
        def deriv(theta):
            return laurent_state_derivatives(expansion, theta, inp, couplings)

    samples = []
    for theta in grid:
        try:
            samples.append(fisher_sample(builder, theta, deriv))
        except (SingularEvaluationError, UnphysicalCovarianceError, np.linalg.LinAlgError) as exc:
            msg = f"theta={theta:.6e} skipped: {exc}"
            log.warning(msg)
            if diagnostics is not None:
                diagnostics.append(msg)
    return samples


def response_coefficients(sH, sn, variant: str = "inverse"):
    """First two Neumann coefficients of the resonance response.

    ``inverse`` gives ``g_k = -sform sH^-1 (sn sH^-1)^k``, the actual
    coefficients of ``sform (theta sn - sH)^-1``. ``literal`` uses ``sH`` in
    place of the leading ``sH^-1``; it is kept only so the two can be compared.
    """
    sH = np.asarray(sH, float)
    sn = np.asarray(sn, float)
    sform = symplectic_form(sH.shape[0] // 2)
    Hinv = np.linalg.inv(sH)
    if variant == "inverse":
        lead = Hinv
    elif variant == "literal":
        lead = sH
    else:
        raise ValueError(f"unknown variant {variant!r}")
    g0 = -sform @ lead
    g1 = -sform @ lead @ sn @ Hinv
    return g0, g1


def asymptotic_a0(gen: DynamicalGenerator, pert: Perturbation, inp: InputSpec,
                  couplings: CouplingSet, variant: str = "inverse") -> AsymptoticCoefficients:
    """theta -> 0 limit of the QFI for an invertible generator.

    With ``k = sqrt(kappa)`` the probe amplitude::

        Lambda = k^2 V_A + k^2 Kcal V_B Kcal^T
        Y = V_A - k (g0 V_A + V_A g0^T) + g0 Lambda g0^T
        Z = -k (g1 V_A + V_A g1^T) + g0 Lambda g1^T + g1 Lambda g0^T
        a0 = 1/2 Tr[Y^-1 Z Y^-1 Z] + 2 k^2 S_in^T g1^T Y^-1 g1 S_in

    At ``kappa = 1`` this coincides with the ``kappa``, ``kappa^2`` weighting
    sometimes quoted for these terms.
    """
    if np.linalg.cond(gen.sH) > 1e12:
        raise SingularEvaluationError("a0 needs an invertible generator")
    g0, g1 = response_coefficients(gen.sH, pert.sn, variant)
    k = np.sqrt(couplings.kappa)
    VA = inp.V_in_A
    Lam = k ** 2 * VA + k ** 2 * couplings.Kcal @ inp.V_in_B @ couplings.Kcal.T
    Y = VA - k * (g0 @ VA + VA @ g0.T) + g0 @ Lam @ g0.T
    Z = -k * (g1 @ VA + VA @ g1.T) + g0 @ Lam @ g1.T + g1 @ Lam @ g0.T
    if np.linalg.cond(Y) > 1e12:
        raise np.linalg.LinAlgError("Y is not invertible; a0 undefined")
    YiZ = np.linalg.solve(Y, Z)
    u = g1 @ inp.S_in
    a0 = 0.5 * np.trace(YiZ @ YiZ) + 2 * k ** 2 * u @ np.linalg.solve(Y, u)
    return AsymptoticCoefficients(a0=float(a0), Y=Y, Z=Z, Lambda=Lam, g0=g0, g1=g1)


def referred_noise(sH, inp: InputSpec, couplings: CouplingSet, heterodyne: bool = False):
    """Input noise referred through the inverse probe transfer at theta = 0.

    Writing ``W = sK_probe G`` the output covariance factors as
    ``W N(theta) W^T`` with ``N = U V_A U^T + Kcal V_B Kcal^T`` and
    ``U = W^-1 - I``. ``N`` stays finite and positive definite at the pole,
    which is what makes the leading Fisher coefficient computable. The
    heterodyne vacuum unit adds ``W^-1 W^-T``.
    """
    k = np.sqrt(couplings.kappa)
    sH = np.asarray(sH, float)
    dim = sH.shape[0]
    sform = symplectic_form(dim // 2)
    # W^-1 at theta = 0
    R0 = -sH @ np.linalg.inv(sform) / k
    U0 = R0 - np.eye(dim)
    N = U0 @ inp.V_in_A @ U0.T + couplings.Kcal @ inp.V_in_B @ couplings.Kcal.T
    if heterodyne:
        N = N + R0 @ R0.T
    return 0.5 * (N + N.T)


def _leading_coefficient(P, N, S_in):
    NiP = np.linalg.solve(N, P)
    u = P @ S_in
    return float(np.trace(P @ P) + np.trace(NiP @ N @ P.T) + 2 * u @ np.linalg.solve(N, u))


def asymptotic_b0(expansion: LaurentExpansion, pert: Perturbation, inp: InputSpec,
                  couplings: CouplingSet, variant: str = "leading") -> AsymptoticCoefficients:
    """Coefficient of ``theta^(-2s)`` in the QFI (``b0``) and heterodyne CFI (``c0``).

    ``leading`` (default), with ``P = sn X0`` and ``N`` from :func:`referred_noise`::

        b0 = Tr[P P] + Tr[N^-1 P N P^T] + 2 S_in^T P^T N^-1 P S_in

    ``literal`` evaluates the same trace structure with ``V_A`` in place of
    ``N`` and ``kappa^2`` in place of the factor 2. It does not reproduce the
    numerical limit and is kept for comparison only; ``c0`` is not defined for it.
    """
    if expansion.pole_order < 1:
        raise ValueError("b0 needs a pole (s >= 1); use asymptotic_a0 instead")
    X0 = expansion.X0
    if not np.any(X0):
        raise ValueError("invalid expansion: leading coefficient is zero")
    P = np.asarray(pert.sn, float) @ X0
    S_in = inp.S_in
    if variant == "literal":
        VA = inp.V_in_A
        Vi = np.linalg.inv(VA)
        kap = couplings.kappa
        b0 = (np.trace(P @ P + Vi @ P @ VA @ P.T)
              + kap ** 2 * S_in @ P.T @ Vi @ P @ S_in)
        return AsymptoticCoefficients(b0=float(b0))
    if variant != "leading":
        raise ValueError(f"unknown variant {variant!r}")
    if couplings.kappa == 0:
        # probe decoupled: output carries no theta dependence
        return AsymptoticCoefficients(b0=0.0, c0=0.0)
    sH = -expansion.A0
    N = referred_noise(sH, inp, couplings)
    NC = referred_noise(sH, inp, couplings, heterodyne=True)
    return AsymptoticCoefficients(b0=_leading_coefficient(P, N, S_in),
                                  c0=_leading_coefficient(P, NC, S_in),
                                  noise=N)
