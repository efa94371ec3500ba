"""Four-mode loss/gain sensor: generator, perturbation, couplings and inputs.

Modes 1 and 3 are lossy, modes 2 and 4 carry gain. ``g`` couples each
loss/gain pair (1-2, 3-4) and ``J`` couples modes of the same type (1-3, 2-4).
All four modes share the frequency ``omega0`` and are probed with rate
``kappa``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .matops import phase_space_embed

N_MODES = 4


def _frozen(a) -> np.ndarray:
    a = np.array(a)
    a.setflags(write=False)
    return a


def _four(x, name: str) -> tuple[float, ...]:
    arr = np.broadcast_to(np.asarray(x, dtype=float), (N_MODES,))
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite, got {x!r}")
    return tuple(float(v) for v in arr)


@dataclass(frozen=True)
class SystemParams:
    """Physical rates and couplings. Rates are in units of the loss/gain rate.

    ``gamma`` and ``(kappa, eta)`` are independent knobs: ``gamma`` enters the
    generator, ``kappa``/``eta`` enter the input-output couplings. Use
    :meth:`from_bath_rates` to tie them together.
    """

    g: float = 1.0
    J: float = 0.0
    gamma: tuple = (1.0, 1.0, 1.0, 1.0)
    kappa: float = 1.0
    eta: tuple = (0.5, 0.5, 0.5, 0.5)
    omega0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "gamma", _four(self.gamma, "gamma"))
        object.__setattr__(self, "eta", _four(self.eta, "eta"))
        for name in ("g", "J", "kappa", "omega0"):
            val = float(getattr(self, name))
            if not np.isfinite(val):
                raise ValueError(f"{name} must be finite, got {val}")
            object.__setattr__(self, name, val)
        if self.kappa < 0:
            raise ValueError(f"kappa must be nonnegative, got {self.kappa}")
        if min(self.eta) < 0:
            raise ValueError(f"eta must be nonnegative, got {self.eta}")

    @classmethod
    def from_bath_rates(cls, g: float, J: float, kappa: float, eta: Sequence[float],
                        omega0: float = 0.0) -> "SystemParams":
        """Derive the net rates: loss modes (eta + kappa)/2, gain modes (eta - kappa)/2."""
        e = _four(eta, "eta")
        gamma = ((e[0] + kappa) / 2, (e[1] - kappa) / 2,
                 (e[2] + kappa) / 2, (e[3] - kappa) / 2)
        return cls(g=g, J=J, gamma=gamma, kappa=kappa, eta=e, omega0=omega0)

    @property
    def balanced(self) -> bool:
        return len(set(self.gamma)) == 1

    def replace(self, **changes) -> "SystemParams":
        kw = dict(g=self.g, J=self.J, gamma=self.gamma, kappa=self.kappa,
                  eta=self.eta, omega0=self.omega0)
        kw.update(changes)
        return SystemParams(**kw)


def fig3_params(g: float = 1.0, J: float = 0.0) -> SystemParams:
    """Rates used for the error-scaling figure: gamma=1, kappa=1, eta_l=0.5.

    With these numbers ``gamma_2 = (eta_2 - kappa)/2`` would be negative, so
    gamma is kept as an independent input rather than derived.
    """
    return SystemParams(g=g, J=J, gamma=(1.0,) * 4, kappa=1.0, eta=(0.5,) * 4)


@dataclass(frozen=True)
class DynamicalGenerator:
    H: np.ndarray
    sH: np.ndarray

    @classmethod
    def from_matrix(cls, H) -> "DynamicalGenerator":
        H = np.asarray(H, dtype=complex)
        return cls(_frozen(H), _frozen(phase_space_embed(H)))

    @property
    def n(self) -> int:
        return self.H.shape[0]


@dataclass(frozen=True)
class Perturbation:
    n: np.ndarray
    sn: np.ndarray

    @property
    def is_zero(self) -> bool:
        return not np.any(self.sn)


@dataclass(frozen=True)
class CouplingSet:
    K_probe: np.ndarray
    K_diss: np.ndarray
    K_amp: np.ndarray
    sK_probe: np.ndarray
    sK_diss: np.ndarray
    sK_amp: np.ndarray
    Kcal: np.ndarray
    kappa: float


@dataclass(frozen=True)
class InputSpec:
    """Gaussian probe: mean quadratures plus thermal occupations."""

    S_in: np.ndarray = field(
        default_factory=lambda: _frozen([1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0]))
    n_A: float = 1.0
    n_B: float = 1.0

    def __post_init__(self):
        S = np.asarray(self.S_in, dtype=float)
        if S.shape != (2 * N_MODES,) or not np.all(np.isfinite(S)):
            raise ValueError(f"S_in must be a finite 8-vector, got {self.S_in!r}")
        object.__setattr__(self, "S_in", _frozen(S))
        if self.n_A < 0 or self.n_B < 0:
            raise ValueError("thermal occupations must be nonnegative")

    @property
    def V_in_A(self) -> np.ndarray:
        return (2 * self.n_A + 1) * np.eye(2 * N_MODES)

    @property
    def V_in_B(self) -> np.ndarray:
        return (2 * self.n_B + 1) * np.eye(4 * N_MODES)


def generator_matrix(g, J, gamma) -> np.ndarray:
    g1, g2, g3, g4 = _four(gamma, "gamma")
    return np.array([
        [-1j * g1, g, J, 0],
        [g, 1j * g2, 0, J],
        [J, 0, -1j * g3, g],
        [0, J, g, 1j * g4],
    ], dtype=complex)


def build_generator(params: SystemParams) -> DynamicalGenerator:
    return DynamicalGenerator.from_matrix(generator_matrix(params.g, params.J, params.gamma))


def singular_coupling(g: float, gamma: float) -> float:
    """Positive root ``J = sqrt(g^2 - gamma^2)`` placing H on the singular surface."""
    d = g * g - gamma * gamma
    if d < 0:
        raise ValueError(
            f"g^2 < gamma^2 (g={g}, gamma={gamma}): complex-J branch is not modelled")
    return float(np.sqrt(d))


def build_singular_generator(g: float, gamma: float) -> DynamicalGenerator:
    """Balanced generator with ``J = +sqrt(g^2 - gamma^2)``, so ``det H = 0``."""
    return DynamicalGenerator.from_matrix(
        generator_matrix(g, singular_coupling(g, gamma), gamma))


def build_perturbation(kind: str = "uniform_frequency", matrix=None) -> Perturbation:
    """``uniform_frequency`` shifts every mode frequency (n = I); ``custom`` embeds ``matrix``."""
    if kind == "uniform_frequency":
        n = np.eye(N_MODES, dtype=complex)
    elif kind == "custom":
        if matrix is None:
            raise ValueError("custom perturbation needs a matrix")
        n = np.asarray(matrix, dtype=complex)
        if n.shape != (N_MODES, N_MODES):
            raise ValueError(f"perturbation matrix must be 4x4, got {n.shape}")
    else:
        raise ValueError(f"unknown perturbation kind {kind!r}")
    return Perturbation(_frozen(n), _frozen(phase_space_embed(n)))


def build_couplings(params: SystemParams) -> CouplingSet:
    k = np.sqrt(params.kappa)
    e = np.sqrt(np.asarray(params.eta))
    K_probe = k * np.eye(N_MODES)
    K_diss = np.diag([e[0], 0.0, e[2], 0.0])
    K_amp = np.diag([0.0, -e[1], 0.0, -e[3]])
    Z = np.zeros((N_MODES, N_MODES))
    Kcal = np.block([[K_diss, Z, K_amp, Z],
                     [Z, K_diss, Z, K_amp]])
    return CouplingSet(
        K_probe=_frozen(K_probe), K_diss=_frozen(K_diss), K_amp=_frozen(K_amp),
        sK_probe=_frozen(np.block([[K_probe, Z], [Z, K_probe]])),
        sK_diss=_frozen(np.block([[K_diss, Z], [Z, K_diss]])),
        sK_amp=_frozen(np.block([[K_amp, Z], [Z, -K_amp]])),
        Kcal=_frozen(Kcal),
        kappa=params.kappa,
    )
