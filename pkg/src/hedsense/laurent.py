"""Laurent expansion of the inverse of a singular affine pencil.

For ``A(theta) = A0 + theta * A1`` with singular ``A0`` the inverse has a pole
at ``theta = 0``::

    A(theta)^-1 = theta^-s (X_0 + theta X_1 + theta^2 X_2 + ...)

The pole order ``s`` is the first ``t`` at which the rank of the block
Toeplitz matrix built from ``A0, A1`` jumps by the full dimension ``n``.
The top block row of its pseudoinverse then seeds a recursion for the
coefficients (Sain & Massey's construction).

With ``A0 = -sH`` and ``A1 = sn`` this gives ``(theta sn - sH)^-1``. The
symplectic-form prefactor of the response function is *not* folded in here.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .matops import (DimensionError, assemble_augmented, block, pseudoinverse,
                     rank_with_tolerance)

log = logging.getLogger(__name__)

DEFAULT_TRUNCATION = 6
DEFAULT_MAX_POLE = 4
ZERO_CUTOFF = 1e-12


class PoleOrderError(RuntimeError):
    """No rank jump of full size was found up to ``max_s``."""


@dataclass(frozen=True)
class GeneralizedInverseBlocks:
    """Top block row ``G_00 .. G_0s`` of the augmented-matrix pseudoinverse."""

    blocks: tuple

    @property
    def pole_order(self) -> int:
        return len(self.blocks) - 1

    def __getitem__(self, j):
        return self.blocks[j]


@dataclass(frozen=True)
class LaurentExpansion:
    pole_order: int
    coefficients: tuple
    truncation_order: int
    A0: np.ndarray
    A1: np.ndarray
    inverse_blocks: GeneralizedInverseBlocks

    @property
    def X0(self) -> np.ndarray:
        return self.coefficients[0]

    @property
    def dim(self) -> int:
        return self.A0.shape[0]

    def nonzero_orders(self) -> list[int]:
        return [k for k, X in enumerate(self.coefficients) if np.any(X)]


def _pencil_blocks(A0, A1):
    A0 = np.asarray(A0, dtype=float)
    A1 = np.asarray(A1, dtype=float)
    if A0.ndim != 2 or A0.shape[0] != A0.shape[1]:
        raise DimensionError(f"A0 must be square, got {A0.shape}")
    if A1.shape != A0.shape:
        raise DimensionError(f"A1 has shape {A1.shape}, expected {A0.shape}")
    return A0, A1


def augmented_ranks(A0, A1, t_max: int, tol: float | None = None) -> list[int]:
    """Ranks of the augmented matrices for ``t = 0 .. t_max``."""
    A0, A1 = _pencil_blocks(A0, A1)
    return [rank_with_tolerance(assemble_augmented([A0, A1], t), tol).rank
            for t in range(t_max + 1)]


def pole_order(A0, A1, tol: float | None = None, max_s: int = DEFAULT_MAX_POLE) -> int:
    """Smallest ``t`` with ``rank A^(t) - rank A^(t-1) == n`` (rank ``A^(-1)`` is 0).

    Returns 0 when ``A0`` itself is invertible at the given tolerance.
    """
    A0, A1 = _pencil_blocks(A0, A1)
    if max_s < 1:
        raise ValueError(f"max_s must be at least 1, got {max_s}")
    n = A0.shape[0]
    prev = 0
    for t in range(max_s + 1):
        r = rank_with_tolerance(assemble_augmented([A0, A1], t), tol).rank
        if r - prev == n:
            return t
        prev = r
    raise PoleOrderError(f"pole order undetected for t <= {max_s}")


def inverse_blocks(A0, A1, s: int, tol: float | None = None) -> GeneralizedInverseBlocks:
    A0, A1 = _pencil_blocks(A0, A1)
    n = A0.shape[0]
    G = pseudoinverse(assemble_augmented([A0, A1], s), tol)
    return GeneralizedInverseBlocks(tuple(block(G, 0, j, n) for j in range(s + 1)))


def expand(A0, A1, K: int = DEFAULT_TRUNCATION, tol: float | None = None,
           max_s: int = DEFAULT_MAX_POLE) -> LaurentExpansion:
    """Coefficients ``X_0 .. X_K`` of ``(A0 + theta A1)^-1`` about ``theta = 0``.

    ``X_0`` is the block ``G_0s``; for ``k >= 1``::

        X_k = sum_j G_0j (delta_{j+k,s} I - sum_{i=1..k} A_{i+j} X_{k-i})

    with ``A_m = 0`` for ``m >= 2``. Coefficients whose norm falls below
    ``1e-12 * ||X_0||`` are replaced by exact zeros.
    """
    A0, A1 = _pencil_blocks(A0, A1)
    if K < 0:
        raise ValueError(f"truncation order must be nonnegative, got {K}")
    n = A0.shape[0]
    s = pole_order(A0, A1, tol, max_s)
    G = inverse_blocks(A0, A1, s, tol)
    taylor = [A0, A1]

    def A(m):
        return taylor[m] if m < len(taylor) else None

    eye = np.eye(n)
    X = [G[s].copy()]
    for k in range(1, K + 1):
        Xk = np.zeros((n, n))
        for j in range(s + 1):
            inner = eye.copy() if j + k == s else np.zeros((n, n))
            for i in range(1, k + 1):
                Am = A(i + j)
                if Am is not None:
                    inner -= Am @ X[k - i]
            Xk += G[j] @ inner
        X.append(Xk)

    scale = np.linalg.norm(X[0])
    if scale == 0:
        raise PoleOrderError("leading coefficient vanished")
    cleaned = []
    for Xk in X:
        Xk = np.where(np.abs(Xk) <= ZERO_CUTOFF * scale, 0.0, Xk)
        if np.linalg.norm(Xk) <= ZERO_CUTOFF * scale:
            Xk = np.zeros_like(Xk)
        Xk.setflags(write=False)
        cleaned.append(Xk)
    log.debug("expansion: s=%d, nonzero orders %s", s,
              [k for k, Xk in enumerate(cleaned) if np.any(Xk)])
    return LaurentExpansion(s, tuple(cleaned), K, A0, A1, G)


def expand_generator(sH, sn, K: int = DEFAULT_TRUNCATION, tol: float | None = None,
                     max_s: int = DEFAULT_MAX_POLE) -> LaurentExpansion:
    """Expansion of ``(theta sn - sH)^-1``."""
    return expand(-np.asarray(sH, dtype=float), sn, K, tol, max_s)


def evaluate(exp: LaurentExpansion, theta: float) -> np.ndarray:
    """``theta^-s * sum_k theta^k X_k``."""
    if theta == 0:
        if exp.pole_order >= 1:
            raise ValueError("cannot evaluate a Laurent series at its pole (theta=0)")
        return exp.coefficients[0].copy()
    out = np.zeros_like(exp.coefficients[0])
    for Xk in reversed(exp.coefficients):
        out = out * theta + Xk
    return out * float(theta) ** (-exp.pole_order)


def evaluate_derivative(exp: LaurentExpansion, theta: float) -> np.ndarray:
    """Term-by-term theta-derivative of the truncated series."""
    if theta == 0:
        raise ValueError("derivative of a Laurent series is not defined at theta=0")
    s = exp.pole_order
    out = np.zeros_like(exp.coefficients[0])
    for k, Xk in enumerate(exp.coefficients):
        p = k - s
        if p != 0:
            out = out + p * float(theta) ** (p - 1) * Xk
    return out


def residual(exp: LaurentExpansion, theta: float) -> float:
    """Spectral norm of ``(A0 + theta A1) Ghat(theta) - I``."""
    A = exp.A0 + theta * exp.A1
    return float(np.linalg.norm(A @ evaluate(exp, theta) - np.eye(exp.dim), 2))
