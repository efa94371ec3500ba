"""Dense matrix helpers: phase-space embedding, numerical rank, pseudoinverse
and block-Toeplitz assembly.

Everything here works on small dense numpy arrays (at most a few dozen rows),
so no sparse or iterative machinery is used.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np


class DimensionError(ValueError):
    """Raised when array shapes do not fit the requested operation."""


@dataclass(frozen=True)
class RankReport:
    rank: int
    singular_values: np.ndarray
    tolerance: float


def _as_matrix(M, name="matrix") -> np.ndarray:
    M = np.asarray(M)
    if M.ndim != 2 or M.size == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D array, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError(f"{name} contains non-finite entries")
    return M


def phase_space_embed(F) -> np.ndarray:
    r"""Map an n x n complex matrix to its 2n x 2n real quadrature form.

    .. math:: \Phi[F] = \begin{pmatrix} \Re F & -\Im F \\ \Im F & \Re F \end{pmatrix}

    The map is a real-algebra homomorphism, so products and inverses carry over
    and ``det Phi[F] == |det F|**2``.
    """
    F = _as_matrix(F, "F")
    if F.shape[0] != F.shape[1]:
        raise DimensionError(f"phase-space embedding needs a square matrix, got {F.shape}")
    re = np.real(F).astype(float)
    im = np.imag(F).astype(float)
    return np.block([[re, -im], [im, re]])


def phase_space_unembed(M) -> np.ndarray:
    """Inverse of :func:`phase_space_embed` (reads the left block column)."""
    M = _as_matrix(M, "M")
    n2 = M.shape[0]
    if M.shape[1] != n2 or n2 % 2:
        raise DimensionError(f"expected a square matrix of even size, got {M.shape}")
    n = n2 // 2
    return M[:n, :n] + 1j * M[n:, :n]


def symplectic_form(n: int = 4) -> np.ndarray:
    """The symplectic form ``Phi[i I_n]``; plays the role of the imaginary unit."""
    return phase_space_embed(1j * np.eye(n))


def default_tolerance(M) -> float:
    """``eps * max(rows, cols) * sigma_max``, the usual numerical-rank cutoff."""
    M = _as_matrix(M)
    smax = np.linalg.norm(M, 2)
    tol = np.finfo(float).eps * max(M.shape) * smax
    # an all-zero matrix still needs a positive cutoff
    return float(tol) if tol > 0 else float(np.finfo(float).tiny)


def rank_with_tolerance(M, tol: float | None = None) -> RankReport:
    """Numerical rank: number of singular values strictly above ``tol``."""
    M = _as_matrix(M)
    if tol is None:
        tol = default_tolerance(M)
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    sv = np.linalg.svd(M, compute_uv=False)
    return RankReport(int(np.count_nonzero(sv > tol)), sv, float(tol))


def pseudoinverse(M, tol: float | None = None) -> np.ndarray:
    """Moore-Penrose pseudoinverse from a full SVD.

    Singular values ``<= tol`` are treated as exact zeros. The augmented
    matrices this is applied to are exactly rank deficient, so the cutoff
    matters: normal-equation shortcuts are not safe here.
    """
    M = _as_matrix(M)
    if tol is None:
        tol = default_tolerance(M)
    if not tol > 0:
        raise ValueError(f"tolerance must be positive, got {tol}")
    U, s, Vh = np.linalg.svd(M, full_matrices=False)
    keep = s > tol
    s_inv = np.zeros_like(s)
    s_inv[keep] = 1.0 / s[keep]
    return (Vh.conj().T * s_inv) @ U.conj().T


def assemble_augmented(blocks: Sequence, t: int) -> np.ndarray:
    """Block lower-triangular Toeplitz matrix built from ``A_0 .. A_t``.

    ``blocks[k]`` sits on the k-th block subdiagonal. Missing trailing blocks
    (``k >= len(blocks)``) are zero, which is how an affine pencil
    ``A_0 + theta A_1`` is handled for ``t >= 2``.
    """
    if t < 0:
        raise ValueError(f"t must be nonnegative, got {t}")
    if len(blocks) == 0:
        raise DimensionError("need at least the diagonal block A_0")
    mats = [_as_matrix(b, f"A_{k}") for k, b in enumerate(blocks)]
    n = mats[0].shape[0]
    for k, b in enumerate(mats):
        if b.shape != (n, n):
            raise DimensionError(f"A_{k} has shape {b.shape}, expected {(n, n)}")
    dtype = np.result_type(*mats)
    out = np.zeros(((t + 1) * n, (t + 1) * n), dtype=dtype)
    for i in range(t + 1):
        for j in range(i + 1):
            k = i - j
            if k < len(mats):
                out[i * n:(i + 1) * n, j * n:(j + 1) * n] = mats[k]
    return out


def block(M: np.ndarray, i: int, j: int, n: int) -> np.ndarray:
    """The (i, j) block of size n x n."""
    return M[i * n:(i + 1) * n, j * n:(j + 1) * n]
