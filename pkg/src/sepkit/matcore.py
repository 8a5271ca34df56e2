"""Dense complex linear algebra on small operators.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Bipartite
operators on ``C^dA (x) C^dB`` use the row-major composite index
``(i, k) -> i * dB + k`` so that system A labels the outer blocks.
"""

from __future__ import annotations

import os
from typing import NamedTuple

import numpy as np

from .errors import DimMismatch, NoConvergence, NotHermitian

TOL_HERMITIAN = 1e-12
PSD_REL_TOL = 1e-9
PSD_TOL_ENV = "SEPKIT_PSD_TOL"


class EigenResult(NamedTuple):
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray


def as_matrix(M) -> np.ndarray:
    """Return ``M`` as a 2-D complex array (copying only when needed)."""
    arr = np.asarray(M, dtype=np.complex128)
    if arr.ndim != 2:
        raise DimMismatch(f"expected a 2-D matrix, got shape {arr.shape}")
    return arr


def _square(M: np.ndarray) -> np.ndarray:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        raise DimMismatch(f"expected a square matrix, got shape {M.shape}")
    return M


def is_hermitian(M, tol: float = TOL_HERMITIAN) -> bool:
    M = as_matrix(M)
    if M.shape[0] != M.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(M), initial=0.0)))
    return bool(np.all(np.abs(M - M.conj().T) <= tol * scale))


def check_hermitian(M, name: str = "matrix") -> np.ndarray:
    M = _square(M)
    if not is_hermitian(M):
        dev = float(np.max(np.abs(M - M.conj().T)))
        raise NotHermitian(f"{name} is not Hermitian (max deviation {dev:.3e})")
    return M


def hermitize(M) -> np.ndarray:
    M = as_matrix(M)
    return (M + M.conj().T) / 2


def psd_tol(M=None) -> float:
    """Decision threshold for ``lambda_min >= -psd_tol``.

    Scales as ``1e-9 * max(1, ||M||_F)``. Setting ``SEPKIT_PSD_TOL`` replaces
    the value with a fixed absolute tolerance.
    """
    override = os.environ.get(PSD_TOL_ENV)
    if override:
        return float(override)
    if M is None:
        return PSD_REL_TOL
    return PSD_REL_TOL * max(1.0, float(np.linalg.norm(M)))


def hermitian_eig(M) -> EigenResult:
    """Eigendecomposition of a Hermitian matrix, eigenvalues ascending."""
    M = check_hermitian(M)
    try:
        w, v = np.linalg.eigh(hermitize(M))
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(str(exc)) from exc
    return EigenResult(w, v)


def eigvalsh(M) -> np.ndarray:
    M = check_hermitian(M)
    return np.linalg.eigvalsh(hermitize(M))


def min_eig(M) -> float:
    return float(eigvalsh(M)[0])


def is_psd(M, tol: float | None = None) -> bool:
    if tol is None:
        tol = psd_tol(M)
    return min_eig(M) >= -tol


def kron(A, B) -> np.ndarray:
    """Kronecker product, ``kron(A, B)[i*rB + k, j*cB + l] = A[i, j] * B[k, l]``."""
    return np.kron(as_matrix(A), as_matrix(B))


def _split(M, dA: int, dB: int) -> np.ndarray:
    M = as_matrix(M)
    n = dA * dB
    if M.shape != (n, n):
        raise DimMismatch(f"expected a {n}x{n} matrix for dims ({dA}, {dB}), got {M.shape}")
    return M.reshape(dA, dB, dA, dB)


def partial_transpose(M, dA: int, dB: int, side: str = "B") -> np.ndarray:
    """Transpose one tensor factor of an operator on ``C^dA (x) C^dB``.

    ``side="B"`` maps entry ``((i,k),(j,l))`` to ``((i,l),(j,k))``; ``side="A"``
    maps it to ``((j,k),(i,l))``.
    """
    T = _split(M, dA, dB)
    if side == "B":
        T = T.transpose(0, 3, 2, 1)
    elif side == "A":
        T = T.transpose(2, 1, 0, 3)
    else:
        raise ValueError(f"side must be 'A' or 'B', got {side!r}")
    return np.ascontiguousarray(T).reshape(dA * dB, dA * dB)


def partial_trace(M, dA: int, dB: int, side: str = "B") -> np.ndarray:
    """Trace out subsystem ``side``; returns the marginal on the other factor."""
    T = _split(M, dA, dB)
    if side == "B":
        return np.einsum("ikjk->ij", T)
    if side == "A":
        return np.einsum("ikil->kl", T)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def hadamard_product(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    if A.shape != B.shape:
        raise DimMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    return A * B


def trace_norm(M) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    return float(np.sum(np.abs(eigvalsh(M))))


def swap_operator(d: int) -> np.ndarray:
    """The flip ``x (x) y -> y (x) x`` on ``C^d (x) C^d``, i.e. ``sum_ij E_ij (x) E_ji``."""
    S = np.zeros((d, d, d, d), dtype=np.complex128)
    idx = np.arange(d)
    S[idx[:, None], idx[None, :], idx[None, :], idx[:, None]] = 1.0
    return S.reshape(d * d, d * d)


def omega_vector(d: int) -> np.ndarray:
    """Unnormalized ``sum_i e_i (x) e_i``."""
    return np.eye(d, dtype=np.complex128).reshape(d * d)


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    return np.outer(psi, psi.conj())


def lowest_eigvec(M) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue and a unit eigenvector; no Hermiticity check."""
    w, v = np.linalg.eigh(M)
    return float(w[0]), v[:, 0]
