"""Multi-start minimization of a Hermitian form over low Schmidt-rank vectors.

Minimizes ``<psi|C|psi>`` over unit ``psi = sum_{r<k} u_r (x) v_r`` on
``C^d1 (x) C^d2`` by exact alternating updates: with one factor held fixed
(and orthonormalized), the optimal other factor is the lowest eigenvector of
the compressed form. Every half-step is a global minimum of a restricted
problem, so the objective is monotone per restart. All restarts run as one
batch, which keeps the result independent of scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

CONVERGENCE_TOL = 1e-12


@dataclass(frozen=True)
class SearchResult:
    value: float
    psi: np.ndarray
    left: np.ndarray
    right: np.ndarray
    converged: int
    restarts: int


def _random_complex(rng, shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def _orthonormal_columns(B: np.ndarray) -> np.ndarray:
    Q, _ = np.linalg.qr(B)
    return Q


def minimize_rank_k(
    C: np.ndarray,
    d1: int,
    d2: int,
    k: int = 1,
    restarts: int = 50,
    max_iter: int = 500,
    seed=None,
) -> SearchResult:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    C = np.asarray(C, dtype=np.complex128)
    C = (C + C.conj().T) / 2
    scale = max(1.0, float(np.linalg.norm(C)))
    R = max(1, int(restarts))
    I1 = np.eye(d1)
    I2 = np.eye(d2)

    V = _orthonormal_columns(_random_complex(rng, (R, d2, k)))
    prev = np.full(R, np.inf)
    done = np.zeros(R, dtype=bool)
    vals = prev
    U = None
    for _ in range(max_iter):
        # psi[(i,a)] = sum_r U[i,r] V[a,r]; update U with V fixed.
        L = np.einsum("ij,nar->niajr", I1, V).reshape(R, d1 * d2, d1 * k)
        w, vec = np.linalg.eigh(L.conj().transpose(0, 2, 1) @ C @ L)
        U = _orthonormal_columns(vec[:, :, 0].reshape(R, d1, k))
        # Update V with the orthonormalized U fixed.
        L = np.einsum("nir,ab->niarb", U, I2).reshape(R, d1 * d2, k * d2)
        w, vec = np.linalg.eigh(L.conj().transpose(0, 2, 1) @ C @ L)
        V = vec[:, :, 0].reshape(R, k, d2).transpose(0, 2, 1)
        vals = w[:, 0]
        # A restart counts as converged once a step stalls, even if it later drifts by rounding.
        done |= np.abs(prev - vals) <= CONVERGENCE_TOL * scale
        if np.all(done):
            break
        prev = vals
        V = _orthonormal_columns(V) if k > 1 else V / np.linalg.norm(V, axis=1, keepdims=True)

    psi = np.einsum("nir,nar->nia", U, V).reshape(R, d1 * d2)
    psi /= np.linalg.norm(psi, axis=1, keepdims=True)
    exact = np.real(np.einsum("ni,ij,nj->n", psi.conj(), C, psi))
    best = int(np.argmin(exact))
    return SearchResult(
        value=float(exact[best]),
        psi=psi[best],
        left=U[best],
        right=V[best],
        converged=int(np.count_nonzero(done)),
        restarts=R,
    )
