"""Linear maps between matrix algebras, stored through their Choi matrix.

A map ``S: M_dIn -> M_dOut`` is represented by ``choi = sum_ij E_ij (x) S(E_ij)``,
so the ``(i, j)`` block of size ``dOut x dOut`` is the image of the matrix unit
``E_ij``. The input system indexes the outer blocks throughout the package.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import matcore as mc
from ._search import minimize_rank_k
from .errors import BadRank, DimMismatch, NotCP, NotHermitian

CERT_TOL = 1e-10
KRAUS_TOL = 1e-10
DEFAULT_MAX_ITER = 2000

POSITIVE = "Positive"
NOT_POSITIVE = "NotPositive"
K_POSITIVE = "KPositive"
NOT_K_POSITIVE = "NotKPositive"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class LinearMapRep:
    choi: np.ndarray
    d_in: int
    d_out: int

    def __post_init__(self):
        C = np.array(mc.as_matrix(self.choi))
        n = self.d_in * self.d_out
        if C.shape != (n, n):
            raise DimMismatch(f"Choi matrix has shape {C.shape}, expected ({n}, {n})")
        C.flags.writeable = False
        object.__setattr__(self, "choi", C)

    @property
    def tensor(self) -> np.ndarray:
        """Choi matrix as ``T[i, a, j, b] = S(E_ij)[a, b]``."""
        return self.choi.reshape(self.d_in, self.d_out, self.d_in, self.d_out)

    def image(self, i: int, j: int) -> np.ndarray:
        return self.tensor[i, :, j, :].copy()

    def images(self) -> np.ndarray:
        """All block images, shape ``(dIn, dIn, dOut, dOut)``."""
        return self.tensor.transpose(0, 2, 1, 3).copy()

    @property
    def hermiticity_preserving(self) -> bool:
        return mc.is_hermitian(self.choi)

    def __call__(self, X) -> np.ndarray:
        return apply(self, X)


@dataclass(frozen=True)
class CPResult:
    is_cp: bool
    min_eigenvalue: float
    eigenvector: np.ndarray

    def __bool__(self):
        return self.is_cp


@dataclass(frozen=True)
class Verdict:
    """Outcome of a numerical positivity search.

    A negative label carries the vectors that produced the violation together
    with their exactly re-evaluated form ``value``. A positive label only says
    that no restart found a violation.
    """

    label: str
    value: float
    vectors: tuple | None
    restarts: int
    converged: int

    @property
    def holds(self) -> bool | None:
        if self.label == INCONCLUSIVE:
            return None
        return self.vectors is None


def map_from_images(images) -> LinearMapRep:
    """Assemble ``sum_ij E_ij (x) images[i][j]``."""
    imgs = np.asarray(images, dtype=np.complex128)
    if imgs.ndim != 4 or imgs.shape[0] != imgs.shape[1] or imgs.shape[2] != imgs.shape[3]:
        raise DimMismatch(f"images must have shape (dIn, dIn, dOut, dOut), got {imgs.shape}")
    d_in, d_out = imgs.shape[0], imgs.shape[2]
    choi = imgs.transpose(0, 2, 1, 3).reshape(d_in * d_out, d_in * d_out)
    return LinearMapRep(choi, d_in, d_out)


def map_from_choi(choi, d_in: int, d_out: int) -> LinearMapRep:
    return LinearMapRep(choi, d_in, d_out)


def apply(m: LinearMapRep, X) -> np.ndarray:
    """``S(X) = sum_ij X[i, j] S(E_ij)``."""
    X = mc.as_matrix(X)
    if X.shape != (m.d_in, m.d_in):
        raise DimMismatch(f"input has shape {X.shape}, map expects ({m.d_in}, {m.d_in})")
    return np.einsum("ij,iajb->ab", X, m.tensor)


def apply_on_second(m: LinearMapRep, M, d_left: int) -> np.ndarray:
    """``(id_{d_left} (x) S)(M)`` for an operator on ``C^d_left (x) C^dIn``."""
    M = mc.as_matrix(M)
    n = d_left * m.d_in
    if M.shape != (n, n):
        raise DimMismatch(f"operator has shape {M.shape}, expected ({n}, {n})")
    T = M.reshape(d_left, m.d_in, d_left, m.d_in)
    out = np.einsum("ikjl,kalb->iajb", T, m.tensor)
    return out.reshape(d_left * m.d_out, d_left * m.d_out)


def identity_map(d: int) -> LinearMapRep:
    return LinearMapRep(mc.projector(mc.omega_vector(d)), d, d)


def transposition(d: int) -> LinearMapRep:
    """``X -> X^T``; its Choi matrix is the flip operator."""
    return LinearMapRep(mc.swap_operator(d), d, d)


def map_from_kraus(kraus: Sequence) -> LinearMapRep:
    """``X -> sum_m V_m X V_m^*`` for ``dOut x dIn`` operators ``V_m``."""
    ops = [mc.as_matrix(V) for V in kraus]
    if not ops:
        raise DimMismatch("empty Kraus list")
    d_out, d_in = ops[0].shape
    if any(V.shape != (d_out, d_in) for V in ops):
        raise DimMismatch("Kraus operators have inconsistent shapes")
    # (I (x) V) Omega has components w[i, a] = V[a, i].
    vecs = np.stack([V.T.reshape(-1) for V in ops])
    return LinearMapRep(vecs.T @ vecs.conj(), d_in, d_out)


def tensor_with_identity(k: int, m: LinearMapRep) -> LinearMapRep:
    """``id_k (x) S`` acting on ``M_k (x) M_dIn``."""
    if k < 1:
        raise DimMismatch(f"k must be >= 1, got {k}")
    Ik = np.eye(k)
    T = np.einsum("ac,bd,ipjq->aicpbjdq", Ik, Ik, m.tensor)
    n = k * m.d_in * k * m.d_out
    return LinearMapRep(T.reshape(n, n), k * m.d_in, k * m.d_out)


def is_completely_positive(m: LinearMapRep) -> CPResult:
    """Exact spectral test: the map is CP iff its Choi matrix is PSD."""
    w, v = mc.hermitian_eig(m.choi)
    return CPResult(bool(w[0] >= -mc.psd_tol(m.choi)), float(w[0]), v[:, 0])


def _check_hp(m: LinearMapRep) -> None:
    if not m.hermiticity_preserving:
        raise NotHermitian("Choi matrix is not Hermitian; map does not preserve Hermiticity")


def default_restarts(m: LinearMapRep) -> int:
    return 50 * m.d_in * m.d_out


def is_positive_numeric(
    m: LinearMapRep, restarts: int | None = None, seed=None, max_iter: int = DEFAULT_MAX_ITER
) -> Verdict:
    """Search for unit ``x, y`` with ``<y|S(|x><x|)|y> < 0``.

    The form equals ``<conj(x) (x) y| choi |conj(x) (x) y>``, so this is a
    minimization over product vectors. ``NotPositive`` carries ``(x, y)``.
    """
    _check_hp(m)
    if restarts is None:
        restarts = default_restarts(m)
    res = minimize_rank_k(m.choi, m.d_in, m.d_out, 1, restarts, max_iter, seed)
    x = res.left[:, 0].conj()
    y = res.right[:, 0]
    value = positivity_form(m, x, y)
    if value < -CERT_TOL:
        return Verdict(NOT_POSITIVE, value, (x, y), res.restarts, res.converged)
    label = POSITIVE if res.converged > 0 else INCONCLUSIVE
    return Verdict(label, value, None, res.restarts, res.converged)


def positivity_form(m: LinearMapRep, x, y) -> float:
    """``<y|S(|x><x|)|y>`` for normalized copies of ``x`` and ``y``."""
    x = np.asarray(x, dtype=np.complex128)
    y = np.asarray(y, dtype=np.complex128)
    x = x / np.linalg.norm(x)
    y = y / np.linalg.norm(y)
    return float(np.real(y.conj() @ apply(m, np.outer(x, x.conj())) @ y))


def is_k_positive_numeric(
    m: LinearMapRep, k: int, restarts: int | None = None, seed=None, max_iter: int = DEFAULT_MAX_ITER
) -> Verdict:
    """Search for a Schmidt-rank-``k`` vector ``psi`` with ``<psi|choi|psi> < 0``.

    ``id_k (x) S`` is positive iff the Choi form is nonnegative on every
    vector of Schmidt rank at most ``k``. ``NotKPositive`` carries ``(psi,)``.
    """
    if not 1 <= k <= min(m.d_in, m.d_out):
        raise BadRank(f"k must lie in [1, {min(m.d_in, m.d_out)}], got {k}")
    _check_hp(m)
    if restarts is None:
        restarts = default_restarts(m)
    res = minimize_rank_k(m.choi, m.d_in, m.d_out, k, restarts, max_iter, seed)
    psi = res.psi
    value = float(np.real(psi.conj() @ m.choi @ psi))
    if value < -CERT_TOL:
        return Verdict(NOT_K_POSITIVE, value, (psi,), res.restarts, res.converged)
    label = K_POSITIVE if res.converged > 0 else INCONCLUSIVE
    return Verdict(label, value, None, res.restarts, res.converged)


def kraus_from_choi(m: LinearMapRep) -> list[np.ndarray]:
    """Kraus operators ``V_m`` (``dOut x dIn``) with ``S(X) = sum_m V_m X V_m^*``."""
    cp = is_completely_positive(m)
    if not cp.is_cp:
        raise NotCP(f"Choi matrix has lambda_min = {cp.min_eigenvalue:.3e}")
    w, v = mc.hermitian_eig(m.choi)
    ops = []
    for lam, vec in zip(w, v.T):
        if lam > KRAUS_TOL:
            ops.append((np.sqrt(lam) * vec).reshape(m.d_in, m.d_out).T)
    return ops


def hadamard_map(A) -> LinearMapRep:
    """``B -> A * B`` (entrywise); the Choi matrix carries ``A[i, j]`` at ``((i,i),(j,j))``."""
    A = mc.as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise DimMismatch(f"A must be square, got {A.shape}")
    d = A.shape[0]
    T = np.zeros((d, d, d, d), dtype=np.complex128)
    idx = np.arange(d)
    T[idx[:, None], idx[:, None], idx[None, :], idx[None, :]] = A
    return LinearMapRep(T.reshape(d * d, d * d), d, d)


def adjoint_map(m: LinearMapRep) -> LinearMapRep:
    """Dual map ``S*: M_dOut -> M_dIn`` with ``Tr(S(X) Y) = Tr(X S*(Y))``."""
    _check_hp(m)
    T = m.tensor.transpose(3, 2, 1, 0)
    n = m.d_in * m.d_out
    return LinearMapRep(T.reshape(n, n), m.d_out, m.d_in)


def compose_with_transposition(m: LinearMapRep) -> LinearMapRep:
    """``X -> S(X^T)``; the Choi matrix is partially transposed on the input factor."""
    return LinearMapRep(mc.partial_transpose(m.choi, m.d_in, m.d_out, side="A"), m.d_in, m.d_out)
