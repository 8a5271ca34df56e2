"""Bipartite density matrices and pure-state decompositions."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import matcore as mc
from .errors import DimMismatch, InvalidDensity, NotNormalized, WeightError

TRACE_TOL = 1e-12
SCHMIDT_TOL = 1e-10


def _freeze(M: np.ndarray) -> np.ndarray:
    M = np.array(M, dtype=np.complex128)
    M.flags.writeable = False
    return M


def check_density(rho, name: str = "rho") -> np.ndarray:
    """Validate Hermiticity, unit trace and positivity; return a Hermitian copy."""
    rho = mc.check_hermitian(rho, name)
    tr = np.trace(rho)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidDensity(f"{name} has trace {tr.real:.15g}, expected 1")
    lam = mc.min_eig(rho)
    if lam < -mc.psd_tol(rho):
        raise InvalidDensity(f"{name} is not positive semidefinite (lambda_min = {lam:.3e})")
    return mc.hermitize(rho)


@dataclass(frozen=True)
class BipartiteState:
    """Density matrix on ``C^dA (x) C^dB``, validated on construction."""

    rho: np.ndarray
    dA: int
    dB: int

    def __post_init__(self):
        if self.dA < 1 or self.dB < 1:
            raise DimMismatch(f"factor dimensions must be positive, got ({self.dA}, {self.dB})")
        rho = mc.as_matrix(self.rho)
        n = self.dA * self.dB
        if rho.shape != (n, n):
            raise DimMismatch(f"rho has shape {rho.shape}, expected ({n}, {n})")
        object.__setattr__(self, "rho", _freeze(check_density(rho)))

    @property
    def dim(self) -> int:
        return self.dA * self.dB

    def marginal(self, keep: str = "A") -> np.ndarray:
        side = "B" if keep == "A" else "A"
        return mc.partial_trace(self.rho, self.dA, self.dB, side=side)

    def purity(self) -> float:
        return float(np.real(np.trace(self.rho @ self.rho)))


@dataclass(frozen=True)
class SchmidtForm:
    """``psi = sum_i c_i x_i (x) y_i`` with ``c`` descending and positive."""

    coefficients: np.ndarray
    left: np.ndarray
    right: np.ndarray

    @property
    def rank(self) -> int:
        return int(np.count_nonzero(self.coefficients > SCHMIDT_TOL))

    def reconstruct(self) -> np.ndarray:
        M = (self.left * self.coefficients) @ self.right.T
        return M.reshape(-1)


def product_state(rho1, rho2) -> BipartiteState:
    rho1 = check_density(rho1, "rho1")
    rho2 = check_density(rho2, "rho2")
    return BipartiteState(mc.kron(rho1, rho2), rho1.shape[0], rho2.shape[0])


def separable_mixture(weights: Sequence[float], pairs: Sequence[tuple]) -> BipartiteState:
    """Convex combination ``sum_n a_n rho1_n (x) rho2_n``."""
    w = np.asarray(weights, dtype=float)
    if len(w) != len(pairs) or len(w) == 0:
        raise WeightError(f"{len(w)} weights for {len(pairs)} product terms")
    if np.any(w < 0) or abs(w.sum() - 1.0) > TRACE_TOL * len(w):
        raise WeightError("weights must be nonnegative and sum to one")
    first = [check_density(p[0], "rho1") for p in pairs]
    second = [check_density(p[1], "rho2") for p in pairs]
    dA, dB = first[0].shape[0], second[0].shape[0]
    if any(r.shape[0] != dA for r in first) or any(r.shape[0] != dB for r in second):
        raise DimMismatch("product terms have inconsistent factor dimensions")
    rho = sum(a * np.kron(r1, r2) for a, r1, r2 in zip(w, first, second))
    return BipartiteState(rho, dA, dB)


def max_entangled_vector(d: int) -> np.ndarray:
    return mc.omega_vector(d) / np.sqrt(d)


def max_entangled(d: int) -> BipartiteState:
    """Projector onto ``(1/sqrt d) sum_i e_i (x) e_i``."""
    if d < 2:
        raise DimMismatch(f"max_entangled needs d >= 2, got {d}")
    return BipartiteState(mc.projector(mc.omega_vector(d)) / d, d, d)


def singlet() -> BipartiteState:
    psi = np.array([0, 1, -1, 0], dtype=np.complex128) / np.sqrt(2)
    return BipartiteState(mc.projector(psi), 2, 2)


def werner_state(p: float) -> BipartiteState:
    """``p |Phi+><Phi+| + (1-p) I/4`` on two qubits."""
    rho = p * max_entangled(2).rho + (1 - p) * np.eye(4) / 4
    return BipartiteState(rho, 2, 2)


def schmidt_decompose(psi, dA: int, dB: int) -> SchmidtForm:
    """Schmidt decomposition via the SVD of the ``dA x dB`` coefficient matrix."""
    psi = np.asarray(psi, dtype=np.complex128).reshape(-1)
    if psi.size != dA * dB:
        raise DimMismatch(f"vector of length {psi.size} does not fit dims ({dA}, {dB})")
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > TRACE_TOL:
        raise NotNormalized(f"vector norm is {norm:.15g}")
    X, c, Yh = np.linalg.svd(psi.reshape(dA, dB), full_matrices=False)
    keep = c > SCHMIDT_TOL
    return SchmidtForm(c[keep], X[:, keep], Yh[keep].T)


def expectation(state: BipartiteState, obs) -> float:
    obs = mc.check_hermitian(obs, "observable")
    if obs.shape != state.rho.shape:
        raise DimMismatch(f"observable shape {obs.shape} vs state {state.rho.shape}")
    val = np.trace(state.rho @ obs)
    if abs(val.imag) > 1e-12 * max(1.0, np.linalg.norm(obs)):
        raise ValueError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_unit_vector(d: int, seed=None) -> np.ndarray:
    rng = _rng(seed)
    z = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return z / np.linalg.norm(z)


def random_density(d: int, seed=None, rank: int | None = None) -> np.ndarray:
    """``G G* / Tr(G G*)`` with complex Gaussian ``G`` of shape ``(d, rank)``."""
    rng = _rng(seed)
    r = d if rank is None else rank
    G = rng.standard_normal((d, r)) + 1j * rng.standard_normal((d, r))
    rho = G @ G.conj().T
    return mc.hermitize(rho / np.trace(rho).real)


def random_separable(dA: int, dB: int, terms: int, seed=None, pure: bool = False) -> BipartiteState:
    """Random mixture of ``terms`` product states (pure factors if ``pure``)."""
    rng = _rng(seed)
    w = rng.dirichlet(np.ones(terms))
    rank = 1 if pure else None
    pairs = [(random_density(dA, rng, rank), random_density(dB, rng, rank)) for _ in range(terms)]
    return separable_mixture(w / w.sum(), pairs)


def tiles_upb() -> list[np.ndarray]:
    """The five product vectors of the 3x3 "Tiles" unextendible product basis."""
    e = np.eye(3, dtype=np.complex128)
    s = 1 / np.sqrt(2)
    u = (e[0] + e[1] + e[2]) / np.sqrt(3)
    pairs = [
        (e[0], s * (e[0] - e[1])),
        (s * (e[0] - e[1]), e[2]),
        (e[2], s * (e[1] - e[2])),
        (s * (e[1] - e[2]), e[0]),
        (u, u),
    ]
    return [np.kron(a, b) for a, b in pairs]


def upb_bound_entangled(vectors: Sequence[np.ndarray], dA: int, dB: int) -> BipartiteState:
    """Normalized projector onto the orthocomplement of an unextendible product basis."""
    P = sum(mc.projector(v) for v in vectors)
    n = dA * dB
    return BipartiteState((np.eye(n) - P) / (n - len(vectors)), dA, dB)
