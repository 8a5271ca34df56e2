"""State-side separability analysis."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import nnls

from . import matcore as mc
from .errors import DegenerateBlocks, DimCap
from .maps import transposition
from .states import BipartiteState, max_entangled, random_unit_vector
from .witness import horodecki_entanglement_scan

DIM_CAP = 16
SEPARABLE_DISTANCE_TOL = 1e-6
LMO_ALTERNATIONS = 20
LMO_RESTARTS = 5
BELL_BOUND = 0.25

SEPARABLE_CERTIFIED = "SeparableCertified"
ENTANGLED_CERTIFIED = "EntangledCertified"
UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class PPTResult:
    is_ppt: bool
    min_eigenvalue: float
    spectrum: np.ndarray

    def __bool__(self):
        return self.is_ppt


@dataclass(frozen=True)
class BlockForm:
    """Operator matrix ``blocks[i][k] = U_i^* rho U_k`` with ``U_i x = x (x) e_i``.

    ``blocks`` has shape ``(dB, dB, dA, dA)``.
    """

    blocks: np.ndarray
    dA: int
    dB: int

    def assemble(self) -> np.ndarray:
        n = self.dA * self.dB
        return self.blocks.transpose(2, 0, 3, 1).reshape(n, n)


@dataclass(frozen=True)
class ProductTestResult:
    is_product_like: bool
    residual: float
    reduced: np.ndarray
    coefficients: np.ndarray
    max_commutator: float


@dataclass(frozen=True)
class DistanceResult:
    distance: float
    closest: BipartiteState
    history: list
    weights: np.ndarray
    atoms: list
    iterations: int


@dataclass(frozen=True)
class BellBoundResult:
    min_trace_norm_distance: float
    pass_: bool
    samples: int
    closest_distance: float


@dataclass
class Report:
    classification: str
    ppt: PPTResult
    horodecki_transpose_min_eig: float
    block_residual: float
    max_commutator: float
    distance: float | None
    notes: list = field(default_factory=list)


def ppt_test(state: BipartiteState) -> PPTResult:
    """Spectrum of ``(id (x) transpose) rho`` and its positivity."""
    pt = mc.partial_transpose(state.rho, state.dA, state.dB, side="B")
    spec = mc.eigvalsh(pt)
    return PPTResult(bool(spec[0] >= -mc.psd_tol(pt)), float(spec[0]), spec)


def block_representation(state: BipartiteState) -> BlockForm:
    T = state.rho.reshape(state.dA, state.dB, state.dA, state.dB)
    # blocks[i, k][a, b] = rho[(a, i), (b, k)]
    return BlockForm(T.transpose(1, 3, 0, 2).copy(), state.dA, state.dB)


def blocks_product_test(bf: BlockForm, tol: float = 1e-10) -> ProductTestResult:
    """Fit ``blocks[i][k] ~ lambda_ik rho_1`` with ``rho_1`` the normalized diagonal sum."""
    diag_sum = np.einsum("iiab->ab", bf.blocks)
    tr = np.trace(diag_sum).real
    if tr <= 1e-12:
        raise DegenerateBlocks(f"sum of diagonal blocks has trace {tr:.3e}")
    rho1 = diag_sum / tr
    norm2 = np.real(np.vdot(rho1, rho1))
    lam = np.einsum("ab,ikab->ik", rho1.conj(), bf.blocks) / norm2
    resid = bf.blocks - lam[:, :, None, None] * rho1
    residual = float(np.max(np.linalg.norm(resid, axis=(2, 3))))
    flat = bf.blocks.reshape(-1, bf.dA, bf.dA)
    comm = flat[:, None] @ flat[None, :] - flat[None, :] @ flat[:, None]
    max_comm = float(np.max(np.linalg.norm(comm, axis=(2, 3))))
    return ProductTestResult(residual <= tol, residual, rho1, lam, max_comm)


def _hs_vec(M: np.ndarray) -> np.ndarray:
    """Real coordinates of a Hermitian matrix with ``<vec A, vec B> = Tr(A B)``."""
    n = M.shape[0]
    iu = np.triu_indices(n, 1)
    s = np.sqrt(2.0)
    return np.concatenate([np.real(np.diag(M)), s * M[iu].real, s * M[iu].imag])


def _product_lmo(G: np.ndarray, dA: int, dB: int, rng, start=None):
    """Approximately minimize ``<a (x) b|G|a (x) b>`` by alternating eigenvector updates."""
    T = G.reshape(dA, dB, dA, dB)
    best = (np.inf, None, None)
    starts = [random_unit_vector(dB, rng) for _ in range(LMO_RESTARTS)]
    if start is not None:
        starts[0] = start
    for b in starts:
        for _ in range(LMO_ALTERNATIONS):
            _, a = mc.lowest_eigvec(np.einsum("k,ikjl,l->ij", b.conj(), T, b))
            val, b = mc.lowest_eigvec(np.einsum("i,ikjl,j->kl", a.conj(), T, a))
        if val < best[0]:
            best = (val, a, b)
    return best


def _corrective_weights(atoms: list, target: np.ndarray) -> np.ndarray | None:
    """Nonnegative least squares over the active atoms with a heavy sum-to-one row."""
    A = np.stack([_hs_vec(a) for a in atoms], axis=1)
    r = _hs_vec(target)
    big = 1e3
    A_aug = np.vstack([A, big * np.ones((1, A.shape[1]))])
    r_aug = np.append(r, big)
    try:
        w, _ = nnls(A_aug, r_aug, maxiter=50 * A_aug.shape[1])
    except RuntimeError:
        return None
    s = w.sum()
    if s <= 0:
        return None
    return w / s


def distance_to_separable(state: BipartiteState, iterations: int = 500, seed=None, tol: float = 1e-12) -> DistanceResult:
    """Frank-Wolfe upper bound on the Hilbert-Schmidt distance to the separable set.

    Each iteration calls a product-state linear minimization oracle on the
    gradient ``sigma - rho``, takes the exact line-search step toward that
    atom, then tries a fully corrective reweighting of all atoms found so far
    and keeps whichever point is closer. The returned distance never
    increases between iterations. The cost of the oracle and the number of
    atoms needed grow quickly with dimension, so the optimizer is capped at
    ``dA * dB <= 16``. Iteration stops early once the distance is at most
    ``tol``.
    """
    n = state.dA * state.dB
    if n > DIM_CAP:
        raise DimCap(f"dA*dB = {n} exceeds the cap of {DIM_CAP}")
    rng = np.random.default_rng(seed)
    rho = np.asarray(state.rho)
    atoms = [np.eye(n, dtype=np.complex128) / n]
    weights = np.array([1.0])
    sigma = atoms[0].copy()
    dist = float(np.linalg.norm(rho - sigma))
    history = [dist]
    last_b = None
    it = 0
    for it in range(1, iterations + 1):
        if dist <= tol:
            break
        _, a, last_b = _product_lmo(sigma - rho, state.dA, state.dB, rng, start=last_b)
        s = mc.projector(np.kron(a, last_b))
        d = s - sigma
        dd = float(np.real(np.vdot(d, d)))
        gamma = 0.0 if dd == 0 else float(np.clip(np.real(np.vdot(d, rho - sigma)) / dd, 0.0, 1.0))
        cand_atoms = atoms + [s]
        cand_w = np.append((1 - gamma) * weights, gamma)
        cand_sigma = sigma + gamma * d
        cand_dist = float(np.linalg.norm(rho - cand_sigma))
        w_fc = _corrective_weights(cand_atoms, rho)
        if w_fc is not None:
            fc_sigma = sum(wi * a for wi, a in zip(w_fc, cand_atoms))
            fc_dist = float(np.linalg.norm(rho - fc_sigma))
            if fc_dist < cand_dist:
                cand_w, cand_sigma, cand_dist = w_fc, fc_sigma, fc_dist
        if cand_dist < dist:
            keep = cand_w > 0
            atoms = [a for a, k in zip(cand_atoms, keep) if k]
            weights = cand_w[keep]
            sigma, dist = cand_sigma, cand_dist
        history.append(dist)
    closest = BipartiteState(mc.hermitize(sigma / np.trace(sigma).real), state.dA, state.dB)
    return DistanceResult(dist, closest, history, weights, atoms, it)


def bell_bound_check(samples: int, seed=None, iterations: int = 200) -> BellBoundResult:
    """Trace-norm distance from the two-qubit Bell state to random separable mixtures.

    Each sample mixes one to four pure product states with Dirichlet weights.
    The Frank-Wolfe closest separable point is included as one extra sample.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    bell = max_entangled(2).rho
    max_terms = 4

    def unit(shape):
        z = rng.standard_normal(shape + (2,)) + 1j * rng.standard_normal(shape + (2,))
        return z / np.linalg.norm(z, axis=-1, keepdims=True)

    x, y = unit((samples, max_terms)), unit((samples, max_terms))
    terms = rng.integers(1, max_terms + 1, size=samples)
    w = rng.dirichlet(np.ones(max_terms), size=samples)
    w[np.arange(max_terms)[None, :] >= terms[:, None]] = 0.0
    w /= w.sum(axis=1, keepdims=True)
    psi = np.einsum("nta,ntb->ntab", x, y).reshape(samples, max_terms, 4)
    rho0 = np.einsum("nt,nti,ntj->nij", w, psi, psi.conj())
    diff = bell[None] - rho0
    diff = (diff + diff.conj().transpose(0, 2, 1)) / 2
    dists = np.sum(np.abs(np.linalg.eigvalsh(diff)), axis=1)

    fw = distance_to_separable(max_entangled(2), iterations=iterations, seed=rng)
    closest = mc.trace_norm(bell - fw.closest.rho)
    lowest = float(min(dists.min(), closest))
    return BellBoundResult(lowest, lowest >= BELL_BOUND - 1e-9, samples, closest)


def analyze(state: BipartiteState, iterations: int = 500, seed=None) -> Report:
    """Combined PPT, transposition-map, block-structure and distance analysis."""
    ppt = ppt_test(state)
    scan = horodecki_entanglement_scan(state, [transposition(state.dB)])[0]
    prod = blocks_product_test(block_representation(state))
    notes = []
    distance = None
    if state.dim <= DIM_CAP:
        distance = distance_to_separable(
            state, iterations=iterations, seed=seed, tol=SEPARABLE_DISTANCE_TOL / 10
        ).distance
    else:
        notes.append(f"distance estimate skipped: dA*dB = {state.dim} exceeds {DIM_CAP}")

    if not ppt.is_ppt:
        classification = ENTANGLED_CERTIFIED
        notes.append("partial transpose has a negative eigenvalue")
    elif min(state.dA, state.dB) == 1 or state.dim <= 6:
        classification = SEPARABLE_CERTIFIED
        notes.append("PPT is sufficient for separability in this dimension")
    elif distance is not None and distance <= SEPARABLE_DISTANCE_TOL:
        classification = SEPARABLE_CERTIFIED
        notes.append("explicit separable decomposition found within tolerance")
    else:
        classification = UNDETERMINED
    return Report(classification, ppt, scan.min_eigenvalue, prod.residual, prod.max_commutator, distance, notes)
