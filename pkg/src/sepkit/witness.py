"""Entanglement witnesses and the witness -> positive map construction.

For a Hermitian ``H`` on ``C^dA (x) C^dB`` define ``V_i y = e_i (x) y`` and
``S(E_ij) = V_i^* H V_j``. With the package's block convention ``V_i^* H V_j``
is exactly the ``(i, j)`` block of ``H``, so ``H`` is the Choi matrix of
``S``. ``S`` is positive when ``H`` is block-positive and fails to be
completely positive when ``H`` has a negative eigenvalue.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import matcore as mc
from ._search import minimize_rank_k
from .errors import DimMismatch, NotHermitianPreserving, WitnessIsPSD
from .maps import (
    CERT_TOL,
    DEFAULT_MAX_ITER,
    INCONCLUSIVE,
    LinearMapRep,
    Verdict,
    adjoint_map,
    apply_on_second,
    is_positive_numeric,
)
from .states import BipartiteState, random_density

BLOCK_POSITIVE = "BlockPositive"
NOT_BLOCK_POSITIVE = "NotBlockPositive"


@dataclass(frozen=True)
class Witness:
    H: np.ndarray
    dA: int
    dB: int

    def __post_init__(self):
        H = mc.check_hermitian(self.H, "witness")
        n = self.dA * self.dB
        if H.shape != (n, n):
            raise DimMismatch(f"witness has shape {H.shape}, expected ({n}, {n})")
        H = np.array(H)
        H.flags.writeable = False
        object.__setattr__(self, "H", H)

    @property
    def min_eigenvalue(self) -> float:
        return mc.min_eig(self.H)

    @property
    def trace(self) -> float:
        return float(np.trace(self.H).real)


@dataclass(frozen=True)
class Detection:
    value: float
    detected: bool

    def __iter__(self):
        return iter((self.value, self.detected))


@dataclass(frozen=True)
class NonCPCertificate:
    mu: np.ndarray
    value: float
    trace_value: float


@dataclass(frozen=True)
class NondecomposabilityResult:
    accepted: bool
    trace_value: float
    pt_min_eigenvalue: float
    reason: str

    def __bool__(self):
        return self.accepted


@dataclass(frozen=True)
class ScanEntry:
    min_eigenvalue: float
    entangled: bool


def map_from_witness(w: Witness) -> LinearMapRep:
    """``S(E_ij) = V_i^* H V_j`` as a map ``M_dA -> M_dB``."""
    return LinearMapRep(w.H, w.dA, w.dB)


def witness_from_map(m: LinearMapRep) -> Witness:
    """``H = sum_ij E_ij (x) S(E_ij)``; inverse of :func:`map_from_witness`."""
    if not m.hermiticity_preserving:
        raise NotHermitianPreserving("map does not preserve Hermiticity; its Choi matrix is not Hermitian")
    return Witness(m.choi, m.d_in, m.d_out)


def product_form(w: Witness, z, v) -> float:
    z = np.asarray(z, dtype=np.complex128)
    v = np.asarray(v, dtype=np.complex128)
    zv = np.kron(z / np.linalg.norm(z), v / np.linalg.norm(v))
    return float(np.real(zv.conj() @ w.H @ zv))


def is_block_positive_numeric(
    w: Witness, restarts: int | None = None, seed=None, max_iter: int = DEFAULT_MAX_ITER
) -> Verdict:
    """Minimize ``<z (x) v|H|z (x) v>`` over unit product vectors."""
    if restarts is None:
        restarts = 50 * w.dA * w.dB
    res = minimize_rank_k(w.H, w.dA, w.dB, 1, restarts, max_iter, seed)
    z, v = res.left[:, 0], res.right[:, 0]
    value = product_form(w, z, v)
    if value < -CERT_TOL:
        return Verdict(NOT_BLOCK_POSITIVE, value, (z, v), res.restarts, res.converged)
    label = BLOCK_POSITIVE if res.converged > 0 else INCONCLUSIVE
    return Verdict(label, value, None, res.restarts, res.converged)


def detects(w: Witness, state: BipartiteState) -> Detection:
    """``Tr(H rho)`` and whether it is negative."""
    if (w.dA, w.dB) != (state.dA, state.dB):
        raise DimMismatch(f"witness dims ({w.dA}, {w.dB}) vs state dims ({state.dA}, {state.dB})")
    value = float(np.real(np.sum(w.H * state.rho.T)))
    return Detection(value, value < 0)


def omega_pairing(w: Witness, mu) -> float:
    """``<Omega|(id (x) S*)(mu)|Omega>`` with ``Omega = sum_i e_i (x) e_i`` on ``C^dA (x) C^dA``."""
    dual = adjoint_map(map_from_witness(w))
    Z = apply_on_second(dual, mu, w.dA)
    omega = mc.omega_vector(w.dA)
    return float(np.real(omega.conj() @ Z @ omega))


def non_cp_certificate(w: Witness) -> NonCPCertificate:
    """Density matrix ``mu`` with ``<Omega|(id (x) S*)(mu)|Omega> < 0``.

    ``mu`` is the projector onto the lowest eigenvector of ``H``; the pairing
    equals ``Tr(mu H)``, which is then the most negative eigenvalue.
    """
    lam, vecs = mc.hermitian_eig(w.H)
    if lam[0] >= -mc.psd_tol(w.H):
        raise WitnessIsPSD(f"witness is PSD (lambda_min = {lam[0]:.3e}); the map is completely positive")
    mu = mc.projector(vecs[:, 0])
    value = omega_pairing(w, mu)
    return NonCPCertificate(mu, value, float(np.real(np.trace(mu @ w.H))))


def nondecomposability_certificate(w: Witness, state: BipartiteState) -> NondecomposabilityResult:
    """Accept iff ``Tr(H rho) < 0`` and ``rho`` has positive partial transpose.

    Acceptance, together with block-positivity of ``H``, shows the map built
    from ``H`` is not of the form ``S1 + S2 o transpose`` with CP ``S1, S2``.
    """
    value, _ = detects(w, state)
    pt = mc.partial_transpose(state.rho, state.dA, state.dB, side="B")
    lam = mc.min_eig(pt)
    negative = value < -CERT_TOL
    ppt = lam >= -mc.psd_tol(pt)
    if negative and ppt:
        reason = "accepted"
    elif not ppt:
        reason = f"state is not PPT (lambda_min of partial transpose = {lam:.3e})"
    else:
        reason = f"Tr(H rho) = {value:.3e} is not negative"
    return NondecomposabilityResult(negative and ppt, value, lam, reason)


def search_nondecomposability(
    w: Witness,
    samples: int,
    seed=None,
    anchor: BipartiteState | None = None,
    max_noise: float = 1.0,
) -> tuple[int, NondecomposabilityResult | None, BipartiteState | None]:
    """Randomized search for PPT states that ``w`` detects.

    Candidates are ``(1 - t) anchor + t sigma`` for random full-rank ``sigma``
    and ``t`` uniform in ``[0, max_noise]``; without an anchor the maximally
    mixed state is used. Returns the number of accepted samples and the first
    accepted certificate with its state.
    """
    rng = np.random.default_rng(seed)
    n = w.dA * w.dB
    base = np.eye(n) / n if anchor is None else anchor.rho
    hits, first, first_state = 0, None, None
    for _ in range(samples):
        t = rng.uniform(0.0, max_noise)
        rank = int(rng.integers(1, n + 1))
        rho = (1 - t) * base + t * random_density(n, rng, rank)
        state = BipartiteState(mc.hermitize(rho / np.trace(rho).real), w.dA, w.dB)
        cert = nondecomposability_certificate(w, state)
        if cert.accepted:
            hits += 1
            if first is None:
                first, first_state = cert, state
    return hits, first, first_state


def upb_witness(
    vectors: Sequence[np.ndarray], dA: int, dB: int, restarts: int | None = None, seed=None, safety: float = 0.5
) -> Witness:
    """``H = P - safety * eps * I`` for the projector ``P`` onto a product basis.

    ``eps`` is the smallest value of ``<z (x) v|P|z (x) v>`` found numerically;
    for an unextendible product basis it is strictly positive, so ``H`` is
    block-positive while ``Tr(H rho) < 0`` on the complementary bound
    entangled state.
    """
    P = sum(mc.projector(v) for v in vectors)
    probe = Witness(mc.hermitize(P), dA, dB)
    eps = is_block_positive_numeric(probe, restarts=restarts, seed=seed).value
    return Witness(mc.hermitize(P) - safety * eps * np.eye(dA * dB), dA, dB)


def horodecki_entanglement_scan(state: BipartiteState, maps: Sequence[LinearMapRep]) -> list[ScanEntry]:
    """``lambda_min((id_A (x) S) rho)`` per map; negative certifies entanglement for positive ``S``."""
    out = []
    for m in maps:
        if m.d_in != state.dB:
            raise DimMismatch(f"map input dim {m.d_in} does not match dB = {state.dB}")
        M = apply_on_second(m, state.rho, state.dA)
        lam = mc.min_eig(mc.hermitize(M)) if mc.is_hermitian(M) else float("nan")
        out.append(ScanEntry(lam, bool(lam < -mc.psd_tol(M))))
    return out


def map_is_positive(w: Witness, restarts: int | None = None, seed=None) -> Verdict:
    """Positivity verdict of :func:`map_from_witness` (equivalent to block-positivity)."""
    return is_positive_numeric(map_from_witness(w), restarts=restarts, seed=seed)
