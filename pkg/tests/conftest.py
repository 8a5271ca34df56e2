import numpy as np
import pytest


def random_hermitian(rng, n):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (G + G.conj().T) / 2


def random_psd(rng, n, rank=None):
    r = n if rank is None else rank
    G = rng.standard_normal((n, r)) + 1j * rng.standard_normal((n, r))
    return G @ G.conj().T


def random_matrix(rng, n, m=None):
    m = n if m is None else m
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def decomposable_witness_matrix(rng, dA, dB, weight=1.0):
    """``P + weight * (id (x) T)(Q)`` with PSD ``P, Q``; block-positive by construction.

    ``Q`` is a random entangled pure projector, so the partial transpose
    usually contributes a negative eigenvalue.
    """
    n = dA * dB
    P = random_psd(rng, n, rank=1) * 0.1
    q = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    Q = np.outer(q, q.conj())
    T = Q.reshape(dA, dB, dA, dB).transpose(0, 3, 2, 1).reshape(n, n)
    H = P + weight * T
    return (H + H.conj().T) / 2
