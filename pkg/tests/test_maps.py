import numpy as np
import pytest

from sepkit import maps as mp
from sepkit import matcore as mc
from sepkit.errors import BadRank, DimMismatch, NotCP, NotHermitian
from conftest import random_hermitian, random_matrix, random_psd


def units(d):
    E = np.zeros((d, d, d, d))
    for i in range(d):
        for j in range(d):
            E[i, j, i, j] = 1
    return E  # E[i, j] is the matrix unit E_ij


def reduction_map(d):
    """X -> Tr(X) I - X."""
    imgs = np.zeros((d, d, d, d), dtype=complex)
    E = units(d)
    for i in range(d):
        for j in range(d):
            imgs[i, j] = (i == j) * np.eye(d) - E[i, j]
    return mp.map_from_images(imgs)


def kraus_map(rng, d_in, d_out, n):
    return mp.map_from_kraus([random_matrix(rng, d_out, d_in) for _ in range(n)])


def corpus(rng):
    return [
        mp.identity_map(2),
        mp.identity_map(3),
        mp.transposition(2),
        mp.transposition(3),
        reduction_map(3),
        kraus_map(rng, 2, 3, 2),
        kraus_map(rng, 3, 2, 4),
        mp.hadamard_map(random_psd(rng, 3)),
        mp.compose_with_transposition(kraus_map(rng, 3, 3, 1)),
        mp.map_from_choi(random_hermitian(rng, 6), 2, 3),
        mp.map_from_choi(-np.eye(4), 2, 2),
    ]


def test_images_identity_map():
    d = 3
    m = mp.map_from_images(units(d))
    expected = sum(np.kron(units(d)[i, j], units(d)[i, j]) for i in range(d) for j in range(d))
    np.testing.assert_array_equal(m.choi, expected)
    omega = mc.omega_vector(d)
    np.testing.assert_array_equal(m.choi, np.outer(omega, omega))
    np.testing.assert_array_equal(m.choi, mp.identity_map(d).choi)


def test_images_trace_like_map():
    d = 3
    imgs = np.zeros((d, d, 2, 2))
    for i in range(d):
        imgs[i, i] = np.eye(2)
    np.testing.assert_array_equal(mp.map_from_images(imgs).choi, np.eye(2 * d))


def test_images_round_trip(rng):
    imgs = rng.standard_normal((3, 3, 2, 2)) + 1j * rng.standard_normal((3, 3, 2, 2))
    m = mp.map_from_images(imgs)
    np.testing.assert_array_equal(m.images(), imgs)
    E = units(3)
    for i in range(3):
        for j in range(3):
            np.testing.assert_array_equal(mp.apply(m, E[i, j]), imgs[i, j])
            np.testing.assert_array_equal(m.image(i, j), imgs[i, j])


def test_images_bad_shape():
    with pytest.raises(DimMismatch):
        mp.map_from_images(np.zeros((2, 3, 2, 2)))


def test_apply_identity_and_transposition(rng):
    X = random_matrix(rng, 3)
    np.testing.assert_array_equal(mp.apply(mp.identity_map(3), X), X)
    np.testing.assert_array_equal(mp.apply(mp.transposition(3), X), X.T)
    with pytest.raises(DimMismatch):
        mp.apply(mp.identity_map(3), np.eye(2))


def test_apply_hermiticity_preserving(rng):
    for m in corpus(rng):
        if not m.hermiticity_preserving:
            continue
        X = random_matrix(rng, m.d_in)
        np.testing.assert_allclose(mp.apply(m, X.conj().T), mp.apply(m, X).conj().T, atol=1e-12)


def test_apply_linear(rng):
    m = mp.map_from_choi(random_matrix(rng, 6), 3, 2)
    X, Y = random_matrix(rng, 3), random_matrix(rng, 3)
    a, b = 0.5 - 2j, 3.25
    lhs = mp.apply(m, a * X + b * Y)
    rhs = a * mp.apply(m, X) + b * mp.apply(m, Y)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_transposition_choi_is_swap():
    np.testing.assert_array_equal(mp.transposition(1).choi, [[1]])
    for d in (2, 3):
        C = mp.transposition(d).choi
        np.testing.assert_array_equal(C, mc.swap_operator(d))
        assert set(np.round(np.linalg.eigvalsh(C), 12)) == {-1.0, 1.0}


def test_transposition_d2_hierarchy():
    t = mp.transposition(2)
    assert mp.is_positive_numeric(t, seed=0).label == mp.POSITIVE
    assert mp.is_k_positive_numeric(t, 2, seed=0).label == mp.NOT_K_POSITIVE


def test_tensor_with_identity_k1(rng):
    m = kraus_map(rng, 2, 3, 2)
    np.testing.assert_array_equal(mp.tensor_with_identity(1, m).choi, m.choi)


def test_tensor_with_identity_oracle(rng):
    k = 2
    m = mp.map_from_choi(random_hermitian(rng, 6), 3, 2)
    big = mp.tensor_with_identity(k, m)
    X = random_matrix(rng, k * 3)
    expected = np.zeros((k * 2, k * 2), dtype=complex)
    for a in range(k):
        for b in range(k):
            block = X[a * 3:(a + 1) * 3, b * 3:(b + 1) * 3]
            expected[a * 2:(a + 1) * 2, b * 2:(b + 1) * 2] = mp.apply(m, block)
    np.testing.assert_allclose(mp.apply(big, X), expected, atol=1e-12)
    np.testing.assert_allclose(mp.apply_on_second(m, X, k), expected, atol=1e-12)


def test_id_tensor_transpose_on_bell():
    phi = np.array([1, 0, 0, 1]) / np.sqrt(2)
    out = mp.apply(mp.tensor_with_identity(2, mp.transposition(2)), np.outer(phi, phi))
    np.testing.assert_allclose(out, mc.swap_operator(2) / 2, atol=1e-15)
    assert mc.min_eig(out) < -0.49


def test_id_tensor_id():
    np.testing.assert_array_equal(mp.tensor_with_identity(3, mp.identity_map(2)).choi, mp.identity_map(6).choi)


def test_cp_identity_transposition_kraus(rng):
    assert mp.is_completely_positive(mp.identity_map(3)).is_cp
    res = mp.is_completely_positive(mp.transposition(2))
    assert not res.is_cp
    assert res.min_eigenvalue == pytest.approx(-1, abs=1e-12)
    assert mp.is_completely_positive(kraus_map(rng, 3, 2, 3)).is_cp


def test_cp_requires_hermitian():
    with pytest.raises(NotHermitian):
        mp.is_completely_positive(mp.map_from_choi(np.triu(np.ones((4, 4))), 2, 2))


@pytest.mark.parametrize("d", [2, 3, 4])
def test_transposition_is_positive(d):
    v = mp.is_positive_numeric(mp.transposition(d), seed=d)
    assert v.label == mp.POSITIVE
    assert v.holds is True
    assert v.value >= -mp.CERT_TOL


def test_negative_identity_not_positive():
    m = mp.map_from_choi(-np.eye(4), 2, 2)
    v = mp.is_positive_numeric(m, restarts=5, seed=0)
    assert v.label == mp.NOT_POSITIVE
    x, y = v.vectors
    assert mp.positivity_form(m, x, y) == pytest.approx(-1)


def test_hadamard_map_of_psd_is_positive(rng):
    A = random_psd(rng, 3)
    assert mp.is_positive_numeric(mp.hadamard_map(A), seed=1).label == mp.POSITIVE


def test_reduction_map_hierarchy():
    # choi = I - d P+, and max |<Phi+|psi>|^2 over Schmidt rank k is k/d, so the minimum is 1 - k.
    m = reduction_map(3)
    assert mp.is_positive_numeric(m, seed=2).label == mp.POSITIVE
    v2 = mp.is_k_positive_numeric(m, 2, seed=2)
    assert v2.label == mp.NOT_K_POSITIVE
    assert v2.value == pytest.approx(-1, abs=1e-9)
    v3 = mp.is_k_positive_numeric(m, 3, seed=2)
    assert v3.value == pytest.approx(-2, abs=1e-9)


def test_not_positive_witness_is_certified(rng):
    m = mp.map_from_choi(random_hermitian(rng, 6), 2, 3)
    v = mp.is_positive_numeric(m, seed=4)
    assert v.label == mp.NOT_POSITIVE
    x, y = v.vectors
    assert mp.positivity_form(m, x, y) < -mp.CERT_TOL
    assert mp.positivity_form(m, x, y) == pytest.approx(v.value, abs=1e-12)


def test_k1_matches_positivity(rng):
    for idx, m in enumerate(corpus(rng)):
        p = mp.is_positive_numeric(m, seed=idx)
        k1 = mp.is_k_positive_numeric(m, 1, seed=idx)
        assert (p.label == mp.POSITIVE) == (k1.label == mp.K_POSITIVE)
        assert p.value == pytest.approx(k1.value, abs=1e-9)


def test_full_rank_agrees_with_cp(rng):
    for idx, m in enumerate(corpus(rng)):
        k = min(m.d_in, m.d_out)
        v = mp.is_k_positive_numeric(m, k, seed=idx)
        cp = mp.is_completely_positive(m)
        assert (v.label == mp.K_POSITIVE) == cp.is_cp
        assert v.value == pytest.approx(cp.min_eigenvalue, abs=1e-9)


def test_hierarchy_monotone(rng):
    for idx, m in enumerate(corpus(rng)):
        vals = [mp.is_k_positive_numeric(m, k, seed=idx).value for k in range(1, min(m.d_in, m.d_out) + 1)]
        assert all(b <= a + 1e-9 for a, b in zip(vals, vals[1:]))


def test_k_positive_identity():
    for k in (1, 2, 3):
        assert mp.is_k_positive_numeric(mp.identity_map(3), k, seed=k).label == mp.K_POSITIVE


def test_k_positive_bad_rank():
    with pytest.raises(BadRank):
        mp.is_k_positive_numeric(mp.identity_map(2), 3)
    with pytest.raises(BadRank):
        mp.is_k_positive_numeric(mp.identity_map(2), 0)


def test_kraus_identity():
    ops = mp.kraus_from_choi(mp.identity_map(3))
    assert len(ops) == 1
    V = ops[0]
    np.testing.assert_allclose(V @ V.conj().T, np.eye(3), atol=1e-12)
    np.testing.assert_allclose(V / V[0, 0], np.eye(3), atol=1e-12)


def test_kraus_pinching():
    d = 3
    imgs = np.zeros((d, d, d, d))
    for i in range(d):
        imgs[i, i] = units(d)[i, i]
    ops = mp.kraus_from_choi(mp.map_from_images(imgs))
    assert len(ops) == d
    found = sorted(int(np.argmax(np.abs(np.diag(V)))) for V in ops)
    assert found == list(range(d))
    for V in ops:
        assert np.count_nonzero(np.abs(V) > 1e-12) == 1
        assert abs(np.max(np.abs(V)) - 1) < 1e-12


@pytest.mark.parametrize("dims", [(2, 2), (2, 3), (3, 2), (3, 3)])
def test_kraus_reconstruction(rng, dims):
    d_in, d_out = dims
    m = kraus_map(rng, d_in, d_out, 3)
    ops = mp.kraus_from_choi(m)
    assert len(ops) <= d_in * d_out
    E = units(d_in)
    for i in range(d_in):
        for j in range(d_in):
            rec = sum(V @ E[i, j] @ V.conj().T for V in ops)
            assert np.max(np.abs(rec - mp.apply(m, E[i, j]))) <= 1e-8


def test_kraus_requires_cp():
    with pytest.raises(NotCP):
        mp.kraus_from_choi(mp.transposition(2))


def test_hadamard_map(rng):
    np.testing.assert_array_equal(mp.hadamard_map(np.ones((3, 3))).choi, mp.identity_map(3).choi)
    A, B = random_matrix(rng, 4), random_matrix(rng, 4)
    np.testing.assert_allclose(mp.apply(mp.hadamard_map(A), B), A * B, rtol=0, atol=1e-15)
    P = random_psd(rng, 4, rank=2)
    assert mp.is_completely_positive(mp.hadamard_map(P)).is_cp
    # Compression of A (x) B onto span{e_i (x) e_i}.
    W = np.zeros((16, 4))
    W[np.arange(4) * 5, np.arange(4)] = 1
    np.testing.assert_allclose(mp.apply(mp.hadamard_map(A), B), W.T @ np.kron(A, B) @ W, rtol=0, atol=1e-15)


def test_adjoint_pairing(rng):
    for m in corpus(rng):
        if not m.hermiticity_preserving:
            continue
        adj = mp.adjoint_map(m)
        X, Y = random_matrix(rng, m.d_in), random_matrix(rng, m.d_out)
        lhs = np.trace(mp.apply(m, X) @ Y)
        rhs = np.trace(X @ mp.apply(adj, Y))
        assert abs(lhs - rhs) <= 1e-10 * max(1, abs(lhs))
        np.testing.assert_array_equal(mp.adjoint_map(adj).choi, m.choi)


def test_adjoint_identity_and_transposition():
    np.testing.assert_array_equal(mp.adjoint_map(mp.identity_map(3)).choi, mp.identity_map(3).choi)
    np.testing.assert_array_equal(mp.adjoint_map(mp.transposition(3)).choi, mp.transposition(3).choi)


def test_adjoint_preserves_cp(rng):
    m = kraus_map(rng, 2, 3, 2)
    assert mp.is_completely_positive(mp.adjoint_map(m)).is_cp


def test_compose_with_transposition(rng):
    t = mp.transposition(3)
    np.testing.assert_array_equal(mp.compose_with_transposition(t).choi, mp.identity_map(3).choi)
    m = kraus_map(rng, 3, 2, 2)
    c = mp.compose_with_transposition(m)
    np.testing.assert_array_equal(c.choi, mc.partial_transpose(m.choi, 3, 2, "A"))
    X = random_matrix(rng, 3)
    np.testing.assert_allclose(mp.apply(c, X), mp.apply(m, X.T), atol=1e-12)
    np.testing.assert_array_equal(mp.compose_with_transposition(c).choi, m.choi)


def test_search_is_seed_deterministic(rng):
    m = mp.map_from_choi(random_hermitian(rng, 9), 3, 3)
    a = mp.is_k_positive_numeric(m, 2, restarts=30, seed=5)
    b = mp.is_k_positive_numeric(m, 2, restarts=30, seed=5)
    assert a.value == b.value


def test_inconclusive_when_no_restart_converges():
    # One iteration cannot observe a stalled step, so no restart counts as converged.
    v = mp.is_positive_numeric(mp.identity_map(2), restarts=4, seed=0, max_iter=1)
    assert v.label == mp.INCONCLUSIVE
    assert v.holds is None
    assert v.converged == 0
