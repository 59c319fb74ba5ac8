import warnings

import numpy as np
import pytest

from mlcocluster.model import InvalidArgumentError
from mlcocluster.spectral import RankDeficiencyWarning, SpectralEmbedding, row_normalize, top_k_eig, top_k_svd


def test_identity_k1():
    emb = top_k_eig(np.eye(3), 1)
    assert emb.values.tolist() == [1.0]
    v = emb.coords[:, 0]
    assert np.isclose(np.linalg.norm(v), 1.0)
    assert v[np.argmax(np.abs(v))] > 0


def test_swap_matrix_tie_goes_to_positive():
    emb = top_k_eig(np.array([[0.0, 1.0], [1.0, 0.0]]), 2)
    np.testing.assert_allclose(emb.values, [1.0, -1.0], atol=1e-15)
    r = 1 / np.sqrt(2)
    np.testing.assert_allclose(emb.coords[:, 0], [r, r], atol=1e-15)
    # tied maxima: lowest index is made positive
    np.testing.assert_allclose(emb.coords[:, 1], [r, -r], atol=1e-15)


def test_random_matches_full_decomposition():
    rng = np.random.default_rng(0)
    for _ in range(20):
        a = rng.standard_normal((6, 6))
        m = a + a.T
        emb = top_k_eig(m, 3)
        w = np.linalg.eigvals(m).real
        want = w[np.argsort(-np.abs(w))][:3]
        np.testing.assert_allclose(emb.values, want, atol=1e-9)
        np.testing.assert_allclose(m @ emb.coords, emb.coords * emb.values, atol=1e-9)
        np.testing.assert_allclose(emb.coords.T @ emb.coords, np.eye(3), atol=1e-12)
        assert np.all(np.diff(np.abs(emb.values)) <= 0)


def test_eig_rejects_bad_input():
    with pytest.raises(InvalidArgumentError):
        top_k_eig(np.array([[0.0, 1.0], [0.0, 0.0]]), 1)
    with pytest.raises(InvalidArgumentError):
        top_k_eig(np.eye(2), 3)
    with pytest.raises(InvalidArgumentError):
        top_k_eig(np.eye(2), 0)


def test_rank_warning():
    m = np.diag([1.0, 0.0])
    with pytest.warns(RankDeficiencyWarning):
        top_k_eig(m, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        top_k_eig(np.diag([2.0, 1.0]), 2)


def test_svd_zero_matrix():
    with pytest.warns(RankDeficiencyWarning):
        _, s, _ = top_k_svd(np.zeros((3, 4)), 2)
    assert not s.any()


def test_svd_diagonal():
    _, s, _ = top_k_svd(np.diag([3.0, 1.0]), 1)
    assert s.tolist() == [3.0]


def test_svd_consistent_with_eig():
    rng = np.random.default_rng(1)
    m = rng.random((7, 5))
    left, s, right = top_k_svd(m, 3)
    emb = top_k_eig(m.T @ m, 3)
    np.testing.assert_allclose(s, np.sqrt(emb.values), atol=1e-9)
    np.testing.assert_allclose(m @ right.coords, left.coords * s, atol=1e-12)


def test_row_normalize():
    emb = SpectralEmbedding(np.array([[3.0, 4.0], [0.6, 0.8], [0.0, 0.0]]), np.array([2.0, 1.0]))
    out = row_normalize(emb)
    np.testing.assert_allclose(out.coords, [[0.6, 0.8], [0.6, 0.8], [0.0, 0.0]], atol=1e-15)
    assert out.zero_rows == (2,)
    assert out.normalized
    with pytest.raises(InvalidArgumentError):
        row_normalize(out)
