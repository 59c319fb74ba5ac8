import numpy as np
import pytest

from mlcocluster import grams
from mlcocluster.model import MultiLayerBipartiteNetwork, sample_simulation_params
from mlcocluster.oracles import naive_gram, population_gram_loops
from mlcocluster.rng import substream

from conftest import random_network

A = MultiLayerBipartiteNetwork(np.array([[[1, 1], [0, 1]]], dtype=np.uint8))


def test_zero_network():
    net = MultiLayerBipartiteNetwork(np.zeros((3, 4, 5), dtype=np.uint8))
    for side in ("row", "col"):
        for debiased in (True, False):
            assert not grams.gram(net, side, debiased).values.any()


def test_hand_example_row():
    assert grams.raw_row_gram(A).values.tolist() == [[2, 1], [1, 1]]
    assert grams.debiased_row_gram(A).values.tolist() == [[0, 1], [1, 0]]


def test_hand_example_col():
    assert grams.raw_col_gram(A).values.tolist() == [[1, 1], [1, 2]]
    assert grams.debiased_col_gram(A).values.tolist() == [[0, 1], [1, 0]]


def test_single_edge_gives_zero():
    layers = np.zeros((1, 3, 4), dtype=np.uint8)
    layers[0, 1, 2] = 1
    net = MultiLayerBipartiteNetwork(layers)
    assert not grams.debiased_row_gram(net).values.any()
    assert not grams.debiased_col_gram(net).values.any()


def test_against_naive_loops():
    rng = np.random.default_rng(2)
    for _ in range(30):
        L, n_r, n_c = rng.integers(1, 4), rng.integers(1, 12), rng.integers(1, 12)
        net = random_network(rng, L, n_r, n_c, p=rng.random())
        for side in ("row", "col"):
            for debiased in (True, False):
                got = grams.gram(net, side, debiased).values
                assert got.tolist() == naive_gram(net, side, debiased)


def test_col_gram_is_row_gram_of_transpose():
    net = random_network(np.random.default_rng(4), 3, 7, 9)
    assert np.array_equal(grams.debiased_col_gram(net).values, grams.debiased_row_gram(net.transpose()).values)


def test_raw_minus_debiased_is_degree():
    net = random_network(np.random.default_rng(5), 4, 6, 8)
    diff = grams.raw_row_gram(net).values - grams.debiased_row_gram(net).values
    assert np.array_equal(diff, np.diag(net.layers.sum(axis=(0, 2))))


def test_grams_symmetric_exactly():
    net = random_network(np.random.default_rng(6), 3, 15, 10)
    for side in ("row", "col"):
        s = grams.gram(net, side, True).values
        assert np.array_equal(s, s.T)


def test_layer_sum():
    rng = np.random.default_rng(7)
    net = random_network(rng, 1, 4, 5)
    assert np.array_equal(grams.layer_sum(net), net.layers[0])
    rep = MultiLayerBipartiteNetwork(np.repeat(net.layers, 3, axis=0))
    assert np.array_equal(grams.layer_sum(rep), 3 * net.layers[0])
    comp = MultiLayerBipartiteNetwork(np.stack([net.layers[0], 1 - net.layers[0]]))
    assert np.all(grams.layer_sum(comp) == 1)


def test_population_gram_zero_blocks():
    p = sample_simulation_params(6, 7, 2, 2, 2, 0.5, substream(1))
    from dataclasses import replace

    p0 = replace(p, B=np.zeros_like(p.B))
    assert not grams.population_gram(p0, "row").values.any()


def test_population_gram_small(tiny_params):
    s = grams.population_gram(tiny_params, "row").values
    np.testing.assert_allclose(s, [[0.1625, 0.175], [0.175, 0.25]], atol=1e-15)


def test_population_gram_matches_loops():
    p = sample_simulation_params(12, 9, 2, 3, 3, 0.7, substream(8))
    for side in ("row", "col"):
        s = grams.population_gram(p, side).values
        np.testing.assert_allclose(s, population_gram_loops(p, side), rtol=1e-12, atol=1e-14)
        assert np.array_equal(s, s.T)
        assert np.linalg.eigvalsh(s).min() >= -1e-10


def test_bad_side():
    with pytest.raises(ValueError):
        grams.gram(A, "diag", True)
