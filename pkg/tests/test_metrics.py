import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlcocluster.detect import CoClustering
from mlcocluster.metrics import (
    UnsupportedSizeError,
    ari,
    clustering_alignment,
    clustering_error_onesided,
    evaluate,
    hamming_error,
    nmi,
)
from mlcocluster.model import InvalidArgumentError
from mlcocluster.oracles import entropy_nmi, exhaustive_metric, pair_count_ari


def test_clustering_error_perfect():
    assert clustering_error_onesided([0, 0, 1, 1, 2], [0, 0, 1, 1, 2], 3) == 0.0


def test_clustering_error_one_node_moved():
    t, e = [0, 0, 1, 1], [0, 0, 0, 1]
    assert clustering_error_onesided(t, e, 2) == 0.5
    assert exhaustive_metric(t, e, 2, "clustering") == 0.5


def test_clustering_error_single_cluster_estimate():
    t, e = [0, 0, 1, 1], [0, 0, 0, 0]
    assert clustering_error_onesided(t, e, 2) == 1.0
    assert exhaustive_metric(t, e, 2, "clustering") == 1.0


def test_clustering_alignment_permutation():
    al = clustering_alignment([0, 0, 1, 1, 2, 2], [2, 2, 0, 0, 1, 1], 3)
    assert al.objective == 0.0
    assert al.permutation == (2, 0, 1)


def test_clustering_error_rejects_empty_true_community():
    with pytest.raises(InvalidArgumentError):
        clustering_error_onesided([0, 0, 2], [0, 1, 2], 3)


def test_clustering_error_size_cap():
    labels = np.arange(11)
    with pytest.raises(UnsupportedSizeError):
        clustering_error_onesided(labels, labels, 11)


def test_hamming_examples():
    assert hamming_error([0, 0, 1, 1], [0, 0, 1, 1]) == 0.0
    assert hamming_error([0, 0, 1, 1], [1, 1, 0, 0]) == 0.0
    assert hamming_error([0, 0, 1, 1], [0, 0, 1, 0]) == 0.25
    assert exhaustive_metric([0, 0, 1, 1], [0, 0, 1, 0], 2, "hamming") == 0.25


def test_nmi_examples():
    assert nmi([0, 0, 1, 1, 2], [0, 0, 1, 1, 2]) == 1.0
    assert nmi([0, 0, 1, 1, 2], [2, 2, 0, 0, 1]) == 1.0
    assert nmi([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-15)
    assert entropy_nmi([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(0.0, abs=1e-15)


def test_nmi_single_cluster_convention():
    assert nmi([0, 0, 0], [1, 1, 1]) == 1.0


def test_ari_examples():
    assert ari([0, 0, 1, 1, 2], [0, 0, 1, 1, 2]) == 1.0
    assert ari([0, 0, 1, 1, 2], [1, 1, 2, 2, 0]) == 1.0
    # all n_ij = 1, sum C(a_i,2) = sum C(b_j,2) = 2, expected = 2*2/6
    assert ari([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(-0.5, abs=1e-15)
    assert pair_count_ari([0, 0, 1, 1], [0, 1, 0, 1]) == pytest.approx(-0.5, abs=1e-15)


def test_length_mismatch():
    with pytest.raises(InvalidArgumentError):
        nmi([0, 1], [0, 1, 1])


def test_evaluate_perfect():
    t = CoClustering(np.array([0, 0, 1, 1]), np.array([0, 1, 2, 2]))
    rep = evaluate(t, t)
    assert rep.as_dict() == {"f_r": 0, "f_c": 0, "clustering_error": 0, "hamming": 0, "nmi": 1, "ari": 1}


def test_evaluate_max_rule_for_hamming():
    t = CoClustering(np.array([0, 0, 1, 1]), np.array([0, 0, 1, 1]))
    e = CoClustering(np.array([0, 0, 1, 1]), np.array([0, 0, 1, 0]))
    rep = evaluate(t, e)
    assert rep.hamming == 0.25
    assert rep.f_r == 0 and rep.clustering_error == rep.f_c == 0.5


labelings = st.integers(2, 4).flatmap(
    lambda k: st.tuples(
        st.just(k),
        st.lists(st.integers(0, k - 1), min_size=k, max_size=14).filter(lambda t: len(set(t)) == k),
        st.randoms(use_true_random=False),
    )
)


@settings(max_examples=150, deadline=None)
@given(labelings)
def test_metrics_match_oracles(case):
    k, t, rnd = case
    e = [rnd.randrange(k) for _ in t]
    assert clustering_error_onesided(t, e, k) == exhaustive_metric(t, e, k, "clustering")
    assert hamming_error(t, e, k) == exhaustive_metric(t, e, k, "hamming")
    assert nmi(t, e) == pytest.approx(entropy_nmi(t, e), abs=1e-12)
    assert ari(t, e) == pytest.approx(pair_count_ari(t, e), abs=1e-12)


@settings(max_examples=100, deadline=None)
@given(labelings, labelings)
def test_report_ranges(rows, cols):
    (kr, tr, rr), (kc, tc, rc) = rows, cols
    er = [rr.randrange(kr) for _ in tr]
    ec = [rc.randrange(kc) for _ in tc]
    rep = evaluate(CoClustering(np.array(tr), np.array(tc)), CoClustering(np.array(er), np.array(ec)), kr, kc)
    assert rep.f_r >= 0 and rep.f_c >= 0 and rep.clustering_error >= 0
    assert 0 <= rep.hamming <= 1 and 0 <= rep.nmi <= 1 and -1 <= rep.ari <= 1


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=2, max_size=20), st.permutations(range(4)))
def test_relabeling_invariance(a, perm):
    b = [perm[x] for x in a]
    assert nmi(a, b) == 1.0
    assert ari(a, b) == 1.0
