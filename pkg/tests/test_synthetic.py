import numpy as np
import pytest

from djst.inference import Hyperparams
from djst.inference.synthetic import (cosine_matrix, generate_synthetic, match_clusters, planted_block_phi,
                                      sentiment_accuracy, synthetic_lexicon, synthetic_vocabulary)
from djst.lexicon import NEGATIVE, POSITIVE
from djst.report import top_words


def test_zero_length_documents():
    _, stream, _ = generate_synthetic(planted_block_phi(2, 2, 8), Hyperparams(L=2, T=2), docs=3,
                                      doc_len=0, seed=0)
    assert [len(d) for d in stream[0].documents] == [0, 0, 0]


def test_one_hot_phi_emits_single_word():
    phi = np.zeros((2, 1, 4))
    phi[:, :, 2] = 1.0
    vocab, stream, _ = generate_synthetic(phi, Hyperparams(L=2, T=1), docs=5, doc_len=30, seed=1)
    assert {vocab.id_to_term[w] for d in stream[0].documents for w in d.tokens} == {"w2"}


def test_empirical_word_frequencies_match_phi():
    # a single (l, z) cluster, so every token is drawn from the same row
    rng = np.random.default_rng(0)
    phi = rng.dirichlet(np.ones(10), size=(1, 1))
    phi = np.concatenate([phi, phi], axis=0)
    _, stream, _ = generate_synthetic(phi, Hyperparams(L=2, T=1), docs=50, doc_len=1000, seed=2)
    counts = np.bincount([w for d in stream[0].documents for w in d.tokens], minlength=10)
    assert np.abs(counts / counts.sum() - phi[0, 0]).sum() < 0.05


def test_planted_blocks_are_nearly_orthogonal():
    phi = planted_block_phi(2, 3, 200, shared=20)
    sim = cosine_matrix(phi.reshape(6, -1), phi.reshape(6, -1))
    off = sim[~np.eye(6, dtype=bool)]
    assert off.max() < 0.2
    np.testing.assert_allclose(phi.sum(axis=2), 1.0, atol=1e-12)


def test_head_words_carry_mass():
    phi = planted_block_phi(2, 2, 40, head=2, head_mass=0.5)
    assert phi[0, 0, :2].sum() == pytest.approx(0.5)
    summary = top_words(phi[1, 1], synthetic_vocabulary(40), k=2)
    assert [t for t, _ in summary.top_words] == ["w30", "w31"]


def test_match_clusters_recovers_permutation():
    phi = planted_block_phi(2, 2, 20)
    shuffled = phi.reshape(4, -1)[[2, 0, 3, 1]].reshape(2, 2, -1)
    cos, pairs = match_clusters(phi, shuffled)
    assert cos == pytest.approx(1.0)
    assert pairs == {0: 1, 1: 3, 2: 0, 3: 2}


def test_sentiment_accuracy_scores_confident_docs_only():
    true = np.array([[0.9, 0.1], [0.5, 0.5], [0.1, 0.9]])
    est = np.array([[0.6, 0.4], [0.0, 1.0], [0.7, 0.3]])
    assert sentiment_accuracy(true, est) == (0.5, 2)
    assert np.isnan(sentiment_accuracy(true[1:2], est[1:2])[0])


def test_synthetic_lexicon_labels_follow_clusters():
    phi = planted_block_phi(2, 2, 40, head=2, head_mass=0.5)
    lex = synthetic_lexicon(phi, synthetic_vocabulary(40), per_cluster=2)
    assert lex.polarity["w00"] == POSITIVE and lex.polarity["w20"] == NEGATIVE
    assert len(lex.polarity) == 8


def test_generation_is_seeded():
    phi = planted_block_phi(2, 2, 20)
    a = generate_synthetic(phi, Hyperparams(L=2, T=2), docs=4, doc_len=10, seed=5, epochs=2)
    b = generate_synthetic(phi, Hyperparams(L=2, T=2), docs=4, doc_len=10, seed=5, epochs=2)
    assert a[1] == b[1]
    assert a[1].labels == ["1", "2"]
