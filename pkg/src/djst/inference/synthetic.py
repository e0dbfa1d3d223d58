"""Forward sampling from the generative model, and recovery scoring."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from ..corpus import Document, Epoch, EpochStream, Vocabulary
from ..lexicon import Lexicon
from .hyper import Hyperparams


@dataclass
class SyntheticTruth:
    phi: np.ndarray        # (L, T, V)
    pi: list               # per epoch, (D, L)
    theta: list            # per epoch, (D, L, T)
    labels: list           # per epoch, list of per-document label arrays
    topics: list           # per epoch, list of per-document topic arrays


def synthetic_vocabulary(V: int) -> Vocabulary:
    width = len(str(max(V - 1, 0)))
    return Vocabulary(tuple(f"w{i:0{width}d}" for i in range(V)))


def planted_block_phi(L: int, T: int, V: int, shared: int = 0, shared_mass: float = 0.1,
                      head: int = 0, head_mass: float = 0.0,
                      rng: np.random.Generator | None = None) -> np.ndarray:
    """Word distributions on disjoint vocabulary blocks.

    Each cluster owns ``(V - shared) // (L*T)`` words; the last `shared`
    words form a common background carrying `shared_mass`. The first `head`
    words of every block share `head_mass` of the block's weight (frequent
    words, e.g. for seeding a lexicon). Remaining weights are uniform, or
    Dirichlet(5)-perturbed when `rng` is given.
    """
    K = L * T
    block = (V - shared) // K
    if block < 1:
        raise ValueError("vocabulary too small for disjoint blocks")
    phi = np.zeros((K, V))
    own = 1.0 - shared_mass if shared else 1.0
    for k in range(K):
        w = np.ones(block) if rng is None else rng.dirichlet(np.full(block, 5.0))
        w = w / w.sum()
        if head:
            w[:head] = head_mass * w[:head] / w[:head].sum()
            w[head:] = (1.0 - head_mass) * w[head:] / w[head:].sum()
        phi[k, k * block:(k + 1) * block] = own * w
        if shared:
            phi[k, V - shared:] = shared_mass / shared
    return phi.reshape(L, T, V)


def _concentration(value, shape, default):
    if value is None:
        return np.broadcast_to(np.asarray(default, dtype=float), shape)
    return np.broadcast_to(np.asarray(value, dtype=float), shape)


def generate_synthetic(planted_phi: np.ndarray, hyper: Hyperparams, docs: int, doc_len: int,
                       seed: int, epochs: int = 1, pi_concentration=None, theta_concentration=None):
    """Sample a document stream from the generative story.

    Per document: ``pi ~ Dir(pi_concentration)`` (default: symmetric gamma),
    ``theta_l ~ Dir(theta_concentration[l])`` (default: alpha_init); per token
    ``l ~ pi``, ``z ~ theta_l``, ``w ~ phi[l, z]``. `pi_concentration` may be
    given per epoch with shape (epochs, L).

    Returns ``(vocab, stream, truth)``.
    """
    phi = np.asarray(planted_phi, dtype=float)
    L, T, V = phi.shape
    if not np.allclose(phi.sum(axis=2), 1.0) or (phi < 0).any():
        raise ValueError("planted word distributions must be probability vectors")
    rng = np.random.default_rng(seed)
    pi_conc = _concentration(pi_concentration, (epochs, L), hyper.gamma)
    th_conc = _concentration(theta_concentration, (L, T), hyper.alpha_init)

    truth = SyntheticTruth(phi=phi, pi=[], theta=[], labels=[], topics=[])
    out = []
    for t in range(epochs):
        pis = np.empty((docs, L))
        thetas = np.empty((docs, L, T))
        ep_docs, ep_l, ep_z = [], [], []
        for d in range(docs):
            pi = rng.dirichlet(pi_conc[t])
            theta = np.stack([rng.dirichlet(th_conc[l]) for l in range(L)])
            l = rng.choice(L, size=doc_len, p=pi)
            cum = np.cumsum(theta[l], axis=1)
            z = np.minimum((cum <= rng.random(doc_len)[:, None] * cum[:, -1:]).sum(axis=1), T - 1)
            w = np.empty(doc_len, dtype=np.int64)
            for k in np.unique(l * T + z):
                sel = (l * T + z) == k
                w[sel] = rng.choice(V, size=int(sel.sum()), p=phi[k // T, k % T])
            pis[d], thetas[d] = pi, theta
            ep_docs.append(Document(f"{t}-{d}", t, tuple(int(x) for x in w)))
            ep_l.append(l)
            ep_z.append(z)
        truth.pi.append(pis)
        truth.theta.append(thetas)
        truth.labels.append(ep_l)
        truth.topics.append(ep_z)
        out.append(Epoch(str(t + 1), tuple(ep_docs)))
    return synthetic_vocabulary(V), EpochStream(tuple(out)), truth


def synthetic_lexicon(planted_phi: np.ndarray, vocab: Vocabulary, per_cluster: int = 5) -> Lexicon:
    """Mark the top words of each planted cluster with that cluster's label.

    Words that rank highly under clusters of both labels are left out.
    """
    L, T, _ = planted_phi.shape
    chosen: dict[str, int] = {}
    clash = set()
    for l in range(L):
        for z in range(T):
            top = np.argsort(-planted_phi[l, z], kind="stable")[:per_cluster]
            for w in top:
                term = vocab.id_to_term[w]
                if chosen.get(term, l) != l:
                    clash.add(term)
                chosen[term] = l
    return Lexicon({w: l for w, l in chosen.items() if w not in clash})


def cosine_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = a / np.linalg.norm(a, axis=1, keepdims=True)
    b = b / np.linalg.norm(b, axis=1, keepdims=True)
    return a @ b.T


def match_clusters(true_phi: np.ndarray, est_phi: np.ndarray):
    """Hungarian matching of all L*T clusters on cosine similarity.

    Returns ``(mean_cosine, pairs)`` where pairs maps true cluster index to
    estimated cluster index (flattened ``l * T + z``).
    """
    K = true_phi.shape[0] * true_phi.shape[1]
    sim = cosine_matrix(true_phi.reshape(K, -1), est_phi.reshape(K, -1))
    rows, cols = linear_sum_assignment(-sim)
    return float(sim[rows, cols].mean()), dict(zip(rows.tolist(), cols.tolist()))


def sentiment_accuracy(true_pi: np.ndarray, est_pi: np.ndarray, threshold: float = 0.8) -> tuple[float, int]:
    """Dominant-label accuracy on documents whose true pi is one-sided.

    Returns ``(accuracy, n_documents_scored)``; accuracy is nan when none qualify.
    """
    sel = true_pi.max(axis=1) >= threshold
    n = int(sel.sum())
    if n == 0:
        return float("nan"), 0
    hits = true_pi[sel].argmax(axis=1) == est_pi[sel].argmax(axis=1)
    return float(hits.mean()), n


def recovery_metrics(truth: SyntheticTruth, phi_hat: np.ndarray, pi_hat: np.ndarray,
                     epoch: int = 0, threshold: float = 0.8) -> dict:
    mean_cos, pairs = match_clusters(truth.phi, phi_hat)
    acc, n = sentiment_accuracy(truth.pi[epoch], pi_hat, threshold)
    return {"mean_matched_cosine": mean_cos, "sentiment_accuracy": acc,
            "documents_scored": n, "matching": pairs}
