"""Collapsed Gibbs sampling of joint (sentiment, topic) token assignments.

The per-token conditional is

    p(l, z | rest) ∝ (N_lzw + β_lzw) / (N_lz + Σ_v β_lzv)
                   × (N_dlz + α_lz) / (N_dl + Σ_z α_lz)
                   × (N_dl + γ) / (N_d + L γ)

with all counts excluding the token being resampled. The hot loop is
compiled with numba; uniforms are drawn up front from a numpy Generator so
that the chain's entire random state is the Generator state.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from numba import njit

from .hyper import Hyperparams
from .priors import PriorState


@dataclass(frozen=True)
class Posterior:
    phi: np.ndarray    # (L, T, V)
    theta: np.ndarray  # (D, L, T)
    pi: np.ndarray     # (D, L)


@njit(cache=True, nogil=True)
def _sweep_kernel(words, docs, labels, topics, n_dlz, n_dl, n_d, n_lzw, n_lz,
                  beta, beta_sum, alpha, alpha_sum, gamma, u):
    L, T = n_lz.shape
    K = L * T
    cum = np.empty(K)
    for i in range(words.shape[0]):
        w = words[i]
        d = docs[i]
        l = labels[i]
        z = topics[i]
        n_dlz[d, l, z] -= 1
        n_dl[d, l] -= 1
        n_d[d] -= 1
        n_lzw[l, z, w] -= 1
        n_lz[l, z] -= 1

        total = 0.0
        doc_norm = n_d[d] + L * gamma
        for ll in range(L):
            sent = (n_dl[d, ll] + gamma) / doc_norm
            topic_norm = n_dl[d, ll] + alpha_sum[ll]
            for zz in range(T):
                word = (n_lzw[ll, zz, w] + beta[ll, zz, w]) / (n_lz[ll, zz] + beta_sum[ll, zz])
                topic = (n_dlz[d, ll, zz] + alpha[ll, zz]) / topic_norm
                total += word * topic * sent
                cum[ll * T + zz] = total

        r = u[i] * total
        k = 0
        while k < K - 1 and cum[k] <= r:
            k += 1
        l = k // T
        z = k - l * T
        labels[i] = l
        topics[i] = z
        n_dlz[d, l, z] += 1
        n_dl[d, l] += 1
        n_d[d] += 1
        n_lzw[l, z, w] += 1
        n_lz[l, z] += 1


def _pick(weights: np.ndarray, u: float) -> int:
    """Index of the first cumulative weight exceeding ``u * total``."""
    cum = np.cumsum(weights)
    k = int(np.searchsorted(cum, u * cum[-1], side="right"))
    return min(k, len(weights) - 1)


class GibbsSampler:
    """Sampler state for the documents of one epoch.

    Counts are kept as int64 tables: ``n_dlz`` (D, L, T), ``n_dl`` (D, L),
    ``n_d`` (D,), ``n_lzw`` (L, T, V) and ``n_lz`` (L, T).
    """

    def __init__(self, documents: Sequence[Sequence[int]], priors: PriorState, hyper: Hyperparams,
                 rng: np.random.Generator, init_mask: np.ndarray | None = None,
                 assignments: tuple[np.ndarray, np.ndarray] | None = None):
        self.hyper = hyper
        self.priors = priors
        self.rng = rng
        L, T, V = priors.beta.shape
        if (L, T) != (hyper.L, hyper.T):
            raise ValueError(f"priors have shape {(L, T)}, hyperparameters say {(hyper.L, hyper.T)}")
        self.L, self.T, self.V = L, T, V
        self.D = len(documents)
        self.doc_lengths = np.array([len(doc) for doc in documents], dtype=np.int64)
        self.words = np.fromiter((w for doc in documents for w in doc), dtype=np.int64,
                                 count=int(self.doc_lengths.sum()))
        if self.words.size and (self.words.min() < 0 or self.words.max() >= V):
            raise ValueError("token id outside the vocabulary")
        self.docs = np.repeat(np.arange(self.D, dtype=np.int64), self.doc_lengths)

        self.beta = np.ascontiguousarray(priors.beta, dtype=float)
        self.beta_sum = self.beta.sum(axis=2)
        self.alpha = np.ascontiguousarray(priors.alpha, dtype=float)
        self.alpha_sum = self.alpha.sum(axis=1)
        self.gamma = float(hyper.gamma)

        if assignments is None:
            self.labels, self.topics = self._initial_assignments(init_mask)
        else:
            self.labels = np.array(assignments[0], dtype=np.int64)
            self.topics = np.array(assignments[1], dtype=np.int64)
            if self.labels.shape != self.words.shape or self.topics.shape != self.words.shape:
                raise ValueError("assignment arrays do not match the token count")
        self._tally()
        self.sweeps_done = 0

    @property
    def n_tokens(self) -> int:
        return int(self.words.size)

    def _initial_assignments(self, init_mask):
        """Lexicon words start from the prior word factor, others uniformly."""
        n, K = self.words.size, self.L * self.T
        u = self.rng.random(n)
        flat = np.minimum((u * K).astype(np.int64), K - 1)
        if init_mask is not None and n:
            hit = np.asarray(init_mask, dtype=bool)[self.words]
            if hit.any():
                factor = (self.beta / self.beta_sum[:, :, None]).reshape(K, self.V)
                probs = factor[:, self.words[hit]].T
                cum = np.cumsum(probs, axis=1)
                chosen = (cum <= (u[hit] * cum[:, -1])[:, None]).sum(axis=1)
                flat[hit] = np.minimum(chosen, K - 1)
        return flat // self.T, flat % self.T

    def _tally(self):
        c = self.recount()
        self.n_dlz, self.n_dl, self.n_d = c["n_dlz"], c["n_dl"], c["n_d"]
        self.n_lzw, self.n_lz = c["n_lzw"], c["n_lz"]

    def recount(self) -> dict:
        """Count tables rebuilt from scratch from the current assignments."""
        L, T, V, D = self.L, self.T, self.V, self.D
        n_dlz = np.zeros((D, L, T), dtype=np.int64)
        n_lzw = np.zeros((L, T, V), dtype=np.int64)
        np.add.at(n_dlz, (self.docs, self.labels, self.topics), 1)
        np.add.at(n_lzw, (self.labels, self.topics, self.words), 1)
        return {"n_dlz": n_dlz, "n_dl": n_dlz.sum(axis=2), "n_d": n_dlz.sum(axis=(1, 2)),
                "n_lzw": n_lzw, "n_lz": n_lzw.sum(axis=2)}

    def counts(self) -> dict:
        return {"n_dlz": self.n_dlz, "n_dl": self.n_dl, "n_d": self.n_d,
                "n_lzw": self.n_lzw, "n_lz": self.n_lz}

    def counts_consistent(self) -> bool:
        fresh = self.recount()
        return all(np.array_equal(fresh[k], v) for k, v in self.counts().items())

    @property
    def assignments(self) -> tuple[np.ndarray, np.ndarray]:
        return self.labels.copy(), self.topics.copy()

    # token-level moves, used by the reference path and by tests

    def remove(self, i: int) -> None:
        d, l, z, w = self.docs[i], self.labels[i], self.topics[i], self.words[i]
        self.n_dlz[d, l, z] -= 1
        self.n_dl[d, l] -= 1
        self.n_d[d] -= 1
        self.n_lzw[l, z, w] -= 1
        self.n_lz[l, z] -= 1

    def add(self, i: int, l: int, z: int) -> None:
        d, w = self.docs[i], self.words[i]
        self.labels[i], self.topics[i] = l, z
        self.n_dlz[d, l, z] += 1
        self.n_dl[d, l] += 1
        self.n_d[d] += 1
        self.n_lzw[l, z, w] += 1
        self.n_lz[l, z] += 1

    def conditional(self, i: int, normalize: bool = True) -> np.ndarray:
        """(L, T) conditional for token `i`; the token must already be removed."""
        d, w = self.docs[i], self.words[i]
        word = (self.n_lzw[:, :, w] + self.beta[:, :, w]) / (self.n_lz + self.beta_sum)
        topic = (self.n_dlz[d] + self.alpha) / (self.n_dl[d] + self.alpha_sum)[:, None]
        sent = (self.n_dl[d] + self.gamma) / (self.n_d[d] + self.L * self.gamma)
        p = word * topic * sent[:, None]
        return p / p.sum() if normalize else p

    def sweep(self) -> None:
        """Resample every token once, in document then position order."""
        u = self.rng.random(self.words.size)
        _sweep_kernel(self.words, self.docs, self.labels, self.topics,
                      self.n_dlz, self.n_dl, self.n_d, self.n_lzw, self.n_lz,
                      self.beta, self.beta_sum, self.alpha, self.alpha_sum, self.gamma, u)
        self.sweeps_done += 1

    def reference_sweep(self) -> None:
        """Pure numpy sweep drawing the same uniforms as :meth:`sweep`."""
        u = self.rng.random(self.words.size)
        for i in range(self.words.size):
            self.remove(i)
            sample_assignment(self, i, u[i])
        self.sweeps_done += 1

    def estimate(self) -> Posterior:
        return estimate_posterior(self)


def sample_assignment(sampler: GibbsSampler, i: int, u: float | None = None) -> tuple[int, int]:
    """Draw a new (l, z) for token `i` from its conditional and add it back.

    The caller must have removed the token's current assignment first.
    """
    if u is None:
        u = sampler.rng.random()
    p = sampler.conditional(i, normalize=False)
    assert p.sum() > 0, "all conditional weights vanished"
    k = _pick(p.ravel(), u)
    l, z = divmod(k, sampler.T)
    sampler.add(i, l, z)
    return l, z


def gibbs_sweep(sampler: GibbsSampler) -> GibbsSampler:
    sampler.sweep()
    return sampler


def estimate_posterior(sampler: GibbsSampler) -> Posterior:
    """Smoothed point estimates of the word, topic and sentiment distributions."""
    return posterior_from_counts(sampler.n_dlz, sampler.n_lzw, sampler.beta, sampler.alpha,
                                 sampler.gamma)


def posterior_from_counts(n_dlz, n_lzw, beta, alpha, gamma) -> Posterior:
    n_dlz = np.asarray(n_dlz, dtype=float)
    n_lzw = np.asarray(n_lzw, dtype=float)
    L = beta.shape[0]
    n_dl = n_dlz.sum(axis=2)
    n_d = n_dl.sum(axis=1)
    phi = (n_lzw + beta) / (n_lzw.sum(axis=2) + beta.sum(axis=2))[:, :, None]
    theta = (n_dlz + alpha) / (n_dl + alpha.sum(axis=1))[:, :, None]
    pi = (n_dl + gamma) / (n_d + L * gamma)[:, None]
    return Posterior(phi=phi, theta=theta, pi=pi)
