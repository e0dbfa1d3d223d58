"""Dirichlet priors and their evolution from one epoch to the next.

The word prior of every sentiment-topic cluster at epoch t > 0 is a convex
combination of that cluster's estimated word distributions over the last S
epochs. History buffers are kept oldest first and the weight vectors use the
same order.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ..errors import DimensionMismatch, EmptyHistory
from .hyper import Hyperparams


@dataclass(frozen=True)
class PriorState:
    beta: np.ndarray               # (L, T, V)
    alpha: np.ndarray              # (L, T)
    history: tuple = ()            # up to S arrays of shape (L, T, V), oldest first
    mu: np.ndarray | None = None   # (L, T, len(history))

    @property
    def shape(self):
        return self.beta.shape

    def beta_sum(self) -> np.ndarray:
        return self.beta.sum(axis=2)


def seed_beta(lam: np.ndarray, hyper: Hyperparams, vocab_size: int | None = None) -> np.ndarray:
    """Epoch-0 word prior: ``beta_base * lambda[l, w]`` for every topic."""
    lam = np.asarray(lam, dtype=float)
    if lam.ndim != 2 or lam.shape[0] != hyper.L:
        raise DimensionMismatch(f"lambda has shape {lam.shape}, expected ({hyper.L}, V)")
    if vocab_size is not None and lam.shape[1] != vocab_size:
        raise DimensionMismatch(f"lambda covers {lam.shape[1]} words, vocabulary has {vocab_size}")
    return np.repeat((hyper.beta_base * lam)[:, None, :], hyper.T, axis=1)


def initial_priors(lam: np.ndarray, hyper: Hyperparams, vocab_size: int | None = None) -> PriorState:
    beta = seed_beta(lam, hyper, vocab_size)
    alpha = np.full((hyper.L, hyper.T), float(hyper.alpha_init))
    return PriorState(beta=beta, alpha=alpha)


def compute_mu(hyper: Hyperparams, history_len: int) -> np.ndarray:
    """Weights for ``history_len`` past slices, oldest first, summing to one.

    Under the decay scheme the slice ``a`` epochs back gets weight
    proportional to ``exp(-kappa * a)``.
    """
    if not 1 <= history_len <= hyper.S:
        raise ValueError(f"history length {history_len} outside 1..{hyper.S}")
    if hyper.mu_scheme == "uniform":
        return np.full(history_len, 1.0 / history_len)
    ages = np.arange(history_len, 0, -1)
    w = np.exp(-hyper.kappa * ages)
    return w / w.sum()


def evolve_beta(history, mu) -> np.ndarray:
    """Evolutionary matrix times weights: ``sum_s mu[s] * history[s]``.

    `history` holds the past word distributions of one cluster (or stacked
    clusters, with `mu` carrying matching leading axes and the slice axis last).
    """
    if len(history) == 0:
        raise EmptyHistory("no past word distributions; use seed_beta at epoch 0")
    mu = np.asarray(mu, dtype=float)
    if mu.shape[-1] != len(history):
        raise DimensionMismatch(f"{mu.shape[-1]} weights for {len(history)} history slices")
    out = mu[..., 0, None] * np.asarray(history[0], dtype=float)
    for s in range(1, len(history)):
        out = out + mu[..., s, None] * np.asarray(history[s], dtype=float)
    return out


def advance_epoch(priors: PriorState, phi_hat: np.ndarray | None, hyper: Hyperparams,
                  lam: np.ndarray | None = None, rng: np.random.Generator | None = None) -> PriorState:
    """Priors for the next epoch given this epoch's estimated word distributions.

    Pass ``phi_hat=None`` for an epoch without data: the history is left
    untouched and beta is carried over unchanged.
    """
    if hyper.sample_alpha:
        if rng is None:
            raise ValueError("sampled alpha evolution needs a random generator")
        alpha = rng.gamma(hyper.nu * priors.alpha, 1.0 / hyper.nu)
        # a gamma draw can underflow to zero for tiny shapes
        alpha = np.maximum(alpha, np.finfo(float).tiny)
    else:
        alpha = priors.alpha.copy()

    if phi_hat is None:
        return replace(priors, alpha=alpha)

    phi_hat = np.asarray(phi_hat, dtype=float)
    if phi_hat.shape != priors.beta.shape:
        raise DimensionMismatch(f"phi has shape {phi_hat.shape}, priors {priors.beta.shape}")
    history = (priors.history + (phi_hat.copy(),))[-hyper.S:]
    weights = compute_mu(hyper, len(history))
    mu = np.broadcast_to(weights, priors.alpha.shape + (len(history),)).copy()
    beta = evolve_beta(history, mu)
    if hyper.reapply_lambda:
        if lam is None:
            raise ValueError("reapply_lambda is set but no lambda matrix was given")
        beta = beta * np.asarray(lam)[:, None, :]
    return PriorState(beta=beta, alpha=alpha, history=history, mu=mu)
