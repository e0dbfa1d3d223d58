"""Epoch-by-epoch training driver and model snapshots."""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from ..corpus import Document, EpochStream
from ..errors import EmptyDocument, ValidationError
from ..lexicon import lexicon_mask
from .hyper import Hyperparams
from .priors import PriorState, advance_epoch, initial_priors
from .sampler import GibbsSampler, Posterior

logger = logging.getLogger(__name__)

SNAPSHOT_FORMAT = "djst-model"
SNAPSHOT_VERSION = 1


@dataclass
class EpochResult:
    epoch: int
    label: str
    posterior: Posterior | None     # None when the epoch has no documents
    doc_ids: list = field(default_factory=list)
    doc_lengths: np.ndarray = field(default_factory=lambda: np.zeros(0, dtype=np.int64))
    beta: np.ndarray | None = None  # prior used during this epoch
    alpha: np.ndarray | None = None
    mu: np.ndarray | None = None
    history_len: int = 0
    assignments: tuple | None = None

    @property
    def has_data(self) -> bool:
        return self.posterior is not None


def _average(posteriors: list[Posterior]) -> Posterior:
    n = len(posteriors)
    return Posterior(phi=sum(p.phi for p in posteriors) / n,
                     theta=sum(p.theta for p in posteriors) / n,
                     pi=sum(p.pi for p in posteriors) / n)


class DJST:
    """Dynamic joint sentiment-topic model trained over an ordered stream.

    Parameters
    ----------
    hyper : Hyperparams
    lam : (L, V) array
        Lexicon multipliers from :func:`djst.lexicon.build_lambda`.
    """

    def __init__(self, hyper: Hyperparams, lam: np.ndarray):
        self.hyper = hyper
        self.lam = np.asarray(lam, dtype=float)
        self.mask = lexicon_mask(self.lam)
        self.rng = np.random.default_rng(hyper.seed)
        self.priors: PriorState = initial_priors(self.lam, hyper, self.lam.shape[1])
        # priors are advanced lazily, when the next epoch starts
        self._pending = False
        self._pending_phi: np.ndarray | None = None
        self.epoch = 0
        self.results: list[EpochResult] = []
        self.sampler: GibbsSampler | None = None

    @property
    def vocab_size(self) -> int:
        return self.lam.shape[1]

    def fit_epoch(self, documents: Sequence, label: str | None = None) -> EpochResult:
        """Sample one epoch and estimate its posterior.

        Priors for the following epoch are evolved when that epoch starts.
        """
        hyper = self.hyper
        docs = [d.tokens if isinstance(d, Document) else tuple(d) for d in documents]
        ids = [d.doc_id if isinstance(d, Document) else str(k) for k, d in enumerate(documents)]
        if any(len(d) == 0 for d in docs):
            raise EmptyDocument(f"epoch {self.epoch} contains a document without tokens")
        label = str(self.epoch) if label is None else label
        if self._pending:
            self.priors = advance_epoch(self.priors, self._pending_phi, hyper, self.lam, self.rng)
            self._pending = False
        used = self.priors
        result = EpochResult(epoch=self.epoch, label=label, posterior=None, doc_ids=ids,
                             doc_lengths=np.array([len(d) for d in docs], dtype=np.int64),
                             beta=used.beta, alpha=used.alpha, mu=used.mu,
                             history_len=len(used.history))
        if not docs:
            logger.info("epoch %d (%s): no data, priors carried over", self.epoch, label)
            self.sampler = None
        else:
            sampler = GibbsSampler(docs, used, hyper, self.rng, init_mask=self.mask)
            kept = []
            for s in range(hyper.sweeps):
                sampler.sweep()
                if hyper.average_every and s >= hyper.burn_in \
                        and (hyper.sweeps - 1 - s) % hyper.average_every == 0:
                    kept.append(sampler.estimate())
            result.posterior = _average(kept) if kept else sampler.estimate()
            result.assignments = sampler.assignments
            self.sampler = sampler
            logger.info("epoch %d (%s): %d docs, %d tokens, %d sweeps", self.epoch, label,
                        len(docs), sampler.n_tokens, hyper.sweeps)
        self._pending = True
        self._pending_phi = None if result.posterior is None else result.posterior.phi
        self.results.append(result)
        self.epoch += 1
        return result

    def fit(self, stream: EpochStream | Sequence, callback=None) -> list[EpochResult]:
        """Train on every remaining epoch of `stream` in order.

        `stream` is an :class:`EpochStream` or a list of document lists. When
        resuming from a snapshot, epochs before ``self.epoch`` are skipped.
        """
        epochs = list(stream)
        for t in range(self.epoch, len(epochs)):
            ep = epochs[t]
            if hasattr(ep, "documents"):
                res = self.fit_epoch(ep.documents, ep.label)
            else:
                res = self.fit_epoch(ep)
            if callback is not None:
                callback(self, res)
        return self.results

    def next_priors(self) -> PriorState:
        """Priors the next epoch will use."""
        if not self._pending:
            return self.priors
        # advancing may consume randomness, so work on a copy of the generator
        rng = np.random.default_rng()
        rng.bit_generator.state = self.rng.bit_generator.state
        return advance_epoch(self.priors, self._pending_phi, self.hyper, self.lam, rng)

    # snapshots

    def snapshot(self) -> dict:
        """State after the most recent epoch; loading it resumes the stream exactly."""
        last = self.results[-1] if self.results else None
        p = self.priors
        return {
            "format": SNAPSHOT_FORMAT,
            "version": SNAPSHOT_VERSION,
            "epoch": self.epoch - 1,
            "label": last.label if last else None,
            "hyper": self.hyper.as_dict(),
            "lambda": self.lam.tolist(),
            "priors": {
                "beta": p.beta.tolist(),
                "alpha": p.alpha.tolist(),
                "history": [h.tolist() for h in p.history],
                "mu": None if p.mu is None else p.mu.tolist(),
            },
            "pending": self._pending,
            "pending_phi": None if self._pending_phi is None else self._pending_phi.tolist(),
            "assignments": None if last is None or last.assignments is None else {
                "labels": last.assignments[0].tolist(), "topics": last.assignments[1].tolist()},
            "rng_state": self.rng.bit_generator.state,
        }

    def save(self, path) -> None:
        Path(path).write_text(json.dumps(self.snapshot()) + "\n", encoding="utf-8")

    @classmethod
    def from_snapshot(cls, snap: dict) -> "DJST":
        if snap.get("format") != SNAPSHOT_FORMAT or snap.get("version") != SNAPSHOT_VERSION:
            raise ValidationError("not a supported model snapshot")
        model = cls(Hyperparams(**snap["hyper"]), np.array(snap["lambda"], dtype=float))
        model.priors = _priors_from(snap["priors"])
        model._pending = bool(snap["pending"])
        if snap["pending_phi"] is not None:
            model._pending_phi = np.array(snap["pending_phi"], dtype=float)
        model.rng.bit_generator.state = snap["rng_state"]
        model.epoch = snap["epoch"] + 1
        return model

    @classmethod
    def load(cls, path) -> "DJST":
        return cls.from_snapshot(json.loads(Path(path).read_text(encoding="utf-8")))


def _priors_from(d: dict) -> PriorState:
    return PriorState(
        beta=np.array(d["beta"], dtype=float),
        alpha=np.array(d["alpha"], dtype=float),
        history=tuple(np.array(h, dtype=float) for h in d["history"]),
        mu=None if d["mu"] is None else np.array(d["mu"], dtype=float),
    )


def restore_sampler(snap: dict, documents: Sequence) -> GibbsSampler:
    """Rebuild the final sampler state of a snapshot's epoch (counts recounted)."""
    hyper = Hyperparams(**snap["hyper"])
    docs = [d.tokens if isinstance(d, Document) else d for d in documents]
    a = snap["assignments"]
    rng = np.random.default_rng()
    rng.bit_generator.state = snap["rng_state"]
    return GibbsSampler(docs, _priors_from(snap["priors"]), hyper, rng,
                        assignments=(np.array(a["labels"]), np.array(a["topics"])))
