"""Sentiment trends, topic word lists and agreement with expert session labels."""
from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .corpus import Vocabulary
from .errors import NoData, NothingComparable, ValidationError
from .lexicon import LABEL_CODES, LABEL_NAMES, NEGATIVE

NO_DATA = "no data"
TREND_HEADER = ["session", "p_positive", "p_negative", "dominant", "tokens"]
_MISSING = {None, "", "-", NO_DATA}


@dataclass(frozen=True)
class TrendPoint:
    session_label: str
    p_by_label: tuple | None
    dominant: str
    token_count: int = 0


@dataclass(frozen=True)
class TopicSummary:
    label: int
    topic: int
    top_words: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"sentiment": LABEL_NAMES[self.label], "topic": self.topic,
                "words": [{"term": t, "p": p} for t, p in self.top_words]}


@dataclass(frozen=True)
class ExpertComparison:
    per_session: list
    accuracy: float

    @property
    def compared(self) -> int:
        return sum(1 for row in self.per_session if row[3] is not None)

    @property
    def mismatches(self) -> list:
        return [row[0] for row in self.per_session if row[3] is False]


def aggregate_epoch_sentiment(pi: np.ndarray, doc_lengths: Sequence[int]) -> np.ndarray:
    """Token-weighted mean of the per-document sentiment distributions."""
    pi = np.asarray(pi, dtype=float)
    n = np.asarray(doc_lengths, dtype=float)
    if pi.shape[0] == 0 or n.sum() <= 0:
        raise NoData("epoch has no tokens")
    return (n[:, None] * pi).sum(axis=0) / n.sum()


def dominant_label(p_by_label, tie: int = NEGATIVE) -> str:
    """'P' or 'N' for the most probable label; exact ties go to `tie`."""
    p = np.asarray(p_by_label, dtype=float)
    best = np.flatnonzero(p == p.max())
    k = tie if tie in best else int(best[0])
    return LABEL_CODES[k]


def trend_point(session_label: str, pi, doc_lengths, tie: int = NEGATIVE) -> TrendPoint:
    try:
        p = aggregate_epoch_sentiment(pi, doc_lengths)
    except NoData:
        return TrendPoint(session_label, None, NO_DATA, 0)
    return TrendPoint(session_label, tuple(float(x) for x in p), dominant_label(p, tie),
                      int(np.sum(doc_lengths)))


def top_words(phi_lz: np.ndarray, vocab: Vocabulary, k: int = 20, label: int = 0,
              topic: int = 0) -> TopicSummary:
    """The `k` most probable terms; equal probabilities are ordered by id."""
    phi_lz = np.asarray(phi_lz, dtype=float)
    order = np.argsort(-phi_lz, kind="stable")[:max(k, 0)]
    return TopicSummary(label, topic, [(vocab.id_to_term[w], float(phi_lz[w])) for w in order])


def topic_summaries(phi: np.ndarray, vocab: Vocabulary, k: int = 20) -> list[TopicSummary]:
    L, T, _ = phi.shape
    return [top_words(phi[l, z], vocab, k, l, z) for l in range(L) for z in range(T)]


def _missing(x) -> bool:
    return x in _MISSING


def compare_to_expert(model_sequence, expert_sequence, sessions: Sequence[str] | None = None) -> ExpertComparison:
    """Agreement between model and expert N/P labels.

    Either pass two equal-length sequences (optionally with their session
    labels) or two mappings from session label to N/P, which are aligned by
    key. Missing labels (``None``, ``"-"``, ``""`` or ``"no data"``) are left
    out of the denominator.
    """
    if isinstance(model_sequence, Mapping) and isinstance(expert_sequence, Mapping):
        keys = list(model_sequence) + [s for s in expert_sequence if s not in model_sequence]
        pairs = [(s, model_sequence.get(s), expert_sequence.get(s)) for s in keys]
    else:
        model_sequence, expert_sequence = list(model_sequence), list(expert_sequence)
        if len(model_sequence) != len(expert_sequence):
            raise ValidationError("model and expert sequences differ in length")
        sessions = [str(i + 1) for i in range(len(model_sequence))] if sessions is None else list(sessions)
        pairs = list(zip(sessions, model_sequence, expert_sequence))

    rows, hits, n = [], 0, 0
    for s, m, e in pairs:
        if _missing(m) or _missing(e):
            rows.append((s, m, e, None))
            continue
        n += 1
        hits += m == e
        rows.append((s, m, e, m == e))
    if n == 0:
        raise NothingComparable("no session has both a model and an expert label")
    return ExpertComparison(rows, hits / n)


def _fmt(x: float) -> str:
    return f"{x:.6f}"


def emit_trend_csv(trend: Sequence[TrendPoint], destination) -> None:
    with open(destination, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TREND_HEADER)
        for tp in trend:
            if tp.p_by_label is None:
                writer.writerow([tp.session_label, "", "", NO_DATA, tp.token_count])
            else:
                if len(tp.p_by_label) != 2:
                    raise ValidationError("trend CSV holds exactly two sentiment labels")
                writer.writerow([tp.session_label, _fmt(tp.p_by_label[0]), _fmt(tp.p_by_label[1]),
                                 tp.dominant, tp.token_count])


def read_trend_csv(source) -> list[TrendPoint]:
    points = []
    with open(source, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not set(TREND_HEADER) <= set(reader.fieldnames):
            raise ValidationError(f"{source}: expected header {','.join(TREND_HEADER)}")
        for row in reader:
            if row["p_positive"] and row["p_negative"]:
                p = (float(row["p_positive"]), float(row["p_negative"]))
            else:
                p = None
            tokens = int(row["tokens"]) if row["tokens"] else 0
            points.append(TrendPoint(row["session"], p, row["dominant"], tokens))
    return points


def read_expert_csv(source) -> dict[str, str | None]:
    """``session,label`` rows with labels N or P; blank or '-' means missing."""
    labels: dict[str, str | None] = {}
    with open(source, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for i, row in enumerate(reader):
            if not row or not "".join(row).strip():
                continue
            if i == 0 and row[0].strip().lower() == "session":
                continue
            session = row[0].strip()
            label = row[1].strip().upper() if len(row) > 1 else ""
            if label not in ("N", "P", "", "-"):
                raise ValidationError(f"{source}: label {label!r} for session {session} is not N or P")
            labels[session] = label if label in ("N", "P") else None
    return labels


def emit_topics_json(entries: Sequence[dict], destination) -> None:
    Path(destination).write_text(json.dumps(list(entries), indent=1) + "\n", encoding="utf-8")
