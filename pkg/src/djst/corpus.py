"""Preprocessing, vocabulary construction and epoch streams of documents.

A client case file is a set of session transcripts. Each session becomes one
epoch; long sessions are cut into fixed-size chunks so that the sampler sees
several documents per epoch.
"""
from __future__ import annotations

import logging
import re
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

from .errors import AllSessionsEmpty, EmptySessionWarning, ValidationError

logger = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[^\W_]+")
_SESSION_RE = re.compile(r"^session_(.+)\.txt$")

DEFAULT_CHUNK_TOKENS = 1000


def tokenize(raw_text: str, stopwords: Iterable[str] = ()) -> list[str]:
    """Lowercase, split on every non-alphanumeric character, drop stopwords."""
    stop = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    return [tok for tok in _TOKEN_RE.findall(raw_text.lower()) if tok not in stop]


def read_word_list(path) -> list[str]:
    """One entry per line; blank lines and ';' comments are skipped."""
    words = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line and not line.startswith(";"):
                words.append(line)
    return words


def load_stopwords(path=None) -> frozenset[str]:
    """Load a stopword file, or the bundled English list when `path` is None."""
    if path is None:
        ref = resources.files("djst").joinpath("data/stopwords_en.txt")
        with resources.as_file(ref) as p:
            return frozenset(w.lower() for w in read_word_list(p))
    return frozenset(w.lower() for w in read_word_list(path))


@dataclass(frozen=True)
class Vocabulary:
    id_to_term: tuple[str, ...]
    term_to_id: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        mapping = {t: i for i, t in enumerate(self.id_to_term)}
        if len(mapping) != len(self.id_to_term):
            raise ValidationError("duplicate terms in vocabulary")
        object.__setattr__(self, "term_to_id", mapping)

    @property
    def size(self) -> int:
        return len(self.id_to_term)

    def __len__(self):
        return len(self.id_to_term)

    def __contains__(self, term):
        return term in self.term_to_id

    def encode(self, tokens: Iterable[str]) -> tuple[int, ...]:
        return tuple(self.term_to_id[t] for t in tokens)


def build_vocabulary(documents: Iterable[Sequence[str]]) -> Vocabulary:
    """Distinct tokens, ids assigned in order of first occurrence."""
    seen: dict[str, None] = {}
    for doc in documents:
        for tok in doc:
            seen.setdefault(tok, None)
    return Vocabulary(tuple(seen))


@dataclass(frozen=True)
class Document:
    doc_id: str
    epoch: int
    tokens: tuple[int, ...]

    def __len__(self):
        return len(self.tokens)


@dataclass(frozen=True)
class Epoch:
    label: str
    documents: tuple[Document, ...] = ()

    @property
    def token_count(self) -> int:
        return sum(len(d) for d in self.documents)


@dataclass(frozen=True)
class EpochStream:
    epochs: tuple[Epoch, ...]

    def __post_init__(self):
        for t, ep in enumerate(self.epochs):
            if any(d.epoch != t for d in ep.documents):
                raise ValidationError(f"document in epoch {t} carries a different epoch index")

    def __len__(self):
        return len(self.epochs)

    def __iter__(self):
        return iter(self.epochs)

    def __getitem__(self, t) -> Epoch:
        return self.epochs[t]

    @property
    def labels(self) -> list[str]:
        return [ep.label for ep in self.epochs]

    @property
    def token_count(self) -> int:
        return sum(ep.token_count for ep in self.epochs)


def client_text(raw_text: str) -> str:
    """Keep client turns: drop lines marked "T:", strip a leading "C:"."""
    kept = []
    for line in raw_text.splitlines():
        stripped = line.lstrip()
        if stripped[:2].upper() == "T:":
            continue
        if stripped[:2].upper() == "C:":
            stripped = stripped[2:]
        kept.append(stripped)
    return "\n".join(kept)


def chunk(tokens: Sequence, size: int) -> list:
    if size <= 0 or len(tokens) <= size:
        return [tokens] if tokens else []
    return [tokens[i:i + size] for i in range(0, len(tokens), size)]


def ingest(session_files: Sequence[tuple[str, str]], stopwords: Iterable[str] = (),
           chunk_tokens: int = DEFAULT_CHUNK_TOKENS) -> tuple[Vocabulary, EpochStream]:
    """Turn ordered ``(label, raw_text)`` sessions into a vocabulary and epoch stream.

    Every session is one epoch, in the given order. A session that is empty
    after preprocessing is kept as an epoch with no documents and a warning is
    issued; if every session is empty, :class:`AllSessionsEmpty` is raised.
    """
    stop = frozenset(stopwords)
    tokenized = [(str(label), tokenize(client_text(text), stop)) for label, text in session_files]
    if not tokenized or all(not toks for _, toks in tokenized):
        raise AllSessionsEmpty("every session is empty after preprocessing")

    vocab = build_vocabulary(toks for _, toks in tokenized)
    epochs = []
    for t, (label, toks) in enumerate(tokenized):
        if any(c.isspace() for c in label) or not label:
            raise ValidationError(f"session label {label!r} must be non-empty without whitespace")
        if not toks:
            warnings.warn(f"session {label} is empty after preprocessing", EmptySessionWarning,
                          stacklevel=2)
        ids = vocab.encode(toks)
        docs = tuple(Document(f"{label}-{k}", t, piece)
                     for k, piece in enumerate(chunk(ids, chunk_tokens)))
        epochs.append(Epoch(label, docs))
    return vocab, EpochStream(tuple(epochs))


def _session_key(name: str):
    nn = _SESSION_RE.match(name).group(1)
    return (0, int(nn), nn) if nn.isdigit() else (1, 0, nn)


def read_client_dir(path) -> list[tuple[str, str]]:
    """Read ``session_<NN>.txt`` files in session order as ``(label, text)`` pairs."""
    root = Path(path)
    if not root.is_dir():
        raise FileNotFoundError(f"client directory not found: {root}")
    names = sorted((p.name for p in root.iterdir() if _SESSION_RE.match(p.name)), key=_session_key)
    sessions = []
    for name in names:
        nn = _SESSION_RE.match(name).group(1)
        label = str(int(nn)) if nn.isdigit() else nn
        sessions.append((label, (root / name).read_text(encoding="utf-8")))
    return sessions


def save_corpus(path, vocab: Vocabulary, stream: EpochStream) -> None:
    """Write the line-delimited corpus snapshot."""
    lines = [f"V {vocab.size}"]
    lines += [f"{term}\t{i}" for i, term in enumerate(vocab.id_to_term)]
    for t, ep in enumerate(stream):
        lines.append(f"EPOCH {t} {ep.label}")
        for doc in ep.documents:
            lines.append(f"DOC {t} {doc.doc_id} {ep.label}")
            lines.append(" ".join(map(str, doc.tokens)))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def load_corpus(path) -> tuple[Vocabulary, EpochStream]:
    lines = Path(path).read_text(encoding="utf-8").split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    head = lines[0].split()
    if len(head) != 2 or head[0] != "V":
        raise ValidationError(f"{path}: missing 'V <size>' header")
    size = int(head[1])
    terms = [None] * size
    for line in lines[1:1 + size]:
        term, idx = line.split("\t")
        terms[int(idx)] = term
    vocab = Vocabulary(tuple(terms))

    labels: list[str] = []
    docs: list[list[Document]] = []
    i = 1 + size
    while i < len(lines):
        parts = lines[i].split()
        if parts[0] == "EPOCH":
            t = int(parts[1])
            if t != len(labels):
                raise ValidationError(f"{path}: epochs out of order at line {i + 1}")
            labels.append(parts[2])
            docs.append([])
            i += 1
        elif parts[0] == "DOC":
            t = int(parts[1])
            if t != len(labels) - 1:
                raise ValidationError(f"{path}: document outside its epoch at line {i + 1}")
            toks = tuple(int(x) for x in lines[i + 1].split())
            if any(x >= size or x < 0 for x in toks):
                raise ValidationError(f"{path}: token id out of range at line {i + 2}")
            docs[t].append(Document(parts[2], t, toks))
            i += 2
        else:
            raise ValidationError(f"{path}: unexpected line {i + 1}: {lines[i]!r}")
    stream = EpochStream(tuple(Epoch(lab, tuple(ds)) for lab, ds in zip(labels, docs)))
    return vocab, stream
