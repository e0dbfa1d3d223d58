"""Polarity lexicon and the prior transformation matrix built from it."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .corpus import Vocabulary, read_word_list, tokenize
from .errors import ConflictingEntry

logger = logging.getLogger(__name__)

POSITIVE = 0
NEGATIVE = 1
LABEL_NAMES = ("positive", "negative")
LABEL_CODES = ("P", "N")

MATCHED = 0.9
OPPOSED = 0.05


@dataclass(frozen=True)
class Lexicon:
    """Map from word to prior sentiment label (``POSITIVE`` or ``NEGATIVE``)."""

    polarity: Mapping[str, int] = field(default_factory=dict)

    def __len__(self):
        return len(self.polarity)

    def __contains__(self, word):
        return word in self.polarity

    def get(self, word):
        return self.polarity.get(word)

    @classmethod
    def from_words(cls, positive=(), negative=()) -> "Lexicon":
        polarity: dict[str, int] = {}
        for words, label in ((positive, POSITIVE), (negative, NEGATIVE)):
            for raw in words:
                toks = tokenize(raw)
                if len(toks) != 1:
                    logger.warning("dropping lexicon entry %r: not a single token", raw)
                    continue
                word = toks[0]
                if polarity.get(word, label) != label:
                    raise ConflictingEntry(word)
                polarity[word] = label
        return cls(polarity)


def load_lexicon(positive_file, negative_file) -> Lexicon:
    """Read the two word-list files (one word per line, ';' comments)."""
    return Lexicon.from_words(read_word_list(positive_file), read_word_list(negative_file))


def build_lambda(lexicon: Lexicon, vocab: Vocabulary, L: int = 2) -> np.ndarray:
    """L x V multipliers: 0.9 on the word's own label, 0.05 elsewhere, 1 if unlisted."""
    if L != 2:
        raise ValueError("the polarity lexicon defines exactly two sentiment labels")
    lam = np.ones((L, vocab.size))
    for word, label in lexicon.polarity.items():
        w = vocab.term_to_id.get(word)
        if w is None:
            continue
        lam[:, w] = OPPOSED
        lam[label, w] = MATCHED
    return lam


def lexicon_mask(lam: np.ndarray) -> np.ndarray:
    """Boolean per word: True where the word carries a lexicon prior."""
    return ~np.all(lam == 1.0, axis=0)
