import numpy as np
import pytest
from hypothesis import given, strategies as st

from djst.corpus import build_vocabulary
from djst.errors import ConflictingEntry
from djst.lexicon import NEGATIVE, POSITIVE, Lexicon, build_lambda, lexicon_mask, load_lexicon


def write(path, words):
    path.write_text("".join(w + "\n" for w in words))
    return path


def test_load_lexicon(tmp_path):
    pos = write(tmp_path / "pos.txt", ["; opinion lexicon", "", "good"])
    neg = write(tmp_path / "neg.txt", ["pain"])
    lex = load_lexicon(pos, neg)
    assert lex.get("good") == POSITIVE and lex.get("pain") == NEGATIVE
    assert len(lex) == 2


def test_conflicting_entry(tmp_path):
    with pytest.raises(ConflictingEntry) as err:
        load_lexicon(write(tmp_path / "p", ["fine"]), write(tmp_path / "n", ["fine"]))
    assert err.value.word == "fine"


def test_empty_files(tmp_path):
    assert len(load_lexicon(write(tmp_path / "p", []), write(tmp_path / "n", []))) == 0


def test_multiword_entries_dropped():
    lex = Lexicon.from_words(["well being", "Happy"], ["two-faced"])
    assert lex.polarity == {"happy": POSITIVE}


def test_build_lambda_values():
    vocab = build_vocabulary([["pain", "table", "good"]])
    lam = build_lambda(Lexicon({"pain": NEGATIVE, "good": POSITIVE, "absent": POSITIVE}), vocab)
    assert lam.shape == (2, 3)
    assert lam[NEGATIVE, 0] == 0.9 and lam[POSITIVE, 0] == 0.05
    assert list(lam[:, 1]) == [1.0, 1.0]
    assert lam[POSITIVE, 2] == 0.9 and lam[NEGATIVE, 2] == 0.05
    assert list(lexicon_mask(lam)) == [True, False, True]


def test_empty_lexicon_all_ones():
    vocab = build_vocabulary([["a", "b"]])
    assert np.array_equal(build_lambda(Lexicon({}), vocab), np.ones((2, 2)))


@given(st.dictionaries(st.sampled_from(list("abcdefghij")), st.sampled_from([POSITIVE, NEGATIVE])))
def test_lambda_columns(entries):
    vocab = build_vocabulary([list("abcdefghij")])
    lam = build_lambda(Lexicon(entries), vocab)
    reordered = build_lambda(Lexicon(dict(reversed(list(entries.items())))), vocab)
    assert np.array_equal(lam, reordered)
    for w, i in vocab.term_to_id.items():
        col = sorted(lam[:, i])
        assert col == ([0.05, 0.9] if w in entries else [1.0, 1.0])
    assert set(np.unique(lam)) <= {0.05, 0.9, 1.0}
