import warnings

import pytest
from hypothesis import given, strategies as st

from djst.corpus import (Document, EpochStream, Epoch, build_vocabulary, chunk, client_text, ingest,
                         load_corpus, load_stopwords, read_client_dir, save_corpus, tokenize)
from djst.errors import AllSessionsEmpty, EmptySessionWarning


def test_tokenize_splits_contractions_and_drops_stopwords():
    assert tokenize("I'm suffering real pain.", {"i", "m", "am"}) == ["suffering", "real", "pain"]


def test_tokenize_empty_and_case_folding():
    assert tokenize("") == []
    assert tokenize("ABC abc", set()) == ["abc", "abc"]


def test_tokenize_keeps_digits_and_drops_underscores():
    assert tokenize("room_101 at 5pm!") == ["room", "101", "at", "5pm"]


@given(st.text())
def test_tokenize_idempotent(text):
    stop = {"the", "a", "i"}
    once = tokenize(text, stop)
    assert tokenize(" ".join(once), stop) == once
    assert all(t == t.lower() and t.isalnum() and t not in stop for t in once)


def test_build_vocabulary_first_occurrence_order():
    vocab = build_vocabulary([["a", "b"], ["b", "c"]])
    assert vocab.size == 3
    assert vocab.term_to_id == {"a": 0, "b": 1, "c": 2}
    assert build_vocabulary([]).size == 0


@given(st.lists(st.lists(st.sampled_from(list("abcdefgh")), max_size=6), max_size=6))
def test_vocabulary_is_dense_bijection(docs):
    vocab = build_vocabulary(docs)
    assert sorted(vocab.term_to_id.values()) == list(range(vocab.size))
    for w, i in vocab.term_to_id.items():
        assert vocab.id_to_term[i] == w
    assert set(vocab.id_to_term) == {t for d in docs for t in d}


def test_ingest_one_epoch_per_session():
    sessions = [(str(i), f"talk about work number {i}") for i in range(1, 6)]
    vocab, stream = ingest(sessions, load_stopwords())
    assert len(stream) == 5
    assert [d.epoch for ep in stream for d in ep.documents] == [0, 1, 2, 3, 4]


def test_ingest_missing_sessions_reindexed_keep_labels():
    labels = ["1", "3", "5", "7", "9", "11"]
    vocab, stream = ingest([(s, "feeling better") for s in labels])
    assert stream.labels == labels
    assert [ep.documents[0].epoch for ep in stream] == list(range(6))


def test_ingest_chunking_ceiling_division():
    text = " ".join(f"w{i}" for i in range(2500))
    _, stream = ingest([("1", text)], chunk_tokens=1000)
    assert [len(d) for d in stream[0].documents] == [1000, 1000, 500]
    _, whole = ingest([("1", text)], chunk_tokens=0)
    assert [len(d) for d in whole[0].documents] == [2500]


def test_ingest_empty_session_warns_and_keeps_epoch():
    with pytest.warns(EmptySessionWarning):
        _, stream = ingest([("1", "hello there"), ("2", "the a an"), ("3", "bye")], load_stopwords())
    assert len(stream) == 3 and stream[1].documents == ()


def test_ingest_all_empty_raises():
    with pytest.raises(AllSessionsEmpty):
        ingest([("1", ""), ("2", "!!!")])
    with pytest.raises(AllSessionsEmpty):
        ingest([])


def test_ingest_token_total_and_determinism():
    sessions = [("1", "Zebra apple, mango! apple"), ("2", "mango kiwi zebra")]
    a = ingest(sessions)
    b = ingest(sessions)
    assert a == b
    assert a[1].token_count == sum(len(tokenize(t)) for _, t in sessions)


def test_client_text_drops_therapist_turns():
    raw = "T: How are you?\nC: I feel awful.\nstill the client\n  t: lowercase marker"
    assert client_text(raw).split("\n") == [" I feel awful.", "still the client"]


def test_chunk_edge_cases():
    assert chunk((), 10) == []
    assert chunk((1, 2, 3), 3) == [(1, 2, 3)]


def test_read_client_dir_orders_numerically(tmp_path):
    for nn in ["10", "02", "1"]:
        (tmp_path / f"session_{nn}.txt").write_text(f"text {nn}")
    (tmp_path / "notes.txt").write_text("ignored")
    sessions = read_client_dir(tmp_path)
    assert [s for s, _ in sessions] == ["1", "2", "10"]


def test_read_client_dir_missing(tmp_path):
    with pytest.raises(FileNotFoundError, match="nowhere"):
        read_client_dir(tmp_path / "nowhere")


def test_corpus_snapshot_round_trip(tmp_path):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptySessionWarning)
        vocab, stream = ingest([("1", "a b c a"), ("3", ""), ("5", "c d " * 3)], chunk_tokens=4)
    path = tmp_path / "corpus.txt"
    save_corpus(path, vocab, stream)
    text = path.read_text().splitlines()
    assert text[0] == "V 4"
    assert text[1] == "a\t0"
    assert "DOC 0 1-0 1" in text
    assert load_corpus(path) == (vocab, stream)


def test_stream_rejects_wrong_epoch_index():
    with pytest.raises(ValueError):
        EpochStream((Epoch("1", (Document("x", 1, (0,)),)),))


def test_bundled_stopwords():
    stop = load_stopwords()
    assert {"i", "m", "the", "and"} <= stop
