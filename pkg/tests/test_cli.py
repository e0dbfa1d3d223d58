import json

import pytest

from djst.cli import main
from djst.config import read_config
from djst.corpus import load_corpus

TEXTS = ["T: how was your week?\nC: awful, I felt hopeless and tired",
         "C: still sad and anxious about work",
         "C: a bit better, calmer at home",
         "C: good week, happy with my progress",
         "C: great, hopeful and confident now"]


@pytest.fixture
def client_dir(tmp_path):
    d = tmp_path / "client"
    d.mkdir()
    for i, text in enumerate(TEXTS, 1):
        (d / f"session_{i:02d}.txt").write_text(text)
    pos, neg = tmp_path / "pos.txt", tmp_path / "neg.txt"
    pos.write_text("; positive\nbetter\ngood\nhappy\nhopeful\ncalmer\n")
    neg.write_text("awful\nsad\nanxious\nhopeless\ntired\n")
    return d, pos, neg


def run(*args):
    return main([str(a) for a in args])


def trained(tmp_path, client_dir, out="out", *extra):
    d, pos, neg = client_dir
    o = tmp_path / out
    assert run("ingest", "--corpus-dir", d, "--out", o, "--quiet") == 0
    assert run("train", "--out", o, "--positive-lexicon", pos, "--negative-lexicon", neg,
               "--sweeps", 40, "--burn-in", 10, "--seed", 3, "--quiet", *extra) == 0
    return o


def test_ingest_one_epoch_per_file(tmp_path, client_dir):
    out = tmp_path / "out"
    assert run("ingest", "--corpus_dir", client_dir[0], "--out", out) == 0
    vocab, stream = load_corpus(out / "corpus.txt")
    assert stream.labels == ["1", "2", "3", "4", "5"]
    assert [len(ep.documents) for ep in stream] == [1] * 5
    # therapist turns are dropped
    assert vocab.term_to_id["awful"] == 0 and "hopeless" in vocab.term_to_id


def test_ingest_missing_dir_exit_3(tmp_path, capsys):
    missing = tmp_path / "absent_dir"
    assert run("ingest", "--corpus-dir", missing, "--out", tmp_path / "o") == 3
    assert str(missing) in capsys.readouterr().err


def test_ingest_all_empty_exit_2(tmp_path):
    d = tmp_path / "c"
    d.mkdir()
    for i in (1, 2):
        (d / f"session_{i}.txt").write_text("")
    assert run("ingest", "--corpus-dir", d, "--out", tmp_path / "o", "--quiet") == 2


def test_train_is_deterministic(tmp_path, client_dir):
    a = trained(tmp_path, client_dir, "a")
    b = trained(tmp_path, client_dir, "b")
    pa, pb = (a / "posterior.json").read_bytes(), (b / "posterior.json").read_bytes()
    dump = json.loads(pa)
    assert dump["format"] == "djst-posterior"
    # corpus path differs between the two output dirs; everything else must match
    dump_b = json.loads(pb)
    dump.pop("corpus"), dump_b.pop("corpus")
    assert dump == dump_b


def test_train_layout_and_report(tmp_path, client_dir):
    out = trained(tmp_path, client_dir, "out", "--T", 5)
    manifest = (out / "manifest.txt").read_text().splitlines()
    assert manifest[0].startswith("corpus ") and manifest[1] == "posterior posterior.json"
    assert len([l for l in manifest if l.startswith("snapshot")]) == 5
    assert (out / "model_epoch_004.json").exists()
    dump = json.loads((out / "posterior.json").read_text())
    assert all(len(ep["phi"]) * len(ep["phi"][0]) == 10 for ep in dump["epochs"])

    assert run("report", "--out", out, "--k", 20, "--quiet") == 0
    rows = (out / "trend.csv").read_text().splitlines()
    assert rows[0] == "session,p_positive,p_negative,dominant,tokens" and len(rows) == 6
    topics = json.loads((out / "topics.json").read_text())
    assert len(topics) == 50
    assert all(len(t["words"]) <= 20 for t in topics)


def test_report_marks_empty_session(tmp_path, client_dir):
    d, pos, neg = client_dir
    (d / "session_06.txt").write_text("T: nothing from the client")
    out = trained(tmp_path, client_dir)
    assert run("report", "--out", out, "--quiet") == 0
    assert (out / "trend.csv").read_text().splitlines()[-1] == "6,,,no data,0"


def test_eval_fixtures(tmp_path, fixtures, capsys):
    d = fixtures / "expert"
    assert run("eval", "--trend", d / "frank_trend.csv", "--expert-labels", d / "frank_expert.csv",
               "--out", tmp_path, "--quiet") == 0
    assert capsys.readouterr().out.strip() == "accuracy 0.800000 (5 sessions compared; mismatched: 5)"
    result = json.loads((tmp_path / "eval.json").read_text())
    assert result["mismatches"] == ["5"]


def test_eval_bad_label_exit_2(tmp_path, fixtures):
    bad = tmp_path / "expert.csv"
    bad.write_text("session,label\n1,maybe\n")
    assert run("eval", "--trend", fixtures / "expert" / "bryan_trend.csv", "--expert-labels", bad,
               "--out", tmp_path, "--quiet") == 2


def test_synth_zero_docs(tmp_path):
    assert run("synth", "--synth-docs", 0, "--out", tmp_path, "--quiet") == 0
    _, stream = load_corpus(tmp_path / "corpus.txt")
    assert stream.token_count == 0


def test_synth_deterministic_and_recovery(tmp_path):
    args = ["--synth-docs", 40, "--synth-doc-len", 100, "--T", 2, "--synth-vocab", 100,
            "--synth-shared", 10, "--sweeps", 60, "--burn-in", 20, "--quiet"]
    assert run("synth", "--out", tmp_path / "a", *args) == 0
    assert run("synth", "--out", tmp_path / "b", *args, "--synth-evaluate", "true") == 0
    assert (tmp_path / "a" / "corpus.txt").read_bytes() == (tmp_path / "b" / "corpus.txt").read_bytes()
    assert (tmp_path / "a" / "truth.json").read_bytes() == (tmp_path / "b" / "truth.json").read_bytes()
    rec = json.loads((tmp_path / "b" / "recovery.json").read_text())
    assert rec[0]["mean_matched_cosine"] > 0.5


def test_chains(tmp_path, client_dir):
    out = trained(tmp_path, client_dir, "out", "--chains", 2)
    summary = json.loads((out / "chains_summary.json").read_text())
    assert summary["seeds"] == [3, 4] and len(summary["epochs"]) == 5
    assert (out / "chain_1" / "posterior.json").exists()


def test_config_file_and_override(tmp_path, client_dir):
    cfg = tmp_path / "run.cfg"
    cfg.write_text(f"# settings\ncorpus_dir = {client_dir[0]}\nchunk_tokens = 3\nseed = 9\n")
    out = tmp_path / "o"
    assert run("ingest", "--config", cfg, "--out", out, "--chunk-tokens", 4, "--quiet") == 0
    effective = read_config(out / "config_ingest.txt")
    assert effective["chunk_tokens"] == 4 and effective["seed"] == 9
    # the recorded config reproduces the run
    assert run("ingest", "--config", out / "config_ingest.txt", "--out", tmp_path / "o2", "--quiet") == 0
    assert (out / "corpus.txt").read_bytes() == (tmp_path / "o2" / "corpus.txt").read_bytes()


def test_invalid_hyperparameter_exit_2(tmp_path, client_dir):
    assert run("ingest", "--corpus-dir", client_dir[0], "--out", tmp_path, "--quiet") == 0
    assert run("train", "--out", tmp_path, "--L", 1, "--quiet") == 2
