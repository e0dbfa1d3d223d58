"""Command-line pipeline: ingest, train, report, eval, synth.

Exit codes: 0 success, 2 validation or usage error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from .config import KEYS, RunConfig, parse_value, read_config
from .errors import DJSTError
from .inference import DJST, generate_synthetic, planted_block_phi, recovery_metrics, synthetic_lexicon
from .lexicon import LABEL_NAMES, Lexicon, build_lambda, load_lexicon
from .report import (NO_DATA, compare_to_expert, emit_topics_json, emit_trend_csv,
                     read_expert_csv, read_trend_csv, topic_summaries, trend_point)

logger = logging.getLogger("djst")

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 2, 3
POSTERIOR_FORMAT = "djst-posterior"


def _dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=1) + "\n", encoding="utf-8")


def _prepare_out(cfg, command: str) -> Path:
    out = Path(cfg["out"])
    out.mkdir(parents=True, exist_ok=True)
    (out / f"config_{command}.txt").write_text(cfg.dumps(), encoding="utf-8")
    return out


def _require_file(path) -> Path:
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"no such file or directory: {path}")
    return path


# ingest

def cmd_ingest(cfg: RunConfig) -> int:
    if cfg["corpus_dir"] is None:
        raise DJSTError("corpus_dir is required")
    sessions = corpus_mod.read_client_dir(_require_file(cfg["corpus_dir"]))
    stop_path = cfg["stopwords"]
    stopwords = corpus_mod.load_stopwords(_require_file(stop_path) if stop_path else None)
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        vocab, stream = corpus_mod.ingest(sessions, stopwords, cfg["chunk_tokens"])
    for w in caught:
        logger.warning("%s", w.message)
    out = _prepare_out(cfg, "ingest")
    dest = cfg.path("corpus", "corpus.txt")
    corpus_mod.save_corpus(dest, vocab, stream)
    logger.info("ingested %d sessions, %d tokens, vocabulary %d -> %s",
                len(stream), stream.token_count, vocab.size, dest)
    return EXIT_OK


# train

def _lexicon(cfg) -> Lexicon:
    pos, neg = cfg["positive_lexicon"], cfg["negative_lexicon"]
    if pos is None and neg is None:
        logger.warning("no lexicon given; sentiment labels are not anchored")
        return Lexicon({})
    if pos is None or neg is None:
        raise DJSTError("give both positive_lexicon and negative_lexicon")
    return load_lexicon(_require_file(pos), _require_file(neg))


def posterior_dump(model: DJST, corpus_path) -> dict:
    epochs = []
    for r in model.results:
        entry = {"epoch": r.epoch, "session": r.label, "doc_ids": r.doc_ids,
                 "doc_lengths": r.doc_lengths.tolist(), "no_data": not r.has_data}
        if r.has_data:
            entry.update(pi=r.posterior.pi.tolist(), theta=r.posterior.theta.tolist(),
                         phi=r.posterior.phi.tolist())
        epochs.append(entry)
    return {"format": POSTERIOR_FORMAT, "version": 1, "corpus": str(corpus_path),
            "labels": list(LABEL_NAMES[:model.hyper.L]), "hyper": model.hyper.as_dict(),
            "epochs": epochs}


def _train_chain(cfg, hyper, lam, stream, out: Path, corpus_path) -> DJST:
    out.mkdir(parents=True, exist_ok=True)
    snapshots = []

    def save(model, res):
        name = f"model_epoch_{res.epoch:03d}.json"
        model.save(out / name)
        snapshots.append(f"snapshot {res.epoch} {res.label} {name}")

    model = DJST(hyper, lam)
    model.fit(stream, callback=save)
    _dump_json(posterior_dump(model, corpus_path), out / "posterior.json")
    manifest = [f"corpus {Path(corpus_path).resolve()}", "posterior posterior.json"] + snapshots
    (out / "manifest.txt").write_text("\n".join(manifest) + "\n", encoding="utf-8")
    return model


def _epoch_p_negative(model: DJST) -> list:
    vals = []
    for r in model.results:
        tp = trend_point(r.label, r.posterior.pi, r.doc_lengths) if r.has_data else None
        vals.append(None if tp is None or tp.p_by_label is None else tp.p_by_label[1])
    return vals


def cmd_train(cfg: RunConfig) -> int:
    hyper = cfg.hyper()
    corpus_path = _require_file(cfg.path("corpus", "corpus.txt"))
    vocab, stream = corpus_mod.load_corpus(corpus_path)
    lam = build_lambda(_lexicon(cfg), vocab, hyper.L)
    out = _prepare_out(cfg, "train")
    logger.info("training %d epochs, %d clusters per epoch", len(stream), hyper.L * hyper.T)

    n = cfg["chains"]
    if n == 1:
        _train_chain(cfg, hyper, lam, stream, out, corpus_path)
        return EXIT_OK

    dirs = [out] + [out / f"chain_{i}" for i in range(1, n)]
    hypers = [hyper.replace(seed=hyper.seed + i) for i in range(n)]
    with ThreadPoolExecutor(max_workers=n) as pool:
        models = list(pool.map(lambda i: _train_chain(cfg, hypers[i], lam, stream, dirs[i], corpus_path),
                               range(n)))
    per_chain = [_epoch_p_negative(m) for m in models]
    summary = []
    for t, label in enumerate(stream.labels):
        vals = [c[t] for c in per_chain if c[t] is not None]
        summary.append({"session": label, "p_negative": [c[t] for c in per_chain],
                        "mean": float(np.mean(vals)) if vals else None,
                        "sd": float(np.std(vals, ddof=1)) if len(vals) > 1 else None})
    _dump_json({"chains": n, "seeds": [h.seed for h in hypers], "epochs": summary},
               out / "chains_summary.json")
    return EXIT_OK


# report

def read_manifest(path) -> dict:
    manifest = {"snapshots": []}
    base = Path(path).parent
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        parts = line.split(" ")
        if parts[0] == "corpus":
            manifest["corpus"] = Path(" ".join(parts[1:]))
        elif parts[0] == "posterior":
            manifest["posterior"] = base / parts[1]
        elif parts[0] == "snapshot":
            manifest["snapshots"].append((int(parts[1]), parts[2], base / parts[3]))
    return manifest


def cmd_report(cfg: RunConfig) -> int:
    manifest = read_manifest(_require_file(cfg.path("manifest", "manifest.txt")))
    dump = json.loads(_require_file(manifest["posterior"]).read_text(encoding="utf-8"))
    vocab, _ = corpus_mod.load_corpus(_require_file(manifest["corpus"]))
    tie = 1 if cfg["tie"] == "N" else 0
    trend, topics = [], []
    for ep in dump["epochs"]:
        if ep["no_data"]:
            trend.append(trend_point(ep["session"], np.zeros((0, 2)), []))
            continue
        trend.append(trend_point(ep["session"], np.array(ep["pi"]), ep["doc_lengths"], tie))
        for summary in topic_summaries(np.array(ep["phi"]), vocab, cfg["k"]):
            topics.append({"epoch": ep["epoch"], "session": ep["session"], **summary.to_json()})
    out = _prepare_out(cfg, "report")
    emit_trend_csv(trend, out / "trend.csv")
    emit_topics_json(topics, out / "topics.json")
    logger.info("trend: %s", " ".join(tp.dominant if tp.dominant != NO_DATA else "-" for tp in trend))
    return EXIT_OK


# eval

def cmd_eval(cfg: RunConfig) -> int:
    trend = read_trend_csv(_require_file(cfg.path("trend", "trend.csv")))
    if cfg["expert_labels"] is None:
        raise DJSTError("expert_labels is required")
    expert = read_expert_csv(_require_file(cfg["expert_labels"]))
    model = {tp.session_label: tp.dominant for tp in trend}
    result = compare_to_expert(model, expert)
    out = _prepare_out(cfg, "eval")
    _dump_json({"accuracy": result.accuracy, "compared": result.compared,
                "mismatches": result.mismatches,
                "per_session": [{"session": s, "model": m, "expert": e, "match": ok}
                                for s, m, e, ok in result.per_session]},
               out / "eval.json")
    print(f"accuracy {result.accuracy:.6f} ({result.compared} sessions compared"
          + (f"; mismatched: {', '.join(result.mismatches)})" if result.mismatches else ")"))
    return EXIT_OK


# synth

def synth_setup(cfg: RunConfig):
    """Planted word distributions and per-epoch sentiment concentrations."""
    hyper = cfg.hyper()
    phi = planted_block_phi(hyper.L, hyper.T, cfg["synth_vocab"], shared=cfg["synth_shared"],
                            head=cfg["synth_head"], head_mass=cfg["synth_head_mass"])
    epochs = cfg["synth_epochs"]
    conc = np.broadcast_to(np.array(cfg["synth_pi"], dtype=float), (epochs, hyper.L)).copy()
    if cfg["synth_pi_final"]:
        conc[-1] = np.broadcast_to(np.array(cfg["synth_pi_final"], dtype=float), (hyper.L,))
    return hyper, phi, conc


def cmd_synth(cfg: RunConfig) -> int:
    hyper, phi, conc = synth_setup(cfg)
    vocab, stream, truth = generate_synthetic(phi, hyper, cfg["synth_docs"], cfg["synth_doc_len"],
                                              seed=hyper.seed, epochs=cfg["synth_epochs"],
                                              pi_concentration=conc,
                                              theta_concentration=cfg["synth_theta"])
    lexicon = synthetic_lexicon(phi, vocab, cfg["synth_lexicon_words"])
    out = _prepare_out(cfg, "synth")
    corpus_mod.save_corpus(cfg.path("corpus", "corpus.txt"), vocab, stream)
    for label, name in enumerate(("positive.txt", "negative.txt")):
        words = sorted(w for w, l in lexicon.polarity.items() if l == label)
        (out / name).write_text("".join(w + "\n" for w in words), encoding="utf-8")
    _dump_json({"phi": phi.tolist(), "pi": [p.tolist() for p in truth.pi],
                "labels": [[l.tolist() for l in ep] for ep in truth.labels],
                "topics": [[z.tolist() for z in ep] for ep in truth.topics]},
               out / "truth.json")
    logger.info("synthetic corpus: %d epochs x %d docs x %d tokens", cfg["synth_epochs"],
                cfg["synth_docs"], cfg["synth_doc_len"])

    if cfg["synth_evaluate"] and stream.token_count:
        model = DJST(hyper, build_lambda(lexicon, vocab, hyper.L))
        model.fit(stream)
        metrics = []
        for r in model.results:
            m = recovery_metrics(truth, r.posterior.phi, r.posterior.pi, r.epoch)
            m["matching"] = {str(k): v for k, v in m["matching"].items()}
            m["session"] = r.label
            metrics.append(m)
            logger.info("epoch %s: mean matched cosine %.4f, sentiment accuracy %.4f (%d docs)",
                        r.label, m["mean_matched_cosine"], m["sentiment_accuracy"], m["documents_scored"])
        _dump_json(metrics, out / "recovery.json")
    return EXIT_OK


COMMANDS = {"ingest": cmd_ingest, "train": cmd_train, "report": cmd_report,
            "eval": cmd_eval, "synth": cmd_synth}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value configuration file")
    common.add_argument("--quiet", action="store_true", help="suppress progress messages")
    for key, (_, default, text) in KEYS.items():
        flags = [f"--{key}"]
        if "_" in key:
            flags.append(f"--{key.replace('_', '-')}")
        common.add_argument(*flags, dest=key, default=None, metavar=key.upper() if key != "seed" else "U64",
                            help=f"{text} [default: {default}]")
    parser = argparse.ArgumentParser(prog="djst", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, fn in COMMANDS.items():
        sub.add_parser(name, parents=[common], help=fn.__name__.replace("cmd_", ""))
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO,
                        format="%(levelname)s %(message)s", stream=sys.stderr, force=True)
    try:
        file_values = read_config(_require_file(args.config)) if args.config else {}
        overrides = {}
        for key in KEYS:
            raw = getattr(args, key)
            if raw is not None:
                overrides[key] = parse_value(key, raw)
        cfg = RunConfig.build(file_values, overrides)
        return COMMANDS[args.command](cfg)
    except (DJSTError, ValueError) as exc:
        logger.error("%s", exc)
        return EXIT_INVALID
    except OSError as exc:
        logger.error("%s", exc)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
