"""Flat ``key=value`` run configuration.

Lines starting with '#' and blank lines are ignored. Every key can also be
given as a command-line flag of the same name, which wins over the file.
"""
from __future__ import annotations

from pathlib import Path

from .errors import ValidationError
from .inference import Hyperparams


def _bool(text) -> bool:
    if isinstance(text, bool):
        return text
    value = str(text).strip().lower()
    if value in ("1", "true", "yes", "on"):
        return True
    if value in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _floats(text) -> tuple:
    if isinstance(text, (tuple, list)):
        return tuple(float(x) for x in text)
    return tuple(float(x) for x in str(text).split(",") if x.strip())


def _opt_float(text):
    return None if text in (None, "", "none", "None") else float(text)


# name -> (parser, default, help)
KEYS = {
    "corpus_dir": (str, None, "directory of session_<NN>.txt files"),
    "stopwords": (str, None, "stopword file (default: bundled English list)"),
    "positive_lexicon": (str, None, "positive word list"),
    "negative_lexicon": (str, None, "negative word list"),
    "out": (str, "out", "output directory"),
    "corpus": (str, None, "corpus snapshot (default: <out>/corpus.txt)"),
    "manifest": (str, None, "training manifest (default: <out>/manifest.txt)"),
    "trend": (str, None, "trend CSV to evaluate (default: <out>/trend.csv)"),
    "expert_labels": (str, None, "expert labels CSV: session,label"),
    "chunk_tokens": (int, 1000, "tokens per document chunk; 0 keeps sessions whole"),
    "L": (int, 2, "sentiment labels"),
    "T": (int, 5, "topics per sentiment label"),
    "S": (int, 3, "history window in epochs"),
    "gamma": (float, 1.0, "sentiment prior concentration"),
    "alpha_init": (_opt_float, None, "initial topic prior (default 50/(L*T))"),
    "nu": (float, 1.0, "gamma evolution rate for sampled alpha"),
    "beta_base": (float, 0.01, "symmetric word prior before lexicon scaling"),
    "sweeps": (int, 1000, "Gibbs sweeps per epoch"),
    "burn_in": (int, 200, "sweeps discarded before estimation"),
    "seed": (int, 0, "random seed"),
    "mu_scheme": (str, "decay", "uniform, decay or decay(<kappa>)"),
    "kappa": (float, 0.5, "decay rate of history weights"),
    "sample_alpha": (_bool, False, "draw alpha from its gamma evolution"),
    "reapply_lambda": (_bool, False, "multiply lexicon weights into evolved priors"),
    "average_every": (int, 0, "average estimates every n post-burn-in sweeps (0: final state)"),
    "k": (int, 20, "top words per cluster"),
    "tie": (str, "N", "label reported on exact ties: N or P"),
    "chains": (int, 1, "independent chains to run"),
    "synth_docs": (int, 200, "synthetic documents per epoch"),
    "synth_doc_len": (int, 200, "tokens per synthetic document"),
    "synth_vocab": (int, 200, "synthetic vocabulary size"),
    "synth_epochs": (int, 1, "synthetic epochs"),
    "synth_shared": (int, 20, "background words shared by all clusters"),
    "synth_head": (int, 5, "frequent head words per cluster"),
    "synth_head_mass": (float, 0.4, "probability mass of the head words"),
    "synth_lexicon_words": (int, 5, "lexicon words taken from each cluster"),
    "synth_pi": (_floats, (0.5,), "sentiment concentration, one value or L values"),
    "synth_pi_final": (_floats, (), "sentiment concentration for the last epoch"),
    "synth_theta": (float, 0.5, "topic concentration"),
    "synth_evaluate": (_bool, False, "train on the synthetic corpus and score recovery"),
}

HYPER_KEYS = ("L", "T", "S", "gamma", "alpha_init", "nu", "beta_base", "sweeps", "burn_in",
              "seed", "mu_scheme", "kappa", "sample_alpha", "reapply_lambda", "average_every")


def parse_value(key: str, raw):
    if key not in KEYS:
        raise ValidationError(f"unknown configuration key {key!r}")
    try:
        return KEYS[key][0](raw)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad value for {key}: {raw!r} ({exc})") from None


def read_config(path) -> dict:
    values = {}
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{n}: expected key=value")
        key, raw = (part.strip() for part in line.split("=", 1))
        values[key] = parse_value(key, raw)
    return values


class RunConfig(dict):
    """Effective settings: defaults, then file values, then flags."""

    @classmethod
    def build(cls, file_values: dict | None = None, overrides: dict | None = None) -> "RunConfig":
        cfg = cls({k: spec[1] for k, spec in KEYS.items()})
        cfg.update(file_values or {})
        cfg.update({k: v for k, v in (overrides or {}).items() if v is not None})
        cfg.hyper()  # re-check model invariants early
        if cfg["tie"] not in ("N", "P"):
            raise ValidationError("tie must be N or P")
        if cfg["chains"] < 1 or cfg["k"] < 0 or cfg["chunk_tokens"] < 0:
            raise ValidationError("chains must be >= 1, k and chunk_tokens >= 0")
        return cfg

    def hyper(self) -> Hyperparams:
        return Hyperparams(**{k: self[k] for k in HYPER_KEYS})

    def path(self, key: str, default_name: str | None = None) -> Path:
        value = self[key]
        if value is None:
            if default_name is None:
                raise ValidationError(f"configuration key {key} is required")
            return Path(self["out"]) / default_name
        return Path(value)

    def dumps(self) -> str:
        lines = []
        for key in KEYS:
            value = self[key]
            if value is None:
                continue
            if isinstance(value, tuple):
                value = ",".join(repr(x) for x in value)
            elif isinstance(value, float):
                value = repr(value)
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"
