"""
From session transcripts to word priors
=======================================

Client turns are tokenized, stopwords removed, and each session becomes
one epoch. A polarity lexicon then tilts the word prior of every
sentiment-topic cluster.
"""

# %%
# Three short sessions. Therapist turns start with "T:" and are dropped.
from djst.corpus import client_text, ingest, load_stopwords

raw = {
    "1": "T: How have you been?\nC: Honestly awful. I can't sleep and I'm tired all day.",
    "2": "T: And since then?\nC: Still anxious, but I walked every morning.",
    "3": "C: Better. I feel calmer and even a bit hopeful.",
}
sessions = [(label, client_text(text)) for label, text in raw.items()]
vocab, stream = ingest(sessions, load_stopwords(), chunk_tokens=1000)

for epoch in stream:
    print(epoch.label, [vocab.id_to_term[w] for d in epoch.documents for w in d.tokens])

# %%
# A lexicon marks words as positive or negative. Matched words keep 0.9
# of the base weight under their own label and 0.05 under the other one.
import numpy as np

from djst.inference import Hyperparams, seed_beta
from djst.lexicon import Lexicon, build_lambda

lexicon = Lexicon.from_words(positive=["better", "calmer", "hopeful"],
                             negative=["awful", "tired", "anxious"])
lam = build_lambda(lexicon, vocab)
beta = seed_beta(lam, Hyperparams(L=2, T=2))

for term in ("awful", "hopeful", "morning"):
    w = vocab.term_to_id[term]
    print(f"{term:8s} positive {beta[0, 0, w]:.4f}  negative {beta[1, 0, w]:.4f}")
