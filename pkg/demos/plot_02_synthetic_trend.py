"""
Tracking sentiment across a stream of sessions
==============================================

Nine synthetic sessions are drawn from planted sentiment-topic clusters.
The client is mostly negative for eight sessions and turns positive in the
last one. The model is fitted epoch by epoch, each epoch's word
distributions feeding the next epoch's prior.
"""

# %%
import numpy as np

from djst.inference import (DJST, Hyperparams, generate_synthetic, planted_block_phi,
                            recovery_metrics, synthetic_lexicon)
from djst.lexicon import build_lambda
from djst.report import top_words, trend_point

hyper = Hyperparams(L=2, T=3, S=3, sweeps=500, burn_in=125, seed=4)
phi = planted_block_phi(2, 3, 200, shared=20, head=5, head_mass=0.4)
conc = np.array([[0.2, 0.8]] * 8 + [[0.8, 0.2]]) * 50
vocab, stream, truth = generate_synthetic(phi, hyper, docs=30, doc_len=200, seed=104, epochs=9,
                                          pi_concentration=conc, theta_concentration=0.5)

# %%
# The lexicon holds the five most frequent words of each planted cluster.
lexicon = synthetic_lexicon(phi, vocab, per_cluster=5)
model = DJST(hyper, build_lambda(lexicon, vocab))
results = model.fit(stream)

# %%
# Token-weighted P(negative) per session, and the dominant label.
for r in results:
    tp = trend_point(r.label, r.posterior.pi, r.doc_lengths)
    bar = "#" * int(round(tp.p_by_label[1] * 40))
    print(f"session {tp.session_label}  {tp.dominant}  {tp.p_by_label[1]:.3f}  {bar}")

# %%
# How well the last epoch's clusters line up with the planted ones.
last = results[-1]
m = recovery_metrics(truth, last.posterior.phi, last.posterior.pi, epoch=last.epoch)
print(f"mean matched cosine {m['mean_matched_cosine']:.3f}")
print("negative topic 0:", [t for t, _ in top_words(last.posterior.phi[1, 0], vocab, k=8).top_words])
