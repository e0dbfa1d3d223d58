"""Dynamic joint sentiment-topic modelling of ordered document streams.

Sessions of a case file are ingested as epochs, every token receives a joint
(sentiment, topic) assignment by collapsed Gibbs sampling, and word priors
evolve from the word distributions of recent epochs. The report layer turns
posteriors into per-session sentiment trends and topic word lists.
"""
from .corpus import (Document, Epoch, EpochStream, Vocabulary, build_vocabulary, ingest,
                     load_corpus, load_stopwords, read_client_dir, save_corpus, tokenize)
from .inference import DJST, Hyperparams, Posterior
from .lexicon import NEGATIVE, POSITIVE, Lexicon, build_lambda, load_lexicon

__version__ = "0.1.0"
