from .hyper import Hyperparams
from .model import DJST, EpochResult, restore_sampler
from .priors import (PriorState, advance_epoch, compute_mu, evolve_beta, initial_priors,
                     seed_beta)
from .sampler import (GibbsSampler, Posterior, estimate_posterior, gibbs_sweep,
                      posterior_from_counts, sample_assignment)
from .synthetic import (SyntheticTruth, generate_synthetic, match_clusters, planted_block_phi,
                        recovery_metrics, sentiment_accuracy, synthetic_lexicon,
                        synthetic_vocabulary)

__all__ = [
    "Hyperparams", "DJST", "EpochResult", "restore_sampler",
    "PriorState", "advance_epoch", "compute_mu", "evolve_beta", "initial_priors", "seed_beta",
    "GibbsSampler", "Posterior", "estimate_posterior", "gibbs_sweep", "posterior_from_counts",
    "sample_assignment",
    "SyntheticTruth", "generate_synthetic", "match_clusters", "planted_block_phi",
    "recovery_metrics", "sentiment_accuracy", "synthetic_lexicon", "synthetic_vocabulary",
]
