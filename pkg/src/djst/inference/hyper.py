from __future__ import annotations

import dataclasses
import re
from dataclasses import dataclass

from ..errors import ValidationError

_DECAY_RE = re.compile(r"^decay\(\s*([0-9.eE+-]+)\s*\)$")


@dataclass(frozen=True)
class Hyperparams:
    """Model and sampler settings.

    ``mu_scheme`` is ``"uniform"`` or ``"decay"`` (exponential recency decay
    with rate ``kappa``); the string form ``"decay(0.5)"`` is also accepted.
    ``alpha_init`` defaults to ``50 / (L * T)``.
    """

    L: int = 2
    T: int = 5
    S: int = 3
    gamma: float = 1.0
    alpha_init: float | None = None
    nu: float = 1.0
    beta_base: float = 0.01
    sweeps: int = 1000
    burn_in: int = 200
    seed: int = 0
    mu_scheme: str = "decay"
    kappa: float = 0.5
    sample_alpha: bool = False
    reapply_lambda: bool = False
    average_every: int = 0

    def __post_init__(self):
        m = _DECAY_RE.match(str(self.mu_scheme).strip())
        if m:
            object.__setattr__(self, "mu_scheme", "decay")
            object.__setattr__(self, "kappa", float(m.group(1)))
        if self.alpha_init is None and self.L > 0 and self.T > 0:
            object.__setattr__(self, "alpha_init", 50.0 / (self.L * self.T))
        self.validate()

    def validate(self):
        if self.L < 2:
            raise ValidationError("L must be at least 2")
        if self.T < 1 or self.S < 1:
            raise ValidationError("T and S must be at least 1")
        for name in ("gamma", "alpha_init", "nu", "beta_base"):
            if not (getattr(self, name) or 0) > 0:
                raise ValidationError(f"{name} must be positive")
        if self.sweeps < 1 or not 0 <= self.burn_in < self.sweeps:
            raise ValidationError("need sweeps >= 1 and 0 <= burn_in < sweeps")
        if self.mu_scheme not in ("uniform", "decay"):
            raise ValidationError(f"unknown mu_scheme {self.mu_scheme!r}")
        if self.kappa < 0:
            raise ValidationError("kappa must be non-negative")
        if self.average_every < 0:
            raise ValidationError("average_every must be non-negative")
        if self.seed < 0:
            raise ValidationError("seed must be non-negative")

    def replace(self, **changes) -> "Hyperparams":
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)
