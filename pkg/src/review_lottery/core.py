"""Domain types and the noisy score model shared by every other module.

Qualities live on [0, 1]. A review score for a paper of quality q is a
normal draw with mean q, truncated to the same [0, 1] interval, with a
standard deviation that shrinks as fewer papers survive to review:
sigma_eff = sigma * w_bar**beta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import ndtr, ndtri
from scipy.stats import beta as _beta_dist


class ParameterError(ValueError):
    """A scalar argument fell outside its documented domain."""


class ResolutionError(RuntimeError):
    """A quantity underflowed the resolution of the configured quadrature."""


SCORE_BOUNDS = (0.0, 1.0)


@dataclass(frozen=True)
class QualityDistribution:
    """Distribution of true paper qualities, supported exactly on [0, 1].

    Either the uniform distribution or a Beta(a, b_shape) law. Shapes below
    one make the density unbounded at the endpoints; quadrature accuracy is
    only guaranteed for bounded densities.
    """

    kind: str = "uniform"
    a: float = 1.0
    b_shape: float = 1.0

    def __post_init__(self):
        if self.kind not in ("uniform", "beta"):
            raise ParameterError(f"unknown quality distribution kind {self.kind!r}")
        if self.kind == "beta" and (self.a <= 0 or self.b_shape <= 0):
            raise ParameterError("beta shapes must be positive")

    @classmethod
    def uniform(cls) -> "QualityDistribution":
        return cls("uniform")

    @classmethod
    def beta(cls, a: float, b_shape: float) -> "QualityDistribution":
        return cls("beta", a, b_shape)

    def pdf(self, q):
        q = np.asarray(q, dtype=float)
        if self.kind == "uniform":
            out = np.where((q >= 0.0) & (q <= 1.0), 1.0, 0.0)
        else:
            out = _beta_dist.pdf(q, self.a, self.b_shape)
        return out if out.ndim else float(out)

    def cdf(self, q):
        q = np.asarray(q, dtype=float)
        if self.kind == "uniform":
            out = np.clip(q, 0.0, 1.0)
        else:
            out = _beta_dist.cdf(q, self.a, self.b_shape)
        return out if out.ndim else float(out)

    def quantile(self, u):
        u = np.asarray(u, dtype=float)
        if np.any((u < 0.0) | (u > 1.0)):
            raise ParameterError("quantile argument must lie in [0, 1]")
        if self.kind == "uniform":
            out = u
        else:
            out = _beta_dist.ppf(u, self.a, self.b_shape)
        return out if out.ndim else float(out)

    def label(self) -> str:
        if self.kind == "uniform":
            return "uniform"
        return f"beta:{self.a:g},{self.b_shape:g}"

    @classmethod
    def from_label(cls, label: str) -> "QualityDistribution":
        label = label.strip()
        if label == "uniform":
            return cls.uniform()
        if label.startswith("beta:"):
            parts = label[len("beta:"):].split(",")
            if len(parts) != 2:
                raise ParameterError(f"bad beta spec {label!r}, expected beta:a,b")
            return cls.beta(float(parts[0]), float(parts[1]))
        raise ParameterError(f"unknown quality distribution {label!r}")


@dataclass(frozen=True)
class ModelParams:
    """All scalar model parameters plus the quality distribution.

    sigma         baseline review noise (> 0)
    beta          noise elasticity (>= 0)
    alpha         accepted fraction of original submissions, in (0, 1)
    lottery_rate  probability L that a participating paper is rejected
                  before review, in [0, 1)
    n_scientists  population size N
    b, s, c       private benefit, epistemic weight, rejection cost
    k             journal review-cost exponent (> 0)
    """

    sigma: float = 0.3
    beta: float = 8.0
    alpha: float = 0.1
    lottery_rate: float = 0.1
    n_scientists: int = 100
    b: float = 1.0
    s: float = 2.0
    c: float = 0.1
    k: float = 2.0
    quality_dist: QualityDistribution = field(default_factory=QualityDistribution.uniform)

    def __post_init__(self):
        if not self.sigma > 0:
            raise ParameterError("sigma must be positive")
        if self.beta < 0:
            raise ParameterError("beta must be nonnegative")
        if not 0.0 < self.alpha < 1.0:
            raise ParameterError("alpha must lie in (0, 1)")
        if not 0.0 <= self.lottery_rate < 1.0:
            raise ParameterError("lottery_rate must lie in [0, 1)")
        if int(self.n_scientists) != self.n_scientists or self.n_scientists < 1:
            raise ParameterError("n_scientists must be a positive integer")
        if self.b < 0 or self.s < 0 or self.c < 0:
            raise ParameterError("b, s, c must be nonnegative")
        if not self.b + self.s > 0:
            raise ParameterError("b + s must be positive")
        if not self.k > 0:
            raise ParameterError("k must be positive")

    @property
    def r(self) -> float:
        """Private-epistemic ratio b / (b + s)."""
        return self.b / (self.b + self.s)

    @property
    def normalized_cost(self) -> float:
        return self.c / (self.b + self.s)


@dataclass(frozen=True)
class ThresholdStrategy:
    """Participation rule: enter the lottery iff q <= tau (ties participate)."""

    tau: float

    def __post_init__(self):
        if not 0.0 <= self.tau <= 1.0:
            raise ParameterError("tau must lie in [0, 1]")

    def participation(self, q):
        q = np.asarray(q, dtype=float)
        out = (q <= self.tau).astype(float)
        return out if out.ndim else float(out)


def effective_noise(sigma: float, w_bar: float, beta: float) -> float:
    """Power-law noise under load: sigma * w_bar**beta.

    w_bar = 1 leaves the baseline unchanged; w_bar = 0 gives zero noise
    (callers must treat that limit through the degenerate score model).
    """
    if not sigma > 0:
        raise ParameterError("sigma must be positive")
    if beta < 0:
        raise ParameterError("beta must be nonnegative")
    if not 0.0 <= w_bar <= 1.0:
        raise ParameterError("w_bar must lie in [0, 1]")
    return sigma * w_bar**beta


def survival_prob(p: float, lottery_rate: float) -> float:
    """Probability 1 - L*p of reaching review at participation level p."""
    if not 0.0 <= p <= 1.0:
        raise ParameterError("participation must lie in [0, 1]")
    if not 0.0 <= lottery_rate < 1.0:
        raise ParameterError("lottery_rate must lie in [0, 1)")
    return 1.0 - lottery_rate * p


def _tn_sf(t, q, sigma_eff):
    """P[S >= t] for S ~ Normal(q, sigma_eff) truncated to [0, 1], unvalidated.

    Broadcasts over t and q. sigma_eff must be a positive scalar.
    """
    t = np.asarray(t, dtype=float)
    q = np.asarray(q, dtype=float)
    hi = ndtr((1.0 - q) / sigma_eff)
    lo = ndtr((0.0 - q) / sigma_eff)
    at = ndtr((t - q) / sigma_eff)
    return np.clip((hi - at) / (hi - lo), 0.0, 1.0)


def score_survival(t, q, sigma_eff: float):
    """Probability that a review score exceeds t for a paper of quality q.

    sigma_eff = 0 is the documented degenerate limit: a step at q = t
    (score equals quality exactly).
    """
    t_arr = np.asarray(t, dtype=float)
    q_arr = np.asarray(q, dtype=float)
    if np.any((t_arr < 0.0) | (t_arr > 1.0)):
        raise ParameterError("cutoff t must lie in [0, 1]")
    if np.any((q_arr < 0.0) | (q_arr > 1.0)):
        raise ParameterError("quality q must lie in [0, 1]")
    if sigma_eff < 0:
        raise ParameterError("sigma_eff must be nonnegative")
    if sigma_eff == 0.0:
        out = (q_arr >= t_arr).astype(float)
    else:
        out = _tn_sf(t_arr, q_arr, sigma_eff)
    return out if out.ndim else float(out)


def _tn_ppf(u, q, sigma_eff):
    """Inverse CDF of the truncated score law; maps uniforms to scores.

    sigma_eff broadcasts against q and u; zero-noise entries return the
    quality itself.
    """
    q = np.asarray(q, dtype=float)
    u = np.asarray(u, dtype=float)
    sig = np.asarray(sigma_eff, dtype=float)
    if np.all(sig == 0.0):
        out = np.broadcast_to(q, np.broadcast_shapes(q.shape, u.shape)).copy()
        return out
    safe = np.where(sig > 0.0, sig, 1.0)
    lo = ndtr((0.0 - q) / safe)
    hi = ndtr((1.0 - q) / safe)
    # Clamp away from {0, 1}: a uniform draw of exactly 0.0 would push
    # ndtri to -inf when the lower tail underflows.
    p = np.clip(lo + u * (hi - lo), 1e-300, 1.0 - 1e-16)
    x = q + safe * ndtri(p)
    x = np.where(sig > 0.0, x, q)
    return np.clip(x, 0.0, 1.0)


def sample_score(q, sigma_eff: float, rng: np.random.Generator, size=None):
    """Draw review scores; deterministic given the generator state.

    With sigma_eff = 0 the draw is q itself (the generator is still
    advanced by one uniform so that seed layouts do not depend on noise).
    """
    q_arr = np.asarray(q, dtype=float)
    if np.any((q_arr < 0.0) | (q_arr > 1.0)):
        raise ParameterError("quality q must lie in [0, 1]")
    if sigma_eff < 0:
        raise ParameterError("sigma_eff must be nonnegative")
    u = rng.uniform(size=size if size is not None else q_arr.shape or None)
    out = _tn_ppf(u, q_arr, sigma_eff)
    return out if np.ndim(out) else float(out)


@dataclass(frozen=True)
class ScoreModel:
    """The review-score random variable for one paper: TN(mean, sd) on [0, 1]."""

    mean: float
    sd: float

    def __post_init__(self):
        if not 0.0 <= self.mean <= 1.0:
            raise ParameterError("mean quality must lie in [0, 1]")
        if self.sd < 0:
            raise ParameterError("sd must be nonnegative")

    bounds = SCORE_BOUNDS

    def survival(self, t):
        return score_survival(t, self.mean, self.sd)

    def sample(self, rng: np.random.Generator, size=None):
        return sample_score(self.mean, self.sd, rng, size=size)


def round_half_away(x: float) -> int:
    """Round to nearest integer, halves away from zero."""
    return int(math.floor(x + 0.5)) if x >= 0 else -int(math.floor(-x + 0.5))
