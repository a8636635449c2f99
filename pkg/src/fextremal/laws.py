"""Fréchet and f-implicit Fréchet laws.

Parameterization: ``Phi_alpha(sigma)`` has CDF ``exp(-sigma**alpha * x**-alpha)``
on ``x > 0``; ``sigma = 0`` is the point mass at zero.  Wherever scales are
combined (maxima, sandwich probabilities) they enter through the weights
``sigma**alpha``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .algebra import LossFunction, UsageError


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent, reproducible generator for ``(seed, key...)``.

    Uses ``SeedSequence`` spawn keys, so replication ``r`` of check ``c``
    gets the same stream no matter how the work is scheduled.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=tuple(key)))


@dataclass(frozen=True)
class FrechetLaw:
    alpha: float
    sigma: float = 1.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise UsageError("alpha must be positive")
        if not self.sigma >= 0:
            raise UsageError("sigma must be nonnegative")

    @property
    def weight(self) -> float:
        return self.sigma ** self.alpha

    def cdf(self, x):
        return frechet_cdf(self, x)

    def quantile(self, p):
        return frechet_quantile(self, p)

    def sample(self, rng: np.random.Generator, size=None):
        return frechet_sample(self, rng, size)


def frechet_cdf(law: FrechetLaw, x):
    x = np.asarray(x, dtype=float)
    if law.sigma == 0:
        out = (x >= 0).astype(float)
    else:
        with np.errstate(divide="ignore", over="ignore"):
            pos = np.where(x > 0, x, 1.0)
            out = np.where(x > 0, np.exp(-law.weight * pos ** (-law.alpha)), 0.0)
    return float(out) if out.ndim == 0 else out


def frechet_quantile(law: FrechetLaw, p):
    p = np.asarray(p, dtype=float)
    out = law.sigma * (-np.log(p)) ** (-1.0 / law.alpha)
    return float(out) if out.ndim == 0 else out


def frechet_from_uniform(law: FrechetLaw, u):
    """Inverse transform ``sigma * (-log U)**(-1/alpha)``."""
    if law.sigma == 0:
        return np.zeros_like(np.asarray(u, dtype=float))
    return law.sigma * (-np.log(u)) ** (-1.0 / law.alpha)


def frechet_sample(law: FrechetLaw, rng: np.random.Generator, size=None):
    u = rng.random(size)
    # rng.random is on [0, 1); U = 0 would give an infinite draw
    u = np.where(u == 0.0, np.finfo(float).tiny, u)
    out = frechet_from_uniform(law, u)
    return float(out) if np.ndim(out) == 0 else out


def max_scale(laws: Sequence[FrechetLaw]) -> FrechetLaw:
    """Law of the maximum of independent Fréchet variables with a common alpha."""
    laws = list(laws)
    if not laws:
        raise UsageError("need at least one law")
    alpha = laws[0].alpha
    if any(l.alpha != alpha for l in laws):
        raise UsageError("max_scale needs a common alpha")
    return FrechetLaw(alpha, sum(l.weight for l in laws) ** (1.0 / alpha))


def sandwich_probability(sigma1: float, sigma2: float, alpha: float,
                         gamma: float) -> float:
    """``P(Y1 <= Y2 <= (1 + gamma) Y1)`` for independent ``Yi ~ Phi_alpha(sigma_i)``.

    Closed form in the weights ``w_i = sigma_i**alpha``:
    ``w1 / (w1 + (1+gamma)**-alpha w2) - w1 / (w1 + w2)``.
    """
    if sigma1 <= 0 or sigma2 <= 0:
        raise UsageError("scales must be positive")
    if alpha <= 0 or gamma <= 0:
        raise UsageError("alpha and gamma must be positive")
    w1, w2 = sigma1 ** alpha, sigma2 ** alpha
    shrink = (1.0 + gamma) ** (-alpha)
    return w1 / (w1 + shrink * w2) - w1 / (w1 + w2)


def gap_bound(alpha: float, gamma: float) -> float:
    """Uniform bound ``1 - (1+gamma)**-alpha`` on the no-gap probability."""
    return 1.0 - (1.0 + gamma) ** (-alpha)


PROJECTION_BASES = ("gaussian", "uniform_cube", "positive_gaussian")


@dataclass(frozen=True, eq=False)
class AngularMeasure:
    """Probability law on the unit sphere ``S = {f = 1}``.

    Two variants: finitely many atoms (stored already projected onto ``S``)
    or the image of a base sampler under ``x -> x / f(x)``.
    """

    loss: LossFunction
    atoms: np.ndarray | None = field(default=None, repr=False)
    probs: np.ndarray | None = field(default=None, repr=False)
    base: str | None = None

    @property
    def is_discrete(self) -> bool:
        return self.atoms is not None

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        return self.sample_indexed(rng, size)[0]

    def sample_indexed(self, rng, size: int):
        """Return ``(thetas, atom_indices)``; indices are ``None`` for projections."""
        if self.is_discrete:
            idx = rng.choice(len(self.probs), size=size, p=self.probs)
            return self.atoms[idx], idx
        d = self.loss.dimension
        out = np.empty((size, d))
        filled = 0
        while filled < size:
            n = size - filled
            if self.base == "gaussian":
                x = rng.standard_normal((n, d))
            elif self.base == "positive_gaussian":
                x = np.abs(rng.standard_normal((n, d)))
            else:
                x = rng.uniform(-1.0, 1.0, (n, d))
            fx = self.loss(x)
            keep = fx >= 1e-12
            k = int(keep.sum())
            out[filled:filled + k] = x[keep] / fx[keep][:, None]
            filled += k
        return out, None

    def atom_index(self, thetas) -> np.ndarray:
        """Nearest-atom index of each direction (discrete variant only)."""
        if not self.is_discrete:
            raise UsageError("atom_index needs a discrete angular measure")
        t = np.atleast_2d(np.asarray(thetas, dtype=float))
        dist = np.linalg.norm(t[:, None, :] - self.atoms[None, :, :], axis=-1)
        return np.argmin(dist, axis=1)

    def spec(self) -> dict:
        if self.is_discrete:
            return {"kind": "discrete", "atoms": self.atoms.tolist(),
                    "probs": self.probs.tolist()}
        return {"kind": "projection", "base": self.base}


def discrete_kappa(loss: LossFunction, atoms, probs=None) -> AngularMeasure:
    """Atoms are projected onto ``{f = 1}``; probabilities default to uniform."""
    a = np.atleast_2d(np.asarray(atoms, dtype=float))
    if loss.dimension == 1 and a.shape[0] == 1 and a.shape[1] != 1:
        a = a.T
    if a.shape[1] != loss.dimension:
        raise UsageError("angular atoms must match the loss dimension")
    fa = loss(a)
    if np.any(fa <= 0):
        raise UsageError("angular atoms must be nonzero")
    p = np.full(len(a), 1.0 / len(a)) if probs is None else np.asarray(probs, float)
    if p.shape != (len(a),) or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-12:
        raise UsageError("angular probabilities must be nonnegative and sum to 1")
    return AngularMeasure(loss, a / fa[:, None], p / p.sum())


def point_kappa(loss: LossFunction, theta) -> AngularMeasure:
    return discrete_kappa(loss, [theta], [1.0])


def projection_kappa(loss: LossFunction, base: str = "gaussian") -> AngularMeasure:
    if base not in PROJECTION_BASES:
        raise UsageError(f"unknown projection base {base!r}")
    return AngularMeasure(loss, base=base)


def kappa_from_spec(loss: LossFunction, spec: dict) -> AngularMeasure:
    kind = spec.get("kind")
    if kind == "discrete":
        return discrete_kappa(loss, spec["atoms"], spec.get("probs"))
    if kind == "projection":
        return projection_kappa(loss, spec.get("base", "gaussian"))
    raise UsageError(f"unknown kappa kind {kind!r}")


@dataclass(frozen=True)
class ImplicitFrechetLaw:
    """Law of ``sigma * Z * Theta`` with ``Z ~ Phi_alpha`` independent of ``Theta ~ kappa``."""

    alpha: float
    sigma: float
    kappa: AngularMeasure

    @property
    def radial(self) -> FrechetLaw:
        return FrechetLaw(self.alpha, self.sigma)

    def sample(self, rng, size: int | None = None) -> np.ndarray:
        return implicit_sample(self, rng, size)


def implicit_sample(law: ImplicitFrechetLaw, rng: np.random.Generator,
                    size: int | None = None) -> np.ndarray:
    n = 1 if size is None else size
    z = frechet_sample(FrechetLaw(law.alpha, 1.0), rng, n)
    theta = law.kappa.sample(rng, n)
    y = (law.sigma * np.asarray(z))[:, None] * theta
    return y[0] if size is None else y
