"""Loss functions and the implicit maximum.

A loss function ``f`` is a continuous, 1-homogeneous map ``R^d -> [0, inf)``
vanishing only at the origin.  The implicit maximum ``x_1 v_f x_2`` returns
whichever argument has the larger loss, so the result is always one of the
inputs.  Ties go to the left argument.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

KINDS = ("euclidean", "l_infinity", "weighted_l1", "asymmetric_1d", "user")


class UsageError(ValueError):
    """Raised when an operation is called outside its domain."""


@dataclass(frozen=True, eq=False)
class LossFunction:
    """A fixed loss ``f`` on ``R^d``.

    ``func`` maps an array of shape ``(..., d)`` to an array of shape ``(...)``.
    ``sphere_constant`` is ``C = max{||x|| : f(x) = 1}`` or an upper bound of it.
    """

    dimension: int
    func: Callable[[np.ndarray], np.ndarray] = field(repr=False)
    sphere_constant: float
    kind: str = "user"
    params: tuple = ()

    def __post_init__(self):
        if self.dimension < 1:
            raise UsageError("dimension must be a positive integer")
        if self.kind not in KINDS:
            raise UsageError(f"unknown loss kind {self.kind!r}")

    def __call__(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        if x.shape[-1:] != (self.dimension,):
            raise UsageError(
                f"expected points of dimension {self.dimension}, got shape {x.shape}"
            )
        out = self.func(x)
        return float(out) if np.ndim(out) == 0 else out

    def spec(self) -> dict:
        """JSON-friendly description (inverse of :func:`loss_from_spec`)."""
        if self.kind == "euclidean" or self.kind == "l_infinity":
            return {"kind": self.kind, "dimension": self.dimension}
        if self.kind == "weighted_l1":
            return {"kind": self.kind, "weights": list(self.params)}
        if self.kind == "asymmetric_1d":
            return {"kind": self.kind, "positive": self.params[0], "negative": self.params[1]}
        raise UsageError("user losses have no serializable form")


def euclidean(dimension: int = 1) -> LossFunction:
    return LossFunction(
        dimension, lambda x: np.sqrt(np.sum(x * x, axis=-1)), 1.0, "euclidean"
    )


def abs_loss() -> LossFunction:
    """``f = |.|`` on the real line, the classical case."""
    return euclidean(1)


def l_infinity(dimension: int) -> LossFunction:
    return LossFunction(
        dimension,
        lambda x: np.max(np.abs(x), axis=-1),
        float(np.sqrt(dimension)),
        "l_infinity",
    )


def weighted_l1(weights: Sequence[float]) -> LossFunction:
    w = np.asarray(weights, dtype=float)
    if w.ndim != 1 or w.size == 0 or np.any(w <= 0):
        raise UsageError("weighted_l1 needs a nonempty list of positive weights")
    return LossFunction(
        w.size,
        lambda x: np.sum(np.abs(x) * w, axis=-1),
        float(np.max(1.0 / w)),
        "weighted_l1",
        tuple(float(v) for v in w),
    )


def asymmetric_1d(positive: float = 1.0, negative: float = 1.0) -> LossFunction:
    """``f(x) = positive * x`` for ``x >= 0`` and ``negative * |x|`` otherwise."""
    if positive <= 0 or negative <= 0:
        raise UsageError("asymmetric_1d slopes must be positive")

    def func(x):
        x = x[..., 0]
        return np.where(x >= 0, positive * x, -negative * x)

    return LossFunction(
        1, func, max(1.0 / positive, 1.0 / negative), "asymmetric_1d",
        (float(positive), float(negative)),
    )


def user_loss(func, dimension: int, n_search: int = 20000, seed: int = 0,
              inflation: float = 1.05) -> LossFunction:
    """Wrap an arbitrary loss and estimate its sphere constant.

    The estimate is a random search of ``||x|| / f(x)`` over Gaussian
    directions, inflated by 5%; only an upper bound is needed downstream.
    """
    rng = np.random.default_rng(seed)
    x = rng.standard_normal((n_search, dimension))
    fx = np.asarray(func(x), dtype=float)
    ok = fx > 0
    ratio = np.linalg.norm(x[ok], axis=-1) / fx[ok]
    return LossFunction(dimension, func, float(inflation * ratio.max()), "user")


def loss_from_spec(spec: dict) -> LossFunction:
    kind = spec.get("kind")
    if kind == "euclidean":
        return euclidean(int(spec.get("dimension", 1)))
    if kind == "l_infinity":
        return l_infinity(int(spec["dimension"]))
    if kind == "weighted_l1":
        return weighted_l1(spec["weights"])
    if kind == "asymmetric_1d":
        return asymmetric_1d(spec.get("positive", 1.0), spec.get("negative", 1.0))
    raise UsageError(f"unknown loss kind {kind!r}")


def _as_points(f: LossFunction, xs) -> np.ndarray:
    pts = np.asarray(xs, dtype=float)
    if pts.ndim == 1 and f.dimension == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise UsageError("need a nonempty list of points")
    if pts.shape[1] != f.dimension:
        raise UsageError(
            f"points have dimension {pts.shape[1]}, loss expects {f.dimension}"
        )
    return pts


def vf_max(f: LossFunction, xs) -> tuple[np.ndarray, int]:
    """Implicit maximum of a list of points.

    Returns the selected point and its 1-based index.  ``np.argmax`` picks the
    first maximizer, which is exactly the left-associative fold with ties
    going to the left argument.
    """
    pts = _as_points(f, xs)
    j = int(np.argmax(f(pts)))
    return pts[j].copy(), j + 1


def vf_fold(f: LossFunction, xs) -> tuple[np.ndarray, int]:
    """Literal left fold ``(x_1 v_f x_2) v_f ... v_f x_k``; reference for :func:`vf_max`."""
    pts = _as_points(f, xs)
    best, best_j = pts[0], 0
    for j in range(1, len(pts)):
        if f(pts[j]) > f(best):
            best, best_j = pts[j], j
    return best.copy(), best_j + 1


def vf_second(f: LossFunction, xs) -> np.ndarray:
    """Implicit second maximum: drop the selected element, take ``v_f`` again."""
    pts = _as_points(f, xs)
    if len(pts) < 2:
        raise UsageError("vf_second needs at least two points")
    _, j = vf_max(f, pts)
    rest = np.delete(pts, j - 1, axis=0)
    return vf_max(f, rest)[0]


def leq_f(f: LossFunction, x, y) -> bool:
    """``x <=_f y`` iff ``f(x) < f(y)`` or ``x == y`` bit for bit."""
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    if x.shape != y.shape or x.size != f.dimension:
        raise UsageError("leq_f arguments must share the loss dimension")
    return bool(f(x) < f(y) or np.array_equal(x, y))


def perturbation_bound(f: LossFunction, alphas, betas, xs, delta: float
                       ) -> tuple[bool, float]:
    """Stability of the implicit maximum under coefficient perturbation.

    If ``v_f alpha_j x_j`` beats the runner-up by a factor ``1 + delta`` and
    ``rho = max|alpha_j - beta_j| < gamma (sqrt(1 + delta) - 1)`` with
    ``gamma = min(alpha, beta)``, then the two implicit maxima differ by at most
    ``C rho max_j f(x_j)`` in Euclidean norm.  Returns ``(applicable, bound)``;
    the gap condition is re-checked here.
    """
    a = np.asarray(alphas, dtype=float)
    b = np.asarray(betas, dtype=float)
    pts = _as_points(f, xs)
    if not (a.shape == b.shape == (len(pts),)):
        raise UsageError("alphas, betas and xs must have equal lengths")
    if np.any(a <= 0) or np.any(b <= 0):
        raise UsageError("coefficients must be strictly positive")
    if delta <= 0:
        raise UsageError("delta must be positive")
    scaled = a[:, None] * pts
    gap_ok = True
    if len(pts) >= 2:
        top = f(vf_max(f, scaled)[0])
        second = f(vf_second(f, scaled))
        gap_ok = top >= (1 + delta) * second
    gamma = min(a.min(), b.min())
    rho = float(np.max(np.abs(a - b)))
    applicable = bool(gap_ok and rho < gamma * (np.sqrt(1 + delta) - 1))
    bound = f.sphere_constant * rho * float(np.max(f(pts)))
    return applicable, bound
