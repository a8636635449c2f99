"""Realizations of an f-implicit alpha-Fréchet sup-measure ``M``.

Two backends:

* ``CellRealization``: independent values ``M(A_j) = m(A_j)^(1/alpha) Z_j Theta_j``
  on a fixed partition.
* ``SeriesRealization``: one transformed-Poisson atom list
  ``(s_k, u_k, Theta_k)`` on a region of finite measure ``mu`` with
  ``u_k = (Gamma_k / mu)^(-1/alpha)``.  Every integrand is evaluated against
  the same atoms, so ``M`` is coupled across all integrals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .algebra import LossFunction, UsageError, vf_max
from .laws import AngularMeasure, FrechetLaw, frechet_sample
from .measure import (Cell, Integrand, MeasureSpace, Partition, SimpleFunction,
                      TruncationError, indicator_function, represent)

MAX_ATOMS = 10_000_000
UNDERFLOW = 1e-300


@dataclass(frozen=True, eq=False)
class SupMeasureSpec:
    loss: LossFunction
    alpha: float
    kappa: AngularMeasure
    space: MeasureSpace

    def __post_init__(self):
        if self.kappa.loss is not self.loss and self.kappa.loss.spec() != self.loss.spec():
            raise UsageError("kappa must live on the sphere of the same loss")
        if not self.alpha > 0:
            raise UsageError("alpha must be positive")

    @property
    def dimension(self) -> int:
        return self.loss.dimension


@dataclass
class IntegralResult:
    """One realized extremal integral together with its diagnostics."""

    value: np.ndarray
    f_value: float
    attaining_atom: tuple[int, float, float] | None = None
    truncation_mismatch_prob: float = 0.0
    atoms_used: int = 0
    backend: str = "series"
    lalpha_gap: float | None = None
    atom_label: int | None = None

    def csv_row(self, replication: int) -> list:
        idx = self.attaining_atom[0] if self.attaining_atom else -1
        return [replication, *self.value.tolist(), self.f_value, idx,
                self.atoms_used, self.truncation_mismatch_prob]


def csv_header(d: int) -> list[str]:
    return ["replication", *[f"value_{i + 1}" for i in range(d)], "f_value",
            "atom_index", "atoms_used", "mismatch_prob"]


def zero_result(spec: SupMeasureSpec, backend: str, atoms_used: int = 0,
                mismatch: float = 0.0) -> IntegralResult:
    return IntegralResult(np.zeros(spec.dimension), 0.0, None, mismatch, atoms_used, backend)


# ------------------------------------------------------------------ cell backend


@dataclass(frozen=True, eq=False)
class CellRealization:
    partition: Partition
    values: np.ndarray = field(repr=False)
    spec: SupMeasureSpec = field(repr=False)
    seed: int | None = None
    labels: np.ndarray | None = field(default=None, repr=False)

    def value(self, cell: Cell) -> np.ndarray:
        """``M(A)`` for a union ``A`` of partition cells, via the implicit maximum."""
        picks = [j for j, c in enumerate(self.partition.cells) if c <= cell]
        if not picks or sum(1 for c in self.partition.cells
                            if not (c & cell).is_empty) != len(picks):
            raise UsageError("cell is not a union of partition cells")
        return vf_max(self.spec.loss, self.values[picks])[0]


def realize_cells(spec: SupMeasureSpec, partition: Partition, rng: np.random.Generator,
                  seed: int | None = None) -> CellRealization:
    k = len(partition)
    masses = np.array([spec.space.measure(c) for c in partition.cells])
    if np.any(~np.isfinite(masses)):
        raise UsageError("partition cells must have finite measure")
    z = np.asarray(frechet_sample(FrechetLaw(spec.alpha), rng, k))
    theta, labels = spec.kappa.sample_indexed(rng, k)
    values = (masses ** (1.0 / spec.alpha) * z)[:, None] * theta
    return CellRealization(partition, values, spec, seed, labels)


def integrate_cells(real: CellRealization, g: SimpleFunction) -> IntegralResult:
    """``v_f`` over partition cells of ``c_j M(A_j)``; ``g`` must be constant on each cell."""
    coeffs = np.asarray(represent(g, real.partition))
    if not np.any(coeffs > 0):
        return zero_result(real.spec, "cells")
    vals = coeffs[:, None] * real.values
    fv = real.spec.loss(vals)
    j = int(np.argmax(fv))
    label = None if real.labels is None else int(real.labels[j])
    return IntegralResult(vals[j], float(fv[j]), (j + 1, float("nan"), float(fv[j])),
                          0.0, len(coeffs), "cells", atom_label=label)


# ---------------------------------------------------------------- series backend


class SeriesRealization:
    """Lazily extended Poisson atom list on ``region``.

    Not safe for concurrent use: integrals may append atoms.
    """

    def __init__(self, spec: SupMeasureSpec, region: Cell, rng: np.random.Generator,
                 seed: int | None = None, block: int = 16):
        self.spec = spec
        self.region = region & spec.space.ground
        self.mu = spec.space.measure(self.region)
        if not (0 < self.mu < math.inf):
            raise UsageError(f"series region needs finite positive measure, got {self.mu}")
        self.rng = rng
        self.seed = seed
        self._block = block
        self._n = 0
        d = spec.dimension
        self._gamma = np.empty(0)
        self._s = np.empty(0)
        self._u = np.empty(0)
        self._theta = np.empty((0, d))
        self._label = np.empty(0, dtype=int)

    def __len__(self):
        return self._n

    @property
    def gammas(self) -> np.ndarray:
        return self._gamma[: self._n]

    @property
    def locations(self) -> np.ndarray:
        return self._s[: self._n]

    @property
    def magnitudes(self) -> np.ndarray:
        return self._u[: self._n]

    @property
    def thetas(self) -> np.ndarray:
        return self._theta[: self._n]

    def extend(self, count: int) -> None:
        """Append ``count`` atoms."""
        if self._n + count > MAX_ATOMS:
            raise TruncationError(
                f"more than {MAX_ATOMS} atoms needed: the integrand's norm on the "
                "region is (nearly) zero or its sup bound is wrong"
            )
        rng = self.rng
        last = self._gamma[self._n - 1] if self._n else 0.0
        gam = last + np.cumsum(rng.standard_exponential(count))
        s = self.spec.space.sample(self.region, rng, count)
        theta, label = self.spec.kappa.sample_indexed(rng, count)
        u = (gam / self.mu) ** (-1.0 / self.spec.alpha)
        self._gamma = np.concatenate([self._gamma[: self._n], gam])
        self._s = np.concatenate([self._s[: self._n], s])
        self._u = np.concatenate([self._u[: self._n], u])
        self._theta = np.concatenate([self._theta[: self._n], theta])
        lab = np.full(count, -1) if label is None else label
        self._label = np.concatenate([self._label[: self._n], lab])
        self._n += count

    def _ensure(self, n: int) -> None:
        if n > self._n:
            self.extend(max(n - self._n, self._block))
            self._block = min(2 * self._block, 1 << 16)

    def select(self, g: Integrand, sup_bound: float | None = None) -> tuple[int, float, int]:
        """Index (0-based) and score of the atom maximizing ``g(s_k) u_k``.

        Extends the atom list until ``u_{k+1} * sup_bound < max_{j<=k} g(s_j) u_j``;
        no later atom can then win, so the selection is exact.  Returns
        ``(index, score, atoms_used)``; index is -1 when ``g`` vanishes.
        """
        bound = g.bound if sup_bound is None else float(sup_bound)
        if bound <= 0:
            self._ensure(1)
            return -1, 0.0, 1
        best, best_k = 0.0, -1
        k = 0
        while True:
            self._ensure(k + 2)
            stop = self._n - 1
            scores = g(self._s[k:stop]) * self._u[k:stop]
            run = np.maximum.accumulate(np.maximum(scores, best))
            nxt = self._u[k + 1: stop + 1] * bound
            hit = np.flatnonzero((nxt < run) | ((run == 0) & (nxt < UNDERFLOW)))
            if hit.size:
                h = int(hit[0])
                block_scores = scores[: h + 1]
                j = int(np.argmax(block_scores))
                if block_scores[j] > best:
                    best, best_k = float(block_scores[j]), k + j
                return best_k, best, k + h + 2
            j = int(np.argmax(scores))
            if scores[j] > best:
                best, best_k = float(scores[j]), k + j
            k = stop
            if k + 2 > MAX_ATOMS:
                raise TruncationError("atom cap reached")

    def integral(self, g: Integrand, sup_bound: float | None = None,
                 mismatch: float = 0.0) -> IntegralResult:
        """``int^{v_f} g dM`` on this realization (``g`` restricted to the region)."""
        if isinstance(g, SimpleFunction) and _simple_is_null(g, self):
            self._ensure(1)
            return zero_result(self.spec, "series", 1, mismatch)
        k, score, used = self.select(g, sup_bound)
        if k < 0 or score == 0.0:
            return zero_result(self.spec, "series", used, mismatch)
        value = score * self._theta[k]
        return IntegralResult(value, float(self.spec.loss(value)),
                              (k + 1, float(self._s[k]), float(self._u[k])),
                              mismatch, used, "series", atom_label=int(self._label[k]))

    def measure(self, cell: Cell) -> np.ndarray:
        return self.integral(indicator_function(cell)).value

    def atoms_table(self) -> list[list]:
        """Rows ``k, s, u, theta_1..d`` of every generated atom."""
        return [[k + 1, float(self._s[k]), float(self._u[k]), *self._theta[k].tolist()]
                for k in range(self._n)]


def _simple_is_null(g: SimpleFunction, real: SeriesRealization) -> bool:
    m = real.spec.space
    return all(a == 0 or m.measure(c & real.region) == 0 for c, a in g.terms)


def series_realization(spec: SupMeasureSpec, region: Cell, rng, seed=None) -> SeriesRealization:
    return SeriesRealization(spec, region, rng, seed)


def series_integral(real: SeriesRealization, g: Integrand, sup_bound: float | None = None
                    ) -> IntegralResult:
    return real.integral(g, sup_bound)


def series_measure(real: SeriesRealization, cell: Cell) -> np.ndarray:
    return real.measure(cell)
