"""Control measures, cells, simple functions and kernels on the real line.

Cells are finite unions of half-open intervals ``[lo, hi)``; endpoints may be
infinite.  All set operations on cells are exact, which keeps partition
refinement free of geometric tolerances.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .algebra import UsageError

INF = math.inf


class IntegrabilityError(ArithmeticError):
    """The integrand has no finite L^alpha norm (or quadrature cannot show one)."""


class TruncationError(RuntimeError):
    """A requested truncation level cannot be reached."""


# --------------------------------------------------------------------------- cells


def _normalize(intervals: Iterable[tuple[float, float]]) -> tuple[tuple[float, float], ...]:
    ivs = sorted((float(lo), float(hi)) for lo, hi in intervals if hi > lo)
    out: list[list[float]] = []
    for lo, hi in ivs:
        if out and lo <= out[-1][1]:
            out[-1][1] = max(out[-1][1], hi)
        else:
            out.append([lo, hi])
    return tuple((lo, hi) for lo, hi in out)


@dataclass(frozen=True)
class Cell:
    """Finite union of disjoint half-open intervals, stored sorted and merged."""

    intervals: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "intervals", _normalize(self.intervals))

    @classmethod
    def interval(cls, lo: float, hi: float) -> "Cell":
        return cls(((lo, hi),))

    @property
    def is_empty(self) -> bool:
        return not self.intervals

    @property
    def bounded(self) -> bool:
        return all(math.isfinite(lo) and math.isfinite(hi) for lo, hi in self.intervals)

    @property
    def lower(self) -> float:
        return self.intervals[0][0] if self.intervals else INF

    @property
    def upper(self) -> float:
        return self.intervals[-1][1] if self.intervals else -INF

    def __and__(self, other: "Cell") -> "Cell":
        out = []
        i = j = 0
        a, b = self.intervals, other.intervals
        while i < len(a) and j < len(b):
            lo, hi = max(a[i][0], b[j][0]), min(a[i][1], b[j][1])
            if hi > lo:
                out.append((lo, hi))
            if a[i][1] < b[j][1]:
                i += 1
            else:
                j += 1
        return Cell(tuple(out))

    def __or__(self, other: "Cell") -> "Cell":
        return Cell(self.intervals + other.intervals)

    def __sub__(self, other: "Cell") -> "Cell":
        out = []
        for lo, hi in self.intervals:
            cur = lo
            for olo, ohi in other.intervals:
                if ohi <= cur or olo >= hi:
                    continue
                if olo > cur:
                    out.append((cur, olo))
                cur = max(cur, ohi)
                if cur >= hi:
                    break
            if cur < hi:
                out.append((cur, hi))
        return Cell(tuple(out))

    def __le__(self, other: "Cell") -> bool:
        return (self - other).is_empty

    def contains(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape, dtype=bool)
        for lo, hi in self.intervals:
            out |= (s >= lo) & (s < hi)
        return out

    def shift(self, c: float) -> "Cell":
        return Cell(tuple((lo + c, hi + c) for lo, hi in self.intervals))

    def length(self) -> float:
        return sum(hi - lo for lo, hi in self.intervals)

    def to_json(self) -> list:
        return [[_num(lo), _num(hi)] for lo, hi in self.intervals]


def _num(x: float):
    return None if math.isinf(x) else x


def cell_from_json(data) -> Cell:
    """``[[lo, hi], ...]`` with ``null`` for an infinite endpoint."""
    if not isinstance(data, list) or not all(isinstance(p, list) and len(p) == 2 for p in data):
        raise UsageError("a cell must be a list of [lo, hi] pairs")
    ivs = []
    for lo, hi in data:
        lo = -INF if lo is None else float(lo)
        hi = INF if hi is None else float(hi)
        if not hi > lo:
            raise UsageError(f"empty interval [{lo}, {hi})")
        ivs.append((lo, hi))
    return Cell(tuple(ivs))


def interval(lo: float, hi: float) -> Cell:
    return Cell.interval(lo, hi)


def _disjoint(cells: Iterable[Cell]) -> bool:
    """Whether the cells are pairwise disjoint (sort-and-sweep over their intervals)."""
    ivs = sorted(iv for c in cells for iv in c.intervals)
    return all(a[1] <= b[0] for a, b in zip(ivs, ivs[1:]))


def union_all(cells: Iterable[Cell]) -> Cell:
    ivs: list = []
    for c in cells:
        ivs.extend(c.intervals)
    return Cell(tuple(ivs))


# --------------------------------------------------------------------- quadrature

_GL_ORDER = 20
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(_GL_ORDER)


def _composite_gl(func, lo: float, hi: float, panels: int) -> float:
    edges = np.linspace(lo, hi, panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = mid[:, None] + half[:, None] * _GL_NODES[None, :]
    vals = np.asarray(func(x.ravel()), dtype=float).reshape(x.shape)
    return float(np.sum(half[:, None] * _GL_WEIGHTS[None, :] * vals))


def gauss_legendre(func: Callable, lo: float, hi: float, rtol: float = 1e-8,
                   atol: float = 1e-14, max_doublings: int = 16) -> float:
    """Adaptive composite Gauss-Legendre integral of ``func`` over ``[lo, hi)``.

    Panels double until two successive estimates agree.  An infinite upper
    (or lower) endpoint is mapped to a finite one by ``s = lo + t / (1 - t)``.
    Raises :class:`IntegrabilityError` when the estimates never settle, which
    is how divergent tails show up.
    """
    if hi <= lo:
        return 0.0
    if math.isinf(lo) and math.isinf(hi):
        return (gauss_legendre(func, -INF, 0.0, rtol, atol, max_doublings)
                + gauss_legendre(func, 0.0, INF, rtol, atol, max_doublings))
    if math.isinf(hi):
        def mapped(t):
            one_minus = 1.0 - t
            return func(lo + t / one_minus) / one_minus ** 2
        return gauss_legendre(mapped, 0.0, 1.0, rtol, atol, max_doublings)
    if math.isinf(lo):
        return gauss_legendre(lambda s: func(-s), -hi, INF, rtol, atol, max_doublings)

    prev = _composite_gl(func, lo, hi, 1)
    for k in range(1, max_doublings + 1):
        cur = _composite_gl(func, lo, hi, 2 ** k)
        if not math.isfinite(cur):
            raise IntegrabilityError("integrand is not finite on the domain")
        if abs(cur - prev) <= rtol * abs(cur) + atol:
            return cur
        prev = cur
    raise IntegrabilityError(
        f"quadrature on [{lo}, {hi}) did not converge (last estimate {prev:.6g})"
    )


# -------------------------------------------------------------------- densities


@dataclass(frozen=True, eq=False)
class Density:
    """Density of the control measure with respect to Lebesgue measure."""

    kind: str = "lebesgue"
    rate: float = 1.0
    pdf: Callable | None = field(default=None, repr=False)

    def spec(self) -> dict:
        if self.kind == "exponential":
            return {"kind": "exponential", "rate": self.rate}
        if self.kind == "lebesgue":
            return {"kind": "lebesgue"}
        raise UsageError("user densities have no serializable form")

    def mass(self, lo: float, hi: float) -> float:
        if self.kind == "lebesgue":
            return hi - lo
        if self.kind == "exponential":
            lo, hi = max(lo, 0.0), max(hi, 0.0)
            return math.exp(-self.rate * lo) - math.exp(-self.rate * hi)
        return gauss_legendre(self.pdf, lo, hi)

    def weight(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        if self.kind == "lebesgue":
            return np.ones_like(s)
        if self.kind == "exponential":
            return np.where(s >= 0, self.rate * np.exp(-self.rate * np.maximum(s, 0)), 0.0)
        return np.asarray(self.pdf(s), dtype=float)

    def sample(self, rng, lo: float, hi: float, size: int) -> np.ndarray:
        """Draw from the normalized density restricted to ``[lo, hi)``."""
        u = rng.random(size)
        if self.kind == "lebesgue":
            return lo + u * (hi - lo)
        if self.kind == "exponential":
            lo, hi = max(lo, 0.0), max(hi, 0.0)
            a, b = math.exp(-self.rate * lo), math.exp(-self.rate * hi)
            return -np.log(a - u * (a - b)) / self.rate
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise UsageError("user densities can only be sampled on bounded cells")
        grid = np.linspace(lo, hi, 4097)
        w = np.maximum(self.weight(grid), 0.0)
        cum = np.concatenate([[0.0], np.cumsum(0.5 * (w[1:] + w[:-1]) * np.diff(grid))])
        return np.interp(u * cum[-1], cum, grid)


LEBESGUE = Density()


def density_from_spec(spec: dict | None) -> Density:
    if spec is None or spec.get("kind", "lebesgue") == "lebesgue":
        return LEBESGUE
    if spec["kind"] == "exponential":
        rate = float(spec.get("rate", 1.0))
        if rate <= 0:
            raise UsageError("exponential density needs a positive rate")
        return Density("exponential", rate)
    raise UsageError(f"unknown density kind {spec['kind']!r}")


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """``(E, m)`` with ``E`` a cell and ``m`` absolutely continuous on ``E``."""

    ground: Cell = field(default_factory=lambda: Cell.interval(-INF, INF))
    density: Density = LEBESGUE
    rtol: float = 1e-8

    def measure(self, cell: Cell) -> float:
        return sum(self.density.mass(lo, hi) for lo, hi in (cell & self.ground).intervals)

    def integrate(self, func: Callable, cell: Cell, breakpoints: Sequence[float] = ()) -> float:
        """``int_cell func dm`` by Gauss-Legendre, split at the given breakpoints."""
        total = 0.0
        pts = sorted(set(breakpoints))
        for lo, hi in (cell & self.ground).intervals:
            cuts = [lo] + [p for p in pts if lo < p < hi] + [hi]
            for a, b in zip(cuts[:-1], cuts[1:]):
                total += gauss_legendre(
                    lambda s: func(s) * self.density.weight(s), a, b, self.rtol
                )
        return total

    def sample(self, cell: Cell, rng, size: int) -> np.ndarray:
        """i.i.d. draws from ``m`` restricted to ``cell`` and normalized."""
        ivs = (cell & self.ground).intervals
        masses = np.array([self.density.mass(lo, hi) for lo, hi in ivs])
        if len(ivs) == 1:
            return self.density.sample(rng, *ivs[0], size)
        which = rng.choice(len(ivs), size=size, p=masses / masses.sum())
        out = np.empty(size)
        for i, (lo, hi) in enumerate(ivs):
            sel = which == i
            out[sel] = self.density.sample(rng, lo, hi, int(sel.sum()))
        return out

    def spec(self) -> dict:
        return {"intervals": self.ground.to_json(), "density": self.density.spec()}


def lebesgue(lo: float = -INF, hi: float = INF) -> MeasureSpace:
    return MeasureSpace(Cell.interval(lo, hi))


def space_from_spec(spec: dict) -> MeasureSpace:
    return MeasureSpace(cell_from_json(spec.get("intervals", [[None, None]])),
                        density_from_spec(spec.get("density")))


# -------------------------------------------------------------------- integrands


class Integrand:
    """Nonnegative function with a declared support and an upper bound on it."""

    support: Cell
    bound: float

    def __call__(self, s) -> np.ndarray:
        raise NotImplementedError

    def superlevel(self, t: float) -> Cell:
        """Cell equal to ``{g >= t}`` up to finitely many points (``t > 0``)."""
        raise NotImplementedError

    def breakpoints(self) -> tuple[float, ...]:
        pts = []
        for lo, hi in self.support.intervals:
            pts.extend(p for p in (lo, hi) if math.isfinite(p))
        return tuple(pts)

    def restrict(self, cell: Cell) -> "Integrand":
        raise NotImplementedError

    def scaled(self, a: float) -> "Integrand":
        return MaxOf(((float(a), self),))

    def __or__(self, other: "Integrand") -> "Integrand":
        return MaxOf(((1.0, self), (1.0, other)))


@dataclass(frozen=True)
class SimpleFunction(Integrand):
    """``sum_j c_j 1_{A_j}`` over disjoint cells ``A_j`` with ``c_j >= 0``."""

    terms: tuple[tuple[Cell, float], ...] = ()

    def __post_init__(self):
        terms = tuple((c, float(a)) for c, a in self.terms if not c.is_empty)
        for _, a in terms:
            if not (math.isfinite(a) and a >= 0):
                raise UsageError("simple-function coefficients must be finite and >= 0")
        if not _disjoint(c for c, _ in terms):
            raise UsageError("simple-function cells must be disjoint")
        object.__setattr__(self, "terms", terms)
        table = sorted((lo, hi, a) for c, a in terms for lo, hi in c.intervals)
        object.__setattr__(self, "_table", tuple(np.array(col, dtype=float).reshape(-1)
                                                 for col in zip(*table)) if table else None)

    @property
    def cells(self) -> tuple[Cell, ...]:
        return tuple(c for c, _ in self.terms)

    @property
    def coeffs(self) -> tuple[float, ...]:
        return tuple(a for _, a in self.terms)

    @property
    def support(self) -> Cell:
        return union_all(c for c, a in self.terms if a > 0)

    @property
    def bound(self) -> float:
        return max(self.coeffs, default=0.0)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        if self._table is None:
            return np.zeros(s.shape)
        los, his, vals = self._table
        i = np.searchsorted(los, s, side="right") - 1
        j = np.maximum(i, 0)
        return np.where((i >= 0) & (s < his[j]), vals[j], 0.0)

    def superlevel(self, t: float) -> Cell:
        return union_all(c for c, a in self.terms if a >= t)

    def breakpoints(self):
        pts = set()
        for c in self.cells:
            for lo, hi in c.intervals:
                pts.update(p for p in (lo, hi) if math.isfinite(p))
        return tuple(sorted(pts))

    def restrict(self, cell: Cell) -> "SimpleFunction":
        return SimpleFunction(tuple((c & cell, a) for c, a in self.terms))

    def scaled(self, a: float) -> "SimpleFunction":
        if a < 0:
            raise UsageError("scale factors must be nonnegative")
        return SimpleFunction(tuple((c, a * v) for c, v in self.terms))

    def shift(self, c: float) -> "SimpleFunction":
        return SimpleFunction(tuple((cell.shift(c), a) for cell, a in self.terms))

    def canonical(self) -> "SimpleFunction":
        """Merge cells sharing a coefficient and drop zero terms."""
        groups: dict[float, list[Cell]] = {}
        for c, a in self.terms:
            if a > 0:
                groups.setdefault(a, []).append(c)
        terms = sorted(((union_all(cs), a) for a, cs in groups.items()),
                       key=lambda t: t[0].lower)
        return SimpleFunction(tuple(terms))

    def to_json(self) -> list:
        return [{"cells": c.to_json(), "coeff": a} for c, a in self.terms]


def simple(*terms) -> SimpleFunction:
    """``simple((lo, hi, c), ...)`` shorthand for interval-cell simple functions."""
    return SimpleFunction(tuple((Cell.interval(lo, hi), c) for lo, hi, c in terms))


def indicator_function(cell: Cell, height: float = 1.0) -> SimpleFunction:
    return SimpleFunction(((cell, height),))


def simple_from_json(data) -> SimpleFunction:
    if not isinstance(data, list):
        raise UsageError("a simple function is a list of {cells, coeff} records")
    terms = []
    for k, rec in enumerate(data):
        if not isinstance(rec, dict) or "cells" not in rec or "coeff" not in rec:
            raise UsageError(f"term {k}: expected {{'cells': [...], 'coeff': c}}")
        terms.append((cell_from_json(rec["cells"]), float(rec["coeff"])))
    return SimpleFunction(tuple(terms))


KERNELS = ("exp_decay", "indicator", "triangle", "power")


@dataclass(frozen=True)
class Kernel(Integrand):
    """Named closed-form integrand restricted to ``support``.

    exp_decay   ``scale * exp(-rate * s)``
    indicator   ``scale``
    triangle    ``scale * max(0, 1 - |s - center| / width)``
    power       ``scale * s**exponent`` (support must lie in ``[0, inf)``)
    """

    name: str
    support: Cell
    scale: float = 1.0
    rate: float = 1.0
    center: float = 0.0
    width: float = 1.0
    exponent: float = 1.0

    def __post_init__(self):
        if self.name not in KERNELS:
            raise UsageError(f"unknown kernel {self.name!r}")
        if self.scale < 0:
            raise UsageError("kernel scale must be nonnegative")
        if self.name == "triangle" and self.width <= 0:
            raise UsageError("triangle width must be positive")
        if self.name == "power" and not self.support.is_empty:
            if self.support.lower < 0 or (self.exponent < 0 and self.support.lower <= 0):
                raise UsageError("power kernel needs support in [0, inf), or (0, inf) "
                                 "for negative exponents")

    def _raw(self, s):
        if self.name == "exp_decay":
            return self.scale * np.exp(-self.rate * s)
        if self.name == "indicator":
            return np.full(np.shape(s), self.scale)
        if self.name == "triangle":
            return self.scale * np.maximum(0.0, 1.0 - np.abs(s - self.center) / self.width)
        with np.errstate(divide="ignore", invalid="ignore"):
            return self.scale * np.power(np.abs(s), self.exponent)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        inside = self.support.contains(s)
        out = np.zeros(s.shape)
        out[inside] = self._raw(s[inside])
        return out

    @property
    def bound(self) -> float:
        if self.support.is_empty or self.scale == 0:
            return 0.0
        lo, hi = self.support.lower, self.support.upper
        if self.name == "indicator":
            return self.scale
        if self.name == "triangle":
            # unimodal: the support point nearest the peak bounds g
            return float(self._raw(min(max(self.center, lo), hi)))
        if self.name == "exp_decay":
            edge = lo if self.rate >= 0 else hi
            if math.isinf(edge):
                raise UsageError("exp_decay is unbounded on this support")
            return float(self.scale * math.exp(-self.rate * edge))
        if self.exponent == 0:
            return self.scale
        edge = hi if self.exponent > 0 else lo
        if math.isinf(edge):
            raise UsageError("power kernel is unbounded on this support")
        return float(self.scale * edge ** self.exponent)

    def superlevel(self, t: float) -> Cell:
        if t <= 0:
            return self.support
        if self.scale == 0 or t > self.scale and self.name in ("indicator", "triangle"):
            return Cell()
        if self.name == "indicator":
            return self.support
        if self.name == "triangle":
            r = self.width * (1.0 - t / self.scale)
            return Cell.interval(self.center - r, self.center + r) & self.support
        if self.name == "exp_decay":
            if self.rate == 0:
                return self.support if self.scale >= t else Cell()
            x = math.log(self.scale / t) / self.rate
            side = Cell.interval(-INF, x) if self.rate > 0 else Cell.interval(x, INF)
            return side & self.support
        if self.exponent == 0:
            return self.support if self.scale >= t else Cell()
        x = (t / self.scale) ** (1.0 / self.exponent)
        side = Cell.interval(x, INF) if self.exponent > 0 else Cell.interval(-INF, x)
        return side & self.support

    def breakpoints(self):
        pts = list(super().breakpoints())
        if self.name == "triangle":
            pts.append(self.center)
        return tuple(pts)

    def restrict(self, cell: Cell) -> "Kernel":
        return Kernel(self.name, self.support & cell, self.scale, self.rate,
                      self.center, self.width, self.exponent)

    def scaled(self, a: float) -> "Kernel":
        if a < 0:
            raise UsageError("scale factors must be nonnegative")
        return Kernel(self.name, self.support, self.scale * a, self.rate,
                      self.center, self.width, self.exponent)

    def to_json(self) -> dict:
        out = {"kind": self.name, "support": self.support.to_json(), "scale": self.scale}
        extra = {"exp_decay": ("rate",), "triangle": ("center", "width"),
                 "power": ("exponent",), "indicator": ()}[self.name]
        out.update({k: getattr(self, k) for k in extra})
        return out


def exp_decay(rate: float = 1.0, lo: float = 0.0, hi: float = INF, scale: float = 1.0) -> Kernel:
    return Kernel("exp_decay", Cell.interval(lo, hi), scale, rate=rate)


def triangle(center: float, width: float, scale: float = 1.0) -> Kernel:
    return Kernel("triangle", Cell.interval(center - width, center + width), scale,
                  center=center, width=width)


def power(exponent: float, lo: float, hi: float, scale: float = 1.0) -> Kernel:
    return Kernel("power", Cell.interval(lo, hi), scale, exponent=exponent)


def indicator(lo: float, hi: float, scale: float = 1.0) -> Kernel:
    return Kernel("indicator", Cell.interval(lo, hi), scale)


@dataclass(frozen=True)
class MaxOf(Integrand):
    """Pointwise maximum ``max_i a_i g_i`` of scaled integrands."""

    parts: tuple[tuple[float, Integrand], ...]

    def __post_init__(self):
        if any(a < 0 for a, _ in self.parts):
            raise UsageError("scale factors must be nonnegative")

    @property
    def support(self) -> Cell:
        return union_all(g.support for a, g in self.parts if a > 0)

    @property
    def bound(self) -> float:
        return max((a * g.bound for a, g in self.parts), default=0.0)

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        out = np.zeros(s.shape)
        for a, g in self.parts:
            if a > 0:
                out = np.maximum(out, a * g(s))
        return out

    def superlevel(self, t: float) -> Cell:
        return union_all(g.superlevel(t / a) for a, g in self.parts if a > 0)

    def breakpoints(self):
        return tuple(sorted({p for _, g in self.parts for p in g.breakpoints()}))

    def restrict(self, cell: Cell) -> "MaxOf":
        return MaxOf(tuple((a, g.restrict(cell)) for a, g in self.parts))

    def scaled(self, a: float) -> "MaxOf":
        return MaxOf(tuple((a * b, g) for b, g in self.parts))


def integrand_from_json(spec: dict) -> Integrand:
    kind = spec.get("kind")
    if kind == "simple":
        return simple_from_json(spec.get("terms"))
    if kind not in KERNELS:
        raise UsageError(f"unknown integrand kind {kind!r}")
    allowed = {"kind", "support", "scale", "rate", "center", "width", "exponent"}
    unknown = set(spec) - allowed
    if unknown:
        raise UsageError(f"unknown integrand fields {sorted(unknown)}")
    if kind == "triangle" and "support" not in spec:
        c, w = float(spec.get("center", 0.0)), float(spec.get("width", 1.0))
        support = Cell.interval(c - w, c + w)
    else:
        support = cell_from_json(spec.get("support", [[0, None]]))
    kw = {k: float(spec[k]) for k in ("scale", "rate", "center", "width", "exponent") if k in spec}
    return Kernel(kind, support, **kw)


def integrand_to_json(g: Integrand) -> dict:
    if isinstance(g, SimpleFunction):
        return {"kind": "simple", "terms": g.to_json()}
    if isinstance(g, Kernel):
        return g.to_json()
    raise UsageError("only simple functions and named kernels serialize")


# --------------------------------------------------------------------- norms


def _power_integral(g: Integrand, m: MeasureSpace, alpha: float, cell: Cell | None = None) -> float:
    """``int_cell g**alpha dm`` (whole support when ``cell`` is None)."""
    if alpha <= 0:
        raise UsageError("alpha must be positive")
    if isinstance(g, SimpleFunction):
        terms = g.terms if cell is None else g.restrict(cell).terms
        total = 0.0
        for c, a in terms:
            if a == 0:
                continue
            mass = m.measure(c)
            if math.isinf(mass):
                raise IntegrabilityError("simple function charges a cell of infinite measure")
            total += a ** alpha * mass
        return total
    region = g.support if cell is None else g.support & cell
    return m.integrate(lambda s: g(s) ** alpha, region, g.breakpoints())


@lru_cache(maxsize=4096)
def _cached_power_integral(g, m, alpha, cell):
    return _power_integral(g, m, alpha, cell)


def power_integral(g: Integrand, m: MeasureSpace, alpha: float, cell: Cell | None = None) -> float:
    try:
        return _cached_power_integral(g, m, alpha, cell)
    except TypeError:  # unhashable integrand
        return _power_integral(g, m, alpha, cell)


def lalpha_norm(g: Integrand, m: MeasureSpace, alpha: float) -> float:
    """``(int |g|^alpha dm)^(1/alpha)``: exact sum for simple ``g``, quadrature otherwise."""
    return power_integral(g, m, alpha) ** (1.0 / alpha)


def lalpha_gap(g1: Integrand, g2: Integrand, m: MeasureSpace, alpha: float) -> float:
    """``int |g1^alpha - g2^alpha| dm``."""
    if isinstance(g1, SimpleFunction) and isinstance(g2, SimpleFunction):
        part, c1, c2 = common_refinement(g1, g2)
        return sum(abs(a ** alpha - b ** alpha) * m.measure(c)
                   for c, a, b in zip(part.cells, c1, c2))
    region = g1.support | g2.support
    pts = tuple(g1.breakpoints()) + tuple(g2.breakpoints())
    return m.integrate(lambda s: np.abs(g1(s) ** alpha - g2(s) ** alpha), region, pts)


# ------------------------------------------------------------------ partitions


@dataclass(frozen=True)
class Partition:
    """Finite family of pairwise disjoint, nonempty cells (need not cover E)."""

    cells: tuple[Cell, ...]

    def __post_init__(self):
        cells = tuple(c for c in self.cells if not c.is_empty)
        if not _disjoint(cells):
            raise UsageError("partition cells must be disjoint")
        object.__setattr__(self, "cells", cells)

    def __len__(self):
        return len(self.cells)

    def __le__(self, finer: "Partition") -> bool:
        """``self <= finer``: every cell of ``self`` is a union of cells of ``finer``."""
        for c in self.cells:
            inside = [d for d in finer.cells if d <= c]
            if union_all(inside) != c:
                return False
        return True

    @property
    def union(self) -> Cell:
        return union_all(self.cells)


def refine(p: Partition, q: Partition) -> Partition:
    """Coarsest partition refining both, covering the union of their cells."""
    cells = []
    uq, up = q.union, p.union
    for a in p.cells:
        cells.extend(a & b for b in q.cells)
        cells.append(a - uq)
    cells.extend(b - up for b in q.cells)
    cells = [c for c in cells if not c.is_empty]
    cells.sort(key=lambda c: c.lower)
    return Partition(tuple(cells))


def represent(g: SimpleFunction, partition: Partition) -> tuple[float, ...]:
    """Coefficients of ``g`` on a partition that refines its cells.

    Each partition cell must lie inside one cell of ``g`` or miss all of
    them; otherwise ``g`` is not constant on it and a UsageError is raised.
    """
    out = []
    for c in partition.cells:
        coeff = 0.0
        for gc, a in g.terms:
            common = c & gc
            if common.is_empty:
                continue
            if common != c:
                raise UsageError("partition does not refine the simple function")
            coeff = a
            break
        out.append(coeff)
    return tuple(out)


def common_refinement(g1: SimpleFunction, g2: SimpleFunction):
    """Common partition of two simple functions and both coefficient lists."""
    part = refine(Partition(g1.cells), Partition(g2.cells))
    return part, represent(g1, part), represent(g2, part)


def consistent_sequence(gs: Sequence[SimpleFunction]) -> list[tuple[Partition, tuple[float, ...]]]:
    """Representations of ``g_1, g_2, ...`` on successively refined partitions."""
    if not gs:
        raise UsageError("need at least one simple function")
    out = []
    part = Partition(gs[0].cells)
    for n, g in enumerate(gs):
        if n:
            part = refine(part, Partition(g.cells))
        out.append((part, represent(g, part)))
    return out


def exhausting_set(support: Cell, n: float) -> Cell:
    """``E_n``: support truncated to a window of length ``n`` anchored at its finite end."""
    lo, hi = support.lower, support.upper
    if math.isfinite(lo):
        window = Cell.interval(lo, lo + n)
    elif math.isfinite(hi):
        window = Cell.interval(hi - n, hi)
    else:
        window = Cell.interval(-n / 2, n / 2)
    return support & window


def monotone_approximation(g: Integrand, n: int) -> SimpleFunction:
    """Dyadic simple function ``min(floor(2^n g) / 2^n, n)`` on ``E_n``.

    ``E_n`` is the support cut to a window of length ``2n``, so the sequence
    increases pointwise to ``g``.
    """
    if n < 0:
        raise UsageError("level must be nonnegative")
    if n == 0:
        return SimpleFunction()
    e_n = exhausting_set(g.support, 2 * n)
    step = 2.0 ** (-n)
    top = min(float(n), math.floor(g.bound / step) * step)
    levels = int(round(top / step))
    terms = []
    upper = g.superlevel(top) & e_n if top > 0 else Cell()
    if top > 0:
        terms.append((upper, top))
    for j in range(levels - 1, 0, -1):
        lower = g.superlevel(j * step) & e_n
        terms.append((lower - upper, j * step))
        upper = lower
    terms.sort(key=lambda t: t[0].lower)
    return SimpleFunction(tuple((c, a) for c, a in terms if not c.is_empty))


def mismatch_from_masses(inside: float, outside: float) -> float:
    """``(1 + inside / outside)^-1`` written without dividing by zero."""
    total = inside + outside
    if total <= 0:
        raise UsageError("mismatch probability needs a nonzero norm")
    return outside / total


def exhausting_cell(g: Integrand, m: MeasureSpace, alpha: float, epsilon: float,
                    max_length: float = 2.0 ** 60) -> Cell:
    """Smallest window ``E`` of the support with ``P(I(g) != I(g 1_E)) <= epsilon``."""
    if not 0 < epsilon < 1:
        raise UsageError("epsilon must lie in (0, 1)")
    total = power_integral(g, m, alpha)
    if total <= 0:
        raise UsageError("exhausting_cell needs a nonzero norm")

    def miss(length):
        inside = power_integral(g, m, alpha, exhausting_set(g.support, length))
        return mismatch_from_masses(inside, max(total - inside, 0.0))

    span = g.support.upper - g.support.lower
    hi = span if math.isfinite(span) else 1.0
    while miss(hi) > epsilon:
        hi *= 2.0
        if hi > max_length:
            raise TruncationError(f"epsilon={epsilon} unreachable on the declared support")
    lo = 0.0
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if miss(mid) <= epsilon:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-9 * hi:
            break
    return exhausting_set(g.support, hi)
