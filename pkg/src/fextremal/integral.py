"""The f-implicit extremal integral ``I(g) = int^{v_f} g dM``.

Simple integrands are integrated exactly on either backend.  General
integrands in ``L^alpha_+(m)`` are handled two ways: exactly on a coupled
series realization (after cutting the support to an exhausting cell whose
mismatch probability is reported), or through the dyadic monotone
approximation on the cell backend together with its ``L^alpha`` gap.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


from .algebra import UsageError, vf_max
from .laws import substream
from .measure import (Cell, Integrand, IntegrabilityError, MeasureSpace, Partition,
                      SimpleFunction, exhausting_cell, lalpha_gap, lalpha_norm,
                      mismatch_from_masses, monotone_approximation, power_integral)
from .supmeasure import (CellRealization, IntegralResult, SeriesRealization, SupMeasureSpec,
                         integrate_cells, realize_cells, zero_result)


@dataclass(frozen=True)
class Controls:
    backend: str = "series"
    epsilon_trunc: float = 1e-4
    level: int = 8

    def __post_init__(self):
        if self.backend not in ("series", "cells"):
            raise UsageError(f"unknown backend {self.backend!r}")
        if not 0 < self.epsilon_trunc < 1:
            raise UsageError("epsilon_trunc must lie in (0, 1)")


def integrate_simple(real: CellRealization | SeriesRealization, g: SimpleFunction
                     ) -> IntegralResult:
    """Exact integral of a simple function on either backend."""
    if isinstance(real, CellRealization):
        return integrate_cells(real, g)
    if not g.support <= real.region:
        raise UsageError("simple function support must lie inside the series region")
    return real.integral(g)


def mismatch_probability(g: Integrand, cell: Cell, m: MeasureSpace, alpha: float) -> float:
    """``P(I(g) != I(g 1_cell))``, i.e. ``(1 + ||g 1_cell||^a / ||g 1_cell^c||^a)^-1``."""
    inside = power_integral(g, m, alpha, cell)
    total = power_integral(g, m, alpha)
    if total <= 0:
        raise UsageError("mismatch probability needs a nonzero norm")
    return mismatch_from_masses(inside, max(total - inside, 0.0))


def integration_region(spec: SupMeasureSpec, g: Integrand, epsilon: float) -> Cell:
    """Region on which a series realization integrates ``g``.

    Bounded supports of finite measure are used as they are; anything else is
    cut to an exhausting cell with mismatch probability at most ``epsilon``.
    """
    norm = lalpha_norm(g, spec.space, spec.alpha)
    if not math.isfinite(norm):
        raise IntegrabilityError("g is not in L^alpha_+(m)")
    support = g.support & spec.space.ground
    if support.bounded and math.isfinite(spec.space.measure(support)):
        return support
    return exhausting_cell(g, spec.space, spec.alpha, epsilon)


def integrate(spec: SupMeasureSpec, g: Integrand, realization=None, seed: int | None = None,
              controls: Controls = Controls()) -> IntegralResult:
    """Realize ``I(g)`` for ``g`` in ``L^alpha_+(m)``.

    ``realization`` may be an existing :class:`SeriesRealization` (the
    integrand is then cut to its region) or ``None``, in which case a fresh
    one is drawn from ``seed`` according to ``controls.backend``.
    """
    norm = lalpha_norm(g, spec.space, spec.alpha)
    if not math.isfinite(norm):
        raise IntegrabilityError("g is not in L^alpha_+(m)")
    if isinstance(realization, CellRealization):
        if not isinstance(g, SimpleFunction):
            raise UsageError("the cell backend integrates simple functions only")
        return integrate_cells(realization, g)
    if controls.backend == "cells" and realization is None:
        g_n = g if isinstance(g, SimpleFunction) else monotone_approximation(g, controls.level)
        rng = substream(0 if seed is None else seed)
        if not g_n.terms:
            res = zero_result(spec, "cells")
        else:
            res = integrate_cells(realize_cells(spec, Partition(g_n.cells), rng, seed), g_n)
        res.lalpha_gap = lalpha_gap(g_n, g, spec.space, spec.alpha)
        return res
    if realization is None:
        region = integration_region(spec, g, controls.epsilon_trunc)
        realization = SeriesRealization(spec, region, substream(0 if seed is None else seed),
                                        seed)
    if norm == 0:
        return zero_result(spec, "series", 1)
    region = realization.region
    mismatch = mismatch_probability(g, region, spec.space, spec.alpha)
    return realization.integral(g.restrict(region), mismatch=mismatch)


def scale_result(res: IntegralResult, a: float, loss) -> IntegralResult:
    """``I(a g) = a I(g)`` by scaling the realized value."""
    value = a * res.value
    atom = res.attaining_atom if a > 0 else None
    return IntegralResult(value, float(loss(value)), atom, res.truncation_mismatch_prob,
                          res.atoms_used, res.backend, res.lalpha_gap, res.atom_label)


def max_combine(real: SeriesRealization, a: float, g1: Integrand, b: float, g2: Integrand):
    """Both sides of ``I(a g1 v b g2) = a I(g1) v_f b I(g2)`` on one realization.

    Returns ``(lhs, rhs, rhs_atom)``: the integral of the pointwise maximum,
    the implicit maximum of the scaled integrals, and the atom index the
    right-hand side selected.
    """
    if a < 0 or b < 0:
        raise UsageError("max_combine needs nonnegative weights")
    loss = real.spec.loss
    for g in (g1, g2):
        if not g.support <= real.region:
            raise UsageError("integrand support must lie inside the series region")
    lhs = real.integral(g1.scaled(a) | g2.scaled(b))
    r1 = scale_result(real.integral(g1), a, loss)
    r2 = scale_result(real.integral(g2), b, loss)
    rhs, j = vf_max(loss, [r1.value, r2.value])
    atom = (r1 if j == 1 else r2).attaining_atom
    return lhs, rhs, None if atom is None else atom[0]


def cumulative_kernels(times: Sequence[float], start: float = 0.0) -> list[SimpleFunction]:
    """Indicators ``1_[start, t)`` giving ``X(t) = M([start, t])``."""
    if any(t <= start for t in times):
        raise UsageError("process times must exceed the start point")
    return [SimpleFunction(((Cell.interval(start, t), 1.0),)) for t in times]


def simulate_process(spec: SupMeasureSpec, kernels: Sequence[Integrand], seed: int | None = None,
                     realization: SeriesRealization | None = None,
                     epsilon: float = 1e-4) -> list[IntegralResult]:
    """``X(t_j) = I(g_{t_j})`` for all kernels on one shared series realization."""
    if not kernels:
        raise UsageError("need at least one kernel")
    if realization is None:
        regions = [integration_region(spec, g, epsilon) for g in kernels]
        region = regions[0]
        for r in regions[1:]:
            region = region | r
        realization = SeriesRealization(spec, region, substream(0 if seed is None else seed),
                                        seed)
    return [integrate(spec, g, realization) for g in kernels]


def process_norm(kernels: Sequence[Integrand], weights: Sequence[float], m: MeasureSpace,
                 alpha: float) -> float:
    """``|| v_j a_j g_{t_j} ||_alpha``, the scale of a max-combination of the process."""
    combo = kernels[0].scaled(weights[0])
    for a, g in zip(weights[1:], kernels[1:]):
        combo = combo | g.scaled(a)
    return lalpha_norm(combo, m, alpha)

