"""Statistical checks for every closed-form law and pathwise property.

Each check returns a :class:`CheckReport`.  Verdicts follow fixed rules:
one-sample KS at 1% (critical value ``1.628 / sqrt(N)``), chi-square and
two-sample KS at 1%, and 3-standard-error bands for frequencies.  Replication
``r`` of check ``c`` draws from ``substream(seed, c, r)``, so reports are
reproducible bit for bit.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import stats

from .algebra import LossFunction, UsageError, abs_loss, euclidean, leq_f, vf_max, vf_second
from .integral import (cumulative_kernels, integrate, integration_region, max_combine,
                       mismatch_probability)
from .laws import (AngularMeasure, FrechetLaw, ImplicitFrechetLaw, discrete_kappa,
                   frechet_cdf, frechet_sample, gap_bound, implicit_sample, point_kappa,
                   sandwich_probability, substream)
from .measure import (INF, Cell, Integrand, MeasureSpace, Partition, SimpleFunction, exp_decay,
                      indicator, lalpha_gap, lalpha_norm, lebesgue, monotone_approximation,
                      simple, triangle)
from .supmeasure import SeriesRealization, SupMeasureSpec, integrate_cells, realize_cells

KS_C01 = 1.628


@dataclass
class CheckReport:
    name: str
    n: int
    statistic: float
    reference: float
    threshold: float
    standard_error: float
    passed: bool
    seed: int | None = None
    detail: str = ""

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def summary(self) -> str:
        return (f"{self.verdict.upper():4s} {self.name}: statistic={self.statistic:.6g} "
                f"reference={self.reference:.6g} threshold={self.threshold:.6g} N={self.n}"
                + (f" ({self.detail})" if self.detail else ""))


REPORT_FIELDS = ["name", "n", "statistic", "reference", "threshold", "standard_error",
                 "verdict", "seed", "detail"]


def reports_csv(reports: Sequence[CheckReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPORT_FIELDS)
    for r in reports:
        w.writerow([r.name, r.n, repr(float(r.statistic)), repr(float(r.reference)),
                    repr(float(r.threshold)), repr(float(r.standard_error)), r.verdict,
                    r.seed, r.detail])
    return buf.getvalue()


# ---------------------------------------------------------------- primitives


def ks_statistic(samples, cdf: Callable | None = None, point_mass: float | None = None) -> float:
    """``sup_x |F_N(x) - F(x)|`` for a continuous ``cdf`` or a point mass."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if point_mass is not None:
        below = np.count_nonzero(x < point_mass) / n
        above = np.count_nonzero(x > point_mass) / n
        return max(below, above)
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))


def ks_check(samples, cdf: Callable | None = None, name: str = "ks",
             point_mass: float | None = None, seed=None) -> CheckReport:
    """One-sample KS at the 1% level."""
    n = len(samples)
    if n < 100:
        raise UsageError("ks_check needs at least 100 samples")
    d = ks_statistic(samples, cdf, point_mass)
    crit = KS_C01 / math.sqrt(n)
    return CheckReport(name, n, d, 0.0, crit, 1.0 / math.sqrt(n), d < crit, seed)


def ks_law(samples, law: FrechetLaw, name: str, seed=None) -> CheckReport:
    if law.sigma == 0:
        return ks_check(samples, name=name, point_mass=0.0, seed=seed)
    rep = ks_check(samples, law.cdf, name=name, seed=seed)
    rep.reference = law.sigma
    rep.detail = f"reference Phi_{law.alpha:g}({law.sigma:.6g})"
    return rep


def ks_two_sample(x, y, name: str, seed=None) -> CheckReport:
    x, y = np.sort(np.asarray(x, float)), np.sort(np.asarray(y, float))
    n, m = x.size, y.size
    grid = np.concatenate([x, y])
    d = float(np.max(np.abs(np.searchsorted(x, grid, side="right") / n
                            - np.searchsorted(y, grid, side="right") / m)))
    crit = KS_C01 * math.sqrt((n + m) / (n * m))
    return CheckReport(name, min(n, m), d, 0.0, crit, math.sqrt((n + m) / (n * m)),
                       d < crit, seed)


def chi_square_fit(labels, probs, name: str, seed=None) -> CheckReport:
    """Goodness of fit of categorical labels to ``probs`` at 1%."""
    probs = np.asarray(probs, float)
    counts = np.bincount(np.asarray(labels, int), minlength=len(probs))
    keep = probs > 0
    if np.any(counts[~keep] > 0):
        return CheckReport(name, int(counts.sum()), math.inf, 0.0, 0.0, 0.0, False, seed,
                           "labels on zero-probability atoms")
    if keep.sum() < 2:
        return CheckReport(name, int(counts.sum()), 0.0, 1.0, 0.01, 0.0, True, seed,
                           "single atom")
    res = stats.chisquare(counts[keep], probs[keep] * counts.sum())
    return CheckReport(name, int(counts.sum()), float(res.statistic), float(res.pvalue), 0.01,
                       0.0, bool(res.pvalue > 0.01), seed, f"p={res.pvalue:.4g}")


def chi_square_homogeneity(labels1, labels2, k: int, name: str, seed=None) -> CheckReport:
    c1 = np.bincount(np.asarray(labels1, int), minlength=k)
    c2 = np.bincount(np.asarray(labels2, int), minlength=k)
    table = np.vstack([c1, c2])
    table = table[:, table.sum(axis=0) > 0]
    if table.shape[1] < 2:
        return CheckReport(name, int(c1.sum()), 0.0, 1.0, 0.01, 0.0, True, seed, "single atom")
    chi2, p, _, _ = stats.chi2_contingency(table)
    return CheckReport(name, int(c1.sum()), float(chi2), float(p), 0.01, 0.0, bool(p > 0.01),
                       seed, f"p={p:.4g}")


def frequency_check(hits: int, n: int, reference: float, name: str, mode: str = "equal",
                    seed=None) -> CheckReport:
    """Compare a frequency with a reference using a 3-SE band.

    ``mode='equal'`` needs ``|freq - ref| <= 3 SE``; ``mode='at_most'`` needs
    ``freq <= ref + 3 SE``.
    """
    freq = hits / n
    se = math.sqrt(reference * (1 - reference) / n)
    if mode == "equal":
        ok = abs(freq - reference) <= 3 * se
    elif mode == "at_most":
        ok = freq <= reference + 3 * se
    else:
        raise UsageError(f"unknown mode {mode!r}")
    return CheckReport(name, n, freq, reference, 3 * se, se, bool(ok), seed)


def kendall_se(n: int) -> float:
    """Standard error of Kendall's tau under independence."""
    return math.sqrt(2 * (2 * n + 5) / (9 * n * (n - 1)))


# ------------------------------------------------------------------- checks


def check_frechet_sampler(alpha=2.0, sigma=1.0, n=100_000, seed=0, scale_factor=1.0):
    x = frechet_sample(FrechetLaw(alpha, sigma), substream(seed, 1), n)
    return ks_law(x, FrechetLaw(alpha, sigma * scale_factor), "frechet_sampler", seed)


def check_implicit_sampler(loss: LossFunction, kappa: AngularMeasure, alpha=1.0, sigma=2.0,
                           n=100_000, seed=0, scale_factor=1.0):
    y = implicit_sample(ImplicitFrechetLaw(alpha, sigma, kappa), substream(seed, 2), n)
    return ks_law(loss(y), FrechetLaw(alpha, sigma * scale_factor), "implicit_sampler", seed)


def _series_samples(spec: SupMeasureSpec, g: Integrand, n: int, seed: int, key: int,
                    region: Cell | None = None):
    region = integration_region(spec, g, 1e-4) if region is None else region
    fv = np.empty(n)
    labels = np.empty(n, dtype=int)
    for r in range(n):
        res = integrate(spec, g, SeriesRealization(spec, region, substream(seed, key, r)))
        fv[r] = res.f_value
        labels[r] = -1 if res.atom_label is None else res.atom_label
    return fv, labels


def check_marginal(spec: SupMeasureSpec, g: Integrand, n=20_000, seed=0, scale_factor=1.0,
                   name="marginal_law") -> list[CheckReport]:
    """KS of ``f(I(g))`` against ``Phi_alpha(||g||_alpha)`` and chi-square of directions."""
    fv, labels = _series_samples(spec, g, n, seed, 3)
    norm = lalpha_norm(g, spec.space, spec.alpha)
    out = [ks_law(fv, FrechetLaw(spec.alpha, norm * scale_factor), name, seed)]
    if spec.kappa.is_discrete:
        out.append(chi_square_fit(labels[fv > 0], spec.kappa.probs, name + "_angular", seed))
    return out


def check_backend_equivalence(spec: SupMeasureSpec, g: SimpleFunction, n=20_000, seed=0
                              ) -> list[CheckReport]:
    """Cell backend vs series backend for a simple integrand."""
    part = Partition(g.cells)
    cell_f = np.empty(n)
    cell_lab = np.empty(n, dtype=int)
    for r in range(n):
        res = integrate_cells(realize_cells(spec, part, substream(seed, 4, r)), g)
        cell_f[r] = res.f_value
        cell_lab[r] = -1 if res.atom_label is None else res.atom_label
    ser_f, ser_lab = _series_samples(spec, g, n, seed, 5, g.support)
    out = [ks_two_sample(cell_f, ser_f, "backend_equivalence_ks", seed)]
    if spec.kappa.is_discrete:
        out.append(chi_square_homogeneity(cell_lab[cell_lab >= 0], ser_lab[ser_lab >= 0],
                                          len(spec.kappa.probs), "backend_equivalence_angular",
                                          seed))
    return out


def gap_event_frequency(loss, kappa, alpha, scales, gamma, n, rng) -> int:
    """Count of ``f(v_f X_j) <= (1 + gamma) f(v_f^(2) X_j)`` over ``n`` replications."""
    k = len(scales)
    z = frechet_sample(FrechetLaw(alpha), rng, (n, k))
    theta = kappa.sample(rng, n * k).reshape(n, k, -1)
    x = (np.asarray(scales)[None, :] * z)[:, :, None] * theta
    fx = loss(x)
    order = np.sort(fx, axis=1)
    return int(np.count_nonzero(order[:, -1] <= (1 + gamma) * order[:, -2]))


def gap_exact(alpha, scales, gamma) -> float:
    """Exact no-gap probability: the events for different leaders are disjoint."""
    w = np.asarray(scales, float) ** alpha
    total = w.sum()
    return float(sum(sandwich_probability((total - wi) ** (1 / alpha), wi ** (1 / alpha),
                                          alpha, gamma) for wi in w))


def check_gap_lemma(loss: LossFunction, kappa: AngularMeasure, alpha: float, k: int,
                    scales: Sequence[float] | None, gamma: float, n=100_000, seed=0,
                    exact=False) -> CheckReport:
    """Frequency of a missing ``(1+gamma)`` gap behind the implicit maximum.

    Default: compared with the uniform bound ``1 - (1+gamma)^-alpha``.
    ``exact=True``: compared with the exact value from the sandwich formula.
    """
    if k < 2:
        raise UsageError("check_gap_lemma needs k >= 2")
    if not 0 < gamma <= 1:
        raise UsageError("gamma must lie in (0, 1]")
    scales = [1.0] * k if scales is None else list(scales)
    if len(scales) != k or any(s <= 0 for s in scales):
        raise UsageError("need k positive scales")
    hits = gap_event_frequency(loss, kappa, alpha, scales, gamma, n, substream(seed, 6, k))
    if exact:
        return frequency_check(hits, n, gap_exact(alpha, scales, gamma),
                               f"gap_exact_k{k}", "equal", seed)
    return frequency_check(hits, n, gap_bound(alpha, gamma), f"gap_lemma_k{k}", "at_most", seed)


def check_sandwich(alpha=1.0, sigma1=1.0, sigma2=1.0, gamma=1.0, n=100_000, seed=0):
    """Frequency of ``Y1 <= Y2 <= (1+gamma) Y1`` against the closed form."""
    rng = substream(seed, 7)
    y1 = frechet_sample(FrechetLaw(alpha, sigma1), rng, n)
    y2 = frechet_sample(FrechetLaw(alpha, sigma2), rng, n)
    hits = int(np.count_nonzero((y1 <= y2) & (y2 <= (1 + gamma) * y1)))
    return frequency_check(hits, n, sandwich_probability(sigma1, sigma2, alpha, gamma),
                           "sandwich_formula", "equal", seed)


def random_integrand(rng, lo=0.0, hi=4.0) -> Integrand:
    """Random bounded integrand supported in ``[lo, hi)``."""
    kind = rng.integers(4)
    if kind == 0:
        return exp_decay(rng.uniform(0.2, 2.0), lo, hi, rng.uniform(0.5, 2.0))
    if kind == 1:
        c, w = rng.uniform(lo + 0.5, hi - 0.5), rng.uniform(0.2, 1.5)
        t = triangle(c, w, rng.uniform(0.5, 2.0))
        return t.restrict(Cell.interval(lo, hi))
    if kind == 2:
        a, b = np.sort(rng.uniform(lo, hi, 2))
        return indicator(a, b + 1e-3, rng.uniform(0.5, 2.0)).restrict(Cell.interval(lo, hi))
    cuts = np.sort(rng.uniform(lo, hi, 3))
    edges = [lo, *cuts, hi]
    return simple(*[(edges[i], edges[i + 1], rng.uniform(0, 2)) for i in range(4)])


def check_max_linearity(spec: SupMeasureSpec, n=1000, seed=0) -> CheckReport:
    """Pathwise ``I(a g1 v b g2) = a I(g1) v_f b I(g2)`` and commutation of ``I(g1), I(g2)``."""
    region = Cell.interval(0.0, 4.0)
    bad = 0
    for r in range(n):
        rng = substream(seed, 8, r)
        a, b = rng.uniform(0, 2, 2)
        g1, g2 = random_integrand(rng), random_integrand(rng)
        real = SeriesRealization(spec, region, rng)
        lhs, rhs, atom = max_combine(real, a, g1, b, g2)
        i1, i2 = real.integral(g1).value, real.integral(g2).value
        commute = np.array_equal(vf_max(spec.loss, [i1, i2])[0], vf_max(spec.loss, [i2, i1])[0])
        lhs_atom = lhs.attaining_atom[0] if lhs.attaining_atom else None
        same = lhs_atom == atom and np.allclose(lhs.value, rhs, rtol=1e-12, atol=0)
        bad += not (same and commute)
    return CheckReport("max_linearity", n, (n - bad) / n, 1.0, 1.0, 0.0, bad == 0, seed,
                       f"{bad} mismatches")


def check_monotonicity(spec: SupMeasureSpec, n=1000, seed=0) -> CheckReport:
    """``g1 <= g2`` gives ``I(g1) <=_f I(g2)``; a.e.-equal integrands give equal integrals."""
    region = Cell.interval(0.0, 4.0)
    bad = 0
    for r in range(n):
        rng = substream(seed, 9, r)
        g2 = random_integrand(rng)
        if rng.random() < 0.5:
            g1 = g2.scaled(rng.uniform(0.5, 1.0))
        else:
            a, b = np.sort(rng.uniform(0, 4, 2))
            g1 = g2.restrict(Cell.interval(a, b))
        real = SeriesRealization(spec, region, rng)
        i1, i2 = real.integral(g1).value, real.integral(g2).value
        # an a.e.-equal copy: the same function with a cell split in two
        split = rng.uniform(0.0, 4.0)
        copy = g2.restrict(Cell.interval(0, split)) | g2.restrict(Cell.interval(split, 4))
        same = np.array_equal(real.integral(copy).value, i2)
        bad += not (leq_f(spec.loss, i1, i2) and same)
    return CheckReport("monotonicity", n, (n - bad) / n, 1.0, 1.0, 0.0, bad == 0, seed,
                       f"{bad} violations")


def check_rm2(spec: SupMeasureSpec, n=1000, seed=0) -> CheckReport:
    """``M(A u B) = M(A) v_f M(B)`` exactly for disjoint cells on one realization."""
    bad = 0
    for r in range(n):
        rng = substream(seed, 10, r)
        c = np.sort(rng.uniform(0, 4, 3))
        a, b = Cell.interval(0, c[0]) | Cell.interval(c[1], c[2]), Cell.interval(c[0], c[1])
        real = SeriesRealization(spec, Cell.interval(0, 4), rng)
        both = real.measure(a | b)
        bad += not np.array_equal(both, vf_max(spec.loss, [real.measure(a), real.measure(b)])[0])
    return CheckReport("rm2_pathwise", n, (n - bad) / n, 1.0, 1.0, 0.0, bad == 0, seed,
                       f"{bad} violations")


def check_remainder(spec: SupMeasureSpec, g: Integrand, cell: Cell, n=100_000, seed=0
                    ) -> CheckReport:
    """Frequency of ``I(g) != I(g 1_cell)`` against the closed-form mismatch probability."""
    ref = mismatch_probability(g, cell, spec.space, spec.alpha)
    region = integration_region(spec, g, 1e-4)
    inner = g.restrict(cell)
    hits = 0
    for r in range(n):
        real = SeriesRealization(spec, region, substream(seed, 11, r))
        hits += not np.array_equal(real.integral(g).value, real.integral(inner).value)
    return frequency_check(hits, n, ref, "remainder", "equal", seed)


def check_independence(spec: SupMeasureSpec, g1: Integrand, g2: Integrand, n=20_000, seed=0,
                       name="independence") -> CheckReport:
    """Kendall's tau of ``(f(I(g1)), f(I(g2)))``.

    Disjoint supports: pass iff ``|tau| <= 3 SE``.  Overlapping supports: pass
    iff ``tau > 3 SE`` (dependence confirmed).
    """
    region = integration_region(spec, g1, 1e-4) | integration_region(spec, g2, 1e-4)
    x, y = np.empty(n), np.empty(n)
    for r in range(n):
        real = SeriesRealization(spec, region, substream(seed, 12, r))
        x[r] = real.integral(g1).f_value
        y[r] = real.integral(g2).f_value
    tau = float(stats.kendalltau(x, y).statistic)
    se = kendall_se(n)
    overlap = spec.space.measure(g1.support & g2.support) > 0
    ok = tau > 3 * se if overlap else abs(tau) <= 3 * se
    mode = "dependence" if overlap else "independence"
    return CheckReport(name, n, tau, 0.0, 3 * se, se, bool(ok), seed, f"expects {mode}")


def check_convergence_theorem(spec: SupMeasureSpec, g: Integrand, sequence: str,
                              levels: Sequence[int] = tuple(range(1, 9)), n=1000, seed=0,
                              tol=0.05) -> CheckReport:
    """Coupled ``||I(g_n) - I(g)||`` along a sequence ``g_n``.

    ``sequence='dyadic'``: monotone approximations; pass iff
    ``P(||I(g_n) - I(g)|| > tol) < 0.05`` at the last level.
    ``sequence='translates'``: ``g_n = g(. - n)``; pass iff that probability
    exceeds 0.5 at every level.
    """
    m, alpha = spec.space, spec.alpha
    if sequence == "dyadic":
        gs = [monotone_approximation(g, k) for k in levels]
    elif sequence == "translates":
        if not isinstance(g, SimpleFunction):
            raise UsageError("translates are built for simple functions")
        gs = [g.shift(float(k)) for k in levels]
    else:
        raise UsageError(f"unknown sequence {sequence!r}")
    gaps = [lalpha_gap(gn, g, m, alpha) for gn in gs]
    region = integration_region(spec, g, 1e-4)
    for gn in gs:
        if gn.terms:
            region = region | gn.support
    exceed = np.zeros(len(gs))
    dist = np.empty((n, len(gs)))
    for r in range(n):
        real = SeriesRealization(spec, region, substream(seed, 13, r))
        base = real.integral(g.restrict(region)).value
        for i, gn in enumerate(gs):
            dist[r, i] = np.linalg.norm(real.integral(gn).value - base)
    exceed = (dist > tol).mean(axis=0)
    medians = np.median(dist, axis=0)
    if sequence == "dyadic":
        ok = exceed[-1] < 0.05
        stat, ref = exceed[-1], 0.05
    else:
        ok = bool(np.all(exceed > 0.5))
        stat, ref = float(exceed.min()), 0.5
    detail = ("gaps=" + ";".join(f"{v:.4g}" for v in gaps)
              + " exceed=" + ";".join(f"{v:.4g}" for v in exceed)
              + " median=" + ";".join(f"{v:.4g}" for v in medians))
    return CheckReport(f"convergence_{sequence}", n, float(stat), ref, ref, 0.0, bool(ok),
                       seed, detail)


def check_classical_recovery(n=1000, seed=0, alpha=1.0) -> CheckReport:
    """``d = 1``, ``f = |.|``, ``kappa = point mass at 1``: ordinary maxima throughout."""
    loss = abs_loss()
    spec = SupMeasureSpec(loss, alpha, point_kappa(loss, [1.0]), lebesgue())
    region = Cell.interval(0.0, 4.0)
    bad = 0
    for r in range(n):
        rng = substream(seed, 14, r)
        a, b = rng.uniform(0, 2, 2)
        g1, g2 = random_integrand(rng), random_integrand(rng)
        real = SeriesRealization(spec, region, rng)
        lhs, rhs, _ = max_combine(real, a, g1, b, g2)
        i1, i2 = real.integral(g1).value[0], real.integral(g2).value[0]
        ordinary = max(a * i1, b * i2)
        ok = (lhs.value[0] >= 0 and i1 >= 0 and i2 >= 0
              and math.isclose(lhs.value[0], ordinary, rel_tol=1e-12, abs_tol=0.0)
              and math.isclose(rhs[0], ordinary, rel_tol=1e-12, abs_tol=0.0))
        bad += not ok
    return CheckReport("classical_recovery", n, (n - bad) / n, 1.0, 1.0, 0.0, bad == 0, seed,
                       f"{bad} violations")


def check_process(spec: SupMeasureSpec, times=(1.0, 2.0), weights=(1.5, 1.0), n=20_000,
                  seed=0, scale_factor=1.0) -> list[CheckReport]:
    """Cumulative process ``X(t) = M([0, t))``: marginals, monotone paths, max-combinations."""
    kernels = cumulative_kernels(times)
    region = Cell.interval(0.0, max(times))
    fx = np.empty((n, len(times)))
    combo = np.empty(n)
    bad = 0
    for r in range(n):
        real = SeriesRealization(spec, region, substream(seed, 15, r))
        xs = [integrate(spec, g, real).value for g in kernels]
        fx[r] = spec.loss(np.array(xs))
        bad += not all(leq_f(spec.loss, xs[i], xs[i + 1]) for i in range(len(xs) - 1))
        combo[r] = spec.loss(vf_max(spec.loss, [a * x for a, x in zip(weights, xs)])[0])
    out = []
    for j, t in enumerate(times):
        law = FrechetLaw(spec.alpha, t ** (1 / spec.alpha) * scale_factor)
        out.append(ks_law(fx[:, j], law, f"process_marginal_t{t:g}", seed))
    norm = lalpha_norm(kernels[0].scaled(weights[0]) | kernels[1].scaled(weights[1]),
                       spec.space, spec.alpha) if len(kernels) >= 2 else None
    if norm is not None:
        out.append(ks_law(combo, FrechetLaw(spec.alpha, norm * scale_factor),
                          "process_max_combination", seed))
    out.append(CheckReport("process_monotone_paths", n, (n - bad) / n, 1.0, 1.0, 0.0, bad == 0,
                           seed, f"{bad} violations"))
    return out


# -------------------------------------------------------------------- suite


@dataclass
class SuiteSettings:
    """Parameters of the default verification suite."""

    seed: int = 20240601
    loss: LossFunction = field(default_factory=lambda: euclidean(2))
    kappa: AngularMeasure | None = None
    scale_factor: float = 1.0
    n_large: int = 100_000
    n_medium: int = 20_000
    n_small: int = 1000

    def __post_init__(self):
        if self.kappa is None:
            self.kappa = discrete_kappa(self.loss, default_atoms(self.loss.dimension),
                                        None)


def default_atoms(d: int):
    if d == 1:
        return [[1.0], [-1.0]]
    eye = np.eye(d)
    return [*eye.tolist(), np.ones(d).tolist()]


def run_suite(settings: SuiteSettings | None = None, progress: Callable | None = None
              ) -> list[CheckReport]:
    s = SuiteSettings() if settings is None else settings
    loss, kappa, seed, sf = s.loss, s.kappa, s.seed, s.scale_factor
    leb = lebesgue()
    spec2 = SupMeasureSpec(loss, 2.0, kappa, leb)
    spec1 = SupMeasureSpec(loss, 1.0, kappa, leb)
    reports: list[CheckReport] = []

    def add(rs):
        rs = rs if isinstance(rs, list) else [rs]
        reports.extend(rs)
        if progress:
            for r in rs:
                progress(r)

    add(check_frechet_sampler(2.0, 1.0, s.n_large, seed, sf))
    add(check_implicit_sampler(loss, kappa, 1.0, 2.0, s.n_large, seed, sf))
    add(check_marginal(spec2, exp_decay(1.0, 0.0, 20.0), s.n_medium, seed, sf))
    add(check_backend_equivalence(spec2, simple((0, 1, 2.0), (1, 3, 1.0), (3, 3.5, 1.5)),
                                  s.n_medium, seed))
    add(check_gap_lemma(loss, kappa, 1.0, 5, None, 0.5, s.n_large, seed))
    add(check_gap_lemma(loss, kappa, 1.0, 2, None, 1.0, s.n_large, seed, exact=True))
    add(check_sandwich(1.0, 1.0, 1.0, 1.0, s.n_large, seed))
    add(check_max_linearity(spec2, s.n_small, seed))
    add(check_monotonicity(spec2, s.n_small, seed))
    add(check_rm2(spec2, s.n_small, seed))
    add(check_remainder(spec1, indicator(0.0, 4.0), Cell.interval(0.0, 3.0), s.n_large, seed))
    add(check_independence(spec1, indicator(0.0, 1.0), indicator(1.0, 2.0), s.n_medium, seed,
                           "independence_disjoint"))
    add(check_independence(spec1, indicator(0.0, 2.0), indicator(1.0, 3.0), s.n_medium, seed,
                           "dependence_overlapping"))
    add(check_convergence_theorem(spec2, exp_decay(1.0, 0.0, INF), "dyadic", n=s.n_small,
                                  seed=seed))
    add(check_convergence_theorem(spec1, simple((0, 1, 1.0)), "translates", n=s.n_small,
                                  seed=seed))
    add(check_classical_recovery(s.n_small, seed))
    add(check_process(spec1, (1.0, 2.0), (1.5, 1.0), s.n_medium, seed, sf))
    return reports
