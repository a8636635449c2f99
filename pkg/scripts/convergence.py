"""Coupled convergence of I(g_n) to I(g) along dyadic approximations and translates.

For each level n the script reports the L^alpha gap int |g_n^a - g^a| dm and,
over coupled series realizations, the median of ||I(g_n) - I(g)|| and the
frequency with which it exceeds the tolerance.

    python scripts/convergence.py --n 1000 --levels 10
"""
import argparse

import numpy as np

from fextremal.algebra import euclidean
from fextremal.integral import integration_region
from fextremal.laws import discrete_kappa, substream
from fextremal.measure import exp_decay, lalpha_gap, lebesgue, monotone_approximation, simple
from fextremal.supmeasure import SeriesRealization, SupMeasureSpec


def coupled_distances(spec, g, gs, n, seed):
    region = integration_region(spec, g, 1e-4)
    for gn in gs:
        if gn.terms:
            region = region | gn.support
    dist = np.empty((n, len(gs)))
    for r in range(n):
        real = SeriesRealization(spec, region, substream(seed, r))
        base = real.integral(g.restrict(region)).value
        for i, gn in enumerate(gs):
            dist[r, i] = np.linalg.norm(real.integral(gn).value - base)
    return dist


def table(title, levels, gaps, dist, tol):
    print(title)
    print(f"{'n':>3s} {'gap':>10s} {'median':>10s} {'P(>tol)':>8s}")
    for k, gap, col in zip(levels, gaps, dist.T):
        print(f"{k:3d} {gap:10.5f} {np.median(col):10.5f} {np.mean(col > tol):8.3f}")


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--levels", type=int, default=8)
    p.add_argument("--tol", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=2)
    args = p.parse_args()

    f = euclidean(2)
    kappa = discrete_kappa(f, [[1, 0], [0, 1], [1, 1]], [0.5, 0.3, 0.2])
    levels = list(range(1, args.levels + 1))

    spec = SupMeasureSpec(f, 2.0, kappa, lebesgue())
    g = exp_decay(1.0)
    gs = [monotone_approximation(g, k) for k in levels]
    gaps = [lalpha_gap(gn, g, spec.space, spec.alpha) for gn in gs]
    table("dyadic approximations of exp(-s), alpha=2", levels, gaps,
          coupled_distances(spec, g, gs, args.n, args.seed), args.tol)

    spec = SupMeasureSpec(f, 1.0, kappa, lebesgue())
    g = simple((0, 1, 1.0))
    gs = [g.shift(float(k)) for k in levels]
    gaps = [lalpha_gap(gn, g, spec.space, spec.alpha) for gn in gs]
    print()
    table("translates 1_[n, n+1) of 1_[0, 1), alpha=1", levels, gaps,
          coupled_distances(spec, g, gs, args.n, args.seed + 1), args.tol)


if __name__ == "__main__":
    main()
