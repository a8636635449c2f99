"""Sample paths of the cumulative process X(t) = M([0, t)) on a time grid.

Writes a CSV of f(X(t)) per path, an SVG of the first few step paths, and
prints the KS distance of f(X(t)) against Phi_alpha(t^(1/alpha)) at each time.

    python scripts/process_paths.py --paths 5000 --out runs/process
"""
import argparse
import csv
import math
import os

import numpy as np

from fextremal import plots
from fextremal.algebra import euclidean
from fextremal.integral import cumulative_kernels, simulate_process
from fextremal.laws import FrechetLaw, discrete_kappa
from fextremal.measure import lebesgue
from fextremal.supmeasure import SupMeasureSpec
from fextremal.verify import KS_C01, ks_statistic


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--paths", type=int, default=5000)
    p.add_argument("--alpha", type=float, default=1.0)
    p.add_argument("--tmax", type=float, default=4.0)
    p.add_argument("--steps", type=int, default=16)
    p.add_argument("--seed", type=int, default=3)
    p.add_argument("--out", default="runs/process")
    args = p.parse_args()
    os.makedirs(args.out, exist_ok=True)

    f = euclidean(2)
    kappa = discrete_kappa(f, [[1, 0], [0, 1], [1, 1]], [0.5, 0.3, 0.2])
    spec = SupMeasureSpec(f, args.alpha, kappa, lebesgue())
    times = np.linspace(args.tmax / args.steps, args.tmax, args.steps)
    kernels = cumulative_kernels(times)
    fx = np.array([[r.f_value for r in simulate_process(spec, kernels, seed=args.seed * 10**9 + i)]
                   for i in range(args.paths)])

    with open(os.path.join(args.out, "paths.csv"), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["path", *[f"t={t:g}" for t in times]])
        for i, row in enumerate(fx):
            w.writerow([i + 1, *[repr(float(v)) for v in row]])
    with open(os.path.join(args.out, "paths.svg"), "w", encoding="utf-8") as fh:
        fh.write(plots.step_paths(times, fx[:5]))

    crit = KS_C01 / math.sqrt(args.paths)
    print(f"{'t':>6s} {'KS D':>9s} {'crit':>9s}")
    for j, t in enumerate(times):
        d = ks_statistic(fx[:, j], FrechetLaw(args.alpha, t ** (1 / args.alpha)).cdf)
        print(f"{t:6.2f} {d:9.5f} {crit:9.5f}")
    print("nondecreasing paths:", bool(np.all(np.diff(fx, axis=1) >= 0)))


if __name__ == "__main__":
    main()
