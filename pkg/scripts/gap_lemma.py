"""No-gap frequency behind the implicit maximum of k implicit Frechet vectors.

For each (alpha, gamma, k) prints the Monte Carlo frequency of
f(max) <= (1 + gamma) f(second), the exact value from the two-variable
sandwich formula and the uniform bound 1 - (1 + gamma)^-alpha.

    python scripts/gap_lemma.py --n 100000
"""
import argparse
import itertools

from fextremal.algebra import euclidean
from fextremal.laws import discrete_kappa, gap_bound, substream
from fextremal.verify import gap_event_frequency, gap_exact


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--n", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=4)
    args = p.parse_args()

    f = euclidean(2)
    kappa = discrete_kappa(f, [[1, 0], [0, 1], [1, 1]], [0.5, 0.3, 0.2])
    print(f"{'alpha':>5s} {'gamma':>5s} {'k':>2s} {'freq':>8s} {'exact':>8s} {'bound':>8s}")
    for i, (alpha, gamma, k) in enumerate(itertools.product((0.5, 1.0, 2.0), (0.1, 0.5, 1.0),
                                                            (2, 5))):
        hits = gap_event_frequency(f, kappa, alpha, [1.0] * k, gamma, args.n,
                                   substream(args.seed, i))
        print(f"{alpha:5.1f} {gamma:5.1f} {k:2d} {hits / args.n:8.5f} "
              f"{gap_exact(alpha, [1.0] * k, gamma):8.5f} {gap_bound(alpha, gamma):8.5f}")


if __name__ == "__main__":
    main()
