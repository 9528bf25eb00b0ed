"""Tabulate oracle T against the closed-form bound per family and angular index.

Runs the randomized dominance batch (and optionally extra instances with
l >= 1 only) and prints violation counts, so the s-wave behaviour of the
3+1 dilatonic bound can be seen separately from l >= 1.
"""

import argparse
import collections

import numpy as np

from greybody import verify
from greybody.geometry import Mode, outer_horizon


def extra_instances(seed, count):
    rng = np.random.default_rng(seed)
    out = []
    for i in range(count):
        geom = verify.random_dilatonic3p1(rng)
        l = int(rng.integers(1, 4))
        w = float(np.exp(rng.uniform(np.log(0.1), np.log(10.0))))
        out.append((f"dilatonic3p1-extra#{i:03d}", geom, Mode(w / outer_horizon(geom), l)))
    return out


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=verify.DEFAULT_SEED)
    ap.add_argument("--extra", type=int, default=0, help="additional 3+1 instances with l in {1,2,3}")
    args = ap.parse_args()
    instances = verify.dominance_instances(args.seed)
    if args.extra:
        instances += extra_instances(args.seed + 7, args.extra)
    impl = verify.default_impl()
    tally = collections.Counter()
    worst = {}
    for label, geom, mode in instances:
        T = impl.transmission_numeric(geom, mode).T
        bound = verify.closed_bound(impl, geom, mode.angular, mode.omega).bound
        key = (geom.family, mode.angular)
        tally[key + ("total",)] += 1
        if T + verify.DOMINANCE_SLACK < bound:
            tally[key + ("violations",)] += 1
            worst[key] = max(worst.get(key, 0.0), bound - T)
    print("family,l,instances,violations,max_excess")
    for fam, l in sorted({k[:2] for k in tally}):
        print(f"{fam},{l},{tally[(fam, l, 'total')]},{tally[(fam, l, 'violations')]},"
              f"{worst.get((fam, l), 0.0):.6g}")


if __name__ == "__main__":
    main()
