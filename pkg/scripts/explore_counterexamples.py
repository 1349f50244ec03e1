#!/usr/bin/env python3
"""Random search for gamma configurations where the weak order on
(shapes, log rates) holds but the latent negative binomial reduction refutes
the convolution order.  Findings are evidence, not certificates.

Usage: python scripts/explore_counterexamples.py --budget 200 [--seed 0]
"""
import argparse
import json
import sys

from stochord.harness import explore_counterexamples


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--budget", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--output", default=None)
    args = ap.parse_args()
    found = explore_counterexamples(args.budget, args.seed)
    for c in found:
        print(json.dumps(c, sort_keys=True))
    if args.output and found:
        with open(args.output, "a") as fh:
            for c in found:
                fh.write(json.dumps(c, sort_keys=True) + "\n")
    if not found:
        print(f"inconclusive: no candidates in {args.budget} draws")
    return 0


if __name__ == "__main__":
    sys.exit(main())
