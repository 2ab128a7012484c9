"""Sweep the (s, sigma) stability map for n = 1, 2, 3 and print one CSV.

Equivalent to `cnls stability-map` per dimension; kept as a script so the
three maps land in a single file for plotting.

Usage: python scripts/stability_map.py [out.csv]
"""

import sys

import numpy as np

from cnls.moments import PhysParams
from cnls.spectrum import classify, vk_quantity


def main(argv):
    out = open(argv[1], "w") if len(argv) > 1 else sys.stdout
    print("n,s,sigma,Q,classification,k_r", file=out)
    for n in (1, 2, 3):
        for s in np.linspace(0.6 * n, 3.0 * n, 25):
            for sig in np.linspace(0.1, 4.0, 40):
                p = PhysParams(n=n, s=float(s), omega=1.0, sigma=float(sig))
                rep = classify(p, want_unstable_lambda=False)
                print(f"{n},{s:.17g},{sig:.17g},{vk_quantity(p):.17g},"
                      f"{rep.classification},{rep.k_r}", file=out)
    if out is not sys.stdout:
        out.close()


if __name__ == "__main__":
    main(sys.argv)
