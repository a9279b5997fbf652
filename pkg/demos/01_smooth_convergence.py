"""Grid-refinement study on the smooth rotating-free benchmark.

Advects the compactly supported cos^8 bump once around the periodic unit
interval at CFL 0.8 and tabulates max-norm errors for every face scheme,
with and without the limiter.  The headline numbers: the finest-pair
observed order is 3.85..4.6 for every scheme, and the limited errors match
the unlimited ones wherever the bump is resolved.

Run:  python demos/01_smooth_convergence.py [--n-list 32,64,128,256]
"""

import argparse

from fvadvect import SCHEME_NAMES, convergence_study

parser = argparse.ArgumentParser()
parser.add_argument("--n-list", default="32,64,128,256")
args = parser.parse_args()
n_list = [int(tok) for tok in args.n_list.split(",")]

print(f"cos^8 bump (radius 15/128), constant velocity, sigma = 0.8, t = 1.0")
print(f"{'scheme':>7} {'limiter':>8} " + "".join(f"{'N=%d' % n:>12}" for n in n_list)
      + "   orders")
for name in SCHEME_NAMES:
    for limiter in ("off", "on"):
        recs = convergence_study(
            "cosine8", "constant", name, 0.8, n_list, limiter=limiter, dim=1
        )
        errs = "".join(f"{r.error:>12.3e}" for r in recs)
        orders = ", ".join(f"{r.order:.2f}" for r in recs[1:])
        print(f"{name:>7} {limiter:>8} {errs}   {orders}")
