"""Final phase RMSE of CTV retrieval as a function of the TV weight tau, on a
log-spaced grid. Too small a tau leaves noise, too large a tau erases detail.

    python scripts/tau_sweep.py [--taus 0.003 0.3 6] [--seed 0]
"""

import argparse

import numpy as np

from complextv.experiments import MethodSpec, make_benchmark, run_method


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--taus", type=float, nargs=3, default=[0.003, 0.3, 6], metavar=("LO", "HI", "N"))
    parser.add_argument("--size", type=int, default=128)
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--iters", type=int, default=150)
    parser.add_argument("--method", choices=["ctv", "tv"], default="ctv")
    args = parser.parse_args()

    bench = make_benchmark(args.size, args.seed)
    lo, hi, n = args.taus
    print("tau,final_rmse")
    for tau in np.geomspace(lo, hi, int(n)):
        rep = run_method(bench, MethodSpec(args.method, tau=tau), args.iters)
        print(f"{tau:.4g},{rep.rmse_trace[-1]:.4f}")


if __name__ == "__main__":
    main()
