"""Ext dimensions of Hom(Y, X) for the A_N factorisations: cut pipeline against the oracle."""

import argparse

from mfcut.instances import an_factorisation
from mfcut.perturb import ext_oracle, hom_pipeline
from mfcut.ring import VarContext


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, nargs="+", default=[3, 4, 5])
    args = ap.parse_args()
    ctx = VarContext(("y",))
    print(f"{'N':>2s} {'i':>2s} {'j':>2s} {'H(cut)':>7s} {'H(e_1)':>7s} {'oracle':>7s} {'degree':>6s}")
    for N in args.n:
        for i in range(1, N):
            for j in range(1, N):
                Y, X = an_factorisation(ctx, "y", N, i), an_factorisation(ctx, "y", N, j)
                out = hom_pipeline(Y, X)
                oracle, D = ext_oracle(Y, X)
                fmt = lambda t: f"{t[0]}|{t[1]}"
                print(f"{N:>2d} {i:>2d} {j:>2d} {fmt(out['cohomology']):>7s} {fmt(out['image']):>7s} "
                      f"{fmt(oracle):>7s} {D:>6d}")


if __name__ == "__main__":
    main()
