"""Print the quotient dimensions used throughout the tests as a TSV table.

    python scripts/dimension_table.py [--max-degree N]
"""
import argparse

from jacobi_tqft.relations import quotient_basis
from jacobi_tqft.skeleton import EMPTY, MarkedSkeleton, chain_graph, intervals
from jacobi_tqft.textio import format_skeleton


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-degree", type=int, default=2)
    args = ap.parse_args()
    rows = [(EMPTY, n) for n in range(args.max_degree + 2)]
    for g in (1, 2, 3):
        for make in (intervals, chain_graph, MarkedSkeleton):
            rows += [(make(g), n) for n in range(args.max_degree + 1)]
    print("skeleton\tdegree\tdiagrams\trank\tdim")
    for sk, n in rows:
        qb = quotient_basis(sk, n)
        print(f"{format_skeleton(sk)}\t{n}\t{qb.count}\t{qb.rank}\t{qb.dim}", flush=True)


if __name__ == "__main__":
    main()
