"""Recompute the oracle values and write tests/fixtures/oracle_values.json.

Run from the repository root:  python scripts/freeze_oracles.py
"""
import json
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

import oracles  # noqa: E402
from jacobi_tqft.relations import enumerate_diagrams, generate_relations  # noqa: E402
from jacobi_tqft.skeleton import EMPTY, Interval, MarkedSkeleton, Skeleton, chain_graph, intervals  # noqa: E402
from jacobi_tqft.textio import format_skeleton  # noqa: E402

DIM_CASES = [(EMPTY, n) for n in range(4)]
DIM_CASES += [(intervals(g), n) for g in (1, 2) for n in range(3)]
DIM_CASES += [(chain_graph(g), n) for g in (1, 2) for n in range(3)]
DIM_CASES += [(MarkedSkeleton(g), n) for g in (1, 2) for n in range(3)]


def oracle_dim(sk, n):
    ds = enumerate_diagrams(sk, n)
    rels = [r.vector for r in generate_relations(sk, n)]
    return len(ds), len(ds) - oracles.sympy_rank(ds, rels)


def main():
    out = {
        "closed_counts": {str(n): oracles.count_closed_diagrams(n) for n in (0, 1, 2)},
        "so3_theta": oracles.so3_theta(),
        "so3_theta_squared": oracles.so3_theta() ** 2,
        "so3_adjoint_chord": oracles.so3_adjoint_chord(),
        "circle_matchings": {str(n): oracles.double_factorial(2 * n - 1) for n in (1, 2, 3)},
        "dims": {},
    }
    for sk, n in DIM_CASES:
        count, dim = oracle_dim(sk, n)
        out["dims"][f"{format_skeleton(sk)}|{n}"] = {"count": count, "dim": dim}
        print(format_skeleton(sk), n, count, dim, flush=True)
    a, ra = Skeleton((Interval("a"),)), Skeleton((Interval("a", True),))
    signs = []
    for s in (1, -1):
        ok = all(
            oracles.reversal_preserves_relations(
                s,
                [r.vector for r in generate_relations(a, n) if r.kind == "STU"],
                [r.vector for r in generate_relations(ra, n)],
                enumerate_diagrams(ra, n),
            )
            for n in (1, 2)
        )
        if ok:
            signs.append(s)
    out["reversal_signs"] = signs
    path = ROOT / "tests" / "fixtures" / "oracle_values.json"
    path.write_text(json.dumps(out, indent=2, sort_keys=True) + "\n")
    print("wrote", path)


if __name__ == "__main__":
    main()
