"""Size-minimal hypotheses and the families that make them hard.

    python3 demos/02_minimal_hypotheses.py
"""

from __future__ import annotations

import time

from dlabduct import SearchConfig, min_abduce, print_kb
from dlabduct.generators import TilingInstance, gen_cnf, gen_exp_counter, gen_tiling, tiling_to_hypothesis
from dlabduct.reasoner import check_hypothesis


def counter() -> None:
    print("== binary counter: the smallest hypothesis is a chain of 2^n - 1 role assertions")
    for n in (1, 2):
        start = time.monotonic()
        res = min_abduce(gen_exp_counter(n), SearchConfig.with_fresh(2**n))
        roles = len(res.hypothesis.role_assertions())
        print(f"n={n}: size {res.size}, {roles} role assertions, {res.nodes} search nodes, "
              f"{time.monotonic() - start:.2f} s")
        print("   " + print_kb(res.hypothesis).strip().replace("\n", "\n   "))


def cnf() -> None:
    print("\n== CNF reduction: a hypothesis of size 2m exists iff the formula is satisfiable")
    for clauses in ([[1, -2], [2]], [[1], [-1]], [[1, 2], [-1, 3], [-2, -3]], [[1, 2], [-1, 2], [-2, 3], [-3]]):
        res = min_abduce(gen_cnf(clauses))
        picked = "; ".join(print_kb(res.hypothesis).splitlines()) if res.found else ""
        print(f"{clauses}: {res.outcome.value}  {picked}")


def tiling() -> None:
    print("\n== tiling: a valid tiling becomes a grid ABox of size exactly k")
    t = TilingInstance(
        tiles=("w", "g"),
        initial=("w",),
        final="g",
        horizontal=frozenset({("w", "w"), ("w", "g"), ("g", "w"), ("g", "g")}),
        vertical=frozenset({("w", "w"), ("w", "g"), ("g", "g")}),
        n=1,
    )
    p, k = gen_tiling(t)
    h = tiling_to_hypothesis(t, {(1, 1): "w", (2, 1): "w", (1, 2): "w", (2, 2): "g"})
    rep = check_hypothesis(p, h)
    print(f"k = {k}, hypothesis size {rep.size}, passes: {rep.passed}")
    bad = tiling_to_hypothesis(t, {(1, 1): "w", (2, 1): "g", (1, 2): "g", (2, 2): "w"})
    print("a tiling that ends on the wrong tile passes:", check_hypothesis(p, bad).passed)


if __name__ == "__main__":
    counter()
    cnf()
    tiling()
