"""Complex concepts instead of fresh individuals, and interpretation abstractions.

    python3 demos/03_complex_concepts.py
"""

from __future__ import annotations

from dlabduct import check_hypothesis, complex_abduce_elbot, flatten, parse_kb, parse_problem, print_kb, rollup
from dlabduct.abstraction import (
    AbstractionContext,
    InterpretationAbstraction,
    abstraction_to_abox,
    check_alc_conform,
    check_sigma_complete,
    to_json,
)
from dlabduct.generators import gen_double_counter
from dlabduct.syntax import Dialect


def flatten_and_back() -> None:
    print("== flatten / roll-up")
    x = parse_kb("(instance a (some r (and A (some s B))))")
    f = flatten(x)
    print("flattened:", print_kb(f.abox).strip().replace("\n", "  "))
    print("roots    :", f.root)
    print("rolled up:", print_kb(rollup(f)).strip())


def double_counter() -> None:
    print("\n== two-role counter without fresh individuals")
    p = gen_double_counter(1)
    h = complex_abduce_elbot(p)
    print(print_kb(h).strip())
    print("verified:", check_hypothesis(p, h).passed)


def abstraction() -> None:
    print("\n== an interpretation abstraction and its ABox")
    p = parse_problem("""
        :kb (implies (some r B) A) (implies (and A B) bot)
        :observation (instance a A)
        :sigma (concepts B) (roles r)
    """)
    ctx = AbstractionContext.for_problem(p)
    not_b, b = sorted(ctx.sigma_classes(), key=min)
    # a sits at v; every element at v has r-successors at w, all of them in B
    a = InterpretationAbstraction(
        ("v", "w"),
        {"v": not_b, "w": b},
        {"a": "v"},
        frozenset(("v", t, "r", "w") for t in not_b),
    )
    print("violations:", check_alc_conform(a) + check_sigma_complete(a, ctx))
    print(to_json(a, ctx))
    h = abstraction_to_abox(a, ctx)
    print(print_kb(h).strip())
    print("explains the observation:", check_hypothesis(p.replace(dialect=Dialect.ALC), h).passed)


if __name__ == "__main__":
    flatten_and_back()
    double_counter()
    abstraction()
