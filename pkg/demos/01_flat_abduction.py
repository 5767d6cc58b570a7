"""Flat abduction on two tiny problems.

A KB says that anything with an r-successor in B is an A.  We observe A(a)
and may only use B and r in the explanation.

    python3 demos/01_flat_abduction.py
"""

from __future__ import annotations

from dlabduct import check_hypothesis, flat_abduce, parse_problem, print_kb, trivial_hypothesis, types_for

PLAIN = """
:kb (implies (some r B) A)
:observation (instance a A)
:sigma (concepts B) (roles r)
"""

# the same problem, but A and B may not overlap
DISJOINT = PLAIN.replace(":observation", "(implies (and A B) bot)\n:observation")


def show(title: str, text: str) -> None:
    print(f"\n== {title}")
    print(text.rstrip())


def main() -> None:
    el = parse_problem(PLAIN)
    print("dialect:", el.dialect.name)

    # In EL nothing is inconsistent, so the biggest Σ-ABox over the known
    # individuals decides the problem.
    triv = trivial_hypothesis(el)
    show("trivial hypothesis", print_kb(triv))
    print("entails the observation:", check_hypothesis(el, triv).a2_entails)
    show("flat_abduce", print_kb(flat_abduce(el)))

    bot = parse_problem(DISJOINT)
    print("\ndialect:", bot.dialect.name)
    rep = check_hypothesis(bot, triv)
    print("trivial hypothesis consistent now?", rep.a1_consistent)

    # The type set of K ∪ Φ: every consistent explanation is built from it.
    T = types_for(bot.kb, bot.observation)
    show("types", "\n".join("  " + " ".join(str(c) for c in T.concepts(i)) for i in range(len(T))))

    h = flat_abduce(bot)
    show(f"flat_abduce ({len(h)} assertions, fresh individuals per type)", print_kb(h))
    print("verified:", check_hypothesis(bot, h).passed)


if __name__ == "__main__":
    main()
