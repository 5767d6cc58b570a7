"""Fixtures, seeded random generators and brute-force oracles shared by the tests."""

from __future__ import annotations

import itertools
import random
from typing import Iterable, Sequence

from dlabduct.reasoner import TypeEngine, el_entails
from dlabduct.semantics import FiniteInterpretation, enumerate_interpretations, is_model
from dlabduct.syntax import (
    BOTTOM,
    CI,
    AbductionProblem,
    Atom,
    ConceptAssertion,
    KnowledgeBase,
    RoleAssertion,
    Signature,
    conj,
    parse_problem,
    signature_of,
    some,
)
from dlabduct.typecore import build_closure

FIX_EL_TEXT = """\
# FIX-EL
:kb
(implies (some r B) A)
:observation
(instance a A)
:sigma (concepts B) (roles r)
"""

FIX_BOT_TEXT = """\
# FIX-BOT
:kb
(implies (some r B) A)
(implies (and A B) bot)
:observation
(instance a A)
:sigma (concepts B) (roles r)
"""


def fix_el() -> AbductionProblem:
    return parse_problem(FIX_EL_TEXT)


def fix_bot() -> AbductionProblem:
    return parse_problem(FIX_BOT_TEXT)


A, B, C = Atom("A"), Atom("B"), Atom("C")


# ---------------------------------------------------------------------------
# Random EL / ELbot material


def random_el_concept(
    rng: random.Random, names: Sequence[str], roles: Sequence[str], depth: int, leaves: int = 3
):
    """A random EL concept of role depth ≤ depth with at most ``leaves`` atoms."""
    roll = rng.random()
    if depth > 0 and roll < 0.35:
        return some(rng.choice(roles), random_el_concept(rng, names, roles, depth - 1, leaves))
    if leaves > 1 and roll < 0.55:
        left = rng.randint(1, leaves - 1)
        return conj(
            random_el_concept(rng, names, roles, depth, left),
            random_el_concept(rng, names, roles, depth, leaves - left),
        )
    return Atom(rng.choice(names))


def random_tbox(
    rng: random.Random,
    n_axioms: int,
    names: Sequence[str] = ("A", "B", "C"),
    roles: Sequence[str] = ("r", "s"),
    depth: int = 1,
    bottom: bool = False,
) -> list[CI]:
    out = []
    for _ in range(n_axioms):
        lhs = random_el_concept(rng, names, roles, depth)
        if bottom and rng.random() < 0.25:
            rhs = BOTTOM
        else:
            rhs = random_el_concept(rng, names, roles, depth)
        out.append(CI(lhs, rhs))
    return out


def random_flat_abox(
    rng: random.Random,
    n: int,
    individuals: Sequence[str],
    names: Sequence[str] = ("A", "B", "C"),
    roles: Sequence[str] = ("r", "s"),
) -> list:
    out = []
    for _ in range(n):
        if rng.random() < 0.5:
            out.append(ConceptAssertion(Atom(rng.choice(names)), rng.choice(individuals)))
        else:
            out.append(RoleAssertion(rng.choice(roles), rng.choice(individuals), rng.choice(individuals)))
    return out


def random_el_problem(rng: random.Random, bottom: bool = False, max_axioms: int = 6) -> AbductionProblem:
    """≤ max_axioms axioms in total, ≤ 3 individuals, random Σ."""
    inds = ["a", "b", "c"][: rng.randint(1, 3)]
    n_abox = rng.randint(0, 2)
    n_tbox = rng.randint(1, max(1, max_axioms - n_abox))
    tbox = random_tbox(rng, n_tbox, bottom=bottom)
    abox = random_flat_abox(rng, n_abox, inds)
    goal = ConceptAssertion(Atom(rng.choice("ABC")), rng.choice(inds))
    sigma = Signature.of(
        [n for n in "ABC" if rng.random() < 0.5], [r for r in "rs" if rng.random() < 0.6]
    )
    return AbductionProblem(KnowledgeBase.of(tbox + abox), KnowledgeBase.of([goal]), sigma)


# ---------------------------------------------------------------------------
# Brute-force oracles


def countermodel(kb: KnowledgeBase, goal, max_domain: int = 2) -> FiniteInterpretation | None:
    """A model of kb of domain size ≤ max_domain violating goal, if any."""
    sig = signature_of(kb | KnowledgeBase.of([goal]))
    inds = sorted(_individuals(list(kb) + [goal]))
    for n in range(1, max_domain + 1):
        for i in enumerate_interpretations(n, sig.concept_names, sig.role_names, inds):
            if is_model(i, kb) and not i.satisfies(goal):
                return i
    return None


def has_small_model(kb: KnowledgeBase, max_domain: int = 2) -> bool:
    sig = signature_of(kb)
    inds = sorted(_individuals(kb))
    for n in range(1, max_domain + 1):
        for i in enumerate_interpretations(n, sig.concept_names, sig.role_names, inds):
            if is_model(i, kb):
                return True
    return False


def _individuals(axioms: Iterable) -> set[str]:
    out = set()
    for ax in axioms:
        if isinstance(ax, ConceptAssertion):
            out.add(ax.individual)
        elif isinstance(ax, RoleAssertion):
            out.update((ax.subject, ax.object))
    return out


def cnf_satisfiable(clauses: Sequence[Sequence[int]], num_vars: int) -> bool:
    for bits in itertools.product((False, True), repeat=num_vars):
        if all(any(bits[abs(l) - 1] == (l > 0) for l in c) for c in clauses):
            return True
    return False


def all_small_cnfs(max_vars: int = 3, max_clauses: int = 3) -> list[tuple[tuple[int, ...], ...]]:
    """Every CNF over p1..pm (m ≤ max_vars, all variables used) with at most
    max_clauses clauses, deduplicated as sets of sets of literals."""
    seen = set()
    out = []
    for m in range(1, max_vars + 1):
        lits = [v for i in range(1, m + 1) for v in (i, -i)]
        clauses = [
            c for k in range(1, len(lits) + 1) for c in itertools.combinations(lits, k)
            if not any(-l in c for l in c)
        ]
        for k in range(1, max_clauses + 1):
            for combo in itertools.combinations(clauses, k):
                used = {abs(l) for c in combo for l in c}
                if used != set(range(1, m + 1)):
                    continue
                key = frozenset(frozenset(c) for c in combo)
                if key in seen:
                    continue
                seen.add(key)
                out.append(combo)
    return out


# ---------------------------------------------------------------------------
# Shared random inputs


def random_elbot_query(rng: random.Random, max_closure: int = 10):
    """A random ELbot KB with assertions and a goal, |closure| ≤ max_closure."""
    while True:
        tbox = random_tbox(rng, rng.randint(1, 3), bottom=True)
        abox = random_flat_abox(rng, rng.randint(1, 3), ["a", "b"])
        goal = ConceptAssertion(random_el_concept(rng, "ABC", "rs", 1, 2), rng.choice("ab"))
        kb = KnowledgeBase.of(tbox + abox)
        if len(build_closure(kb, KnowledgeBase.of([goal]))) <= max_closure:
            return kb, goal


def engines_agree(kb, goal) -> tuple[bool, bool]:
    te = TypeEngine(kb, KnowledgeBase.of([goal]))
    return el_entails(kb, goal), te.entails(kb.assertions(), goal)


def random_complex_abox(rng: random.Random, depth: int = 3) -> KnowledgeBase:
    inds = ["a", "b"]
    out = [
        ConceptAssertion(random_el_concept(rng, "ABC", "rs", depth, 4), rng.choice(inds))
        for _ in range(rng.randint(1, 3))
    ]
    out += random_flat_abox(rng, rng.randint(0, 2), inds)
    return KnowledgeBase.of(out)
