from __future__ import annotations

import random

from hypothesis import given, settings
from hypothesis import strategies as st

from dlabduct.flat import (
    FreshNamer,
    Selector,
    build_selector_hypothesis,
    flat_abduce,
    quotient_by_types,
    selector_compatible,
    trivial_hypothesis,
)
from dlabduct.minsize import Outcome, SearchConfig, min_abduce
from dlabduct.reasoner import check_hypothesis
from dlabduct.syntax import (
    ConceptAssertion,
    KnowledgeBase,
    RoleAssertion,
    Signature,
    individuals_of,
    some,
)
from dlabduct.typecore import build_closure, type_elimination, types_for

from .helpers import A, B, fix_bot, fix_el, random_el_problem


def kb_of(*axioms):
    return KnowledgeBase.of(axioms)


def fix_bot_types():
    p = fix_bot()
    return p, types_for(p.kb, p.observation)


def test_trivial_hypothesis():
    assert trivial_hypothesis(fix_el()) == kb_of(ConceptAssertion(B, "a"), RoleAssertion("r", "a", "a"))
    assert trivial_hypothesis(fix_el().replace(sigma=Signature())) == KnowledgeBase()
    bot = fix_bot()
    h = trivial_hypothesis(bot)
    assert h == trivial_hypothesis(fix_el())
    assert not check_hypothesis(bot, h).a1_consistent


def test_selector_compatible():
    p, T = fix_bot_types()
    kb = kb_of(ConceptAssertion(B, "a"))
    assert not selector_compatible({"a": T.find([A])}, kb, T)
    assert all(selector_compatible({"a": t}, KnowledgeBase(), T) for t in range(len(T)))
    assert selector_compatible(Selector({"a": T.find([A, some("r", B)])}), p.kb, T)


def test_build_selector_hypothesis_fix_bot():
    p, T = fix_bot_types()
    s = {"a": T.find([A, some("r", B)])}
    namer = FreshNamer(["a"])
    h = build_selector_hypothesis(s, T, p.sigma, namer)
    bt = namer.type_name(T.find([B]))
    assert ConceptAssertion(B, bt) in h
    assert RoleAssertion("r", "a", bt) in h
    assert check_hypothesis(p, h).passed


def test_build_selector_hypothesis_empty_sigma():
    p, T = fix_bot_types()
    assert build_selector_hypothesis({"a": 0}, T, Signature()) == KnowledgeBase()


def test_selector_self_loop_rule():
    p = fix_el()
    T = types_for(p.kb, p.observation)
    for t in range(len(T)):
        h = build_selector_hypothesis({"a": t}, T, p.sigma)
        loop = RoleAssertion("r", "a", "a") in h
        assert loop == bool(T.succ_candidates(t, T.closure.roles()[0])[t])


def test_fresh_names_avoid_existing():
    namer = FreshNamer(["b_t0", "a"])
    assert namer.type_name(0) == "_b_t0"
    assert namer.type_name(0) == "_b_t0"
    assert namer.type_name(1) == "b_t1"


def test_flat_abduce_examples():
    assert flat_abduce(fix_el()) == kb_of(ConceptAssertion(B, "a"), RoleAssertion("r", "a", "a"))
    bot = fix_bot()
    h = flat_abduce(bot)
    assert h is not None and check_hypothesis(bot, h).passed
    fresh = [x for x in individuals_of(h) if x != "a"]
    assert any(
        RoleAssertion("r", "a", b) in h and ConceptAssertion(B, b) in h for b in fresh
    )
    assert flat_abduce(fix_el().replace(sigma=Signature.of([], ["r"]))) is None


def test_flat_abduce_jobs_do_not_change_the_result():
    bot = fix_bot()
    assert flat_abduce(bot, jobs=2) == flat_abduce(bot, jobs=1)


def test_quotient_merges_equal_types():
    bot = fix_bot()
    h0 = kb_of(
        RoleAssertion("r", "a", "b1"), ConceptAssertion(B, "b1"),
        RoleAssertion("r", "a", "b2"), ConceptAssertion(B, "b2"),
    )
    q = quotient_by_types(h0, bot)
    assert len(individuals_of(q)) == 2 and len(q) == 2
    assert check_hypothesis(bot, q).passed


def test_quotient_identity_without_fresh():
    bot = fix_bot()
    h0 = kb_of(ConceptAssertion(B, "a"))
    assert quotient_by_types(h0, bot) == h0


def test_quotient_disconnected():
    bot = fix_bot()
    q = quotient_by_types(kb_of(ConceptAssertion(B, "b1")), bot)
    assert len(q) == 1
    (ax,) = q
    assert ax.concept == B and ax.individual.startswith("b_t")


# ---------------------------------------------------------------------------
# Properties


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**7))
def test_claim1_selector_hypotheses_are_consistent(seed):
    rng = random.Random(seed)
    p = random_el_problem(rng, bottom=True)
    closure = build_closure(p.kb, p.observation)
    if len(closure) > 8:
        return
    T = type_elimination(closure, KnowledgeBase.of(p.kb.cis()))
    inds = p.individuals()
    for _ in range(5):
        if not len(T):
            return
        s = {a: rng.randrange(len(T)) for a in inds}
        if not selector_compatible(s, p.kb, T):
            continue
        h = build_selector_hypothesis(s, T, p.sigma, FreshNamer(inds), inds)
        assert check_hypothesis(p, h).a1_consistent


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**7))
def test_flat_abduce_complete_against_subset_search(seed):
    # ≤ 2 individuals, small closure: flat_abduce finds a hypothesis iff
    # enumerating flat Σ-ABoxes with |ind| + |T| individuals does
    rng = random.Random(seed)
    p = random_el_problem(rng, bottom=True, max_axioms=3)
    if len(p.individuals()) > 2:
        return
    closure = build_closure(p.kb, p.observation)
    if len(closure) > 5:
        return
    T = type_elimination(closure, KnowledgeBase.of(p.kb.cis()))
    h = flat_abduce(p)
    if h is not None:
        assert check_hypothesis(p, h).passed
    cfg = SearchConfig.with_fresh(len(T), node_budget=20_000, bound=24)
    res = min_abduce(p, cfg)
    if res.outcome is Outcome.UNKNOWN:
        return
    assert (h is not None) == res.found


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**7))
def test_quotient_preserves_verdicts(seed):
    rng = random.Random(seed)
    p = random_el_problem(rng, bottom=True, max_axioms=4)
    h0 = flat_abduce(p)
    if h0 is None:
        return
    rep0 = check_hypothesis(p, h0)
    q = quotient_by_types(h0, p)
    rep1 = check_hypothesis(p, q)
    assert (rep0.a1_consistent, rep0.a2_entails, rep0.a3_in_signature) == (
        rep1.a1_consistent, rep1.a2_entails, rep1.a3_in_signature,
    )
    T = types_for(p.kb, p.observation)
    assert len(individuals_of(p.kb | p.observation | q)) <= len(p.individuals()) + len(T)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**7))
def test_flat_abduce_is_deterministic(seed):
    p = random_el_problem(random.Random(seed), bottom=True)
    assert flat_abduce(p) == flat_abduce(p)
