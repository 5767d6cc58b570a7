from __future__ import annotations

import itertools
import json
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dlabduct.semantics import enumerate_interpretations, is_model, model_from_assignment
from dlabduct.syntax import (
    BOTTOM,
    CI,
    TOP,
    And,
    Atom,
    Bottom,
    Exists,
    KnowledgeBase,
    Not,
    Role,
    conj,
    role,
    some,
)
from dlabduct.typecore import (
    ResourceError,
    build_closure,
    to_core,
    type_elimination,
    types_for,
)

from .helpers import A, B, fix_bot, fix_el
from .strategies import alc_concepts


def type_sets(T):
    return {frozenset(T.concepts(i)) for i in range(len(T))}


# ---------------------------------------------------------------------------
# A plain-Python elimination used as the oracle


def naive_types(closure, kb, rng=None):
    cs = closure.concepts
    cis = [(to_core(ax.lhs), to_core(ax.rhs)) for ax in kb.cis()]

    def coherent(t):
        for c in cs:
            if isinstance(c, Bottom) and c in t:
                return False
            if isinstance(c, And) and (c in t) != all(a in t for a in c.args):
                return False
            if isinstance(c, Not) and (c in t) == (c.arg in t):
                return False
        return all(rhs in t for lhs, rhs in cis if lhs in t)

    rest = cs[1:]
    alive = []
    for bits in itertools.product((0, 1), repeat=len(rest)):
        t = frozenset([TOP] + [c for c, b in zip(rest, bits) if b])
        if coherent(t):
            alive.append(t)

    def succ(t, t2, r):
        for c in cs:
            if isinstance(c, Exists) and c.role == r and c not in t and c.filler in t2:
                return False
            if isinstance(c, Exists) and c.role == r.inverse() and c not in t2 and c.filler in t:
                return False
        return True

    changed = True
    while changed:
        changed = False
        order = list(alive)
        if rng is not None:
            rng.shuffle(order)
        for t in order:
            ok = all(
                any(c.filler in t2 and succ(t, t2, c.role) for t2 in alive)
                for c in t
                if isinstance(c, Exists)
            )
            if not ok:
                alive.remove(t)
                changed = True
                break
    return set(alive)


# ---------------------------------------------------------------------------


def test_fix_bot_closure():
    cl = build_closure(fix_bot().kb, fix_bot().observation)
    assert cl.concepts[0] == TOP
    assert set(cl.concepts) == {TOP, A, B, some("r", B), conj(A, B), BOTTOM}
    assert len(cl) == 6


def test_empty_closure():
    assert build_closure().concepts == [TOP]


def test_closure_extra():
    p = fix_el()
    assert conj(A, B) in build_closure(p.kb, p.observation, [conj(A, B)])
    assert conj(A, B) not in build_closure(p.kb, p.observation)


def test_fix_bot_types():
    p = fix_bot()
    T = types_for(p.kb, p.observation)
    assert type_sets(T) == {
        frozenset({TOP}),
        frozenset({TOP, A}),
        frozenset({TOP, B}),
        frozenset({TOP, A, some("r", B)}),
    }


def test_unsatisfiable_names_removed():
    kb = KnowledgeBase.of([CI(A, B), CI(B, BOTTOM)])
    assert type_sets(types_for(kb)) == {frozenset({TOP})}


def test_empty_kb_types():
    T = type_elimination(build_closure(extra=[A]), KnowledgeBase())
    assert type_sets(T) == {frozenset({TOP}), frozenset({TOP, A})}


def test_succ_candidates_fix_bot():
    p = fix_bot()
    T = types_for(p.kb, p.observation)
    r = role("r")
    full = T.find([A, some("r", B)])
    assert T.succ_candidates(full, r).all()
    only_a = T.find([A])
    allowed = {i for i in range(len(T)) if T.succ_candidates(only_a, r)[i]}
    assert allowed == {i for i in range(len(T)) if not T.contains(i, B)}
    assert len(allowed) == 3


def test_succ_candidates_inverse_clause():
    inv = Role("r", True)
    kb = KnowledgeBase.of([CI(some(inv, A), B)])
    T = types_for(kb)
    r = role("r")
    for t in range(len(T)):
        for t2 in range(len(T)):
            if T.contains(t, A) and not T.contains(t2, some(inv, A)):
                assert not T.succ_pair(t, r, t2)


def test_resource_cap():
    kb = KnowledgeBase.of([CI(Atom(f"A{i}"), Atom(f"B{i}")) for i in range(12)])
    with pytest.raises(ResourceError):
        types_for(kb, max_candidates=1000)


def test_json_dump():
    p = fix_bot()
    data = json.loads(types_for(p.kb, p.observation).to_json())
    assert data[0] == ["top"] and len(data) == 4


def random_small_kb(rng, inverse=False):
    names = ["A", "B"]
    rr = [Role("r"), Role("r", True)] if inverse else [Role("r")]

    def concept(d):
        k = rng.random()
        if d and k < 0.3:
            return Exists(rng.choice(rr), concept(d - 1))
        if k < 0.45:
            return Not(concept(d))
        if k < 0.55:
            return BOTTOM
        return Atom(rng.choice(names))

    return KnowledgeBase.of([CI(concept(1), concept(1)) for _ in range(rng.randint(1, 2))])


@settings(max_examples=250, deadline=None)
@given(st.integers(0, 10**6), st.booleans())
def test_matches_naive_elimination(seed, inverse):
    rng = random.Random(seed)
    kb = random_small_kb(rng, inverse)
    closure = build_closure(kb)
    if len(closure) > 9:
        return
    T = type_elimination(closure, kb)
    assert type_sets(T) == naive_types(closure, kb, rng)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6))
def test_types_realized_in_canonical_model(seed):
    # every surviving type is exactly the type of its element in the type model
    rng = random.Random(seed)
    kb = random_small_kb(rng)
    closure = build_closure(kb)
    if len(closure) > 9:
        return
    T = type_elimination(closure, kb)
    m = model_from_assignment({}, T, closure, ["r"])
    assert is_model(m, kb)
    for d in range(len(T)):
        realized = frozenset(c for c in closure.concepts if m.mask(c) >> d & 1)
        assert realized == frozenset(T.concepts(d))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_types_of_small_models_survive(seed):
    # soundness: a type realized in any model of the CIs is in T
    rng = random.Random(seed)
    kb = random_small_kb(rng)
    closure = build_closure(kb, extra=[A, B])
    if len(closure) > 7:
        return
    T = type_elimination(closure, kb)
    known = type_sets(T)
    for n in (1, 2):
        for i in enumerate_interpretations(n, ["A", "B"], ["r"]):
            if not is_model(i, kb):
                continue
            for d in range(n):
                assert frozenset(c for c in closure.concepts if i.mask(c) >> d & 1) in known


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), alc_concepts(max_leaves=3), alc_concepts(max_leaves=3))
def test_adding_a_ci_never_grows_t(seed, lhs, rhs):
    rng = random.Random(seed)
    kb = random_small_kb(rng)
    extra = CI(lhs, rhs)
    closure = build_closure(kb | KnowledgeBase.of([extra]))
    if len(closure) > 12:
        return
    small = type_sets(type_elimination(closure, kb | KnowledgeBase.of([extra])))
    big = type_sets(type_elimination(closure, kb))
    assert small <= big
