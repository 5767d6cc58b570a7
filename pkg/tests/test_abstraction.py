from __future__ import annotations

import random

import pytest

from dlabduct.abstraction import (
    AbstractionContext,
    InterpretationAbstraction,
    abstraction_to_abox,
    abstracts,
    check_alc_conform,
    check_sigma_complete,
    depth_bound,
    from_json,
    search_abstraction,
    single_node_abstraction,
    to_json,
)
from dlabduct.reasoner import check_hypothesis
from dlabduct.semantics import enumerate_interpretations, is_model, model_from_assignment
from dlabduct.syntax import (
    TOP,
    Atom,
    ConceptAssertion,
    Dialect,
    Exists,
    KnowledgeBase,
    Not,
    RoleAssertion,
    Signature,
    conj,
    parse_kb,
    some,
)
from dlabduct.typecore import ResourceError

from .abstraction_corpus import Entry, corpus, model_mismatches, shared_element_shapes
from .helpers import A, B, fix_bot

IA = InterpretationAbstraction
CORPUS = corpus()


def kinds(vs):
    return [v.kind for v in vs]


def bot_ctx():
    return AbstractionContext.for_problem(fix_bot())


def b_ctx(roles=("r",)):
    return AbstractionContext(KnowledgeBase(), KnowledgeBase(), Signature.of(["B"], roles))


def classes(ctx):
    return sorted(ctx.sigma_classes(), key=min)


# ---------------------------------------------------------------------------
# Well-formedness


def test_self_loop_needs_an_outgoing_companion():
    ctx = bot_ctx()
    lab = classes(ctx)[0]
    loop = {("v", t, "r", "v") for t in lab}
    alone = IA(("v",), {"v": lab}, {"a": "v"}, frozenset(loop))
    assert kinds(check_alc_conform(alone)) == ["internal-edge-without-outgoing"] * len(lab)
    companion = {("v", t, "r", "w") for t in lab}
    ok = IA(("v", "w"), {"v": lab, "w": lab}, {"a": "v"}, frozenset(loop | companion), frozenset({"w"}))
    assert check_alc_conform(ok) == []


def test_outgoing_cycle():
    a = IA(("v", "w"), {"v": frozenset({0}), "w": frozenset({0})}, {}, frozenset({("v", 0, "r", "w"), ("w", 0, "r", "v")}))
    (v,) = check_alc_conform(a)
    assert v.kind == "outgoing-cycle" and set(v.witness) == {"v", "w"}


def test_internal_edges_must_cover_every_label_type():
    a = IA(("v", "w"), {"v": frozenset({0, 1}), "w": frozenset({0})}, {"a": "v"}, frozenset({("v", 0, "r", "w")}))
    (v,) = check_alc_conform(a)
    assert v.kind == "internal-edge-not-uniform" and v.witness == ("v", 1, "r", "w")


def test_sigma_complete_examples():
    ctx = bot_ctx()
    full = classes(ctx)[0]
    assert check_sigma_complete(single_node_abstraction(ctx, "a", full), ctx) == []
    t, *rest = sorted(full)
    vs = check_sigma_complete(single_node_abstraction(ctx, "a", {t}), ctx)
    assert kinds(vs) == ["label-not-sigma-closed"] * len(rest)
    assert {v.witness[1] for v in vs} == set(rest)
    half = IA(("v", "w"), {"v": full, "w": classes(ctx)[1]}, {"a": "v"}, frozenset({("v", t, "r", "w")}))
    assert "edge-not-sigma-closed" in kinds(check_sigma_complete(half, ctx))


def test_checks_are_order_insensitive():
    rng = random.Random(3)
    for e in CORPUS:
        a = e.abstraction
        nodes = list(a.nodes)
        rng.shuffle(nodes)
        b = IA(tuple(nodes), dict(a.labels), dict(a.anchors), frozenset(a.edges), a.open_nodes)
        assert set(check_alc_conform(b)) == set(check_alc_conform(a))
        assert set(check_sigma_complete(b, e.ctx)) == set(check_sigma_complete(a, e.ctx))


def test_constructor_rejects_unknown_nodes():
    with pytest.raises(ValueError):
        IA(("v",), {"w": frozenset()})
    with pytest.raises(ValueError):
        IA(("v",), {}, {"a": "w"})
    with pytest.raises(ValueError):
        IA(("v", "v"), {})


# ---------------------------------------------------------------------------
# Abstracting finite interpretations


def test_open_node_with_every_type_abstracts_every_model():
    ctx = bot_ctx()
    a = single_node_abstraction(ctx, "a", range(len(ctx.T)), open_node=True)
    for n in (1, 2):
        for i in enumerate_interpretations(n, ["A", "B"], ["r"], ["a"]):
            if is_model(i, ctx.kb):
                assert abstracts(a, i, ctx) is not None


def test_type_outside_label_is_rejected():
    ctx = bot_ctx()
    only_b = single_node_abstraction(ctx, "a", classes(ctx)[1], open_node=True)
    for i in enumerate_interpretations(1, ["A", "B"], ["r"], ["a"]):
        if is_model(i, ctx.kb):
            assert (abstracts(only_b, i, ctx) is not None) == (i.concept_ext["B"] == 1)


def test_canonical_model_of_an_assignment_is_abstracted():
    ctx = bot_ctx()
    T = ctx.T
    t_a = T.find([A, some("r", B)])
    m = model_from_assignment({"a": t_a}, T, ctx.closure, ["r"])
    nodes = ["v"] + [f"w{t}" for t in range(len(T))]
    elem = {"v": t_a} | {f"w{t}": t for t in range(len(T))}
    cand = {t: T.succ_candidates(t, ctx.closure.roles()[0]) for t in range(len(T))}
    edges = frozenset(
        (x, elem[x], "r", y) for x in nodes for y in nodes if cand[elem[x]][elem[y]]
    )
    a = IA(tuple(nodes), {x: frozenset({elem[x]}) for x in nodes}, {"a": "v"}, edges)
    h = abstracts(a, m, ctx)
    assert h is not None and h[m.element("a")] == "v"


def test_missing_individual_is_rejected():
    ctx = bot_ctx()
    a = single_node_abstraction(ctx, "zz", range(len(ctx.T)), open_node=True)
    i = next(iter(enumerate_interpretations(1, ["A", "B"], ["r"], ["a"])))
    assert abstracts(a, i, ctx) is None


# ---------------------------------------------------------------------------
# Extraction


def test_single_node_extraction():
    ctx = b_ctx()
    tb = ctx.T.find([B])
    assert abstraction_to_abox(single_node_abstraction(ctx, "a", {tb}, open_node=True), ctx) == KnowledgeBase.of(
        [ConceptAssertion(B, "a")]
    )
    closed = abstraction_to_abox(single_node_abstraction(ctx, "a", {tb}), ctx)
    assert closed == KnowledgeBase.of([ConceptAssertion(conj(B, Not(some("r", TOP))), "a")])
    no_roles = b_ctx(roles=())
    tb2 = no_roles.T.find([B])
    assert abstraction_to_abox(single_node_abstraction(no_roles, "a", {tb2}), no_roles) == KnowledgeBase.of(
        [ConceptAssertion(B, "a")]
    )


def test_edge_between_internal_nodes_gives_role_assertion():
    ctx = b_ctx()
    tb = frozenset({ctx.T.find([B])})
    edges = frozenset({("v1", t, "r", "v2") for t in tb} | {("v1", t, "r", "w") for t in tb})
    a = IA(("v1", "v2", "w"), {"v1": tb, "v2": tb, "w": tb}, {"a": "v1", "b": "v2"}, edges, frozenset({"v2", "w"}))
    assert RoleAssertion("r", "a", "b") in abstraction_to_abox(a, ctx)


def test_outgoing_child_gives_existential():
    ctx = b_ctx()
    tb = frozenset({ctx.T.find([B])})
    a = IA(("v", "w"), {"v": tb, "w": tb}, {"a": "v"}, frozenset({("v", t, "r", "w") for t in tb}), frozenset({"w"}))
    (ax,) = abstraction_to_abox(a, ctx)
    assert some("r", B) in ax.concept.args
    assert depth_bound(a) == 2


def test_unnamed_internal_node_gets_a_fresh_individual():
    ctx = b_ctx()
    tb = frozenset({ctx.T.find([B])})
    a = IA(("v",), {"v": tb}, {}, frozenset(), frozenset({"v"}), frozenset({"v"}))
    (ax,) = abstraction_to_abox(a, ctx)
    assert ax.individual == "a_v"


def test_extraction_rejects_non_conform():
    ctx = bot_ctx()
    lab = classes(ctx)[0]
    bad = IA(("v",), {"v": lab}, {"a": "v"}, frozenset({("v", t, "r", "v") for t in lab}))
    with pytest.raises(ValueError):
        abstraction_to_abox(bad, ctx)


def test_json_roundtrip():
    for e in CORPUS[:7]:
        text = to_json(e.abstraction, e.ctx)
        assert from_json(text, e.ctx) == e.abstraction
        assert from_json(to_json(e.abstraction), e.ctx) == e.abstraction


def test_json_unknown_type_is_an_error():
    ctx = bot_ctx()
    with pytest.raises(ValueError):
        from_json({"nodes": [{"id": "v", "label": [["B", "A"]]}]}, ctx)
    with pytest.raises(ValueError):
        from_json({"nodes": [{"id": "v", "label": [99]}]}, ctx)


# ---------------------------------------------------------------------------
# Search


def test_search_finds_fix_bot_hypothesis():
    p = fix_bot()
    a, h = search_abstraction(p)
    assert not check_alc_conform(a) and not check_sigma_complete(a, AbstractionContext.for_problem(p))
    assert check_hypothesis(p.replace(dialect=Dialect.ALC), h).passed
    (ax,) = h
    assert isinstance(ax.concept.args[1], Exists) and ax.concept.args[1].role.name == "r"


def test_search_limits():
    p = fix_bot()
    with pytest.raises(ResourceError):
        search_abstraction(p.replace(observation=parse_kb("(instance a A) (instance b A) (instance c A)")))
    unreachable = p.replace(sigma=Signature.of(["A"]))
    with pytest.raises(ResourceError):
        search_abstraction(unreachable.replace(sigma=Signature.of([], ["r"])), budget=3)


# ---------------------------------------------------------------------------
# Model-set equivalence


@pytest.mark.parametrize("entry", CORPUS, ids=[e.name for e in CORPUS])
def test_corpus_entries_are_well_formed(entry: Entry):
    assert check_alc_conform(entry.abstraction) == []
    assert check_sigma_complete(entry.abstraction, entry.ctx) == []
    assert len(entry.ctx.closure) <= 5 and len(entry.abstraction.nodes) <= 3


@pytest.mark.parametrize("entry", CORPUS, ids=[e.name for e in CORPUS])
def test_extracted_abox_has_exactly_the_abstracted_models(entry: Entry):
    # domain ≤ 2 here; the acceptance suite repeats this with domain ≤ 3
    assert model_mismatches(entry, max_domain=2) == []


@pytest.mark.parametrize("name", ["self-loop-and-child", "open-child-like-root", "overlapping-children"])
def test_shared_element_shapes_accept_more_models_than_abstracted(name):
    # a single element standing for two nodes satisfies the ABox but has no
    # functional placement; the other direction still holds
    ctx = CORPUS[0].ctx
    entry = Entry(name, ctx, shared_element_shapes(ctx)[name], ("A", "B"))
    assert not check_alc_conform(entry.abstraction)
    bad = model_mismatches(entry, max_domain=3, stop_at=5)
    assert bad
    h = abstraction_to_abox(entry.abstraction, ctx)
    assert all(is_model(i, h) and abstracts(entry.abstraction, i, ctx) is None for i in bad)


def test_corpus_size():
    assert len(CORPUS) >= 20
    assert all(Atom("A") in e.ctx.closure.concepts for e in CORPUS)
