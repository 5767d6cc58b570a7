from __future__ import annotations

import itertools

import pytest

from dlabduct.generators import (
    TilingInstance,
    counter_sequence,
    gen_alc_tripleexp,
    gen_cnf,
    gen_double_counter,
    gen_exp_counter,
    gen_tiling,
    tiling_is_valid,
    tiling_k,
    tiling_to_hypothesis,
    witness_concept,
)
from dlabduct.reasoner import check_hypothesis
from dlabduct.syntax import (
    BOTTOM,
    CI,
    TOP,
    And,
    Atom,
    ConceptAssertion,
    Dialect,
    Forall,
    Not,
    RoleAssertion,
    Signature,
    conj,
    parse_problem,
    print_problem,
    some,
)

X1, Xb1, X2, Xb2 = Atom("X1"), Atom("Xb1"), Atom("X2"), Atom("Xb2")
A, B = Atom("A"), Atom("B")


def small_tiling(**kw) -> TilingInstance:
    base = dict(
        tiles=("w", "g"),
        initial=("w",),
        final="g",
        horizontal=frozenset(itertools.product("wg", repeat=2)),
        vertical=frozenset({("w", "g"), ("g", "g"), ("w", "w")}),
        n=1,
    )
    base.update(kw)
    return TilingInstance(**base)


VALID = {(1, 1): "w", (2, 1): "w", (1, 2): "w", (2, 2): "g"}


def test_counter_n1():
    p = gen_exp_counter(1)
    cis = set(p.kb.cis())
    assert {CI(B, Xb1), CI(some("r", Xb1), X1), CI(conj(X1, Xb1), BOTTOM), CI(X1, A)} <= cis
    assert CI(some("r", X1), Xb1) in cis
    assert len(cis) == 5
    assert p.sigma == Signature.of(["B"], ["r"])
    assert list(p.observation) == [ConceptAssertion(A, "a")]
    assert p.mode == "flat" and p.dialect is Dialect.ELbot


def test_counter_n2_increment_axiom():
    assert CI(some("r", conj(Xb2, X1)), X2) in set(gen_exp_counter(2).kb.cis())


def test_double_counter_n1():
    p = gen_double_counter(1)
    assert CI(conj(some("r", Xb1), some("s", Xb1)), X1) in set(p.kb.cis())
    assert list(p.observation) == [ConceptAssertion(A, "a")]
    assert p.sigma == Signature.of(["B"], ["r", "s"])
    assert p.mode == "complex-no-fresh"


def test_cnf_reduction_shape():
    p = gen_cnf([[1]])
    assert RoleAssertion("r", "c1", "p1") in p.kb and p.size_bound == 2
    assert RoleAssertion("s", "c1", "p1") in gen_cnf([[-1]]).kb
    assert p.sigma == Signature.of(["True", "False"])
    assert {str(a) for a in gen_cnf([[1, -2], [2]]).observation} == {
        "(instance p1 P)", "(instance p2 P)", "(instance c1 C)", "(instance c2 C)",
    }


def test_cnf_rejects_bad_input():
    with pytest.raises(ValueError):
        gen_cnf([])
    with pytest.raises(ValueError):
        gen_cnf([[0]])
    with pytest.raises(ValueError):
        gen_cnf([[3]], num_vars=2)


def test_tiling_k_formula():
    assert tiling_k(small_tiling()) == 2 * 3 + 6 * 2 + 2 == 20


def test_tiling_problem_shape():
    t = small_tiling()
    p, k = gen_tiling(t)
    assert k == 20 and p.size_bound == 20
    assert p.dialect is Dialect.ELbot
    assert p.sigma == Signature.of(["Start", "A_w", "A_g"], ["x", "y"])
    cis = set(p.kb.cis())
    # every forbidden vertical pair gets a disjointness axiom
    assert CI(conj(some("y", Atom("A_g")), Atom("A_w")), BOTTOM) in cis


def test_valid_tiling_hypothesis():
    t = small_tiling()
    assert tiling_is_valid(t, VALID)
    p, k = gen_tiling(t)
    h = tiling_to_hypothesis(t, VALID)
    rep = check_hypothesis(p, h)
    assert rep.passed and rep.size == k
    # the initial cell is contributed by the knowledge base
    assert ConceptAssertion(Atom("A_w"), "a_1_1") not in h


def test_invalid_tilings_fail():
    t = small_tiling()
    p, _ = gen_tiling(t)
    wrong_final = {**VALID, (2, 2): "w"}
    assert not tiling_is_valid(t, wrong_final)
    assert not check_hypothesis(p, tiling_to_hypothesis(t, wrong_final)).passed
    bad_vertical = {(1, 1): "g", (2, 1): "w", (1, 2): "w", (2, 2): "g"}
    t2 = small_tiling(initial=())
    p2, _ = gen_tiling(t2)
    assert not tiling_is_valid(t2, bad_vertical)
    assert not check_hypothesis(p2, tiling_to_hypothesis(t2, bad_vertical)).a1_consistent


def test_tiling_domain_errors():
    t = small_tiling()
    with pytest.raises(ValueError):
        tiling_to_hypothesis(t, {(1, 1): "w"})
    with pytest.raises(ValueError):
        tiling_to_hypothesis(t, {**VALID, (1, 1): "z"})
    with pytest.raises(ValueError):
        small_tiling(final="z")


def test_alc_family_shape():
    p = gen_alc_tripleexp(1)
    assert CI(TOP, conj(some("r", TOP), some("s", TOP))) in set(p.kb.cis())
    assert p.sigma == Signature.of(["Bit", "B"], ["r", "s"])
    assert [str(a) for a in p.observation] == ["(instance a Goal)"]
    assert p.dialect is Dialect.ALC


def flat_conjuncts(c):
    if isinstance(c, And):
        return [d for a in c.args for d in flat_conjuncts(a)]
    return [c]


def test_counter_sequence_and_witness():
    assert counter_sequence(1) == "00011011"
    c = witness_concept(1)
    depth = 0
    while True:
        foralls = [a for a in flat_conjuncts(c) if isinstance(a, Forall)]
        if not foralls:
            break
        depth += 1
        c = foralls[0].filler
    assert depth == 7
    # innermost: B together with the first bit of the sequence, which is 0
    assert c == conj(B, Not(Atom("Bit")))


@pytest.mark.parametrize(
    "make",
    [
        lambda: gen_exp_counter(3),
        lambda: gen_double_counter(2),
        lambda: gen_cnf([[1, -2], [2, 3]]),
        lambda: gen_tiling(small_tiling())[0],
        lambda: gen_alc_tripleexp(1),
    ],
)
def test_generators_are_deterministic_and_roundtrip(make):
    text = print_problem(make())
    assert text == print_problem(make())
    assert print_problem(parse_problem(text)) == text
