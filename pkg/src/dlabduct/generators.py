"""Deterministic families of abduction problems.

* ``gen_exp_counter``: an n-bit counter over r-chains; every flat hypothesis
  needs 2^n - 1 role assertions.
* ``gen_double_counter``: the same counter advanced only when both an r- and
  an s-successor agree, so hypotheses without fresh individuals are trees of
  depth 2^n - 1.
* ``gen_cnf``: propositional satisfiability as size-bounded EL abduction.
* ``gen_tiling``: exponential grid tilings as size-bounded ELbot abduction.
* ``gen_alc_tripleexp``: an ALC knowledge base whose hypotheses spell out a
  2^n-bit counter along every r/s path.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

from .syntax import (
    BOTTOM,
    TOP,
    AbductionProblem,
    Atom,
    CI,
    Concept,
    ConceptAssertion,
    Dialect,
    KnowledgeBase,
    Not,
    RoleAssertion,
    Signature,
    atom,
    conj,
    disj,
    only,
    some,
)


def _bits(prefix: str, n: int) -> tuple[list[Atom], list[Atom]]:
    """Positive and negative bit names X1..Xn and Xb1..Xbn."""
    return [atom(f"{prefix}{i}") for i in range(1, n + 1)], [atom(f"{prefix}b{i}") for i in range(1, n + 1)]


def _counter_axioms(prefix: str, n: int, roles: Sequence[str]) -> list[CI]:
    """Increment axioms: a counter value is one more than that of its successors.

    With several roles the left-hand side requires a matching successor for
    each role.
    """
    pos, neg = _bits(prefix, n)

    def via(c: Concept) -> Concept:
        return conj(*(some(r, c) for r in roles))

    out: list[CI] = []
    for i in range(n):
        lower = pos[:i][::-1]
        out.append(CI(via(conj(neg[i], *lower)), pos[i]))
        out.append(CI(via(conj(pos[i], *lower)), neg[i]))
    for i in range(n):
        for j in range(i):
            out.append(CI(via(conj(neg[i], neg[j])), neg[i]))
            out.append(CI(via(conj(pos[i], neg[j])), pos[i]))
    for i in range(n):
        out.append(CI(conj(pos[i], neg[i]), BOTTOM))
    return out


def _counter_problem(n: int, roles: Sequence[str], mode: str) -> AbductionProblem:
    if n < 1:
        raise ValueError("n must be at least 1")
    pos, neg = _bits("X", n)
    B, A = atom("B"), atom("A")
    axioms: list[CI] = [CI(B, conj(*neg))]
    axioms += _counter_axioms("X", n, roles)
    axioms.append(CI(conj(*pos), A))
    return AbductionProblem(
        KnowledgeBase.of(axioms),
        KnowledgeBase.of([ConceptAssertion(A, "a")]),
        Signature.of(["B"], roles),
        None,
        mode,
    )


def gen_exp_counter(n: int) -> AbductionProblem:
    return _counter_problem(n, ["r"], "flat")


def gen_double_counter(n: int) -> AbductionProblem:
    return _counter_problem(n, ["r", "s"], "complex-no-fresh")


# ---------------------------------------------------------------------------
# CNF


def gen_cnf(clauses: Sequence[Sequence[int]], num_vars: int | None = None) -> AbductionProblem:
    """Clauses are lists of non-zero integers, -i standing for the negation of p_i."""
    if not clauses or any(not c for c in clauses):
        raise ValueError("need a non-empty list of non-empty clauses")
    m = num_vars if num_vars is not None else max(abs(lit) for c in clauses for lit in c)
    if any(abs(lit) > m or lit == 0 for c in clauses for lit in c):
        raise ValueError("literal outside the variable range")
    true, false, P, C = atom("True"), atom("False"), atom("P"), atom("C")
    axioms: list = [
        CI(true, P),
        CI(false, P),
        CI(some("r", true), C),
        CI(some("s", false), C),
    ]
    for j, clause in enumerate(clauses, start=1):
        for lit in dict.fromkeys(clause):
            axioms.append(RoleAssertion("r" if lit > 0 else "s", f"c{j}", f"p{abs(lit)}"))
    obs = [ConceptAssertion(P, f"p{i}") for i in range(1, m + 1)]
    obs += [ConceptAssertion(C, f"c{j}") for j in range(1, len(clauses) + 1)]
    return AbductionProblem(
        KnowledgeBase.of(axioms),
        KnowledgeBase.of(obs),
        Signature.of(["True", "False"], []),
        2 * m,
        "flat",
    )


# ---------------------------------------------------------------------------
# Tilings


@dataclass(frozen=True)
class TilingInstance:
    tiles: tuple[str, ...]
    initial: tuple[str, ...]
    final: str
    horizontal: frozenset[tuple[str, str]]
    vertical: frozenset[tuple[str, str]]
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be at least 1")
        if self.final not in self.tiles or any(t not in self.tiles for t in self.initial):
            raise ValueError("initial and final tiles must be tiles")
        if len(self.initial) > 1 << self.n:
            raise ValueError("the initial row is longer than the grid")

    @property
    def width(self) -> int:
        return 1 << self.n


def _tile(t: str) -> Atom:
    return atom(f"A_{t}")


def tiling_k(t: TilingInstance) -> int:
    m = len(t.initial)
    return 2 * (2 ** (2 * t.n) - m) + 3 * 2 * (2 ** (2 * t.n) - 2**t.n) + 2


def gen_tiling(t: TilingInstance) -> tuple[AbductionProblem, int]:
    """Size-bounded ELbot abduction problem encoding the exponential tiling t.

    Coordinates grow towards the observed individual: x and y point from a
    grid cell to its left and lower neighbour.  Besides the increment
    axioms, each counter is carried over along the other direction, and the
    initial row is propagated along x-predecessors.
    """
    n = t.n
    start, end, B = atom("Start"), atom("End"), atom("B")
    xs, xbs = _bits("X", n)
    ys, ybs = _bits("Y", n)
    axioms: list[CI] = []
    for tile in t.tiles:
        axioms.append(CI(conj(start, _tile(tile)), conj(*xbs, *ybs)))
    axioms.append(CI(conj(*xs, *ys, B, _tile(t.final)), end))
    axioms += _counter_axioms("X", n, ["x"])
    axioms += _counter_axioms("Y", n, ["y"])
    for i in range(n):
        axioms.append(CI(some("y", xs[i]), xs[i]))
        axioms.append(CI(some("y", xbs[i]), xbs[i]))
        axioms.append(CI(some("x", ys[i]), ys[i]))
        axioms.append(CI(some("x", ybs[i]), ybs[i]))
    for left in t.tiles:
        for right in t.tiles:
            if (left, right) not in t.horizontal:
                axioms.append(CI(conj(some("x", _tile(left)), _tile(right)), BOTTOM))
    for below in t.tiles:
        for above in t.tiles:
            if (below, above) not in t.vertical:
                axioms.append(CI(conj(some("y", _tile(below)), _tile(above)), BOTTOM))
    m = len(t.initial)
    if m:
        marks = [atom(f"I{i}") for i in range(1, m + 1)]
        axioms.append(CI(start, marks[0]))
        for i in range(m - 1):
            axioms.append(CI(some("x", marks[i]), marks[i + 1]))
        for i in range(m):
            axioms.append(CI(marks[i], _tile(t.initial[i])))
    axioms.append(CI(start, B))
    for tile in t.tiles:
        axioms.append(CI(conj(*xbs, some("y", conj(_tile(tile), B))), B))
    for tile in t.tiles:
        axioms.append(CI(conj(*ybs, some("x", conj(_tile(tile), B))), B))
    for t1 in t.tiles:
        for t2 in t.tiles:
            axioms.append(CI(conj(some("x", conj(_tile(t1), B)), some("y", conj(_tile(t2), B))), B))
    k = tiling_k(t)
    problem = AbductionProblem(
        KnowledgeBase.of(axioms),
        KnowledgeBase.of([ConceptAssertion(end, "a")]),
        Signature.of(["Start"] + [f"A_{tile}" for tile in t.tiles], ["x", "y"]),
        k,
        "flat",
        Dialect.ELbot,
    )
    return problem, k


def grid_name(t: TilingInstance, i: int, j: int) -> str:
    return "a" if i == j == t.width else f"a_{i}_{j}"


def tiling_to_hypothesis(t: TilingInstance, f: Mapping[tuple[int, int], str]) -> KnowledgeBase:
    """Grid ABox of a tiling f: (i, j) -> tile over [1..2^n]^2."""
    w = t.width
    cells = {(i, j) for i in range(1, w + 1) for j in range(1, w + 1)}
    if set(f) != cells:
        raise ValueError("the tiling must cover exactly the 2^n x 2^n grid")
    if any(tile not in t.tiles for tile in f.values()):
        raise ValueError("unknown tile in tiling")
    initial = {(i + 1, 1) for i in range(len(t.initial))}
    axioms: list = []
    for j in range(1, w + 1):
        for i in range(1, w + 1):
            if (i, j) not in initial:
                axioms.append(ConceptAssertion(_tile(f[(i, j)]), grid_name(t, i, j)))
    for j in range(1, w + 1):
        for i in range(1, w):
            axioms.append(RoleAssertion("x", grid_name(t, i + 1, j), grid_name(t, i, j)))
    for j in range(1, w):
        for i in range(1, w + 1):
            axioms.append(RoleAssertion("y", grid_name(t, i, j + 1), grid_name(t, i, j)))
    axioms.append(ConceptAssertion(atom("Start"), grid_name(t, 1, 1)))
    return KnowledgeBase.of(axioms)


def tiling_is_valid(t: TilingInstance, f: Mapping[tuple[int, int], str]) -> bool:
    w = t.width
    for i in range(1, w + 1):
        for j in range(1, w + 1):
            if i < w and (f[(i, j)], f[(i + 1, j)]) not in t.horizontal:
                return False
            if j < w and (f[(i, j)], f[(i, j + 1)]) not in t.vertical:
                return False
    if any(f[(i + 1, 1)] != tile for i, tile in enumerate(t.initial)):
        return False
    return f[(w, w)] == t.final


# ---------------------------------------------------------------------------
# ALC family


def _all_rs(c: Concept) -> Concept:
    return conj(only("r", c), only("s", c))


def _some_rs(c: Concept) -> Concept:
    return disj(some("r", c), some("s", c))


def _iff(c: Concept, d: Concept) -> Concept:
    return disj(conj(c, d), conj(Not(c), Not(d)))


def gen_alc_tripleexp(n: int) -> AbductionProblem:
    if n < 1:
        raise ValueError("n must be at least 1")
    xs, xbs = _bits("X", n)
    ys, ybs = _bits("Y", n)
    B, Bp = atom("B"), atom("Bp")
    init, bit, flip = atom("Init"), atom("Bit"), atom("Flip")
    error, goal = atom("Error"), atom("Goal")
    e0, e, nbit, ef = atom("E0"), atom("E"), atom("NBit"), atom("Ef")
    axioms: list[CI] = [
        CI(TOP, conj(some("r", TOP), some("s", TOP))),
        CI(_all_rs(disj(B, Bp)), Bp),
        CI(B, conj(init, Not(bit))),
        CI(_all_rs(conj(init, disj(*xbs))), conj(init, Not(bit))),
        CI(conj(*xbs), flip),
        CI(_all_rs(conj(flip, bit)), flip),
        CI(conj(disj(*xs), _some_rs(disj(Not(flip), Not(bit)))), Not(flip)),
        CI(conj(*xs, flip, Bp), disj(error, goal)),
        CI(error, conj(Not(init), _some_rs(disj(error, e0)))),
        CI(e0, conj(*ybs, e, _iff(nbit, bit))),
        CI(conj(e, nbit), _some_rs(conj(e, nbit))),
        CI(conj(e, Not(nbit)), _some_rs(conj(e, Not(nbit)))),
        CI(conj(*ys, e), disj(some("r", ef), some("s", ef))),
        CI(conj(ef, flip), _iff(bit, nbit)),
        CI(conj(ef, Not(flip)), _iff(bit, Not(nbit))),
    ]
    axioms.append(CI(B, conj(*xbs)))
    axioms += _counter_axioms("X", n, ["r", "s"])
    axioms += _counter_axioms("Y", n, ["r", "s"])
    return AbductionProblem(
        KnowledgeBase.of(axioms),
        KnowledgeBase.of([ConceptAssertion(goal, "a")]),
        Signature.of(["Bit", "B"], ["r", "s"]),
        None,
        "complex",
    )


def counter_sequence(n: int) -> str:
    """All 2^n-bit numbers in ascending order, concatenated."""
    width = 1 << n
    return "".join(format(v, f"0{width}b") for v in range(1 << width))


def witness_concept(n: int) -> Concept:
    """C_{l-1} with C_0 = B ⊓ Bit[0] and C_i = Bit[i] ⊓ ∀(r∪s).C_{i-1}."""
    pi = counter_sequence(n)
    bit = atom("Bit")

    def lit(i: int) -> Concept:
        return bit if pi[i] == "1" else Not(bit)

    c = conj(atom("B"), lit(0))
    for i in range(1, len(pi)):
        c = conj(lit(i), _all_rs(c))
    return c


__all__ = [
    "TilingInstance",
    "counter_sequence",
    "gen_alc_tripleexp",
    "gen_cnf",
    "gen_double_counter",
    "gen_exp_counter",
    "gen_tiling",
    "grid_name",
    "tiling_is_valid",
    "tiling_k",
    "tiling_to_hypothesis",
    "witness_concept",
]
