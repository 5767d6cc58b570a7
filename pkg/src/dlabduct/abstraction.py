"""Interpretation abstractions for ALC hypotheses with complex concepts.

An abstraction is a finite graph whose nodes carry sets of types.  Each
edge ``(v, t, r, w)`` says that an element at v with type t has its
r-successors among the elements at w.  Open nodes leave their successors to
the TBox.  Nodes anchored by an individual are internal, the others
outgoing.

This module checks the well-formedness conditions, decides whether a finite
interpretation is abstracted, and turns an abstraction into an ABox whose
models (together with K) are the abstracted models of K.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .flat import FreshNamer
from .reasoner import check_hypothesis
from .semantics import FiniteInterpretation
from .syntax import (
    TOP,
    AbductionProblem,
    Atom,
    Concept,
    ConceptAssertion,
    Dialect,
    KnowledgeBase,
    Not,
    Role,
    RoleAssertion,
    Signature,
    conj,
    disj,
    individuals_of,
    only,
    parse_concept,
    some,
)
from .typecore import (
    DEFAULT_MAX_CANDIDATES,
    Closure,
    ResourceError,
    TypeSet,
    build_closure,
    type_elimination,
)

Edge = tuple[str, int, str, str]


@dataclass(frozen=True)
class InterpretationAbstraction:
    nodes: tuple[str, ...]
    labels: Mapping[str, frozenset[int]]
    anchors: Mapping[str, str] = field(default_factory=dict)
    edges: frozenset[Edge] = frozenset()
    open_nodes: frozenset[str] = frozenset()
    # internal nodes without an anchoring individual in the input
    unnamed_internal: frozenset[str] = frozenset()

    def __post_init__(self):
        known = set(self.nodes)
        if len(known) != len(self.nodes):
            raise ValueError("duplicate node ids")
        for v in self.labels:
            if v not in known:
                raise ValueError(f"label for unknown node {v}")
        for a, v in self.anchors.items():
            if v not in known:
                raise ValueError(f"individual {a} anchored to unknown node {v}")
        for v, _, _, w in self.edges:
            if v not in known or w not in known:
                raise ValueError(f"edge between unknown nodes {v}, {w}")
        if not set(self.open_nodes) <= known or not set(self.unnamed_internal) <= known:
            raise ValueError("open or internal flag on unknown node")

    def label(self, v: str) -> frozenset[int]:
        return self.labels.get(v, frozenset())

    @property
    def internal(self) -> list[str]:
        anchored = set(self.anchors.values()) | set(self.unnamed_internal)
        return [v for v in self.nodes if v in anchored]

    @property
    def outgoing(self) -> list[str]:
        inner = set(self.internal)
        return [v for v in self.nodes if v not in inner]

    def is_internal(self, v: str) -> bool:
        return v in self.anchors.values() or v in self.unnamed_internal

    def sorted_edges(self) -> list[Edge]:
        order = {v: k for k, v in enumerate(self.nodes)}
        return sorted(self.edges, key=lambda e: (order[e[0]], e[1], e[2], order[e[3]]))

    def edges_from(self, v: str, t: int | None = None) -> list[Edge]:
        return [e for e in self.sorted_edges() if e[0] == v and (t is None or e[1] == t)]


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witness: tuple = ()

    def to_dict(self) -> dict:
        return {"kind": self.kind, "message": self.message, "witness": [str(w) for w in self.witness]}


class AbstractionContext:
    """K, Φ and Σ together with the type set the abstraction refers to.

    The closure contains sub(K ∪ Φ) and the Σ concept names, so that the
    Σ-part of a type is always visible.
    """

    def __init__(
        self,
        kb: KnowledgeBase,
        observation: KnowledgeBase = KnowledgeBase(),
        sigma: Signature = Signature(),
        max_candidates: int = DEFAULT_MAX_CANDIDATES,
    ):
        self.kb = kb
        self.observation = observation
        self.sigma = sigma
        extra = [Atom(n) for n in sorted(sigma.concept_names)]
        self.closure: Closure = build_closure(kb, observation, extra)
        self.T: TypeSet = type_elimination(self.closure, KnowledgeBase.of(kb.cis()), max_candidates)
        self.sigma_concepts = sorted(sigma.concept_names)
        self.sigma_roles = sorted(sigma.role_names)
        pos = self.closure.atom_positions()
        cols = [pos[n] for n in self.sigma_concepts]
        self._sigma_part = [tuple(bool(x) for x in self.T.matrix[t, cols]) for t in range(len(self.T))]
        self._row_index = {tuple(bool(x) for x in row): k for k, row in enumerate(self.T.matrix)}

    @classmethod
    def for_problem(cls, problem: AbductionProblem, max_candidates: int = DEFAULT_MAX_CANDIDATES):
        return cls(problem.kb, problem.observation, problem.sigma, max_candidates)

    def sigma_part(self, t: int) -> tuple[bool, ...]:
        return self._sigma_part[t]

    def sigma_class(self, t: int) -> frozenset[int]:
        key = self._sigma_part[t]
        return frozenset(k for k, p in enumerate(self._sigma_part) if p == key)

    def sigma_classes(self) -> list[frozenset[int]]:
        seen: dict[tuple, list[int]] = {}
        for t, p in enumerate(self._sigma_part):
            seen.setdefault(p, []).append(t)
        return [frozenset(v) for v in seen.values()]

    def type_of_row(self, row: Sequence[bool]) -> int | None:
        return self._row_index.get(tuple(bool(x) for x in row))

    def resolve_type(self, spec) -> int:
        """A type given as an index or as the list of its concepts."""
        if isinstance(spec, int):
            if not 0 <= spec < len(self.T):
                raise ValueError(f"type index {spec} out of range")
            return spec
        idx = self.T.find(parse_concept(c) if isinstance(c, str) else c for c in spec)
        if idx is None:
            raise ValueError(f"no surviving type with concepts {spec}")
        return idx


# ---------------------------------------------------------------------------
# Well-formedness


def check_alc_conform(a: InterpretationAbstraction) -> list[Violation]:
    """Conditions that make an abstraction expressible as an ALC ABox.

    * outgoing nodes do not form a cycle;
    * an edge (v, t, r, w) from an internal node exists for every t in λ(v);
    * every edge into an internal node is accompanied by an edge with the
      same source, type and role into an outgoing node.
    """
    out: list[Violation] = []
    outgoing = set(a.outgoing)
    succ: dict[str, set[str]] = {v: set() for v in outgoing}
    for v, _, _, w in a.sorted_edges():
        if v in outgoing and w in outgoing:
            succ[v].add(w)
    cycle = _find_cycle([v for v in a.nodes if v in outgoing], succ)
    if cycle:
        out.append(Violation("outgoing-cycle", "outgoing nodes form a cycle", tuple(cycle)))

    edges = a.edges
    for v, t, r, w in a.sorted_edges():
        if a.is_internal(v):
            for t2 in sorted(a.label(v)):
                if (v, t2, r, w) not in edges:
                    out.append(
                        Violation(
                            "internal-edge-not-uniform",
                            f"edge {v} -{r}-> {w} exists for type {t} but not for type {t2}",
                            (v, t2, r, w),
                        )
                    )
        if a.is_internal(w):
            if not any((v, t, r, w2) in edges for w2 in outgoing):
                out.append(
                    Violation(
                        "internal-edge-without-outgoing",
                        f"edge {v} -{r}-> {w} into an internal node has no outgoing companion",
                        (v, t, r, w),
                    )
                )
    return _dedupe(out)


def check_sigma_complete(a: InterpretationAbstraction, ctx: AbstractionContext) -> list[Violation]:
    """Labels and edges must not separate types that agree on Σ."""
    out: list[Violation] = []
    for v in a.nodes:
        lab = a.label(v)
        for t in sorted(lab):
            for t2 in sorted(ctx.sigma_class(t) - lab):
                out.append(
                    Violation("label-not-sigma-closed", f"λ({v}) has type {t} but not the Σ-equal type {t2}", (v, t2))
                )
    for v, t, r, w in a.sorted_edges():
        for t2 in sorted(ctx.sigma_class(t)):
            if (v, t2, r, w) not in a.edges:
                out.append(
                    Violation(
                        "edge-not-sigma-closed",
                        f"edge {v} -{r}-> {w} exists for type {t} but not for the Σ-equal type {t2}",
                        (v, t2, r, w),
                    )
                )
    return _dedupe(out)


def _dedupe(vs: list[Violation]) -> list[Violation]:
    return list(dict.fromkeys(vs))


def _find_cycle(nodes: Sequence[str], succ: Mapping[str, set[str]]) -> list[str] | None:
    color: dict[str, int] = {}
    for start in nodes:
        if color.get(start):
            continue
        stack = [(start, iter(sorted(succ.get(start, ()))))]
        path = [start]
        color[start] = 1
        while stack:
            v, it = stack[-1]
            nxt = next(it, None)
            if nxt is None:
                color[v] = 2
                stack.pop()
                path.pop()
                continue
            c = color.get(nxt, 0)
            if c == 1:
                return path[path.index(nxt):] + [nxt]
            if c == 0:
                color[nxt] = 1
                path.append(nxt)
                stack.append((nxt, iter(sorted(succ.get(nxt, ())))))
    return None


# ---------------------------------------------------------------------------
# Abstraction of finite interpretations


def element_types(i: FiniteInterpretation, ctx: AbstractionContext) -> list[int | None]:
    """Type index of every domain element, None when the type did not survive."""
    masks = [i.mask(c) for c in ctx.closure.concepts]
    out: list[int | None] = []
    for d in range(i.size):
        out.append(ctx.type_of_row([m >> d & 1 for m in masks]))
    return out


def abstracts(
    a: InterpretationAbstraction,
    i: FiniteInterpretation,
    ctx: AbstractionContext,
    require_successors: bool = True,
) -> dict[int, str] | None:
    """A witness h (partial map from domain elements to nodes), or None.

    Besides anchoring and type membership, an element d at a node v that is
    not open must have exactly the Σ-role successors the edges of v allow
    for its type.  With ``require_successors`` every such edge into an
    outgoing node must also be realised by at least one successor; this is
    what an edge means in the extracted ABox.  Every element is either left
    out or mapped to a node; the search is a plain enumeration, fine for
    small domains.
    """
    types = element_types(i, ctx)
    roles = [Role(r) for r in ctx.sigma_roles]
    succ = {r: i.successors(r) for r in roles}
    fixed: dict[int, str] = {}
    for ind, v in a.anchors.items():
        if ind not in i.individual_map:
            return None
        d = i.element(ind)
        if fixed.get(d, v) != v:
            return None
        fixed[d] = v

    choices: list[list[str | None]] = []
    for d in range(i.size):
        if d in fixed:
            opts: list[str | None] = [fixed[d]]
        else:
            opts = [None] + list(a.nodes)
        good = [v for v in opts if v is None or (types[d] is not None and types[d] in a.label(v))]
        if not good:
            return None
        choices.append(good)

    edges = a.edges
    open_nodes = a.open_nodes
    for combo in itertools.product(*choices):
        ok = True
        for d, v in enumerate(combo):
            if v is None or v in open_nodes:
                continue
            t = types[d]
            for r in roles:
                row = succ[r][d]
                for e in range(i.size):
                    related = bool(row >> e & 1)
                    allowed = combo[e] is not None and (v, t, r.name, combo[e]) in edges
                    if related != allowed:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                break
            if require_successors:
                for _, _, r, w in a.edges_from(v, t):
                    if a.is_internal(w):
                        continue
                    row = succ[Role(r)][d]
                    if not any(row >> e & 1 and combo[e] == w for e in range(i.size)):
                        ok = False
                        break
                if not ok:
                    break
        if ok:
            return {d: v for d, v in enumerate(combo) if v is not None}
    return None


# ---------------------------------------------------------------------------
# ABox extraction


def depth_bound(a: InterpretationAbstraction) -> int:
    """Node count of the longest path whose nodes after the first are outgoing."""
    outgoing = set(a.outgoing)
    succ: dict[str, set[str]] = {v: set() for v in a.nodes}
    for v, _, _, w in a.edges:
        if w in outgoing:
            succ[v].add(w)
    memo: dict[str, int] = {}

    def longest(v: str, active: frozenset) -> int:
        if v in memo:
            return memo[v]
        best = 1
        for w in succ[v]:
            if w in active:
                raise ValueError("outgoing nodes form a cycle")
            best = max(best, 1 + longest(w, active | {w}))
        memo[v] = best
        return best

    return max((longest(v, frozenset({v})) for v in a.nodes), default=1)


class _Extractor:
    def __init__(self, a: InterpretationAbstraction, ctx: AbstractionContext, n: int):
        self.a = a
        self.ctx = ctx
        self.n = n
        self.memo: dict[tuple[str, int], Concept] = {}

    def literals(self, t: int) -> list[Concept]:
        part = self.ctx.sigma_part(t)
        out: list[Concept] = []
        for name, inside in zip(self.ctx.sigma_concepts, part):
            out.append(Atom(name) if inside else Not(Atom(name)))
        return out

    def concept(self, v: str, i: int) -> Concept:
        key = (v, i)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        disjuncts: list[Concept] = []
        for t in sorted(self.a.label(v)):
            parts = self.literals(t)
            if i > 0 and v not in self.a.open_nodes:
                for _, _, r, w in self.a.edges_from(v, t):
                    if not self.a.is_internal(w):
                        parts.append(some(r, self.concept(w, self.n)))
                for r in self.ctx.sigma_roles:
                    targets = [w for _, _, r2, w in self.a.edges_from(v, t) if r2 == r]
                    fillers = list(dict.fromkeys(self.concept(w, i - 1) for w in targets))
                    if fillers:
                        parts.append(only(r, disj(*fillers)))
                    else:
                        parts.append(Not(some(r, TOP)))
            d = conj(*parts)
            if d not in disjuncts:
                disjuncts.append(d)
        c = disj(*disjuncts)
        self.memo[key] = c
        return c


def node_individuals(a: InterpretationAbstraction, taken: Iterable[str] = ()) -> dict[str, list[str]]:
    """Individuals standing for each internal node.

    Anchored individuals are used as given; an internal node without an
    anchor gets the deterministic fresh name a_<node>.
    """
    out: dict[str, list[str]] = {v: [] for v in a.internal}
    for ind in sorted(a.anchors):
        out[a.anchors[ind]].append(ind)
    namer = FreshNamer(set(taken) | set(a.anchors))
    for v in a.internal:
        if not out[v]:
            out[v].append(namer.node_name(v))
    return out


def abstraction_to_abox(
    a: InterpretationAbstraction, ctx: AbstractionContext, check: bool = True
) -> KnowledgeBase:
    """One assertion C_v(x) per individual x of each internal node v, plus
    r(x, y) for every edge between internal nodes."""
    if check:
        problems = check_alc_conform(a) + check_sigma_complete(a, ctx)
        if problems:
            raise ValueError("; ".join(p.message for p in problems))
    n = depth_bound(a)
    ex = _Extractor(a, ctx, n)
    names = node_individuals(a, individuals_of(ctx.kb | ctx.observation))
    axioms: list = []
    for v in a.internal:
        c = ex.concept(v, n)
        axioms += [ConceptAssertion(c, x) for x in names[v]]
    for v, _, r, w in a.sorted_edges():
        if a.is_internal(v) and a.is_internal(w):
            axioms += [RoleAssertion(r, x, y) for x in names[v] for y in names[w]]
    return KnowledgeBase.of(axioms)


# ---------------------------------------------------------------------------
# JSON


def _type_json(ctx: AbstractionContext | None, t: int):
    if ctx is None:
        return t
    return [str(c) for c in ctx.T.concepts(t)]


def to_json(a: InterpretationAbstraction, ctx: AbstractionContext | None = None) -> str:
    """Serialise; with a context, types are written as concept lists."""
    data = {
        "nodes": [
            {
                "id": v,
                "label": [_type_json(ctx, t) for t in sorted(a.label(v))],
                "open": v in a.open_nodes,
                "internal": a.is_internal(v),
            }
            for v in a.nodes
        ],
        "anchors": {k: a.anchors[k] for k in sorted(a.anchors)},
        "edges": [[v, _type_json(ctx, t), r, w] for v, t, r, w in a.sorted_edges()],
    }
    return json.dumps(data, indent=2, ensure_ascii=False)


def from_json(text: str | dict, ctx: AbstractionContext) -> InterpretationAbstraction:
    data = json.loads(text) if isinstance(text, str) else text
    nodes, labels, opened, inner = [], {}, set(), set()
    for node in data.get("nodes", []):
        v = str(node["id"])
        nodes.append(v)
        labels[v] = frozenset(ctx.resolve_type(t) for t in node.get("label", []))
        if node.get("open"):
            opened.add(v)
        if node.get("internal"):
            inner.add(v)
    anchors = {str(k): str(v) for k, v in data.get("anchors", {}).items()}
    inner -= set(anchors.values())
    edges = frozenset(
        (str(v), ctx.resolve_type(t), str(r), str(w)) for v, t, r, w in data.get("edges", [])
    )
    return InterpretationAbstraction(
        tuple(nodes), labels, anchors, edges, frozenset(opened), frozenset(inner)
    )


# ---------------------------------------------------------------------------
# Tiny search


def search_abstraction(
    problem: AbductionProblem,
    max_outgoing: int = 2,
    budget: int = 100_000,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> tuple[InterpretationAbstraction, KnowledgeBase] | None:
    """Brute-force search over small conform, Σ-complete abstractions.

    One internal node per individual of K ∪ Φ (at most two) and up to
    ``max_outgoing`` outgoing nodes.  Labels are single Σ-classes and edges
    are chosen per (node, Σ-class, role, node).  The first abstraction whose
    extracted ABox is a hypothesis is returned.  Raises ResourceError when
    the budget of candidate abstractions is used up.
    """
    ctx = AbstractionContext.for_problem(problem, max_candidates)
    if problem.dialect < Dialect.ALC:
        # extracted assertions use negation and value restrictions
        problem = problem.replace(dialect=Dialect.ALC)
    inds = problem.individuals()
    if len(inds) > 2:
        raise ResourceError("the abstraction search handles at most two individuals")
    classes = sorted(ctx.sigma_classes(), key=lambda c: min(c))
    tried = 0
    for k in range(max_outgoing + 1):
        internal = [f"v{j}" for j in range(len(inds))]
        outgoing = [f"w{j}" for j in range(k)]
        nodes = tuple(internal + outgoing)
        anchors = dict(zip(inds, internal))
        for labs in itertools.product(range(len(classes)), repeat=len(nodes)):
            labels = {v: classes[c] for v, c in zip(nodes, labs)}
            for opened in itertools.product((False, True), repeat=len(nodes)):
                open_nodes = frozenset(v for v, o in zip(nodes, opened) if o)
                slots = [
                    (v, r, w)
                    for v in nodes
                    if v not in open_nodes
                    for r in ctx.sigma_roles
                    for w in nodes
                ]
                for bits in itertools.product((False, True), repeat=len(slots)):
                    tried += 1
                    if tried > budget:
                        raise ResourceError(f"abstraction search exceeded {budget} candidates")
                    edges = frozenset(
                        (v, t, r, w)
                        for (v, r, w), b in zip(slots, bits)
                        if b
                        for t in labels[v]
                    )
                    a = InterpretationAbstraction(nodes, labels, anchors, edges, open_nodes)
                    if check_alc_conform(a) or check_sigma_complete(a, ctx):
                        continue
                    h = abstraction_to_abox(a, ctx, check=False)
                    if check_hypothesis(problem, h, max_candidates).passed:
                        return a, h
    return None


def single_node_abstraction(
    ctx: AbstractionContext, individual: str, types: Iterable[int], open_node: bool = False
) -> InterpretationAbstraction:
    """One internal node anchoring ``individual`` with the given label and no edges."""
    return InterpretationAbstraction(
        ("v",), {"v": frozenset(types)}, {individual: "v"}, frozenset(), frozenset({"v"} if open_node else ())
    )


__all__ = [
    "AbstractionContext",
    "InterpretationAbstraction",
    "Violation",
    "abstraction_to_abox",
    "abstracts",
    "check_alc_conform",
    "check_sigma_complete",
    "depth_bound",
    "element_types",
    "from_json",
    "node_individuals",
    "search_abstraction",
    "single_node_abstraction",
    "to_json",
]
