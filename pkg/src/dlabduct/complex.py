"""Complex-concept hypotheses for ELbot without fresh individuals.

A complex ABox is flattened into concept-name and role assertions over
fresh individuals arranged as a forest, and a forest of fresh individuals is
rolled back into nested existentials.  Abduction builds a chain hypothesis
whose fresh individuals are stratified by level, prunes it greedily and
rolls it up.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .flat import (
    FlatStats,
    FreshNamer,
    Selector,
    _domains,
    _iter_selectors,
    _make_context,
    _role_goals_ok,
    _sigma_concepts,
    _sigma_roles,
    _type_atoms,
    selector_compatible,
)
from .reasoner import DEFAULT_NODE_BUDGET, ELReasoner
from .syntax import (
    And,
    AbductionProblem,
    Assertion,
    Atom,
    Bottom,
    Concept,
    ConceptAssertion,
    Dialect,
    Exists,
    KnowledgeBase,
    Role,
    RoleAssertion,
    Top,
    conj,
    individuals_of,
    some,
)
from .typecore import DEFAULT_MAX_CANDIDATES, ResourceError, TypeSet


class ForestError(ValueError):
    """The fresh individuals of a rooted ABox do not form a forest."""


@dataclass(frozen=True)
class RootedFlatABox:
    abox: KnowledgeBase
    root: Mapping[str, str] = field(default_factory=dict)

    @property
    def fresh(self) -> list[str]:
        return [a for a in individuals_of(self.abox) if a in self.root]


# ---------------------------------------------------------------------------
# Flatten and roll-up


def _conjuncts(c: Concept) -> list[Concept]:
    if isinstance(c, And):
        out: list[Concept] = []
        for a in c.args:
            out += _conjuncts(a)
        return out
    if isinstance(c, Top):
        return []
    return [c]


def flatten(abox: KnowledgeBase | Iterable[Assertion]) -> RootedFlatABox:
    """Split conjunctions and unfold existentials into fresh successors.

    Fresh individuals are numbered per root in order of creation, so the
    result is deterministic and each fresh individual has exactly one
    incoming role assertion.
    """
    abox = list(abox)
    namer = FreshNamer(individuals_of(abox))
    counter: dict[str, int] = {}
    root: dict[str, str] = {}
    out: list[Assertion] = []

    def unfold(c: Concept, x: str, origin: str) -> None:
        for d in _conjuncts(c):
            if isinstance(d, Exists):
                if d.role.inverted:
                    raise ValueError("inverse roles are not allowed in ELbot assertions")
                k = counter[origin] = counter.get(origin, 0) + 1
                y = namer.unfold_name(origin, k)
                root[y] = origin
                out.append(RoleAssertion(d.role.name, x, y))
                unfold(d.filler, y, origin)
            elif isinstance(d, (Atom, Bottom)):
                out.append(ConceptAssertion(d, x))
            else:
                raise ValueError(f"{d} is not an ELbot concept")

    for ax in abox:
        if isinstance(ax, ConceptAssertion):
            unfold(ax.concept, ax.individual, ax.individual)
        else:
            out.append(ax)
    return RootedFlatABox(KnowledgeBase.of(out), root)


def rollup(r: RootedFlatABox) -> KnowledgeBase:
    """Replace role assertions into fresh individuals by existentials.

    Leaves are processed first.  A fresh individual reached by several role
    assertions is unfolded under each of them.  Fresh individuals must not
    have role assertions into original individuals, must have at least one
    incoming role assertion and must not lie on a cycle.
    """
    fresh = set(r.root)
    if not fresh:
        return r.abox
    concepts: dict[str, list[Concept]] = {}
    out_edges: dict[str, list[tuple[str, str]]] = {}
    incoming: dict[str, int] = {}
    for ax in r.abox:
        if isinstance(ax, ConceptAssertion):
            if ax.individual in fresh:
                concepts.setdefault(ax.individual, []).append(ax.concept)
        else:
            if ax.subject in fresh:
                if ax.object not in fresh:
                    raise ForestError(f"fresh individual {ax.subject} points to {ax.object}")
                out_edges.setdefault(ax.subject, []).append((ax.role, ax.object))
            if ax.object in fresh:
                incoming[ax.object] = incoming.get(ax.object, 0) + 1
    present = [a for a in individuals_of(r.abox) if a in fresh]
    for a in present:
        if not incoming.get(a):
            raise ForestError(f"fresh individual {a} has no incoming role assertion")

    rolled: dict[str, Concept] = {}
    state: dict[str, int] = {}

    def build(b: str) -> Concept:
        # iterative post-order with cycle detection
        stack = [(b, False)]
        while stack:
            x, done = stack.pop()
            if done:
                parts = list(concepts.get(x, ()))
                parts += [some(role, rolled[y]) for role, y in out_edges.get(x, ())]
                rolled[x] = conj(*parts)
                state[x] = 2
                continue
            if state.get(x) == 2:
                continue
            if state.get(x) == 1:
                raise ForestError(f"cycle through fresh individual {x}")
            state[x] = 1
            stack.append((x, True))
            for _, y in reversed(out_edges.get(x, ())):
                if state.get(y) == 1:
                    raise ForestError(f"cycle through fresh individual {y}")
                if state.get(y) != 2:
                    stack.append((y, False))
        return rolled[b]

    for a in present:
        build(a)

    out: list[Assertion] = []
    for ax in r.abox:
        if isinstance(ax, ConceptAssertion):
            if ax.individual not in fresh:
                out.append(ax)
        elif ax.subject not in fresh:
            if ax.object in fresh:
                out.append(ConceptAssertion(some(ax.role, rolled[ax.object]), ax.subject))
            else:
                out.append(ax)
    return KnowledgeBase.of(out)


def canonical_concept(c: Concept):
    """Hashable normal form: conjunctions flattened, ⊤ dropped, conjuncts as sets."""
    parts = {_canonical_part(d) for d in _conjuncts(c)}
    if len(parts) == 1:
        return parts.pop()
    return ("and", frozenset(parts))


def _canonical_part(d: Concept):
    if isinstance(d, Exists):
        return ("some", d.role, canonical_concept(d.filler))
    return ("name", str(d))


def canonical_abox(abox: Iterable[Assertion]) -> tuple[dict, frozenset]:
    """Per-individual sets of top-level conjuncts plus the set of role assertions."""
    per: dict[str, set] = {}
    roles = set()
    for ax in abox:
        if isinstance(ax, ConceptAssertion):
            bucket = per.setdefault(ax.individual, set())
            for d in _conjuncts(ax.concept):
                bucket.add(canonical_concept(d))
        else:
            roles.add((ax.role, ax.subject, ax.object))
    return {a: frozenset(s) for a, s in per.items() if s}, frozenset(roles)


# ---------------------------------------------------------------------------
# Chain hypotheses


def _merge_classes(T: TypeSet, sigma) -> np.ndarray:
    """Class index per type: types agreeing on Σ-atoms and Σ-role restrictions."""
    pos = T.closure.atom_positions()
    cols = [pos[n] for n in _sigma_concepts(sigma) if n in pos]
    keys: dict[tuple, int] = {}
    out = np.zeros(len(T), dtype=np.int64)
    srcs = [T.keys(Role(r)).src for r in _sigma_roles(sigma)]
    for t in range(len(T)):
        k = (tuple(T.matrix[t, cols].tolist()), tuple(int(s[t]) for s in srcs))
        out[t] = keys.setdefault(k, len(keys))
    return out


def chain_hypothesis(
    s: Selector | Mapping[str, int],
    T: TypeSet,
    sigma,
    L: int,
    namer: FreshNamer | None = None,
    individuals: Sequence[str] | None = None,
    merge: bool = False,
) -> RootedFlatABox:
    """Selector hypothesis unfolded into levels 0..L per original individual.

    Level 0 holds the original individuals.  Individual b_{a,t,k} gets the
    Σ-concept names of t and, for k < L, a Σ-role edge to every b_{a,t',k+1}
    with t' a successor candidate of t.  Only individuals reachable from a
    are emitted.  With ``merge`` types that are interchangeable for ELbot
    share one individual per level.
    """
    if L < 1:
        raise ValueError("chain length must be at least 1")
    smap = s.map if isinstance(s, Selector) else s
    originals = list(individuals) if individuals is not None else list(smap)
    namer = namer or FreshNamer(originals)
    cnames = _sigma_concepts(sigma)
    rnames = _sigma_roles(sigma)
    orig_types = np.array([smap[a] for a in originals], dtype=np.int64)
    if merge:
        cls = _merge_classes(T, sigma)
        reps: dict[int, int] = {}
        for t in range(len(T)):
            reps.setdefault(int(cls[t]), t)
        rep_of = np.array([reps[int(c)] for c in cls], dtype=np.int64)
    else:
        rep_of = np.arange(len(T), dtype=np.int64)

    concepts: list[Assertion] = []
    roles: list[Assertion] = []
    root: dict[str, str] = {}
    for a, ta in zip(originals, orig_types):
        concepts += [ConceptAssertion(Atom(n), a) for n in _type_atoms(T, int(ta), cnames)]
    for r in rnames:
        role = Role(r)
        for a, ta in zip(originals, orig_types):
            hit = T.succ_candidates(int(ta), role)[orig_types]
            roles += [RoleAssertion(r, a, originals[k]) for k in np.flatnonzero(hit)]

    for a, ta in zip(originals, orig_types):
        level: list[tuple[str, int]] = [(a, int(ta))]
        for k in range(1, L + 1):
            nxt: dict[int, str] = {}
            for x, t in level:
                for r in rnames:
                    cand = T.succ_candidates(t, Role(r))
                    for t2 in sorted({int(v) for v in rep_of[np.flatnonzero(cand)]}):
                        y = nxt.get(t2)
                        if y is None:
                            y = nxt[t2] = namer.chain_name(a, t2, k)
                            root[y] = a
                            concepts.extend(ConceptAssertion(Atom(n), y) for n in _type_atoms(T, t2, cnames))
                        roles.append(RoleAssertion(r, x, y))
            level = sorted(((y, t2) for t2, y in nxt.items()), key=lambda p: p[1])
            if not level:
                break
    return RootedFlatABox(KnowledgeBase.of(concepts + roles), root)


def _prune(
    rooted: RootedFlatABox,
    reasoner: ELReasoner,
    kb_abox: Sequence[Assertion],
    observation: KnowledgeBase,
    extra: Sequence[str],
) -> RootedFlatABox:
    """Greedily drop fresh individuals, then single assertions, keeping entailment."""

    def ok(axioms: Sequence[Assertion]) -> bool:
        full = list(kb_abox) + list(axioms)
        res = reasoner.saturate(full, extra)
        return all(res.entails(g, KnowledgeBase.of(full)) for g in observation)

    current = list(rooted.abox)
    fresh = [a for a in individuals_of(current) if a in rooted.root]
    groups = [[ax for ax in current if b in _mentions(ax)] for b in reversed(fresh)]
    current = _shrink(current, groups, ok)
    current = _shrink(current, [[ax] for ax in reversed(current)], ok)
    # fresh individuals without incoming edges cannot influence the originals
    while True:
        targets = {ax.object for ax in current if isinstance(ax, RoleAssertion)}
        orphans = {a for a in individuals_of(current) if a in rooted.root and a not in targets}
        if not orphans:
            break
        current = [ax for ax in current if not (_mentions(ax) & orphans)]
    kept = set(individuals_of(current))
    return RootedFlatABox(
        KnowledgeBase.of(current), {a: r for a, r in rooted.root.items() if a in kept}
    )


def _shrink(current: list, groups: list[list], ok) -> list:
    """Remove groups of assertions as long as ``ok`` keeps holding.

    Blocks of consecutive groups are tried together and split in halves
    when their removal fails, so large redundant parts cost one check.
    """
    removed: set = set()

    def without(extra: Iterable) -> list:
        gone = removed | set(extra)
        return [ax for ax in current if ax not in gone]

    def visit(block: list[list]) -> None:
        items = {ax for g in block for ax in g} - removed
        if not items:
            return
        if ok(without(items)):
            removed.update(items)
        elif len(block) > 1:
            mid = len(block) // 2
            visit(block[:mid])
            visit(block[mid:])

    visit(groups)
    return [ax for ax in current if ax not in removed]


def _mentions(ax: Assertion) -> set[str]:
    if isinstance(ax, ConceptAssertion):
        return {ax.individual}
    return {ax.subject, ax.object}


@dataclass
class ComplexResult:
    hypothesis: KnowledgeBase
    chain: RootedFlatABox
    selector: dict[str, int]


def complex_abduce_elbot(
    problem: AbductionProblem,
    L: int | None = None,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    node_budget: int = DEFAULT_NODE_BUDGET,
    time_budget: float | None = None,
    stats: FlatStats | None = None,
    details: list | None = None,
) -> KnowledgeBase | None:
    """A hypothesis with complex concepts over the original individuals only.

    For chain lengths 1, 2, 4, ... up to L (default |T|) the selectors are
    tried in lexicographic order.  The first chain hypothesis that works is
    pruned and rolled up.  None means no selector succeeded at length L.
    """
    if problem.dialect > Dialect.ELbot:
        raise ValueError("complex abduction without fresh individuals needs an ELbot problem")
    stats = stats if stats is not None else FlatStats()
    start = time.monotonic()
    ctx = _make_context(problem, max_candidates, node_budget)
    T = ctx.T
    stats.types = len(T)
    if L is not None:
        lengths = [L]
    else:
        # chains are tried with doubling lengths up to |T|; a longer chain
        # contains every shorter one, so this only affects the search order
        top = max(1, len(T))
        lengths = []
        k = 1
        while k < top:
            lengths.append(k)
            k *= 2
        lengths.append(top)
    stats.extra["chain_length"] = lengths[-1]
    domains = _domains(problem, T, ctx.originals)
    total = 1
    for d in domains:
        total *= len(d)
    stats.extra["selector_space"] = total
    if total > node_budget:
        raise ResourceError(f"{total} selectors exceed the search budget of {node_budget}")
    kb_abox = list(problem.kb.assertions())
    obs = problem.observation
    extra = [a.individual for a in obs.concept_assertions()]
    for length in lengths:
        for combo in _iter_selectors(domains):
            if time_budget is not None and time.monotonic() - start > time_budget:
                raise TimeoutError(f"complex abduction exceeded {time_budget} s")
            stats.selectors_tried += 1
            smap = dict(zip(ctx.originals, combo))
            if not selector_compatible(smap, problem.kb, T) or not _role_goals_ok(ctx, smap):
                continue
            chain = chain_hypothesis(
                smap, T, problem.sigma, length, FreshNamer(ctx.originals), ctx.originals, merge=True
            )
            full = kb_abox + list(chain.abox)
            res = ctx.el.saturate(full, extra)
            if not res.consistent or not all(res.entails(g, KnowledgeBase.of(full)) for g in obs):
                continue
            pruned = _prune(chain, ctx.el, kb_abox, obs, extra)
            h = rollup(pruned)
            stats.seconds = time.monotonic() - start
            stats.extra["chain_length"] = length
            if details is not None:
                details.append(ComplexResult(h, pruned, smap))
            return h
    stats.seconds = time.monotonic() - start
    return None


__all__ = [
    "ComplexResult",
    "ForestError",
    "RootedFlatABox",
    "canonical_abox",
    "canonical_concept",
    "chain_hypothesis",
    "complex_abduce_elbot",
    "flatten",
    "rollup",
]
