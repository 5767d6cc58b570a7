"""Flat hypotheses: the trivial EL candidate, selector hypotheses and quotients.

A selector assigns a surviving type to every individual of K ∪ Φ.  Its
hypothesis adds one fresh individual per type, all Σ-concept names of each
type, and every Σ-role edge that the successor candidates allow.  Trying the
selectors in lexicographic order decides flat abduction for ELbot, ALC and
ALCI.
"""

from __future__ import annotations

import itertools
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .reasoner import DEFAULT_NODE_BUDGET, ELReasoner, TypeEngine
from .syntax import (
    AbductionProblem,
    Assertion,
    Atom,
    ConceptAssertion,
    Dialect,
    KnowledgeBase,
    Role,
    RoleAssertion,
    Signature,
    individuals_of,
)
from .typecore import DEFAULT_MAX_CANDIDATES, ResourceError, TypeSet, build_closure, type_elimination


class FreshNamer:
    """Deterministic names for introduced individuals that avoid existing ones."""

    def __init__(self, taken: Iterable[str] = ()):
        self.taken = set(taken)
        self._memo: dict[tuple, str] = {}

    def _claim(self, key: tuple, base: str) -> str:
        name = self._memo.get(key)
        if name is None:
            name = base
            while name in self.taken:
                name = "_" + name
            self.taken.add(name)
            self._memo[key] = name
        return name

    def type_name(self, t: int) -> str:
        return self._claim(("type", t), f"b_t{t}")

    def chain_name(self, a: str, t: int, k: int) -> str:
        return self._claim(("chain", a, t, k), f"b_{a}_t{t}_{k}")

    def unfold_name(self, origin: str, k: int) -> str:
        return self._claim(("unfold", origin, k), f"{origin}_{k}")

    def pool_name(self, i: int) -> str:
        return self._claim(("pool", i), f"f{i}")

    def node_name(self, v: str) -> str:
        return self._claim(("node", v), f"a_{v}")


@dataclass(frozen=True)
class Selector:
    map: Mapping[str, int]

    def __getitem__(self, a: str) -> int:
        return self.map[a]


@dataclass
class FlatStats:
    types: int = 0
    selectors_tried: int = 0
    search_nodes: int = 0
    seconds: float = 0.0
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        d = {
            "types": self.types,
            "selectors_tried": self.selectors_tried,
            "search_nodes": self.search_nodes,
        }
        d.update(self.extra)
        return d


def _sigma_concepts(sigma: Signature) -> list[str]:
    return sorted(sigma.concept_names)


def _sigma_roles(sigma: Signature) -> list[str]:
    return sorted(sigma.role_names)


def trivial_hypothesis(problem: AbductionProblem) -> KnowledgeBase:
    """Every Σ-atom over the individuals of K ∪ Φ."""
    inds = problem.individuals()
    axioms: list[Assertion] = []
    for a_name in _sigma_concepts(problem.sigma):
        axioms += [ConceptAssertion(Atom(a_name), a) for a in inds]
    for r in _sigma_roles(problem.sigma):
        axioms += [RoleAssertion(r, a, b) for a in inds for b in inds]
    return KnowledgeBase.of(axioms)


def selector_compatible(s: Selector | Mapping[str, int], kb: KnowledgeBase, T: TypeSet) -> bool:
    for ax in kb.assertions():
        if isinstance(ax, ConceptAssertion):
            if not T.contains(s[ax.individual], ax.concept):
                return False
        elif not T.succ_pair(s[ax.subject], Role(ax.role), s[ax.object]):
            return False
    return True


def _type_atoms(T: TypeSet, t: int, names: Sequence[str]) -> list[str]:
    pos = T.closure.atom_positions()
    return [n for n in names if n in pos and T.matrix[t, pos[n]]]


def build_selector_hypothesis(
    s: Selector | Mapping[str, int],
    T: TypeSet,
    sigma: Signature,
    namer: FreshNamer | None = None,
    individuals: Sequence[str] | None = None,
) -> KnowledgeBase:
    """The selector hypothesis over the original individuals and one b_t per type."""
    namer = namer or FreshNamer(s.map if isinstance(s, Selector) else s)
    smap = s.map if isinstance(s, Selector) else s
    originals = list(individuals) if individuals is not None else list(smap)
    elems = [(a, smap[a]) for a in originals] + [(namer.type_name(t), t) for t in range(len(T))]
    cnames = _sigma_concepts(sigma)
    axioms: list[Assertion] = []
    for x, t in elems:
        axioms += [ConceptAssertion(Atom(n), x) for n in _type_atoms(T, t, cnames)]
    types = np.array([t for _, t in elems], dtype=np.int64)
    for r in _sigma_roles(sigma):
        role = Role(r)
        for x, t in elems:
            hit = T.succ_candidates(t, role)[types]
            axioms += [RoleAssertion(r, x, elems[k][0]) for k in np.flatnonzero(hit)]
    return KnowledgeBase.of(axioms)


def compressed_selector_hypothesis(
    s: Mapping[str, int],
    T: TypeSet,
    sigma: Signature,
    namer: FreshNamer,
    originals: Sequence[str],
) -> KnowledgeBase:
    """Selector hypothesis with interchangeable fresh individuals merged.

    Fresh individuals b_t and b_t' carry the same concept names and the same
    successors whenever t and t' agree on Σ-concept names and on the
    existentials that restrict Σ-role successors.  For ELbot such individuals
    receive the same consequences, so merging them (and dropping those not
    reachable from an original individual) keeps every entailment about the
    original individuals and keeps consistency.
    """
    cnames = _sigma_concepts(sigma)
    rnames = _sigma_roles(sigma)
    roles = [Role(r) for r in rnames]
    pos = T.closure.atom_positions()
    atom_cols = [pos[n] for n in cnames if n in pos]
    m = len(T)
    key_parts = [T.matrix[:, atom_cols]]
    for role in roles:
        src = T.keys(role).src
        key_parts.append(np.asarray(src, dtype=object).reshape(m, 1))
    keys = np.concatenate([p.astype(object) for p in key_parts], axis=1) if m else np.zeros((0, 0))
    class_of = np.zeros(m, dtype=np.int64)
    reps: list[int] = []
    seen: dict[tuple, int] = {}
    for t in range(m):
        k = tuple(keys[t])
        c = seen.get(k)
        if c is None:
            c = seen[k] = len(reps)
            reps.append(t)
        class_of[t] = c

    orig_types = np.array([s[a] for a in originals], dtype=np.int64)
    # successors: for a source type, which classes and which originals
    succ_cache: dict[tuple[int, int], tuple[np.ndarray, np.ndarray]] = {}

    def successors(t: int, ri: int):
        hit = succ_cache.get((t, ri))
        if hit is None:
            cand = T.succ_candidates(t, roles[ri])
            classes = np.unique(class_of[cand]) if cand.any() else np.zeros(0, dtype=np.int64)
            origs = np.flatnonzero(cand[orig_types]) if len(originals) else np.zeros(0, dtype=np.int64)
            hit = (classes, origs)
            succ_cache[(t, ri)] = hit
        return hit

    reachable: list[int] = []
    mark = np.zeros(len(reps), dtype=bool)
    frontier = [s[a] for a in originals]
    while frontier:
        nxt = []
        for t in frontier:
            for ri in range(len(roles)):
                for c in successors(t, ri)[0]:
                    if not mark[c]:
                        mark[c] = True
                        reachable.append(int(c))
                        nxt.append(reps[c])
        frontier = nxt
    reachable.sort()

    elems = [(a, s[a]) for a in originals] + [(namer.type_name(reps[c]), reps[c]) for c in reachable]
    class_name = {c: namer.type_name(reps[c]) for c in reachable}
    axioms: list[Assertion] = []
    for x, t in elems:
        axioms += [ConceptAssertion(Atom(n), x) for n in _type_atoms(T, t, cnames)]
    for ri, r in enumerate(rnames):
        for x, t in elems:
            classes, origs = successors(t, ri)
            axioms += [RoleAssertion(r, x, originals[k]) for k in origs]
            axioms += [RoleAssertion(r, x, class_name[int(c)]) for c in classes]
    return KnowledgeBase.of(axioms)


# ---------------------------------------------------------------------------
# Selector enumeration


def _domains(problem: AbductionProblem, T: TypeSet, originals: Sequence[str]) -> list[list[int]]:
    """Candidate types per individual.

    Besides the concept assertions of K, a selector can only succeed when
    s(a) contains every observed concept C with C(a) in Φ: the canonical
    model of K ∪ H_s realises s(a) at a.
    """
    allowed = {a: np.ones(len(T), dtype=bool) for a in originals}
    for ax in list(problem.kb.concept_assertions()) + list(problem.observation.concept_assertions()):
        allowed[ax.individual] &= T.with_concept(ax.concept)
    return [[int(t) for t in np.flatnonzero(allowed[a])] for a in originals]


def _iter_selectors(domains: list[list[int]], first: Sequence[int] | None = None) -> Iterator[tuple[int, ...]]:
    if not domains:
        yield ()
        return
    head = list(first) if first is not None else domains[0]
    for combo in itertools.product(head, *domains[1:]):
        yield combo


@dataclass
class _Context:
    problem: AbductionProblem
    T: TypeSet
    originals: list[str]
    namer: FreshNamer
    el: ELReasoner | None
    engine: TypeEngine | None
    node_budget: int


def _make_context(problem: AbductionProblem, max_candidates: int, node_budget: int) -> _Context:
    originals = problem.individuals()
    namer = FreshNamer(originals)
    if problem.dialect <= Dialect.ELbot:
        closure = build_closure(problem.kb, problem.observation)
        T = type_elimination(closure, KnowledgeBase.of(problem.kb.cis()), max_candidates)
        goals = [a.concept for a in problem.observation.concept_assertions()]
        return _Context(problem, T, originals, namer, ELReasoner(problem.kb.cis(), goals), None, node_budget)
    engine = TypeEngine(problem.kb, problem.observation, (), max_candidates, node_budget)
    return _Context(problem, engine.T, originals, namer, None, engine, node_budget)


def _role_goals_ok(ctx: _Context, smap: Mapping[str, int]) -> bool:
    for ax in ctx.problem.observation.role_assertions():
        if ax in ctx.problem.kb:
            continue
        if ax.role not in ctx.problem.sigma.role_names:
            return False
        if not ctx.T.succ_pair(smap[ax.subject], Role(ax.role), smap[ax.object]):
            return False
    return True


def _try_selector(ctx: _Context, combo: Sequence[int]) -> KnowledgeBase | None:
    smap = dict(zip(ctx.originals, combo))
    if not selector_compatible(smap, ctx.problem.kb, ctx.T):
        return None
    if not _role_goals_ok(ctx, smap):
        return None
    obs = list(ctx.problem.observation)
    if ctx.el is not None:
        h = compressed_selector_hypothesis(smap, ctx.T, ctx.problem.sigma, ctx.namer, ctx.originals)
        full = KnowledgeBase.of(list(ctx.problem.kb.assertions()) + list(h))
        extra = [a.individual for a in obs if isinstance(a, ConceptAssertion)]
        result = ctx.el.saturate(full, extra)
        if result.consistent and all(result.entails(a, full) for a in obs):
            return h
        return None
    h = build_selector_hypothesis(smap, ctx.T, ctx.problem.sigma, ctx.namer, ctx.originals)
    full = list(ctx.problem.kb.assertions()) + list(h)
    if all(ctx.engine.entails(full, a) for a in obs):
        return h
    return None


def _worker(args) -> tuple[int, list[int] | None, int]:
    problem, first_types, max_candidates, node_budget = args
    ctx = _make_context(problem, max_candidates, node_budget)
    domains = _domains(problem, ctx.T, ctx.originals)
    tried = 0
    for combo in _iter_selectors(domains, first_types):
        tried += 1
        if _try_selector(ctx, combo) is not None:
            return tried, list(combo), 0
    return tried, None, 0


def flat_abduce(
    problem: AbductionProblem,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    node_budget: int = DEFAULT_NODE_BUDGET,
    time_budget: float | None = None,
    jobs: int = 1,
    stats: FlatStats | None = None,
) -> KnowledgeBase | None:
    """A flat hypothesis, or None when no flat hypothesis exists.

    EL: the trivial candidate decides the problem.  Otherwise selectors are
    tried in lexicographic order over (individual order, type index) and the
    first successful selector hypothesis is returned.  For ELbot the returned
    hypothesis is the merged form of ``compressed_selector_hypothesis``.
    """
    stats = stats if stats is not None else FlatStats()
    start = time.monotonic()
    if problem.dialect == Dialect.EL:
        h = trivial_hypothesis(problem)
        goals = [a.concept for a in problem.observation.concept_assertions()]
        full = KnowledgeBase.of(list(problem.kb.assertions()) + list(h))
        extra = [a.individual for a in problem.observation.concept_assertions()]
        result = ELReasoner(problem.kb.cis(), goals).saturate(full, extra)
        stats.selectors_tried = 1
        stats.seconds = time.monotonic() - start
        return h if all(result.entails(a, full) for a in problem.observation) else None

    ctx = _make_context(problem, max_candidates, node_budget)
    stats.types = len(ctx.T)
    domains = _domains(problem, ctx.T, ctx.originals)
    total = 1
    for d in domains:
        total *= len(d)
    stats.extra["selector_space"] = total
    if total > node_budget:
        raise ResourceError(f"{total} selectors exceed the search budget of {node_budget}")

    if jobs > 1 and domains and len(domains[0]) > 1:
        chunks = [domains[0][i::jobs] for i in range(jobs)]
        chunks = [sorted(c) for c in chunks if c]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_worker, [(problem, c, max_candidates, node_budget) for c in chunks]))
        stats.selectors_tried = sum(r[0] for r in results)
        winners = [tuple(r[1]) for r in results if r[1] is not None]
        stats.seconds = time.monotonic() - start
        if not winners:
            return None
        return _try_selector(ctx, min(winners))

    for combo in _iter_selectors(domains):
        stats.selectors_tried += 1
        if time_budget is not None and time.monotonic() - start > time_budget:
            raise TimeoutError(f"flat abduction exceeded {time_budget} s")
        h = _try_selector(ctx, combo)
        if h is not None:
            stats.seconds = time.monotonic() - start
            if ctx.engine is not None:
                stats.search_nodes = ctx.engine.nodes
            return h
    stats.seconds = time.monotonic() - start
    if ctx.engine is not None:
        stats.search_nodes = ctx.engine.nodes
    return None


# ---------------------------------------------------------------------------
# Quotient


def quotient_by_types(
    h0: KnowledgeBase,
    problem: AbductionProblem,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> KnowledgeBase:
    """Merge fresh individuals of h0 whose types over sub(K ∪ Φ) agree."""
    originals = set(problem.individuals())
    fresh = [a for a in individuals_of(h0) if a not in originals]
    if not fresh:
        return h0
    full = problem.kb | h0
    engine = TypeEngine(full, problem.observation, (), max_candidates)
    assignment = engine.consistent(full.assertions())
    if assignment is None:
        raise ValueError("h0 is inconsistent with the knowledge base")
    base = build_closure(problem.kb, problem.observation)
    T0 = type_elimination(base, KnowledgeBase.of(problem.kb.cis()), max_candidates)
    proj = [engine.closure.position(c) for c in base.concepts]
    namer = FreshNamer(originals | set(individuals_of(h0)) - set(fresh))
    rank: dict[tuple, int] = {}
    rename: dict[str, str] = {}
    for a in fresh:
        row = engine.T.matrix[assignment[a], proj]
        idx = T0.index_of_row(row)
        key = (0, idx) if idx is not None else (1, tuple(row))
        if key not in rank:
            rank[key] = idx if idx is not None else len(T0) + len(rank)
        rename[a] = namer.type_name(rank[key])

    def h(x: str) -> str:
        return rename.get(x, x)

    out: list[Assertion] = []
    for ax in h0:
        if isinstance(ax, ConceptAssertion):
            out.append(ConceptAssertion(ax.concept, h(ax.individual)))
        else:
            out.append(RoleAssertion(ax.role, h(ax.subject), h(ax.object)))
    return KnowledgeBase.of(out)
