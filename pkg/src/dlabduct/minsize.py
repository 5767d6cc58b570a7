"""Size-restricted abduction by exhaustive search over flat candidates.

Candidate hypotheses are subsets of a pool of Σ-assertions over the known
individuals and, optionally, a pool of fresh individuals.  Subsets are
visited by increasing total size and, within one size, in lexicographic
order of pool positions, so the first success is size-minimal and the
lexicographically least among the minimal ones.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, Sequence

from .flat import FreshNamer
from .reasoner import DEFAULT_NODE_BUDGET, ELReasoner, TypeEngine
from .syntax import (
    AbductionProblem,
    Assertion,
    Atom,
    ConceptAssertion,
    Dialect,
    KnowledgeBase,
    RoleAssertion,
    signature_of,
    size,
)
from .typecore import DEFAULT_MAX_CANDIDATES


class PoolPolicy(Enum):
    EXISTING = "existing"
    FRESH = "fresh"


class Outcome(Enum):
    HYPOTHESIS = "hypothesis"
    NONE = "none"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class SearchConfig:
    policy: PoolPolicy = PoolPolicy.EXISTING
    fresh: int = 0
    node_budget: int = DEFAULT_NODE_BUDGET
    time_budget: float | None = None
    max_candidates: int = DEFAULT_MAX_CANDIDATES
    bound: int | None = None

    def __post_init__(self):
        if self.fresh < 0:
            raise ValueError("the fresh pool size must be non-negative")

    @classmethod
    def with_fresh(cls, count: int, **kw) -> SearchConfig:
        return cls(PoolPolicy.FRESH, count, **kw)


@dataclass
class SearchResult:
    outcome: Outcome
    hypothesis: KnowledgeBase | None = None
    size: int | None = None
    nodes: int = 0
    pool_size: int = 0
    reason: str = ""
    seconds: float = field(default=0.0, compare=False)

    @property
    def found(self) -> bool:
        return self.outcome is Outcome.HYPOTHESIS

    def to_dict(self) -> dict:
        return {
            "outcome": self.outcome.value,
            "size": self.size,
            "search_nodes": self.nodes,
            "pool_size": self.pool_size,
            "reason": self.reason,
        }


def _fresh_names(problem: AbductionProblem, cfg: SearchConfig) -> list[str]:
    if cfg.policy is not PoolPolicy.FRESH:
        return []
    namer = FreshNamer(problem.individuals())
    return [namer.pool_name(i) for i in range(1, cfg.fresh + 1)]


def candidate_pool(problem: AbductionProblem, cfg: SearchConfig = SearchConfig()) -> list[Assertion]:
    """Σ-assertions over the individuals of K ∪ Φ and the fresh pool.

    Only names that also occur in K ∪ Φ are used; other Σ-names cannot
    contribute to an entailment.  Concept assertions come first (by concept
    name, then individual), then role assertions (by role, subject, object).
    """
    inds = problem.individuals() + _fresh_names(problem, cfg)
    used = signature_of(problem.kb | problem.observation)
    concepts = sorted(problem.sigma.concept_names & used.concept_names)
    roles = sorted(problem.sigma.role_names & used.role_names)
    pool: list[Assertion] = []
    for c in concepts:
        pool += [ConceptAssertion(Atom(c), a) for a in inds]
    for r in roles:
        pool += [RoleAssertion(r, a, b) for a in inds for b in inds]
    return pool


class _Checker:
    """A1/A2 tests for candidate sets, sharing the TBox preprocessing."""

    def __init__(self, problem: AbductionProblem, cfg: SearchConfig):
        self.problem = problem
        self.kb_abox = list(problem.kb.assertions())
        self.obs = list(problem.observation)
        self.extra = [a.individual for a in problem.observation.concept_assertions()]
        self.has_bottom = problem.dialect.has_bottom
        if problem.dialect <= Dialect.ELbot:
            goals = [a.concept for a in problem.observation.concept_assertions()]
            self.el = ELReasoner(problem.kb.cis(), goals)
            self.engine = None
        else:
            self.el = None
            self.engine = TypeEngine(problem.kb, problem.observation, (), cfg.max_candidates, cfg.node_budget)

    def consistent(self, h: Sequence[Assertion]) -> bool:
        if not self.has_bottom:
            return True
        full = self.kb_abox + list(h)
        if self.el is not None:
            return self.el.saturate(full, self.extra).consistent
        return self.engine.consistent(full) is not None

    def passes(self, h: Sequence[Assertion]) -> bool:
        full = self.kb_abox + list(h)
        if self.el is not None:
            res = self.el.saturate(full, self.extra)
            if self.has_bottom and not res.consistent:
                return False
            kb = KnowledgeBase.of(full)
            return all(res.entails(g, kb) for g in self.obs)
        if self.engine.consistent(full) is None:
            return False
        return all(self.engine.entails(full, g) for g in self.obs)


class _Budget(Exception):
    pass


def _fresh_index(names: Sequence[str]) -> dict[str, int]:
    return {n: i for i, n in enumerate(names)}


def min_abduce(problem: AbductionProblem, cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Smallest flat hypothesis of size at most the bound.

    The bound is ``cfg.bound``, else the problem's size bound, else the size
    of the whole pool.  In dialects with ⊥ an inconsistent partial set is
    never extended.  Fresh individuals are used in pool order only: f_i may
    occur only if f_{i-1} does.
    """
    start = time.monotonic()
    pool = candidate_pool(problem, cfg)
    weights = [size(ax) for ax in pool]
    fresh = _fresh_names(problem, cfg)
    fidx = _fresh_index(fresh)
    uses = [
        frozenset(fidx[x] for x in _individuals(ax) if x in fidx) for ax in pool
    ]
    bound = cfg.bound if cfg.bound is not None else problem.size_bound
    if bound is None:
        bound = sum(weights)
    checker = _Checker(problem, cfg)
    result = SearchResult(Outcome.NONE, pool_size=len(pool))

    def tick() -> None:
        result.nodes += 1
        if result.nodes > cfg.node_budget:
            raise _Budget(f"search budget of {cfg.node_budget} nodes exhausted")
        if cfg.time_budget is not None and time.monotonic() - start > cfg.time_budget:
            raise _Budget(f"time budget of {cfg.time_budget} s exhausted")

    n = len(pool)

    def subsets(target: int) -> Iterator[list[int]]:
        chosen: list[int] = []

        def rec(i: int, left: int) -> Iterator[list[int]]:
            if left == 0:
                yield list(chosen)
                return
            for j in range(i, n):
                w = weights[j]
                if w > left:
                    continue
                chosen.append(j)
                if left - w > 0 and checker.has_bottom:
                    tick()
                    if not checker.consistent([pool[k] for k in chosen]):
                        chosen.pop()
                        continue
                yield from rec(j + 1, left - w)
                chosen.pop()

        yield from rec(0, target)

    def canonical(idx: Sequence[int]) -> bool:
        used: set[int] = set()
        for k in idx:
            used |= uses[k]
        return used == set(range(len(used)))

    try:
        for target in range(0, bound + 1):
            for idx in subsets(target):
                if fresh and not canonical(idx):
                    continue
                tick()
                h = [pool[k] for k in idx]
                if checker.passes(h):
                    result.outcome = Outcome.HYPOTHESIS
                    result.hypothesis = KnowledgeBase.of(h)
                    result.size = target
                    result.seconds = time.monotonic() - start
                    return result
    except _Budget as exc:
        result.outcome = Outcome.UNKNOWN
        result.reason = str(exc)
    result.seconds = time.monotonic() - start
    return result


def _individuals(ax: Assertion) -> tuple[str, ...]:
    if isinstance(ax, ConceptAssertion):
        return (ax.individual,)
    return (ax.subject, ax.object)


def brute_force_minimum(problem: AbductionProblem, pool: Sequence[Assertion]) -> int | None:
    """Minimum size over all subsets of a small pool, by plain enumeration."""
    import itertools

    if len(pool) > 16:
        raise ValueError("pool too large for plain enumeration")
    checker = _Checker(problem, SearchConfig())
    best = None
    for k in range(len(pool) + 1):
        for combo in itertools.combinations(pool, k):
            s = sum(size(ax) for ax in combo)
            if best is not None and s >= best:
                continue
            if checker.passes(list(combo)):
                best = s
    return best


__all__ = [
    "Outcome",
    "PoolPolicy",
    "SearchConfig",
    "SearchResult",
    "brute_force_minimum",
    "candidate_pool",
    "min_abduce",
]
