"""Consistency and entailment for EL, ELbot, ALC and ALCI knowledge bases.

Two engines are provided.  ``ELReasoner`` runs the usual completion rules
over a normalised TBox, with individuals as vertices and one anonymous vertex
per existential filler; it is polynomial and complete for ELbot.  The type
engine reduces ALC and ALCI reasoning over an ABox to finding a type per
individual that agrees with the concept assertions and with the successor
candidates of the role assertions.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .syntax import (
    CI,
    AbductionProblem,
    And,
    Assertion,
    Atom,
    Bottom,
    Concept,
    ConceptAssertion,
    Dialect,
    DialectError,
    Exists,
    KnowledgeBase,
    Role,
    RoleAssertion,
    Top,
    detect_dialect,
    individuals_of,
    signature_of,
    size,
)
from .typecore import (
    DEFAULT_MAX_CANDIDATES,
    Closure,
    ResourceError,
    TypeSet,
    build_closure,
    type_elimination,
)

DEFAULT_NODE_BUDGET = 10**7

_TOP = 0
_BOT = 1


# ---------------------------------------------------------------------------
# ELbot completion


class _Normalizer:
    """Normal forms A ⊑ B, A1 ⊓ … ⊓ An ⊑ B, A ⊑ ∃r.B and ∃r.A ⊑ B over integer names."""

    def __init__(self):
        self.ids: dict[str, int] = {}
        self.count = 2
        self.told: dict[int, list[int]] = {}
        self.conj: dict[int, list[tuple[tuple[int, ...], int]]] = {}
        self.ex_rhs: dict[int, list[tuple[str, int]]] = {}
        self.ex_lhs: dict[tuple[str, int], list[int]] = {}
        self._lhs_memo: dict[Concept, int | None] = {}
        self._rhs_memo: dict[Concept, int] = {}

    def copy(self) -> _Normalizer:
        n = _Normalizer.__new__(_Normalizer)
        n.ids = dict(self.ids)
        n.count = self.count
        n.told = {k: list(v) for k, v in self.told.items()}
        n.conj = {k: list(v) for k, v in self.conj.items()}
        n.ex_rhs = {k: list(v) for k, v in self.ex_rhs.items()}
        n.ex_lhs = {k: list(v) for k, v in self.ex_lhs.items()}
        n._lhs_memo = dict(self._lhs_memo)
        n._rhs_memo = dict(self._rhs_memo)
        return n

    def fresh(self) -> int:
        self.count += 1
        return self.count - 1

    def name(self, a: str) -> int:
        i = self.ids.get(a)
        if i is None:
            i = self.ids[a] = self.fresh()
        return i

    def lhs(self, c: Concept) -> int | None:
        """A name X with c ⊑ X enforced, or None when c is unsatisfiable."""
        if c in self._lhs_memo:
            return self._lhs_memo[c]
        if isinstance(c, Top):
            x = _TOP
        elif isinstance(c, Atom):
            x = self.name(c.name)
        elif isinstance(c, Bottom):
            x = None
        elif isinstance(c, And):
            parts = [self.lhs(a) for a in c.args]
            if any(p is None for p in parts):
                x = None
            else:
                uniq = tuple(sorted(set(parts)))
                if len(uniq) == 1:
                    x = uniq[0]
                else:
                    x = self.fresh()
                    for p in uniq:
                        self.conj.setdefault(p, []).append((uniq, x))
        elif isinstance(c, Exists):
            _check_role(c.role)
            y = self.lhs(c.filler)
            if y is None:
                x = None
            else:
                x = self.fresh()
                self.ex_lhs.setdefault((c.role.name, y), []).append(x)
        else:
            raise DialectError(f"{c} is not an ELbot concept")
        self._lhs_memo[c] = x
        return x

    def rhs_name(self, c: Concept) -> int:
        """A name Y with Y ⊑ c enforced."""
        if isinstance(c, Top):
            return _TOP
        if isinstance(c, Bottom):
            return _BOT
        if isinstance(c, Atom):
            return self.name(c.name)
        y = self._rhs_memo.get(c)
        if y is None:
            y = self._rhs_memo[c] = self.fresh()
            self.rhs(y, c)
        return y

    def rhs(self, x: int, c: Concept) -> None:
        if isinstance(c, Top):
            return
        if isinstance(c, (Atom, Bottom)):
            self.told.setdefault(x, []).append(self.rhs_name(c))
        elif isinstance(c, And):
            for a in c.args:
                self.rhs(x, a)
        elif isinstance(c, Exists):
            _check_role(c.role)
            self.ex_rhs.setdefault(x, []).append((c.role.name, self.rhs_name(c.filler)))
        else:
            raise DialectError(f"{c} is not an ELbot concept")

    def add_ci(self, ax: CI) -> None:
        x = self.lhs(ax.lhs)
        if x is not None:
            self.rhs(x, ax.rhs)


def _check_role(r: Role) -> None:
    if r.inverted:
        raise DialectError("inverse roles are not supported by the ELbot engine")


@dataclass
class ELResult:
    consistent: bool
    labels: dict[str, frozenset[int]]
    _norm: _Normalizer = field(repr=False)

    def entails(self, goal: Assertion, abox: KnowledgeBase | None = None) -> bool:
        if not self.consistent:
            return True
        if isinstance(goal, RoleAssertion):
            return abox is not None and goal in abox
        x = self._norm._lhs_memo.get(goal.concept)
        if goal.concept not in self._norm._lhs_memo:
            raise KeyError(f"goal concept {goal.concept} was not registered")
        if x is None:
            return False
        if x == _TOP:
            return True
        return x in self.labels.get(goal.individual, frozenset())


class ELReasoner:
    """Completion-rule saturation for a fixed TBox and a fixed set of goal concepts."""

    def __init__(self, cis: Iterable[CI], goals: Iterable[Concept] = ()):
        self.norm = _Normalizer()
        for ax in cis:
            self.norm.add_ci(ax)
        for g in goals:
            self.norm.lhs(g)

    def saturate(self, abox: Iterable[Assertion], extra_individuals: Iterable[str] = ()) -> ELResult:
        abox = list(abox)
        norm = self.norm
        if any(isinstance(a, ConceptAssertion) and not isinstance(a.concept, (Atom, Top)) for a in abox):
            norm = norm.copy()
        inds = individuals_of(abox)
        for a in extra_individuals:
            if a not in inds:
                inds.append(a)
        ind_id = {a: k for k, a in enumerate(inds)}

        told, conj, ex_rhs, ex_lhs = norm.told, norm.conj, norm.ex_rhs, norm.ex_lhs
        S: list[set[int]] = []
        preds: list[set[tuple[str, int]]] = []
        anon: dict[int, int] = {}
        queue: deque[tuple[int, int]] = deque()

        def add(x: int, a: int) -> None:
            s = S[x]
            if a not in s:
                s.add(a)
                queue.append((x, a))

        def new_element() -> int:
            S.append(set())
            preds.append(set())
            return len(S) - 1

        def add_edge(x: int, r: str, y: int) -> None:
            key = (r, x)
            if key in preds[y]:
                return
            preds[y].add(key)
            for a in list(S[y]):
                if a == _BOT:
                    add(x, _BOT)
                for b in ex_lhs.get((r, a), ()):
                    add(x, b)

        for _ in inds:
            e = new_element()
            add(e, _TOP)
        for ax in abox:
            if isinstance(ax, ConceptAssertion):
                c = ax.concept
                if isinstance(c, Top):
                    continue
                name = norm.name(c.name) if isinstance(c, Atom) else norm.rhs_name(c)
                add(ind_id[ax.individual], name)
            else:
                add_edge(ind_id[ax.subject], ax.role, ind_id[ax.object])

        while queue:
            x, a = queue.popleft()
            if a == _BOT:
                for r, p in list(preds[x]):
                    add(p, _BOT)
                continue
            for b in told.get(a, ()):
                add(x, b)
            for members, b in conj.get(a, ()):
                if b not in S[x] and all(m in S[x] for m in members):
                    add(x, b)
            for r, b in ex_rhs.get(a, ()):
                y = anon.get(b)
                if y is None:
                    y = anon[b] = new_element()
                    add(y, _TOP)
                    add(y, b)
                add_edge(x, r, y)
            for r, p in list(preds[x]):
                for b in ex_lhs.get((r, a), ()):
                    add(p, b)

        consistent = not any(_BOT in S[ind_id[a]] for a in inds)
        labels = {a: frozenset(S[ind_id[a]]) for a in inds}
        return ELResult(consistent, labels, norm)


def _split(kb: Iterable) -> tuple[list[CI], list[Assertion]]:
    cis, abox = [], []
    for ax in kb:
        (cis if isinstance(ax, CI) else abox).append(ax)
    return cis, abox


def _require_elbot(kb: KnowledgeBase, goal=None) -> None:
    extra = KnowledgeBase((goal,)) if goal is not None else None
    if not detect_dialect(kb, extra) <= Dialect.ELbot:
        raise DialectError("input is not in ELbot")


def el_entails(kb: KnowledgeBase, goal: Assertion) -> bool:
    """Instance checking in ELbot; an inconsistent KB entails everything."""
    _require_elbot(kb, goal)
    cis, abox = _split(kb)
    goals = [goal.concept] if isinstance(goal, ConceptAssertion) else []
    extra = [goal.individual] if isinstance(goal, ConceptAssertion) else []
    result = ELReasoner(cis, goals).saturate(abox, extra)
    return result.entails(goal, kb)


def el_consistent(kb: KnowledgeBase) -> bool:
    _require_elbot(kb)
    cis, abox = _split(kb)
    return ELReasoner(cis).saturate(abox).consistent


# ---------------------------------------------------------------------------
# Type-assignment engine


@dataclass
class _Arc:
    other: str
    role: Role  # the role leading from this individual to ``other``


class _TypeCSP:
    """Types for individuals subject to concept assertions and role assertions."""

    def __init__(self, T: TypeSet, abox: Sequence[Assertion], individuals: Sequence[str],
                 node_budget: int = DEFAULT_NODE_BUDGET):
        self.T = T
        self.node_budget = node_budget
        self.nodes = 0
        m = len(T)
        self.inds = list(dict.fromkeys(list(individuals) + individuals_of(abox)))
        self.domain = {a: np.ones(m, dtype=bool) for a in self.inds}
        self.arcs: dict[str, list[_Arc]] = {a: [] for a in self.inds}
        self.consistent_unary = True
        for ax in abox:
            if isinstance(ax, ConceptAssertion):
                self.domain[ax.individual] &= T.with_concept(ax.concept)
            else:
                r = Role(ax.role)
                self.arcs[ax.subject].append(_Arc(ax.object, r))
                self.arcs[ax.object].append(_Arc(ax.subject, r.inverse()))

    def restrict(self, individual: str, allowed: np.ndarray) -> None:
        self.domain[individual] = self.domain[individual] & allowed

    def _revise(self, a: str, arc: _Arc) -> bool:
        """Drop types of a without a supporting type for arc.other; True if changed."""
        T = self.T
        da = self.domain[a]
        db = self.domain[arc.other]
        idx = np.flatnonzero(da)
        if idx.size == 0:
            return False
        kk = T.keys(arc.role)
        targets = np.unique(kk.tgt[np.flatnonzero(db)])
        if targets.size == 0:
            self.domain[a] = np.zeros_like(da)
            return True
        srcs = kk.src[idx]
        keep = np.ones(idx.size, dtype=bool)
        for s in np.unique(srcs):
            if not (targets & s == 0).any():
                keep[srcs == s] = False
        if keep.all():
            return False
        new = da.copy()
        new[idx[~keep]] = False
        self.domain[a] = new
        return True

    def arc_consistency(self) -> bool:
        queue = deque((a, arc) for a in self.inds for arc in self.arcs[a])
        queued = set((a, arc.other, arc.role) for a, arc in queue)
        while queue:
            a, arc = queue.popleft()
            queued.discard((a, arc.other, arc.role))
            if self._revise(a, arc):
                if not self.domain[a].any():
                    return False
                for back in self.arcs[a]:
                    key = (back.other, a, back.role.inverse())
                    if key not in queued:
                        queued.add(key)
                        queue.append((back.other, _Arc(a, back.role.inverse())))
        return True

    def solve(self) -> dict[str, int] | None:
        if any(not d.any() for d in self.domain.values()):
            return None
        if not self.arc_consistency():
            return None
        T = self.T
        degree = {a: len(self.arcs[a]) for a in self.inds}
        position = {a: k for k, a in enumerate(self.inds)}
        assignment: dict[str, int] = {}
        unassigned = set(self.inds)

        def select() -> str | None:
            if not unassigned:
                return None
            return min(
                unassigned,
                key=lambda a: (int(self.domain[a].sum()), -degree[a], position[a]),
            )

        def assign(a: str, t: int):
            trail = [(a, self.domain[a])]
            single = np.zeros(len(T), dtype=bool)
            single[t] = True
            self.domain[a] = single
            for arc in self.arcs[a]:
                b = arc.other
                if b in assignment or b == a:
                    if b == a and not T.succ_pair(t, arc.role, t):
                        for x, d in reversed(trail):
                            self.domain[x] = d
                        return None
                    continue
                new = self.domain[b] & T.succ_candidates(t, arc.role)
                trail.append((b, self.domain[b]))
                self.domain[b] = new
                if not new.any():
                    for x, d in reversed(trail):
                        self.domain[x] = d
                    return None
            return trail

        var = select()
        if var is None:
            return {}
        stack = [[var, list(np.flatnonzero(self.domain[var])), 0, None]]
        unassigned.discard(var)
        while stack:
            frame = stack[-1]
            var, cands, pos, trail = frame
            if trail is not None:
                for x, d in reversed(trail):
                    self.domain[x] = d
                del assignment[var]
                frame[3] = None
            if pos == len(cands):
                stack.pop()
                unassigned.add(var)
                continue
            frame[2] = pos + 1
            self.nodes += 1
            if self.nodes > self.node_budget:
                raise ResourceError(f"type assignment search exceeded {self.node_budget} nodes")
            t = int(cands[pos])
            trail = assign(var, t)
            if trail is None:
                continue
            frame[3] = trail
            assignment[var] = t
            nxt = select()
            if nxt is None:
                return {a: assignment[a] for a in self.inds}
            unassigned.discard(nxt)
            stack.append([nxt, list(np.flatnonzero(self.domain[nxt])), 0, None])
        return None


def alc_consistent(
    kb: KnowledgeBase,
    T: TypeSet,
    closure: Closure | None = None,
    individuals: Sequence[str] = (),
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> dict[str, int] | None:
    """A type per individual compatible with the ABox of kb, or None."""
    _, abox = _split(kb)
    csp = _TypeCSP(T, abox, individuals, node_budget)
    return csp.solve()


def alc_entails(
    kb: KnowledgeBase,
    goal: Assertion,
    T: TypeSet,
    closure: Closure | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> bool:
    """Entailment of a concept or role assertion through counter-assignments.

    Role assertions count as entailed only when present (or when kb is
    inconsistent); concept goals are entailed iff no compatible assignment
    omits the goal concept at its individual.
    """
    _, abox = _split(kb)
    if isinstance(goal, RoleAssertion):
        if goal in kb:
            return True
        return _TypeCSP(T, abox, (), node_budget).solve() is None
    csp = _TypeCSP(T, abox, [goal.individual], node_budget)
    csp.restrict(goal.individual, ~T.with_concept(goal.concept))
    return csp.solve() is None


class TypeEngine:
    """Type set for a TBox plus the concepts of a family of ABoxes and goals."""

    def __init__(
        self,
        kb: KnowledgeBase,
        obs: KnowledgeBase | None = None,
        extra: Iterable[Concept] = (),
        max_candidates: int = DEFAULT_MAX_CANDIDATES,
        node_budget: int = DEFAULT_NODE_BUDGET,
    ):
        self.closure = build_closure(kb, obs, extra)
        self.T = type_elimination(self.closure, KnowledgeBase.of(kb.cis()), max_candidates)
        self.node_budget = node_budget
        self.nodes = 0

    def consistent(self, abox: Iterable[Assertion], individuals: Sequence[str] = ()):
        csp = _TypeCSP(self.T, list(abox), individuals, self.node_budget)
        try:
            return csp.solve()
        finally:
            self.nodes += csp.nodes

    def entails(self, abox: Sequence[Assertion], goal: Assertion) -> bool:
        abox = list(abox)
        if isinstance(goal, RoleAssertion):
            return goal in abox or self.consistent(abox) is None
        csp = _TypeCSP(self.T, abox, [goal.individual], self.node_budget)
        csp.restrict(goal.individual, ~self.T.with_concept(goal.concept))
        try:
            return csp.solve() is None
        finally:
            self.nodes += csp.nodes


# ---------------------------------------------------------------------------
# Hypothesis verification


@dataclass
class VerificationReport:
    a1_consistent: bool
    a2_entails: bool
    a3_in_signature: bool
    a2_missing: list[Assertion] = field(default_factory=list)
    a1_witness: dict[str, list[str]] | None = None
    a3_offenders: list[str] = field(default_factory=list)
    size: int = 0
    size_bound: int | None = None
    engine: str = ""

    @property
    def within_bound(self) -> bool | None:
        return None if self.size_bound is None else self.size <= self.size_bound

    @property
    def passed(self) -> bool:
        return (
            self.a1_consistent
            and self.a2_entails
            and self.a3_in_signature
            and self.within_bound is not False
        )

    def to_dict(self) -> dict:
        return {
            "a1_consistent": self.a1_consistent,
            "a2_entails": self.a2_entails,
            "a3_in_signature": self.a3_in_signature,
            "within_bound": self.within_bound,
            "passed": self.passed,
            "a2_missing": [str(a) for a in self.a2_missing],
            "a3_offenders": list(self.a3_offenders),
            "a1_witness": self.a1_witness,
            "size": self.size,
            "size_bound": self.size_bound,
            "engine": self.engine,
        }


def signature_offenders(problem: AbductionProblem, h: KnowledgeBase) -> list[str]:
    sig = signature_of(h)
    bad = (sig.concept_names - problem.sigma.concept_names) | (
        sig.role_names - problem.sigma.role_names
    )
    return sorted(bad)


def check_hypothesis(
    problem: AbductionProblem,
    h: KnowledgeBase,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> VerificationReport:
    """A1, A2, A3 and the size bound for a candidate hypothesis."""
    if any(isinstance(a, CI) for a in h):
        raise ValueError("a hypothesis must be an ABox")
    h_dialect = detect_dialect(h)
    if not h_dialect <= problem.dialect:
        raise DialectError(
            f"hypothesis needs {h_dialect.name} but the problem is {problem.dialect.name}"
        )
    offenders = signature_offenders(problem, h)
    full = problem.kb | h
    cis, abox = _split(full)
    obs = list(problem.observation)
    if problem.dialect <= Dialect.ELbot:
        goals = [a.concept for a in obs if isinstance(a, ConceptAssertion)]
        extra = [a.individual for a in obs if isinstance(a, ConceptAssertion)]
        result = ELReasoner(cis, goals).saturate(abox, extra)
        a1 = result.consistent
        abox_kb = KnowledgeBase.of(abox)
        missing = [a for a in obs if not result.entails(a, abox_kb)]
        witness = None
        engine = "el-saturation"
    else:
        te = TypeEngine(full, problem.observation, (), max_candidates, node_budget)
        assignment = te.consistent(abox)
        a1 = assignment is not None
        witness = (
            {a: [str(c) for c in te.T.concepts(t)] for a, t in assignment.items()}
            if assignment is not None
            else None
        )
        missing = [] if not a1 else [a for a in obs if not te.entails(abox, a)]
        engine = "type-assignment"
    return VerificationReport(
        a1_consistent=a1,
        a2_entails=not missing,
        a3_in_signature=not offenders,
        a2_missing=missing,
        a1_witness=witness,
        a3_offenders=offenders,
        size=size(h),
        size_bound=problem.size_bound,
        engine=engine,
    )


def type_witness(T: TypeSet, assignment: Mapping[str, int]) -> dict[str, list[str]]:
    return {a: [str(c) for c in T.concepts(t)] for a, t in assignment.items()}


__all__ = [
    "ELReasoner",
    "ELResult",
    "TypeEngine",
    "VerificationReport",
    "alc_consistent",
    "alc_entails",
    "check_hypothesis",
    "el_consistent",
    "el_entails",
    "signature_offenders",
]
