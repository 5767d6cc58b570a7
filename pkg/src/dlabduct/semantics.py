"""Finite interpretations, model checking and the type-assignment model.

Extensions are stored as Python integers used as bit-vectors over the
domain, which keeps exhaustive enumeration of small interpretations cheap.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

from .syntax import (
    CI,
    And,
    Atom,
    AtMost,
    Bottom,
    Concept,
    ConceptAssertion,
    Exists,
    Forall,
    KnowledgeBase,
    Not,
    Or,
    Role,
    RoleAssertion,
    Top,
)


@dataclass
class FiniteInterpretation:
    """Domain elements are the integers ``0 .. size-1``."""

    size: int
    individual_map: dict[str, int] = field(default_factory=dict)
    concept_ext: dict[str, int] = field(default_factory=dict)
    role_ext: dict[str, frozenset[tuple[int, int]]] = field(default_factory=dict)

    def __post_init__(self):
        self._succ: dict[Role, list[int]] = {}

    @property
    def full(self) -> int:
        return (1 << self.size) - 1

    @property
    def domain(self) -> range:
        return range(self.size)

    def successors(self, r: Role) -> list[int]:
        """Per element, the bit-vector of its R-successors."""
        rows = self._succ.get(r)
        if rows is None:
            rows = [0] * self.size
            for d, e in self.role_ext.get(r.name, ()):
                if r.inverted:
                    d, e = e, d
                rows[d] |= 1 << e
            self._succ[r] = rows
        return rows

    def mask(self, c: Concept) -> int:
        """Extension of c as a bit-vector."""
        if isinstance(c, Atom):
            return self.concept_ext.get(c.name, 0) & self.full
        if isinstance(c, Top):
            return self.full
        if isinstance(c, Bottom):
            return 0
        if isinstance(c, And):
            m = self.full
            for a in c.args:
                m &= self.mask(a)
            return m
        if isinstance(c, Or):
            m = 0
            for a in c.args:
                m |= self.mask(a)
            return m
        if isinstance(c, Not):
            return self.full & ~self.mask(c.arg)
        if isinstance(c, Exists):
            filler = self.mask(c.filler)
            rows = self.successors(c.role)
            return sum(1 << d for d in range(self.size) if rows[d] & filler)
        if isinstance(c, Forall):
            filler = self.mask(c.filler)
            rows = self.successors(c.role)
            return sum(1 << d for d in range(self.size) if not rows[d] & ~filler)
        if isinstance(c, AtMost):
            filler = self.mask(c.filler)
            rows = self.successors(c.role)
            return sum(
                1 << d for d in range(self.size) if bin(rows[d] & filler).count("1") <= c.n
            )
        raise TypeError(f"not a concept: {c!r}")

    def element(self, individual: str) -> int:
        return self.individual_map[individual]

    def satisfies(self, ax) -> bool:
        if isinstance(ax, CI):
            return not self.mask(ax.lhs) & ~self.mask(ax.rhs)
        if isinstance(ax, ConceptAssertion):
            return bool(self.mask(ax.concept) >> self.element(ax.individual) & 1)
        if isinstance(ax, RoleAssertion):
            pair = (self.element(ax.subject), self.element(ax.object))
            return pair in self.role_ext.get(ax.role, ())
        raise TypeError(f"not an axiom: {ax!r}")


def eval_concept(i: FiniteInterpretation, c: Concept) -> frozenset[int]:
    m = i.mask(c)
    return frozenset(d for d in range(i.size) if m >> d & 1)


def is_model(i: FiniteInterpretation, kb: KnowledgeBase | Iterable) -> bool:
    return all(i.satisfies(ax) for ax in kb)


def model_from_assignment(
    assignment: Mapping[str, int],
    T,
    closure,
    roles: Iterable[str] = (),
) -> FiniteInterpretation:
    """Canonical model of a type assignment.

    The domain holds one element per assigned individual followed by one
    element per type of ``T``.  Concept names are read off the types and a
    pair is related by r exactly when the type of the target is an
    r-successor candidate of the type of the source.  ``roles`` adds role
    names that occur only in role assertions.
    """
    inds = list(assignment)
    n_types = len(T)
    for a in inds:
        if not 0 <= assignment[a] < n_types:
            raise ValueError(f"type index {assignment[a]} of {a} is outside the type set")
    elem_type = [assignment[a] for a in inds] + list(range(n_types))
    size = len(elem_type)

    concept_ext: dict[str, int] = {}
    for pos, c in enumerate(closure.concepts):
        if isinstance(c, Atom):
            col = T.matrix[:, pos]
            concept_ext[c.name] = sum(1 << d for d, t in enumerate(elem_type) if col[t])

    role_names = sorted(set(closure.role_names()) | set(roles))
    role_ext: dict[str, frozenset[tuple[int, int]]] = {}
    for r in role_names:
        rr = Role(r)
        pairs = set()
        for d, t in enumerate(elem_type):
            cand = T.succ_candidates(t, rr)
            for e, t2 in enumerate(elem_type):
                if cand[t2]:
                    pairs.add((d, e))
        role_ext[r] = frozenset(pairs)
    return FiniteInterpretation(
        size, {a: k for k, a in enumerate(inds)}, concept_ext, role_ext
    )


def enumerate_interpretations(
    domain_size: int,
    concept_names: Iterable[str],
    role_names: Iterable[str],
    individuals: Iterable[str] = (),
) -> Iterator[FiniteInterpretation]:
    """All interpretations over a fixed domain size and vocabulary."""
    cs = sorted(concept_names)
    rs = sorted(role_names)
    inds = list(individuals)
    n = domain_size
    pairs = [(d, e) for d in range(n) for e in range(n)]
    ext_choices = range(1 << n)
    rel_choices = range(1 << len(pairs))
    for cvals in itertools.product(ext_choices, repeat=len(cs)):
        for rvals in itertools.product(rel_choices, repeat=len(rs)):
            role_ext = {
                r: frozenset(p for k, p in enumerate(pairs) if bits >> k & 1)
                for r, bits in zip(rs, rvals)
            }
            for imap in itertools.product(range(n), repeat=len(inds)):
                yield FiniteInterpretation(
                    n, dict(zip(inds, imap)), dict(zip(cs, cvals)), role_ext
                )
