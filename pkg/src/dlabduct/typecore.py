"""Subconcept closures, types and type elimination.

A type is a subset of the closure that could be the set of closure concepts
satisfied by one domain element.  Types are stored as rows of a boolean
matrix; successor compatibility between types is decided with packed
bit-keys so that the elimination fixpoint works on groups of types instead of
on pairs.

Reasoning happens on a core syntax: disjunction and value restriction are
rewritten into negation, conjunction and existential restriction, and double
negations are dropped.  ``Closure.position`` accepts user syntax and applies
the rewriting itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .syntax import (
    TOP,
    And,
    Atom,
    AtMost,
    Bottom,
    Concept,
    Exists,
    Forall,
    KnowledgeBase,
    Not,
    Or,
    Role,
    Top,
    UnsupportedConstructor,
    axiom_concepts,
    iter_subconcepts,
    size,
)

DEFAULT_MAX_CANDIDATES = 1 << 20


class ResourceError(RuntimeError):
    """A configured resource cap would be exceeded."""


# ---------------------------------------------------------------------------
# Core syntax


def negate(c: Concept) -> Concept:
    return c.arg if isinstance(c, Not) else Not(c)


def to_core(c: Concept) -> Concept:
    if isinstance(c, (Atom, Top, Bottom)):
        return c
    if isinstance(c, And):
        return And(tuple(to_core(a) for a in c.args))
    if isinstance(c, Or):
        return Not(And(tuple(negate(to_core(a)) for a in c.args)))
    if isinstance(c, Not):
        return negate(to_core(c.arg))
    if isinstance(c, Exists):
        return Exists(c.role, to_core(c.filler))
    if isinstance(c, Forall):
        return Not(Exists(c.role, negate(to_core(c.filler))))
    if isinstance(c, AtMost):
        raise UnsupportedConstructor("number restrictions are not supported")
    raise TypeError(f"not a concept: {c!r}")


_KIND_RANK = {Top: 0, Atom: 1, Bottom: 2, Not: 3, And: 4, Exists: 5}


def _closure_key(c: Concept):
    return (size(c), _KIND_RANK[type(c)], str(c))


class Closure:
    """Indexed set of core concepts closed under sub-terms, with ⊤ at 0."""

    def __init__(self, concepts: Iterable[Concept] = ()):
        found: set[Concept] = {TOP}
        for c in concepts:
            found.update(iter_subconcepts(to_core(c)))
        ordered = sorted(found - {TOP}, key=_closure_key)
        self.concepts: list[Concept] = [TOP] + ordered
        self.index: dict[Concept, int] = {c: i for i, c in enumerate(self.concepts)}
        self.exists_by_role: dict[Role, list[tuple[int, int]]] = {}
        for i, c in enumerate(self.concepts):
            if isinstance(c, Exists):
                self.exists_by_role.setdefault(c.role, []).append((i, self.index[c.filler]))

    def __len__(self) -> int:
        return len(self.concepts)

    def __contains__(self, c: Concept) -> bool:
        try:
            return to_core(c) in self.index
        except UnsupportedConstructor:
            return False

    def __iter__(self):
        return iter(self.concepts)

    def position(self, c: Concept) -> int:
        core = to_core(c)
        try:
            return self.index[core]
        except KeyError:
            raise KeyError(f"{c} is not in the closure") from None

    @property
    def base_positions(self) -> list[int]:
        """Positions whose membership is a free choice: names and existentials."""
        return [i for i, c in enumerate(self.concepts) if isinstance(c, (Atom, Exists))]

    def atom_positions(self) -> dict[str, int]:
        return {c.name: i for i, c in enumerate(self.concepts) if isinstance(c, Atom)}

    def role_names(self) -> list[str]:
        return sorted({r.name for r in self.exists_by_role})

    def roles(self) -> list[Role]:
        """Every role and inverse whose existentials constrain successors."""
        out = set(self.exists_by_role)
        out |= {r.inverse() for r in self.exists_by_role}
        return sorted(out, key=lambda r: (r.name, r.inverted))

    def has_inverse(self) -> bool:
        return any(r.inverted for r in self.exists_by_role)


def build_closure(
    kb: KnowledgeBase | None = None,
    obs: KnowledgeBase | None = None,
    extra: Iterable[Concept] = (),
) -> Closure:
    roots: list[Concept] = []
    for source in (kb, obs):
        if source is not None:
            for ax in source:
                roots.extend(axiom_concepts(ax))
    roots.extend(extra)
    return Closure(roots)


# ---------------------------------------------------------------------------
# Bit keys


def _pack_rows(bits: np.ndarray) -> np.ndarray:
    """Pack each boolean row into one integer (uint64, or Python ints if wide)."""
    m, k = bits.shape
    if k <= 63:
        weights = np.left_shift(np.uint64(1), np.arange(k, dtype=np.uint64))
        if k == 0:
            return np.zeros(m, dtype=np.uint64)
        return (bits.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)
    out = np.zeros(m, dtype=object)
    for start in range(0, k, 63):
        part = _pack_rows(bits[:, start : start + 63])
        out = out + np.array([int(v) << start for v in part], dtype=object)
    return out


@dataclass
class _RoleKeys:
    """Successor-compatibility keys for one role over the rows of a matrix.

    Type t' may be an R-successor of t iff ``src[t] & tgt[t'] == 0``.  The
    low bits of ``tgt`` record which fillers of ∃R.C the target contains and
    ``need`` marks the existentials ∃R.C a source contains.
    """

    src: np.ndarray
    tgt: np.ndarray
    need: np.ndarray


def _role_keys(matrix: np.ndarray, closure: Closure, r: Role) -> _RoleKeys:
    fwd = closure.exists_by_role.get(r, [])
    bwd = closure.exists_by_role.get(r.inverse(), [])
    ex_f = [e for e, _ in fwd]
    fil_f = [f for _, f in fwd]
    ex_b = [e for e, _ in bwd]
    fil_b = [f for _, f in bwd]
    src_bits = np.concatenate([~matrix[:, ex_f], matrix[:, fil_b]], axis=1)
    tgt_bits = np.concatenate([matrix[:, fil_f], ~matrix[:, ex_b]], axis=1)
    need_bits = np.concatenate(
        [matrix[:, ex_f], np.zeros((matrix.shape[0], len(bwd)), dtype=bool)], axis=1
    )
    return _RoleKeys(_pack_rows(src_bits), _pack_rows(tgt_bits), _pack_rows(need_bits))


def _is_zero(a: np.ndarray) -> np.ndarray:
    return a == 0


# ---------------------------------------------------------------------------
# Candidate generation and elimination


def _ci_positions(closure: Closure, kb: KnowledgeBase) -> list[tuple[int, int]]:
    out = []
    for ax in kb.cis():
        out.append((closure.position(ax.lhs), closure.position(ax.rhs)))
    return out


def _locally_coherent(closure: Closure, cis, max_candidates: int, chunk_bits: int = 16):
    """All subsets satisfying the bottom, conjunction, negation and CI conditions."""
    base = closure.base_positions
    k = len(base)
    if (1 << k) > max_candidates:
        raise ResourceError(
            f"closure has {k} independent positions: 2^{k} candidate types exceed the cap "
            f"of {max_candidates}"
        )
    n = len(closure)
    derived = []
    for pos, c in enumerate(closure.concepts):
        if isinstance(c, Top):
            derived.append((pos, "top", None))
        elif isinstance(c, Bottom):
            derived.append((pos, "bot", None))
        elif isinstance(c, And):
            derived.append((pos, "and", [closure.index[a] for a in c.args]))
        elif isinstance(c, Not):
            derived.append((pos, "not", closure.index[c.arg]))
    shifts = np.arange(k, dtype=np.int64)
    total = 1 << k
    step = 1 << min(k, chunk_bits)
    blocks = []
    for start in range(0, total, step):
        idx = np.arange(start, min(start + step, total), dtype=np.int64)
        M = np.zeros((len(idx), n), dtype=bool)
        if k:
            M[:, base] = ((idx[:, None] >> shifts) & 1).astype(bool)
        for pos, kind, arg in derived:
            if kind == "top":
                M[:, pos] = True
            elif kind == "and":
                M[:, pos] = M[:, arg].all(axis=1)
            elif kind == "not":
                M[:, pos] = ~M[:, arg]
        keep = np.ones(len(idx), dtype=bool)
        for lhs, rhs in cis:
            keep &= ~M[:, lhs] | M[:, rhs]
        blocks.append(M[keep])
    return np.concatenate(blocks, axis=0) if blocks else np.zeros((0, n), dtype=bool)


def _eliminate(matrix: np.ndarray, closure: Closure) -> np.ndarray:
    """Boolean mask of the rows surviving the existential-witness condition."""
    alive = np.ones(matrix.shape[0], dtype=bool)
    keys = {r: _role_keys(matrix, closure, r) for r in closure.exists_by_role}
    changed = True
    while changed:
        changed = False
        for r, kk in keys.items():
            idx = np.flatnonzero(alive)
            if idx.size == 0:
                return alive
            targets = np.unique(kk.tgt[idx])
            rows = idx[~_is_zero(kk.need[idx])]
            if rows.size == 0:
                continue
            src_rows = kk.src[rows]
            for s in np.unique(src_rows):
                ok_targets = targets[_is_zero(targets & s)]
                ok = np.bitwise_or.reduce(ok_targets) if ok_targets.size else kk.src.dtype.type(0)
                sel = rows[src_rows == s]
                bad = sel[~_is_zero(kk.need[sel] & ~ok)]
                if bad.size:
                    alive[bad] = False
                    changed = True
    return alive


class TypeSet:
    """The surviving types, ordered by size and then by member positions."""

    def __init__(self, closure: Closure, matrix: np.ndarray):
        self.closure = closure
        order = sorted(
            range(matrix.shape[0]),
            key=lambda i: (int(matrix[i].sum()), tuple(np.flatnonzero(matrix[i]))),
        )
        self.matrix = matrix[order] if order else matrix
        self.matrix.setflags(write=False)
        self._keys: dict[Role, _RoleKeys] = {}
        self._succ: dict[tuple[int, Role], np.ndarray] = {}
        self._lookup = {self.mask(i): i for i in range(len(self))}

    def __len__(self) -> int:
        return self.matrix.shape[0]

    def mask(self, i: int) -> int:
        return int.from_bytes(np.packbits(self.matrix[i], bitorder="little").tobytes(), "little")

    def members(self, i: int) -> list[int]:
        return [int(p) for p in np.flatnonzero(self.matrix[i])]

    def concepts(self, i: int) -> list[Concept]:
        return [self.closure.concepts[p] for p in self.members(i)]

    def contains(self, i: int, c: Concept) -> bool:
        return bool(self.matrix[i, self.closure.position(c)])

    def find(self, concepts: Iterable[Concept]) -> int | None:
        """Index of the type whose members are exactly ``concepts`` (⊤ implied)."""
        positions = {0} | {self.closure.position(c) for c in concepts}
        m = sum(1 << p for p in positions)
        return self._lookup.get(m)

    def index_of_row(self, row: np.ndarray) -> int | None:
        m = int.from_bytes(np.packbits(row, bitorder="little").tobytes(), "little")
        return self._lookup.get(m)

    def keys(self, r: Role) -> _RoleKeys:
        kk = self._keys.get(r)
        if kk is None:
            kk = _role_keys(self.matrix, self.closure, r)
            self._keys[r] = kk
        return kk

    def succ_candidates(self, i: int, r: Role) -> np.ndarray:
        """Boolean vector over type indices: the possible R-successor types of type i."""
        hit = self._succ.get((i, r))
        if hit is None:
            kk = self.keys(r)
            hit = _is_zero(kk.tgt & kk.src[i])
            hit.setflags(write=False)
            self._succ[(i, r)] = hit
        return hit

    def succ_pair(self, i: int, r: Role, j: int) -> bool:
        kk = self.keys(r)
        return bool(_is_zero(kk.tgt[j] & kk.src[i]))

    def with_concept(self, c: Concept) -> np.ndarray:
        return self.matrix[:, self.closure.position(c)]

    @property
    def ell(self) -> int:
        """Bound |T|·2^|T| on the internal nodes of a shrunk abstraction."""
        return len(self) * (1 << len(self))

    def to_json(self) -> str:
        return json.dumps(
            [[str(c) for c in self.concepts(i)] for i in range(len(self))], indent=1
        )


def type_elimination(
    closure: Closure,
    kb: KnowledgeBase,
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> TypeSet:
    """Greatest set of closure subsets satisfying the five type conditions."""
    cis = _ci_positions(closure, kb)
    candidates = _locally_coherent(closure, cis, max_candidates)
    alive = _eliminate(candidates, closure)
    return TypeSet(closure, candidates[alive])


def types_for(
    kb: KnowledgeBase,
    obs: KnowledgeBase | None = None,
    extra: Sequence[Concept] = (),
    max_candidates: int = DEFAULT_MAX_CANDIDATES,
) -> TypeSet:
    """Closure of kb, obs and extra followed by type elimination."""
    return type_elimination(build_closure(kb, obs, extra), kb, max_candidates)

