"""Abstract syntax for the description logics EL, ELbot, ALC and ALCI.

Concepts, roles and axioms are immutable dataclasses so that they can be used
as dictionary keys, shared between workers and compared structurally.  The
module also houses the KRSS-style text format used for problem files, the
size metric used for size-restricted abduction, and dialect detection.

Problem file layout::

    # comments run to the end of the line
    :kb
    (implies (some r B) A)
    (implies (and A B) bot)
    :observation
    (instance a A)
    :sigma B r
    :bound 5
    :mode flat

Names in ``:sigma`` are classified as roles when they occur as roles in the
knowledge base or the observation and as concept names otherwise.  The
explicit forms ``(concepts ...)`` and ``(roles ...)`` override the guess and
are what the printer emits.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Iterator, Union


class SyntaxErrorDL(ValueError):
    """Malformed input, carrying the 1-based line and column of the problem."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)


class DialectError(ValueError):
    """An expression uses a constructor that the requested dialect lacks."""


class UnsupportedConstructor(DialectError):
    """Counting or functionality restrictions, which are out of scope."""


# ---------------------------------------------------------------------------
# Concepts and roles


@dataclass(frozen=True, slots=True)
class Role:
    name: str
    inverted: bool = False

    def inverse(self) -> Role:
        return Role(self.name, not self.inverted)

    def __str__(self) -> str:
        return f"(inv {self.name})" if self.inverted else self.name


class Concept:
    """Base class of all concept terms."""

    __slots__ = ()


@dataclass(frozen=True, slots=True)
class Top(Concept):
    def __str__(self) -> str:
        return "top"


@dataclass(frozen=True, slots=True)
class Bottom(Concept):
    def __str__(self) -> str:
        return "bot"


@dataclass(frozen=True, slots=True)
class Atom(Concept):
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class And(Concept):
    args: tuple[Concept, ...]

    def __post_init__(self):
        if not self.args:
            raise ValueError("conjunction needs at least one operand")

    def __str__(self) -> str:
        return "(and " + " ".join(map(str, self.args)) + ")"


@dataclass(frozen=True, slots=True)
class Or(Concept):
    args: tuple[Concept, ...]

    def __post_init__(self):
        if not self.args:
            raise ValueError("disjunction needs at least one operand")

    def __str__(self) -> str:
        return "(or " + " ".join(map(str, self.args)) + ")"


@dataclass(frozen=True, slots=True)
class Not(Concept):
    arg: Concept

    def __str__(self) -> str:
        return f"(not {self.arg})"


@dataclass(frozen=True, slots=True)
class Exists(Concept):
    role: Role
    filler: Concept

    def __str__(self) -> str:
        return f"(some {self.role} {self.filler})"


@dataclass(frozen=True, slots=True)
class Forall(Concept):
    role: Role
    filler: Concept

    def __str__(self) -> str:
        return f"(all {self.role} {self.filler})"


@dataclass(frozen=True, slots=True)
class AtMost(Concept):
    n: int
    role: Role
    filler: Concept

    def __post_init__(self):
        if self.n < 0:
            raise ValueError("cardinality must be non-negative")

    def __str__(self) -> str:
        return f"(at-most {self.n} {self.role} {self.filler})"


TOP = Top()
BOTTOM = Bottom()


def atom(name: str) -> Atom:
    return Atom(sys.intern(name))


def role(name: str, inverted: bool = False) -> Role:
    return Role(sys.intern(name), inverted)


def conj(*args: Concept) -> Concept:
    """Conjunction that collapses the unary and nullary cases."""
    if not args:
        return TOP
    if len(args) == 1:
        return args[0]
    return And(tuple(args))


def disj(*args: Concept) -> Concept:
    """Disjunction that collapses the unary and nullary cases."""
    if not args:
        return BOTTOM
    if len(args) == 1:
        return args[0]
    return Or(tuple(args))


def some(r: Union[Role, str], c: Concept) -> Exists:
    return Exists(role(r) if isinstance(r, str) else r, c)


def only(r: Union[Role, str], c: Concept) -> Forall:
    return Forall(role(r) if isinstance(r, str) else r, c)


# ---------------------------------------------------------------------------
# Axioms and knowledge bases


@dataclass(frozen=True, slots=True)
class CI:
    lhs: Concept
    rhs: Concept

    def __str__(self) -> str:
        return f"(implies {self.lhs} {self.rhs})"


@dataclass(frozen=True, slots=True)
class ConceptAssertion:
    concept: Concept
    individual: str

    def __str__(self) -> str:
        return f"(instance {self.individual} {self.concept})"


@dataclass(frozen=True, slots=True)
class RoleAssertion:
    role: str
    subject: str
    object: str

    def __str__(self) -> str:
        return f"(related {self.subject} {self.object} {self.role})"


Axiom = Union[CI, ConceptAssertion, RoleAssertion]
Assertion = Union[ConceptAssertion, RoleAssertion]


def is_assertion(ax: Axiom) -> bool:
    return isinstance(ax, (ConceptAssertion, RoleAssertion))


def is_flat(ax: Axiom) -> bool:
    return isinstance(ax, RoleAssertion) or (
        isinstance(ax, ConceptAssertion) and isinstance(ax.concept, Atom)
    )


@dataclass(frozen=True)
class KnowledgeBase:
    """An insertion-ordered, duplicate-free collection of axioms."""

    axioms: tuple[Axiom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "axioms", tuple(dict.fromkeys(self.axioms)))

    @classmethod
    def of(cls, axioms: Iterable[Axiom]) -> KnowledgeBase:
        return cls(tuple(axioms))

    def __iter__(self) -> Iterator[Axiom]:
        return iter(self.axioms)

    def __len__(self) -> int:
        return len(self.axioms)

    def __contains__(self, ax) -> bool:
        return ax in self._members

    @property
    def _members(self) -> frozenset:
        cached = self.__dict__.get("_member_set")
        if cached is None:
            cached = frozenset(self.axioms)
            object.__setattr__(self, "_member_set", cached)
        return cached

    def __or__(self, other: KnowledgeBase) -> KnowledgeBase:
        return KnowledgeBase(self.axioms + tuple(other.axioms))

    def __eq__(self, other) -> bool:
        return isinstance(other, KnowledgeBase) and self._members == other._members

    def __hash__(self) -> int:
        return hash(self._members)

    def cis(self) -> list[CI]:
        return [a for a in self.axioms if isinstance(a, CI)]

    def assertions(self) -> list[Assertion]:
        return [a for a in self.axioms if not isinstance(a, CI)]

    def concept_assertions(self) -> list[ConceptAssertion]:
        return [a for a in self.axioms if isinstance(a, ConceptAssertion)]

    def role_assertions(self) -> list[RoleAssertion]:
        return [a for a in self.axioms if isinstance(a, RoleAssertion)]

    def __str__(self) -> str:
        return "\n".join(map(str, self.axioms))


@dataclass(frozen=True)
class Signature:
    concept_names: frozenset[str] = frozenset()
    role_names: frozenset[str] = frozenset()

    @classmethod
    def of(cls, concepts: Iterable[str] = (), roles: Iterable[str] = ()) -> Signature:
        return cls(frozenset(map(sys.intern, concepts)), frozenset(map(sys.intern, roles)))

    def __or__(self, other: Signature) -> Signature:
        return Signature(
            self.concept_names | other.concept_names, self.role_names | other.role_names
        )

    def __le__(self, other: Signature) -> bool:
        return self.concept_names <= other.concept_names and self.role_names <= other.role_names

    def names(self) -> frozenset[str]:
        return self.concept_names | self.role_names


class Dialect(Enum):
    EL = 0
    ELbot = 1
    ALC = 2
    ALCI = 3

    def __le__(self, other: Dialect) -> bool:
        return self.value <= other.value

    def __lt__(self, other: Dialect) -> bool:
        return self.value < other.value

    @property
    def has_bottom(self) -> bool:
        return self is not Dialect.EL


MODES = ("flat", "complex", "complex-no-fresh")


@dataclass(frozen=True)
class AbductionProblem:
    kb: KnowledgeBase
    observation: KnowledgeBase
    sigma: Signature
    size_bound: int | None = None
    mode: str = "flat"
    dialect: Dialect = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        if any(isinstance(a, CI) for a in self.observation):
            raise ValueError("the observation must be an ABox")
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        detected = detect_dialect(self.kb, self.observation)
        if self.dialect is None:
            object.__setattr__(self, "dialect", detected)
        elif not detected <= self.dialect:
            raise DialectError(_dialect_gap_message(self.kb | self.observation, self.dialect))

    def replace(self, **changes) -> AbductionProblem:
        fields = dict(
            kb=self.kb,
            observation=self.observation,
            sigma=self.sigma,
            size_bound=self.size_bound,
            mode=self.mode,
            dialect=self.dialect,
        )
        fields.update(changes)
        return AbductionProblem(**fields)

    def individuals(self) -> list[str]:
        """ind(K ∪ Φ) in order of first occurrence."""
        return individuals_of(self.kb | self.observation)


# ---------------------------------------------------------------------------
# Traversals


def iter_subconcepts(c: Concept) -> Iterator[Concept]:
    """Yield c and all of its sub-terms (with repetitions)."""
    stack = [c]
    while stack:
        x = stack.pop()
        yield x
        if isinstance(x, (And, Or)):
            stack.extend(x.args)
        elif isinstance(x, Not):
            stack.append(x.arg)
        elif isinstance(x, (Exists, Forall, AtMost)):
            stack.append(x.filler)


def axiom_concepts(ax: Axiom) -> tuple[Concept, ...]:
    if isinstance(ax, CI):
        return (ax.lhs, ax.rhs)
    if isinstance(ax, ConceptAssertion):
        return (ax.concept,)
    return ()


def _parts(e) -> Iterable:
    if isinstance(e, KnowledgeBase):
        return e.axioms
    if isinstance(e, AbductionProblem):
        return (e.kb | e.observation).axioms
    if isinstance(e, (list, tuple, set, frozenset)):
        return e
    return (e,)


def subconcepts_of(e) -> set[Concept]:
    out: set[Concept] = set()
    for part in _parts(e):
        roots = (part,) if isinstance(part, Concept) else axiom_concepts(part)
        for c in roots:
            out.update(iter_subconcepts(c))
    return out


def signature_of(e) -> Signature:
    concepts: set[str] = set()
    roles: set[str] = set()
    for part in _parts(e):
        if isinstance(part, RoleAssertion):
            roles.add(part.role)
            continue
        roots = (part,) if isinstance(part, Concept) else axiom_concepts(part)
        for c in roots:
            for x in iter_subconcepts(c):
                if isinstance(x, Atom):
                    concepts.add(x.name)
                elif isinstance(x, (Exists, Forall, AtMost)):
                    roles.add(x.role.name)
    return Signature(frozenset(concepts), frozenset(roles))


def individuals_of(e) -> list[str]:
    """Individual names in order of first occurrence."""
    seen: dict[str, None] = {}
    for part in _parts(e):
        if isinstance(part, ConceptAssertion):
            seen.setdefault(part.individual)
        elif isinstance(part, RoleAssertion):
            seen.setdefault(part.subject)
            seen.setdefault(part.object)
    return list(seen)


def role_depth(c: Concept) -> int:
    if isinstance(c, (And, Or)):
        return max(role_depth(a) for a in c.args)
    if isinstance(c, Not):
        return role_depth(c.arg)
    if isinstance(c, (Exists, Forall, AtMost)):
        return 1 + role_depth(c.filler)
    return 0


# ---------------------------------------------------------------------------
# Size metric


def _role_size(r: Role) -> int:
    return 2 if r.inverted else 1


def size(e) -> int:
    """Symbol count: every operator and every name counts one.

    n-ary conjunctions and disjunctions count as n-1 binary operators,
    cardinalities count their binary length, a CI counts its inclusion
    symbol, a concept assertion C(a) is |C|+1 and a role assertion 3.
    """
    if isinstance(e, (Top, Bottom, Atom)):
        return 1
    if isinstance(e, (And, Or)):
        return sum(size(a) for a in e.args) + len(e.args) - 1
    if isinstance(e, Not):
        return 1 + size(e.arg)
    if isinstance(e, (Exists, Forall)):
        return 1 + _role_size(e.role) + size(e.filler)
    if isinstance(e, AtMost):
        return 1 + max(1, e.n.bit_length()) + _role_size(e.role) + size(e.filler)
    if isinstance(e, CI):
        return size(e.lhs) + size(e.rhs) + 1
    if isinstance(e, ConceptAssertion):
        return size(e.concept) + 1
    if isinstance(e, RoleAssertion):
        return 3
    if isinstance(e, Role):
        return _role_size(e)
    return sum(size(a) for a in _parts(e))


# ---------------------------------------------------------------------------
# Dialects


def _concept_dialect(c: Concept) -> Dialect:
    d = Dialect.EL
    for x in iter_subconcepts(c):
        if isinstance(x, AtMost):
            raise UnsupportedConstructor("number restrictions are not supported")
        if isinstance(x, (Exists, Forall)) and x.role.inverted:
            return Dialect.ALCI
        if isinstance(x, (Not, Or, Forall)):
            d = max(d, Dialect.ALC, key=lambda v: v.value)
        elif isinstance(x, Bottom):
            d = max(d, Dialect.ELbot, key=lambda v: v.value)
    return d


def detect_dialect(kb: KnowledgeBase, obs: KnowledgeBase | None = None) -> Dialect:
    """The least dialect in EL < ELbot < ALC < ALCI admitting every constructor."""
    d = Dialect.EL
    axioms = kb.axioms + (obs.axioms if obs is not None else ())
    for ax in axioms:
        for c in axiom_concepts(ax):
            cd = _concept_dialect(c)
            if cd.value > d.value:
                d = cd
    return d


def _dialect_gap_message(kb: KnowledgeBase, dialect: Dialect) -> str:
    for ax in kb:
        for c in axiom_concepts(ax):
            for x in iter_subconcepts(c):
                if isinstance(x, (Exists, Forall)) and x.role.inverted and dialect != Dialect.ALCI:
                    return f"inverse role not in {dialect.name}"
                if isinstance(x, Not) and dialect.value < Dialect.ALC.value:
                    return f"negation not in {dialect.name}"
                if isinstance(x, Or) and dialect.value < Dialect.ALC.value:
                    return f"disjunction not in {dialect.name}"
                if isinstance(x, Forall) and dialect.value < Dialect.ALC.value:
                    return f"value restriction not in {dialect.name}"
                if isinstance(x, Bottom) and dialect == Dialect.EL:
                    return "bottom not in EL"
    return f"input exceeds {dialect.name}"


# ---------------------------------------------------------------------------
# Tokenizer and parser


@dataclass(slots=True)
class _Token:
    text: str
    line: int
    column: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        i, n = 0, len(raw)
        while i < n:
            ch = raw[i]
            if ch == "#":
                break
            if ch.isspace():
                i += 1
            elif ch in "()":
                tokens.append(_Token(ch, lineno, i + 1))
                i += 1
            else:
                j = i
                while j < n and not raw[j].isspace() and raw[j] not in "()#":
                    j += 1
                tokens.append(_Token(raw[i:j], lineno, i + 1))
                i = j
    return tokens


# An s-expression is either a token (leaf) or a list of s-expressions with
# the token of its opening parenthesis.
SExpr = Union[_Token, "_List"]


@dataclass(slots=True)
class _List:
    items: list
    open: _Token


def _read_sexprs(tokens: list[_Token]) -> list[SExpr]:
    out: list[SExpr] = []
    stack: list[_List] = []
    for tok in tokens:
        if tok.text == "(":
            stack.append(_List([], tok))
        elif tok.text == ")":
            if not stack:
                raise SyntaxErrorDL("unbalanced ')'", tok.line, tok.column)
            done = stack.pop()
            (stack[-1].items if stack else out).append(done)
        else:
            (stack[-1].items if stack else out).append(tok)
    if stack:
        o = stack[-1].open
        raise SyntaxErrorDL("unclosed '('", o.line, o.column)
    return out


def _pos(x: SExpr) -> tuple[int, int]:
    tok = x if isinstance(x, _Token) else x.open
    return tok.line, tok.column


_KEYWORDS = {"and", "or", "not", "some", "all", "inv", "implies", "instance", "related",
             "at-most", "top", "bot"}


def _name(x: SExpr, what: str) -> str:
    if not isinstance(x, _Token) or x.text in _KEYWORDS:
        raise SyntaxErrorDL(f"expected {what}", *_pos(x))
    return sys.intern(x.text)


def _head(x: _List) -> str:
    if not x.items or not isinstance(x.items[0], _Token):
        raise SyntaxErrorDL("expected an operator", *_pos(x))
    return x.items[0].text


def _parse_role(x: SExpr) -> Role:
    if isinstance(x, _Token):
        return role(_name(x, "role name"))
    if _head(x) != "inv" or len(x.items) != 2:
        raise SyntaxErrorDL("expected a role", *_pos(x))
    return _parse_role(x.items[1]).inverse()


def _parse_concept(x: SExpr) -> Concept:
    if isinstance(x, _Token):
        if x.text == "top":
            return TOP
        if x.text == "bot":
            return BOTTOM
        return atom(_name(x, "concept"))
    op = _head(x)
    args = x.items[1:]
    if op in ("and", "or"):
        if not args:
            raise SyntaxErrorDL(f"empty '{op}'", *_pos(x))
        parts = tuple(_parse_concept(a) for a in args)
        return And(parts) if op == "and" else Or(parts)
    if op == "not":
        if len(args) != 1:
            raise SyntaxErrorDL("'not' takes one operand", *_pos(x))
        return Not(_parse_concept(args[0]))
    if op in ("some", "all"):
        if len(args) != 2:
            raise SyntaxErrorDL(f"'{op}' takes a role and a concept", *_pos(x))
        r, c = _parse_role(args[0]), _parse_concept(args[1])
        return Exists(r, c) if op == "some" else Forall(r, c)
    if op == "at-most":
        if len(args) != 3 or not isinstance(args[0], _Token) or not args[0].text.isdigit():
            raise SyntaxErrorDL("'at-most' takes a number, a role and a concept", *_pos(x))
        return AtMost(int(args[0].text), _parse_role(args[1]), _parse_concept(args[2]))
    raise SyntaxErrorDL(f"unknown concept constructor '{op}'", *_pos(x))


def _parse_axiom(x: SExpr) -> Axiom:
    if isinstance(x, _Token):
        raise SyntaxErrorDL("expected an axiom", *_pos(x))
    op = _head(x)
    args = x.items[1:]
    if op == "implies":
        if len(args) != 2:
            raise SyntaxErrorDL("'implies' takes two concepts", *_pos(x))
        return CI(_parse_concept(args[0]), _parse_concept(args[1]))
    if op == "instance":
        if len(args) != 2:
            raise SyntaxErrorDL("'instance' takes an individual and a concept", *_pos(x))
        return ConceptAssertion(_parse_concept(args[1]), _name(args[0], "individual"))
    if op == "related":
        if len(args) != 3:
            raise SyntaxErrorDL("'related' takes two individuals and a role", *_pos(x))
        a, b = _name(args[0], "individual"), _name(args[1], "individual")
        r = _parse_role(args[2])
        return RoleAssertion(r.name, b, a) if r.inverted else RoleAssertion(r.name, a, b)
    raise SyntaxErrorDL(f"unknown axiom '{op}'", *_pos(x))


def parse_concept(text: str) -> Concept:
    exprs = _read_sexprs(_tokenize(text))
    if len(exprs) != 1:
        raise SyntaxErrorDL("expected exactly one concept", 1, 1)
    return _parse_concept(exprs[0])


def parse_kb(text: str) -> KnowledgeBase:
    """Parse a bare list of axioms (the hypothesis file format)."""
    return KnowledgeBase.of(_parse_axiom(x) for x in _read_sexprs(_tokenize(text)))


_SECTIONS = (":kb", ":observation", ":sigma", ":bound", ":mode", ":dialect")


def parse_problem(text: str) -> AbductionProblem:
    tokens = _tokenize(text)
    sections: dict[str, list[_Token]] = {}
    current: str | None = None
    section_pos: dict[str, _Token] = {}
    for tok in tokens:
        if tok.text.startswith(":"):
            if tok.text not in _SECTIONS:
                raise SyntaxErrorDL(f"unknown directive '{tok.text}'", tok.line, tok.column)
            if tok.text in sections:
                raise SyntaxErrorDL(f"duplicate directive '{tok.text}'", tok.line, tok.column)
            current = tok.text
            sections[current] = []
            section_pos[current] = tok
        elif current is None:
            raise SyntaxErrorDL("content before the first directive", tok.line, tok.column)
        else:
            sections[current].append(tok)

    kb = KnowledgeBase.of(_parse_axiom(x) for x in _read_sexprs(sections.get(":kb", [])))
    obs_exprs = _read_sexprs(sections.get(":observation", []))
    obs_axioms = []
    for x in obs_exprs:
        ax = _parse_axiom(x)
        if isinstance(ax, CI):
            raise SyntaxErrorDL("observation must contain assertions only", *_pos(x))
        obs_axioms.append(ax)
    obs = KnowledgeBase.of(obs_axioms)
    sigma = _parse_sigma(_read_sexprs(sections.get(":sigma", [])), kb | obs)

    bound = None
    if ":bound" in sections:
        toks = sections[":bound"]
        if len(toks) != 1 or not toks[0].text.isdigit():
            t = toks[0] if toks else section_pos[":bound"]
            raise SyntaxErrorDL("':bound' takes one natural number", t.line, t.column)
        bound = int(toks[0].text)

    mode = "flat"
    if ":mode" in sections:
        toks = sections[":mode"]
        if len(toks) != 1 or toks[0].text not in MODES:
            t = toks[0] if toks else section_pos[":mode"]
            raise SyntaxErrorDL(f"':mode' takes one of {', '.join(MODES)}", t.line, t.column)
        mode = toks[0].text

    dialect = None
    if ":dialect" in sections:
        toks = sections[":dialect"]
        names = {d.name: d for d in Dialect}
        if len(toks) != 1 or toks[0].text not in names:
            t = toks[0] if toks else section_pos[":dialect"]
            raise SyntaxErrorDL("':dialect' takes one of EL, ELbot, ALC, ALCI", t.line, t.column)
        dialect = names[toks[0].text]
        try:
            detected = detect_dialect(kb, obs)
        except UnsupportedConstructor as exc:
            raise SyntaxErrorDL(str(exc), toks[0].line, toks[0].column) from None
        if not detected <= dialect:
            t = section_pos[":dialect"]
            raise SyntaxErrorDL(_dialect_gap_message(kb | obs, dialect), t.line, t.column)
    try:
        return AbductionProblem(kb, obs, sigma, bound, mode, dialect)
    except UnsupportedConstructor as exc:
        raise SyntaxErrorDL(str(exc), 1, 1) from None


def _parse_sigma(exprs: list[SExpr], context: KnowledgeBase) -> Signature:
    used_roles = signature_of(context).role_names
    concepts: list[str] = []
    roles: list[str] = []
    for x in exprs:
        if isinstance(x, _Token):
            n = _name(x, "signature name")
            (roles if n in used_roles else concepts).append(n)
            continue
        head = _head(x)
        if head not in ("concepts", "roles"):
            raise SyntaxErrorDL("expected a name, (concepts ...) or (roles ...)", *_pos(x))
        for y in x.items[1:]:
            (concepts if head == "concepts" else roles).append(_name(y, "signature name"))
    return Signature.of(concepts, roles)


def print_problem(p: AbductionProblem) -> str:
    lines = [":kb"]
    lines += [str(a) for a in p.kb]
    lines.append(":observation")
    lines += [str(a) for a in p.observation]
    concepts = " ".join(sorted(p.sigma.concept_names))
    roles = " ".join(sorted(p.sigma.role_names))
    lines.append(f":sigma (concepts {concepts}) (roles {roles})".replace("( ", "(").replace(" )", ")"))
    if p.size_bound is not None:
        lines.append(f":bound {p.size_bound}")
    lines.append(f":mode {p.mode}")
    lines.append(f":dialect {p.dialect.name}")
    return "\n".join(lines) + "\n"


def print_kb(kb: KnowledgeBase) -> str:
    return "".join(f"{a}\n" for a in kb)
