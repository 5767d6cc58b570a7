"""Signature-based ABox abduction for EL, ELbot, ALC and ALCI."""

from __future__ import annotations

from .complex import complex_abduce_elbot, flatten, rollup
from .flat import flat_abduce, trivial_hypothesis
from .minsize import Outcome, SearchConfig, min_abduce
from .reasoner import VerificationReport, check_hypothesis, el_entails
from .syntax import (
    AbductionProblem,
    Dialect,
    KnowledgeBase,
    Signature,
    parse_concept,
    parse_kb,
    parse_problem,
    print_kb,
    print_problem,
    size,
)
from .typecore import ResourceError, types_for

__version__ = "0.1.0"

__all__ = [
    "AbductionProblem",
    "Dialect",
    "KnowledgeBase",
    "Outcome",
    "ResourceError",
    "SearchConfig",
    "Signature",
    "VerificationReport",
    "check_hypothesis",
    "complex_abduce_elbot",
    "el_entails",
    "flat_abduce",
    "flatten",
    "min_abduce",
    "parse_concept",
    "parse_kb",
    "parse_problem",
    "print_kb",
    "print_problem",
    "rollup",
    "size",
    "trivial_hypothesis",
    "types_for",
]
