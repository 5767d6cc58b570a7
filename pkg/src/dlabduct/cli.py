"""Command-line front end.

Every command prints one JSON report (``generate`` prints a problem file)
and exits with 0 for a hypothesis or a passed check, 1 when there is none,
2 when a budget ran out and 3 for input errors.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from typing import Sequence

from .abstraction import (
    AbstractionContext,
    abstraction_to_abox,
    check_alc_conform,
    check_sigma_complete,
    from_json,
)
from .complex import complex_abduce_elbot
from .flat import FlatStats, flat_abduce
from .generators import (
    TilingInstance,
    gen_alc_tripleexp,
    gen_cnf,
    gen_double_counter,
    gen_exp_counter,
    gen_tiling,
    tiling_to_hypothesis,
    witness_concept,
)
from .minsize import Outcome, SearchConfig, min_abduce
from .reasoner import DEFAULT_NODE_BUDGET, check_hypothesis
from .syntax import (
    AbductionProblem,
    ConceptAssertion,
    Dialect,
    KnowledgeBase,
    SyntaxErrorDL,
    parse_kb,
    parse_problem,
    print_kb,
    print_problem,
    size,
)
from .typecore import DEFAULT_MAX_CANDIDATES, ResourceError, build_closure, type_elimination

SCHEMA = 1
EXIT = {"hypothesis": 0, "verified": 0, "none": 1, "failed": 1, "unknown": 2, "error": 3}


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(3, f"{self.prog}: error: {message}\n")


def _env_number(name: str, default, kind=int):
    raw = os.environ.get(name)
    if raw is None:
        return default
    try:
        return kind(raw)
    except ValueError:
        raise InputError(f"environment variable {name} must be a number") from None


def _add_budgets(p: argparse.ArgumentParser) -> None:
    p.add_argument("--time-budget", type=float, default=None, help="wall-clock seconds (default 60)")
    p.add_argument("--node-budget", type=int, default=None, help="search nodes (default 10^7)")
    p.add_argument("--max-types", type=int, default=None, help="candidate types (default 2^20)")
    p.add_argument("--timings", action="store_true", help="include wall-clock timings in the report")


def _budgets(args) -> tuple[float, int, int]:
    t = args.time_budget if args.time_budget is not None else _env_number("DLABDUCT_TIME_BUDGET", 60.0, float)
    n = args.node_budget if args.node_budget is not None else _env_number("DLABDUCT_NODE_BUDGET", DEFAULT_NODE_BUDGET)
    m = args.max_types if args.max_types is not None else _env_number("DLABDUCT_MAX_TYPES", DEFAULT_MAX_CANDIDATES)
    return t, n, m


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dlabduct", description="Signature-based ABox abduction for description logics.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("abduce", help="compute a hypothesis")
    p.add_argument("problem")
    p.add_argument("--mode", choices=["flat", "complex", "complex-no-fresh"])
    p.add_argument("--bound", type=int, help="size bound (switches to bounded search)")
    p.add_argument("--fresh", type=int, default=0, help="fresh individuals for bounded search")
    p.add_argument("--chain-length", type=int, help="chain length for complex-no-fresh")
    p.add_argument("--jobs", type=int, default=1)
    _add_budgets(p)

    p = sub.add_parser("verify", help="check A1-A3 and the size bound")
    p.add_argument("problem")
    p.add_argument("hypothesis")
    _add_budgets(p)

    p = sub.add_parser("minimize", help="size-minimal flat hypothesis")
    p.add_argument("problem")
    p.add_argument("--bound", type=int)
    p.add_argument("--fresh", type=int, default=0)
    _add_budgets(p)

    p = sub.add_parser("generate", help="print a generated problem file")
    p.add_argument(
        "family", choices=["counter", "double-counter", "cnf", "tiling", "alc-tripleexp"]
    )
    p.add_argument("params", nargs="*", help="n, a CNF like '1,-2;2', or a tiling JSON file")
    p.add_argument("--hypothesis", action="store_true", help="print the known hypothesis instead")
    p.add_argument("--bound", type=int, help="override the size bound of the generated problem")
    p.add_argument("-o", "--output")

    p = sub.add_parser("abstract", help="interpretation abstractions")
    p.add_argument("action", choices=["check", "extract"])
    p.add_argument("abstraction")
    p.add_argument("--problem", required=True)
    _add_budgets(p)

    p = sub.add_parser("types", help="list the surviving types of a problem")
    p.add_argument("problem")
    _add_budgets(p)
    return parser


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_problem(path: str) -> AbductionProblem:
    return parse_problem(_read(path))


def _report(argv: Sequence[str], outcome: str, **extra) -> dict:
    rep = {"schema": SCHEMA, "command": list(argv), "outcome": outcome}
    rep.update(extra)
    return rep


def _hyp_fields(h: KnowledgeBase | None) -> dict:
    if h is None:
        return {"hypothesis": None, "size": None}
    return {"hypothesis": print_kb(h), "size": size(h)}


def _verified(problem, h, max_types, nodes) -> dict:
    rep = check_hypothesis(problem, h, max_types, nodes)
    if not rep.passed:
        raise AssertionError("internal error: produced hypothesis failed verification")
    return rep.to_dict()


def cmd_abduce(args, argv) -> dict:
    t_budget, nodes, max_types = _budgets(args)
    problem = _load_problem(args.problem)
    mode = args.mode or problem.mode
    bound = args.bound if args.bound is not None else problem.size_bound
    if bound is not None:
        problem = problem.replace(size_bound=bound)
        return _run_minimize(problem, args, argv, bound)
    stats = FlatStats()
    start = time.monotonic()
    if mode == "complex-no-fresh":
        if not problem.dialect <= Dialect.ELbot:
            return _report(
                argv, "unknown", reason="complex hypotheses without fresh individuals are only searched for EL and ELbot",
                **_hyp_fields(None),
            )
        h = complex_abduce_elbot(problem, args.chain_length, max_types, nodes, t_budget, stats)
    else:
        h = flat_abduce(problem, max_types, nodes, t_budget, args.jobs, stats)
    elapsed = time.monotonic() - start
    extra = {"stats": stats.to_dict(), "mode": mode}
    if args.timings:
        extra["seconds"] = round(elapsed, 3)
    if h is None:
        if mode == "complex" and not problem.dialect <= Dialect.ELbot:
            return _report(argv, "unknown", reason="no flat hypothesis; complex ALC hypotheses are not searched",
                           **_hyp_fields(None), **extra)
        return _report(argv, "none", **_hyp_fields(None), **extra)
    extra["verification"] = _verified(problem, h, max_types, nodes)
    return _report(argv, "hypothesis", **_hyp_fields(h), **extra)


def _run_minimize(problem: AbductionProblem, args, argv, bound) -> dict:
    t_budget, nodes, max_types = _budgets(args)
    if args.fresh < 0:
        raise InputError("--fresh must be non-negative")
    cfg = SearchConfig.with_fresh(args.fresh, node_budget=nodes, time_budget=t_budget,
                                  max_candidates=max_types, bound=bound)
    res = min_abduce(problem, cfg)
    extra = {"stats": res.to_dict()}
    if args.timings:
        extra["seconds"] = round(res.seconds, 3)
    if res.outcome is Outcome.HYPOTHESIS:
        extra["verification"] = _verified(problem.replace(size_bound=bound), res.hypothesis, max_types, nodes)
        return _report(argv, "hypothesis", **_hyp_fields(res.hypothesis), **extra)
    if res.outcome is Outcome.UNKNOWN:
        return _report(argv, "unknown", reason=res.reason, **_hyp_fields(None), **extra)
    return _report(argv, "none", **_hyp_fields(None), **extra)


def cmd_minimize(args, argv) -> dict:
    problem = _load_problem(args.problem)
    bound = args.bound if args.bound is not None else problem.size_bound
    return _run_minimize(problem, args, argv, bound)


def cmd_verify(args, argv) -> dict:
    _, nodes, max_types = _budgets(args)
    problem = _load_problem(args.problem)
    h = parse_kb(_read(args.hypothesis))
    start = time.monotonic()
    rep = check_hypothesis(problem, h, max_types, nodes)
    extra = {"verification": rep.to_dict()}
    if args.timings:
        extra["seconds"] = round(time.monotonic() - start, 3)
    return _report(argv, "verified" if rep.passed else "failed", **_hyp_fields(h), **extra)


def _int_param(params: Sequence[str], what: str) -> int:
    if len(params) != 1 or not params[0].isdigit() or int(params[0]) < 1:
        raise InputError(f"{what} takes one positive integer")
    return int(params[0])


def _parse_cnf(text: str) -> list[list[int]]:
    try:
        clauses = [[int(x) for x in c.split(",") if x.strip()] for c in text.split(";")]
    except ValueError:
        raise InputError("a CNF is written as clauses separated by ';', literals by ','") from None
    if not clauses or any(not c or 0 in c for c in clauses):
        raise InputError("clauses must be non-empty and literals non-zero")
    return clauses


def _load_tiling(path: str) -> tuple[TilingInstance, dict | None]:
    try:
        data = json.loads(_read(path))
        inst = TilingInstance(
            tuple(data["tiles"]),
            tuple(data.get("initial", [])),
            data["final"],
            frozenset(tuple(p) for p in data["horizontal"]),
            frozenset(tuple(p) for p in data["vertical"]),
            int(data["n"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad tiling instance: {exc}") from None
    grid = None
    if "tiling" in data:
        grid = {}
        for j, row in enumerate(data["tiling"], start=1):
            for i, tile in enumerate(row, start=1):
                grid[(i, j)] = tile
    return inst, grid


def cmd_generate(args) -> str:
    text = _generate(args)
    if args.bound is not None and not args.hypothesis:
        text = print_problem(parse_problem(text).replace(size_bound=args.bound))
    return text


def _generate(args) -> str:
    fam, params = args.family, args.params
    if fam in ("counter", "double-counter"):
        n = _int_param(params, fam)
        if args.hypothesis:
            raise InputError(f"no stored hypothesis for the {fam} family")
        p = gen_exp_counter(n) if fam == "counter" else gen_double_counter(n)
        return print_problem(p)
    if fam == "cnf":
        if len(params) != 1:
            raise InputError("cnf takes one formula such as '1,-2;2'")
        if args.hypothesis:
            raise InputError("no stored hypothesis for the cnf family")
        return print_problem(gen_cnf(_parse_cnf(params[0])))
    if fam == "tiling":
        if len(params) != 1:
            raise InputError("tiling takes one instance file")
        inst, grid = _load_tiling(params[0])
        if args.hypothesis:
            if grid is None:
                raise InputError("the instance file has no 'tiling' entry")
            try:
                return print_kb(tiling_to_hypothesis(inst, grid))
            except ValueError as exc:
                raise InputError(str(exc)) from None
        return print_problem(gen_tiling(inst)[0])
    n = _int_param(params, fam)
    if args.hypothesis:
        return print_kb(KnowledgeBase.of([ConceptAssertion(witness_concept(n), "a")]))
    return print_problem(gen_alc_tripleexp(n))


def cmd_abstract(args, argv) -> dict:
    _, _, max_types = _budgets(args)
    problem = _load_problem(args.problem)
    ctx = AbstractionContext.for_problem(problem, max_types)
    try:
        a = from_json(_read(args.abstraction), ctx)
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"bad abstraction: {exc}") from None
    violations = check_alc_conform(a) + check_sigma_complete(a, ctx)
    vs = [v.to_dict() for v in violations]
    if args.action == "check":
        return _report(argv, "verified" if not vs else "failed", violations=vs)
    if vs:
        return _report(argv, "failed", violations=vs, **_hyp_fields(None))
    h = abstraction_to_abox(a, ctx, check=False)
    target = problem.replace(mode="complex")
    if target.dialect < Dialect.ALC:
        target = target.replace(dialect=Dialect.ALC)
    rep = check_hypothesis(target, h, max_types)
    return _report(argv, "hypothesis" if rep.passed else "failed", violations=[],
                   verification=rep.to_dict(), **_hyp_fields(h))


def cmd_types(args, argv) -> dict:
    _, _, max_types = _budgets(args)
    problem = _load_problem(args.problem)
    closure = build_closure(problem.kb, problem.observation)
    T = type_elimination(closure, KnowledgeBase.of(problem.kb.cis()), max_types)
    return _report(
        argv, "verified",
        closure=[str(c) for c in closure.concepts],
        types=[[str(c) for c in T.concepts(i)] for i in range(len(T))],
    )


def run(argv: Sequence[str] | None = None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "generate":
            text = cmd_generate(args)
            if args.output:
                with open(args.output, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                out.write(text)
            return 0
        handler = {
            "abduce": cmd_abduce,
            "verify": cmd_verify,
            "minimize": cmd_minimize,
            "abstract": cmd_abstract,
            "types": cmd_types,
        }[args.command]
        report = handler(args, argv)
    except (InputError, SyntaxErrorDL, ValueError) as exc:
        report = _report(argv, "error", error=str(exc))
    except (ResourceError, TimeoutError) as exc:
        report = _report(argv, "unknown", reason=str(exc))
    out.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    return EXIT[report["outcome"]]


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
