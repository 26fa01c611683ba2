"""Command-line entry point.

Subcommands:

    check         decide support of a formula at a state of a model file
    reduce        compile a QBF file into model, state, and formula files
    qbf-eval      brute-force the truth value of a QBF file
    verify        compare the QBF oracle against the compiled support check
    stats         size report for the compilation of a QBF file
    random-model  emit a reproducible random model file

Reports go to standard output, diagnostics to standard error. Exit codes:
0 success (SUPPORTED / TRUE / all AGREE), 1 negative decision
(NOT-SUPPORTED / FALSE), 2 usage or input error, 3 oracle disagreement.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from concurrent.futures import ThreadPoolExecutor

from .checker import (
    CheckQuery,
    MemoCache,
    QueryError,
    check_support_memo,
    evaluate,
    render_result,
)
from .model import (
    CodecError,
    InfoState,
    InformationModel,
    ValidationError,
    read_model_file,
    validate_model,
    write_model_file,
)
from .qbf import ClosureError, Qbf, eval_qbf, parse_qbf, random_qbf
from .reduction import DEFAULT_SIZE_RATIO_BOUND, reduce_tqbf, size_report
from .syntax import ParseError, parse_formula, render_formula


def _diag(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return 2


def _read_text(path: str) -> str:
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _load_model(path: str) -> InformationModel:
    model = read_model_file(_read_text(path))
    validate_model(model)
    return model


def _load_qbf(path: str, rename: bool) -> Qbf:
    return parse_qbf(_read_text(path), rename=rename)


def cmd_check(args: argparse.Namespace) -> int:
    try:
        model = _load_model(args.model)
    except (OSError, CodecError, ValidationError) as e:
        return _diag(f"{args.model}: {e}")
    try:
        state = InfoState.from_bits(args.state)
    except ValueError as e:
        return _diag(f"state argument: {e}")
    source = "formula argument"
    try:
        if args.formula_file is not None:
            source = args.formula_file
            text = _read_text(args.formula_file)
        else:
            text = args.formula
        formula = parse_formula(text)
    except OSError as e:
        return _diag(f"{source}: {e}")
    except ParseError as e:
        return _diag(f"{source}: {e}")
    try:
        outcome = evaluate(
            CheckQuery(model, state, formula),
            engine="naive" if args.naive else "auto",
        )
    except QueryError as e:
        return _diag(f"query: {e}")
    if args.json:
        print(json.dumps({"result": render_result(outcome.value), "nodes_visited": outcome.nodes_visited}))
    else:
        print(render_result(outcome.value))
        print(f"nodes visited: {outcome.nodes_visited}")
    if args.verbose:
        print(f"engine: {outcome.engine}", file=sys.stderr)
    return 0 if outcome.value else 1


def _report_lines(report) -> str:
    verdict = "ok" if report.within_bound else "bound exceeded"
    return "\n".join(
        [
            f"l: {report.l}",
            f"matrix size: {report.matrix_size}",
            f"translated size: {report.translated_size}",
            f"ratio: {report.ratio:.4f}",
            f"bound: {report.bound:.4f} ({verdict})",
        ]
    )


def _report_json(report) -> str:
    return json.dumps(
        {
            "l": report.l,
            "matrix_size": report.matrix_size,
            "translated_size": report.translated_size,
            "ratio": report.ratio,
            "result": "ok" if report.within_bound else "bound-exceeded",
        }
    )


def cmd_reduce(args: argparse.Namespace) -> int:
    try:
        theta = _load_qbf(args.qbf, args.rename)
        instance = reduce_tqbf(theta)
    except (OSError, ParseError, ClosureError, ValueError) as e:
        return _diag(f"{args.qbf}: {e}")
    stem = args.out_stem
    with open(f"{stem}.im", "w", encoding="utf-8") as handle:
        handle.write(write_model_file(instance.model.model))
    with open(f"{stem}.state", "w", encoding="utf-8") as handle:
        handle.write(instance.state.bits() + "\n")
    with open(f"{stem}.formula", "w", encoding="utf-8") as handle:
        handle.write(render_formula(instance.formula) + "\n")
    report = size_report(instance, bound=args.bound)
    print(_report_json(report) if args.json else _report_lines(report))
    return 0


def cmd_qbf_eval(args: argparse.Namespace) -> int:
    try:
        theta = _load_qbf(args.qbf, args.rename)
    except (OSError, ParseError, ClosureError) as e:
        return _diag(f"{args.qbf}: {e}")
    value = eval_qbf(theta)
    if args.json:
        print(json.dumps({"result": "TRUE" if value else "FALSE"}))
    else:
        print("TRUE" if value else "FALSE")
    return 0 if value else 1


def _verify_case(theta: Qbf) -> tuple[bool, bool]:
    expected = eval_qbf(theta)
    instance = reduce_tqbf(theta)
    got = check_support_memo(
        CheckQuery(instance.model.model, instance.state, instance.formula),
        MemoCache(),
    )
    return expected, got


def cmd_verify(args: argparse.Namespace) -> int:
    cases: list[tuple[str, Qbf]] = []
    for path in args.qbf:
        try:
            cases.append((path, _load_qbf(path, args.rename)))
        except (OSError, ParseError, ClosureError, ValueError) as e:
            return _diag(f"{path}: {e}")
    if args.random:
        if args.max_l < 1:
            return _diag("--max-l must be at least 1")
        rng = random.Random(args.seed)
        for index in range(args.random):
            l = rng.randint(1, args.max_l)
            case_seed = rng.randrange(1 << 30)
            cases.append(
                (f"case-{index:03d}", random_qbf(case_seed, l, args.matrix_nodes))
            )
    if not cases:
        return _diag("nothing to verify: give QBF paths or --random N")
    if args.jobs > 1:
        with ThreadPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_verify_case, (theta for _, theta in cases)))
    else:
        results = [_verify_case(theta) for _, theta in cases]
    bare = len(cases) == 1
    disagreements = 0
    last_line = ""
    for (name, _), (expected, got) in zip(cases, results):
        if expected == got:
            line = f"AGREE({'true' if expected else 'false'})"
        else:
            disagreements += 1
            line = "DISAGREE"
        last_line = line
        if not args.json:
            print(line if bare else f"{name}: {line}")
    if args.json:
        if bare:
            print(json.dumps({"result": last_line}))
        else:
            print(
                json.dumps(
                    {
                        "result": "DISAGREE" if disagreements else "AGREE",
                        "cases": len(cases),
                        "disagreements": disagreements,
                    }
                )
            )
    return 3 if disagreements else 0


def cmd_stats(args: argparse.Namespace) -> int:
    try:
        theta = _load_qbf(args.qbf, args.rename)
        instance = reduce_tqbf(theta)
    except (OSError, ParseError, ClosureError, ValueError) as e:
        return _diag(f"{args.qbf}: {e}")
    report = size_report(instance, bound=args.bound)
    print(_report_json(report) if args.json else _report_lines(report))
    return 0


def cmd_random_model(args: argparse.Namespace) -> int:
    n, l = args.worlds, args.atoms
    if n < 1:
        return _diag("--worlds must be at least 1")
    if l < 1:
        return _diag("--atoms must be at least 1")
    if args.max_generators < 1:
        return _diag("--max-generators must be at least 1")
    rng = random.Random(args.seed)
    valuation = tuple(InfoState(rng.randrange(1 << n), n) for _ in range(l))
    if args.kind == "inqb":
        model = InformationModel(n, l, valuation, None)
    else:
        cap = min(args.max_generators, 1 << n)
        sigma = tuple(
            tuple(InfoState(mask, n) for mask in rng.sample(range(1 << n), rng.randint(1, cap)))
            for _ in range(n)
        )
        model = InformationModel(n, l, valuation, sigma)
    validate_model(model)
    sys.stdout.write(write_model_file(model))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="inqcheck",
        description="Support checking for inquisitive formulas and QBF compilation onto switching models.",
    )
    parser.add_argument("-v", "--verbose", action="count", default=0, help="diagnostics on stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    check = commands.add_parser("check", help="decide support of a formula at a state")
    check.add_argument("model", help="model file")
    check.add_argument("state", help="state bitstring, leftmost bit is world 0")
    group = check.add_mutually_exclusive_group(required=True)
    group.add_argument("--formula", help="formula text")
    group.add_argument("--formula-file", help="file holding the formula")
    check.add_argument("--naive", action="store_true", help="force the baseline recursive evaluator")
    check.add_argument("--json", action="store_true", help="machine-readable report")
    check.set_defaults(run=cmd_check)

    reduce_cmd = commands.add_parser("reduce", help="compile a QBF into a support query")
    reduce_cmd.add_argument("qbf", help="QBF file")
    reduce_cmd.add_argument("out_stem", help="output path stem for .im/.state/.formula")
    reduce_cmd.add_argument("--rename", action="store_true", help="renumber arbitrary variable names by binding order")
    reduce_cmd.add_argument("--bound", type=float, default=DEFAULT_SIZE_RATIO_BOUND, help="size ratio bound for the report")
    reduce_cmd.add_argument("--json", action="store_true", help="machine-readable report")
    reduce_cmd.set_defaults(run=cmd_reduce)

    qe = commands.add_parser("qbf-eval", help="brute-force a QBF truth value")
    qe.add_argument("qbf", help="QBF file")
    qe.add_argument("--rename", action="store_true", help="renumber arbitrary variable names by binding order")
    qe.add_argument("--json", action="store_true", help="machine-readable report")
    qe.set_defaults(run=cmd_qbf_eval)

    verify = commands.add_parser("verify", help="compare QBF truth against the compiled support check")
    verify.add_argument("qbf", nargs="*", help="QBF files")
    verify.add_argument("--random", type=int, default=0, metavar="N", help="also verify N random formulas")
    verify.add_argument("--seed", type=int, default=0, help="seed for --random")
    verify.add_argument("--max-l", type=int, default=4, help="largest variable count for --random")
    verify.add_argument("--matrix-nodes", type=int, default=10, help="matrix node budget for --random")
    verify.add_argument("--jobs", type=int, default=1, metavar="N", help="verify cases on N threads")
    verify.add_argument("--rename", action="store_true", help="renumber arbitrary variable names by binding order")
    verify.add_argument("--json", action="store_true", help="machine-readable report")
    verify.set_defaults(run=cmd_verify)

    stats = commands.add_parser("stats", help="size report for a QBF compilation")
    stats.add_argument("qbf", help="QBF file")
    stats.add_argument("--rename", action="store_true", help="renumber arbitrary variable names by binding order")
    stats.add_argument("--bound", type=float, default=DEFAULT_SIZE_RATIO_BOUND, help="size ratio bound for the report")
    stats.add_argument("--json", action="store_true", help="machine-readable report")
    stats.set_defaults(run=cmd_stats)

    rand = commands.add_parser("random-model", help="emit a reproducible random model file")
    rand.add_argument("--seed", type=int, default=0)
    rand.add_argument("--worlds", type=int, required=True, metavar="N")
    rand.add_argument("--atoms", type=int, required=True, metavar="L")
    rand.add_argument("--max-generators", type=int, default=2, metavar="K")
    rand.add_argument("--kind", choices=("inqm", "inqb"), default="inqm")
    rand.set_defaults(run=cmd_random_model)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors already; normalize other codes
        return 2 if e.code not in (0, None) else 0
    return args.run(args)


if __name__ == "__main__":
    raise SystemExit(main())
