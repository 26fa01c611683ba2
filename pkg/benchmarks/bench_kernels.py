#!/usr/bin/env python3
"""Benchmark the support-table kernels on compiled QBF instances.

Times the numba kernel against the pure-numpy twin on the same lowered
programs, and the naive recursive check at small sizes for scale. Table
work grows as nodes * 2^(2l) so the sweep stops early by default.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from inqcheck.checker import CheckQuery, evaluate
from inqcheck.kernels import HAS_NUMBA, lower_formula, support_table, table_bytes
from inqcheck.qbf import EXISTS, FORALL, NegVar, PAnd, POr, Qbf, Var
from inqcheck.reduction import reduce_tqbf

WARMUP_RUNS = 2
BENCH_RUNS = 5
NAIVE_MAX_L = 3


def fixed_matrix() -> PAnd:
    # 8 nodes: (x0 | x1) & (x0 | ~x1)
    return PAnd(POr(Var(0), Var(1)), POr(Var(0), NegVar(1)))


def alternating_qbf(l: int) -> Qbf:
    prefix = tuple((FORALL if i % 2 == 0 else EXISTS, i) for i in range(l))
    return Qbf(prefix, fixed_matrix())


def time_table(program, model, kernel: str) -> dict:
    for _ in range(WARMUP_RUNS):
        support_table(program, model, kernel=kernel)
    times = []
    for _ in range(BENCH_RUNS):
        start = time.perf_counter()
        table = support_table(program, model, kernel=kernel)
        times.append(time.perf_counter() - start)
    return {
        "min": min(times),
        "mean": sum(times) / len(times),
        "runs": times,
        "checksum": int(table.sum()),
    }


def time_naive(query: CheckQuery) -> dict:
    times = []
    for _ in range(BENCH_RUNS):
        start = time.perf_counter()
        outcome = evaluate(query, engine="naive")
        times.append(time.perf_counter() - start)
    return {
        "min": min(times),
        "mean": sum(times) / len(times),
        "runs": times,
        "nodes_visited": outcome.nodes_visited,
    }


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--max-l", type=int, default=6, help="largest variable count to compile")
    parser.add_argument("--output", "-o", help="write JSON results to this file")
    args = parser.parse_args()

    results = {
        "benchmark": "support_table_kernels",
        "has_numba": HAS_NUMBA,
        "warmup_runs": WARMUP_RUNS,
        "bench_runs": BENCH_RUNS,
        "cases": [],
    }

    kernels = ["numpy"] + (["numba"] if HAS_NUMBA else [])
    # the fixed matrix mentions x0 and x1, so the sweep starts at l=2
    for l in range(2, args.max_l + 1):
        instance = reduce_tqbf(alternating_qbf(l))
        model = instance.model.model
        program = lower_formula(instance.formula)
        case = {
            "l": l,
            "worlds": model.n,
            "program_rows": program.num_nodes,
            "table_bytes": table_bytes(program, model),
            "kernels": {},
        }
        for kernel in kernels:
            case["kernels"][kernel] = time_table(program, model, kernel)
        if l <= NAIVE_MAX_L:
            case["naive"] = time_naive(
                CheckQuery(model, instance.state, instance.formula)
            )
        checksums = {k: case["kernels"][k]["checksum"] for k in kernels}
        if len(set(checksums.values())) != 1:
            print(f"kernel checksum mismatch at l={l}: {checksums}", file=sys.stderr)
            return 1
        results["cases"].append(case)
        parts = [f"{k} {case['kernels'][k]['min'] * 1e3:8.2f} ms" for k in kernels]
        if "naive" in case:
            parts.append(f"naive {case['naive']['min'] * 1e3:8.2f} ms")
        print(f"l={l}  rows={program.num_nodes:4d}  " + "  ".join(parts))

    output = json.dumps(results, indent=2)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(output + "\n")
        print(f"results written to {args.output}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
