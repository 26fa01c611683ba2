"""Support checking: does a state of a model support a formula.

Clauses, over a state s of a model with extensions V and state map
generators sigma:

    bot        iff s is empty
    atom j     iff s is a subset of V(p_j)
    f & g      iff both hold at s
    f ior g    iff one of them holds at s
    f -> g     iff every subset of s supporting f supports g
    box f      iff for every world w in s, f holds at the union of
                   sigma(w)
    wbox f     iff f holds at every generator of every world in s

Evaluating the wbox clause over generators instead of their downward
closures is sound: support is downward persistent, so a universally
quantified clause cannot distinguish a family from its closure.

check_support is the trusted baseline: plain structural recursion, its
implication clause enumerating the subsets of s directly (never states
outside s), with no caching and no pruning. check_support_memo is the
fast path: it reuses results per (subformula, state) pair, and when the
state space is small enough it computes a full support table through the
kernels module in one shot. Both paths must and do agree; the test suite
holds them against each other.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field

from .kernels import (
    OP_AND,
    OP_ATOM,
    OP_BOT,
    OP_BOX,
    OP_IMPLIES,
    OP_IVEE,
    Program,
    lower_formula,
    support_table,
    table_bytes,
)
from .model import InfoState, InformationModel, sigma_union
from .syntax import And, Atom, Bottom, Box, Formula, IVee, Implies, WBox, subformulas

DEFAULT_TABLE_BYTE_CAP = 1 << 27


class QueryError(Exception):
    """A check query violates an invariant; raised before evaluation."""


@dataclass(frozen=True, slots=True)
class CheckQuery:
    model: InformationModel
    state: InfoState
    formula: Formula


@dataclass(slots=True)
class _RootEntry:
    """Per-(model, formula) cache body: the lowered program plus either a
    full support table or a sparse map of computed pairs."""

    program: Program
    table: object = None
    values: dict[tuple[int, int], bool] = field(default_factory=dict)


class MemoCache:
    """Support values keyed by subformula identity and state bits.

    Subformula identities are row numbers of the lowered program, assigned
    once per distinct (model, root formula) pair; structurally equal
    subtrees share an identity. A full table, when present, stands for
    the total map of its pairs.
    """

    def __init__(self) -> None:
        self._roots: dict[tuple[InformationModel, Formula], _RootEntry] = {}

    def root(self, model: InformationModel, formula: Formula) -> _RootEntry:
        key = (model, formula)
        entry = self._roots.get(key)
        if entry is None:
            entry = _RootEntry(program=lower_formula(formula))
            self._roots[key] = entry
        return entry

    def lookup(self, entry: _RootEntry, node: int, mask: int) -> bool | None:
        if entry.table is not None:
            return bool(entry.table[node, mask])
        return entry.values.get((node, mask))


def _validate_query(q: CheckQuery) -> None:
    m = q.model
    if q.state.width != m.n:
        raise QueryError(f"state width {q.state.width} does not match world count {m.n}")
    for g in subformulas(q.formula):
        if isinstance(g, Atom) and g.index >= m.l:
            raise QueryError(f"atom index {g.index} out of range, model has {m.l} atoms")
        if isinstance(g, (Box, WBox)) and m.sigma is None:
            raise QueryError("modal formula over a plain model with no state map")


def _submasks(s: int):
    """All t with t subset of s, including s and 0."""
    t = s
    while True:
        yield t
        if t == 0:
            return
        t = (t - 1) & s


def _eval_naive(q: CheckQuery) -> tuple[bool, int]:
    m = q.model
    vmasks = [v.mask for v in m.valuation]
    union_masks = [sigma_union(m, w).mask for w in range(m.n)] if m.is_modal else None
    visits = 0

    def go(f: Formula, s: int) -> bool:
        nonlocal visits
        visits += 1
        if isinstance(f, Bottom):
            return s == 0
        if isinstance(f, Atom):
            return s & ~vmasks[f.index] == 0
        if isinstance(f, And):
            return go(f.left, s) and go(f.right, s)
        if isinstance(f, IVee):
            return go(f.left, s) or go(f.right, s)
        if isinstance(f, Implies):
            for t in _submasks(s):
                if go(f.left, t) and not go(f.right, t):
                    return False
            return True
        if isinstance(f, Box):
            for w in range(m.n):
                if s >> w & 1 and not go(f.body, union_masks[w]):
                    return False
            return True
        if isinstance(f, WBox):
            for w in range(m.n):
                if s >> w & 1:
                    for g in m.sigma[w]:
                        if not go(f.body, g.mask):
                            return False
            return True
        raise TypeError(f"not a formula node: {f!r}")

    return go(q.formula, q.state.mask), visits


def _eval_memo_sparse(q: CheckQuery, entry: _RootEntry) -> tuple[bool, int]:
    """Memoized recursion over program rows; misses counted as visits."""
    m = q.model
    prog = entry.program
    ops, left, right, payload = prog.ops, prog.left, prog.right, prog.payload
    vmasks = [v.mask for v in m.valuation]
    union_masks = [sigma_union(m, w).mask for w in range(m.n)] if m.is_modal else None
    gen_masks = (
        [[g.mask for g in gens] for gens in m.sigma] if m.is_modal else None
    )
    values = entry.values
    misses = 0

    def go(r: int, s: int) -> bool:
        nonlocal misses
        key = (r, s)
        hit = values.get(key)
        if hit is not None:
            return hit
        misses += 1
        op = ops[r]
        if op == OP_BOT:
            result = s == 0
        elif op == OP_ATOM:
            result = s & ~vmasks[payload[r]] == 0
        elif op == OP_AND:
            result = go(left[r], s) and go(right[r], s)
        elif op == OP_IVEE:
            result = go(left[r], s) or go(right[r], s)
        elif op == OP_IMPLIES:
            result = True
            for t in _submasks(s):
                if go(left[r], t) and not go(right[r], t):
                    result = False
                    break
        elif op == OP_BOX:
            result = True
            for w in range(m.n):
                if s >> w & 1 and not go(left[r], union_masks[w]):
                    result = False
                    break
        else:
            result = True
            for w in range(m.n):
                if s >> w & 1:
                    for gmask in gen_masks[w]:
                        if not go(left[r], gmask):
                            result = False
                            break
                    if not result:
                        break
        values[key] = result
        return result

    return go(prog.root, q.state.mask), misses


@dataclass(frozen=True, slots=True)
class CheckOutcome:
    value: bool
    nodes_visited: int
    engine: str


def _table_cap() -> int:
    raw = os.environ.get("INQCHECK_TABLE_BYTES", "")
    if raw.isdigit():
        return int(raw)
    return DEFAULT_TABLE_BYTE_CAP


def evaluate(
    q: CheckQuery,
    engine: str = "auto",
    cache: MemoCache | None = None,
    kernel: str | None = None,
) -> CheckOutcome:
    """Evaluate a query with an explicit engine choice.

    Engines: "naive" is the baseline recursion; "sparse" the memoized
    recursion; "table" the full-lattice kernel evaluator; "auto" picks
    "table" when the table fits the byte cap and "sparse" otherwise.
    nodes_visited counts clause evaluations (naive), cache misses
    (sparse), or freshly computed table rows (table).
    """
    _validate_query(q)
    if engine == "naive":
        value, visits = _eval_naive(q)
        return CheckOutcome(value, visits, "naive")
    if cache is None:
        cache = MemoCache()
    entry = cache.root(q.model, q.formula)
    if engine == "auto":
        engine = "table" if table_bytes(entry.program, q.model) <= _table_cap() else "sparse"
    if engine == "table":
        if entry.table is None:
            entry.table = support_table(entry.program, q.model, kernel=kernel)
            visited = entry.program.num_nodes
        else:
            visited = 0
        return CheckOutcome(bool(entry.table[entry.program.root, q.state.mask]), visited, "table")
    if engine == "sparse":
        value, misses = _eval_memo_sparse(q, entry)
        return CheckOutcome(value, misses, "sparse")
    raise ValueError(f"unknown engine {engine!r}")


def check_support(q: CheckQuery) -> bool:
    """Baseline decision of support, by direct structural recursion."""
    return evaluate(q, engine="naive").value


def check_anti_support(q: CheckQuery) -> bool:
    """Decision of non-support: the pointwise complement of check_support."""
    return not check_support(q)


def check_support_memo(q: CheckQuery, cache: MemoCache | None = None) -> bool:
    """Same value as check_support, with results reused across calls
    sharing the cache; the preferred evaluator for repeated or large
    queries."""
    return evaluate(q, engine="auto", cache=cache).value


def render_result(supported: bool) -> str:
    return "SUPPORTED" if supported else "NOT-SUPPORTED"
