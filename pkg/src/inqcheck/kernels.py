"""Bit-parallel support-table kernels.

A formula is lowered to a flat postorder program whose rows are unique
subformulas (structurally equal subtrees share a row). The table kernel
then computes support of every row at every state of the powerset
lattice, bottom-up. The implication clause quantifies over subsets of
the state; instead of enumerating them per state, the kernel marks
states where the antecedent holds and the consequent fails, then closes
that marking upward under supersets with one sweep per world bit, so an
implication row costs O(n * 2^n) instead of O(3^n).

Two interchangeable kernels exist: a numba-compiled loop nest and a pure
numpy vectorized version. The INQCHECK_KERNEL environment variable picks
one ("numba" or "numpy"); unset, numba is used when importable. Table
memory is the caller's concern: a table holds rows * 2^n bytes.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .model import InformationModel
from .syntax import And, Atom, Bottom, Box, Formula, IVee, Implies, WBox

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn

        if args and callable(args[0]):
            return args[0]
        return wrap


OP_BOT = 0
OP_ATOM = 1
OP_AND = 2
OP_IVEE = 3
OP_IMPLIES = 4
OP_BOX = 5
OP_WBOX = 6

_OP_OF_TYPE = {
    Bottom: OP_BOT,
    Atom: OP_ATOM,
    And: OP_AND,
    IVee: OP_IVEE,
    Implies: OP_IMPLIES,
    Box: OP_BOX,
    WBox: OP_WBOX,
}


@dataclass(frozen=True, slots=True)
class Program:
    """Flat postorder form of a formula; children precede parents.

    payload holds the atom index for OP_ATOM rows and 0 elsewhere; left
    and right hold child row numbers (right is 0 for unary rows).
    """

    ops: np.ndarray
    left: np.ndarray
    right: np.ndarray
    payload: np.ndarray
    root: int

    @property
    def num_nodes(self) -> int:
        return len(self.ops)


def lower_formula(f: Formula) -> Program:
    """Intern a formula into a Program, sharing equal subtrees."""
    rows: dict[tuple, int] = {}
    ops: list[int] = []
    left: list[int] = []
    right: list[int] = []
    payload: list[int] = []

    def visit(g: Formula) -> int:
        op = _OP_OF_TYPE[type(g)]
        if op == OP_BOT:
            key, a, b, p = (OP_BOT,), 0, 0, 0
        elif op == OP_ATOM:
            key, a, b, p = (OP_ATOM, g.index), 0, 0, g.index
        elif op in (OP_BOX, OP_WBOX):
            a = visit(g.body)
            key, b, p = (op, a), 0, 0
        else:
            a = visit(g.left)
            b = visit(g.right)
            key, p = (op, a, b), 0
        row = rows.get(key)
        if row is not None:
            return row
        row = len(ops)
        rows[key] = row
        ops.append(op)
        left.append(a)
        right.append(b)
        payload.append(p)
        return row

    root = visit(f)
    return Program(
        ops=np.asarray(ops, dtype=np.int64),
        left=np.asarray(left, dtype=np.int64),
        right=np.asarray(right, dtype=np.int64),
        payload=np.asarray(payload, dtype=np.int64),
        root=root,
    )


def model_arrays(m: InformationModel) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Pack the model data the kernels need: atom masks, per-world state
    map unions, and the flattened generator lists."""
    val_masks = np.asarray([v.mask for v in m.valuation], dtype=np.int64)
    if m.sigma is None:
        box_masks = np.zeros(m.n, dtype=np.int64)
        gen_off = np.zeros(m.n + 1, dtype=np.int64)
        gen_masks = np.zeros(0, dtype=np.int64)
        return val_masks, box_masks, gen_off, gen_masks
    box_masks = np.zeros(m.n, dtype=np.int64)
    gen_off = np.zeros(m.n + 1, dtype=np.int64)
    flat: list[int] = []
    for i, gens in enumerate(m.sigma):
        union = 0
        for g in gens:
            union |= g.mask
            flat.append(g.mask)
        box_masks[i] = union
        gen_off[i + 1] = len(flat)
    return val_masks, box_masks, gen_off, np.asarray(flat, dtype=np.int64)


@njit(cache=True)
def _table_numba(ops, left, right, payload, val_masks, box_masks, gen_off, gen_masks, n):
    size = 1 << n
    rows = ops.shape[0]
    out = np.zeros((rows, size), dtype=np.uint8)
    bad = np.zeros(size, dtype=np.uint8)
    for r in range(rows):
        op = ops[r]
        if op == OP_BOT:
            out[r, 0] = 1
        elif op == OP_ATOM:
            v = val_masks[payload[r]]
            for s in range(size):
                if s & ~v == 0:
                    out[r, s] = 1
        elif op == OP_AND:
            a = left[r]
            b = right[r]
            for s in range(size):
                out[r, s] = out[a, s] & out[b, s]
        elif op == OP_IVEE:
            a = left[r]
            b = right[r]
            for s in range(size):
                out[r, s] = out[a, s] | out[b, s]
        elif op == OP_IMPLIES:
            a = left[r]
            b = right[r]
            for s in range(size):
                bad[s] = 1 if out[a, s] and not out[b, s] else 0
            for i in range(n):
                bit = 1 << i
                for s in range(size):
                    if s & bit and bad[s ^ bit]:
                        bad[s] = 1
            for s in range(size):
                out[r, s] = 1 - bad[s]
        else:
            a = left[r]
            good = 0
            if op == OP_BOX:
                for w in range(n):
                    if out[a, box_masks[w]]:
                        good |= 1 << w
            else:
                for w in range(n):
                    ok = True
                    for t in range(gen_off[w], gen_off[w + 1]):
                        if not out[a, gen_masks[t]]:
                            ok = False
                            break
                    if ok:
                        good |= 1 << w
            for s in range(size):
                if s & ~good == 0:
                    out[r, s] = 1
    return out


def _table_numpy(ops, left, right, payload, val_masks, box_masks, gen_off, gen_masks, n):
    size = 1 << n
    rows = ops.shape[0]
    states = np.arange(size, dtype=np.int64)
    out = np.zeros((rows, size), dtype=np.uint8)
    for r in range(rows):
        op = ops[r]
        if op == OP_BOT:
            out[r, 0] = 1
        elif op == OP_ATOM:
            out[r] = (states & ~val_masks[payload[r]]) == 0
        elif op == OP_AND:
            out[r] = out[left[r]] & out[right[r]]
        elif op == OP_IVEE:
            out[r] = out[left[r]] | out[right[r]]
        elif op == OP_IMPLIES:
            bad = (out[left[r]] == 1) & (out[right[r]] == 0)
            for i in range(n):
                view = bad.reshape(-1, 2, 1 << i)
                view[:, 1, :] |= view[:, 0, :]
            out[r] = ~bad
        else:
            body = out[left[r]]
            good = 0
            if op == OP_BOX:
                for w in range(n):
                    if body[box_masks[w]]:
                        good |= 1 << w
            else:
                for w in range(n):
                    if body[gen_masks[gen_off[w] : gen_off[w + 1]]].all():
                        good |= 1 << w
            out[r] = (states & ~good) == 0
    return out


def active_kernel(override: str | None = None) -> str:
    """Resolve the kernel choice: explicit override, then INQCHECK_KERNEL,
    then numba when available."""
    choice = override or os.environ.get("INQCHECK_KERNEL", "")
    if choice == "":
        return "numba" if HAS_NUMBA else "numpy"
    if choice not in ("numba", "numpy"):
        raise ValueError(f"unknown kernel {choice!r}, expected 'numba' or 'numpy'")
    if choice == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba kernel requested but numba is not importable")
    return choice


def support_table(program: Program, m: InformationModel, kernel: str | None = None) -> np.ndarray:
    """Support of every program row at every state: uint8 array of shape
    (num_nodes, 2^n), entry [r, s] = 1 iff state s supports row r."""
    val_masks, box_masks, gen_off, gen_masks = model_arrays(m)
    args = (
        program.ops,
        program.left,
        program.right,
        program.payload,
        val_masks,
        box_masks,
        gen_off,
        gen_masks,
        m.n,
    )
    if active_kernel(kernel) == "numba":
        return _table_numba(*args)
    return _table_numpy(*args)


def table_bytes(program: Program, m: InformationModel) -> int:
    """Memory a support table for this query would take."""
    return program.num_nodes << m.n
