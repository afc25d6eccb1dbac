"""Conjugacy classes of subgroups of a given index, by backtracking over coset tables.

The search fills a partial coset table entry by entry in row-major order,
pushes relator deductions after every assignment and keeps a partial table
only if it is the least standardized table over all base cosets.  Each
complete table that survives is the canonical table of exactly one class of
index-d subgroups.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit, types
from numba.typed import List

from .cosets import CosetTable, table_from_rows
from .presentations import Presentation, SubgroupSpec


class SearchBudgetExceeded(RuntimeError):
    """Raised when the backtrack node budget runs out; carries partial results."""

    def __init__(self, nodes: int, partial: list):
        super().__init__(f"low-index search exceeded its budget of {nodes} nodes")
        self.nodes = nodes
        self.partial = partial
        self.complete = False


DEFAULT_NODE_BUDGET = 10**8


@dataclass(frozen=True)
class SubgroupRecord:
    index: int
    table: CosetTable
    generators: SubgroupSpec
    ordinal: int = 0
    multiplicity: int = 1
    class_size_note: str = field(default="", compare=False)

    @property
    def key(self) -> tuple[int, ...]:
        return self.table.canonical_key()


def _relator_rotations(pres: Presentation) -> list[list[tuple[int, ...]]]:
    """Cyclic rotations of every relator and its inverse, bucketed by first column."""
    ncols = 2 * pres.generator_count
    buckets: list[set[tuple[int, ...]]] = [set() for _ in range(ncols)]
    for r in pres.relators:
        for word in (r.letters, r.inverse().letters):
            cols = tuple(2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1 for x in word)
            # cyclically reduce
            while len(cols) > 1 and cols[0] == cols[-1] ^ 1:
                cols = cols[1:-1]
            for i in range(len(cols)):
                rot = cols[i:] + cols[:i]
                buckets[rot[0]].add(rot)
    return [sorted(b, key=lambda t: (len(t), t)) for b in buckets]


def _flatten_rotations(pres: Presentation, ncols: int):
    buckets = _relator_rotations(pres)
    cols: list[int] = []
    off: list[int] = []
    lens: list[int] = []
    lo = np.zeros(ncols, dtype=np.int32)
    hi = np.zeros(ncols, dtype=np.int32)
    for c in range(ncols):
        lo[c] = len(off)
        for rot in buckets[c]:
            off.append(len(cols))
            lens.append(len(rot))
            cols.extend(rot)
        hi[c] = len(off)
    return (
        np.array(cols, dtype=np.int32),
        np.array(off, dtype=np.int32),
        np.array(lens, dtype=np.int32),
        lo,
        hi,
    )


@njit(cache=True)
def _assign(T, trail, tl, stack, ncols, coset, col, target, rot_cols, rot_off, rot_len, lo, hi):
    """Set coset.col = target (and its inverse), then chase relator deductions.

    Returns the new trail length, or -1 on a contradiction (the caller undoes
    back to its own mark either way).
    """
    T[coset * ncols + col] = target
    T[target * ncols + (col ^ 1)] = coset
    trail[tl] = coset * ncols + col
    trail[tl + 1] = target * ncols + (col ^ 1)
    tl += 2
    sp = 0
    stack[0] = coset
    stack[1] = col
    stack[2] = target
    stack[3] = col ^ 1
    sp = 4
    while sp > 0:
        sp -= 2
        s = stack[sp]
        c = stack[sp + 1]
        for k in range(lo[c], hi[c]):
            base = rot_off[k]
            length = rot_len[k]
            f = s
            i = 0
            while i < length:
                nxt = T[f * ncols + rot_cols[base + i]]
                if nxt < 0:
                    break
                f = nxt
                i += 1
            if i == length:
                if f != s:
                    return -1, tl
                continue
            b = s
            j = length - 1
            while j > i:
                nxt = T[b * ncols + (rot_cols[base + j] ^ 1)]
                if nxt < 0:
                    break
                b = nxt
                j -= 1
            if j == i:
                cc = rot_cols[base + i]
                if T[b * ncols + (cc ^ 1)] >= 0:
                    return -1, tl
                T[f * ncols + cc] = b
                T[b * ncols + (cc ^ 1)] = f
                trail[tl] = f * ncols + cc
                trail[tl + 1] = b * ncols + (cc ^ 1)
                tl += 2
                stack[sp] = f
                stack[sp + 1] = cc
                stack[sp + 2] = b
                stack[sp + 3] = cc ^ 1
                sp += 4
    return 1, tl


@njit(cache=True)
def _is_canonical(T, n, ncols, new_of, old_of):
    """False when rebasing at another coset gives a smaller standardized table."""
    for base in range(1, n):
        for k in range(n):
            new_of[k] = -1
        new_of[base] = 0
        old_of[0] = base
        count = 1
        decided = False
        for i in range(n):
            if i >= count:
                break
            oi = old_of[i]
            for c in range(ncols):
                e = T[oi * ncols + c]
                if e < 0:
                    decided = True
                    break
                lab = new_of[e]
                if lab < 0:
                    lab = count
                    new_of[e] = lab
                    old_of[count] = e
                    count += 1
                ref = T[i * ncols + c]
                if ref < 0:
                    decided = True
                    break
                if lab < ref:
                    return False
                if lab > ref:
                    decided = True
                    break
            if decided:
                break
    return True


@njit(cache=True)
def _search_kernel(rot_cols, rot_off, rot_len, lo, hi, ncols, max_index, exact, budget, out):
    """Depth-first search over standardized partial coset tables.

    Complete canonical tables are appended to ``out`` (flat, row-major).
    Returns (nodes visited, finished flag).
    """
    size = max_index * ncols
    T = np.full(size, -1, dtype=np.int32)
    trail = np.empty(size + 2, dtype=np.int32)
    stack = np.empty(2 * size + 8, dtype=np.int32)
    new_of = np.empty(max_index, dtype=np.int32)
    old_of = np.empty(max_index, dtype=np.int32)
    fpos = np.zeros(size + 1, dtype=np.int32)
    fnext = np.zeros(size + 1, dtype=np.int32)
    fmark = np.zeros(size + 1, dtype=np.int32)
    fnew = np.zeros(size + 1, dtype=np.uint8)
    factive = np.zeros(size + 1, dtype=np.uint8)
    tl = 0
    n = 1
    nodes = 0
    top = 0
    while top >= 0:
        p = fpos[top]
        if factive[top]:
            while tl > fmark[top]:
                tl -= 1
                T[trail[tl]] = -1
            if fnew[top]:
                n -= 1
            factive[top] = 0
        coset = p // ncols
        col = p % ncols
        inv = col ^ 1
        t = fnext[top]
        while t < n and T[t * ncols + inv] >= 0:
            t += 1
        if t > n or (t == n and n >= max_index):
            top -= 1
            continue
        fnext[top] = t + 1
        fmark[top] = tl
        if t == n:
            n += 1
            fnew[top] = 1
        else:
            fnew[top] = 0
        factive[top] = 1
        ok, tl = _assign(T, trail, tl, stack, ncols, coset, col, t, rot_cols, rot_off, rot_len, lo, hi)
        if ok < 0 or not _is_canonical(T, n, ncols, new_of, old_of):
            continue
        nodes += 1
        if nodes > budget:
            return nodes, False
        q = p + 1
        limit = n * ncols
        while q < limit and T[q] >= 0:
            q += 1
        if q >= limit:
            if (not exact) or n == max_index:
                out.append(T[:limit].copy())
            continue
        top += 1
        fpos[top] = q
        fnext[top] = 0
        factive[top] = 0
    return nodes, True


def _rows(flat: list[int], ncols: int) -> list[list[int]]:
    return [flat[i : i + ncols] for i in range(0, len(flat), ncols)]


def _search(pres: Presentation, max_index: int, exact: bool, budget: int) -> list[tuple[int, list[int]]]:
    ncols = 2 * pres.generator_count
    out = List.empty_list(types.int32[::1])
    nodes, finished = _search_kernel(*_flatten_rotations(pres, ncols), ncols, max_index, exact, budget, out)
    found = [(len(a) // ncols, a.tolist()) for a in out]
    if not finished:
        raise SearchBudgetExceeded(budget, found)
    return found


def low_index_subgroups(pres: Presentation, d: int, node_budget: int = DEFAULT_NODE_BUDGET) -> list[SubgroupRecord]:
    """One record per conjugacy class of subgroups of index exactly ``d``."""
    if d < 1:
        raise ValueError("index must be at least 1")
    ncols = 2 * pres.generator_count
    found = _search(pres, d, True, node_budget)
    tables = [table_from_rows(pres, _rows(flat, ncols)) for _, flat in found]
    tables.sort(key=lambda tb: tb.canonical_key())
    return [
        SubgroupRecord(d, tb, tb.schreier_generators(), ordinal=i + 1)
        for i, tb in enumerate(tables)
    ]


def eta_sequence(pres: Presentation, d_max: int, node_budget: int = DEFAULT_NODE_BUDGET) -> list[int]:
    """Number of conjugacy classes of subgroups of each index 1..d_max."""
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    counts = [0] * d_max
    for n, _ in _search(pres, d_max, False, node_budget):
        counts[n - 1] += 1
    return counts
