"""Todd-Coxeter coset enumeration and completed coset tables.

Cosets are numbered from 0, with coset 0 the subgroup itself.  Columns of a
table alternate generator / inverse: column ``2*i`` is generator ``i+1`` and
column ``2*i+1`` its inverse.  Generators act on the right, so a word is
traced through the table left to right.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .permgroup import Permutation
from .presentations import Presentation, SubgroupSpec, Word

DEFAULT_MAX_COSETS = 2_000_000


class CosetOverflow(RuntimeError):
    """The enumeration needed more live cosets than allowed."""


def letter_col(x: int) -> int:
    return 2 * (x - 1) if x > 0 else 2 * (-x - 1) + 1


def col_letter(c: int) -> int:
    return c // 2 + 1 if c % 2 == 0 else -(c // 2 + 1)


@dataclass(frozen=True, eq=False)
class CosetTable:
    """A complete, standardized coset table.

    ``rows[i][c]`` is the coset reached from coset ``i`` by column ``c``.
    """

    presentation: Presentation
    rows: tuple[tuple[int, ...], ...]
    schreier_reps: tuple[Word, ...]

    @property
    def index(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return 2 * self.presentation.generator_count

    def __eq__(self, other):
        return isinstance(other, CosetTable) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def action(self, generator: int) -> tuple[int, ...]:
        """Images of every coset under a generator (1-based; negative for inverse)."""
        c = letter_col(generator)
        return tuple(row[c] for row in self.rows)

    def coset_of(self, w: Word | Sequence[int], start: int = 0) -> int:
        k = start
        for x in w:
            k = self.rows[k][letter_col(x)]
        return k

    def permutations(self) -> list[Permutation]:
        return [Permutation(self.action(g + 1)) for g in range(self.presentation.generator_count)]

    def canonical_key(self) -> tuple[int, ...]:
        return tuple(e for row in self.rows for e in row)

    def relators_close(self) -> bool:
        for r in self.presentation.relators:
            for i in range(self.index):
                if self.coset_of(r, i) != i:
                    return False
        return True

    def schreier_generators(self) -> SubgroupSpec:
        """Schreier generators rep(i)·g·rep(i^g)^-1 for non-tree edges, deduplicated."""
        reps = self.schreier_reps
        gens: list[Word] = []
        seen = set()
        for i in range(self.index):
            for g in range(self.presentation.generator_count):
                j = self.rows[i][2 * g]
                w = reps[i] * Word.of(g + 1) * reps[j].inverse()
                if w.is_identity():
                    continue
                key = min(w.letters, w.inverse().letters)
                if key in seen:
                    continue
                seen.add(key)
                gens.append(w)
        return SubgroupSpec(tuple(gens))

    def rep_labels(self) -> list[str]:
        return [w.short_label(self.presentation.generator_names) for w in self.schreier_reps]


def standardize(pres: Presentation, rows: Sequence[Sequence[int]], base: int = 0) -> CosetTable:
    """Relabel cosets in breadth-first order from ``base`` and attach Schreier representatives.

    Breadth-first discovery in column order yields shortlex-least representatives
    for the letter order a < a^-1 < b < b^-1 < ...
    """
    ncols = 2 * pres.generator_count
    order = [base]
    label = {base: 0}
    parent: list[tuple[int, int]] = [(-1, -1)]
    q = 0
    while q < len(order):
        old = order[q]
        for c in range(ncols):
            e = rows[old][c]
            if e < 0:
                raise ValueError("cannot standardize an incomplete table")
            if e not in label:
                label[e] = len(order)
                order.append(e)
                parent.append((q, c))
        q += 1
    if len(order) != len(rows):
        raise ValueError("coset table action is not transitive")
    new_rows = tuple(tuple(label[rows[old][c]] for c in range(ncols)) for old in order)
    reps: list[Word] = [Word()]
    for i in range(1, len(order)):
        p, c = parent[i]
        reps.append(reps[p] * Word.of(col_letter(c)))
    return CosetTable(pres, new_rows, tuple(reps))


def table_from_rows(pres: Presentation, rows: Sequence[Sequence[int]]) -> CosetTable:
    return standardize(pres, rows, 0)


def todd_coxeter(pres: Presentation, sub: SubgroupSpec, max_cosets: int = DEFAULT_MAX_COSETS) -> CosetTable:
    """HLT enumeration of the right cosets of ``sub`` in ``pres``.

    Raises CosetOverflow when more than ``max_cosets`` live cosets are needed.
    """
    if max_cosets < 1:
        raise ValueError("max_cosets must be at least 1")
    ncols = 2 * pres.generator_count
    table: list[list[int]] = [[-1] * ncols]
    parent = [0]
    live = [1]  # single-element box for the live coset count
    relators = [tuple(letter_col(x) for x in r) for r in pres.relators]
    subgens = [tuple(letter_col(x) for x in w) for w in sub.generators]

    def find(k: int) -> int:
        root = k
        while parent[root] != root:
            root = parent[root]
        while parent[k] != root:
            parent[k], k = root, parent[k]
        return root

    def merge(k: int, l: int, queue: list[int]):
        a, b = find(k), find(l)
        if a != b:
            lo, hi = min(a, b), max(a, b)
            parent[hi] = lo
            queue.append(hi)
            live[0] -= 1

    def coincidence(a: int, b: int):
        queue: list[int] = []
        merge(a, b, queue)
        i = 0
        while i < len(queue):
            g = queue[i]
            i += 1
            for x in range(ncols):
                d = table[g][x]
                if d < 0:
                    continue
                table[d][x ^ 1] = -1
                mu, nu = find(g), find(d)
                if table[mu][x] >= 0:
                    merge(nu, table[mu][x], queue)
                elif table[nu][x ^ 1] >= 0:
                    merge(mu, table[nu][x ^ 1], queue)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu

    def define(a: int, x: int) -> int:
        if live[0] >= max_cosets:
            raise CosetOverflow(f"coset enumeration exceeded {max_cosets} live cosets")
        b = len(table)
        table.append([-1] * ncols)
        parent.append(b)
        live[0] += 1
        table[a][x] = b
        table[b][x ^ 1] = a
        return b

    def scan_and_fill(a: int, w: tuple[int, ...]):
        f, b = a, a
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] >= 0:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][w[j] ^ 1] >= 0:
                b = table[b][w[j] ^ 1]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][w[i] ^ 1] = f
                return
            define(f, w[i])

    for w in subgens:
        scan_and_fill(find(0), w)
    a = 0
    while a < len(table):
        if parent[a] == a:
            for r in relators:
                scan_and_fill(a, r)
                if parent[a] != a:
                    break
            if parent[a] == a:
                for x in range(ncols):
                    if table[a][x] < 0:
                        define(a, x)
        a += 1

    alive = [k for k in range(len(table)) if parent[k] == k]
    rows = {k: table[k] for k in alive}
    return standardize(pres, rows, 0)


def permutation_rep(table: CosetTable) -> list[Permutation]:
    return table.permutations()


def coset_of(table: CosetTable, w: Word) -> int:
    return table.coset_of(w)
