"""Independent brute-force routes used to cross-check the library."""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np

from cosetlab.cosets import todd_coxeter
from cosetlab.lowindex import SearchBudgetExceeded, low_index_subgroups
from cosetlab.presentations import Presentation, SubgroupSpec, Word, parse_presentation

# finite groups of order <= 48 with small presentations
FINITE_GROUPS = {
    "C6": ("< a | a^6 >", 6),
    "S3": ("< a, b | a^2, b^3, (a*b)^2 >", 6),
    "D4": ("< a, b | a^4, b^2, (a*b)^2 >", 8),
    "Q8": ("< a, b | a^4, a^2 = b^2, b^-1*a*b = a^-1 >", 8),
    "C2xC4": ("< a, b | a^2, b^4, a*b = b*a >", 8),
    "A4": ("< a, b | a^2, b^3, (a*b)^3 >", 12),
    "D6": ("< a, b | a^6, b^2, (a*b)^2 >", 12),
    "S4": ("< a, b | a^2, b^3, (a*b)^4 >", 24),
    "2.A4": ("< s, t | (s*t)^2 = s^3 = t^3 >", 24),
    "C2xS4": ("< a, b, c | a^2, b^3, (a*b)^4, c^2, a*c = c*a, b*c = c*b >", 48),
    "D24": ("< a, b | a^24, b^2, (a*b)^2 >", 48),
}


def regular_permutations(pres: Presentation) -> list[tuple[int, ...]]:
    """Generator images in the regular representation (cosets of the trivial subgroup)."""
    table = todd_coxeter(pres, SubgroupSpec(()))
    return [tuple(table.action(i + 1)) for i in range(pres.generator_count)]


def compose(p, q):
    return tuple(q[i] for i in p)


def inverse(p):
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def closure(gens, degree: int) -> frozenset:
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def all_subgroups(elements: frozenset, degree: int) -> set[frozenset]:
    ident = tuple(range(degree))
    subs = {frozenset([ident])}
    frontier = list(subs)
    while frontier:
        nxt = []
        for S in frontier:
            for g in elements:
                if g in S:
                    continue
                T = closure(list(S) + [g], degree)
                if T not in subs:
                    subs.add(T)
                    nxt.append(T)
        frontier = nxt
    return subs


def conjugacy_class_key(S: frozenset, elements: frozenset) -> tuple:
    best = None
    for g in elements:
        gi = inverse(g)
        conj = tuple(sorted(compose(compose(gi, s), g) for s in S))
        if best is None or conj < best:
            best = conj
    return best


def brute_force_class_counts(pres: Presentation) -> tuple[int, dict[int, int]]:
    """(|G|, {index: number of conjugacy classes of subgroups}) by full subgroup enumeration."""
    gens = regular_permutations(pres)
    n = len(gens[0])
    G = closure(gens, n)
    classes: dict[int, set] = {}
    for S in all_subgroups(G, n):
        classes.setdefault(len(G) // len(S), set()).add(conjugacy_class_key(S, G))
    return len(G), {k: len(v) for k, v in classes.items()}


def evaluate_word(w: Word, gens: list[tuple[int, ...]]):
    p = tuple(range(len(gens[0])))
    for x in w:
        g = gens[x - 1] if x > 0 else inverse(gens[-x - 1])
        p = compose(p, g)
    return p


def axiom_i_by_enumeration(pres: Presentation, sub: SubgroupSpec) -> bool:
    """G/<<H>> is trivial iff adding H's generators as relators collapses G to one coset."""
    quotient = Presentation(pres.generator_names, pres.relators + tuple(sub.generators))
    return todd_coxeter(quotient, SubgroupSpec(())).index == 1


def exact_rank(matrix: list[list[Fraction]]) -> int:
    m = [row[:] for row in matrix]
    rank = 0
    rows = len(m)
    cols = len(m[0]) if rows else 0
    for c in range(cols):
        piv = next((r for r in range(rank, rows) if m[r][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for r in range(rows):
            if r != rank and m[r][c] != 0:
                f = m[r][c] / m[rank][c]
                m[r] = [a - f * b for a, b in zip(m[r], m[rank])]
        rank += 1
    return rank


def rationalize(gram: np.ndarray, tol: float = 1e-10, max_den: int = 10**4) -> list[list[Fraction]] | None:
    """Gram entries as exact rationals, or None when some entry is not recognizably rational."""
    out = []
    for row in gram:
        fr = []
        for x in row:
            q = Fraction(float(x)).limit_denominator(max_den)
            if abs(float(q) - x) > tol:
                return None
            fr.append(q)
        out.append(fr)
    return out


def random_presentation(rng: random.Random, gens: int = 2, rels: int = 2, max_len: int = 6) -> Presentation:
    words = []
    for _ in range(rels):
        n = rng.randint(2, max_len)
        words.append(Word(tuple(rng.choice([1, -1]) * rng.randint(1, gens) for _ in range(n))))
    names = tuple("abcdefg"[:gens])
    return Presentation(names, tuple(w for w in words if not w.is_identity()))


def random_low_index_tables(count: int, seed: int = 0, max_index: int = 5):
    """Complete coset tables from low-index searches over random presentations."""
    rng = random.Random(seed)
    tables = []
    while len(tables) < count:
        pres = random_presentation(rng, gens=rng.choice([1, 2, 2, 3]), rels=rng.randint(1, 3))
        found = []
        for d in range(1, max_index + 1):
            try:
                found.extend(rec.table for rec in low_index_subgroups(pres, d, node_budget=50_000))
            except SearchBudgetExceeded:
                break
        tables.extend(found[:40])
    return tables[:count]


def parse(text: str) -> Presentation:
    return parse_presentation(text)


def triples(n: int):
    return itertools.combinations(range(n), 3)
