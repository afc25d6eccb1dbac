"""Permutation groups on the coset space.

Points are ``0..d-1``.  Permutations act on the right: ``(p * q)(i) = q(p(i))``,
matching the left-to-right reading of words in a coset table.

Orders and membership come from a Schreier-Sims stabilizer chain built with
the deterministic base order 0, 1, 2, ... (optionally after a requested base
prefix, which is how point and two-point stabilizers are read off).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence


class Permutation:
    """A bijection of ``{0..d-1}`` stored as its tuple of images."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        images = tuple(images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def _raw(cls, images: tuple[int, ...]) -> "Permutation":
        p = object.__new__(cls)
        object.__setattr__(p, "images", images)
        return p

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls._raw(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, degree: int, *cycles: Sequence[int]) -> "Permutation":
        img = list(range(degree))
        for cyc in cycles:
            for i, x in enumerate(cyc):
                img[x] = cyc[(i + 1) % len(cyc)]
        return cls(img)

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        q = other.images
        return Permutation._raw(tuple(q[i] for i in self.images))

    def __pow__(self, n: int) -> "Permutation":
        base = self if n >= 0 else self.inverse()
        result = Permutation.identity(self.degree)
        for _ in range(abs(n)):
            result = result * base
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation._raw(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def __eq__(self, other):
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __lt__(self, other: "Permutation"):
        return self.images < other.images

    def cycles(self, include_fixed: bool = True) -> list[tuple[int, ...]]:
        seen = [False] * len(self.images)
        out = []
        for i in range(len(self.images)):
            if seen[i]:
                continue
            cyc = [i]
            seen[i] = True
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen[j] = True
                j = self.images[j]
            if include_fixed or len(cyc) > 1:
                out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles()))

    def matrix(self):
        """Permutation matrix M with M e_i = e_{p(i)}."""
        import numpy as np

        d = len(self.images)
        m = np.zeros((d, d))
        m[list(self.images), list(range(d))] = 1.0
        return m

    def __repr__(self):
        cyc = self.cycles(include_fixed=False)
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"
        return f"Permutation({body}, degree={self.degree})"


def commutes(x: Permutation, y: Permutation) -> bool:
    if x.degree != y.degree:
        raise ValueError("permutations of different degree")
    return x * y == y * x


# -- stabilizer chain on raw tuples -------------------------------------------------


def _mul(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    return tuple(q[i] for i in p)


def _inv(p: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(p)
    for i, j in enumerate(p):
        inv[j] = i
    return tuple(inv)


class _Level:
    __slots__ = ("base", "gens", "trans")

    def __init__(self, base: int, degree: int):
        self.base = base
        self.gens: list[tuple[int, ...]] = []
        # point -> u with base^u = point
        self.trans: dict[int, tuple[int, ...]] = {base: tuple(range(degree))}

    def rebuild_orbit(self):
        queue = list(self.trans)
        i = 0
        while i < len(queue):
            pt = queue[i]
            i += 1
            u = self.trans[pt]
            for g in self.gens:
                img = g[pt]
                if img not in self.trans:
                    self.trans[img] = _mul(u, g)
                    queue.append(img)


class _Chain:
    """Schreier-Sims with a deterministic base: requested prefix, then 0, 1, 2, ..."""

    def __init__(self, degree: int, gens: Iterable[tuple[int, ...]], base_prefix: Sequence[int] = ()):
        self.degree = degree
        self.identity = tuple(range(degree))
        self.levels: list[_Level] = [_Level(b, degree) for b in base_prefix]
        for g in gens:
            self.add(g)

    def sift(self, g: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
        for i, lev in enumerate(self.levels):
            u = lev.trans.get(g[lev.base])
            if u is None:
                return g, i
            g = _mul(g, _inv(u))
        return g, len(self.levels)

    def contains(self, g: tuple[int, ...]) -> bool:
        h, i = self.sift(g)
        return i == len(self.levels) and h == self.identity

    def _new_base_point(self, g: tuple[int, ...]) -> int:
        used = {lev.base for lev in self.levels}
        for pt in range(self.degree):
            if g[pt] != pt and pt not in used:
                return pt
        raise AssertionError("residue fixes every point but is not the identity")

    def _insert(self, h: tuple[int, ...], start: int, stop: int):
        """Add h as a strong generator on levels start..stop (creating stop if needed)."""
        if stop == len(self.levels):
            self.levels.append(_Level(self._new_base_point(h), self.degree))
        for j in range(start, stop + 1):
            self.levels[j].gens.append(h)
            self.levels[j].rebuild_orbit()

    def add(self, g: tuple[int, ...]) -> bool:
        """Extend the group by g; returns False if g was already a member."""
        h, j = self.sift(g)
        if j == len(self.levels) and h == self.identity:
            return False
        self._insert(h, 0, j)
        self._close(j)
        return True

    def _close(self, i: int):
        while i >= 0:
            lev = self.levels[i]
            residue = None
            for pt, u in list(lev.trans.items()):
                for s in lev.gens:
                    v = lev.trans[s[pt]]
                    h = _mul(_mul(u, s), _inv(v))
                    r, j = self.sift_from(h, i + 1)
                    if j < len(self.levels) or r != self.identity:
                        residue = (r, j)
                        break
                if residue:
                    break
            if residue is None:
                i -= 1
                continue
            r, j = residue
            self._insert(r, i + 1, j)
            i = j

    def sift_from(self, g: tuple[int, ...], start: int) -> tuple[tuple[int, ...], int]:
        for i in range(start, len(self.levels)):
            lev = self.levels[i]
            u = lev.trans.get(g[lev.base])
            if u is None:
                return g, i
            g = _mul(g, _inv(u))
        return g, len(self.levels)

    def order(self) -> int:
        return math.prod(len(lev.trans) for lev in self.levels)

    def stabilizer_gens(self, depth: int) -> list[tuple[int, ...]]:
        """Strong generators fixing the first ``depth`` base points."""
        if depth >= len(self.levels):
            return []
        return list(self.levels[depth].gens)

    def elements(self) -> Iterator[tuple[int, ...]]:
        def rec(i: int, acc: tuple[int, ...]):
            if i < 0:
                yield acc
                return
            for u in self.levels[i].trans.values():
                yield from rec(i - 1, _mul(acc, u))

        # g = u_k ... u_1 u_0 with u_i from level i
        yield from rec(len(self.levels) - 1, self.identity)


# -- groups --------------------------------------------------------------------------


class PermGroup:
    """A permutation group given by generators, with a lazily built stabilizer chain."""

    def __init__(self, degree: int, generators: Iterable[Permutation]):
        gens = []
        for g in generators:
            if g.degree != degree:
                raise ValueError("generator degree mismatch")
            if not g.is_identity():
                gens.append(g)
        self.degree = degree
        self.generators: tuple[Permutation, ...] = tuple(gens)

    @classmethod
    def trivial(cls, degree: int) -> "PermGroup":
        return cls(degree, [])

    @cached_property
    def chain(self) -> _Chain:
        return _Chain(self.degree, (g.images for g in self.generators))

    def chain_with_base(self, prefix: Sequence[int]) -> _Chain:
        return _Chain(self.degree, (g.images for g in self.generators), base_prefix=prefix)

    def order(self) -> int:
        return self.chain.order()

    def __len__(self):
        return self.order()

    def __contains__(self, p: Permutation) -> bool:
        return self.chain.contains(p.images)

    def contains_group(self, other: "PermGroup") -> bool:
        return all(g in self for g in other.generators)

    def __eq__(self, other):
        if not isinstance(other, PermGroup) or other.degree != self.degree:
            return NotImplemented
        return self.order() == other.order() and self.contains_group(other) and other.contains_group(self)

    def __hash__(self):
        return hash((self.degree, self.order()))

    def elements(self) -> Iterator[Permutation]:
        for e in self.chain.elements():
            yield Permutation._raw(e)

    def is_trivial(self) -> bool:
        return not self.generators

    def is_abelian(self) -> bool:
        gs = self.generators
        return all(commutes(x, y) for i, x in enumerate(gs) for y in gs[i + 1 :])

    def orbits(self) -> list[list[int]]:
        parent = list(range(self.degree))

        def find(k):
            while parent[k] != k:
                parent[k] = parent[parent[k]]
                k = parent[k]
            return k

        for g in self.generators:
            for i, j in enumerate(g.images):
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        groups: dict[int, list[int]] = {}
        for i in range(self.degree):
            groups.setdefault(find(i), []).append(i)
        return sorted(groups.values())

    def is_transitive(self) -> bool:
        return len(self.orbits()) == 1

    def stabilizer(self, *points: int) -> "PermGroup":
        """Pointwise stabilizer of the given points."""
        if len(set(points)) != len(points):
            raise ValueError("stabilizer points must be distinct")
        ch = self.chain_with_base(points)
        gens = ch.stabilizer_gens(len(points))
        return PermGroup(self.degree, (Permutation._raw(g) for g in gens))

    def point_stabilizer(self, point: int = 0) -> "PermGroup":
        return self.stabilizer(point)

    def is_regular(self) -> bool:
        return self.is_transitive() and self.order() == self.degree

    def is_cyclic(self) -> bool:
        if not self.is_abelian():
            return False
        return _cyclic_divisors(abelian_invariants(self))

    def fixed_points(self) -> list[int]:
        return [i for i in range(self.degree) if all(g(i) == i for g in self.generators)]

    def __repr__(self):
        return f"PermGroup(degree={self.degree}, order={self.order()})"


def group_order(P: PermGroup) -> int:
    return P.order()


def rank(P: PermGroup) -> int:
    """Number of orbits on ordered pairs (diagonal included)."""
    if not P.is_transitive():
        raise ValueError("rank is only defined for transitive groups")
    d = P.degree
    parent = list(range(d * d))

    def find(k):
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    for g in P.generators:
        img = g.images
        for a in range(d):
            ia = img[a] * d
            for b in range(d):
                x, y = find(a * d + b), find(ia + img[b])
                if x != y:
                    parent[max(x, y)] = min(x, y)
    return sum(1 for k in range(d * d) if find(k) == k)


def suborbit_count(P: PermGroup, point: int = 0) -> int:
    return len(P.point_stabilizer(point).orbits())


def two_point_stabilizer(P: PermGroup, alpha: int, beta: int) -> PermGroup:
    if alpha == beta:
        raise ValueError("two-point stabilizer needs two distinct points")
    return P.stabilizer(alpha, beta)


def normal_closure(P: PermGroup, S: PermGroup) -> PermGroup:
    """Smallest normal subgroup of P containing S."""
    if not P.contains_group(S):
        raise ValueError("S is not a subgroup of P")
    ch = _Chain(P.degree, ())
    gens: list[tuple[int, ...]] = []
    queue = [g.images for g in S.generators]
    while queue:
        h = queue.pop()
        if ch.add(h):
            gens.append(h)
            for g in P.generators:
                queue.append(_mul(_mul(_inv(g.images), h), g.images))
    group = PermGroup(P.degree, (Permutation._raw(g) for g in gens))
    group.__dict__["chain"] = ch
    return group


def derived_subgroup(P: PermGroup) -> PermGroup:
    gens = P.generators
    comms = []
    for i, x in enumerate(gens):
        for y in gens[i + 1 :]:
            c = x.inverse() * y.inverse() * x * y
            if not c.is_identity():
                comms.append(c)
    return normal_closure(P, PermGroup(P.degree, comms))


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def abelian_invariants(P: PermGroup) -> list[int]:
    """Prime-power orders of the cyclic factors of P/P', sorted."""
    D = derived_subgroup(P)
    q_order = P.order() // D.order()
    if q_order == 1:
        return []
    # quotient elements as coset representatives, found by closing under generators
    reps: list[Permutation] = [Permutation.identity(P.degree)]

    def locate(x: Permutation) -> int:
        for k, r in enumerate(reps):
            if x * r.inverse() in D:
                return k
        return -1

    i = 0
    while i < len(reps):
        for g in P.generators:
            y = reps[i] * g
            if locate(y) < 0:
                reps.append(y)
        i += 1
    assert len(reps) == q_order
    orders = []
    for r in reps:
        k, x = 1, r
        while x not in D:
            x = x * r
            k += 1
        orders.append(k)
    result: list[int] = []
    for p, e in _factorize(q_order).items():
        # s_k = log_p #{elements of order dividing p^k}
        s = [0]
        k = 1
        while s[-1] < e:
            count = sum(1 for o in orders if (p**k) % o == 0 and _is_power_of(o, p))
            s.append(round(math.log(count, p)))
            k += 1
        ge = [s[j] - s[j - 1] for j in range(1, len(s))]  # number of factors with exponent >= j
        ge.append(0)
        for j in range(1, len(ge)):
            result.extend([p**j] * (ge[j - 1] - ge[j]))
    return sorted(result)


def _cyclic_divisors(divisors: Sequence[int]) -> bool:
    """Elementary divisors of a cyclic group: at most one per prime."""
    primes = [min(_factorize(q)) for q in divisors]
    return len(primes) == len(set(primes))


def _is_power_of(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class StructureNote:
    order: int
    degree: int
    abelian_invariants: tuple[int, ...]
    simple: bool | None
    name: str

    def __str__(self):
        return self.name


_SIMPLE_CHECK_CAP = 20000


def is_simple(P: PermGroup) -> bool | None:
    """Simplicity test by normal closures of conjugacy class representatives; None if too large."""
    n = P.order()
    if n == 1:
        return False
    if P.is_abelian():
        return len(_factorize(n)) == 1 and sum(_factorize(n).values()) == 1
    if derived_subgroup(P).order() != n:
        return False
    if n > _SIMPLE_CHECK_CAP:
        return None
    seen: set[Permutation] = set()
    for x in P.elements():
        if x in seen or x.is_identity():
            continue
        cls = {x}
        frontier = [x]
        while frontier:
            y = frontier.pop()
            for g in P.generators:
                z = g.inverse() * y * g
                if z not in cls:
                    cls.add(z)
                    frontier.append(z)
        seen |= cls
        if normal_closure(P, PermGroup(P.degree, [x])).order() != n:
            return False
    return True


def _is_dihedral(P: PermGroup) -> bool:
    n = P.order()
    if n < 6 or n % 2 or P.is_abelian() or n > _SIMPLE_CHECK_CAP:
        return False
    half = n // 2
    elems = list(P.elements())
    rot = next((x for x in elems if x.order() == half), None)
    if rot is None:
        return False
    cyc = PermGroup(P.degree, [rot])
    return all(x.order() == 2 for x in elems if x not in cyc)


def structure_describe(P: PermGroup) -> StructureNote:
    n = P.order()
    d = P.degree
    inv = tuple(abelian_invariants(P))
    simple = is_simple(P)
    if P.is_abelian() and _cyclic_divisors(inv):
        name = f"C{n}"
    elif P.is_abelian():
        name = "x".join(f"C{q}" for q in inv)
    elif n == math.factorial(d) // 2 and d >= 3:
        name = f"A{d}"
    elif n == math.factorial(d) and d >= 2:
        name = f"S{d}"
    elif n == 168 and simple:
        name = "PSL(2,7)"
    elif n == 504 and simple:
        name = "PSL(2,8)"
    elif _is_dihedral(P):
        name = f"D{n}"
    else:
        name = f"order {n}"
    return StructureNote(n, d, inv, simple, name)


def image_group(obj) -> PermGroup:
    """The permutation group of a subgroup record or coset table (a PermGroup passes through)."""
    if isinstance(obj, PermGroup):
        return obj
    table = getattr(obj, "table", obj)
    return PermGroup(table.index, table.permutations())


def axiom_i(obj) -> bool:
    """Normal closure of the stabilizer of coset 0 is all of P.

    P is G/core(H) acting on the cosets and the stabilizer of coset 0 is the
    image of H, so this is the same as H having normal closure G.
    """
    P = image_group(obj)
    return normal_closure(P, P.point_stabilizer(0)) == P


def covering_type(P) -> str:
    """'cyc' when P is cyclic, 'reg' when regular but not cyclic, else 'irr'."""
    P = image_group(P)
    if P.is_cyclic():
        return "cyc"
    if P.is_regular():
        return "reg"
    return "irr"
