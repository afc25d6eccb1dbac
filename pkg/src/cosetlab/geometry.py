"""Point/line geometry of the cosets from equal two-point stabilizers.

A line is a maximal set of points whose pairs all have the *same* two-point
stabilizer (equal as subgroups of P, not merely isomorphic).  Lines are
permuted by P; each P-orbit of lines is a "kind", and a kind corresponds to
selecting one two-point stabilizer type.  The whole geometry (all kinds) decides
whether a triangle exists; recognition names kinds one at a time and falls back
to the whole geometry.

Two conventions exist for pairs with a trivial stabilizer:

* ``"excl"``: such pairs only give 2-point lines (the d-simplex picture);
* ``"incl"``: the trivial subgroup is treated like any other stabilizer.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

from .cosets import CosetTable
from .permgroup import PermGroup, Permutation, commutes

CONVENTIONS = ("excl", "incl")
_ELEMENT_KEY_CAP = 5000


@dataclass(frozen=True)
class Line:
    points: tuple[int, ...]
    stabilizer: PermGroup = field(compare=False, repr=False)
    stabilizer_order: int = 0
    kind: int = 0

    def __len__(self):
        return len(self.points)


@dataclass(frozen=True)
class IncidenceGeometry:
    degree: int
    lines: tuple[Line, ...]
    convention: str
    kind_count: int = 0

    @property
    def points(self) -> range:
        return range(self.degree)

    def long_lines(self) -> list[Line]:
        return [ln for ln in self.lines if len(ln) >= 3]

    def has_triangle(self) -> bool:
        return any(len(ln) >= 3 for ln in self.lines)

    def kind(self, k: int) -> "IncidenceGeometry":
        return IncidenceGeometry(self.degree, tuple(ln for ln in self.lines if ln.kind == k), self.convention, 1)

    def kinds(self) -> list["IncidenceGeometry"]:
        return [self.kind(k) for k in range(self.kind_count)]

    def principal(self) -> "IncidenceGeometry":
        """The first kind with lines of 3 or more points; the whole geometry if none."""
        for k in range(self.kind_count):
            sub = self.kind(k)
            if sub.has_triangle():
                return sub
        return self

    def lines_per_point(self) -> list[int]:
        counts = [0] * self.degree
        for ln in self.lines:
            for p in ln.points:
                counts[p] += 1
        return counts

    def collinearity_graph(self) -> nx.Graph:
        """Points adjacent when they share a line of 3+ points; K_d when no such line exists."""
        g = nx.Graph()
        g.add_nodes_from(range(self.degree))
        long_lines = self.long_lines()
        if not long_lines:
            g.add_edges_from(itertools.combinations(range(self.degree), 2))
            return g
        for ln in long_lines:
            g.add_edges_from(itertools.combinations(ln.points, 2))
        return g

    def relabel(self, perm: Sequence[int]) -> "IncidenceGeometry":
        lines = tuple(
            Line(tuple(sorted(perm[p] for p in ln.points)), ln.stabilizer, ln.stabilizer_order, ln.kind)
            for ln in self.lines
        )
        return IncidenceGeometry(self.degree, lines, self.convention, self.kind_count)


def _subgroup_key(S: PermGroup):
    if S.order() <= _ELEMENT_KEY_CAP:
        return frozenset(e.images for e in S.elements())
    return None


def stabilizer_classes(P: PermGroup) -> list[tuple[PermGroup, list[tuple[int, int]]]]:
    """Partition unordered pairs by their (element-set equal) two-point stabilizer."""
    classes: list[tuple[PermGroup, object, list[tuple[int, int]]]] = []
    index: dict[object, int] = {}
    for a, b in itertools.combinations(range(P.degree), 2):
        S = P.stabilizer(a, b)
        key = _subgroup_key(S)
        if key is not None:
            k = index.get(key)
            if k is None:
                index[key] = len(classes)
                classes.append((S, key, [(a, b)]))
            else:
                classes[k][2].append((a, b))
            continue
        for S2, key2, pairs in classes:
            if key2 is None and S2 == S:
                pairs.append((a, b))
                break
        else:
            classes.append((S, None, [(a, b)]))
    return [(S, pairs) for S, _, pairs in classes]


def _line_orbits(P: PermGroup, lines: list[tuple[int, ...]]) -> list[int]:
    """Orbit id for each line under P, numbered in order of first appearance."""
    pos = {ln: i for i, ln in enumerate(lines)}
    orbit = [-1] * len(lines)
    count = 0
    for i, ln in enumerate(lines):
        if orbit[i] >= 0:
            continue
        orbit[i] = count
        stack = [ln]
        while stack:
            cur = stack.pop()
            for g in P.generators:
                img = tuple(sorted(g(p) for p in cur))
                j = pos.get(img)
                if j is not None and orbit[j] < 0:
                    orbit[j] = count
                    stack.append(img)
        count += 1
    return orbit


def build_geometry(P: PermGroup, convention: str = "excl") -> IncidenceGeometry:
    if convention not in CONVENTIONS:
        raise ValueError(f"convention must be one of {CONVENTIONS}")
    if P.degree < 2:
        return IncidenceGeometry(P.degree, (), convention, 0)
    raw: list[tuple[tuple[int, ...], PermGroup]] = []
    for S, pairs in stabilizer_classes(P):
        if S.is_trivial() and convention == "excl":
            raw.extend((pair, S) for pair in pairs)
            continue
        g = nx.Graph()
        g.add_edges_from(pairs)
        for clique in nx.find_cliques(g):
            raw.append((tuple(sorted(clique)), S))
    raw.sort(key=lambda item: (-item[1].order(), -len(item[0]), item[0]))
    kinds = _line_orbits(P, [pts for pts, _ in raw])
    lines = tuple(Line(pts, S, S.order(), k) for (pts, S), k in zip(raw, kinds))
    return IncidenceGeometry(P.degree, lines, convention, max(kinds, default=-1) + 1)


def axiom_ii(geom: IncidenceGeometry) -> bool:
    """True when no line has three or more points ("no geometry")."""
    return not geom.has_triangle()


def triangle_scan(P: PermGroup, convention: str = "excl") -> bool:
    """Direct scan of all point triples for pairwise-equal two-point stabilizers."""
    d = P.degree
    stab = {}
    for a, b in itertools.combinations(range(d), 2):
        S = P.stabilizer(a, b)
        stab[a, b] = frozenset(e.images for e in S.elements())
    for a, b, c in itertools.combinations(range(d), 3):
        s = stab[a, b]
        if convention == "excl" and len(s) == 1:
            continue
        if s == stab[a, c] == stab[b, c]:
            return True
    return False


def representative_perms(table: CosetTable) -> list[Permutation]:
    """Each coset's Schreier representative evaluated in the permutation representation."""
    gens = table.permutations()
    d = table.index
    out = []
    for w in table.schreier_reps:
        p = Permutation.identity(d)
        for x in w:
            p = p * (gens[x - 1] if x > 0 else gens[-x - 1].inverse())
        out.append(p)
    return out


def contextual_lines(geom: IncidenceGeometry, table: CosetTable) -> list[Line]:
    reps = representative_perms(table)
    return [ln for ln in geom.lines if not all(commutes(reps[a], reps[b]) for a, b in itertools.combinations(ln.points, 2))]


def contextual_triangles(geom: IncidenceGeometry, table: CosetTable) -> list[tuple[int, int, int]]:
    """3-subsets of lines with 3+ points that contain a non-commuting pair."""
    reps = representative_perms(table)
    out = set()
    for ln in geom.long_lines():
        for tri in itertools.combinations(ln.points, 3):
            if not all(commutes(reps[a], reps[b]) for a, b in itertools.combinations(tri, 2)):
                out.add(tri)
    return sorted(out)


# -- recognition ---------------------------------------------------------------------


@dataclass(frozen=True)
class GraphFingerprint:
    points: int
    lines: int
    line_sizes: tuple[int, ...]
    degrees: tuple[int, ...]
    spectrum: tuple[float, ...]

    def __str__(self):
        sizes = ",".join(map(str, self.line_sizes))
        return f"fingerprint(points={self.points}, lines={self.lines}, sizes=[{sizes}])"


def fingerprint(geom: IncidenceGeometry) -> GraphFingerprint:
    g = geom.collinearity_graph()
    adj = nx.to_numpy_array(g, nodelist=range(geom.degree))
    spec = np.linalg.eigvalsh(adj) if geom.degree else np.array([])
    return GraphFingerprint(
        geom.degree,
        len(geom.lines),
        tuple(sorted(len(ln) for ln in geom.lines)),
        tuple(sorted(d for _, d in g.degree())),
        tuple(float(x) + 0.0 for x in np.round(spec, 6)),
    )


def _multipartite_parts(g: nx.Graph) -> list[int] | None:
    comp = nx.complement(g)
    parts = []
    for cc in nx.connected_components(comp):
        sub = comp.subgraph(cc)
        k = len(cc)
        if sub.number_of_edges() != k * (k - 1) // 2:
            return None
        parts.append(k)
    return sorted(parts)


def complement_line_graph_bipartite(m: int, n: int) -> nx.Graph:
    return nx.complement(nx.line_graph(nx.complete_bipartite_graph(m, n)))


def _is_configuration(geom: IncidenceGeometry, k: int) -> bool:
    """Every line has k points, every point is on k lines, two points share at most one line."""
    if not geom.lines or any(len(ln) != k for ln in geom.lines):
        return False
    if any(c != k for c in geom.lines_per_point()):
        return False
    seen = set()
    for ln in geom.lines:
        for pair in itertools.combinations(ln.points, 2):
            if pair in seen:
                return False
            seen.add(pair)
    return True


def _is_gq22(geom: IncidenceGeometry) -> bool:
    if geom.degree != 15 or len(geom.lines) != 15 or not _is_configuration(geom, 3):
        return False
    line_sets = [set(ln.points) for ln in geom.lines]
    collinear = geom.collinearity_graph()
    for p in range(15):
        for L in line_sets:
            if p in L:
                continue
            if sum(1 for q in L if collinear.has_edge(p, q)) != 1:
                return False
    return True


def _is_mermin_pentagram(geom: IncidenceGeometry) -> bool:
    if geom.degree != 10 or len(geom.lines) != 5:
        return False
    if any(len(ln) != 4 for ln in geom.lines) or any(c != 2 for c in geom.lines_per_point()):
        return False
    sets = [set(ln.points) for ln in geom.lines]
    return all(len(a & b) == 1 for a, b in itertools.combinations(sets, 2))


def _disjoint_lines(geom: IncidenceGeometry) -> str | None:
    long_lines = geom.long_lines()
    if len(long_lines) != len(geom.lines) or len(long_lines) < 2:
        return None
    sizes = {len(ln) for ln in long_lines}
    used = [p for ln in long_lines for p in ln.points]
    if len(sizes) == 1 and len(used) == len(set(used)) == geom.degree:
        return f"K_{sizes.pop()}^{len(long_lines)}"
    return None


def _name_one(geom: IncidenceGeometry) -> str | None:
    d = geom.degree
    if not geom.has_triangle():
        return f"K{d}"
    if d == 7 and len(geom.lines) == 7 and _is_configuration(geom, 3):
        return "Fano"
    if _is_gq22(geom):
        return "GQ(2,2)"
    if _is_mermin_pentagram(geom):
        return "Mermin pentagram"
    if len(geom.lines) == d and _is_configuration(geom, 3):
        return f"[{d}_3]"
    disjoint = _disjoint_lines(geom)
    if disjoint:
        return disjoint
    g = geom.collinearity_graph()
    if g.number_of_edges() == d * (d - 1) // 2:
        return f"K{d}"
    parts = _multipartite_parts(g)
    if parts is not None and len(parts) > 1:
        return "K(" + ",".join(map(str, parts)) + ")"
    degs = {deg for _, deg in g.degree()}
    for m in range(2, d):
        if d % m or m > d // m:
            continue
        n = d // m
        if degs != {(m - 1) * (n - 1)}:
            continue
        if nx.is_isomorphic(g, complement_line_graph_bipartite(m, n)):
            return f"co-L(K({m},{n}))"
    for m in range(2, d):
        if d % m or m > d // m:
            continue
        n = d // m
        if degs == {m + n - 2} and nx.is_isomorphic(g, nx.line_graph(nx.complete_bipartite_graph(m, n))):
            return f"L(K({m},{n}))"
    return None


def _name_rank(name: str, degree: int) -> int:
    """Specific structures first, then disjoint lines, then the bare simplex."""
    if name == f"K{degree}":
        return 2
    if name.startswith("K_"):
        return 1
    return 0


def recognize(geom: IncidenceGeometry) -> str | GraphFingerprint:
    """Most specific name among the line kinds and the whole geometry.

    Kinds are tried in their canonical order (larger stabilizers first), the
    whole geometry last; a fingerprint of the principal kind is returned when
    nothing in the library matches.
    """
    if not geom.has_triangle():
        return f"K{geom.degree}"
    named = []
    for pos, sub in enumerate([k for k in geom.kinds() if k.has_triangle()] + [geom]):
        name = _name_one(sub)
        if name is not None:
            named.append((_name_rank(name, geom.degree), pos, name))
    if named:
        return min(named)[2]
    return fingerprint(geom.principal())


def kind_names(geom: IncidenceGeometry) -> list[str]:
    """Distinct names of the kinds with 3+ point lines, in kind order."""
    out: list[str] = []
    for sub in geom.kinds():
        if not sub.has_triangle():
            continue
        name = _name_one(sub)
        label = name if name is not None else str(fingerprint(sub))
        if label not in out:
            out.append(label)
    return out


def describe_kinds(geom: IncidenceGeometry) -> list[dict]:
    out = []
    for k, sub in enumerate(geom.kinds()):
        name = _name_one(sub) if sub.has_triangle() else None
        out.append(
            {
                "kind": k,
                "lines": len(sub.lines),
                "line_size": max((len(ln) for ln in sub.lines), default=0),
                "stabilizer_order": sub.lines[0].stabilizer_order if sub.lines else 0,
                "name": name,
            }
        )
    return out


def incidence_isomorphic(g1: IncidenceGeometry, g2: IncidenceGeometry) -> bool:
    """Isomorphism of the point/line incidence structures (bipartite incidence graphs)."""

    def incidence(geom):
        h = nx.Graph()
        h.add_nodes_from((("p", i) for i in range(geom.degree)), side=0)
        for j, ln in enumerate(geom.lines):
            h.add_node(("l", j), side=1)
            h.add_edges_from((("p", i), ("l", j)) for i in ln.points)
        return h

    return nx.is_isomorphic(incidence(g1), incidence(g2), node_match=lambda a, b: a["side"] == b["side"])


def lines_from_sets(degree: int, sets: Iterable[Iterable[int]]) -> IncidenceGeometry:
    """Bare geometry from point sets (no stabilizers); used for checking recognition."""
    trivial = PermGroup.trivial(degree)
    lines = tuple(Line(tuple(sorted(s)), trivial, 1, 0) for s in sets)
    return IncidenceGeometry(degree, lines, "incl", 1)
