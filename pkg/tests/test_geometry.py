import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cosetlab.geometry import (
    axiom_ii,
    build_geometry,
    contextual_lines,
    contextual_triangles,
    describe_kinds,
    incidence_isomorphic,
    lines_from_sets,
    recognize,
    triangle_scan,
)
from cosetlab.lowindex import low_index_subgroups
from cosetlab.permgroup import PermGroup, Permutation, image_group
from cosetlab.presentations import catalog_lookup

from oracles import random_low_index_tables

TABLES = random_low_index_tables(120, seed=21, max_index=6)


def record(group, d, ordinal):
    return low_index_subgroups(catalog_lookup(group).presentation, d)[ordinal - 1]


def brute_lines(P, convention):
    """Maximal sets with pairwise-equal two-point stabilizers, by subset enumeration."""
    d = P.degree
    stab = {}
    for a, b in itertools.combinations(range(d), 2):
        stab[a, b] = frozenset(g.images for g in P.stabilizer(a, b).elements())
    good = []
    for size in range(d, 1, -1):
        for s in itertools.combinations(range(d), size):
            keys = {stab[p] for p in itertools.combinations(s, 2)}
            if len(keys) != 1:
                continue
            if size > 2 and convention == "excl" and len(next(iter(keys))) == 1:
                continue
            if any(set(s) < set(t) for t in good):
                continue
            good.append(s)
    return set(good)


@pytest.mark.parametrize("convention", ["excl", "incl"])
def test_lines_match_subset_enumeration(convention):
    checked = 0
    for t in TABLES:
        if t.index > 6:
            continue
        P = PermGroup(t.index, t.permutations())
        geom = build_geometry(P, convention)
        assert {ln.points for ln in geom.lines} == brute_lines(P, convention)
        checked += 1
    assert checked > 50


@pytest.mark.parametrize("convention", ["excl", "incl"])
def test_triangle_scan_agrees(convention):
    for t in TABLES:
        P = PermGroup(t.index, t.permutations())
        assert axiom_ii(build_geometry(P, convention)) == (not triangle_scan(P, convention))


def test_no_triangle_means_simplex():
    for t in TABLES:
        geom = build_geometry(PermGroup(t.index, t.permutations()), "excl")
        if axiom_ii(geom):
            assert recognize(geom) == f"K{t.index}"


def test_lines_are_stabilizer_sets():
    for t in TABLES[:40]:
        P = PermGroup(t.index, t.permutations())
        for ln in build_geometry(P, "incl").lines:
            for a, b in itertools.combinations(ln.points, 2):
                assert P.stabilizer(a, b) == ln.stabilizer


@settings(max_examples=25, deadline=None)
@given(st.integers(0, len(TABLES) - 1), st.randoms(use_true_random=False))
def test_relabelling_invariance(i, rnd):
    t = TABLES[i]
    d = t.index
    sigma = list(range(d))
    rnd.shuffle(sigma)
    s = Permutation(sigma)
    P = PermGroup(d, t.permutations())
    Q = PermGroup(d, [s.inverse() * g * s for g in t.permutations()])
    for conv in ("excl", "incl"):
        g1, g2 = build_geometry(P, conv), build_geometry(Q, conv)
        assert {ln.points for ln in g1.relabel(sigma).lines} == {ln.points for ln in g2.lines}
        assert str(recognize(g1)) == str(recognize(g2))


def test_fano_plane():
    rec = record("fig8", 7, 1)
    for conv in ("excl", "incl"):
        geom = build_geometry(image_group(rec), conv)
        assert recognize(geom) == "Fano"
        assert {ln.stabilizer_order for ln in geom.long_lines()} == {4}


def test_gq22_on_a6():
    rec = record("a6-demo", 15, 1)
    geom = build_geometry(image_group(rec))
    kinds = describe_kinds(geom)
    assert kinds[0] == {"kind": 0, "lines": 15, "line_size": 3, "stabilizer_order": 4, "name": "GQ(2,2)"}
    gq = geom.kind(0)
    assert gq.lines_per_point() == [3] * 15
    assert recognize(geom) == "GQ(2,2)"


def test_mermin_pentagram_and_octahedron():
    assert recognize(build_geometry(image_group(record("trefoil", 10, 25)), "incl")) == "Mermin pentagram"
    assert recognize(build_geometry(image_group(record("fig8-0surgery", 6, 4)), "incl")) == "K(2,2,2)"


def test_tetrahedron_contextuality():
    rec = record("fig8-0surgery", 4, 1)
    assert axiom_ii(build_geometry(image_group(rec), "excl"))
    geom = build_geometry(image_group(rec), "incl")
    assert [ln.points for ln in geom.long_lines()] == [(0, 1, 2, 3)]
    assert contextual_lines(geom, rec.table)
    labels = rec.table.rep_labels()
    faces = [{labels[p] for p in tri} for tri in contextual_triangles(geom, rec.table)]
    assert {"b", "b^-1", "ba"} in faces


def test_library_from_point_sets():
    fano = [(0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 0), (5, 6, 1), (6, 0, 2)]
    assert recognize(lines_from_sets(7, fano)) == "Fano"

    pairs = list(itertools.combinations(range(6), 2))
    synthemes = {
        tuple(sorted(pairs.index(p) for p in trio))
        for trio in itertools.combinations(pairs, 3)
        if len(set(itertools.chain(*trio))) == 6
    }
    assert recognize(lines_from_sets(15, synthemes)) == "GQ(2,2)"

    five = list(itertools.combinations(range(5), 2))
    pentagram = [[k for k, p in enumerate(five) if i in p] for i in range(5)]
    assert recognize(lines_from_sets(10, pentagram)) == "Mermin pentagram"

    octa = [(a, b, c) for a in (0, 1) for b in (2, 3) for c in (4, 5)]
    assert recognize(lines_from_sets(6, octa)) == "K(2,2,2)"

    rows = [[4 * r + c for c in range(4)] for r in range(3)]
    cols = [[4 * r + c for r in range(3)] for c in range(4)]
    assert recognize(lines_from_sets(12, rows + cols)) == "L(K(3,4))"
    assert recognize(lines_from_sets(12, rows)) == "K_4^3"
    assert recognize(lines_from_sets(5, [(0, 1)])) == "K5"


def test_incidence_isomorphism():
    fano = [(0, 1, 3), (1, 2, 4), (2, 3, 5), (3, 4, 6), (4, 5, 0), (5, 6, 1), (6, 0, 2)]
    perm = list(range(7))
    random.Random(1).shuffle(perm)
    moved = [tuple(perm[p] for p in ln) for ln in fano]
    assert incidence_isomorphic(lines_from_sets(7, fano), lines_from_sets(7, moved))
    assert not incidence_isomorphic(lines_from_sets(7, fano), lines_from_sets(7, fano[:6]))


def test_bad_convention():
    with pytest.raises(ValueError):
        build_geometry(PermGroup.trivial(3), "both")
