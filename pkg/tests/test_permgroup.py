import itertools
import math

import pytest
from hypothesis import given, settings, strategies as st

from cosetlab.lowindex import low_index_subgroups
from cosetlab.permgroup import (
    PermGroup,
    Permutation,
    abelian_invariants,
    axiom_i,
    covering_type,
    derived_subgroup,
    normal_closure,
    rank,
    structure_describe,
    two_point_stabilizer,
)
from cosetlab.presentations import catalog_lookup

from oracles import axiom_i_by_enumeration, closure, random_low_index_tables


def sym(n):
    return PermGroup(n, [Permutation.from_cycles(n, (0, 1)), Permutation.from_cycles(n, tuple(range(n)))])


def alt(n):
    return PermGroup(n, [Permutation.from_cycles(n, (i, i + 1, i + 2)) for i in range(n - 2)])


def test_permutation_basics():
    p = Permutation.from_cycles(4, (0, 1, 2))
    assert p.order() == 3
    assert (p * p.inverse()).is_identity()
    assert p(0) == 1
    assert (p * Permutation.from_cycles(4, (2, 3)))(1) == 3
    with pytest.raises(ValueError):
        Permutation((0, 0, 1))


@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_symmetric_and_alternating_orders(n):
    assert sym(n).order() == math.factorial(n)
    assert alt(n).order() == math.factorial(n) // 2
    assert structure_describe(sym(n)).name == f"S{n}"
    assert derived_subgroup(sym(n)) == alt(n)


def test_order_matches_closure_on_random_groups():
    for t in random_low_index_tables(150, seed=11):
        P = PermGroup(t.index, t.permutations())
        brute = closure([p.images for p in t.permutations()], t.index)
        assert P.order() == len(brute)


def brute_rank(P):
    elems = [g.images for g in P.elements()]
    pairs = set()
    for a, b in itertools.product(range(P.degree), repeat=2):
        pairs.add(min((g[a], g[b]) for g in elems))
    return len(pairs)


def test_rank_matches_orbitals():
    for t in random_low_index_tables(80, seed=5):
        P = PermGroup(t.index, t.permutations())
        if P.order() <= 5000:
            assert rank(P) == brute_rank(P)


def test_two_point_stabilizer():
    P = sym(5)
    S = two_point_stabilizer(P, 0, 1)
    assert S.order() == 6
    assert all(g(0) == 0 and g(1) == 1 for g in S.elements())


def test_normal_closure_and_invariants():
    P = sym(4)
    t = PermGroup(4, [Permutation.from_cycles(4, (0, 1))])
    assert normal_closure(P, t) == P
    v = PermGroup(4, [Permutation.from_cycles(4, (0, 1), (2, 3))])
    assert normal_closure(P, v).order() == 4
    assert abelian_invariants(P) == [2]
    c = PermGroup(6, [Permutation.from_cycles(6, (0, 1)), Permutation.from_cycles(6, (2, 3, 4, 5))])
    assert abelian_invariants(c) == [2, 4]


def test_structure_names():
    assert structure_describe(alt(5)).simple is True
    assert structure_describe(sym(4)).simple is False
    # PSL(2,7) acts on 7 points in fig8 index 7
    P = PermGroup(7, low_index_subgroups(catalog_lookup("fig8").presentation, 7)[0].table.permutations())
    assert structure_describe(P).name == "PSL(2,7)"


def test_covering_types():
    cyc = PermGroup(4, [Permutation.from_cycles(4, (0, 1, 2, 3))])
    klein = PermGroup(4, [Permutation.from_cycles(4, (0, 1), (2, 3)), Permutation.from_cycles(4, (0, 2), (1, 3))])
    assert covering_type(cyc) == "cyc"
    assert covering_type(klein) == "reg"
    assert covering_type(sym(4)) == "irr"
    assert structure_describe(klein).name == "C2xC2"


@pytest.mark.parametrize("n", [6, 10, 12, 30])
def test_cyclic_groups_of_composite_order(n):
    c = PermGroup(n, [Permutation.from_cycles(n, tuple(range(n)))])
    assert c.is_cyclic() and covering_type(c) == "cyc"
    assert structure_describe(c).name == f"C{n}"


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(2, 6), min_size=1, max_size=3))
def test_abelian_invariants_of_direct_products(sizes):
    # disjoint cycles of the given lengths generate C_{n1} x C_{n2} x ...
    degree = sum(sizes)
    gens, start = [], 0
    for n in sizes:
        gens.append(Permutation.from_cycles(degree, tuple(range(start, start + n))))
        start += n
    P = PermGroup(degree, gens)
    inv = abelian_invariants(P)
    assert math.prod(inv) == math.prod(sizes) == P.order()
    lcm = math.lcm(*sizes)
    assert P.is_cyclic() == (lcm == P.order())


def test_axiom_i_matches_quotient_enumeration():
    checked = 0
    for name in ["trefoil", "fig8", "fig8-0surgery", "trefoil-0surgery"]:
        pres = catalog_lookup(name).presentation
        for d in range(1, 9):
            for rec in low_index_subgroups(pres, d):
                assert axiom_i(rec) == axiom_i_by_enumeration(pres, rec.generators)
                checked += 1
    assert checked > 50


@settings(max_examples=25, deadline=None)
@given(st.permutations(range(6)), st.permutations(range(6)))
def test_order_divides_factorial(a, b):
    P = PermGroup(6, [Permutation(a), Permutation(b)])
    assert 720 % P.order() == 0
    assert P.contains_group(PermGroup(6, [Permutation(a)]))
