import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cosetlab.lowindex import low_index_subgroups
from cosetlab.mic import (
    PauliSystem,
    characteristic_values,
    cycle_eigenvectors,
    gram_matrix,
    gram_rank,
    joint_eigenvectors,
    mic_scan,
    pauli_orbit,
    pp_value,
    prime_stabilizer_states,
    stabilizer_check,
)
from cosetlab.permgroup import PermGroup, Permutation
from cosetlab.presentations import catalog_lookup

from oracles import exact_rank, random_low_index_tables, rationalize


def qubit_tetrahedron():
    # SIC fiducial for d=2: Bloch vector (1,1,1)/sqrt(3)
    theta = np.arccos(1 / np.sqrt(3))
    return np.array([np.cos(theta / 2), np.exp(1j * np.pi / 4) * np.sin(theta / 2)])


def test_cycle_eigenvectors():
    sigma = Permutation.from_cycles(5, (0, 2, 4), (1, 3))
    M = sigma.matrix()
    pairs = cycle_eigenvectors(sigma)
    assert len(pairs) == 5
    for lam, v in pairs:
        assert np.linalg.norm(M @ v - lam * v) <= 1e-10
    V = np.array([v for _, v in pairs])
    assert np.allclose(V.conj() @ V.T, np.eye(5))


def test_joint_eigenvectors_of_klein_group():
    a = Permutation.from_cycles(4, (0, 1), (2, 3))
    b = Permutation.from_cycles(4, (0, 2), (1, 3))
    vecs = joint_eigenvectors([a, b])
    assert len(vecs) == 4
    for v in vecs:
        for g in (a, b):
            w = g.matrix() @ v
            lam = np.vdot(v, w)
            assert np.linalg.norm(w - lam * v) <= 1e-10
    with pytest.raises(ValueError):
        joint_eigenvectors([a, Permutation.from_cycles(4, (0, 1, 2))])


def test_joint_eigenvectors_random_abelian_subgroups():
    for t in random_low_index_tables(60, seed=9, max_index=6):
        perms = t.permutations()
        for x, y in itertools.combinations(perms, 2):
            if x * y == y * x:
                for v in joint_eigenvectors([x, y]):
                    for g in (x, y):
                        w = g.matrix() @ v
                        assert np.linalg.norm(w - np.vdot(v, w) * v) <= 1e-10


@pytest.mark.parametrize("d", [2, 3, 4, 5, 6, 8, 9, 12])
def test_displacements_are_unitary_and_close(d):
    sys = PauliSystem(d)
    mats = [sys.matrix(p, q) for p, q in sys.labels()]
    assert len(mats) == d * d
    for m in mats:
        assert np.allclose(m @ m.conj().T, np.eye(d))
    # pairwise trace-orthogonal, so they span the d x d matrices
    T = np.array([m.reshape(-1) for m in mats])
    assert np.allclose(T.conj() @ T.T, d * np.eye(d * d))
    # products stay in the group up to phase
    a, b = mats[1], mats[-1]
    prod = a @ b
    assert any(abs(abs(np.trace(prod.conj().T @ m)) - d) < 1e-9 for m in mats)


def test_displacement_range_checked():
    with pytest.raises(ValueError):
        PauliSystem(4).displacement_arrays([2, 0], [0, 0])
    with pytest.raises(ValueError):
        PauliSystem(6, [2, 2])


def test_qubit_sic():
    sys = PauliSystem(2)
    orbit = pauli_orbit(sys, qubit_tetrahedron())
    r, g = gram_rank(orbit)
    assert r == 4
    pp, vals = pp_value(g)
    assert pp == 1 and vals[0] == pytest.approx(1 / 3)


def test_basis_state_orbit_is_degenerate():
    sys = PauliSystem(3)
    r, _ = gram_rank(pauli_orbit(sys, np.eye(3)[0]))
    assert r == 3


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.integers(0, 10**6))
def test_rank_counts_nonzero_characteristic_values(d, seed):
    rng = np.random.default_rng(seed)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    if seed % 3 == 0:
        v[rng.integers(d)] = 0
    if seed % 5 == 0:
        v = v.real + 0j
    v /= np.linalg.norm(v)
    sys = PauliSystem(d)
    chi = np.abs(characteristic_values(sys, v)) ** 2
    r, g = gram_rank(pauli_orbit(sys, v))
    assert r == int(np.sum(chi > 1e-10))
    off = g[0][1:]
    assert np.allclose(sorted(off), sorted(chi[1:]))


def test_exact_rank_agrees_for_permutation_eigenstates():
    checked = 0
    for t in random_low_index_tables(120, seed=17, max_index=6):
        if t.index < 2:
            continue
        sys = PauliSystem(t.index)
        for sigma in t.permutations()[:1]:
            for _, v in cycle_eigenvectors(sigma)[:3]:
                r, g = gram_rank(pauli_orbit(sys, v))
                exact = rationalize(g)
                if exact is None:
                    continue
                assert exact_rank(exact) == r
                checked += 1
    assert checked > 50


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_stabilizer_states_are_never_mic(p):
    sys = PauliSystem(p)
    states = prime_stabilizer_states(p)
    assert len(states) == p * (p + 1)
    for s in states:
        assert gram_rank(pauli_orbit(sys, s))[0] < p * p
        assert stabilizer_check(sys, s) == "stabilizer"


def test_stabilizer_check_composite():
    sys = PauliSystem(4)
    plus = np.array([1, 1]) / np.sqrt(2)
    assert stabilizer_check(sys, np.kron(plus, [1, 0])) == "stabilizer"
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert stabilizer_check(sys, bell) == "stabilizer"
    assert stabilizer_check(sys, np.kron(qubit_tetrahedron(), [1, 0])) == "magic"
    assert stabilizer_check(PauliSystem(2), qubit_tetrahedron()) == "magic"


def test_sic_overlap_is_forced():
    # any MIC with a single overlap value has overlap 1/(d+1)
    v = qubit_tetrahedron()
    g = gram_matrix(pauli_orbit(PauliSystem(2), v))
    assert np.allclose(g[~np.eye(4, dtype=bool)], 1 / 3)


def test_trivial_dimension():
    rep = mic_scan(PermGroup.trivial(1))
    assert rep.is_mic and rep.gram_rank == 1


def test_trefoil_index_three():
    rec = low_index_subgroups(catalog_lookup("trefoil").presentation, 3)[0]
    rep = mic_scan(rec, exhaustive=True)
    assert rep.is_mic and rep.gram_rank == 9
    assert rep.pp == 1 and rep.pp_values[0] == pytest.approx(0.25, abs=1e-9)
    assert rep.stabilizer_verdict == "magic"


def test_fig8_index_seven_two_overlaps():
    for rec in low_index_subgroups(catalog_lookup("fig8").presentation, 7)[:2]:
        rep = mic_scan(rec)
        assert rep.is_mic and rep.pp == 2


def test_sampling_is_flagged():
    rec = low_index_subgroups(catalog_lookup("fig8").presentation, 7)[0]
    rep = mic_scan(rec, element_cap=10)
    assert not rep.exhaustive
    assert rep.candidates_tested > 0
