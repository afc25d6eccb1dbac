"""Magic states from coset permutation gates and the MIC fiducial test.

Candidate states are eigenvectors of the permutation matrices of P (single
elements and commuting families).  A candidate is a MIC fiducial when the d²
projectors of its orbit under the Pauli group of dimension d are linearly
independent, i.e. the Gram matrix ``|<psi_i|psi_j>|^2`` has rank d².

For composite d the Pauli group is the tensor product over the prime factors
of d (4 = 2x2, 6 = 2x3, 9 = 3x3, ...), with basis index j read as mixed-radix
digits, most significant factor first.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np
import scipy.linalg

from .permgroup import PermGroup, Permutation, commutes

RANK_TOL = 1e-8
OVERLAP_TOL = 1e-8
EIGEN_TOL = 1e-10
PHASE_TOL = 1e-9
DEFAULT_ELEMENT_CAP = 20000


def canonical_phase(v: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Rotate so the first nonzero amplitude is real and positive."""
    v = np.asarray(v, dtype=complex)
    nz = np.flatnonzero(np.abs(v) > tol)
    if len(nz) == 0:
        return v
    a = v[nz[0]]
    return v * (abs(a) / a)


def normalize(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=complex)
    return canonical_phase(v / np.linalg.norm(v))


def prime_factors(d: int) -> list[int]:
    out = []
    p = 2
    while p * p <= d:
        while d % p == 0:
            out.append(p)
            d //= p
        p += 1
    if d > 1:
        out.append(d)
    return out


class PauliSystem:
    """Generalized Pauli group on C^d as a tensor product over the prime factors of d."""

    def __init__(self, d: int, parts: Sequence[int] | None = None):
        if d < 1:
            raise ValueError("dimension must be positive")
        parts = list(parts) if parts is not None else prime_factors(d)
        if math.prod(parts) != d or any(prime_factors(p) != [p] for p in parts):
            raise ValueError(f"{parts} is not a prime factorization of {d}")
        self.d = d
        self.parts = tuple(parts)

    def __repr__(self):
        return f"PauliSystem(d={self.d}, parts={self.parts})"

    @cached_property
    def digits(self) -> np.ndarray:
        """(d, r) array of the mixed-radix digits of each basis index."""
        if not self.parts:
            return np.zeros((self.d, 0), dtype=int)
        return np.array(list(itertools.product(*(range(p) for p in self.parts))), dtype=int).reshape(self.d, -1)

    def labels(self) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
        """All (p, q) index vectors, p and q each a digit vector."""
        vecs = [tuple(int(x) for x in row) for row in self.digits]
        return [(p, q) for p in vecs for q in vecs]

    def _index(self, digits: np.ndarray) -> np.ndarray:
        idx = np.zeros(digits.shape[0], dtype=int)
        for k, p in enumerate(self.parts):
            idx = idx * p + digits[:, k]
        return idx

    def displacement_arrays(self, p: Sequence[int], q: Sequence[int]) -> tuple[np.ndarray, np.ndarray]:
        """Source index and phase arrays with (D psi)[j] = phase[j] * psi[src[j]]."""
        p = np.asarray(p, dtype=int).reshape(-1)
        q = np.asarray(q, dtype=int).reshape(-1)
        if len(p) != len(self.parts) or len(q) != len(self.parts):
            raise ValueError("index vectors must have one entry per subsystem")
        parts = np.array(self.parts, dtype=int)
        if np.any(p < 0) or np.any(q < 0) or np.any(p >= parts) or np.any(q >= parts):
            raise ValueError("displacement index out of range")
        dig = self.digits
        src_digits = (dig - p) % parts
        # X^p Z^q: Z phase is evaluated at the source digit
        phase = np.exp(2j * np.pi * np.sum(q * src_digits / parts, axis=1)) if len(parts) else np.ones(self.d)
        return self._index(src_digits), phase

    @cached_property
    def tables(self) -> tuple[np.ndarray, np.ndarray]:
        """Stacked (d², d) source-index and phase arrays for every displacement."""
        srcs, phases = [], []
        for p, q in self.labels():
            s, ph = self.displacement_arrays(p, q)
            srcs.append(s)
            phases.append(ph)
        return np.array(srcs), np.array(phases)

    def matrix(self, p: Sequence[int], q: Sequence[int]) -> np.ndarray:
        src, phase = self.displacement_arrays(p, q)
        m = np.zeros((self.d, self.d), dtype=complex)
        m[np.arange(self.d), src] = phase
        return m


def displacement(sys: PauliSystem, p: Sequence[int], q: Sequence[int], psi: np.ndarray) -> np.ndarray:
    src, phase = sys.displacement_arrays(p, q)
    return phase * np.asarray(psi, dtype=complex)[src]


def pauli_orbit(sys: PauliSystem, psi: np.ndarray) -> np.ndarray:
    """The d² displaced states as rows, each phase-canonicalized."""
    src, phase = sys.tables
    psi = np.asarray(psi, dtype=complex)
    states = phase * psi[src]
    return np.array([canonical_phase(s) for s in states])


def characteristic_values(sys: PauliSystem, psi: np.ndarray) -> np.ndarray:
    """<psi|D|psi> for every displacement D, in ``sys.labels()`` order."""
    src, phase = sys.tables
    psi = np.asarray(psi, dtype=complex)
    return np.sum(np.conj(psi)[None, :] * phase * psi[src], axis=1)


def gram_matrix(states: np.ndarray) -> np.ndarray:
    s = np.asarray(states, dtype=complex)
    return np.abs(s.conj() @ s.T) ** 2


def gram_rank(states: np.ndarray, tol: float = RANK_TOL) -> tuple[int, np.ndarray]:
    """Numeric rank of the projector Gram matrix (singular values above tol * largest)."""
    g = gram_matrix(states)
    sv = np.linalg.svd(g, compute_uv=False)
    if len(sv) == 0 or sv[0] == 0:
        return 0, g
    return int(np.sum(sv > tol * sv[0])), g


def pp_value(gram: np.ndarray, tol: float = OVERLAP_TOL) -> tuple[int, list[float]]:
    """Number of distinct off-diagonal Gram values after clustering within ``tol``."""
    n = gram.shape[0]
    vals = np.sort(gram[~np.eye(n, dtype=bool)])
    clusters: list[list[float]] = []
    for v in vals:
        if clusters and v - clusters[-1][-1] <= tol:
            clusters[-1].append(float(v))
        else:
            clusters.append([float(v)])
    return len(clusters), [float(np.mean(c)) for c in clusters]


def cycle_eigenvectors(sigma: Permutation) -> list[tuple[complex, np.ndarray]]:
    """Fourier vectors on each cycle: an eigenbasis of the permutation matrix.

    For a cycle (c_0 ... c_{L-1}) and k in 0..L-1 the vector has entry
    exp(2 pi i k j / L)/sqrt(L) at c_j; its eigenvalue is exp(-2 pi i k / L).
    """
    d = sigma.degree
    out = []
    for cyc in sigma.cycles():
        L = len(cyc)
        for k in range(L):
            v = np.zeros(d, dtype=complex)
            v[list(cyc)] = np.exp(2j * np.pi * k * np.arange(L) / L) / math.sqrt(L)
            out.append((complex(np.exp(-2j * np.pi * k / L)), v))
    return out


def _cluster(values: np.ndarray, tol: float = 1e-8) -> list[list[int]]:
    groups: list[list[int]] = []
    reps: list[complex] = []
    for i, v in enumerate(values):
        for g, r in zip(groups, reps):
            if abs(v - r) <= tol:
                g.append(i)
                break
        else:
            groups.append([i])
            reps.append(v)
    return groups


def _canonical_basis(B: np.ndarray) -> np.ndarray:
    """Orthonormal basis of span(B) independent of the spanning set chosen."""
    proj = B @ B.conj().T
    cols = []
    for i in range(proj.shape[0]):
        v = proj[:, i].copy()
        for c in cols:
            v = v - c * (c.conj() @ v)
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            cols.append(canonical_phase(v / nv))
        if len(cols) == B.shape[1]:
            break
    return np.array(cols).T


def eigenspaces(sigma: Permutation) -> list[np.ndarray]:
    pairs = cycle_eigenvectors(sigma)
    vals = np.array([lam for lam, _ in pairs])
    return [np.array([pairs[i][1] for i in grp]).T for grp in _cluster(vals)]


def joint_eigenvectors(S: Sequence[Permutation]) -> list[np.ndarray]:
    """Common eigenvectors of commuting permutation matrices by eigenspace splitting."""
    S = list(S)
    if not S:
        raise ValueError("need at least one permutation")
    for x, y in itertools.combinations(S, 2):
        if not commutes(x, y):
            raise ValueError("permutations do not commute")
    spaces = eigenspaces(S[0])
    for sigma in S[1:]:
        if all(B.shape[1] == 1 for B in spaces):
            break
        M = sigma.matrix()
        nxt = []
        for B in spaces:
            if B.shape[1] == 1:
                nxt.append(B)
                continue
            R = B.conj().T @ M @ B
            T, Z = scipy.linalg.schur(R, output="complex")
            for grp in _cluster(np.diag(T)):
                sub = B @ Z[:, grp]
                q, _ = np.linalg.qr(sub)
                nxt.append(q)
        spaces = nxt
    out = []
    for B in spaces:
        if B.shape[1] == 1:
            out.append(normalize(B[:, 0]))
        else:
            out.extend(canonical_phase(c) for c in _canonical_basis(B).T)
    return out


# -- stabilizer states ---------------------------------------------------------------


def prime_stabilizer_states(p: int) -> list[np.ndarray]:
    """The p(p+1) stabilizer states of one qudit of prime dimension p."""
    sys = PauliSystem(p)
    states = [np.eye(p, dtype=complex)[j] for j in range(p)]
    for q in range(p):
        M = sys.matrix([1], [q])
        _, vecs = np.linalg.eig(M)
        states.extend(normalize(vecs[:, j]) for j in range(p))
    return states


def _matches_any(psi: np.ndarray, states: Iterable[np.ndarray], tol: float = PHASE_TOL) -> bool:
    return any(abs(abs(np.vdot(s, psi)) - 1.0) <= tol for s in states)


def _product_factors(psi: np.ndarray, parts: Sequence[int]) -> list[np.ndarray] | None:
    """Split psi into single-qudit factors if it is a product state."""
    factors = []
    rest = np.asarray(psi, dtype=complex)
    for k, p in enumerate(parts[:-1]):
        m = rest.reshape(p, -1)
        u, s, vh = np.linalg.svd(m)
        if len(s) > 1 and s[1] > 1e-7:
            return None
        factors.append(u[:, 0] * s[0])
        rest = vh[0]
    factors.append(rest)
    return [f / np.linalg.norm(f) for f in factors]


def stabilizer_check(sys: PauliSystem, psi: np.ndarray) -> str:
    """'stabilizer', 'magic' or 'unknown'."""
    psi = np.asarray(psi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    if sys.d == 1:
        return "stabilizer"
    if len(sys.parts) == 1:
        return "stabilizer" if _matches_any(psi, prime_stabilizer_states(sys.d)) else "magic"
    factors = _product_factors(psi, sys.parts)
    if factors is not None:
        ok = all(_matches_any(f, prime_stabilizer_states(p)) for f, p in zip(factors, sys.parts))
        return "stabilizer" if ok else "magic"
    # entangled: a stabilizer state has exactly d Pauli expectations of modulus one
    mod = np.abs(characteristic_values(sys, psi))
    ones = int(np.sum(np.abs(mod - 1) <= 1e-7))
    if ones == sys.d:
        return "stabilizer"
    if ones < sys.d and np.all((mod < 1 - 1e-4) | (np.abs(mod - 1) <= 1e-7)):
        return "magic"
    return "unknown"


# -- scan ----------------------------------------------------------------------------


@dataclass
class MicReport:
    d: int
    candidates_tested: int
    is_mic: bool
    gram_rank: int
    fiducial: np.ndarray | None = None
    pp: int | None = None
    pp_values: list[float] = field(default_factory=list)
    stabilizer_verdict: str = "unknown"
    exhaustive: bool = True
    budget_exhausted: bool = False
    source: str = ""

    @property
    def not_found_under_budget(self) -> bool:
        return not self.is_mic and not self.exhaustive


def _state_key(v: np.ndarray) -> tuple:
    v = canonical_phase(v)
    r = np.round(v, 9) + (0.0 + 0.0j)
    return tuple(np.concatenate([r.real, r.imag]).tolist())


def _commuting_mask(E: np.ndarray, x: np.ndarray) -> np.ndarray:
    """Rows of E (permutations as image arrays) that commute with x."""
    return np.all(E[:, x] == x[E], axis=1)


def _maximal_commuting_families(elems: Sequence[Permutation], seeds: Sequence[Permutation]) -> list[list[Permutation]]:
    """Greedy maximal commuting family for each seed, pool scanned in ``elems`` order."""
    E = np.array([e.images for e in elems], dtype=np.int64)
    index = {e: i for i, e in enumerate(elems)}
    ident = [i for i, e in enumerate(elems) if e.is_identity()]
    fams = []
    done_cyclic: set[frozenset] = set()
    for x in seeds:
        cyc = frozenset((x**k) for k in range(1, x.order()) if math.gcd(k, x.order()) == 1)
        if cyc in done_cyclic:
            continue
        done_cyclic.add(cyc)
        mask = _commuting_mask(E, E[index[x]])
        mask[ident] = False
        mask[index[x]] = False
        fam = [x]
        for i in np.flatnonzero(mask):
            if mask[i]:
                fam.append(elems[i])
                mask &= _commuting_mask(E, E[i])
        fams.append(fam)
    return fams


def _candidate_elements(P: PermGroup, cap: int, seed: int) -> tuple[list[Permutation], bool]:
    """Elements whose eigenvectors are tried; second value says whether all of P was used."""
    if P.order() <= cap:
        return sorted(P.elements()), True
    d = P.degree
    gens = list(P.generators) + [g.inverse() for g in P.generators]
    found: dict[Permutation, None] = {Permutation.identity(d): None}
    layer = [Permutation.identity(d)]
    for _ in range(4):
        layer = [x * g for x in layer for g in gens]
        for x in layer:
            found.setdefault(x, None)
    # uniform random elements as products of random coset representatives
    rng = random.Random(seed)
    levels = [list(lev.trans.values()) for lev in P.chain.levels]
    for _ in range(min(cap, DEFAULT_SAMPLE)):
        img = tuple(range(d))
        for lev in reversed(levels):
            u = rng.choice(lev)
            img = tuple(u[i] for i in img)
        found.setdefault(Permutation(img), None)
    return sorted(found), False


DEFAULT_SAMPLE = 2000
FAMILY_SEEDS = 300


def candidate_states(P: PermGroup, cap: int = DEFAULT_ELEMENT_CAP, seed: int = 0, exhaustive: bool = False):
    """Deduplicated candidate states in deterministic order, plus an exhaustiveness flag.

    Cycle eigenvectors come first (one pass over distinct cycles), then joint
    eigenvectors of greedy maximal commuting families.  Exhaustive mode seeds
    a family at every element; otherwise at most ``FAMILY_SEEDS`` seeds drawn
    with ``seed``.
    """
    elems, complete = _candidate_elements(P, cap, seed)
    seen: dict[tuple, np.ndarray] = {}
    cycles_done: set[tuple[int, ...]] = set()
    d = P.degree
    for x in elems:
        for cyc in x.cycles():
            if cyc in cycles_done:
                continue
            cycles_done.add(cyc)
            sigma = Permutation.from_cycles(d, cyc)
            for _, v in cycle_eigenvectors(sigma):
                seen.setdefault(_state_key(v), canonical_phase(v))
    seeds = [x for x in elems if not x.is_identity()]
    if not (exhaustive and complete) and len(seeds) > FAMILY_SEEDS:
        seeds = sorted(random.Random(seed).sample(seeds, FAMILY_SEEDS))
        complete = False
    families: set[frozenset] = set()
    for fam in _maximal_commuting_families(elems, seeds):
        key = frozenset(fam)
        if key in families:
            continue
        families.add(key)
        for v in joint_eigenvectors(fam):
            seen.setdefault(_state_key(v), v)
    return list(seen.values()), complete


def _distinct_count(values: np.ndarray, tol: float) -> int:
    v = np.sort(values)
    return 1 + int(np.sum(np.diff(v) > tol)) if len(v) else 0


def mic_scan(
    P,
    element_cap: int = DEFAULT_ELEMENT_CAP,
    seed: int = 0,
    exhaustive: bool = False,
    tol: float = RANK_TOL,
    overlap_tol: float = OVERLAP_TOL,
    source: str = "",
) -> MicReport:
    """Search the permutation eigenstates of P for a MIC fiducial.

    ``P`` may be a PermGroup or anything with a coset ``table`` (a subgroup
    record).  Off-diagonal Gram values of an orbit are the numbers
    |<psi|D|psi>|^2 for D != 1, so the orbit is a MIC exactly when none of
    them vanishes.  Every candidate is screened that way; among the MIC
    candidates the one with the fewest distinct overlaps is kept (earliest
    on ties) and its rank is confirmed on the full Gram matrix.
    """
    if not isinstance(P, PermGroup):
        table = P.table
        P = PermGroup(table.index, table.permutations())
    d = P.degree
    sys = PauliSystem(d)
    if d == 1:
        psi = np.ones(1, dtype=complex)
        return MicReport(1, 1, True, 1, psi, 0, [], "stabilizer", True, False, source)
    cands, complete = candidate_states(P, element_cap, seed, exhaustive)
    best_rank = 0
    floor = 1e-10
    ranked = []
    for n, v in enumerate(cands):
        chi2 = np.abs(characteristic_values(sys, v)) ** 2
        if np.min(chi2) < floor:
            best_rank = max(best_rank, int(np.sum(chi2 >= floor)))
            continue
        ranked.append((_distinct_count(chi2[1:], overlap_tol), n))
    for _, n in sorted(ranked):
        v = cands[n]
        r, g = gram_rank(pauli_orbit(sys, v), tol)
        best_rank = max(best_rank, r)
        if r == d * d:
            pp, vals = pp_value(g, overlap_tol)
            return MicReport(d, len(cands), True, r, v, pp, vals, stabilizer_check(sys, v), complete, False, source)
    return MicReport(d, len(cands), False, best_rank, None, None, [], "unknown", complete, False, source)
