"""Centralization, commutators, Abelianness and related finite checks.

The centralization relation is decided on the matrix subalgebra
M(alpha, beta) <= A^4: the subalgebra generated by the row matrices
(a, a, b, b) for related pairs (a, b) of alpha and the column matrices
(p, q, p, q) for related pairs (p, q) of beta.  A matrix (t11, t12, t21,
t22) encodes the four values of a term under an alpha-change of the first
argument block and a beta-change of the second; closure under the
componentwise operations reaches exactly the term matrices.

alpha centralizes beta modulo delta iff every matrix satisfies
t11 delta t12  =>  t21 delta t22.  The commutator [alpha, beta] is the
least such delta, obtained by joining in forced conclusion pairs until
the scan is stable.  Matrices live in A^4 as flat indices; the closure is
vectorized since it dominates the running time on algebras near size 8.
"""

from dataclasses import dataclass

import numpy as np

from .algebras import (
    AlgebraError,
    Homomorphism,
    all_subuniverses,
    check_homomorphism,
    enumerate_terms,
    product,
    term_table,
)
from .congruences import Congruence, cg, con_lattice, join
from .lattices import find_m3_01

_CHUNK = 1 << 21


def _power_tables(alg):
    unary, binary, consts = [], [], []
    for opname, arity in alg.signature.ops:
        tab = np.asarray(alg.table(opname), dtype=np.int64)
        if arity == 0:
            consts.append(int(tab[0]))
        elif arity == 1:
            unary.append(tab)
        elif arity == 2:
            binary.append(tab.reshape(alg.size, alg.size))
        else:
            raise AlgebraError(
                "matrix subalgebra closure supports arities <= 2 "
                f"(operation of arity {arity} given)"
            )
    return unary, binary, consts


def matrix_subalgebra(alg, alpha, beta):
    """Sorted flat indices (base alg.size, four digits) of M(alpha, beta)."""
    n = alg.size
    unary, binary, consts = _power_tables(alg)
    gens = set()
    for a in range(n):
        for b in range(n):
            if alpha.label[a] == alpha.label[b]:
                gens.add(((a * n + a) * n + b) * n + b)
            if beta.label[a] == beta.label[b]:
                gens.add(((a * n + b) * n + a) * n + b)
    for c in consts:
        gens.add(((c * n + c) * n + c) * n + c)

    total = n ** 4
    member = np.zeros(total, dtype=bool)
    frontier = np.fromiter(sorted(gens), dtype=np.int64)
    member[frontier] = True

    def digits(idx):
        d3 = idx % n
        r = idx // n
        d2 = r % n
        r //= n
        d1 = r % n
        d0 = r // n
        return d0, d1, d2, d3

    def combine(tab, x, y):
        x0, x1, x2, x3 = digits(x)
        y0, y1, y2, y3 = digits(y)
        return ((tab[x0, y0] * n + tab[x1, y1]) * n + tab[x2, y2]) * n + tab[x3, y3]

    while frontier.size:
        new_mask = np.zeros(total, dtype=bool)
        for tab in unary:
            x0, x1, x2, x3 = digits(frontier)
            vals = ((tab[x0] * n + tab[x1]) * n + tab[x2]) * n + tab[x3]
            new_mask[vals] = True
        if binary:
            current = np.flatnonzero(member)
            step = max(1, _CHUNK // max(1, current.size))
            for tab in binary:
                for i in range(0, frontier.size, step):
                    f = frontier[i : i + step][:, None]
                    s = current[None, :]
                    new_mask[combine(tab, f, s).ravel()] = True
                    new_mask[combine(tab, s, f).ravel()] = True
        new_mask &= ~member
        frontier = np.flatnonzero(new_mask)
        member[frontier] = True
    return np.flatnonzero(member)


def _matrix_columns(indices, n):
    t3 = indices % n
    r = indices // n
    t2 = r % n
    r //= n
    t1 = r % n
    t0 = r // n
    return t0, t1, t2, t3


def centralizes(alg, alpha, beta, delta, matrices=None):
    """Whether alpha centralizes beta modulo delta.

    Returns (True, None) or (False, counterexample matrix (t11,t12,t21,t22)).
    """
    if matrices is None:
        matrices = matrix_subalgebra(alg, alpha, beta)
    t11, t12, t21, t22 = _matrix_columns(matrices, alg.size)
    lbl = np.asarray(delta.label, dtype=np.int64)
    bad = (lbl[t11] == lbl[t12]) & (lbl[t21] != lbl[t22])
    hits = np.flatnonzero(bad)
    if hits.size:
        i = int(hits[0])
        return False, (int(t11[i]), int(t12[i]), int(t21[i]), int(t22[i]))
    return True, None


def commutator(alg, alpha, beta):
    """[alpha, beta]: least delta with alpha centralizing beta modulo delta."""
    matrices = matrix_subalgebra(alg, alpha, beta)
    t11, t12, t21, t22 = _matrix_columns(matrices, alg.size)
    delta = Congruence.zero(alg.size)
    while True:
        lbl = np.asarray(delta.label, dtype=np.int64)
        forced = (lbl[t11] == lbl[t12]) & (lbl[t21] != lbl[t22])
        if not forced.any():
            return delta
        new_pairs = set(zip(t21[forced].tolist(), t22[forced].tolist()))
        delta = cg(alg, delta.pairs() + sorted(new_pairs))


def centralizer(alg, delta, beta, con=None):
    """(delta : beta): largest alpha with alpha centralizing beta modulo delta."""
    lattice = con if con is not None else con_lattice(alg)
    result = Congruence.zero(alg.size)
    for th in lattice.elements:
        if centralizes(alg, th, beta, delta)[0]:
            result = join(alg, result, th)
    ok, _ = centralizes(alg, result, beta, delta)
    assert ok, "join of centralizing congruences must centralize"
    return result


def is_abelian(alg):
    one = Congruence.one(alg.size)
    return commutator(alg, one, one).is_zero()


# ---------------------------------------------------------------------------
# Weak difference terms


@dataclass(frozen=True)
class WeakDiffReport:
    ok: bool
    theta: Congruence | None = None
    pair: tuple | None = None


def check_weak_difference(alg, d, con=None):
    """Whether the ternary term/polynomial d satisfies
    d(x,y,y) = x = d(y,y,x) modulo [theta,theta] for every theta and
    every theta-related (x, y).  Reports the first failure."""
    lattice = con if con is not None else con_lattice(alg)
    tab = term_table(alg, d, 3)
    n = alg.size
    for th in lattice.elements:
        sq = commutator(alg, th, th)
        for x in range(n):
            for y in range(n):
                if th.label[x] != th.label[y]:
                    continue
                dxyy = tab[(x * n + y) * n + y]
                dyyx = tab[(y * n + y) * n + x]
                if sq.label[dxyy] != sq.label[x] or sq.label[dyyx] != sq.label[x]:
                    return WeakDiffReport(False, th, (x, y))
    return WeakDiffReport(True)


@dataclass(frozen=True)
class TermSearchResult:
    term: object | None
    depth_bound: int

    @property
    def found(self):
        return self.term is not None


def find_weak_difference_term(alg, max_depth, polynomials=False):
    """First ternary term (or polynomial) passing check_weak_difference,
    searched by depth with table dedup; result is tagged with the bound."""
    lattice = con_lattice(alg)
    consts = alg if polynomials else None
    for t in enumerate_terms(alg.signature, 3, max_depth, dedup_on=alg, with_constants=consts):
        if check_weak_difference(alg, t, con=lattice).ok:
            return TermSearchResult(t, max_depth)
    return TermSearchResult(None, max_depth)


# ---------------------------------------------------------------------------
# Hamiltonian and affine checks


def is_hamiltonian(alg, max_size=10):
    """Whether every subalgebra is a block of some congruence.

    Returns (True, None) or (False, offending subuniverse)."""
    subs = all_subuniverses(alg, max_size=max_size)
    lattice = con_lattice(alg)
    block_sets = set()
    for th in lattice.elements:
        for blk in th.blocks():
            block_sets.add(tuple(blk))
    for s in subs:
        if tuple(s) not in block_sets:
            return False, s
    return True, None


@dataclass(frozen=True)
class AffineWitness:
    term: object
    zero: int
    add: tuple  # flat n*n table of x+y := t(x, zero, y)
    neg: tuple  # table of -x := t(zero, x, zero)


@dataclass(frozen=True)
class AffineReport:
    witness: AffineWitness | None
    failure: str | None

    @property
    def ok(self):
        return self.witness is not None


def check_affine_witness(alg, t, zero):
    """Verify that t is a difference operation with the given zero.

    Checks, in order: both Mal'cev equations, the Abelian group laws of
    the derived (+, -, zero), the identity t(x,y,z) = x - y + z, and that
    t is a homomorphism from the cube to the algebra."""
    n = alg.size
    tab = term_table(alg, t, 3)

    def tv(x, y, z):
        return tab[(x * n + y) * n + z]

    for x in range(n):
        for y in range(n):
            if tv(x, y, y) != x:
                return AffineReport(None, f"Mal'cev equation t(x,y,y)=x fails at ({x},{y})")
            if tv(y, y, x) != x:
                return AffineReport(None, f"Mal'cev equation t(y,y,x)=x fails at ({x},{y})")
    add = tuple(tv(x, zero, y) for x in range(n) for y in range(n))
    neg = tuple(tv(zero, x, zero) for x in range(n))

    def plus(x, y):
        return add[x * n + y]

    for x in range(n):
        if plus(x, zero) != x or plus(zero, x) != x:
            return AffineReport(None, f"derived zero is not neutral at {x}")
        if plus(x, neg[x]) != zero:
            return AffineReport(None, f"derived negation fails at {x}")
        for y in range(n):
            if plus(x, y) != plus(y, x):
                return AffineReport(None, f"derived addition not commutative at ({x},{y})")
            for z in range(n):
                if plus(plus(x, y), z) != plus(x, plus(y, z)):
                    return AffineReport(None, f"derived addition not associative at ({x},{y},{z})")
    for x in range(n):
        for y in range(n):
            for z in range(n):
                if tv(x, y, z) != plus(plus(x, neg[y]), z):
                    return AffineReport(None, f"t(x,y,z) != x-y+z at ({x},{y},{z})")
    cube = product(product(alg, alg), alg)
    mapping = tuple(tv(i // (n * n), (i // n) % n, i % n) for i in range(n ** 3))
    res = check_homomorphism(cube, alg, mapping)
    if not isinstance(res, Homomorphism):
        return AffineReport(None, "t is not a homomorphism from the cube: " + res.describe())
    return AffineReport(AffineWitness(t, zero, add, neg), None)


# ---------------------------------------------------------------------------
# M3 + weak difference polynomial => Abelian


@dataclass(frozen=True)
class M3WdpReport:
    m3: object | None  # M3Witness in Con(alg), if any
    wdp: object | None  # weak difference polynomial, if found
    wdp_depth: int
    abelian: bool

    @property
    def hypotheses_hold(self):
        return self.m3 is not None and self.wdp is not None

    @property
    def consistent(self):
        return (not self.hypotheses_hold) or self.abelian


def check_m3_wdp_abelian(alg, max_depth=3):
    """Executable form of: an M3 0,1-sublattice in Con(A) together with a
    weak difference polynomial forces A to be Abelian.

    A report with hypotheses satisfied but a non-Abelian algebra would
    contradict a theorem; that case raises instead of reporting."""
    lattice = con_lattice(alg)
    witness = find_m3_01(lattice.as_lattice())
    found = find_weak_difference_term(alg, max_depth, polynomials=True)
    abelian = is_abelian(alg)
    report = M3WdpReport(witness, found.term, max_depth, abelian)
    if not report.consistent:
        raise AssertionError(
            "M3 sublattice and weak difference polynomial present "
            "but the algebra is not Abelian; this contradicts the theorem"
        )
    return report
