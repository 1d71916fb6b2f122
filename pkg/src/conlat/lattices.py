"""Abstract finite lattices given by their order, plus identity checks.

Used for congruence lattices, powerset semilattices and catalog entries
alike.  Property checks are exhaustive scans over element triples and
return a violating triple as the witness on failure.
"""

from dataclasses import dataclass
from itertools import permutations

from .algebras import AlgebraError, FiniteAlgebra, Signature


@dataclass(frozen=True)
class FiniteLattice:
    leq: tuple  # boolean matrix, leq[i][j] iff i <= j
    join_table: tuple
    meet_table: tuple
    zero: int
    one: int

    def __len__(self):
        return len(self.leq)

    def join(self, i, j):
        return self.join_table[i][j]

    def meet(self, i, j):
        return self.meet_table[i][j]

    def atoms(self):
        return [
            i
            for i in range(len(self))
            if i != self.zero
            and all(not (self.leq[k][i] and k != i and k != self.zero) for k in range(len(self)))
        ]

    @staticmethod
    def from_leq(leq):
        """Build from an order matrix; raises if some pair lacks a lub or glb."""
        n = len(leq)
        for i in range(n):
            if not leq[i][i]:
                raise AlgebraError("order not reflexive")
            for j in range(n):
                if leq[i][j] and leq[j][i] and i != j:
                    raise AlgebraError("order not antisymmetric")
                for k in range(n):
                    if leq[i][j] and leq[j][k] and not leq[i][k]:
                        raise AlgebraError("order not transitive")
        joins = [[None] * n for _ in range(n)]
        meets = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                ub = [k for k in range(n) if leq[i][k] and leq[j][k]]
                lub = [k for k in ub if all(leq[k][m] for m in ub)]
                if len(lub) != 1:
                    raise AlgebraError(f"no unique join for ({i},{j})")
                joins[i][j] = lub[0]
                lb = [k for k in range(n) if leq[k][i] and leq[k][j]]
                glb = [k for k in lb if all(leq[m][k] for m in lb)]
                if len(glb) != 1:
                    raise AlgebraError(f"no unique meet for ({i},{j})")
                meets[i][j] = glb[0]
        bot = [i for i in range(n) if all(leq[i][k] for k in range(n))]
        top = [i for i in range(n) if all(leq[k][i] for k in range(n))]
        if len(bot) != 1 or len(top) != 1:
            raise AlgebraError("missing bounds")
        return FiniteLattice(
            tuple(tuple(bool(v) for v in row) for row in leq),
            tuple(tuple(r) for r in joins),
            tuple(tuple(r) for r in meets),
            bot[0],
            top[0],
        )

    def covers(self):
        n = len(self)
        out = []
        for i in range(n):
            for j in range(n):
                if i == j or not self.leq[i][j]:
                    continue
                if not any(k != i and k != j and self.leq[i][k] and self.leq[k][j] for k in range(n)):
                    out.append((i, j))
        return out


def chain(n):
    return FiniteLattice.from_leq([[i <= j for j in range(n)] for i in range(n)])


def boolean(k):
    """The powerset lattice of a k-element set; element i is the bitmask i."""
    n = 1 << k
    return FiniteLattice.from_leq([[(i & j) == i for j in range(n)] for i in range(n)])


def m3():
    """Three atoms below a top: 0 < 1,2,3 < 4."""
    leq = [[False] * 5 for _ in range(5)]
    for i in range(5):
        leq[i][i] = True
        leq[0][i] = True
        leq[i][4] = True
    return FiniteLattice.from_leq(leq)


def n5():
    """Pentagon: 0 < 1 < 3 < 4 and 0 < 2 < 4."""
    below = {0: set(), 1: {0}, 2: {0}, 3: {0, 1}, 4: {0, 1, 2, 3}}
    leq = [[i == j or i in below[j] for j in range(5)] for i in range(5)]
    return FiniteLattice.from_leq(leq)


LATTICE_PROPERTIES = ("distributive", "modular", "sd_join", "sd_meet")


def lattice_property(lat, which):
    """Exhaustive check of one lattice law; returns (holds, witness_triple)."""
    n = len(lat)
    jt, mt = lat.join_table, lat.meet_table
    if which == "distributive":
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if mt[a][jt[b][c]] != jt[mt[a][b]][mt[a][c]]:
                        return False, (a, b, c)
        return True, None
    if which == "modular":
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if lat.leq[a][c] and jt[a][mt[b][c]] != mt[jt[a][b]][c]:
                        return False, (a, b, c)
        return True, None
    if which == "sd_join":
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if jt[a][b] == jt[a][c] and jt[a][b] != jt[a][mt[b][c]]:
                        return False, (a, b, c)
        return True, None
    if which == "sd_meet":
        for a in range(n):
            for b in range(n):
                for c in range(n):
                    if mt[a][b] == mt[a][c] and mt[a][b] != mt[a][jt[b][c]]:
                        return False, (a, b, c)
        return True, None
    raise AlgebraError(f"unknown lattice property {which!r}")


@dataclass(frozen=True)
class M3Witness:
    """Three elements with pairwise meet 0 and pairwise join 1, none of them
    equal to a bound.  ``checks`` records the six verified equations."""

    triple: tuple
    checks: tuple

    @staticmethod
    def verify(lat, triple):
        a, b, c = triple
        checks = []
        ok = True
        for x, y in ((a, b), (a, c), (b, c)):
            checks.append(("meet", x, y, lat.meet(x, y), lat.zero))
            ok = ok and lat.meet(x, y) == lat.zero
            checks.append(("join", x, y, lat.join(x, y), lat.one))
            ok = ok and lat.join(x, y) == lat.one
        for x in triple:
            ok = ok and x != lat.zero and x != lat.one
        return (M3Witness(tuple(triple), tuple(checks)) if ok else None)


def find_m3_01(lat):
    """First triple spanning a 0,1-sublattice isomorphic to M3, or None."""
    n = len(lat)
    mid = [x for x in range(n) if x != lat.zero and x != lat.one]
    for i, a in enumerate(mid):
        for j in range(i + 1, len(mid)):
            b = mid[j]
            if lat.meet(a, b) != lat.zero or lat.join(a, b) != lat.one:
                continue
            for k in range(j + 1, len(mid)):
                c = mid[k]
                w = M3Witness.verify(lat, (a, b, c))
                if w is not None:
                    return w
    return None


LATTICE_SIGNATURE = Signature((("join", 2), ("meet", 2)))


def lattice_algebra(lat, name=""):
    """The lattice as a finite algebra with binary join and meet."""
    n = len(lat)
    jt = tuple(lat.join_table[i][j] for i in range(n) for j in range(n))
    mt = tuple(lat.meet_table[i][j] for i in range(n) for j in range(n))
    return FiniteAlgebra(n, LATTICE_SIGNATURE, (jt, mt), name=name)


def boolean_isomorphisms(k, lat):
    """All isomorphisms from the powerset lattice of k onto lat.

    Returned as tuples ``img`` with ``img[mask]`` the lattice element for
    each bitmask.  Atom images are tried in all k! assignments; a bijective
    join-preserving extension is an isomorphism.
    """
    if len(lat) != (1 << k):
        return []
    atoms = lat.atoms()
    if len(atoms) != k:
        return []
    out = []
    for perm in permutations(atoms):
        img = [lat.zero] * (1 << k)
        for mask in range(1, 1 << k):
            low = mask & -mask
            rest = mask ^ low
            img[mask] = lat.join(img[rest], perm[low.bit_length() - 1])
        if len(set(img)) == (1 << k) and img[(1 << k) - 1] == lat.one:
            out.append(tuple(img))
    return out
