"""Congruences of finite algebras and the congruence lattice functor.

A congruence is stored as a canonical block labeling: ``label[x]`` is the
least element of the block of ``x``.  Generation works by union-find plus
a worklist of merged pairs, each pushed through every unary translation
(one operation, one argument slot varying, the rest fixed).  Compatibility
with single slots chains to full tuples, so this closure is exact.
"""

from dataclasses import dataclass
from itertools import product as iproduct
import os

from .algebras import AlgebraError, table_index


DEFAULT_CON_CAP = 4096


def con_cap_default():
    env = os.environ.get("CONLAT_CON_CAP")
    return int(env) if env else DEFAULT_CON_CAP


class ConCapExceeded(RuntimeError):
    def __init__(self, cap):
        super().__init__(f"congruence lattice exceeds the configured cap of {cap}")
        self.cap = cap


@dataclass(frozen=True)
class Congruence:
    """A partition of {0..n-1}; label[x] = least element of the block of x."""

    n: int
    label: tuple

    def __post_init__(self):
        object.__setattr__(self, "label", tuple(self.label))
        if len(self.label) != self.n:
            raise AlgebraError("label length does not match size")
        for x, l in enumerate(self.label):
            if not (0 <= l <= x and self.label[l] == l):
                raise AlgebraError("labels must point to the least block element")

    @staticmethod
    def zero(n):
        return Congruence(n, tuple(range(n)))

    @staticmethod
    def one(n):
        return Congruence(n, (0,) * n)

    @staticmethod
    def from_blocks(n, blocks):
        label = [None] * n
        for blk in blocks:
            m = min(blk)
            for x in blk:
                if label[x] is not None:
                    raise AlgebraError(f"element {x} in two blocks")
                label[x] = m
        if any(l is None for l in label):
            raise AlgebraError("blocks do not cover the universe")
        return Congruence(n, tuple(label))

    def related(self, x, y):
        return self.label[x] == self.label[y]

    def blocks(self):
        out = {}
        for x, l in enumerate(self.label):
            out.setdefault(l, []).append(x)
        return [out[k] for k in sorted(out)]

    def block_of(self, x):
        l = self.label[x]
        return [y for y in range(self.n) if self.label[y] == l]

    def block_count(self):
        return len(set(self.label))

    def pairs(self):
        """Generating pairs (x, label[x]) with x != label[x]."""
        return [(x, l) for x, l in enumerate(self.label) if x != l]

    def is_zero(self):
        return all(l == x for x, l in enumerate(self.label))

    def is_one(self):
        return all(l == 0 for l in self.label)

    def refines(self, other):
        """True iff self <= other (every self-block inside an other-block)."""
        return all(other.label[x] == other.label[self.label[x]] for x in range(self.n))

    def to_json(self):
        return self.blocks()


def _canon_labels(n, parent_find):
    # relabel union-find roots by least member
    least = {}
    for x in range(n):
        r = parent_find(x)
        if r not in least or x < least[r]:
            least[r] = x
    return tuple(least[parent_find(x)] for x in range(n))


def _unary_translations(alg):
    """All maps x -> g(..., x, ...) with one slot free and the rest fixed."""
    n = alg.size
    out = []
    for opname, arity in alg.signature.ops:
        if arity == 0:
            continue
        tab = alg.table(opname)
        for slot in range(arity):
            for rest in iproduct(range(n), repeat=arity - 1):
                tr = []
                for x in range(n):
                    args = rest[:slot] + (x,) + rest[slot:]
                    tr.append(tab[table_index(n, args)])
                out.append(tuple(tr))
    return out


def cg(alg, pairs):
    """Least congruence of alg containing the given pairs."""
    n = alg.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    translations = None
    queue = [(a, b) for a, b in pairs]
    for a, b in queue:
        if not (0 <= a < n and 0 <= b < n):
            raise AlgebraError(f"pair ({a},{b}) outside universe")
    while queue:
        a, b = queue.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        parent[max(ra, rb)] = min(ra, rb)
        if translations is None:
            translations = _unary_translations(alg)
        for tr in translations:
            ta, tb = tr[a], tr[b]
            if find(ta) != find(tb):
                queue.append((ta, tb))
    return Congruence(n, _canon_labels(n, find))


def congruence_violation(alg, theta):
    """First compatibility failure of a partition, or None.

    Checks unary translations only; single-slot compatibility chains to
    full-tuple compatibility.
    """
    n = alg.size
    if theta.n != n:
        raise AlgebraError("partition size does not match algebra")
    for opname, arity in alg.signature.ops:
        if arity == 0:
            continue
        tab = alg.table(opname)
        for slot in range(arity):
            for rest in iproduct(range(n), repeat=arity - 1):
                for a in range(n):
                    for b in range(a + 1, n):
                        if theta.label[a] != theta.label[b]:
                            continue
                        ia = rest[:slot] + (a,) + rest[slot:]
                        ib = rest[:slot] + (b,) + rest[slot:]
                        va = tab[table_index(n, ia)]
                        vb = tab[table_index(n, ib)]
                        if theta.label[va] != theta.label[vb]:
                            return (opname, slot, (a, b), rest, (va, vb))
    return None


def meet(t1, t2):
    """Partition intersection (always a congruence of any common algebra)."""
    if t1.n != t2.n:
        raise AlgebraError("congruences of different algebras")
    n = t1.n
    least = {}
    label = [0] * n
    for x in range(n):
        key = (t1.label[x], t2.label[x])
        if key not in least:
            least[key] = x
        label[x] = least[key]
    return Congruence(n, tuple(label))


def join(alg, t1, t2):
    """Join in Con(alg), computed by regenerating from both pair sets."""
    if t1.n != alg.size or t2.n != alg.size:
        raise AlgebraError("congruences of different algebras")
    return cg(alg, t1.pairs() + t2.pairs())


@dataclass(frozen=True)
class ConLattice:
    """All congruences of an algebra with the refinement order.

    Elements are sorted by (block count descending, labels), so index 0 is
    the identity congruence and the last index the coarse one.
    """

    algebra: object
    elements: tuple
    leq: tuple  # leq[i][j] iff elements[i] <= elements[j]

    def __len__(self):
        return len(self.elements)

    def index_of(self, theta):
        try:
            return self.elements.index(theta)
        except ValueError:
            raise AlgebraError("congruence not in this lattice") from None

    @property
    def zero_index(self):
        return 0

    @property
    def one_index(self):
        return len(self.elements) - 1

    def join_index(self, i, j):
        ubs = [k for k in range(len(self.elements)) if self.leq[i][k] and self.leq[j][k]]
        for k in ubs:
            if all(self.leq[k][m] for m in ubs):
                return k
        raise AlgebraError("join missing (not a lattice?)")

    def meet_index(self, i, j):
        lbs = [k for k in range(len(self.elements)) if self.leq[k][i] and self.leq[k][j]]
        for k in lbs:
            if all(self.leq[m][k] for m in lbs):
                return k
        raise AlgebraError("meet missing (not a lattice?)")

    def covers(self):
        n = len(self.elements)
        out = []
        for i in range(n):
            for j in range(n):
                if i == j or not self.leq[i][j]:
                    continue
                if not any(
                    k != i and k != j and self.leq[i][k] and self.leq[k][j] for k in range(n)
                ):
                    out.append((i, j))
        return out

    def as_lattice(self):
        from .lattices import FiniteLattice

        return FiniteLattice.from_leq(self.leq)

    def to_json(self):
        return {
            "algebra_size": self.algebra.size,
            "congruences": [list(map(list, th.blocks())) for th in self.elements],
            "covers": [list(c) for c in self.covers()],
            "zero": self.zero_index,
            "one": self.one_index,
        }

    def to_dot(self):
        lines = ["digraph con {", "  rankdir=BT;"]
        for i, th in enumerate(self.elements):
            lbl = "|".join(" ".join(str(x) for x in blk) for blk in th.blocks())
            lines.append(f'  n{i} [label="{lbl}"];')
        for i, j in self.covers():
            lines.append(f"  n{i} -> n{j};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def con_lattice(alg, cap=None):
    """All congruences: principal ones closed under join, canonically sorted."""
    if cap is None:
        cap = con_cap_default()
    n = alg.size
    found = {Congruence.zero(n)}
    principals = []
    for a in range(n):
        for b in range(a + 1, n):
            th = cg(alg, [(a, b)])
            if th not in found:
                found.add(th)
                principals.append(th)
    worklist = list(found)
    while worklist:
        th = worklist.pop()
        for other in list(found):
            j = join(alg, th, other)
            if j not in found:
                if len(found) >= cap:
                    raise ConCapExceeded(cap)
                found.add(j)
                worklist.append(j)
    elements = sorted(found, key=lambda t: (-t.block_count(), t.label))
    leq = tuple(
        tuple(a.refines(b) for b in elements) for a in elements
    )
    return ConLattice(alg, tuple(elements), leq)


@dataclass(frozen=True)
class ConMap:
    """Image table of the congruence functor on one homomorphism."""

    source: ConLattice
    target: ConLattice
    table: tuple  # source element index -> target element index

    def apply(self, theta):
        return self.target.elements[self.table[self.source.index_of(theta)]]


def con_functor(f, source=None, target=None):
    """The congruence lattice map of f: alpha -> cg(cod, f-image pairs of alpha).

    Join and zero preservation are re-verified before returning; a failure
    is an internal bug, not an input error.
    """
    src = source if source is not None else con_lattice(f.dom)
    tgt = target if target is not None else con_lattice(f.cod)
    table = []
    for th in src.elements:
        img = cg(f.cod, [(f.mapping[x], f.mapping[y]) for x, y in th.pairs()])
        table.append(tgt.index_of(img))
    cm = ConMap(src, tgt, tuple(table))
    assert table[src.zero_index] == tgt.zero_index, "functor image must preserve 0"
    for i in range(len(src.elements)):
        for j in range(i, len(src.elements)):
            k = src.join_index(i, j)
            assert tgt.join_index(table[i], table[j]) == table[k], (
                "functor image must preserve joins"
            )
    return cm


def con_image(f, theta):
    """cg of the f-image pairs of theta (one value of the congruence functor)."""
    return cg(f.cod, [(f.mapping[x], f.mapping[y]) for x, y in theta.pairs()])
