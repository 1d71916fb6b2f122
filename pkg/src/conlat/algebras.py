"""Finite algebras: operation tables, terms, homomorphisms, subalgebras, products.

Conventions used throughout the package:

* The universe of an algebra of size ``n`` is always ``{0, ..., n-1}``.
  Any external element names belong in file metadata, never in the tables.
* Operation tables are flat and row major.  The table entry for arguments
  ``(a1, ..., ak)`` sits at index ``a1*n**(k-1) + a2*n**(k-2) + ... + ak``,
  i.e. the first argument is the most significant mixed-radix digit.
* All values are immutable after construction and safe to share.
"""

from dataclasses import dataclass, field
from itertools import combinations, product as iproduct
import json


class AlgebraError(ValueError):
    """Malformed algebra, signature, term or map."""


@dataclass(frozen=True)
class Signature:
    """An operation list: tuple of (name, arity) with distinct names."""

    ops: tuple

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple((str(n), int(a)) for n, a in self.ops))
        names = [n for n, _ in self.ops]
        if len(set(names)) != len(names):
            raise AlgebraError(f"duplicate operation names in {names}")
        for n, a in self.ops:
            if a < 0:
                raise AlgebraError(f"negative arity for {n!r}")

    def arity(self, name):
        for n, a in self.ops:
            if n == name:
                return a
        raise AlgebraError(f"unknown operation {name!r}")

    def names(self):
        return tuple(n for n, _ in self.ops)

    def constants(self):
        return tuple(n for n, a in self.ops if a == 0)


def table_index(size, args):
    """Row-major index of an argument tuple (first argument most significant)."""
    i = 0
    for a in args:
        i = i * size + a
    return i


@dataclass(frozen=True)
class FiniteAlgebra:
    """A finite universe {0..size-1} with one flat table per operation."""

    size: int
    signature: Signature
    tables: tuple  # one flat tuple per operation, in signature order
    name: str = ""

    def __post_init__(self):
        if self.size < 1:
            raise AlgebraError("algebras must have at least one element")
        object.__setattr__(self, "tables", tuple(tuple(t) for t in self.tables))
        if len(self.tables) != len(self.signature.ops):
            raise AlgebraError("table count does not match signature")
        for (opname, arity), tab in zip(self.signature.ops, self.tables):
            want = self.size ** arity
            if len(tab) != want:
                raise AlgebraError(
                    f"operation {opname!r}: table length {len(tab)}, expected {want}"
                )
            for i, v in enumerate(tab):
                if not (isinstance(v, int) and 0 <= v < self.size):
                    raise AlgebraError(
                        f"operation {opname!r}: entry {v!r} at index {i} out of range"
                    )

    def table(self, name):
        for (n, _), tab in zip(self.signature.ops, self.tables):
            if n == name:
                return tab
        raise AlgebraError(f"unknown operation {name!r}")

    def apply(self, name, *args):
        return self.table(name)[table_index(self.size, args)]

    def elements(self):
        return range(self.size)

    def to_json(self):
        return {
            "size": self.size,
            "ops": [
                {"name": n, "arity": a, "table": list(tab)}
                for (n, a), tab in zip(self.signature.ops, self.tables)
            ],
        }

    @staticmethod
    def from_json(obj, name=""):
        if not isinstance(obj, dict) or "size" not in obj or "ops" not in obj:
            raise AlgebraError("algebra JSON must be an object with 'size' and 'ops'")
        sig = Signature(tuple((op["name"], op["arity"]) for op in obj["ops"]))
        return FiniteAlgebra(
            size=obj["size"],
            signature=sig,
            tables=tuple(tuple(op["table"]) for op in obj["ops"]),
            name=name or obj.get("name", ""),
        )


def load_algebra(path):
    with open(path) as fh:
        obj = json.load(fh)
    return FiniteAlgebra.from_json(obj, name=str(path))


def save_algebra(alg, path):
    with open(path, "w") as fh:
        json.dump(alg.to_json(), fh, sort_keys=True, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Terms


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class App:
    op: str
    args: tuple = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))


def term_depth(t):
    if isinstance(t, (Var, Const)):
        return 0
    return 1 + max((term_depth(a) for a in t.args), default=0)


def term_str(t):
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Const):
        return f"c{t.value}"
    return f"{t.op}({', '.join(term_str(a) for a in t.args)})"


def eval_term(alg, t, env):
    """Value of term t in alg under the variable assignment env."""
    if isinstance(t, Var):
        if t.index >= len(env):
            raise AlgebraError(f"variable x{t.index} outside environment of size {len(env)}")
        return env[t.index]
    if isinstance(t, Const):
        return t.value
    return alg.apply(t.op, *(eval_term(alg, a, env) for a in t.args))


def term_table(alg, t, k):
    """Flat table (length size**k) of the k-ary operation induced by t on alg."""
    n = alg.size
    if isinstance(t, Var):
        if t.index >= k:
            raise AlgebraError(f"variable x{t.index} in a {k}-ary term")
        block = n ** (k - 1 - t.index)
        return tuple((i // block) % n for i in range(n ** k))
    if isinstance(t, Const):
        return (t.value,) * (n ** k)
    subs = [term_table(alg, a, k) for a in t.args]
    tab = alg.table(t.op)
    if not subs:
        return (tab[0],) * (n ** k)
    out = []
    for i in range(n ** k):
        idx = 0
        for s in subs:
            idx = idx * n + s[i]
        out.append(tab[idx])
    return tuple(out)


def enumerate_terms(sig, k, max_depth, dedup_on=None, with_constants=None):
    """Yield terms in variables x0..x(k-1), by depth then construction order.

    ``dedup_on``: an algebra; if given, only the first term per induced
    k-ary table on that algebra is emitted, and deeper terms are built from
    the kept representatives (sound for any table-determined search).
    ``with_constants``: an algebra whose elements are allowed as constant
    leaves (polynomial enumeration).
    """
    layer = [Var(i) for i in range(k)]
    if with_constants is not None:
        layer += [Const(c) for c in range(with_constants.size)]
    seen = set()

    def emit(ts):
        for t in ts:
            if dedup_on is not None:
                key = term_table(dedup_on, t, k)
                if key in seen:
                    continue
                seen.add(key)
            yield t

    kept = []
    for t in emit(layer):
        kept.append(t)
        yield t
    prev = kept  # representatives of depth < d
    for _depth in range(1, max_depth + 1):
        new = []
        for opname, arity in sig.ops:
            if arity == 0:
                cands = [App(opname)] if _depth == 1 else []
            else:
                cands = (
                    App(opname, args)
                    for args in iproduct(prev, repeat=arity)
                    if max(term_depth(a) for a in args) == _depth - 1
                )
            for t in emit(cands):
                new.append(t)
                yield t
        prev = prev + new
        if dedup_on is not None and not new:
            break  # table closure reached


# ---------------------------------------------------------------------------
# Homomorphisms


@dataclass(frozen=True)
class HomViolation:
    """First operation/argument tuple a candidate map fails to preserve."""

    op: str
    args: tuple
    lhs: int  # f(g(args))
    rhs: int  # g(f(args))

    def describe(self):
        return (
            f"not a homomorphism: at {self.op}{self.args}, "
            f"f(g(args))={self.lhs} but g(f(args))={self.rhs}"
        )


def hom_violation(dom, cod, mapping):
    """Return the first preservation failure of mapping, or None."""
    if dom.signature != cod.signature:
        raise AlgebraError("signature mismatch between domain and codomain")
    if len(mapping) != dom.size:
        raise AlgebraError("map length does not match domain size")
    for v in mapping:
        if not 0 <= v < cod.size:
            raise AlgebraError(f"map value {v} outside codomain")
    for opname, arity in dom.signature.ops:
        dt, ct = dom.table(opname), cod.table(opname)
        for args in iproduct(range(dom.size), repeat=arity):
            lhs = mapping[dt[table_index(dom.size, args)]]
            rhs = ct[table_index(cod.size, tuple(mapping[a] for a in args))]
            if lhs != rhs:
                return HomViolation(opname, args, lhs, rhs)
    return None


@dataclass(frozen=True)
class Homomorphism:
    dom: FiniteAlgebra
    cod: FiniteAlgebra
    mapping: tuple

    def __post_init__(self):
        object.__setattr__(self, "mapping", tuple(self.mapping))
        bad = hom_violation(self.dom, self.cod, self.mapping)
        if bad is not None:
            raise AlgebraError(bad.describe())

    @property
    def injective(self):
        return len(set(self.mapping)) == self.dom.size

    def __call__(self, x):
        return self.mapping[x]

    def then(self, other):
        """Composite self;other (apply self first)."""
        if (other.dom.size, other.dom.tables) != (self.cod.size, self.cod.tables):
            raise AlgebraError("composition mismatch")
        return Homomorphism(self.dom, other.cod, tuple(other.mapping[v] for v in self.mapping))

    @staticmethod
    def identity(alg):
        return Homomorphism(alg, alg, tuple(range(alg.size)))


def check_homomorphism(dom, cod, mapping):
    """Homomorphism if mapping preserves every operation, else the HomViolation."""
    bad = hom_violation(dom, cod, mapping)
    if bad is not None:
        return bad
    return Homomorphism(dom, cod, tuple(mapping))


# ---------------------------------------------------------------------------
# Subalgebras and products


def subalgebra_generated(alg, seed):
    """Least subuniverse containing seed, as a sorted tuple (worklist closure)."""
    members = set(seed)
    if not members and not alg.signature.constants():
        raise AlgebraError("empty generating set and no constants: empty subuniverse")
    for c in alg.signature.constants():
        members.add(alg.table(c)[0])
    changed = True
    while changed:
        changed = False
        cur = sorted(members)
        for opname, arity in alg.signature.ops:
            if arity == 0:
                continue
            tab = alg.table(opname)
            for args in iproduct(cur, repeat=arity):
                v = tab[table_index(alg.size, args)]
                if v not in members:
                    members.add(v)
                    changed = True
    return tuple(sorted(members))


def all_subuniverses(alg, max_size=10):
    """All subuniverses (nonempty closed subsets), via closures of generator sets."""
    if alg.size > max_size:
        raise AlgebraError(f"subuniverse enumeration guarded at size {max_size}")
    found = set()
    universe = range(alg.size)
    if alg.signature.constants():
        found.add(subalgebra_generated(alg, ()))
    for r in range(1, alg.size + 1):
        for gens in combinations(universe, r):
            found.add(subalgebra_generated(alg, gens))
    return sorted(found)


def subalgebra_on(alg, subuniverse):
    """Restrict alg to a closed subset; returns (algebra, to_sub, from_sub).

    from_sub[i] is the parent element of the i-th subalgebra element;
    to_sub maps parent elements back.  Elements keep their parent order.
    """
    sub = tuple(sorted(subuniverse))
    to_sub = {v: i for i, v in enumerate(sub)}
    tables = []
    for opname, arity in alg.signature.ops:
        tab = alg.table(opname)
        out = []
        for args in iproduct(sub, repeat=arity):
            v = tab[table_index(alg.size, args)]
            if v not in to_sub:
                raise AlgebraError(f"subset not closed under {opname!r} at {args}")
            out.append(to_sub[v])
        tables.append(tuple(out))
    return FiniteAlgebra(len(sub), alg.signature, tuple(tables)), to_sub, sub


def product(a, b):
    """Direct product; the pair (x, y) is encoded as x*b.size + y."""
    if a.signature != b.signature:
        raise AlgebraError("signature mismatch in product")
    n = a.size * b.size
    tables = []
    for opname, arity in a.signature.ops:
        ta, tb = a.table(opname), b.table(opname)
        out = []
        for args in iproduct(range(n), repeat=arity):
            xa = tuple(x // b.size for x in args)
            xb = tuple(x % b.size for x in args)
            va = ta[table_index(a.size, xa)]
            vb = tb[table_index(b.size, xb)]
            out.append(va * b.size + vb)
        tables.append(tuple(out))
    return FiniteAlgebra(n, a.signature, tuple(tables))


# ---------------------------------------------------------------------------
# Homomorphism enumeration


def generating_set(alg):
    """A small (greedy) generating set of the algebra."""
    base = set()
    if alg.signature.constants():
        base = set(subalgebra_generated(alg, ()))
    gens = []
    closed = set(base)
    for x in alg.elements():
        if x not in closed:
            gens.append(x)
            closed = set(subalgebra_generated(alg, base | set(gens)))
    return tuple(gens)


class HomStream:
    """Iterator over all homomorphisms dom -> cod, with a truncation flag.

    Backtracks over images of a generating set; each assignment is extended
    by table propagation and finally re-validated.  ``budget`` caps the
    number of generator assignments examined; when it runs out, iteration
    stops and ``truncated`` is set.
    """

    def __init__(self, dom, cod, budget=None):
        if dom.signature != cod.signature:
            raise AlgebraError("signature mismatch")
        self.dom, self.cod = dom, cod
        self.budget = budget
        self.truncated = False
        self.examined = 0
        self._it = self._run()

    def __iter__(self):
        return self

    def __next__(self):
        return next(self._it)

    def _extend(self, partial):
        # closure: image of g(args) is forced to g(images); conflict -> None
        mapping = dict(partial)
        changed = True
        while changed:
            changed = False
            known = sorted(mapping)
            for opname, arity in self.dom.signature.ops:
                dt, ct = self.dom.table(opname), self.cod.table(opname)
                for args in iproduct(known, repeat=arity):
                    src = dt[table_index(self.dom.size, args)]
                    img = ct[table_index(self.cod.size, tuple(mapping[a] for a in args))]
                    if src in mapping:
                        if mapping[src] != img:
                            return None
                    else:
                        mapping[src] = img
                        changed = True
        return mapping

    def _run(self):
        dom, cod = self.dom, self.cod
        gens = generating_set(dom)
        base = {}
        for c in dom.signature.constants():
            base[dom.table(c)[0]] = cod.table(c)[0]
        base = self._extend(base)
        if base is None:
            return
        for images in iproduct(range(cod.size), repeat=len(gens)):
            if self.budget is not None and self.examined >= self.budget:
                self.truncated = True
                return
            self.examined += 1
            partial = dict(base)
            ok = True
            for g, v in zip(gens, images):
                if g in partial and partial[g] != v:
                    ok = False
                    break
                partial[g] = v
            if not ok:
                continue
            full = self._extend(partial)
            if full is None or len(full) != dom.size:
                continue
            mapping = tuple(full[x] for x in range(dom.size))
            if hom_violation(dom, cod, mapping) is None:
                yield Homomorphism(dom, cod, mapping)


def enumerate_homomorphisms(dom, cod, budget=None):
    return HomStream(dom, cod, budget)
