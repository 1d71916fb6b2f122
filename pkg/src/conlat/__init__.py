"""conlat: a workbench for finite universal algebra.

Builds congruence lattices and the congruence functor, decides commutator
and centralizer questions on finite algebras, constructs and verifies
poset-indexed diagrams of powerset semilattices, checks purported
congruence-lattice liftings, and searches small catalogs for liftings.
"""

from .algebras import (
    AlgebraError,
    App,
    Const,
    FiniteAlgebra,
    HomViolation,
    Homomorphism,
    Signature,
    Var,
    check_homomorphism,
    enumerate_homomorphisms,
    enumerate_terms,
    eval_term,
    load_algebra,
    product,
    save_algebra,
    subalgebra_generated,
)
from .congruences import (
    ConCapExceeded,
    ConLattice,
    ConMap,
    Congruence,
    cg,
    con_functor,
    con_image,
    con_lattice,
    join,
    meet,
)
from .lattices import (
    FiniteLattice,
    M3Witness,
    boolean,
    chain,
    find_m3_01,
    lattice_algebra,
    lattice_property,
    m3,
    n5,
)

__version__ = "0.1.0"
