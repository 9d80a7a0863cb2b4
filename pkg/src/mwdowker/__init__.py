"""Multiway Dowker complexes of finite relations, with F2 homology checks."""

from .chains import BettiVector, ChainComplex, ChainMap, betti, is_quasi_iso, mapping_cone, relative_betti
from .persistence import (
    FilteredComplex,
    PersistenceDiagram,
    diagrams_equal,
    filtered_cuboid,
    filtered_multiway_dowker,
    persistence_diagram,
)
from .prodcomplex import (
    ProdComplex,
    cellular_chain_complex,
    dowker_product,
    iterated_quotient,
    quotient,
    quotient_chain_map,
)
from .relation import FilteredRelation, IndexSet, Relation, load_relation, parse_relation
from .simplicial import (
    SimplicialComplex,
    SimplicialMap,
    classic_dowker,
    cuboid,
    multiway_dowker,
    simplexify,
    simplicial_chain_complex,
    simplicial_quotient_map,
)

__version__ = "0.1.0"
