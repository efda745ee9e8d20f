"""splitnest: split systems, closures, 1-nested networks and Buneman graphs."""

from .core import (
    CircularOrdering,
    Split,
    SplitSystem,
    TaxaSet,
    all_splits_of_ordering,
    all_trivial_splits,
    compatible,
    displays,
    is_compatible_system,
    is_interval,
    quotient,
    remove_trivial,
    side_of,
    sigma_d,
)
from .closure import i_closure, i_intersection, int_closure, intersections, is_i_closed
from .errors import (
    NetworkInvariantError,
    NotCircularError,
    ResourceCapError,
    SplitnestError,
    ValidationError,
)
from .incompat import IncompatGraph, components, incompatibility_graph, is_maximal_generator
from .network import (
    Network,
    NetworkClass,
    classify,
    equivalent,
    m_splits,
    make_network,
    maximal_partial_resolution,
    partially_resolve,
    split_multiplicity,
    splits_of,
)
from .synthesis import (
    buneman_tree,
    circular_ordering_of,
    is_circular,
    minimal_1nested,
    simple_level1_from_maximal,
    splits_equivalence_check,
)
from .buneman import (
    BunemanGraph,
    Embedding,
    Marguerite,
    buneman_graph,
    degree_support,
    embed_network,
    extract_network,
    gate,
    gates_of,
    kuratowski,
    marguerite,
    marguerites,
)

__version__ = "0.1.0"
