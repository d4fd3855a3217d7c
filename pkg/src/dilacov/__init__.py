"""Classify and build G-covers of graphs for finite abelian G."""

__version__ = "0.1.0"

from .abelian import (
    Group,
    Subgroup,
    canonical_coset_rep,
    enumerate_subgroups,
    make_group,
    parse_group,
    parse_subgroup,
    quotient_presentation,
    subgroup_intersection,
    subgroup_sum,
)
from .snf import smith_normal_form
from .graph import (
    Graph,
    build_graph,
    euler_and_genus,
    named_graph,
    spanning_forest,
    stabilize,
    validate_graph,
    weighted_edge_contraction,
)
from .dilation import (
    DilationDatum,
    admissible_genus,
    datum_from_stratification,
    datum_to_stratification,
    dual_stratification,
    enumerate_admissible_dilations,
    index_function,
    is_admissible,
    validate_dilation,
)
from .cohomology import (
    build_cochain_complex,
    cohomology_groups,
    datum_from_dilation,
    enumerate_h1_classes,
    relative_and_reduced,
    verify_les,
)
from .covers import (
    Cover,
    build_cover,
    class_of_cover,
    connectivity,
    contract_cover,
    covers_isomorphic,
    enumerate_covers,
    lift_metric,
    stabilize_cover,
    verify_unramified,
)
