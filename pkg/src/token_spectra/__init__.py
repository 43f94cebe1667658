"""k-token graphs and numerical checks of their Laplacian spectra."""

from .corpus import enumerate_labeled_graphs, enumerate_labeled_trees
from .graph6 import emit_graph6, parse_graph6
from .graphs import (
    FamilySpec,
    Graph,
    TreeAttachment,
    attach_trees,
    build_family,
    collapse_edge,
    complement,
    delete_vertex,
)
from .multiset import EigMultiset
from .spectral import (
    algebraic_connectivity,
    eig_sym,
    extend_embedding,
    laplacian,
    lift_eigenvector,
    project_eigenvector,
    rayleigh_quotient,
    spectral_radius,
)
from .theory import (
    check_collapse_monotonicity,
    check_conjecture,
    check_containment,
    check_degree_bounds,
    check_pairing,
    find_graph_by_spectra,
    johnson_spectrum,
    lambda_partition,
    phi_threshold,
    theorem7_applicable,
)
from .tokens import (
    binomial_matrix,
    restrict_by_element,
    subset_index,
    subset_rank,
    subset_unrank,
    token_graph,
)

__version__ = "0.1.0"
