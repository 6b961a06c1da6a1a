"""loopperm: exact alpha-permanents of block matrices and Markov loop soups.

The library has two halves that verify each other.  The combinatorial half
computes alpha-permanents of block matrices exactly, as polynomials, by
permutation enumeration and by a closed form available on star-forest
sparsity patterns.  The probabilistic half simulates Poisson ensembles of
Markov loops, whose occupation fields follow those permanental laws, both by
direct soup sampling and by an exact negative-multinomial cascade on trees.
"""

from .alphapoly import AlphaPolynomial
from .cascade import cascade_sample_general, cascade_sample_tree, collect_cascade_stats
from .chains import (
    SubMarkovChain,
    det_I_minus_P,
    det_identity_check,
    green_function,
    h_transform,
    star_expand,
    validate_chain,
)
from .compare import LawReport, empirical_compare
from .distributions import nb_sample, nm_sample
from .errors import (
    ConsistencyError,
    DomainError,
    LoopPermError,
    SizeCapError,
    StructureError,
)
from .graphs import InducedGraph, graph_of_matrix, tq_enumerate
from .laws import edge_law_general, n_law_starforest, theta_law
from .loops import UnrootedLoop, loop_measure, total_mass
from .matrices import SquareMatrix, block_expand
from .permanent import (
    closed_form_coefficient,
    crossing_of_permutation,
    expansion_by_crossing,
    per_alpha_block,
    per_alpha_brute,
    per_alpha_starforest,
)
from .series import MultiSeries, macmahon_check, series_det_IminusZA, series_neg_alpha_power
from .soup import LoopSoupSample, OccupationFields, occupation_fields, sample_soup

__version__ = "0.1.0"

__all__ = [
    "AlphaPolynomial",
    "ConsistencyError",
    "DomainError",
    "InducedGraph",
    "LawReport",
    "LoopPermError",
    "LoopSoupSample",
    "MultiSeries",
    "OccupationFields",
    "SizeCapError",
    "SquareMatrix",
    "StructureError",
    "SubMarkovChain",
    "UnrootedLoop",
    "block_expand",
    "cascade_sample_general",
    "cascade_sample_tree",
    "closed_form_coefficient",
    "collect_cascade_stats",
    "crossing_of_permutation",
    "det_I_minus_P",
    "det_identity_check",
    "edge_law_general",
    "empirical_compare",
    "expansion_by_crossing",
    "graph_of_matrix",
    "green_function",
    "h_transform",
    "loop_measure",
    "macmahon_check",
    "n_law_starforest",
    "nb_sample",
    "nm_sample",
    "occupation_fields",
    "per_alpha_block",
    "per_alpha_brute",
    "per_alpha_starforest",
    "sample_soup",
    "series_det_IminusZA",
    "series_neg_alpha_power",
    "star_expand",
    "theta_law",
    "total_mass",
    "tq_enumerate",
    "validate_chain",
]
