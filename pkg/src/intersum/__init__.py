"""Exact intermediate generating functions of rational cones and polytopes."""
from .conealg import Cone, SignedConeSum, barvinok_decompose, brion_vergne_decompose, dual_cone, triangulate
from .exactlin import RationalSubspace, saturate
from .genfun import S_from_M, components, integral_germ, intermediate_germ
from .germ import HomogeneousComponent, MeromorphicGerm, Series, bernoulli_poly
from .patchwork import close_under_sum, patched_germ, patching_function
from .polysum import Polytope, oracle_intermediate_sum, weighted_sum

__version__ = "0.1.0"
