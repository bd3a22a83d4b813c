"""Exact symbolic computation with chord and Jacobi diagrams."""
from .diagram import Diagram, LinComb, build, canonicalize, degree, disjoint_union, one, reverse_component, theta
from .maps import chi, chi_inverse, comb, remove_circles, rho, sigma, to_circle, wheel
from .relations import enumerate_diagrams, equal, generate_relations, normal_form, quotient_basis
from .skeleton import EMPTY, Circle, Interval, MarkedSkeleton, Skeleton, TreeClosed, TreeSpec, chain_graph, chain_tree, intervals
from .textio import parse, serialize
from .tqft import TQFTVector, include, pair
from .weights import WeightData, check_data, eval_circle, eval_closed, eval_marked

__version__ = "0.1.0"
