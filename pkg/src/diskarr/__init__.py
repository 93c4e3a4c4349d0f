"""Periodic packings and coverings of the plane by congruent disks.

Construction, certification of packing and covering properties, search for
saturation and reduction violations, cluster density bounds, and stochastic
search over flat tori.
"""

__version__ = "0.1.0"

from .geom import Disk, Lattice, Point, lattice_reduce, periodic_delta, shortest_vector, smallest_enclosing_circle
from .union import AreaBracket, Cluster, dilated_union_area, erosion_area, erosion_contains, union_area_exact
from .periodic import PeriodicArrangement, covering_check, deepest_hole_bracket, is_packing, relative_density
from .checker import CheckConfig, ReplacementWitness, Verdict, check_reduction, check_saturation, verify_witness
from .constructions import cluster, hex_covering, hex_packing, sect5_covering, split_packing
from .bounds import asymptotic_saturation_bound, cluster_covering_bound, cluster_packing_bound, known_constants
from .engine import SearchConfig, greedy_saturate, optimize, replace_k_for_k_plus_1

__all__ = [
    "AreaBracket", "CheckConfig", "Cluster", "Disk", "Lattice", "PeriodicArrangement", "Point",
    "ReplacementWitness", "SearchConfig", "Verdict", "asymptotic_saturation_bound", "check_reduction",
    "check_saturation", "cluster", "cluster_covering_bound", "cluster_packing_bound", "covering_check",
    "deepest_hole_bracket", "dilated_union_area", "erosion_area", "erosion_contains", "greedy_saturate",
    "hex_covering", "hex_packing", "is_packing", "known_constants", "lattice_reduce", "optimize",
    "periodic_delta", "relative_density", "replace_k_for_k_plus_1", "sect5_covering", "shortest_vector",
    "smallest_enclosing_circle", "split_packing", "union_area_exact", "verify_witness",
]
