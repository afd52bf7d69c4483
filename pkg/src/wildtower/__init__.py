"""wildtower: neighbourhood towers for totally disconnected compacta in R^3.

Exact integer geometry for linked-torus and cell-tower constructions, bit-packed
GF(2) homology, and the rank analysis that certifies or obstructs the existence
of low-rank neighbourhood bases.
"""

from wildtower.analysis import (
    REPORT_SCHEMA,
    annotate_with_homology,
    check_nullity,
    check_semicontinuity,
    check_subadditivity,
    exact_value_certificate,
    full_report,
    truncations,
    upper_bound_r,
)
from wildtower.constructions import (
    ChainShrink,
    NecklaceSpec,
    PolyCurve,
    TorusSpec,
    antoine_children,
    build_cell_tower,
    build_necklace_tower,
    build_solid_torus,
    core_polygon,
    default_shrink,
    integer_frame,
    linking_number,
    plane_split,
    strictly_contains,
    validate_chain_stage,
)
from wildtower.gf2 import BitMatrix
from wildtower.simplicial import (
    MESH_SCHEMA,
    BettiVector,
    SimplicialComplex3,
    pairwise_disjoint,
)
from wildtower.tower import (
    CERTIFICATE_R0,
    DESCRIPTOR_SCHEMA,
    INCONCLUSIVE,
    OBSTRUCTION,
    BranchAddress,
    Component,
    SubstitutionRule,
    Tower,
    branch_ranks,
    claim1_check,
    exceptional_report,
    exceptional_set,
    leaf_addresses,
    rectifiability_verdict,
    s_value,
    self_similarity_analysis,
    to_descriptor_dict,
    tower_from_descriptor,
    validate_tower,
)
from wildtower.units import default_scale

__all__ = [
    "BitMatrix",
    "BettiVector",
    "SimplicialComplex3",
    "pairwise_disjoint",
    "MESH_SCHEMA",
    "TorusSpec",
    "ChainShrink",
    "NecklaceSpec",
    "PolyCurve",
    "build_solid_torus",
    "build_necklace_tower",
    "build_cell_tower",
    "antoine_children",
    "validate_chain_stage",
    "core_polygon",
    "linking_number",
    "integer_frame",
    "default_shrink",
    "strictly_contains",
    "plane_split",
    "Component",
    "Tower",
    "BranchAddress",
    "SubstitutionRule",
    "branch_ranks",
    "s_value",
    "leaf_addresses",
    "exceptional_set",
    "exceptional_report",
    "claim1_check",
    "self_similarity_analysis",
    "rectifiability_verdict",
    "validate_tower",
    "to_descriptor_dict",
    "tower_from_descriptor",
    "CERTIFICATE_R0",
    "OBSTRUCTION",
    "INCONCLUSIVE",
    "DESCRIPTOR_SCHEMA",
    "annotate_with_homology",
    "upper_bound_r",
    "exact_value_certificate",
    "truncations",
    "check_semicontinuity",
    "check_subadditivity",
    "check_nullity",
    "full_report",
    "REPORT_SCHEMA",
    "default_scale",
]

__version__ = "0.1.0"
