"""Quasi-polar point sets in PG(m, q): spectra, switching surgeries, censuses."""

from .gf import SUPPORTED_ORDERS, FieldTable, build_field
from .pg import (
    Flat,
    PointSet,
    ProjSpace,
    build_space,
    flat_from_mask,
    flat_from_points,
    hyperplane_flat,
    hyperplanes_containing,
    line_through,
    point_set_from_indices,
    space_for,
    subgeometry,
)
from .forms import (
    Form,
    PolarKind,
    canonical_form,
    classical_cardinality,
    cone,
    cone_vertices,
    nucleus_point,
    perp,
    point_class,
    point_set,
)
from .spectra import (
    Classification,
    ConditionReport,
    RootsReport,
    Spectrum,
    SpectrumProfile,
    cardinality_roots,
    classify,
    find_line_nucleus,
    nucleus_conditions,
    profile,
    singular_hyperplanes,
    spectrum,
)
from .surgery import (
    SurgeryRecord,
    affine_switch,
    cone_swap,
    internal_switch_q3,
    nonsingular_switch_q2,
    oval_nucleus_swap,
    pivot,
    repeated_pivot,
    shifted_nucleus_pivot,
    switch,
)
from .census import (
    CensusResult,
    classical_distribution,
    enumerate_quadrics,
    nonsingular_switch_census,
    nucleus_pivot_census,
    q4_shape_classify,
    singular_switch_census,
    two_secant_count,
)

__version__ = "0.1.0"

__all__ = [
    "SUPPORTED_ORDERS",
    "FieldTable",
    "build_field",
    "Flat",
    "PointSet",
    "ProjSpace",
    "build_space",
    "flat_from_mask",
    "flat_from_points",
    "hyperplane_flat",
    "hyperplanes_containing",
    "line_through",
    "point_set_from_indices",
    "space_for",
    "subgeometry",
    "Form",
    "PolarKind",
    "canonical_form",
    "classical_cardinality",
    "cone",
    "cone_vertices",
    "nucleus_point",
    "perp",
    "point_class",
    "point_set",
    "Classification",
    "ConditionReport",
    "RootsReport",
    "Spectrum",
    "SpectrumProfile",
    "cardinality_roots",
    "classify",
    "find_line_nucleus",
    "nucleus_conditions",
    "profile",
    "singular_hyperplanes",
    "spectrum",
    "SurgeryRecord",
    "affine_switch",
    "cone_swap",
    "internal_switch_q3",
    "nonsingular_switch_q2",
    "oval_nucleus_swap",
    "pivot",
    "repeated_pivot",
    "shifted_nucleus_pivot",
    "switch",
    "CensusResult",
    "classical_distribution",
    "enumerate_quadrics",
    "nonsingular_switch_census",
    "nucleus_pivot_census",
    "q4_shape_classify",
    "singular_switch_census",
    "two_secant_count",
    "__version__",
]
