"""Formal-context data depth: scaling, generalised Tukey depth and property checks."""
from .bitset import AttributeSet, ObjectSet
from .context import (
    ExtentFamily, FormalContext, ObjectClassification, all_extents, classify_objects, closure, extent_masks,
    extent_of, intent,
)
from .depth import (
    DEPTH_FUNCTIONS, HIER_FREE, TUKEY, DepthFunctionHandle, DepthMap, contour_sets, empirical_tukey, fixed_depth,
    get_depth_function, hierarchical_free_depth, rank, tukey_depth, tukey_depths, tukey_map, tukey_oracle,
)
from .errors import (
    DimensionError, FcaDepthError, IngestionError, ScaleTypeError, SizeLimitError, UnknownDepthFunction,
    ValidationError,
)
from .formats import dumps_cxt, dumps_json, loads_cxt, loads_json, read_context, write_context
from .measure import DiscreteMeasure, Sample, make_measure, measure_family_diameter, measure_of, total_variation
from .properties import (
    PropertyReport, QuasiKer, check_c_p8_membership, check_implication_chain, check_order_basics, check_p1,
    check_p2, check_p9, check_p10, check_quasiconcavity, check_starshaped, check_strict_quasiconcavity,
    check_symmetry_center, construct_weakly_free, detect_p8_blocked, find_p1_bijection, simulate_consistency,
)
from .scaling import (
    DataTable, Hierarchical, Interordinal, Nominal, Ordinal, PartialOrder, ScalingSpec, read_csv, scale_halfspaces,
    scale_hierarchical, scale_posets, scale_table,
)

__version__ = "0.1.0"
