"""Numerical Gauss-map and projective-duality invariants of parametrized varieties."""

from .charts import (
    CATALOGUE_SPECS,
    TABLE_ROWS,
    Chart,
    ChartError,
    RuledChart,
    catalogue,
    make_cone,
    make_cone_over_segre,
    make_curve_chart,
    make_join,
    make_segre,
    make_symmetroid,
    make_torse,
    make_veronese,
    resolve,
)
from .duality import (
    DualChart,
    DualityReport,
    apply_correlation,
    dual_chart,
    dual_dimension,
    gh_singularity_test,
    refined_dual_defect,
    verify_theorem4,
)
from .gauss import (
    GaussAnalysis,
    LeafLine,
    NonGenericPointError,
    analyze,
    analyze_generic,
    focus_polynomial,
    form_operator_asymmetry,
    leaf_frame_forms,
    leaf_operators,
    scan_foci,
    second_fundamental,
    tangent_frame,
)
from .jets import BACKEND_NAME, Jet2
from .numerics import (
    DegenerateLeafError,
    InputError,
    Poly1,
    RankDecision,
    numerical_rank,
    nullspace_basis,
    poly_from_samples,
    real_roots,
)

__version__ = "0.1.0"
