"""Caustics by reflection of plane algebraic curves.

A mirror curve C = {f = 0} and a point source S determine a family of
reflected rays; this package computes the family's degree, the envelope
(the caustic), fiber statistics of the ray map, and the linear-algebraic
geometry of the associated symmetric-matrix curves, all over exact
rationals with validated numeric fallbacks.
"""

__version__ = "0.1.0"

from .birational import (
    FiberReport,
    MatrixCurve,
    WHOLE_PLANE_DEGENERATE,
    is_caustic_birational,
    is_projection_birational,
    kernel_curve,
    lambda_fiber_count,
    projection_fiber_count,
    recover_point_from_B,
)
from .caustic import (
    CausticReport,
    CurveSample,
    caustic_degree,
    degree_D,
    dual_degree,
    envelope_point,
    envelope_points,
    gamma_degree,
    implicit_fit,
    normal_counts,
    reflected_family,
    sample_curve_points,
)
from .detgeom import (
    Pencil,
    PencilClass,
    classify_pencil,
    delta_l_members,
    delta_s_members,
    det3,
    factor_conic,
    image_basis,
    is_veronese,
    kernel_sym,
    pencil_det_form,
    rank_sym,
    veronese_point,
)
from .errors import (
    CatacausticError,
    ClusterAmbiguityError,
    CommonComponentError,
    DegenerateError,
    InconclusiveError,
    NonHomogeneousError,
    ParseError,
    PointCausticError,
    UnluckyCoordinatesError,
    UnstableError,
    ZeroPolynomialDegree,
)
from .euclid import (
    Curve,
    Line,
    ProjPoint,
    SkewMat,
    SymMat,
    cross_ratio,
    cyclic_points,
    incident_ray,
    iota,
    join,
    matA,
    matB,
    meet,
    normal_line,
    parametrize_conic,
    reflected_ray,
    tangent_line,
)
from .gauss import GaussRat
from .poly import (
    BinForm,
    MPoly,
    SolveResult,
    complex_roots,
    count_distinct_roots,
    gcd_form,
    resultant_wrt,
    solve_system,
    solve_system_numeric,
    squarefree,
)

__all__ = [name for name in dir() if not name.startswith("_")]
