"""Distance family, canonical frame and bisectors"""
from lpvoronoi.geometry.norms import (
    Exponent,
    ExponentKind,
    Ordering,
    Vec2,
    compare_distance,
    distance_key,
    distance_key_array,
    l0_norm_nd,
    lp_norm,
    lp_norm_array,
    pow_diff,
)
from lpvoronoi.geometry.canonical import (
    GREY_CELLS,
    WHITE_CELLS,
    CanonicalFrame,
    Cell,
    canonicalize,
    check_half_width,
    classify_cell,
    default_x_grid,
    h,
    s,
    v_p,
    w_p,
    z_p_inv,
)
from lpvoronoi.geometry.bisector import (
    ON_BISECTOR,
    BisectorSample,
    FaceLabel,
    L0Bisector,
    Owner,
    SpecialLinePoint,
    bisector_residual,
    l0_bisector,
    l0_bisector_points,
    l0_face,
    sample_bisector_y,
    sample_cells,
    special_line_points,
)
