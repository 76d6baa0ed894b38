"""Numerical toolkit for symmetric star and convex bodies.

Core objects: evaluator-backed StarBody / ConvexBodyH / Ellipsoid, sphere
and Grassmannian quadrature, section volumes and the spherical Radon
transform, intersection-body construction and inversion, isotropic position
and centroid bodies, covering-based ellipsoid-sum approximants, and body
distances.  The `starbody` CLI exposes verification suites over a fixed
test-body catalog.
"""

from .bodies import (
    ConvexBodyH,
    Ellipsoid,
    LinearMap,
    StarBody,
    apply_map,
    body_from_spec,
    catalog_bodies,
    convexity_defect_radial,
    convexity_defect_support,
    load_body_spec,
    make_ball,
    make_cube,
    make_ellipsoid,
    make_lp_ball,
    make_perturbed_ball,
    make_polytope_hull,
    polar_body,
    radial_sum,
    scale_body,
    support_of_star,
    tabulate_star_body,
    union_body,
)
from .quadrature import (
    GrassmannSample,
    SphereGrid,
    Subspace,
    build_sphere_grid,
    body_covariance,
    e_p,
    e_p_ball,
    m_p,
    mean_width,
    omega,
    sample_grassmannian,
    sample_uniform_in_body,
    scale_to_volume,
    volume,
    w_p,
)
from .sections import (
    IkResult,
    ik_ball,
    ik_ellipsoid,
    ik_solve,
    intersection_body,
    radon_transform,
    section_extremes,
    section_function,
    section_volume,
)
from .positions import (
    IsotropicData,
    centroid_body,
    centroid_body_support,
    centroid_ratio_bounds,
    isotropic_position,
    project_body,
    projection_volume,
    section_shadow_products,
    volume_product,
)
from .approx import (
    BPApproximant,
    Covering,
    bp_approximant,
    bp_curve,
    box_ball_sum_volume,
    enclosing_ellipsoid,
    greedy_cover,
    minkowski_ball_ratios,
    normalize_position,
    ovr_bound,
    star_distance,
)
from .distances import (
    DistanceReport,
    d_bm_upper,
    d_geometric,
    d_radial,
    intersection_roundness,
    roundness_from_sections,
)
from .report import Report, ReportRow, RunConfig

__version__ = "0.1.0"
