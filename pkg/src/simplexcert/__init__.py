"""Certified geometry of simplices.

Barycentric coordinates with explicit continuity moduli, interior radii,
facet distances, epsilon-nets and vertex-perturbation tolerances, each
returned as a conservative floating-point bound.
"""

from .affine import (
    ConvexityClass,
    CoordinateMapConstants,
    barycentric,
    convexity_class,
    coordinate_map_constants,
    evaluate,
    flatten_affine,
    modulus_forward,
    modulus_inverse,
    separation_lb,
)
from .errors import (
    CannotCertifyError,
    DegeneracyError,
    DimensionError,
    InvalidInputError,
    NoCertificateError,
    NotCertifiableError,
    ResourceError,
    SimplexCertError,
)
from .perturb import (
    MatrixNorms,
    PerturbationCertificate,
    affine_perturbation_delta,
    inversion_delta,
    linear_perturbation_delta,
    matrix_norms,
    recoordinate,
    vertex_perturbation_delta,
)
from .simplex import (
    InteriorCertificate,
    Membership,
    MembershipVerdict,
    NetPointSet,
    Simplex,
    barycentre,
    classify,
    epsilon_net,
    face,
    face_distance_lb,
    face_projection,
    new_simplex,
    opposite_face,
    projection_stability,
    regular_simplex,
    relint_certificate,
    standard_simplex,
    transport,
)
from .vecnorm import (
    DEFAULT_ETA,
    NormTag,
    SolveResult,
    get_eta,
    gram_min_eigen_lb,
    l1_margin,
    norm,
    solve_linear,
    tolerance,
)

__version__ = "0.1.0"
