"""Covering-disk radii of quasiconformal harmonic mappings of the unit disk.

Modules
    elliptic   K, K', the modulus function phi and its inverse
    mappings   harmonic map families, dilatation, Koebe and affine transforms
    bounds     bounds on d_f/d_h, covering and convexity radii
    radii      univalent-disk radius: closed forms and ray lifting
    verify     theorem checks producing structured reports
    cli        command-line front end
"""

from .bounds import (
    BoundPair,
    ConvexityRadii,
    FamilyParams,
    convexity_radius_at,
    convexity_radius_r0,
    k_from_q,
    lower_bound_m,
    mori_upper_bound_on_ratio,
    q_from_k,
    upper_bound_M,
)
from .elliptic import EllipticModulus, ellip_k, ellip_k_comp, phi, phi_inv
from .errors import (
    DegeneracyError,
    DivergenceError,
    DomainError,
    QuadratureError,
    RayLiftError,
    SenseReversingError,
    UnsupportedVariantError,
)
from .mappings import (
    Affine,
    AnalyticPart,
    HAlpha,
    HarmonicKoebe,
    HarmonicMap,
    Koebe,
    PommerenkeKn,
    ScaledCombo,
    Series,
    identity,
)
from .radii import RadiusEstimate, RayLift, analytic_radius, ray_lift, univalent_disk_radius
from .verify import VerificationReport, run_sharpness_suite

__version__ = "0.1.0"
