"""Exact exterior calculus, Poisson homology and smooth-structure analysis
on cones over circle links."""

__version__ = "0.1.0"

from .ring import (
    CoefficientElement,
    Chart,
    GaussianRational,
    cartesian_chart,
    cone_chart,
    link_chart,
)
from .forms import (
    AngleTarget,
    BivectorField,
    ChartMap,
    DifferentialForm,
    VectorField,
    exterior_derivative,
    interior_bivector,
    interior_vector,
    lie_derivative,
    pullback,
    wedge,
)
from .symplectic import (
    GroupAction,
    SymplecticChart,
    brylinski_delta,
    cyclic_plane_action,
    cyclic_symplectic_generator,
    delta_bracket_formula,
    poisson_bracket,
    star_delta_identity_check,
    symplectic_star,
)
from .homology import (
    ComplexStratum,
    build_stratified_complex,
    homology_ranks,
    stable_homology_ranks,
)
from .cones import (
    ConeSpace,
    ConicalSymplecticForm,
    Link,
    conical_identity_report,
    equator_link,
    flat_cone,
    group_quotient_cone,
    latitude_link,
    liouville_identities,
    make_cone_symplectic,
    metric_c1_check,
    perturbed_circle_link,
    quadric_link,
    standard_sphere_contact,
)
from .smooth import (
    ConeFunction,
    EuclideanStructure,
    TangentCone,
    bump_on_cone,
    chi_profile,
    construct_flatness_link,
    degree_of_flatness,
    membership,
    membership_oracle,
    nash_cone_analytic,
    nash_cone_membership,
    partition_of_unity,
    tangent_cone,
    wcone_membership,
    wcone_split,
)

__all__ = [name for name in dir() if not name.startswith("_")]
