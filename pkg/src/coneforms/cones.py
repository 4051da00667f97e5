"""Circle links in spheres, cones over them, and conical symplectic forms.

A link is a trigonometric parameterization of a circle inside a sphere.
Latitude and perturbed circles carry a common horizontal radial profile
sqrt(1 - z(phi)^2); only its square is rational, so coordinates are stored
as (element, carries_profile) pairs and every constraint is phrased through
the squared profile.  Links with rational parameterizations (equator, Hopf
circles, the quadric component) support exact pullback of ambient forms
through the cone embedding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .forms import AngleTarget, ChartMap, DifferentialForm, VectorField
from .linalg import sturm_root_count
from .ring import (
    CoefficientElement,
    Chart,
    GaussianRational,
    cartesian_chart,
    cone_chart,
    link_chart,
)
from .symplectic import GroupAction, cyclic_plane_action

LINK_ANGLE = "phi"
RADIAL = "t"


# ----- exact analysis of univariate trigonometric polynomials -------------------


def _require_trig(elem: CoefficientElement):
    if len(elem.chart.angle_names) != 1:
        raise ValueError("expected a single-angle element")
    for (p, _m), _v in elem.terms.items():
        if any(p):
            raise ValueError("expected a purely trigonometric element")
    if not elem.is_real():
        raise ValueError("expected a real-valued element")


def _cayley_polynomial(elem: CoefficientElement) -> list[Fraction]:
    """Real polynomial R with E(phi) = R(tan(phi/2)) / (1 + tan^2)^N."""
    _require_trig(elem)
    modes = {m[0]: v for (_p, m), v in elem.terms.items()}
    n = max((abs(b) for b in modes), default=0)
    # (1+s^2)^N * E = sum_b c_b (1+is)^(N+b) (1-is)^(N-b)
    size = 2 * n + 1
    total = [GaussianRational(0)] * size
    for b, c in modes.items():
        plus = _binomial_poly(n + b, GaussianRational(0, 1), size)
        minus = _binomial_poly(n - b, GaussianRational(0, -1), size)
        prod = [GaussianRational(0)] * size
        for i, a in enumerate(plus):
            if not a:
                continue
            for j, d in enumerate(minus):
                if i + j < size and d:
                    prod[i + j] = prod[i + j] + a * d
        for k in range(size):
            total[k] = total[k] + c * prod[k]
    coeffs = []
    for v in total:
        if not v.is_real:
            raise AssertionError("Cayley image of a real element must be real")
        coeffs.append(v.re)
    return coeffs


def _binomial_poly(power: int, unit, size: int):
    """(1 + unit*s)^power as ascending coefficients, padded to `size`."""
    coeffs = [GaussianRational(1)] + [GaussianRational(0)] * (size - 1)
    for _ in range(power):
        nxt = [GaussianRational(0)] * size
        for i, c in enumerate(coeffs):
            if not c:
                continue
            nxt[i] = nxt[i] + c
            if i + 1 < size:
                nxt[i + 1] = nxt[i + 1] + c * unit
        coeffs = nxt
    return coeffs


def trig_zero_count(elem: CoefficientElement) -> int | None:
    """Distinct zeros of a real trig polynomial on one period.

    Returns None when the element vanishes identically.
    """
    if elem.is_zero:
        return None
    coeffs = _cayley_polynomial(elem)
    count = sturm_root_count(coeffs) if any(coeffs) else 0
    value_at_pi = GaussianRational(0)
    for (_p, m), v in elem.terms.items():
        sign = -1 if m[0] % 2 else 1
        value_at_pi = value_at_pi + v * sign
    if not value_at_pi:
        count += 1
    return count


def trig_is_nonvanishing(elem: CoefficientElement) -> bool:
    count = trig_zero_count(elem)
    return count is not None and count == 0


def trig_is_positive(elem: CoefficientElement) -> bool:
    if not trig_is_nonvanishing(elem):
        return False
    return elem.evaluate({LINK_ANGLE: 0.0}) > 0


def trig_zero_witness(elem: CoefficientElement, samples: int = 4096) -> float | None:
    """Approximate location of a zero, for error messages only."""
    grid = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    vals = elem.evaluate_array({LINK_ANGLE: grid})
    idx = int(np.argmin(np.abs(vals)))
    if abs(vals[idx]) > 1e-6 * (1.0 + float(np.max(np.abs(vals)))):
        return None
    return float(grid[idx])


# ----- links ------------------------------------------------------------------------


@dataclass(frozen=True)
class Link:
    """Parameterized circle L -> S^l(r) with optional contact form."""

    name: str
    ambient_dim: int
    chart: Chart
    coordinates: tuple  # ((CoefficientElement, carries_profile: bool), ...)
    profile_squared: CoefficientElement
    radius_squared: Fraction
    contact_form: DifferentialForm | None = None

    @staticmethod
    def make(name: str, coordinates, profile_squared=None,
             radius_squared=Fraction(1),
             contact_form: DifferentialForm | None = None) -> "Link":
        chart = coordinates[0][0].chart
        if profile_squared is None:
            profile_squared = CoefficientElement.one(chart)
        link = Link(name, len(coordinates), chart, tuple(coordinates),
                    profile_squared, Fraction(radius_squared), contact_form)
        link.validate()
        return link

    def validate(self):
        if self.chart.angle_names != (LINK_ANGLE,) or self.chart.poly_names:
            raise ValueError("link charts carry the single angle 'phi'")
        if not self.profile_squared.is_zero and not trig_is_positive(self.profile_squared):
            witness = trig_zero_witness(self.profile_squared)
            raise ValueError(
                f"link profile is not positive (vanishes near phi={witness})")
        total = CoefficientElement.zero(self.chart)
        for coord, has_profile in self.coordinates:
            sq = coord * coord
            if has_profile:
                sq = sq * self.profile_squared
            total = total + sq
        if total != CoefficientElement.constant(self.chart, self.radius_squared):
            raise ValueError("coordinates do not satisfy the sphere constraint")
        if self.contact_form is not None:
            coeff = self.contact_form.coefficient(
                (self.chart.var_index(LINK_ANGLE),))
            if not trig_is_nonvanishing(coeff):
                witness = trig_zero_witness(coeff)
                raise ValueError(
                    f"contact form is degenerate (vanishes near phi={witness})")

    @property
    def is_rational(self) -> bool:
        return all(not has_profile for _, has_profile in self.coordinates) \
            or self.profile_squared == CoefficientElement.one(self.chart)

    def vertical_component(self) -> CoefficientElement:
        """The unique profile-free coordinate (z) of a latitude/perturbed link."""
        plain = [c for c, has_profile in self.coordinates if not has_profile]
        if len(plain) != 1:
            raise ValueError("link has no distinguished vertical coordinate")
        return plain[0]

    def direction_samples(self, angles: np.ndarray) -> np.ndarray:
        """Unit link points at the given angles, shape (len(angles), ambient)."""
        rho = np.sqrt(self.profile_squared.evaluate_array({LINK_ANGLE: angles}))
        cols = []
        for coord, has_profile in self.coordinates:
            vals = coord.evaluate_array({LINK_ANGLE: angles})
            cols.append(vals * rho if has_profile else vals)
        pts = np.stack(cols, axis=-1)
        return pts / math.sqrt(float(self.radius_squared))


def _link_chart() -> Chart:
    return link_chart("link", (LINK_ANGLE,))


def equator_link() -> Link:
    chart = _link_chart()
    return Link.make(
        "equator",
        [(CoefficientElement.cos(chart, LINK_ANGLE), False),
         (CoefficientElement.sin(chart, LINK_ANGLE), False)],
        contact_form=DifferentialForm.basis_covector(chart, LINK_ANGLE))


def latitude_link(theta: Fraction) -> Link:
    theta = Fraction(theta)
    if not -1 < theta < 1:
        raise ValueError("latitude must satisfy |theta| < 1")
    chart = _link_chart()
    profile_sq = CoefficientElement.constant(chart, 1 - theta * theta)
    return Link.make(
        f"latitude[z={theta}]",
        [(CoefficientElement.cos(chart, LINK_ANGLE), True),
         (CoefficientElement.sin(chart, LINK_ANGLE), True),
         (CoefficientElement.constant(chart, theta), False)],
        profile_squared=profile_sq,
        contact_form=DifferentialForm.basis_covector(chart, LINK_ANGLE))


def perturbed_circle_link(z: CoefficientElement, name: str | None = None,
                          contact_form: DifferentialForm | None = None) -> Link:
    """Circle in S^2 with prescribed height z(phi); needs |z| < 1 pointwise."""
    chart = z.chart
    profile_sq = CoefficientElement.one(chart) - z * z
    if contact_form is None:
        contact_form = DifferentialForm.basis_covector(chart, LINK_ANGLE)
    return Link.make(
        name or "perturbed-circle",
        [(CoefficientElement.cos(chart, LINK_ANGLE), True),
         (CoefficientElement.sin(chart, LINK_ANGLE), True),
         (z, False)],
        profile_squared=profile_sq,
        contact_form=contact_form)


def ambient_chart(ambient_dim: int) -> Chart:
    if ambient_dim == 2:
        return cartesian_chart("ambient-r2", ["x", "y"])
    if ambient_dim == 3:
        return cartesian_chart("ambient-r3", ["x", "y", "z"])
    if ambient_dim % 2 == 0:
        names = []
        for i in range(1, ambient_dim // 2 + 1):
            names.extend([f"x{i}", f"y{i}"])
        return cartesian_chart(f"ambient-r{ambient_dim}", names)
    return cartesian_chart(f"ambient-r{ambient_dim}",
                           [f"u{i}" for i in range(ambient_dim)])


def standard_contact_one_form(chart: Chart) -> DifferentialForm:
    """sum(x_i dy_i - y_i dx_i) over consecutive variable pairs."""
    names = [v for v, _ in chart.variables]
    total = DifferentialForm.zero(chart, 1)
    for i in range(0, chart.dimension, 2):
        x = CoefficientElement.variable(chart, names[i])
        y = CoefficientElement.variable(chart, names[i + 1])
        dx = DifferentialForm.basis_covector(chart, names[i])
        dy = DifferentialForm.basis_covector(chart, names[i + 1])
        total = total + dy * x - dx * y
    return total


def standard_sphere_contact(n: int) -> Link:
    """Circle family member of (S^{2n-1}, standard contact form).

    The representation is one parameterized circle (the first Hopf circle);
    the stored contact form is the exact pullback of sum(x_i dy_i - y_i dx_i).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    chart = _link_chart()
    coords = [(CoefficientElement.cos(chart, LINK_ANGLE), False),
              (CoefficientElement.sin(chart, LINK_ANGLE), False)]
    for _ in range(n - 1):
        coords.append((CoefficientElement.zero(chart), False))
        coords.append((CoefficientElement.zero(chart), False))
    ambient = ambient_chart(2 * n)
    embed = _link_embedding_map(chart, ambient, coords)
    alpha = embed.pull_form(standard_contact_one_form(ambient))
    return Link.make(f"sphere-contact[n={n}]", coords, contact_form=alpha)


def quadric_link(m: int = 1) -> Link:
    """One component of the degree-two cone's link on the radius-sqrt(2) sphere.

    Parameterized as (z1, z2) = (exp(i phi), i exp(i phi)); the constraints
    z1^2 + z2^2 = 0 and |z1|^2 + |z2|^2 = 2 hold exactly.
    """
    if m != 1:
        raise ValueError("only the planar quadric (m = 1) is supported")
    chart = _link_chart()
    cos = CoefficientElement.cos(chart, LINK_ANGLE)
    sin = CoefficientElement.sin(chart, LINK_ANGLE)
    coords = [(cos, False), (sin, False), (-sin, False), (cos, False)]
    x1, y1, x2, y2 = (c for c, _ in coords)
    if (x1 * x1 - y1 * y1 + x2 * x2 - y2 * y2) != CoefficientElement.zero(chart):
        raise AssertionError("quadric equation (real part) violated")
    if (x1 * y1 + x2 * y2) * 2 != CoefficientElement.zero(chart):
        raise AssertionError("quadric equation (imaginary part) violated")
    ambient = ambient_chart(4)
    embed = _link_embedding_map(chart, ambient, coords)
    alpha = embed.pull_form(standard_contact_one_form(ambient))
    return Link.make("quadric[m=1]", coords, radius_squared=Fraction(2),
                     contact_form=alpha)


def _link_embedding_map(chart: Chart, ambient: Chart, coords) -> ChartMap:
    assignments = {}
    for (name, _), (coord, has_profile) in zip(ambient.variables, coords):
        if has_profile:
            raise ValueError("exact embedding maps need a rational link")
        assignments[name] = coord
    return ChartMap.make(chart, ambient, assignments)


# ----- cones -------------------------------------------------------------------------


@dataclass(frozen=True)
class ConeSpace:
    """Cone over a link with radial coordinate t and chart (t, phi)."""

    link: Link
    chart: Chart
    radial: str = RADIAL

    @staticmethod
    def over(link: Link) -> "ConeSpace":
        return ConeSpace(link, cone_chart(f"cone({link.name})", RADIAL, (LINK_ANGLE,)))

    @property
    def defining_function(self) -> CoefficientElement:
        return CoefficientElement.variable(self.chart, self.radial)

    def embedding_components(self) -> list[tuple[CoefficientElement, bool]]:
        """t * (link coordinates) transported to the cone chart."""
        inc = self.link_inclusion()
        t = self.defining_function
        out = []
        for coord, has_profile in self.link.coordinates:
            out.append((t * inc.pull_scalar(coord), has_profile))
        return out

    def link_inclusion(self) -> ChartMap:
        """Projection cone chart -> link chart, for pulling link forms back."""
        return ChartMap.make(self.chart, self.link.chart,
                             {LINK_ANGLE: AngleTarget(LINK_ANGLE)})

    def embedding_map(self) -> ChartMap:
        """Exact cone -> ambient chart map (rational links only)."""
        if not self.link.is_rational:
            raise ValueError(
                f"link {self.link.name} has an irrational radial profile; "
                "exact ambient pullbacks are unavailable")
        ambient = ambient_chart(self.link.ambient_dim)
        inc = self.link_inclusion()
        t = self.defining_function
        assignments = {}
        for (name, _), (coord, _hp) in zip(ambient.variables, self.link.coordinates):
            assignments[name] = t * inc.pull_scalar(coord)
        return ChartMap.make(self.chart, ambient, assignments)

    def liouville_field(self) -> VectorField:
        return VectorField.basis(self.chart, self.radial) * self.defining_function

    def pull_ambient_symplectic(self) -> DifferentialForm:
        """Pullback of the standard symplectic form through the embedding."""
        if self.link.ambient_dim % 2:
            raise ValueError("ambient symplectic pullback needs even ambient dimension")
        embed = self.embedding_map()
        names = [v for v, _ in embed.target.variables]
        omega = DifferentialForm.zero(embed.target, 2)
        for i in range(0, self.link.ambient_dim, 2):
            dx = DifferentialForm.basis_covector(embed.target, names[i])
            dy = DifferentialForm.basis_covector(embed.target, names[i + 1])
            omega = omega + dx.wedge(dy)
        return embed.pull_form(omega)


def flat_cone() -> ConeSpace:
    return ConeSpace.over(equator_link())


# ----- conical symplectic forms ---------------------------------------------------------


@dataclass(frozen=True)
class ConicalSymplecticForm:
    cone: ConeSpace
    alpha: DifferentialForm       # contact form on the link chart
    omega_hat: DifferentialForm   # half the contact derivative, on the link chart
    total: DifferentialForm       # t^2 omega_hat + t dt ^ alpha on the cone chart


def make_cone_symplectic(cone: ConeSpace, alpha: DifferentialForm) -> ConicalSymplecticForm:
    """Assemble t^2 * (d alpha / 2) + t dt ^ alpha and verify it exactly."""
    if alpha.chart != cone.link.chart:
        raise ValueError("alpha must live on the link chart")
    if alpha.degree != 1:
        raise ValueError("alpha must be a 1-form")
    coeff = alpha.coefficient((alpha.chart.var_index(LINK_ANGLE),))
    if not trig_is_nonvanishing(coeff):
        witness = trig_zero_witness(coeff)
        raise ValueError(
            f"degenerate contact form: coefficient vanishes near phi={witness}")
    omega_hat = alpha.exterior_derivative() * Fraction(1, 2)
    inc = cone.link_inclusion()
    t = cone.defining_function
    dt = DifferentialForm.basis_covector(cone.chart, cone.radial)
    alpha_cone = inc.pull_form(alpha)
    total = inc.pull_form(omega_hat) * (t * t) + dt.wedge(alpha_cone) * t
    csf = ConicalSymplecticForm(cone, alpha, omega_hat, total)
    report = liouville_identities(csf)
    if not all(report.values()):
        failed = sorted(k for k, v in report.items() if not v)
        raise AssertionError(f"conical identities failed: {failed}")
    return csf


def conical_identity_report(cone: ConeSpace, alpha: DifferentialForm,
                            omega_hat: DifferentialForm,
                            total: DifferentialForm) -> dict[str, bool]:
    """Exact booleans for the structural identities of a conical form."""
    inc = cone.link_inclusion()
    t = cone.defining_function
    v = cone.liouville_field()
    alpha_cone = inc.pull_form(alpha)
    half_t2_alpha = (alpha_cone * (t * t) * Fraction(1, 2)).exterior_derivative()
    return {
        "closed": total.exterior_derivative().is_zero,
        "radial_contraction": total.interior_vector(v) == alpha_cone * (t * t),
        "liouville_scaling": total.lie_derivative(v) == total + total,
        "contact_derivative": alpha.exterior_derivative() == omega_hat + omega_hat,
        "half_exact_primitive": total == half_t2_alpha,
    }


def liouville_identities(csf: ConicalSymplecticForm) -> dict[str, bool]:
    return conical_identity_report(csf.cone, csf.alpha, csf.omega_hat, csf.total)


def top_power_factorization(csf: ConicalSymplecticForm) -> DifferentialForm:
    """Top wedge power; for circle links this is t dt ^ alpha, never zero."""
    n = csf.cone.chart.dimension // 2
    out = DifferentialForm.from_function(CoefficientElement.one(csf.cone.chart))
    for _ in range(n):
        out = out.wedge(csf.total)
    return out


# ----- finite quotients of the flat cone -----------------------------------------------


def rotation_invariant_link_form(a: DifferentialForm, order: int) -> bool:
    """Exact invariance under phi -> phi + 2 pi / order.

    The pullback multiplies mode b by a root of unity; invariance of the
    form is equivalent to every mode being divisible by the order.
    """
    for _idx, coeff in a.components.items():
        for (_p, m), _v in coeff.terms.items():
            if m[0] % order:
                return False
    return True


def group_quotient_cone(k: int) -> tuple[ConeSpace, GroupAction]:
    """Flat cone over the unit circle with the exact order-k rotation model."""
    if k < 2:
        raise ValueError("quotient order must be >= 2")
    cone = flat_cone()
    action = cyclic_plane_action(k)
    alpha = cone.link.contact_form
    if not rotation_invariant_link_form(alpha, k):
        raise AssertionError("circle contact form must be rotation invariant")
    omega_bar = make_cone_symplectic(cone, alpha).total
    if not rotation_invariant_link_form(omega_bar, k):
        raise AssertionError("flat-cone symplectic form must be rotation invariant")
    return cone, action


def invariant_mode_projection(elem: CoefficientElement, order: int) -> CoefficientElement:
    """Group average over the rotation action, evaluated in closed form."""
    kept = {key: v for key, v in elem.terms.items() if key[1][0] % order == 0}
    return CoefficientElement.make(elem.chart, kept)


# ----- compatible conical metric, C^1 behaviour at the apex -----------------------------


@dataclass(frozen=True)
class MetricReport:
    samples: int
    tolerance: float
    radial_power: int
    max_deviation: float
    passed: bool
    radii: tuple


def metric_c1_check(link: Link, perturbation: CoefficientElement,
                    samples: int = 10_000, tolerance: float = 1e-6,
                    radial_power: int = 2, base_radius: float = 1e-2,
                    shrink_steps: int = 20) -> MetricReport:
    """Finite-difference first derivatives of the perturbed cone metric at 0.

    The perturbed metric is g0 + t^radial_power * Q(phi) in cartesian
    components, where Q = h * (unit tangent (x) unit tangent) and h is the
    supplied Fourier perturbation of the circle metric.  For the conical case
    (radial_power = 2) first derivatives converge to the radial limit 0; the
    report carries the maximal one-sided finite-difference deviation at the
    smallest sampled radius.  radial_power = 1 is the deliberate sub-quadratic
    negative control.
    """
    _require_trig(perturbation)
    if radial_power < 1:
        raise ValueError("radial power must be >= 1")
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    one_plus = CoefficientElement.one(perturbation.chart) + perturbation
    if not trig_is_positive(one_plus):
        raise ValueError("perturbed circle metric is not positive")

    angles = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)

    def metric_perturbation(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        """Components (Pxx, Pxy, Pyy) of t^k * h * (tangent (x) tangent)."""
        t = np.hypot(xs, ys)
        t = np.where(t == 0, 1e-300, t)
        phi = np.arctan2(ys, xs)
        h = perturbation.evaluate_array({LINK_ANGLE: phi})
        tk = t ** radial_power
        sin, cos = np.sin(phi), np.cos(phi)
        return np.stack([tk * h * sin * sin,
                         -tk * h * sin * cos,
                         tk * h * cos * cos])

    radii = [base_radius * (0.5 ** k) for k in range(shrink_steps)]
    deviations = []
    for t in radii:
        xs = t * np.cos(angles)
        ys = t * np.sin(angles)
        eta = t * 1e-3
        base = metric_perturbation(xs, ys)
        dx = (metric_perturbation(xs + eta, ys) - base) / eta
        dy = (metric_perturbation(xs, ys + eta) - base) / eta
        deviations.append(float(max(np.max(np.abs(dx)), np.max(np.abs(dy)))))
    max_dev = deviations[-1]
    return MetricReport(samples=samples, tolerance=tolerance,
                        radial_power=radial_power, max_deviation=max_dev,
                        passed=max_dev < tolerance or (tolerance == 0 and max_dev == 0),
                        radii=tuple(zip(radii, deviations)))


