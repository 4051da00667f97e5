"""Euclidean smooth structures on cones over circle links.

Covers the decidable function classes (membership of radial Fourier
polynomials in the generated structure, with a brute-force generator-span
oracle), the tangent cone with its flat-direction count, constructions with
prescribed flatness, numeric Nash-cone membership, and the bump-function and
partition-of-unity machinery near the apex.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .cones import (
    LINK_ANGLE,
    ConeSpace,
    Link,
    latitude_link,
    perturbed_circle_link,
    trig_zero_count,
)
from .linalg import row_space_basis
from .ring import (
    CoefficientElement,
    Chart,
    RADIAL as RADIAL_KIND,
    cone_chart,
    link_chart,
)

RADIAL = "t"


# ----- radial Fourier polynomials -------------------------------------------------


@dataclass(frozen=True)
class ConeFunction:
    """Finite sum of q * t^a * cos(b phi) / sin(b phi) terms, exact and real."""

    element: CoefficientElement

    @staticmethod
    def chart() -> Chart:
        return cone_chart("cone", RADIAL, (LINK_ANGLE,))

    @staticmethod
    def from_element(element: CoefficientElement) -> "ConeFunction":
        for (p, _m), _v in element.terms.items():
            if p[0] < 0:
                raise ValueError("negative radial exponents are rejected")
        if not element.is_real():
            raise ValueError("cone functions must be real-valued")
        return ConeFunction(element)

    @staticmethod
    def from_terms(terms: Sequence[tuple[int, int, Fraction]]) -> "ConeFunction":
        """Terms (a, b, q): q t^a cos(b phi) for b >= 0, q t^a sin(-b phi) for b < 0."""
        chart = ConeFunction.chart()
        t = CoefficientElement.variable(chart, RADIAL)
        total = CoefficientElement.zero(chart)
        for a, b, q in terms:
            if a < 0:
                raise ValueError("negative radial exponents are rejected")
            if b >= 0:
                angular = CoefficientElement.cos(chart, LINK_ANGLE, b)
            else:
                angular = CoefficientElement.sin(chart, LINK_ANGLE, -b)
            total = total + t ** a * angular * Fraction(q)
        return ConeFunction.from_element(total)

    @staticmethod
    def parse(text: str) -> "ConeFunction":
        """Comma-separated term list 'a:b:num/den'."""
        terms = []
        for chunk in text.split(","):
            chunk = chunk.strip()
            if not chunk:
                continue
            a_str, b_str, q_str = chunk.split(":")
            terms.append((int(a_str), int(b_str), Fraction(q_str)))
        return ConeFunction.from_terms(terms)

    def bidegrees(self) -> list[tuple[int, int]]:
        """Occurring (radial exponent, nonnegative mode) pairs."""
        out = set()
        for (p, m), _v in self.element.terms.items():
            out.add((p[0], abs(m[0])))
        return sorted(out)

    def radial_layers(self) -> dict:
        """Split into homogeneous radial degrees {a: angular element}."""
        layers: dict = {}
        for (p, m), v in self.element.terms.items():
            layers.setdefault(p[0], {})[((), m)] = v
        angular_chart = link_chart("link", (LINK_ANGLE,))
        return {a: CoefficientElement.make(angular_chart, terms)
                for a, terms in layers.items()}


# ----- Euclidean smooth structures over latitude circles ----------------------------


@dataclass(frozen=True)
class EuclideanStructure:
    """Structure generated by the ambient coordinates t * f_i along a latitude.

    Generators are stored with unit horizontal scale; rescaling a generator by
    a nonzero constant does not change the generated structure.  At theta = 0
    the vertical generator vanishes identically and is dropped, which is the
    source of the parity obstruction.
    """

    cone: ConeSpace
    theta: Fraction
    generators: tuple

    @staticmethod
    def latitude(theta: Fraction) -> "EuclideanStructure":
        theta = Fraction(theta)
        cone = ConeSpace.over(latitude_link(theta))
        chart = cone.chart
        t = CoefficientElement.variable(chart, RADIAL)
        gens = [t * CoefficientElement.cos(chart, LINK_ANGLE),
                t * CoefficientElement.sin(chart, LINK_ANGLE)]
        if theta:
            gens.append(t * theta)
        structure = EuclideanStructure(cone, theta, tuple(gens))
        for g in structure.generators:
            for (p, _m), _v in g.terms.items():
                if p[0] < 1:
                    raise AssertionError("generators must vanish at the apex")
        return structure


def membership(f: ConeFunction, structure: EuclideanStructure) -> bool:
    """Decide smoothness of f in the generated structure.

    A term t^a exp(i b phi) is representable iff |b| <= a, and additionally
    a == b (mod 2) when theta = 0.  The criterion is validated against the
    brute-force generator-span oracle (`membership_oracle`, acceptance-tested
    on every bidegree with a <= 8).
    """
    for (p, m), _v in f.element.terms.items():
        a, b = p[0], m[0]
        if abs(b) > a:
            return False
        if structure.theta == 0 and (a - b) % 2:
            return False
    return True


def _real_fourier_coords(elem: CoefficientElement, max_mode: int) -> list[Fraction]:
    """Coordinates [a0, a1, s1, ..., aN, sN] of a real single-angle element."""
    coords = [Fraction(0)] * (2 * max_mode + 1)
    for (_p, m), v in elem.terms.items():
        b = m[0]
        if abs(b) > max_mode:
            raise ValueError("mode exceeds the requested window")
        if b == 0:
            if not v.is_real:
                raise ValueError("element is not real")
            coords[0] += v.re
        elif b > 0:
            coords[2 * b - 1] += v.re      # cos coefficient contribution
            coords[2 * b] += -v.im         # sin coefficient contribution
        else:
            coords[-2 * b - 1] += v.re
            coords[-2 * b] += v.im
    return coords


def generator_span_basis(structure: EuclideanStructure, radial_degree: int,
                         window: int | None = None):
    """Row-reduced exact basis of degree-`radial_degree` generator products.

    The products are taken in the angular factor only; the common t^a factor
    is dropped.  Rows are real Fourier coordinates up to mode `window`
    (defaulting to the radial degree, which bounds every product mode).
    """
    chart = structure.cone.chart
    window = radial_degree if window is None else window
    angular_factors = []
    for g in structure.generators:
        # strip the common power of t to get the angular factor
        terms = {}
        for (pw, md), val in g.terms.items():
            terms[((pw[0] - 1,) + pw[1:], md)] = val
        angular_factors.append(CoefficientElement.make(chart, terms))
    rows = []
    for combo in _compositions(len(angular_factors), radial_degree):
        prod = CoefficientElement.one(chart)
        for factor, power in zip(angular_factors, combo):
            prod = prod * factor ** power
        rows.append(_real_fourier_coords(prod, window))
    return [row for row in row_space_basis(rows) if any(row)]


def _compositions(parts: int, total: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(parts - 1, total - first):
            yield (first,) + rest


def _in_span(basis: list[list[Fraction]], vector: list[Fraction]) -> bool:
    residual = list(vector)
    for row in basis:
        lead = next((j for j, v in enumerate(row) if v), None)
        if lead is None:
            continue
        if residual[lead]:
            factor = residual[lead] / row[lead]
            residual = [r - factor * v for r, v in zip(residual, row)]
    return not any(residual)


def membership_oracle(f: ConeFunction, structure: EuclideanStructure) -> bool:
    """Brute-force decision: every homogeneous radial layer must lie in the
    exact linear span of same-degree generator products."""
    for a, angular in f.radial_layers().items():
        window = max(a, angular.max_mode())
        basis = generator_span_basis(structure, a, window)
        vector = _real_fourier_coords(angular, window)
        if not _in_span(basis, vector):
            return False
    return True


def bidegree_agreement(structure: EuclideanStructure, max_degree: int = 8):
    """Compare decision and oracle on the cos and sin probes of every bidegree.

    Returns a list of (a, b, probe, decision, oracle) disagreements; empty
    means 100% agreement on a <= max_degree.
    """
    chart = ConeFunction.chart()
    t = CoefficientElement.variable(chart, RADIAL)
    disagreements = []
    for a in range(max_degree + 1):
        basis = generator_span_basis(structure, a)
        for b in range(0, max_degree + 1):
            probes = [("cos", CoefficientElement.cos(chart, LINK_ANGLE, b))]
            if b:
                probes.append(("sin", CoefficientElement.sin(chart, LINK_ANGLE, b)))
            for tag, angular in probes:
                func = ConeFunction.from_element(t ** a * angular)
                decided = membership(func, structure)
                if b > a:
                    spanned = False
                else:
                    link_elem = next(iter(func.radial_layers().values()))
                    spanned = _in_span(basis, _real_fourier_coords(link_elem, a))
                if decided != spanned:
                    disagreements.append((a, b, tag, decided, spanned))
    return disagreements


# ----- the collapsed-boundary membership test ----------------------------------------


def wcone_chart() -> Chart:
    return Chart("halfcylinder", (("x", "cartesian"), (RADIAL, RADIAL_KIND)))


def wcone_membership(f: CoefficientElement) -> bool:
    """True iff f(x, 0) is constant, i.e. f = t * g(x, t) + c exactly."""
    x_slot = f.chart.poly_slot("x")
    t_slot = f.chart.poly_slot(RADIAL)
    for (p, _m), _v in f.terms.items():
        if p[t_slot] == 0 and p[x_slot] != 0:
            return False
    return True


def wcone_split(f: CoefficientElement):
    """Decompose f = t * g + c; raises when f is not constant at t = 0."""
    if not wcone_membership(f):
        raise ValueError("function is not constant at t = 0")
    t_slot = f.chart.poly_slot(RADIAL)
    const = Fraction(0)
    g_terms = {}
    for (p, m), v in f.terms.items():
        if p[t_slot] == 0:
            const = v.re
            continue
        lowered = list(p)
        lowered[t_slot] -= 1
        g_terms[(tuple(lowered), m)] = v
    return CoefficientElement.make(f.chart, g_terms), const


# ----- tangent cone and flatness ------------------------------------------------------


@dataclass(frozen=True)
class TangentCone:
    """Radial tangent directions at the apex with their flat-pair structure."""

    link: Link
    directions: np.ndarray          # sampled unit directions, rows in R^(l+1)
    flat_count: int                 # connected components of the flat set
    flat_everywhere: bool
    flat_angles: tuple              # numeric angles of isolated flat rays
    flat_pairs: tuple               # ((v, -v) direction pairs)
    convention_note: str = ""


def _antipodal_defect(link: Link) -> CoefficientElement:
    """Trig element whose zero set is the flat locus on the angle domain."""
    chart = link.chart
    verticals = [c for c, has_profile in link.coordinates if not has_profile]
    if len(verticals) + 2 == len(link.coordinates) and \
            any(has_profile for _, has_profile in link.coordinates):
        z = verticals[0]
        return z + z.angle_shift_quarter_turns(LINK_ANGLE, 2)
    total = CoefficientElement.zero(chart)
    for coord, _hp in link.coordinates:
        d = coord + coord.angle_shift_quarter_turns(LINK_ANGLE, 2)
        total = total + d * d
    return total


def tangent_cone(cone: ConeSpace, samples: int = 256) -> TangentCone:
    """Directions are the link points themselves; flat pairs come from the
    exact antipodal-coincidence analysis of the parameterization."""
    link = cone.link
    grid = np.linspace(0.0, 2.0 * math.pi, samples, endpoint=False)
    directions = link.direction_samples(grid)
    defect = _antipodal_defect(link)
    count = trig_zero_count(defect)
    if count is None:
        return TangentCone(
            link, directions, flat_count=1, flat_everywhere=True,
            flat_angles=(), flat_pairs=(),
            convention_note=("flat locus is the whole link; the punctured "
                             "plane of flat vectors counts as one component"))
    angles = _numeric_zeros(defect, count)
    pairs = []
    seen = set()
    for phi in angles:
        partner = (phi + math.pi) % (2.0 * math.pi)
        key = round(min(phi, partner), 9)
        if key in seen:
            continue
        seen.add(key)
        v = link.direction_samples(np.array([phi]))[0]
        pairs.append((tuple(v), tuple(-v)))
    return TangentCone(link, directions, flat_count=count,
                       flat_everywhere=False,
                       flat_angles=tuple(angles), flat_pairs=tuple(pairs))


def _numeric_zeros(elem: CoefficientElement, expected: int,
                   resolution: int = 1 << 14) -> list[float]:
    """Bisection roots of a real trig element; count certified by Sturm."""
    grid = np.linspace(0.0, 2.0 * math.pi, resolution, endpoint=False)
    vals = elem.evaluate_array({LINK_ANGLE: grid})
    roots = []
    for i in range(resolution):
        a = grid[i]
        b = grid[i + 1] if i + 1 < resolution else 2.0 * math.pi
        fa, fb = vals[i], vals[(i + 1) % resolution]
        if fa == 0.0:
            roots.append(float(a))
        elif fa * fb < 0:
            lo, hi, flo = a, b, fa
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                fm = elem.evaluate({LINK_ANGLE: mid})
                if flo * fm <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            roots.append(0.5 * (lo + hi))
    if len(roots) < expected:
        # tangential zeros without sign change: refine by local minima of |E|
        absvals = np.abs(vals)
        order = np.argsort(absvals)
        for idx in order:
            if len(roots) >= expected:
                break
            cand = float(grid[idx])
            if all(abs(cand - r) > 1e-3 and abs(abs(cand - r) - 2 * math.pi) > 1e-3
                   for r in roots):
                cand = _refine_tangential(elem, cand)
                roots.append(cand)
    roots = sorted(r % (2.0 * math.pi) for r in roots)
    dedup: list[float] = []
    for r in roots:
        if not dedup or abs(r - dedup[-1]) > 1e-6:
            dedup.append(r)
    return dedup[:expected] if len(dedup) >= expected else dedup


def _refine_tangential(elem: CoefficientElement, phi: float) -> float:
    span = 2.0 * math.pi / (1 << 14)
    lo, hi = phi - span, phi + span
    for _ in range(200):
        third = (hi - lo) / 3.0
        m1, m2 = lo + third, hi - third
        if abs(elem.evaluate({LINK_ANGLE: m1})) < abs(elem.evaluate({LINK_ANGLE: m2})):
            hi = m2
        else:
            lo = m1
    return 0.5 * (lo + hi) % (2.0 * math.pi)


def degree_of_flatness(tc: TangentCone) -> int:
    """Connected components of the nonzero flat tangent vectors."""
    return tc.flat_count


def construct_flatness_link(pairs: int) -> Link:
    """Link whose flat set consists of exactly `pairs` antipodal ray pairs.

    pairs = 0 returns a latitude circle; otherwise the height profile is an
    even-mode trigonometric polynomial with exactly 2 * pairs zeros, validated
    a posteriori through the flatness computation.
    """
    if pairs < 0:
        raise ValueError("pair count must be >= 0")
    if pairs == 0:
        link = latitude_link(Fraction(1, 2))
    else:
        chart = latitude_link(Fraction(1, 2)).chart
        cos2 = CoefficientElement.cos(chart, LINK_ANGLE, 2)
        if pairs % 2 == 0:
            profile = CoefficientElement.cos(chart, LINK_ANGLE, pairs)
        else:
            profile = CoefficientElement.one(chart) + cos2
            for j in range((pairs - 1) // 2):
                shift = Fraction(j + 1, pairs + 1)
                profile = profile * (cos2 - CoefficientElement.constant(chart, shift))
        bound = sum(abs(complex(v)) for _k, v in profile.terms.items())
        scale = Fraction(1, 4 * math.ceil(bound) if bound else 4)
        link = perturbed_circle_link(profile * scale, f"flatness[{pairs} pairs]")
    tc = tangent_cone(ConeSpace.over(link))
    if degree_of_flatness(tc) != 2 * pairs and pairs > 0:
        raise AssertionError("constructed link fails the flatness oracle")
    if pairs == 0 and degree_of_flatness(tc) != 0:
        raise AssertionError("latitude circle must have no flat directions")
    return link


# ----- Nash cone membership (numeric) ---------------------------------------------------


def _limit_plane_distances(link: Link, vec: np.ndarray, phis: np.ndarray,
                           t: float) -> np.ndarray:
    """Distance of vec to the tangent plane of the cone at radius t, per angle."""
    h = t * 1e-4
    base = t * link.direction_samples(phis)
    du = ((t + h) * link.direction_samples(phis) - base) / h
    dv = (t * link.direction_samples(phis + h) - base) / h
    e1 = du / np.linalg.norm(du, axis=1, keepdims=True)
    dv = dv - np.sum(dv * e1, axis=1, keepdims=True) * e1
    e2 = dv / np.linalg.norm(dv, axis=1, keepdims=True)
    proj = (np.sum(vec * e1, axis=1, keepdims=True) * e1
            + np.sum(vec * e2, axis=1, keepdims=True) * e2)
    return np.linalg.norm(vec - proj, axis=1)


def nash_cone_membership(cone: ConeSpace, v: Sequence[float],
                         tol: float = 1e-8, coarse: int = 4096) -> bool:
    """Test v against the limits of tangent planes along rays into the apex.

    The plane along the ray at angle phi is computed by finite differences of
    the embedding at shrinking radii and checked for stabilization; the
    direction v belongs to the Nash cone when its distance to some limit
    plane, minimized over phi with local refinement, falls below tol.
    """
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    vec = np.asarray(v, dtype=float)
    norm = float(np.linalg.norm(vec))
    if norm == 0:
        return True
    vec = vec / norm
    link = cone.link

    grid = np.linspace(0.0, 2.0 * math.pi, coarse, endpoint=False)
    dists = _limit_plane_distances(link, vec, grid, t=1e-3)
    again = _limit_plane_distances(link, vec, grid, t=5e-4)
    if float(np.max(np.abs(dists - again))) > 1e-6:
        raise ArithmeticError("tangent planes fail to stabilize along the rays")
    if float(np.min(dists)) <= tol:
        return True

    def refine_target(phi: float) -> float:
        return float(_limit_plane_distances(link, vec, np.array([phi]), 1e-3)[0])

    phi0 = float(grid[int(np.argmin(dists))])
    span = 2.0 * math.pi / coarse
    lo, hi = phi0 - span, phi0 + span
    for _ in range(120):
        third = (hi - lo) / 3.0
        m1, m2 = lo + third, hi - third
        if refine_target(m1) < refine_target(m2):
            hi = m2
        else:
            lo = m1
    return refine_target(0.5 * (lo + hi)) <= tol


def nash_cone_analytic(link: Link, v: Sequence[float]) -> bool:
    """Closed-form description for latitude cones: the projection of v to the
    horizontal plane must be at least (rho/theta) times its vertical part."""
    z = link.vertical_component()
    theta = z.evaluate({LINK_ANGLE: 0.0})
    rho_sq = link.profile_squared.evaluate({LINK_ANGLE: 0.0})
    vx, vy, vz = (float(c) for c in v)
    if theta == 0:
        return abs(vz) == 0.0
    return theta * theta * (vx * vx + vy * vy) >= rho_sq * vz * vz - 1e-15


# ----- bump functions and partitions of unity ---------------------------------------------


def _smooth_step(x: np.ndarray) -> np.ndarray:
    """C-infinity transition: 0 for x <= 0, 1 for x >= 1, strictly rising between."""
    x = np.asarray(x, dtype=float)
    with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
        a = np.where(x > 0, np.exp(-1.0 / np.where(x > 0, x, 1.0)), 0.0)
        b = np.where(x < 1, np.exp(-1.0 / np.where(x < 1, 1.0 - x, 1.0)), 0.0)
    return a / (a + b)


@dataclass(frozen=True)
class RadialFunction:
    """Evaluable radial profile handle."""

    fn: Callable
    support: tuple
    label: str

    def __call__(self, r):
        scalar = np.isscalar(r)
        out = self.fn(np.atleast_1d(np.asarray(r, dtype=float)))
        return float(out[0]) if scalar else out


def chi_profile(eps: float) -> RadialFunction:
    """Five-interval plateau profile: 0, rise, 1, fall, 0 across (0, eps)."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    e5 = eps / 5.0

    def chi(r: np.ndarray) -> np.ndarray:
        up = _smooth_step((r - e5) / e5)
        down = 1.0 - _smooth_step((r - 3.0 * e5) / e5)
        return up * down

    return RadialFunction(chi, (e5, 4.0 * e5), f"chi[eps={eps}]")


def bump_on_cone(eps: float) -> RadialFunction:
    """Apex bump: 1 at the apex, supported inside radius eps.

    Built in three steps from the plateau profile: extend chi * rho to the
    regular part, patch with the constant one away from the apex, and return
    the complement.  The result is identically 1 on [0, eps/5] and vanishes
    beyond 2 eps / 5.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    chi = chi_profile(eps)
    e5 = eps / 5.0

    def psi(r: np.ndarray) -> np.ndarray:
        values = np.where(r >= 2.0 * e5, 1.0, chi.fn(r))
        return np.where(r == 0.0, 0.0, values)

    def bump(r: np.ndarray) -> np.ndarray:
        return 1.0 - psi(r)

    return RadialFunction(bump, (0.0, 2.0 * e5), f"bump[eps={eps}]")


def partition_of_unity(cover: Sequence[tuple]) -> list[RadialFunction]:
    """Smooth partition subordinate to an apex cap plus radial annuli.

    `cover` lists patches ("cap", b) for [0, b) and ("annulus", a, b) for
    (a, b); the union must cover [0, R) where R is the largest right endpoint.
    Each returned function is nonnegative with support in its patch and the
    family sums to one; a gap in the cover is rejected with a witness radius.
    """
    if not cover:
        raise ValueError("empty cover")
    patches = []
    for patch in cover:
        if patch[0] == "cap":
            _, b = patch
            patches.append(("cap", Fraction(0), Fraction(b)))
        elif patch[0] == "annulus":
            _, a, b = patch
            a, b = Fraction(a), Fraction(b)
            if not 0 <= a < b:
                raise ValueError(f"bad annulus ({a}, {b})")
            patches.append(("annulus", a, b))
        else:
            raise ValueError(f"unknown patch kind {patch[0]!r}")
    radius = max(b for _kind, _a, b in patches)
    caps = [p for p in patches if p[0] == "cap"]
    if not caps:
        raise ValueError("cover misses the apex: witness radius 0")
    covered = max(b for kind, _a, b in patches if kind == "cap")
    while covered < radius:
        extension = None
        for kind, a, b in patches:
            lower = a if kind == "annulus" else Fraction(0)
            if lower < covered and b > covered:
                extension = max(extension, b) if extension else b
        if extension is None:
            raise ValueError(f"cover has a gap: witness radius {float(covered)}")
        covered = extension

    pieces = []
    for kind, a, b in patches:
        af, bf = float(a), float(b)
        if kind == "cap":
            width = bf / 2.0

            def g(r, _b=bf, _w=width):
                # falling transition computed directly; 1 - step(...) would
                # round the strictly positive tail near the edge to zero
                return _smooth_step((_b - r) / _w)
        else:
            width = (bf - af)

            def g(r, _a=af, _b=bf, _w=width):
                return _smooth_step((r - _a) / _w) * _smooth_step((_b - r) / _w)
        pieces.append((g, (af if kind == "annulus" else 0.0, bf), kind))

    def total(r):
        return sum(g(r) for g, _s, _k in pieces)

    out = []
    for i, (g, support, kind) in enumerate(pieces):
        def f(r, _g=g):
            denom = total(r)
            if np.any(denom <= 0):
                raise ValueError("partition evaluated outside the covered region")
            return _g(r) / denom
        out.append(RadialFunction(f, support, f"partition[{i}:{kind}]"))
    return out
