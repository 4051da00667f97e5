"""Acceptance suite.

Each test covers one acceptance criterion at its stated tolerance and prints
a single pass/fail line (visible with `pytest tests/test_acceptance.py -s`).
Exact criteria tolerate nothing; numeric criteria use the tolerances fixed
here and nowhere else.
"""

import math
import random
from fractions import Fraction

import numpy as np
import pytest

from coneforms.cones import (
    ConeSpace,
    equator_link,
    flat_cone,
    latitude_link,
    liouville_identities,
    make_cone_symplectic,
    metric_c1_check,
    perturbed_circle_link,
    quadric_link,
)
from coneforms.forms import DifferentialForm
from coneforms.homology import (
    build_stratified_complex,
    homology_ranks,
    stable_homology_ranks,
)
from coneforms.ring import CoefficientElement
from coneforms.smooth import (
    ConeFunction,
    EuclideanStructure,
    bidegree_agreement,
    bump_on_cone,
    construct_flatness_link,
    degree_of_flatness,
    membership,
    nash_cone_analytic,
    nash_cone_membership,
    partition_of_unity,
    tangent_cone,
)
from coneforms.symplectic import (
    SymplecticChart,
    brylinski_delta,
    cyclic_plane_action,
    delta_bracket_formula,
    random_element,
    random_form,
    star_delta_identity_check,
    symplectic_star,
)

RANDOM_FORMS_PER_CHART = 200
COEFF_DEGREE = 6
SEED = 2024


def report_line(number: int, ok: bool, text: str):
    status = "PASS" if ok else "FAIL"
    print(f"[acceptance {number}] {status}: {text}")
    assert ok, f"acceptance criterion {number} failed: {text}"


def test_criterion_1_algebraic_identity_suite():
    """d^2, delta^2, commutator-vs-expansion, star involution, conjugation:
    exact equality on seeded random forms over the plane and 4-space."""
    offenders = []
    for n in (1, 2):
        s = SymplecticChart.standard(n)
        rng = random.Random(SEED + n)
        for trial in range(RANDOM_FORMS_PER_CHART):
            form = random_form(s.chart, rng.randint(0, s.dimension), rng,
                               max_degree=COEFF_DEGREE)
            if not form.exterior_derivative().exterior_derivative().is_zero:
                offenders.append((n, trial, "d^2"))
            if not brylinski_delta(brylinski_delta(form, s), s).is_zero:
                offenders.append((n, trial, "delta^2"))
            if symplectic_star(symplectic_star(form, s), s) != form:
                offenders.append((n, trial, "star^2"))
            if not star_delta_identity_check(form, s):
                offenders.append((n, trial, "star-conjugation"))
            f0 = random_element(s.chart, rng, COEFF_DEGREE)
            fs = [random_element(s.chart, rng, 2)
                  for _ in range(rng.randint(1, min(3, s.dimension)))]
            decomposable = DifferentialForm.from_function(f0)
            for g in fs:
                decomposable = decomposable.wedge(
                    DifferentialForm.from_function(g).exterior_derivative())
            if delta_bracket_formula(f0, fs, s) != brylinski_delta(decomposable, s):
                offenders.append((n, trial, "bracket-expansion"))
    report_line(1, not offenders,
                f"0 identity violations over 2x{RANDOM_FORMS_PER_CHART} seeded "
                f"random forms, coefficient degree <= {COEFF_DEGREE}"
                + (f"; offenders: {offenders[:3]}" if offenders else ""))


def test_criterion_2_conical_identity_suite():
    """All five structural identities, exactly, on the flat cone, the quadric
    component and three perturbed-circle links."""
    chart = equator_link().chart
    cos = CoefficientElement.cos
    perturbed = [
        perturbed_circle_link(cos(chart, "phi", 2) * Fraction(1, 4), "wave2"),
        perturbed_circle_link(cos(chart, "phi", 3) * Fraction(1, 4), "wave3"),
        perturbed_circle_link(
            (cos(chart, "phi", 2) + cos(chart, "phi", 4)) * Fraction(1, 8),
            "wave24",
            contact_form=DifferentialForm.basis_covector(chart, "phi")
            * (cos(chart, "phi") * Fraction(1, 2) + 1)),
    ]
    cones = [flat_cone(), ConeSpace.over(quadric_link(1))] + \
        [ConeSpace.over(link) for link in perturbed]
    failures = []
    for cone in cones:
        csf = make_cone_symplectic(cone, cone.link.contact_form)
        report = liouville_identities(csf)
        for name, ok in report.items():
            if not ok:
                failures.append((cone.link.name, name))
    report_line(2, not failures,
                f"conical identities exact on {len(cones)} cones "
                "(flat, quadric, 3 perturbed)"
                + (f"; failures: {failures}" if failures else ""))


def test_criterion_3_hodge_duality_ranks():
    """Poisson-boundary homology ranks equal reverse-graded de Rham ranks,
    from independently built exact matrices, plus the stable rank values."""
    problems = []
    for n in (1, 2):
        s = SymplecticChart.standard(n)
        top = [0] * (2 * n) + [1]
        bottom = [1] + [0] * (2 * n)
        for d in (4, 8):
            de_rham = build_stratified_complex(s, d, "deRham")
            delta = build_stratified_complex(s, d, "delta")
            if homology_ranks(delta) != homology_ranks(de_rham)[::-1]:
                problems.append((2 * n, d, "reverse equality"))
            if stable_homology_ranks(delta) != top:
                problems.append((2 * n, d, "delta stable ranks"))
            if stable_homology_ranks(de_rham) != bottom:
                problems.append((2 * n, d, "deRham stable ranks"))
    plane = SymplecticChart.standard(1)
    for k in (2, 3, 4):
        action = cyclic_plane_action(k, plane)
        for d in (4, 8):
            de_rham = build_stratified_complex(plane, d, "deRham", action)
            delta = build_stratified_complex(plane, d, "delta", action)
            if homology_ranks(delta) != homology_ranks(de_rham)[::-1]:
                problems.append((k, d, "invariant reverse equality"))
            if stable_homology_ranks(delta) != [0, 0, 1]:
                problems.append((k, d, "invariant delta stable"))
            if stable_homology_ranks(de_rham) != [1, 0, 0]:
                problems.append((k, d, "invariant deRham stable"))
    report_line(3, not problems,
                "boundary vs reversed de Rham rank equality on r2/r4 at "
                "D in {4, 8} and on Z_k-invariant subcomplexes, k in {2, 3, 4}"
                + (f"; problems: {problems}" if problems else ""))


def test_criterion_4_membership_decision():
    """Radius function accepted at theta=1/2 and rejected at theta=0; the
    decision procedure matches the generator-span oracle on all bidegrees."""
    half = EuclideanStructure.latitude(Fraction(1, 2))
    zero = EuclideanStructure.latitude(Fraction(0))
    f_t = ConeFunction.from_terms([(1, 0, Fraction(1))])
    ok = membership(f_t, half) and not membership(f_t, zero)
    disagree_half = bidegree_agreement(half, 8)
    disagree_zero = bidegree_agreement(zero, 8)
    ok = ok and not disagree_half and not disagree_zero
    report_line(4, ok,
                "t smooth iff theta != 0; decision matches brute-force span "
                "oracle on 100% of bidegrees with a <= 8"
                + ("" if ok else
                   f"; disagreements: {disagree_half + disagree_zero}"))


def test_criterion_5_flatness_degrees():
    """Flatness 0 / 1 / 4 for the three reference links, and the prescribed
    constructions validate for up to three antipodal pairs."""
    cases = [
        (ConeSpace.over(latitude_link(Fraction(1, 2))), 0),
        (ConeSpace.over(equator_link()), 1),
        (ConeSpace.over(perturbed_circle_link(
            CoefficientElement.cos(equator_link().chart, "phi", 2)
            * Fraction(1, 4))), 4),
    ]
    problems = []
    for cone, expected in cases:
        got = degree_of_flatness(tangent_cone(cone))
        if got != expected:
            problems.append((cone.link.name, got, expected))
    for pairs in (0, 1, 2, 3):
        link = construct_flatness_link(pairs)
        got = degree_of_flatness(tangent_cone(ConeSpace.over(link)))
        if got != 2 * pairs:
            problems.append((link.name, got, 2 * pairs))
    report_line(5, not problems,
                "flatness degrees 0/1/4 and constructed links validate for "
                "k <= 3" + (f"; problems: {problems}" if problems else ""))


def test_criterion_6_nash_cone_membership():
    """Numeric membership agrees with the closed-form description on over a
    hundred directions, including the rejected axis and accepted cone rays."""
    cone = ConeSpace.over(latitude_link(Fraction(1, 2)))
    link = cone.link
    tol = 1e-8
    theta, rho = 0.5, math.sqrt(3.0) / 2.0
    directions = [(0.0, 0.0, 1.0), (0.0, 0.0, -1.0)]
    for j in range(32):
        phi = 2.0 * math.pi * j / 32.0
        directions.append((rho * math.cos(phi), rho * math.sin(phi), theta))
    for j in range(8):
        phi = 2.0 * math.pi * j / 8.0
        directions.append((-math.sin(phi), math.cos(phi), 0.0))
    rng = random.Random(SEED)
    while len(directions) < 140:
        v = np.array([rng.gauss(0.0, 1.0) for _ in range(3)])
        v /= np.linalg.norm(v)
        margin = theta * theta * (v[0] ** 2 + v[1] ** 2) - rho * rho * v[2] ** 2
        if abs(margin) < 1e-4:
            continue  # membership is not numerically decidable on the boundary
        directions.append(tuple(v))
    mismatches = []
    for v in directions:
        got = nash_cone_membership(cone, v, tol=tol)
        want = nash_cone_analytic(link, v)
        if got != want:
            mismatches.append((v, got, want))
    axis_ok = not nash_cone_membership(cone, (0.0, 0.0, 1.0), tol=tol)
    rays_ok = all(
        nash_cone_membership(
            cone, (rho * math.cos(p), rho * math.sin(p), theta), tol=tol)
        for p in np.linspace(0, 2 * math.pi, 8, endpoint=False))
    ok = not mismatches and axis_ok and rays_ok
    report_line(6, ok,
                f"{len(directions)} sampled directions agree with the "
                "closed-form membership at tolerance 1e-8 (axis rejected, "
                "cone rays accepted)"
                + ("" if ok else f"; mismatches: {mismatches[:3]}"))


def test_criterion_7_bump_and_partition():
    """Bump bounds and support at ten thousand samples; partition of unity
    sums to one within 1e-12 at a thousand samples."""
    eps = 0.6
    bump = bump_on_cone(eps)
    rs = np.linspace(0.0, 1.5 * eps, 10_000)
    vals = bump(rs)
    bump_ok = (bump(0.0) == 1.0
               and bool(np.all((vals >= 0.0) & (vals <= 1.0)))
               and bool(np.all(vals[rs >= eps] == 0.0)))
    cover = [("cap", Fraction(1, 4)),
             ("annulus", Fraction(1, 8), Fraction(2, 3)),
             ("annulus", Fraction(1, 2), Fraction(1))]
    parts = partition_of_unity(cover)
    grid = np.linspace(0.0, 0.999, 1_000)
    total = sum(f(grid) for f in parts)
    partition_err = float(np.max(np.abs(total - 1.0)))
    nonneg = all(bool(np.all(f(grid) >= 0.0)) for f in parts)
    supported = True
    for f in parts:
        lo, hi = f.support
        outside = grid[(grid < lo) | (grid > hi)]
        if outside.size and not bool(np.all(f(outside) == 0.0)):
            supported = False
    ok = bump_ok and partition_err < 1e-12 and nonneg and supported
    report_line(7, ok,
                f"bump in [0,1] with unit apex value at 10^4 samples; "
                f"partition sum error {partition_err:.2e} < 1e-12 at 10^3 samples")


def test_criterion_8_metric_c1_at_apex():
    """First derivatives of the compatible perturbed metric converge at the
    apex within 1e-6; the sub-quadratic control fails the same check."""
    link = latitude_link(Fraction(1, 2))
    h = CoefficientElement.cos(link.chart, "phi", 2) * Fraction(1, 10)
    good = metric_c1_check(link, h, samples=10_000, tolerance=1e-6)
    control = metric_c1_check(link, h, samples=2_000, tolerance=1e-6,
                              radial_power=1)
    ok = good.passed and not control.passed
    report_line(8, ok,
                f"quadratic perturbation deviation {good.max_deviation:.2e} "
                f"< 1e-6; sub-quadratic control deviation "
                f"{control.max_deviation:.2e} fails as required")
