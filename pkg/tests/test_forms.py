import random
from fractions import Fraction

import pytest

from coneforms.forms import (
    AngleTarget,
    BivectorField,
    ChartMap,
    DifferentialForm,
    VectorField,
)
from coneforms.ring import CoefficientElement, cartesian_chart, cone_chart
from coneforms.symplectic import SymplecticChart, random_element, random_form


@pytest.fixture
def r2():
    return cartesian_chart("r2", ["x", "y"])


@pytest.fixture
def polar():
    return cone_chart("polar", "t", ["phi"])


def covector(chart, name):
    return DifferentialForm.basis_covector(chart, name)


def test_wedge_basis(r2):
    dx, dy = covector(r2, "x"), covector(r2, "y")
    area = dx.wedge(dy)
    assert area.coefficient((0, 1)) == CoefficientElement.one(r2)
    a = dx + dy
    assert a.wedge(a).is_zero


def test_wedge_sign(r2):
    x = CoefficientElement.variable(r2, "x")
    y = CoefficientElement.variable(r2, "y")
    dx, dy = covector(r2, "x"), covector(r2, "y")
    got = (dy * x).wedge(dx * y)
    assert got == dx.wedge(dy) * (-(x * y))


def test_wedge_degree_overflow(r2):
    dx, dy = covector(r2, "x"), covector(r2, "y")
    top = dx.wedge(dy)
    assert top.wedge(dx).is_zero


def test_exterior_derivative_examples(r2, polar):
    x = CoefficientElement.variable(r2, "x")
    y = CoefficientElement.variable(r2, "y")
    dx, dy = covector(r2, "x"), covector(r2, "y")
    assert DifferentialForm.from_function(x * y).exterior_derivative() == \
        dx * y + dy * x
    assert (dy * x).exterior_derivative() == dx.wedge(dy)
    t = CoefficientElement.variable(polar, "t")
    dt, dphi = covector(polar, "t"), covector(polar, "phi")
    assert (dphi * (t * t)).exterior_derivative() == dt.wedge(dphi) * (2 * t)


def test_interior_vector(r2, polar):
    dx, dy = covector(r2, "x"), covector(r2, "y")
    area = dx.wedge(dy)
    ddx = VectorField.basis(r2, "x")
    ddy = VectorField.basis(r2, "y")
    assert area.interior_vector(ddx) == dy
    assert area.interior_vector(ddy) == -dx
    t = CoefficientElement.variable(polar, "t")
    dt, dphi = covector(polar, "t"), covector(polar, "phi")
    v = VectorField.basis(polar, "t") * t
    assert (dt.wedge(dphi) * t).interior_vector(v) == dphi * (t * t)
    f = DifferentialForm.from_function(t)
    assert f.interior_vector(v).is_zero


def test_interior_bivector_conventions(r2):
    # with i(U ^ W) = i_U o i_W, contracting dy ^ dx against dx ^ dy gives +1
    dx, dy = covector(r2, "x"), covector(r2, "y")
    area = dx.wedge(dy)
    g = BivectorField.make(r2, {(1, 0): 1})
    assert g.components == {(0, 1): CoefficientElement.constant(r2, -1)}
    assert area.interior_bivector(g).as_function() == \
        CoefficientElement.one(r2)
    x = CoefficientElement.variable(r2, "x")
    df = DifferentialForm.from_function(x).exterior_derivative()
    assert df.interior_bivector(g).is_zero


def test_full_bivector_contraction_counts_planes():
    for n in (1, 2, 3):
        s = SymplecticChart.standard(n)
        val = s.omega.interior_bivector(s.bivector).as_function()
        assert val == CoefficientElement.constant(s.chart, n)


def test_pullback_polar(r2, polar):
    t = CoefficientElement.variable(polar, "t")
    cphi = CoefficientElement.cos(polar, "phi")
    sphi = CoefficientElement.sin(polar, "phi")
    to_plane = ChartMap.make(polar, r2, {"x": t * cphi, "y": t * sphi})
    area = covector(r2, "x").wedge(covector(r2, "y"))
    dt, dphi = covector(polar, "t"), covector(polar, "phi")
    assert to_plane.pull_form(area) == dt.wedge(dphi) * t


def test_pullback_identity_and_constants(r2):
    ident = ChartMap.identity(r2)
    form = covector(r2, "x").wedge(covector(r2, "y")) * \
        CoefficientElement.variable(r2, "x")
    assert ident.pull_form(form) == form
    const = DifferentialForm.from_function(CoefficientElement.constant(r2, Fraction(7, 3)))
    assert ident.pull_form(const) == const


def test_pullback_angle_target(polar):
    link = cone_chart("polar2", "t", ["phi"])
    doubled = ChartMap.make(
        polar, link,
        {"t": CoefficientElement.variable(polar, "t"),
         "phi": AngleTarget("phi", multiplier=2)})
    c2 = CoefficientElement.cos(link, "phi")
    assert doubled.pull_scalar(c2) == CoefficientElement.cos(polar, "phi", 2)
    dphi = DifferentialForm.basis_covector(link, "phi")
    assert doubled.pull_form(dphi) == DifferentialForm.basis_covector(polar, "phi") * 2


def test_lie_derivative_examples(r2, polar):
    t = CoefficientElement.variable(polar, "t")
    dt, dphi = covector(polar, "t"), covector(polar, "phi")
    v = VectorField.basis(polar, "t") * t
    omega = dt.wedge(dphi) * t
    assert omega.lie_derivative(v) == omega * 2
    x = CoefficientElement.variable(r2, "x")
    ddx = VectorField.basis(r2, "x")
    f = DifferentialForm.from_function(x * x)
    assert f.lie_derivative(ddx).as_function() == ddx.apply(x * x)
    area = covector(r2, "x").wedge(covector(r2, "y"))
    assert (area * x).lie_derivative(ddx) == area


def test_chart_mismatch_rejected(r2, polar):
    dx = covector(r2, "x")
    dt = covector(polar, "t")
    with pytest.raises(ValueError):
        dx.wedge(dt)
    with pytest.raises(ValueError):
        dx.interior_vector(VectorField.basis(polar, "t"))


SEED = 11


def test_graded_commutativity_randomized():
    s = SymplecticChart.standard(2)
    rng = random.Random(SEED)
    for _ in range(60):
        p = rng.randint(0, 3)
        q = rng.randint(0, 3)
        a = random_form(s.chart, p, rng, max_degree=3)
        b = random_form(s.chart, q, rng, max_degree=3)
        sign = -1 if (p * q) % 2 else 1
        assert a.wedge(b) == b.wedge(a) * sign


def test_d_squared_zero_randomized():
    for n in (1, 2):
        s = SymplecticChart.standard(n)
        rng = random.Random(SEED + n)
        for _ in range(200):
            form = random_form(s.chart, rng.randint(0, 2 * n), rng, max_degree=4)
            assert form.exterior_derivative().exterior_derivative().is_zero


def test_leibniz_randomized():
    s = SymplecticChart.standard(1)
    rng = random.Random(SEED)
    for _ in range(80):
        p = rng.randint(0, 2)
        a = random_form(s.chart, p, rng, max_degree=3)
        b = random_form(s.chart, rng.randint(0, 2), rng, max_degree=3)
        lhs = a.wedge(b).exterior_derivative()
        rhs = a.exterior_derivative().wedge(b)
        term = a.wedge(b.exterior_derivative())
        rhs = rhs + (term if p % 2 == 0 else -term)
        assert lhs == rhs


def test_interior_antiderivation_randomized():
    s = SymplecticChart.standard(1)
    rng = random.Random(SEED)
    v = VectorField.make(s.chart, (
        random_element(s.chart, rng, 2), random_element(s.chart, rng, 2)))
    for _ in range(80):
        p = rng.randint(0, 2)
        a = random_form(s.chart, p, rng, max_degree=3)
        b = random_form(s.chart, rng.randint(0, 2), rng, max_degree=3)
        lhs = a.wedge(b).interior_vector(v)
        rhs = a.interior_vector(v).wedge(b)
        term = a.wedge(b.interior_vector(v))
        rhs = rhs + (term if p % 2 == 0 else -term)
        assert lhs == rhs


def test_pullback_commutes_randomized(r2, polar):
    rng = random.Random(SEED)
    t = CoefficientElement.variable(polar, "t")
    cphi = CoefficientElement.cos(polar, "phi")
    sphi = CoefficientElement.sin(polar, "phi")
    to_plane = ChartMap.make(polar, r2, {"x": t * cphi, "y": t * sphi})
    for _ in range(40):
        a = random_form(r2, rng.randint(0, 2), rng, max_degree=3)
        b = random_form(r2, rng.randint(0, 2), rng, max_degree=3)
        assert to_plane.pull_form(a.exterior_derivative()) == \
            to_plane.pull_form(a).exterior_derivative()
        assert to_plane.pull_form(a.wedge(b)) == \
            to_plane.pull_form(a).wedge(to_plane.pull_form(b))


def test_form_text_golden(r2):
    x = CoefficientElement.variable(r2, "x")
    two = covector(r2, "x").wedge(covector(r2, "y")) * x
    assert two.to_text() == "(1*x) dx^dy"
    one = covector(r2, "x") * Fraction(1, 2) + covector(r2, "y") * x
    assert one.to_text() == "(1/2) dx + (1*x) dy"
    with pytest.raises(ValueError):
        two + one
