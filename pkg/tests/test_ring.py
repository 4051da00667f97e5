import random
from fractions import Fraction

import pytest

from coneforms.ring import (
    CoefficientElement,
    Chart,
    GaussianRational,
    cartesian_chart,
    cone_chart,
    link_chart,
)


@pytest.fixture
def r2():
    return cartesian_chart("r2", ["x", "y"])


@pytest.fixture
def polar():
    return cone_chart("polar", "t", ["phi"])


def test_gaussian_rational_arithmetic():
    a = GaussianRational(Fraction(1, 2), Fraction(1, 3))
    b = GaussianRational(2, -1)
    assert a + b == GaussianRational(Fraction(5, 2), Fraction(-2, 3))
    assert a * b == GaussianRational(Fraction(4, 3), Fraction(1, 6))
    assert (a / a) == GaussianRational(1)
    assert a.conjugate().conjugate() == a
    with pytest.raises(ZeroDivisionError):
        a / GaussianRational(0)


def test_chart_validation():
    with pytest.raises(ValueError):
        Chart("bad", (("x", "cartesian"), ("x", "radial")))
    with pytest.raises(ValueError):
        Chart("bad", (("t", "radial"), ("s", "radial")))
    with pytest.raises(ValueError):
        Chart("bad", ())
    chart = cone_chart("c", "t", ["phi"])
    assert chart.dimension == 2
    assert chart.poly_names == ("t",)
    assert chart.angle_names == ("phi",)


def test_ring_operations(r2):
    x = CoefficientElement.variable(r2, "x")
    y = CoefficientElement.variable(r2, "y")
    assert (x + y) * (x - y) == x * x - y * y
    assert (x + y) ** 2 == x * x + 2 * x * y + y * y
    assert (x - x).is_zero
    assert x * 0 == CoefficientElement.zero(r2)


def test_no_stored_zeros(r2):
    x = CoefficientElement.variable(r2, "x")
    z = x - x
    assert z.terms == {}
    # canonicalization is idempotent
    again = CoefficientElement.make(r2, z.terms)
    assert again == z
    rebuilt = CoefficientElement.make(r2, (x * x).terms)
    assert rebuilt == x * x
    assert CoefficientElement.make(r2, rebuilt.terms) == rebuilt


def test_negative_exponent_rejected(r2):
    with pytest.raises(ValueError):
        CoefficientElement.make(r2, {((-1, 0), ()): GaussianRational(1)})


def test_trig_identities(polar):
    c = CoefficientElement.cos(polar, "phi")
    s = CoefficientElement.sin(polar, "phi")
    one = CoefficientElement.one(polar)
    assert c * c + s * s == one
    # double angle: cos(2p) = c^2 - s^2, sin(2p) = 2cs
    assert c * c - s * s == CoefficientElement.cos(polar, "phi", 2)
    assert 2 * c * s == CoefficientElement.sin(polar, "phi", 2)
    assert c.is_real() and s.is_real() and (c * s).is_real()


def test_reality_constraint(polar):
    bare = CoefficientElement.fourier(polar, "phi", 1)
    assert not bare.is_real()
    assert (bare + bare.conjugate()).is_real()


def test_derivative(polar):
    t = CoefficientElement.variable(polar, "t")
    c = CoefficientElement.cos(polar, "phi")
    s = CoefficientElement.sin(polar, "phi")
    f = t * t * c
    assert f.derivative("t") == 2 * t * c
    assert f.derivative("phi") == -(t * t * s)
    assert CoefficientElement.cos(polar, "phi", 3).derivative("phi") == \
        -3 * CoefficientElement.sin(polar, "phi", 3)


def test_angle_shift(polar):
    c = CoefficientElement.cos(polar, "phi")
    s = CoefficientElement.sin(polar, "phi")
    # quarter turn: cos -> -sin, sin -> cos
    assert c.angle_shift_quarter_turns("phi", 1) == -s
    assert s.angle_shift_quarter_turns("phi", 1) == c
    # half turn flips mode-1 signs
    assert c.angle_shift_quarter_turns("phi", 2) == -c


def test_evaluate(polar):
    import math

    t = CoefficientElement.variable(polar, "t")
    c = CoefficientElement.cos(polar, "phi")
    f = t * t * c + 3
    val = f.evaluate({"t": 2.0, "phi": math.pi / 3})
    assert abs(val - (4 * 0.5 + 3)) < 1e-12


def test_serialization_deterministic(r2):
    rng = random.Random(3)
    x = CoefficientElement.variable(r2, "x")
    y = CoefficientElement.variable(r2, "y")
    f = CoefficientElement.zero(r2)
    for _ in range(6):
        f = f + x ** rng.randint(0, 3) * y ** rng.randint(0, 3) * \
            Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    assert f.to_text() == f.to_text()
    golden = (x * x * y * Fraction(3, 2) - y + 1).to_text()
    assert golden == "1 + -1*y + 3/2*x^2*y"
