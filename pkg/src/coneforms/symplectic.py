"""Symplectic charts, the Poisson bracket, the Koszul-Brylinski boundary
and the symplectic star operator, all in exact arithmetic.

The bracket orientation follows from the single bivector-contraction
convention fixed in :mod:`coneforms.forms`; with it {x_i, y_i} = +1 and the
full contraction of the standard bivector against the standard symplectic
form equals n.  Every identity verified here is covariant under flipping
that convention.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .forms import BivectorField, ChartMap, DifferentialForm
from .ring import CoefficientElement, Chart, GaussianRational, cartesian_chart


@dataclass(frozen=True)
class SymplecticChart:
    """R^{2n} with paired variables (x_i, y_i), standard form and bivector."""

    chart: Chart
    n: int
    omega: DifferentialForm
    bivector: BivectorField
    volume: DifferentialForm

    @staticmethod
    def standard(n: int, name: str | None = None) -> "SymplecticChart":
        if n < 1:
            raise ValueError("need n >= 1")
        names = []
        for i in range(1, n + 1):
            names.extend([f"x{i}", f"y{i}"])
        chart = cartesian_chart(name or f"r{2 * n}", names)
        omega = DifferentialForm.zero(chart, 2)
        for i in range(n):
            dx = DifferentialForm.basis_covector(chart, f"x{i + 1}")
            dy = DifferentialForm.basis_covector(chart, f"y{i + 1}")
            omega = omega + dx.wedge(dy)
        bivector = BivectorField.make(
            chart, {(2 * i, 2 * i + 1): -1 for i in range(n)})
        volume = _wedge_power(omega, n) * Fraction(1, _factorial(n))
        sc = SymplecticChart(chart, n, omega, bivector, volume)
        if not omega.exterior_derivative().is_zero:
            raise AssertionError("standard form must be closed")
        top = _wedge_power(omega, n)
        if top != volume * Fraction(_factorial(n)):
            raise AssertionError("omega^n must equal n! * volume")
        if volume.coefficient(tuple(range(2 * n))).is_zero:
            raise AssertionError("volume form must be nowhere zero")
        return sc

    @property
    def dimension(self) -> int:
        return 2 * self.n


def _factorial(n: int) -> int:
    out = 1
    for k in range(2, n + 1):
        out *= k
    return out


def _wedge_power(a: DifferentialForm, n: int) -> DifferentialForm:
    out = DifferentialForm.from_function(CoefficientElement.one(a.chart))
    for _ in range(n):
        out = out.wedge(a)
    return out


def poisson_bracket(f: CoefficientElement, g: CoefficientElement,
                    s: SymplecticChart) -> CoefficientElement:
    """{f, g} = full contraction of the bivector against df ^ dg."""
    if f.chart != s.chart or g.chart != s.chart:
        raise ValueError("bracket arguments must live on the symplectic chart")
    df = DifferentialForm.from_function(f).exterior_derivative()
    dg = DifferentialForm.from_function(g).exterior_derivative()
    return df.wedge(dg).interior_bivector(s.bivector).as_function()


def brylinski_delta(a: DifferentialForm, s: SymplecticChart) -> DifferentialForm:
    """Degree -1 boundary i(G) d - d i(G)."""
    if a.chart != s.chart:
        raise ValueError("form must live on the symplectic chart")
    first = a.exterior_derivative().interior_bivector(s.bivector)
    second = a.interior_bivector(s.bivector).exterior_derivative()
    return first - second


def delta_bracket_formula(f0: CoefficientElement,
                          fs: list[CoefficientElement],
                          s: SymplecticChart) -> DifferentialForm:
    """Independent route to the boundary of f0 df_1 ^ ... ^ df_p.

    Evaluates the classical bracket expansion: a first sum of
    (-1)^(i+1) {f0, f_i} with df_i omitted, and a second sum of
    (-1)^(i+j) f0 d{f_i, f_j} wedged in front with df_i, df_j omitted.
    """
    chart = s.chart
    p = len(fs)
    d_of = [DifferentialForm.from_function(f).exterior_derivative() for f in fs]

    def wedge_omit(skip: set[int]) -> DifferentialForm:
        out = DifferentialForm.from_function(CoefficientElement.one(chart))
        for k in range(p):
            if k not in skip:
                out = out.wedge(d_of[k])
        return out

    total = DifferentialForm.zero(chart, max(p - 1, 0))
    for i in range(p):
        coeff = poisson_bracket(f0, fs[i], s)
        term = wedge_omit({i}) * coeff
        if i % 2:
            term = -term
        total = total + term
    for i, j in itertools.combinations(range(p), 2):
        br = poisson_bracket(fs[i], fs[j], s)
        dbr = DifferentialForm.from_function(br).exterior_derivative() * f0
        term = dbr.wedge(wedge_omit({i, j}))
        if (i + j) % 2:
            term = -term
        total = total + term
    return total


# ----- symplectic star ---------------------------------------------------------

_STAR_CACHE: dict = {}


def _pairing_matrix(s: SymplecticChart):
    """Matrix of the induced pairing on basis covectors."""
    dim = s.dimension
    pairing = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        for j in range(dim):
            if i == j:
                continue
            two_form = DifferentialForm.make(
                s.chart, 2,
                {(min(i, j), max(i, j)):
                 CoefficientElement.constant(s.chart, 1 if i < j else -1)})
            val = two_form.interior_bivector(s.bivector).as_function()
            pairing[i][j] = _as_fraction(val)
    return pairing


def _as_fraction(f: CoefficientElement) -> Fraction:
    if f.is_zero:
        return Fraction(0)
    if len(f.terms) != 1:
        raise ValueError("expected a constant element")
    ((p, m), v), = f.terms.items()
    if any(p) or any(m) or not v.is_real:
        raise ValueError("expected a rational constant element")
    return v.re


def _det(rows) -> Fraction:
    n = len(rows)
    if n == 0:
        return Fraction(1)
    total = Fraction(0)
    for perm in itertools.permutations(range(n)):
        sign = 1
        seen = list(perm)
        for i in range(n):
            for j in range(i + 1, n):
                if seen[i] > seen[j]:
                    sign = -sign
        prod = Fraction(1)
        for i in range(n):
            prod *= rows[i][perm[i]]
            if prod == 0:
                break
        total += sign * prod
    return total


def induced_pairing(s: SymplecticChart, left: tuple[int, ...],
                    right: tuple[int, ...]) -> Fraction:
    """Determinant extension of the covector pairing to degree-p monomials."""
    pairing = _star_tables(s)["pairing"]
    return _det([[pairing[i][j] for j in right] for i in left])


def _complement_sign(indices: tuple[int, ...], dim: int):
    comp = tuple(sorted(set(range(dim)) - set(indices)))
    perm = list(indices) + list(comp)
    sign = 1
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                sign = -sign
    return sign, comp


def _star_tables(s: SymplecticChart):
    key = (s.chart.name, s.n)
    if key not in _STAR_CACHE:
        dim = s.dimension
        pairing = _pairing_matrix(s)
        table: dict = {"pairing": pairing}
        vol_coeff = _as_fraction(s.volume.coefficient(tuple(range(dim))))
        for p in range(dim + 1):
            for target in itertools.combinations(range(dim), p):
                image: dict = {}
                for probe in itertools.combinations(range(dim), p):
                    val = _det([[pairing[i][j] for j in target] for i in probe])
                    if val == 0:
                        continue
                    sign, comp = _complement_sign(probe, dim)
                    image[comp] = image.get(comp, Fraction(0)) \
                        + val * vol_coeff / sign
                table[target] = {c: v for c, v in image.items() if v}
        _STAR_CACHE[key] = table
    return _STAR_CACHE[key]


def symplectic_star(a: DifferentialForm, s: SymplecticChart) -> DifferentialForm:
    """Pointwise star determined by beta ^ *a = <beta, a> vol on basis forms."""
    if a.chart != s.chart:
        raise ValueError("form must live on the symplectic chart")
    table = _star_tables(s)
    dim = s.dimension
    out = DifferentialForm.zero(s.chart, dim - a.degree)
    for idx, coeff in a.components.items():
        for comp, val in table[idx].items():
            out = out + DifferentialForm.make(s.chart, dim - a.degree,
                                              {comp: coeff * val})
    return out


def star_delta_identity_check(a: DifferentialForm, s: SymplecticChart) -> bool:
    """delta a == (-1)^(deg a + 1) * d * a, exactly."""
    lhs = brylinski_delta(a, s)
    rhs = symplectic_star(symplectic_star(a, s).exterior_derivative(), s)
    if a.degree % 2 == 0:
        rhs = -rhs
    return lhs == rhs


# ----- finite symplectic group actions -------------------------------------------


@dataclass(frozen=True)
class GroupAction:
    """Cyclic linear action generated by an exact symplectic matrix."""

    order: int
    generator: tuple
    symplectic: SymplecticChart

    @staticmethod
    def make(order: int, matrix, s: SymplecticChart) -> "GroupAction":
        if order < 1:
            raise ValueError("order must be >= 1")
        dim = s.dimension
        gen = tuple(tuple(Fraction(v) for v in row) for row in matrix)
        if len(gen) != dim or any(len(row) != dim for row in gen):
            raise ValueError("generator size must match the chart dimension")
        power = _mat_identity(dim)
        for _ in range(order):
            power = _mat_mul(gen, power)
        if power != _mat_identity(dim):
            raise ValueError("generator does not have the stated order")
        action = GroupAction(order, gen, s)
        if action.pullback_form(s.omega) != s.omega:
            raise ValueError("generator does not preserve the symplectic form")
        return action

    def chart_map(self, power: int = 1) -> ChartMap:
        mat = _mat_identity(self.symplectic.dimension)
        for _ in range(power % self.order):
            mat = _mat_mul(self.generator, mat)
        return ChartMap.linear(self.symplectic.chart, self.symplectic.chart, mat)

    def pullback_form(self, a: DifferentialForm, power: int = 1) -> DifferentialForm:
        return self.chart_map(power).pull_form(a)

    def average_form(self, a: DifferentialForm) -> DifferentialForm:
        total = DifferentialForm.zero(a.chart, a.degree)
        for j in range(self.order):
            total = total + self.pullback_form(a, j)
        return total * Fraction(1, self.order)


def _mat_identity(n):
    return tuple(tuple(Fraction(1) if i == j else Fraction(0) for j in range(n))
                 for i in range(n))


def _mat_mul(a, b):
    n = len(a)
    return tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
                 for i in range(n))


def cyclic_symplectic_generator(k: int) -> list[list[Fraction]]:
    """Exact order-k area-preserving matrix on the plane.

    Rational matrices of finite order exist only for k in {1, 2, 3, 4, 6};
    for k in {3, 6} the matrix is the integer companion model, linearly
    conjugate to the rotation by 2 pi / k and with the same invariants.
    """
    table = {
        1: [[1, 0], [0, 1]],
        2: [[-1, 0], [0, -1]],
        3: [[0, -1], [1, -1]],
        4: [[0, -1], [1, 0]],
        6: [[0, -1], [1, 1]],
    }
    if k not in table:
        raise ValueError(
            f"no exact rational planar rotation model of order {k}; "
            "supported orders are 1, 2, 3, 4, 6")
    return [[Fraction(v) for v in row] for row in table[k]]


def cyclic_plane_action(k: int, s: SymplecticChart | None = None) -> GroupAction:
    s = s or SymplecticChart.standard(1)
    if s.n != 1:
        raise ValueError("cyclic plane action lives on the 2-dimensional chart")
    return GroupAction.make(k, cyclic_symplectic_generator(k), s)


# ----- seeded random form generation ----------------------------------------------


def random_element(chart: Chart, rng: random.Random, max_degree: int = 6,
                   terms: int = 4) -> CoefficientElement:
    """Random polynomial with small rational coefficients (cartesian charts)."""
    n = len(chart.poly_names)
    out = CoefficientElement.zero(chart)
    for _ in range(terms):
        degree = rng.randint(0, max_degree)
        powers = [0] * n
        for _ in range(degree):
            powers[rng.randrange(n)] += 1
        coeff = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        key = (tuple(powers), (0,) * len(chart.angle_names))
        out = out + CoefficientElement.make(
            chart, {key: GaussianRational(coeff)})
    return out


def random_form(chart: Chart, degree: int, rng: random.Random,
                max_degree: int = 6, terms_per_component: int = 3) -> DifferentialForm:
    comps = {}
    indices = list(itertools.combinations(range(chart.dimension), degree))
    rng.shuffle(indices)
    for idx in indices[: max(1, len(indices) * 2 // 3)]:
        comps[idx] = random_element(chart, rng, max_degree, terms_per_component)
    return DifferentialForm.make(chart, degree, comps)
