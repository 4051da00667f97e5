"""Differential forms, vector and bivector fields, and exterior calculus.

Forms are stored antisymmetrically on strictly increasing index tuples with
:class:`~coneforms.ring.CoefficientElement` coefficients, so equality of the
canonical representations is exact structural comparison.

Sign conventions, fixed once and used everywhere:

* interior product of a vector field is the degree -1 antiderivation with
  i_V(dx) = V(x);
* interior product of a decomposable bivector U ^ W acts as
  i(U ^ W) = i_U o i_W (contract by W first, then U).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .ring import (
    ANGLE,
    Chart,
    CoefficientElement,
    GaussianRational,
    QI_ZERO,
)

Scalar = Union[int, Fraction, GaussianRational]


def _merge_indices(left: tuple[int, ...], right: tuple[int, ...]):
    """Merge two strictly increasing tuples; return (sign, merged) or None."""
    merged = []
    sign = 1
    i = j = 0
    while i < len(left) and j < len(right):
        a, b = left[i], right[j]
        if a == b:
            return None
        if a < b:
            merged.append(a)
            i += 1
        else:
            # b jumps over the remaining len(left) - i entries of `left`
            if (len(left) - i) % 2:
                sign = -sign
            merged.append(b)
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return sign, tuple(merged)


def _insert_index(idx: int, indices: tuple[int, ...]):
    return _merge_indices((idx,), indices)


@dataclass(frozen=True)
class DifferentialForm:
    chart: Chart
    degree: int
    components: dict

    @staticmethod
    def make(chart: Chart, degree: int,
             components: Mapping[tuple[int, ...], CoefficientElement]) -> "DifferentialForm":
        if degree < 0:
            raise ValueError("form degree must be nonnegative")
        clean = {}
        for idx, coeff in components.items():
            idx = tuple(idx)
            if len(idx) != degree:
                raise ValueError(f"index tuple {idx} has wrong length for degree {degree}")
            if list(idx) != sorted(set(idx)):
                raise ValueError(f"index tuple {idx} must be strictly increasing")
            if any(i < 0 or i >= chart.dimension for i in idx):
                raise ValueError(f"index {idx} out of range for chart {chart.name}")
            if not coeff.is_zero:
                clean[idx] = coeff
        return DifferentialForm(chart, degree, clean)

    @staticmethod
    def zero(chart: Chart, degree: int = 0) -> "DifferentialForm":
        return DifferentialForm(chart, degree, {})

    @staticmethod
    def from_function(f: CoefficientElement) -> "DifferentialForm":
        return DifferentialForm.make(f.chart, 0, {(): f})

    @staticmethod
    def basis_covector(chart: Chart, var: str) -> "DifferentialForm":
        return DifferentialForm.make(
            chart, 1, {(chart.var_index(var),): CoefficientElement.one(chart)})

    # ----- linear structure --------------------------------------------------

    def _check(self, other: "DifferentialForm"):
        if self.chart != other.chart:
            raise ValueError(
                f"chart mismatch: {self.chart.name} vs {other.chart.name}")

    def __add__(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        if self.degree != other.degree:
            if not self.components:
                return other
            if not other.components:
                return self
            raise ValueError("cannot add forms of different degrees")
        comps = dict(self.components)
        for idx, c in other.components.items():
            acc = comps.get(idx)
            acc = c if acc is None else acc + c
            if acc.is_zero:
                comps.pop(idx, None)
            else:
                comps[idx] = acc
        return DifferentialForm(self.chart, self.degree, comps)

    def __neg__(self):
        return DifferentialForm(self.chart, self.degree,
                                {i: -c for i, c in self.components.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, scalar) -> "DifferentialForm":
        comps = {i: c * scalar for i, c in self.components.items()}
        return DifferentialForm.make(self.chart, self.degree, comps)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, DifferentialForm):
            return NotImplemented
        if self.chart != other.chart:
            return False
        if not self.components and not other.components:
            # the zero form is degree-ambiguous
            return True
        return self.degree == other.degree and self.components == other.components

    @property
    def is_zero(self) -> bool:
        return not self.components

    def coefficient(self, indices: Sequence[int]) -> CoefficientElement:
        return self.components.get(tuple(indices),
                                   CoefficientElement.zero(self.chart))

    def as_function(self) -> CoefficientElement:
        if self.degree != 0:
            raise ValueError("not a 0-form")
        return self.coefficient(())

    # ----- exterior calculus --------------------------------------------------

    def wedge(self, other: "DifferentialForm") -> "DifferentialForm":
        self._check(other)
        degree = self.degree + other.degree
        if degree > self.chart.dimension:
            return DifferentialForm.zero(self.chart, degree)
        comps: dict = {}
        for i1, c1 in self.components.items():
            for i2, c2 in other.components.items():
                merged = _merge_indices(i1, i2)
                if merged is None:
                    continue
                sign, idx = merged
                term = c1 * c2
                if sign < 0:
                    term = -term
                acc = comps.get(idx)
                acc = term if acc is None else acc + term
                if acc.is_zero:
                    comps.pop(idx, None)
                else:
                    comps[idx] = acc
        return DifferentialForm(self.chart, degree, comps)

    def exterior_derivative(self) -> "DifferentialForm":
        chart = self.chart
        comps: dict = {}
        for idx, c in self.components.items():
            for v, (name, _) in enumerate(chart.variables):
                if v in idx:
                    continue
                dc = c.derivative(name)
                if dc.is_zero:
                    continue
                sign, new_idx = _insert_index(v, idx)
                term = dc if sign > 0 else -dc
                acc = comps.get(new_idx)
                acc = term if acc is None else acc + term
                if acc.is_zero:
                    comps.pop(new_idx, None)
                else:
                    comps[new_idx] = acc
        return DifferentialForm(chart, self.degree + 1, comps)

    def interior_vector(self, v: "VectorField") -> "DifferentialForm":
        if v.chart != self.chart:
            raise ValueError("chart mismatch in interior product")
        if self.degree == 0:
            return DifferentialForm.zero(self.chart, 0)
        comps: dict = {}
        for idx, c in self.components.items():
            for pos, var_idx in enumerate(idx):
                comp = v.components[var_idx]
                if comp.is_zero:
                    continue
                term = c * comp
                if pos % 2:
                    term = -term
                new_idx = idx[:pos] + idx[pos + 1:]
                acc = comps.get(new_idx)
                acc = term if acc is None else acc + term
                if acc.is_zero:
                    comps.pop(new_idx, None)
                else:
                    comps[new_idx] = acc
        return DifferentialForm(self.chart, self.degree - 1, comps)

    def interior_bivector(self, g: "BivectorField") -> "DifferentialForm":
        if g.chart != self.chart:
            raise ValueError("chart mismatch in interior product")
        if self.degree < 2:
            return DifferentialForm.zero(self.chart, max(self.degree - 2, 0))
        result = DifferentialForm.zero(self.chart, self.degree - 2)
        for (i, j), coeff in g.components.items():
            contracted = (self
                          .interior_vector(VectorField.basis(self.chart, j))
                          .interior_vector(VectorField.basis(self.chart, i)))
            result = result + contracted * coeff
        return result

    def lie_derivative(self, v: "VectorField") -> "DifferentialForm":
        """Cartan formula d(i_V a) + i_V(da)."""
        return (self.interior_vector(v).exterior_derivative()
                + self.exterior_derivative().interior_vector(v))

    # ----- presentation --------------------------------------------------------

    def to_text(self) -> str:
        if not self.components:
            return "0"
        names = [v for v, _ in self.chart.variables]
        parts = []
        for idx in sorted(self.components):
            basis = "^".join(f"d{names[i]}" for i in idx) or "1"
            parts.append(f"({self.components[idx].to_text()}) {basis}")
        return " + ".join(parts)

    def __repr__(self):
        return f"<form deg {self.degree} on {self.chart.name}: {self.to_text()}>"


@dataclass(frozen=True)
class VectorField:
    chart: Chart
    components: tuple

    @staticmethod
    def make(chart: Chart, components: Sequence[CoefficientElement]) -> "VectorField":
        comps = tuple(components)
        if len(comps) != chart.dimension:
            raise ValueError("component count must equal chart dimension")
        return VectorField(chart, comps)

    @staticmethod
    def basis(chart: Chart, var: Union[int, str]) -> "VectorField":
        idx = var if isinstance(var, int) else chart.var_index(var)
        comps = [CoefficientElement.zero(chart)] * chart.dimension
        comps[idx] = CoefficientElement.one(chart)
        return VectorField(chart, tuple(comps))

    def __mul__(self, scalar) -> "VectorField":
        return VectorField(self.chart, tuple(c * scalar for c in self.components))

    __rmul__ = __mul__

    def apply(self, f: CoefficientElement) -> CoefficientElement:
        """Directional derivative V(f)."""
        total = CoefficientElement.zero(self.chart)
        for comp, (name, _) in zip(self.components, self.chart.variables):
            if not comp.is_zero:
                total = total + comp * f.derivative(name)
        return total


@dataclass(frozen=True)
class BivectorField:
    chart: Chart
    components: dict

    @staticmethod
    def make(chart: Chart,
             components: Mapping[tuple[int, int], CoefficientElement]) -> "BivectorField":
        clean = {}
        for (i, j), c in components.items():
            if isinstance(c, (int, Fraction, GaussianRational)):
                c = CoefficientElement.constant(chart, c)
            if i == j:
                raise ValueError("bivector indices must differ")
            if i > j:
                i, j, c = j, i, -c
            acc = clean.get((i, j))
            acc = c if acc is None else acc + c
            if acc.is_zero:
                clean.pop((i, j), None)
            else:
                clean[(i, j)] = acc
        return BivectorField(chart, clean)


# ----- chart maps and pullback ------------------------------------------------


@dataclass(frozen=True)
class AngleTarget:
    """Assignment of a target angle as multiplier*source_angle + quarters*pi/2."""

    source_angle: str
    multiplier: int = 1
    quarter_turns: int = 0


@dataclass(frozen=True)
class ChartMap:
    """Map source -> target given by one assignment per target variable.

    Cartesian and radial targets take arbitrary elements of the source ring;
    angle targets take an :class:`AngleTarget` so that exp(i b phi_target)
    stays inside the Gaussian-rational Fourier ring.
    """

    source: Chart
    target: Chart
    assignments: dict

    @staticmethod
    def make(source: Chart, target: Chart, assignments: Mapping) -> "ChartMap":
        clean = {}
        for name, kind in target.variables:
            if name not in assignments:
                raise ValueError(f"missing assignment for target variable {name!r}")
            value = assignments[name]
            if kind == ANGLE:
                if not isinstance(value, AngleTarget):
                    raise ValueError(
                        f"angle variable {name!r} needs an AngleTarget assignment")
                source.angle_slot(value.source_angle)
            else:
                if not isinstance(value, CoefficientElement):
                    raise ValueError(
                        f"variable {name!r} needs a CoefficientElement assignment")
                if value.chart != source:
                    raise ValueError("assignment lives on the wrong chart")
            clean[name] = value
        return ChartMap(source, target, clean)

    @staticmethod
    def identity(chart: Chart) -> "ChartMap":
        assignments = {}
        for name, kind in chart.variables:
            if kind == ANGLE:
                assignments[name] = AngleTarget(name)
            else:
                assignments[name] = CoefficientElement.variable(chart, name)
        return ChartMap.make(chart, chart, assignments)

    @staticmethod
    def linear(source: Chart, target: Chart, matrix) -> "ChartMap":
        """Target variable i  ->  sum_j matrix[i][j] * source variable j."""
        assignments = {}
        for i, (name, _) in enumerate(target.variables):
            total = CoefficientElement.zero(source)
            for j, (src_name, _) in enumerate(source.variables):
                total = total + CoefficientElement.variable(source, src_name) * matrix[i][j]
            assignments[name] = total
        return ChartMap.make(source, target, assignments)

    def pull_scalar(self, f: CoefficientElement) -> CoefficientElement:
        if f.chart != self.target:
            raise ValueError("element does not live on the target chart")
        source = self.source
        i_pow = [GaussianRational(1), GaussianRational(0, 1),
                 GaussianRational(-1), GaussianRational(0, -1)]
        power_cache: dict = {}

        def poly_power(name: str, exp: int) -> CoefficientElement:
            key = (name, exp)
            if key not in power_cache:
                power_cache[key] = self.assignments[name] ** exp
            return power_cache[key]

        total = CoefficientElement.zero(source)
        for (p, m), v in f.terms.items():
            term = CoefficientElement.constant(source, v)
            for name, exp in zip(self.target.poly_names, p):
                if exp:
                    term = term * poly_power(name, exp)
            for name, b in zip(self.target.angle_names, m):
                if b:
                    at: AngleTarget = self.assignments[name]
                    phase = i_pow[(b * at.quarter_turns) % 4]
                    term = term * CoefficientElement.fourier(
                        source, at.source_angle, b * at.multiplier, phase)
            total = total + term
        return total

    def pull_covector(self, var_idx: int) -> DifferentialForm:
        """Pullback of d(target variable)."""
        name, kind = self.target.variables[var_idx]
        value = self.assignments[name]
        if kind == ANGLE:
            base = DifferentialForm.basis_covector(self.source, value.source_angle)
            return base * Fraction(value.multiplier)
        return DifferentialForm.from_function(value).exterior_derivative()

    def pull_form(self, a: DifferentialForm) -> DifferentialForm:
        if a.chart != self.target:
            raise ValueError("form does not live on the target chart")
        result = DifferentialForm.zero(self.source, a.degree)
        for idx, c in a.components.items():
            term = DifferentialForm.from_function(self.pull_scalar(c))
            for i in idx:
                term = term.wedge(self.pull_covector(i))
            result = result + term
        return result


# ----- module level operation aliases -------------------------------------------


def wedge(a: DifferentialForm, b: DifferentialForm) -> DifferentialForm:
    return a.wedge(b)


def exterior_derivative(a: DifferentialForm) -> DifferentialForm:
    return a.exterior_derivative()


def interior_vector(v: VectorField, a: DifferentialForm) -> DifferentialForm:
    return a.interior_vector(v)


def interior_bivector(g: BivectorField, a: DifferentialForm) -> DifferentialForm:
    return a.interior_bivector(g)


def lie_derivative(v: VectorField, a: DifferentialForm) -> DifferentialForm:
    return a.lie_derivative(v)


def pullback(chart_map: ChartMap, a: DifferentialForm) -> DifferentialForm:
    return chart_map.pull_form(a)
