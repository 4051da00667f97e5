"""Exact scalar functions on coordinate charts.

A chart carries named variables of three kinds: ``cartesian`` (polynomial),
``radial`` (polynomial, nonnegative, at most one per chart) and ``angle``
(periodic).  A :class:`CoefficientElement` is a finite sum of terms

    coeff * x^powers * exp(i * <modes, angles>)

with Gaussian-rational coefficients.  Real-valued elements satisfy the
reality constraint coeff(-modes) == conj(coeff(+modes)); products of cosines
and sines become exact mode convolutions, so every identity in the package
is decidable by structural comparison of canonical term maps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

Rat = Fraction

CARTESIAN = "cartesian"
RADIAL = "radial"
ANGLE = "angle"
_KINDS = (CARTESIAN, RADIAL, ANGLE)


class GaussianRational:
    """Element of Q(i), kept exact through Fraction real/imaginary parts."""

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    def __add__(self, other):
        other = _coerce(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        return GaussianRational(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __mul__(self, other):
        other = _coerce(other)
        return GaussianRational(
            self.re * other.re - self.im * other.im,
            self.re * other.im + self.im * other.re,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return self * GaussianRational(other.re / norm, -other.im / norm)

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __eq__(self, other):
        try:
            other = _coerce(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __bool__(self):
        return self.re != 0 or self.im != 0

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"GaussianRational({self.re!r}, {self.im!r})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}i)"


def _coerce(value) -> GaussianRational:
    if isinstance(value, GaussianRational):
        return value
    if isinstance(value, (int, Fraction)):
        return GaussianRational(value)
    raise TypeError(f"cannot coerce {value!r} to GaussianRational")


QI_ZERO = GaussianRational(0)
QI_ONE = GaussianRational(1)
QI_I = GaussianRational(0, 1)
QI_HALF = GaussianRational(Fraction(1, 2))


@dataclass(frozen=True)
class Chart:
    """Named coordinate chart with an ordered variable list."""

    name: str
    variables: tuple[tuple[str, str], ...]

    def __post_init__(self):
        names = [v for v, _ in self.variables]
        if len(self.variables) < 1:
            raise ValueError("chart needs at least one variable")
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in chart {self.name}")
        kinds = [k for _, k in self.variables]
        for k in kinds:
            if k not in _KINDS:
                raise ValueError(f"unknown variable kind {k!r}")
        if kinds.count(RADIAL) > 1:
            raise ValueError("at most one radial variable per chart")

    @property
    def dimension(self) -> int:
        return len(self.variables)

    @property
    def poly_names(self) -> tuple[str, ...]:
        return tuple(v for v, k in self.variables if k != ANGLE)

    @property
    def angle_names(self) -> tuple[str, ...]:
        return tuple(v for v, k in self.variables if k == ANGLE)

    def var_index(self, name: str) -> int:
        for i, (v, _) in enumerate(self.variables):
            if v == name:
                return i
        raise KeyError(f"no variable {name!r} in chart {self.name}")

    def kind(self, name: str) -> str:
        return self.variables[self.var_index(name)][1]

    def poly_slot(self, name: str) -> int:
        return self.poly_names.index(name)

    def angle_slot(self, name: str) -> int:
        return self.angle_names.index(name)


def cartesian_chart(name: str, var_names: Sequence[str]) -> Chart:
    return Chart(name, tuple((v, CARTESIAN) for v in var_names))


def cone_chart(name: str = "cone", radial: str = "t",
               angles: Sequence[str] = ("phi",)) -> Chart:
    return Chart(name, ((radial, RADIAL),) + tuple((a, ANGLE) for a in angles))


def link_chart(name: str = "link", angles: Sequence[str] = ("phi",)) -> Chart:
    return Chart(name, tuple((a, ANGLE) for a in angles))


Key = tuple[tuple[int, ...], tuple[int, ...]]


@dataclass(frozen=True)
class CoefficientElement:
    """Finite exact term map over a chart, canonical (no stored zeros)."""

    chart: Chart
    terms: dict

    @staticmethod
    def make(chart: Chart, terms: Mapping[Key, GaussianRational]) -> "CoefficientElement":
        clean = {}
        for key, val in terms.items():
            val = _coerce(val)
            if val:
                powers, modes = key
                if any(p < 0 for p in powers):
                    raise ValueError("negative polynomial exponent")
                clean[(tuple(powers), tuple(modes))] = val
        return CoefficientElement(chart, clean)

    @staticmethod
    def zero(chart: Chart) -> "CoefficientElement":
        return CoefficientElement(chart, {})

    @staticmethod
    def constant(chart: Chart, value) -> "CoefficientElement":
        value = _coerce(value)
        if not value:
            return CoefficientElement.zero(chart)
        key = ((0,) * len(chart.poly_names), (0,) * len(chart.angle_names))
        return CoefficientElement(chart, {key: value})

    @staticmethod
    def one(chart: Chart) -> "CoefficientElement":
        return CoefficientElement.constant(chart, 1)

    @staticmethod
    def variable(chart: Chart, name: str) -> "CoefficientElement":
        if chart.kind(name) == ANGLE:
            raise ValueError(f"{name!r} is an angle; angles enter via cos/sin modes")
        powers = [0] * len(chart.poly_names)
        powers[chart.poly_slot(name)] = 1
        key = (tuple(powers), (0,) * len(chart.angle_names))
        return CoefficientElement(chart, {key: QI_ONE})

    @staticmethod
    def fourier(chart: Chart, angle: str, mode: int,
                coeff=QI_ONE) -> "CoefficientElement":
        """Single complex mode coeff * exp(i*mode*angle); not real on its own."""
        coeff = _coerce(coeff)
        if not coeff:
            return CoefficientElement.zero(chart)
        modes = [0] * len(chart.angle_names)
        modes[chart.angle_slot(angle)] = mode
        key = ((0,) * len(chart.poly_names), tuple(modes))
        return CoefficientElement(chart, {key: coeff})

    @staticmethod
    def cos(chart: Chart, angle: str, mode: int = 1) -> "CoefficientElement":
        if mode == 0:
            return CoefficientElement.one(chart)
        return (CoefficientElement.fourier(chart, angle, mode, QI_HALF)
                + CoefficientElement.fourier(chart, angle, -mode, QI_HALF))

    @staticmethod
    def sin(chart: Chart, angle: str, mode: int = 1) -> "CoefficientElement":
        if mode == 0:
            return CoefficientElement.zero(chart)
        half_over_i = GaussianRational(0, Fraction(-1, 2))
        return (CoefficientElement.fourier(chart, angle, mode, half_over_i)
                + CoefficientElement.fourier(chart, angle, -mode, -half_over_i))

    # ----- ring operations -------------------------------------------------

    def _check_chart(self, other: "CoefficientElement"):
        if self.chart is not other.chart and self.chart != other.chart:
            raise ValueError(
                f"chart mismatch: {self.chart.name} vs {other.chart.name}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = CoefficientElement.constant(self.chart, other)
        self._check_chart(other)
        terms = dict(self.terms)
        for key, val in other.terms.items():
            acc = terms.get(key, QI_ZERO) + val
            if acc:
                terms[key] = acc
            else:
                terms.pop(key, None)
        return CoefficientElement(self.chart, terms)

    __radd__ = __add__

    def __neg__(self):
        return CoefficientElement(self.chart, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = CoefficientElement.constant(self.chart, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            val = _coerce(other)
            if not val:
                return CoefficientElement.zero(self.chart)
            return CoefficientElement(
                self.chart, {k: v * val for k, v in self.terms.items()})
        self._check_chart(other)
        terms: dict = {}
        for (p1, m1), v1 in self.terms.items():
            for (p2, m2), v2 in other.terms.items():
                key = (tuple(a + b for a, b in zip(p1, p2)),
                       tuple(a + b for a, b in zip(m1, m2)))
                acc = terms.get(key, QI_ZERO) + v1 * v2
                if acc:
                    terms[key] = acc
                else:
                    terms.pop(key, None)
        return CoefficientElement(self.chart, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers leave the represented ring")
        result = CoefficientElement.one(self.chart)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, GaussianRational)):
            other = CoefficientElement.constant(self.chart, other)
        if not isinstance(other, CoefficientElement):
            return NotImplemented
        return self.chart == other.chart and self.terms == other.terms

    def __hash__(self):
        return hash((self.chart.name, tuple(sorted(self.terms.items()))))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def conjugate(self) -> "CoefficientElement":
        terms = {}
        for (p, m), v in self.terms.items():
            terms[(p, tuple(-b for b in m))] = v.conjugate()
        return CoefficientElement(self.chart, terms)

    def is_real(self) -> bool:
        """Reality constraint: coeff(-modes) == conj(coeff(modes))."""
        for (p, m), v in self.terms.items():
            mirror = self.terms.get((p, tuple(-b for b in m)), QI_ZERO)
            if mirror != v.conjugate():
                return False
        return True

    # ----- calculus --------------------------------------------------------

    def derivative(self, var: str) -> "CoefficientElement":
        kind = self.chart.kind(var)
        terms: dict = {}
        if kind == ANGLE:
            slot = self.chart.angle_slot(var)
            for (p, m), v in self.terms.items():
                b = m[slot]
                if b == 0:
                    continue
                val = v * GaussianRational(0, b)
                acc = terms.get((p, m), QI_ZERO) + val
                if acc:
                    terms[(p, m)] = acc
        else:
            slot = self.chart.poly_slot(var)
            for (p, m), v in self.terms.items():
                e = p[slot]
                if e == 0:
                    continue
                new_p = list(p)
                new_p[slot] = e - 1
                key = (tuple(new_p), m)
                acc = terms.get(key, QI_ZERO) + v * e
                if acc:
                    terms[key] = acc
                else:
                    terms.pop(key, None)
        return CoefficientElement(self.chart, terms)

    def poly_degree(self) -> int:
        """Total degree in the polynomial (cartesian + radial) variables."""
        if not self.terms:
            return 0
        return max(sum(p) for (p, _) in self.terms)

    def max_mode(self) -> int:
        if not self.terms:
            return 0
        return max((max((abs(b) for b in m), default=0) for (_, m) in self.terms),
                   default=0)

    def angle_shift_quarter_turns(self, angle: str, quarters: int) -> "CoefficientElement":
        """Pull back along angle -> angle + quarters * pi/2 (exact in Q(i))."""
        slot = self.chart.angle_slot(angle)
        i_pow = [QI_ONE, QI_I, -QI_ONE, -QI_I]
        terms = {}
        for (p, m), v in self.terms.items():
            phase = i_pow[(m[slot] * quarters) % 4]
            terms[(p, m)] = v * phase
        return CoefficientElement(self.chart, terms)

    # ----- evaluation ------------------------------------------------------

    def evaluate(self, point: Mapping[str, float]) -> float:
        """Numeric value at a point given as {variable name: value}."""
        poly_vals = [float(point[v]) for v in self.chart.poly_names]
        angle_vals = [float(point[v]) for v in self.chart.angle_names]
        total = complex(0.0)
        for (p, m), v in self.terms.items():
            factor = complex(v)
            for base, exp in zip(poly_vals, p):
                if exp:
                    factor *= base ** exp
            phase = sum(b * a for b, a in zip(m, angle_vals))
            if phase:
                factor *= complex(math.cos(phase), math.sin(phase))
            total += factor
        if abs(total.imag) > 1e-9 * (1.0 + abs(total.real)):
            raise ValueError(f"element is not real at {point}: {total}")
        return total.real

    def evaluate_array(self, point: Mapping[str, "object"]):
        """Vectorized evaluation; values in `point` may be numpy arrays."""
        import numpy as np

        shape = None
        for v in point.values():
            arr = np.asarray(v, dtype=float)
            if arr.shape:
                shape = arr.shape
                break
        total = np.zeros(shape or (), dtype=complex)
        poly_vals = [np.asarray(point[v], dtype=float) for v in self.chart.poly_names]
        angle_vals = [np.asarray(point[v], dtype=float) for v in self.chart.angle_names]
        for (p, m), v in self.terms.items():
            factor = complex(v) * np.ones(shape or (), dtype=complex)
            for base, exp in zip(poly_vals, p):
                if exp:
                    factor = factor * base ** exp
            phase = sum((b * a for b, a in zip(m, angle_vals) if b), 0)
            if isinstance(phase, np.ndarray) or phase:
                factor = factor * np.exp(1j * phase)
            total = total + factor
        return total.real

    # ----- presentation ----------------------------------------------------

    def sorted_terms(self) -> list[tuple[Key, GaussianRational]]:
        return sorted(self.terms.items(), key=lambda kv: (kv[0][0], kv[0][1]))

    def to_text(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (p, m), v in self.sorted_terms():
            factors = [str(v)]
            for name, exp in zip(self.chart.poly_names, p):
                if exp == 1:
                    factors.append(name)
                elif exp:
                    factors.append(f"{name}^{exp}")
            for name, b in zip(self.chart.angle_names, m):
                if b:
                    factors.append(f"e(i{b}{name})")
            parts.append("*".join(factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"<{self.chart.name}: {self.to_text()}>"
