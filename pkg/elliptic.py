#!/usr/bin/env python3
"""
Elliptic Genera of Toric Pairs

Truncated q-series with exact rational-function coefficients, the normalized
theta function

    theta(x) = (xi^(1/2) - xi^(-1/2)) * prod_{n=1..Q} (1 - q^n xi)(1 - q^n / xi),

divisor factors of pairs, and two independent evaluations of the elliptic
genus of a toric pair (X, D):

- ell_smooth_pair integrates Chern-root and divisor factors expanded to
  degree 2 in nilpotent classes over the intersection ring, with a closed
  factor and addend for every coefficient -1 divisor;
- ell_toric_equivariant localizes at torus-fixed points; orbifold sectors
  (g, h) of a finite G inside the torus come from shifted arguments
  x - h*tau, and the g-twists project every sector onto G-invariant
  characters.

Variables: Y = y (elliptic), Z and X = torus characters (Z doubles as
e^x in the class expansion), S = y^eps for null-perturbations.
ell_perturbed_limit and the localization handle coefficient -1 by perturbing
a -> a + eps*b and taking S -> 1 per q-coefficient.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, lcm
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy as sp

from dualgraph import is_admissible
from errors import (
    InvalidFan,
    MinusOneCoefficient,
    NonAbelianGroup,
    NotAdmissible,
    NotCalabiYau,
    SchemaError,
    ZeroDenominator,
)
from exact import (
    ONE,
    ZERO,
    LaurentPoly,
    RatExpr,
    as_rational,
    canonicalize_pair,
    evaluate_at,
    limit_at_one,
    negate_variable,
    render,
)
from toric import (
    Fan2D,
    ToricPair,
    fixed_point_data,
    is_cy_pair,
    pair_graph,
    pairing,
    self_intersections,
    toric_null_perturbation,
)

logger = logging.getLogger(__name__)

ELLIPTIC_VARIABLE = 'Y'
CLASS_VARIABLE = 'Z'
TORUS_VARIABLES = ('Z', 'X')
PERTURBATION_VARIABLE = 'S'


def _as_expr(value) -> RatExpr:
    return value if isinstance(value, RatExpr) else RatExpr.constant(value)


@dataclass(frozen=True, eq=False)
class QSeries:
    """sum_k coefficients[k] q^(k/scale) truncated after q^order"""
    order: int
    coefficients: Tuple[RatExpr, ...] = ()
    scale: int = 1

    def __post_init__(self):
        if self.order < 0:
            raise ValueError(f"negative q-order {self.order}")
        size = self.order * self.scale + 1
        coeffs = tuple(_as_expr(c) for c in self.coefficients[:size])
        object.__setattr__(self, 'coefficients', coeffs + (ZERO,) * (size - len(coeffs)))

    @classmethod
    def constant(cls, value, order: int) -> 'QSeries':
        return cls(order, (_as_expr(value),))

    @classmethod
    def monomial(cls, exponent, coeff, order: int) -> 'QSeries':
        exponent = as_rational(exponent)
        scale = int(exponent.q)
        coeffs = [ZERO] * (order * scale + 1)
        if exponent <= order:
            coeffs[int(exponent.p)] = _as_expr(coeff)
        return cls(order, tuple(coeffs), scale)

    def truncate(self, order: int) -> 'QSeries':
        if order > self.order:
            raise ValueError(f"cannot extend a series known to q^{self.order}")
        return QSeries(order, self.coefficients, self.scale)

    def rescale(self, scale: int) -> 'QSeries':
        if scale == self.scale:
            return self
        if scale % self.scale:
            raise ValueError(f"scale {scale} does not refine {self.scale}")
        factor = scale // self.scale
        coeffs = [ZERO] * (self.order * scale + 1)
        for k, c in enumerate(self.coefficients):
            coeffs[k * factor] = c
        return QSeries(self.order, tuple(coeffs), scale)

    def _aligned(self, other: 'QSeries') -> Tuple['QSeries', 'QSeries']:
        order = min(self.order, other.order)
        scale = lcm(self.scale, other.scale)
        return (self.truncate(order).rescale(scale), other.truncate(order).rescale(scale))

    def __add__(self, other) -> 'QSeries':
        if not isinstance(other, QSeries):
            other = QSeries.constant(other, self.order)
        a, b = self._aligned(other)
        return QSeries(a.order, tuple(x + y for x, y in zip(a.coefficients, b.coefficients)),
                       a.scale)

    __radd__ = __add__

    def __neg__(self) -> 'QSeries':
        return QSeries(self.order, tuple(-c for c in self.coefficients), self.scale)

    def __sub__(self, other) -> 'QSeries':
        return self + (-other if isinstance(other, QSeries) else -_as_expr(other))

    def __mul__(self, other) -> 'QSeries':
        if not isinstance(other, QSeries):
            factor = _as_expr(other)
            return QSeries(self.order, tuple(c * factor for c in self.coefficients), self.scale)
        a, b = self._aligned(other)
        n = len(a.coefficients)
        out = [ZERO] * n
        for i, x in enumerate(a.coefficients):
            if x.is_zero():
                continue
            for j in range(n - i):
                y = b.coefficients[j]
                if not y.is_zero():
                    out[i + j] = out[i + j] + x * y
        return QSeries(a.order, tuple(out), a.scale)

    __rmul__ = __mul__

    def inverse(self) -> 'QSeries':
        c0 = self.coefficients[0]
        if c0.is_zero():
            raise ZeroDenominator("constant term of the q-series vanishes")
        inv0 = ONE / c0
        out = [inv0]
        for k in range(1, len(self.coefficients)):
            acc = ZERO
            for j in range(1, k + 1):
                c = self.coefficients[j]
                if not c.is_zero() and not out[k - j].is_zero():
                    acc = acc + c * out[k - j]
            out.append(-(acc * inv0))
        return QSeries(self.order, tuple(out), self.scale)

    def __truediv__(self, other) -> 'QSeries':
        if not isinstance(other, QSeries):
            return self * (ONE / _as_expr(other))
        return self * other.inverse()

    def times_binomial(self, exponent, c: RatExpr) -> 'QSeries':
        """self * (1 - q^exponent c) for exponent > 0"""
        exponent = as_rational(exponent)
        if exponent > self.order:
            return self
        s = self.rescale(lcm(self.scale, int(exponent.q)))
        shift = int(exponent * s.scale)
        out = list(s.coefficients)
        for k in range(shift, len(out)):
            src = s.coefficients[k - shift]
            if not src.is_zero():
                out[k] = out[k] - c * src
        return QSeries(s.order, tuple(out), s.scale)

    def map(self, fn) -> 'QSeries':
        return QSeries(self.order, tuple(fn(c) for c in self.coefficients), self.scale)

    def coefficient(self, exponent) -> RatExpr:
        k = as_rational(exponent) * self.scale
        if not k.is_Integer or not 0 <= k < len(self.coefficients):
            return ZERO
        return self.coefficients[int(k)]

    def items(self) -> List[Tuple[sp.Rational, RatExpr]]:
        return [(sp.Rational(k, self.scale), c) for k, c in enumerate(self.coefficients)
                if not c.is_zero()]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def normalized(self) -> 'QSeries':
        g = self.scale
        for k, c in enumerate(self.coefficients):
            if not c.is_zero():
                g = gcd(g, k)
        if g == 1:
            return self
        return QSeries(self.order, self.coefficients[::g], self.scale // g)

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return (a.order, a.scale, a.coefficients) == (b.order, b.scale, b.coefficients)

    def __hash__(self):
        n = self.normalized()
        return hash((n.order, n.scale, n.coefficients))

    def to_list(self) -> List[List[Any]]:
        """[[n, canonical coefficient], ...] over the nonzero coefficients"""
        result = []
        for exponent, c in self.items():
            result.append([int(exponent) if exponent.is_Integer else str(exponent), render(c)])
        return result

    def __str__(self):
        if self.is_zero():
            return f"O(q^{self.order + 1})"
        parts = []
        for exponent, c in self.items():
            power = '' if exponent == 0 else (' q' if exponent == 1 else f" q^{exponent}")
            parts.append(f"({render(c)}){power}")
        return ' + '.join(parts) + f" + O(q^{self.order + 1})"


@dataclass(frozen=True)
class Factored:
    """lead * tail, with tail = 1 + O(q) carrying polynomial coefficients"""
    lead: RatExpr
    tail: QSeries

    def __mul__(self, other: 'Factored') -> 'Factored':
        return Factored(self.lead * other.lead, self.tail * other.tail)

    def __truediv__(self, other: 'Factored') -> 'Factored':
        return Factored(self.lead / other.lead, self.tail * other.tail.inverse())

    def expand(self) -> QSeries:
        return self.tail * self.lead


def monomial(**exponents) -> RatExpr:
    return RatExpr.monomial(exponents)


@lru_cache(maxsize=None)
def k_series(order: int) -> QSeries:
    """prod_{n=1..Q} (1 - q^n)^2, the derivative of theta at 0"""
    series = QSeries.constant(ONE, order)
    for n in range(1, order + 1):
        series = series.times_binomial(n, ONE).times_binomial(n, ONE)
    return series


def twisted_theta(character: RatExpr, order: int, shift=0) -> Factored:
    """
    q^(h/2) theta(x - h tau) for the character xi = e^x and 0 <= h < 1; the
    q^(h/2) normalization cancels in every balanced ratio.
    """
    h = as_rational(shift)
    if not 0 <= h < 1:
        raise ValueError(f"shift {h} outside [0,1)")
    inverse = ONE / character
    half = character.monomial_power(sp.Rational(1, 2))
    tail = QSeries.constant(ONE, order)
    if h == 0:
        lead = half * (1 - inverse)
    else:
        lead = half
        tail = tail.times_binomial(h, inverse)
    for n in range(1, order + 1):
        tail = tail.times_binomial(n - h, character).times_binomial(n + h, inverse)
    return Factored(lead, tail)


def theta_q(alpha, m, order: int) -> QSeries:
    """theta(alpha z + m lambda) with y = e^z and the torus character Z = e^lambda"""
    character = RatExpr.monomial({ELLIPTIC_VARIABLE: as_rational(alpha), 'Z': as_rational(m)})
    if character.is_constant():
        return QSeries.constant(ZERO, order)
    return twisted_theta(character, order).expand()


def coefficient_character(a, b=0) -> RatExpr:
    """y^(a+1) S^b, the character carried by a coefficient a + eps*b"""
    return RatExpr.monomial({ELLIPTIC_VARIABLE: as_rational(a) + 1,
                             PERTURBATION_VARIABLE: as_rational(b)})


def _check_coefficient(kappa: RatExpr):
    if kappa.is_constant():
        raise MinusOneCoefficient("coefficient -1 needs a null-perturbation")


def _divisor_ratio(character: RatExpr, kappa: RatExpr, order: int) -> Factored:
    """theta(x - (a+1)z) theta(-z) / (theta(x - z) theta(-(a+1)z))"""
    _check_coefficient(kappa)
    y_inv = monomial(Y=-1)
    num = twisted_theta(character / kappa, order) * twisted_theta(y_inv, order)
    den = twisted_theta(character * y_inv, order) * twisted_theta(ONE / kappa, order)
    return num / den


def divisor_factor(a, character: RatExpr, order: int, b=0) -> QSeries:
    """Identically 1 at a = 0; at q = 0 the chi_y-level weight of a coefficient-a divisor"""
    return _divisor_ratio(character, coefficient_character(a, b), order).expand()


def direction_factor(character: RatExpr, kappa: RatExpr, order: int, shift=0) -> Factored:
    """
    Tangent and divisor factor of one fixed-point direction merged:
    K theta(-z) theta(X - (a+1)z) / (theta(X) theta(-(a+1)z)) y^((a+1)h), X = x - h tau.
    """
    _check_coefficient(kappa)
    shift = as_rational(shift)
    num = twisted_theta(monomial(Y=-1), order) * twisted_theta(character / kappa, order, shift)
    den = twisted_theta(character, order, shift) * twisted_theta(ONE / kappa, order)
    result = Factored(ONE, k_series(order)) * num / den
    if shift:
        result = Factored(result.lead * kappa.monomial_power(shift), result.tail)
    return result


def minus_one_addend(m: int, a1, order: int) -> QSeries:
    """
    m K^2 theta(a1 z) theta((a1+2) z) / theta((a1+1) z)^2

    K = theta'(0) carries the normalization of the tangent factor, one K per
    Chern root; at q^0 it is 1.
    """
    a1 = as_rational(a1)
    if a1 == -1:
        raise MinusOneCoefficient("addend is singular at a1 = -1")
    if a1 == -2:
        return QSeries.constant(ZERO, order)
    y = lambda e: RatExpr.monomial({ELLIPTIC_VARIABLE: e})
    num = twisted_theta(y(a1), order) * twisted_theta(y(a1 + 2), order)
    den = twisted_theta(y(a1 + 1), order) * twisted_theta(y(a1 + 1), order)
    k = k_series(order)
    return (num / den).expand() * k * k * m


# intersection-ring evaluation

@dataclass(frozen=True)
class SurfaceData:
    """Class basis with its intersection form, c1 in that basis and c2 = Euler number"""
    names: Tuple[str, ...]
    intersection: Tuple[Tuple[int, ...], ...]
    c1: Tuple[int, ...]
    c2: int

    def __post_init__(self):
        n = len(self.names)
        if len(self.intersection) != n or any(len(row) != n for row in self.intersection):
            raise SchemaError("intersection matrix does not match the class basis", "$.intersection")
        if any(self.intersection[i][j] != self.intersection[j][i]
               for i in range(n) for j in range(n)):
            raise SchemaError("intersection matrix is not symmetric", "$.intersection")
        if len(self.c1) != n:
            raise SchemaError("c1 has the wrong length", "$.c1")

    @classmethod
    def from_fan(cls, f: Fan2D) -> 'SurfaceData':
        """Basis D_0..D_(l-1), c1 = sum D_i, c2 = number of fixed points"""
        n = len(f.rays)
        selfs = self_intersections(f)
        matrix = [[0] * n for _ in range(n)]
        for i in range(n):
            matrix[i][i] = selfs[i]
        for i, j in f.cones():
            matrix[i][j] += 1
            matrix[j][i] += 1
        return cls(tuple(f"D{i}" for i in range(n)), tuple(tuple(r) for r in matrix),
                   (1,) * n, n)

    def dot(self, u: Sequence[int], v: Sequence[int]) -> int:
        return sum(u[i] * self.intersection[i][j] * v[j]
                   for i in range(len(u)) for j in range(len(v)) if u[i] and v[j])

    def basis_vector(self, i: int) -> Tuple[int, ...]:
        return tuple(1 if k == i else 0 for k in range(len(self.names)))


@dataclass(frozen=True)
class ClassExpr:
    """const + sum_i linear[i] D_i + point [pt]; products of degree > 2 vanish"""
    surface: SurfaceData
    const: QSeries
    linear: Tuple[QSeries, ...]
    point: QSeries

    @classmethod
    def from_taylor(cls, surface: SurfaceData, f0: QSeries, f1: QSeries, f2: QSeries,
                    vector: Sequence[int]) -> 'ClassExpr':
        """f0 + f1 x + f2 x^2 evaluated at the class x = sum vector[i] D_i"""
        zero = f0 * 0
        linear = tuple(f1 * c if c else zero for c in vector)
        return cls(surface, f0, linear, f2 * surface.dot(vector, vector))

    def __mul__(self, other: 'ClassExpr') -> 'ClassExpr':
        s = self.surface
        linear = []
        for a, b in zip(self.linear, other.linear):
            term = self.const * b if not b.is_zero() else None
            if not a.is_zero():
                extra = other.const * a
                term = extra if term is None else term + extra
            linear.append(term if term is not None else a)
        point = self.const * other.point + other.const * self.point
        n = len(s.names)
        for i in range(n):
            if self.linear[i].is_zero():
                continue
            for j in range(n):
                weight = s.intersection[i][j]
                if weight and not other.linear[j].is_zero():
                    point = point + self.linear[i] * other.linear[j] * weight
        return ClassExpr(s, self.const * other.const, tuple(linear), point)

    def integrate(self) -> QSeries:
        return self.point


def _taylor(series: QSeries) -> Tuple[QSeries, QSeries, QSeries]:
    """G(1), (xi d/dxi) G (1), (xi d/dxi)^2 G (1) in the class variable"""
    at_one = lambda e: limit_at_one(e, CLASS_VARIABLE)
    first = series.map(lambda e: e.euler_derivative(CLASS_VARIABLE))
    second = first.map(lambda e: e.euler_derivative(CLASS_VARIABLE))
    return series.map(at_one), first.map(at_one), second.map(at_one)


def tangent_class(surface: SurfaceData, order: int) -> ClassExpr:
    """prod over Chern roots of x K theta(x - z)/theta(x), through c1 and c2"""
    xi = RatExpr.variable(CLASS_VARIABLE)
    shifted = twisted_theta(xi * monomial(Y=-1), order)
    product = Factored(ONE, twisted_theta(xi, order).tail)
    g = (Factored(ONE, k_series(order)) * shifted / product).expand()
    g0, g1, g2 = _taylor(g)
    # x / (xi^(1/2) - xi^(-1/2)) = 1 - x^2/24 + ...
    f0, f1, f2 = g0, g1, g2 * sp.Rational(1, 2) - g0 * sp.Rational(1, 24)
    c1 = surface.c1
    c1_squared = surface.dot(c1, c1)
    zero = f0 * 0
    const = f0 * f0
    linear = tuple(f0 * f1 * c if c else zero for c in c1)
    point = f0 * f2 * (c1_squared - 2 * surface.c2) + f1 * f1 * surface.c2
    return ClassExpr(surface, const, linear, point)


def divisor_class(surface: SurfaceData, i: int, a, b, order: int) -> ClassExpr:
    xi = RatExpr.variable(CLASS_VARIABLE)
    h = _divisor_ratio(xi, coefficient_character(a, b), order).expand()
    h0, h1, h2 = _taylor(h)
    return ClassExpr.from_taylor(surface, h0, h1, h2 * sp.Rational(1, 2),
                                 surface.basis_vector(i))


def _check_null(surface: SurfaceData, coeffs: Sequence[sp.Rational],
                perturbation: Optional[Dict[int, sp.Rational]]):
    minus_one = [i for i, a in enumerate(coeffs) if a == -1]
    if not minus_one:
        return
    if perturbation is None:
        raise NotAdmissible("coefficient -1 divisors need a null-perturbation")
    for t in minus_one:
        if not perturbation.get(t, 0):
            raise NotAdmissible(f"perturbation vanishes on the -1 divisor {surface.names[t]}")
        total = sum((perturbation.get(i, 0) * surface.intersection[i][t]
                     for i in range(len(coeffs))), sp.Integer(0))
        if total != 0:
            raise NotAdmissible(f"perturbation is not null on {surface.names[t]}")


def minus_one_class(surface: SurfaceData, t: int, order: int) -> ClassExpr:
    """theta(D + 2z) theta(z) / (theta(D + z) theta(2z)) for the coefficient -1 divisor D = D_t"""
    xi = RatExpr.variable(CLASS_VARIABLE)
    num = twisted_theta(xi * monomial(Y=2), order) * twisted_theta(monomial(Y=1), order)
    den = twisted_theta(xi * monomial(Y=1), order) * twisted_theta(monomial(Y=2), order)
    h0, h1, h2 = _taylor((num / den).expand())
    return ClassExpr.from_taylor(surface, h0, h1, h2 * sp.Rational(1, 2),
                                 surface.basis_vector(t))


def minus_one_neighbours(surface: SurfaceData, coeffs: Sequence[sp.Rational], t: int) -> List[int]:
    """
    Divisors meeting the coefficient -1 divisor D_t, after checking that D_t
    is a smooth rational curve meeting one or two others once each and that
    adjunction holds along it (the neighbouring coefficients sum to -2).
    """
    name = surface.names[t]
    row = surface.intersection[t]
    neighbours = [j for j in range(len(coeffs)) if j != t and row[j]]
    if not 1 <= len(neighbours) <= 2 or any(row[j] != 1 for j in neighbours):
        raise NotAdmissible(f"-1 divisor {name} must meet one or two divisors once each", name)
    if surface.dot(surface.c1, surface.basis_vector(t)) != 2 + row[t]:
        raise NotAdmissible(f"-1 divisor {name} is not a smooth rational curve", name)
    if any(coeffs[j] == -1 for j in neighbours):
        raise NotAdmissible(f"-1 divisor {name} meets another -1 divisor", name)
    if sum((coeffs[j] for j in neighbours), sp.Integer(0)) != -2:
        raise NotAdmissible(f"adjunction fails along the -1 divisor {name}", name)
    return neighbours


def _checked_coeffs(surface: SurfaceData, coeffs: Sequence) -> List[sp.Rational]:
    coeffs = [as_rational(a) for a in coeffs]
    if len(coeffs) != len(surface.names):
        raise SchemaError(f"{len(coeffs)} coefficients for {len(surface.names)} classes", "$.coeffs")
    return coeffs


def ell_smooth_pair(surface: SurfaceData, coeffs: Sequence, order: int = 3) -> QSeries:
    """
    Elliptic genus of a pair on a smooth surface. A divisor with coefficient
    -1 contributes theta(D + 2z) theta(z) / (theta(D + z) theta(2z)) to the
    integrand and the addend m K^2 theta(a1 z) theta((a1+2) z) / theta((a1+1) z)^2
    outside it, with m = -D^2 and a1 the coefficient of either neighbour.
    """
    coeffs = _checked_coeffs(surface, coeffs)
    integrand = tangent_class(surface, order)
    addend = QSeries.constant(ZERO, order)
    for i, a in enumerate(coeffs):
        if a == -1:
            neighbours = minus_one_neighbours(surface, coeffs, i)
            integrand = integrand * minus_one_class(surface, i, order)
            addend = addend + minus_one_addend(-surface.intersection[i][i],
                                               coeffs[neighbours[0]], order)
        elif a != 0:
            integrand = integrand * divisor_class(surface, i, a, 0, order)
    return integrand.integrate() + addend


def ell_perturbed_limit(surface: SurfaceData, coeffs: Sequence,
                        perturbation: Optional[Dict[int, sp.Rational]], order: int = 3) -> QSeries:
    """Elliptic genus as the S -> 1 limit of the pair with coefficients a + eps*b, per q-coefficient"""
    coeffs = _checked_coeffs(surface, coeffs)
    _check_null(surface, coeffs, perturbation)
    integrand = tangent_class(surface, order)
    for i, a in enumerate(coeffs):
        b = perturbation.get(i, 0) if perturbation else 0
        if a == 0 and b == 0:
            continue
        integrand = integrand * divisor_class(surface, i, a, b, order)
    result = integrand.integrate()
    if perturbation:
        result = result.map(lambda e: limit_at_one(e, PERTURBATION_VARIABLE))
    return result


def _pair_perturbation(p: ToricPair, perturbation: Optional[Dict[int, sp.Rational]]
                       ) -> Optional[Dict[int, sp.Rational]]:
    if all(a != -1 for a in p.coeffs):
        return perturbation
    report = is_admissible(pair_graph(p), minimal=False)
    if not report:
        raise NotAdmissible(f"pair is not admissible: {report.reason}", report.curve_id)
    return perturbation if perturbation is not None else toric_null_perturbation(p)


def ell_toric_pair(p: ToricPair, order: int = 3,
                   perturbation: Optional[Dict[int, sp.Rational]] = None) -> QSeries:
    """
    Elliptic genus on the intersection ring of a toric surface: the closed
    formula, or the null-perturbation limit when a perturbation is given.
    """
    surface = SurfaceData.from_fan(p.fan)
    if perturbation is None:
        return ell_smooth_pair(surface, p.coeffs, order)
    return ell_perturbed_limit(surface, p.coeffs, _pair_perturbation(p, perturbation), order)


# fixed-point localization

@dataclass(frozen=True)
class TorusGroup:
    """Finite subgroup of the torus; each element is nu with g = exp(2 pi i nu), nu mod Z^2"""
    elements: Tuple[Tuple[sp.Rational, sp.Rational], ...] = ((sp.Integer(0), sp.Integer(0)),)

    @classmethod
    def generated_by(cls, generators: Sequence[Sequence]) -> 'TorusGroup':
        def reduce(v):
            return tuple(as_rational(x) % 1 for x in v)

        gens = []
        for g in generators:
            if len(g) != 2 or any(isinstance(x, (list, tuple)) for x in g):
                raise NonAbelianGroup("generators must be torus weight vectors (nu1, nu2)")
            gens.append(reduce(g))
        elements = {(sp.Integer(0), sp.Integer(0))}
        frontier = list(elements)
        while frontier:
            current = frontier.pop()
            for g in gens:
                nxt = reduce((current[0] + g[0], current[1] + g[1]))
                if nxt not in elements:
                    elements.add(nxt)
                    frontier.append(nxt)
        return cls(tuple(sorted(elements)))

    @classmethod
    def cyclic(cls, n: int, weights: Tuple[int, int] = (1, 1)) -> 'TorusGroup':
        return cls.generated_by([(sp.Rational(weights[0], n), sp.Rational(weights[1], n))])

    @property
    def order(self) -> int:
        return len(self.elements)

    def is_trivial(self) -> bool:
        return self.order == 1

    def invariant(self, e1, e2) -> bool:
        return all((e1 * g1 + e2 * g2).is_integer for g1, g2 in self.elements)


TRIVIAL_GROUP = TorusGroup()


def torus_character(u: Tuple[int, int]) -> RatExpr:
    return RatExpr.monomial({TORUS_VARIABLES[0]: u[0], TORUS_VARIABLES[1]: u[1]})


def _sum_factored(terms: List[Factored], order: int) -> QSeries:
    scale = 1
    for t in terms:
        scale = lcm(scale, t.tail.scale)
    size = order * scale + 1
    coeffs = [ZERO] * size
    for t in terms:
        tail = t.tail.truncate(order).rescale(scale)
        for k, c in enumerate(tail.coefficients):
            if not c.is_zero():
                coeffs[k] = coeffs[k] + t.lead * c
    return QSeries(order, tuple(coeffs), scale)


def _project(e: RatExpr, group: TorusGroup) -> RatExpr:
    """Keep the G-invariant torus characters; the denominator must be free of them"""
    if e.is_zero() or not set(TORUS_VARIABLES) & set(e.variables):
        return e
    den = e.den
    for var in TORUS_VARIABLES:
        if var in den.variables and any(den.exponents(var)):
            raise InvalidFan("localization sum is not a Laurent polynomial in the torus variables",
                             render(e))
    if group.is_trivial():
        return e
    num = e.num
    index = [num.variables.index(v) if v in num.variables else None for v in TORUS_VARIABLES]
    kept = {}
    for m, c in num.terms:
        exps = [sp.Rational(m[i], num.scale[i]) if i is not None else 0 for i in index]
        if group.invariant(*exps):
            kept[m] = c
    return canonicalize_pair(LaurentPoly.from_dict(num.variables, kept, num.scale),
                             den.with_layout(num.variables, num.scale))


def sector_sum(p: ToricPair, h: Tuple[sp.Rational, sp.Rational], order: int,
               kappas: Sequence[RatExpr]) -> QSeries:
    """Localization sum of the sector (1, h): shifted arguments x - frac<u, h> tau"""
    terms = []
    for point in fixed_point_data(p.fan):
        factor = None
        for ray, u in zip(point.rays, point.weights):
            shift = pairing(u, h) % 1
            f = direction_factor(torus_character(u), kappas[ray], order, shift)
            factor = f if factor is None else factor * f
        terms.append(factor)
    return _sum_factored(terms, order)


def ell_toric_equivariant(p: ToricPair, group: TorusGroup = TRIVIAL_GROUP, order: int = 3,
                          perturbation: Optional[Dict[int, sp.Rational]] = None) -> QSeries:
    """
    Equivariant orbifold elliptic genus (1/|G|) sum_{g,h} of the toric pair.
    The g-twist substitutes t -> t exp(2 pi i nu_g), so summing it over G
    keeps |G| times the G-invariant characters of the (1, h) sector.
    """
    b = _pair_perturbation(p, perturbation)
    kappas = [coefficient_character(a, b.get(i, 0) if b else 0) for i, a in enumerate(p.coeffs)]
    total = None
    for h in group.elements:
        series = sector_sum(p, h, order, kappas)
        if b:
            series = series.map(lambda e: limit_at_one(e, PERTURBATION_VARIABLE))
        series = series.map(lambda e: _project(e, group))
        total = series if total is None else total + series
    logger.debug(f"localized {len(fixed_point_data(p.fan))} fixed points over {group.order} sectors")
    return total


def at_identity(s: QSeries) -> QSeries:
    """Non-equivariant limit t -> 1 of a series polynomial in the torus characters"""
    def collapse(e: RatExpr) -> RatExpr:
        for var in TORUS_VARIABLES:
            e = evaluate_at(e, var, 1)
        return e
    return s.map(collapse)


def is_torus_independent(s: QSeries, up_to=None) -> bool:
    last = s.order if up_to is None else up_to
    return all(not set(TORUS_VARIABLES) & set(c.variables)
               for exponent, c in s.items() if exponent <= last)


@dataclass(frozen=True)
class RigidityReport:
    functional: Tuple[sp.Rational, sp.Rational]
    order: int
    q0_vanishes: bool
    nonzero: Tuple[sp.Rational, ...] = field(default=())

    @property
    def passed(self) -> bool:
        return self.q0_vanishes and not self.nonzero


def rigidity_report(p: ToricPair, group: TorusGroup = TRIVIAL_GROUP, order: int = 3) -> RigidityReport:
    m = is_cy_pair(p)
    if m is None:
        raise NotCalabiYau("no linear functional m with <m, v_i> = a_i + 1")
    q0 = ell_toric_equivariant(p, group, 0)
    series = ell_toric_equivariant(p, group, order)
    nonzero = tuple(exponent for exponent, _ in series.items())
    report = RigidityReport(m, order, q0.is_zero(), nonzero)
    if not report.passed:
        logger.warning(f"rigidity fails at q-exponents {[str(e) for e in nonzero]}")
    return report


def rigidity_check(p: ToricPair, group: TorusGroup = TRIVIAL_GROUP, order: int = 3) -> bool:
    return rigidity_report(p, group, order).passed


# q = 0 specializations

def _y_power(exponent) -> RatExpr:
    return RatExpr.monomial({ELLIPTIC_VARIABLE: as_rational(exponent)})


def hodge_chi_y(s: QSeries, dimension: int = 2) -> RatExpr:
    """y^(n/2) c_0, the chi_y genus E(y, 1) of the E-function modules"""
    return s.coefficient(0) * _y_power(sp.Rational(dimension, 2))


def q0_chi_y(s: QSeries, dimension: int = 2) -> RatExpr:
    """c_0 in the Hirzebruch normalization y^(-n/2) chi_y: y -> -y applied to E(y, 1)"""
    return negate_variable(hodge_chi_y(s, dimension), ELLIPTIC_VARIABLE) * \
        _y_power(-sp.Rational(dimension, 2))


def signature(s: QSeries, dimension: int = 2) -> sp.Rational:
    """z = 1/2, i.e. y = -1 in y^(n/2) c_0"""
    return evaluate_at(hodge_chi_y(s, dimension), ELLIPTIC_VARIABLE, -1).constant_value()


def group_from_dict(doc: Optional[Dict[str, Any]]) -> TorusGroup:
    if not doc:
        return TRIVIAL_GROUP
    if 'generators' not in doc:
        raise SchemaError("group needs 'generators'", "$.group")
    generators = []
    for k, g in enumerate(doc['generators']):
        if not isinstance(g, list):
            raise SchemaError("generator must be a list", f"$.group.generators[{k}]")
        if any(isinstance(x, float) for x in g):
            raise SchemaError("weights must be fraction strings", f"$.group.generators[{k}]")
        generators.append(g)
    return TorusGroup.generated_by(generators)
