#!/usr/bin/env python3
"""
Exact Arithmetic Layer

Multivariate Laurent polynomials over the rationals with fractional exponents,
canonical rational functions built on top of them, and the limit engine that
evaluates expressions at var = 1 by repeated cancellation of (var - 1).

Fractional exponents are carried by a per-variable scale: a variable X stored
at scale N stands for x^(1/N). Every value is immutable; polynomial products,
gcds and exact quotients are delegated to sympy's sparse polynomial rings.

Formal variables:
- U, V: Hodge variables of E-functions (w = U*V)
- S, T: limit variables (null-perturbation, Euler specialization)
- Y, Z: elliptic variable y and equivariant character
"""

import logging
from dataclasses import dataclass
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Dict, Iterable, List, Mapping, Optional, Tuple, Union

import sympy as sp
from sympy.parsing.sympy_parser import (
    convert_xor,
    parse_expr,
    standard_transformations,
)
from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyRing

from errors import (
    CancellationDepthExceeded,
    MinusOneCoefficient,
    NotConstant,
    ParseError,
    PoleAtOne,
    ZeroDenominator,
)

logger = logging.getLogger(__name__)

Rational = sp.Rational
Monomial = Tuple[int, ...]
Number = Union[int, sp.Rational]

VARIABLE_ORDER = ('U', 'V', 'S', 'T', 'Y', 'Z')


def variable_key(name: str):
    if name in VARIABLE_ORDER:
        return (0, VARIABLE_ORDER.index(name), name)
    return (1, 0, name)


def order_variables(names: Iterable[str]) -> Tuple[str, ...]:
    return tuple(sorted(set(names), key=variable_key))


def as_rational(value) -> sp.Rational:
    """Coerce ints, fraction strings and sympy numbers to sympy.Rational"""
    if isinstance(value, str):
        try:
            value = sp.Rational(value.strip())
        except (TypeError, ValueError, SyntaxError) as e:
            raise ParseError(f"not an exact fraction: {value!r}") from e
    result = sp.Rational(value)
    if not result.is_Rational:
        raise ParseError(f"not an exact fraction: {value!r}")
    return result


@lru_cache(maxsize=None)
def _ring(variables: Tuple[str, ...]) -> PolyRing:
    return PolyRing(variables, QQ, lex)


def _to_ground(c: sp.Rational):
    return QQ(int(c.p), int(c.q))


def _from_ground(c) -> sp.Rational:
    return QQ.to_sympy(c)


@dataclass(frozen=True)
class LaurentPoly:
    """Sparse Laurent polynomial; `terms` is sorted by monomial, descending"""
    variables: Tuple[str, ...] = ()
    terms: Tuple[Tuple[Monomial, sp.Rational], ...] = ()
    scale: Tuple[int, ...] = ()

    @classmethod
    def from_dict(cls, variables: Iterable[str], mapping: Mapping[Monomial, Number],
                  scale: Optional[Iterable[int]] = None) -> 'LaurentPoly':
        variables = tuple(variables)
        scale = tuple(int(s) for s in scale) if scale is not None else (1,) * len(variables)
        items = []
        for monomial, coeff in mapping.items():
            coeff = sp.Rational(coeff)
            if coeff != 0:
                items.append((tuple(int(e) for e in monomial), coeff))
        items.sort(key=lambda item: item[0], reverse=True)
        return cls(variables, tuple(items), scale)

    @classmethod
    def constant(cls, value: Number) -> 'LaurentPoly':
        return cls.from_dict((), {(): value})

    def as_dict(self) -> Dict[Monomial, sp.Rational]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return len(self.terms) == 1 and self.terms[0][1] == 1 and not any(self.terms[0][0])

    def exponents(self, var: str) -> List[sp.Rational]:
        i = self.variables.index(var)
        return [sp.Rational(m[i], self.scale[i]) for m, _ in self.terms]

    def degree_span(self, var: str) -> int:
        if var not in self.variables or not self.terms:
            return 0
        i = self.variables.index(var)
        column = [m[i] for m, _ in self.terms]
        return max(column) - min(column)

    def with_layout(self, variables: Tuple[str, ...], scale: Tuple[int, ...]) -> 'LaurentPoly':
        """Embed into a larger variable set and/or a finer scale"""
        if variables == self.variables and scale == self.scale:
            return self
        positions = []
        for var, target in zip(variables, scale):
            if var in self.variables:
                i = self.variables.index(var)
                if target % self.scale[i]:
                    raise ValueError(f"scale {target} does not refine {self.scale[i]} for {var}")
                positions.append((i, target // self.scale[i]))
            else:
                positions.append((None, 0))
        missing = set(self.variables) - set(variables)
        if missing:
            raise ValueError(f"layout drops variables {sorted(missing)}")
        mapping = {
            tuple(m[i] * factor if i is not None else 0 for i, factor in positions): c
            for m, c in self.terms
        }
        return LaurentPoly.from_dict(variables, mapping, scale)

    def split(self) -> Tuple[Monomial, object]:
        """Factor as x^shift * P with P a ring polynomial not divisible by any variable"""
        ring = _ring(self.variables)
        if not self.terms:
            return (0,) * len(self.variables), ring.zero
        shift = tuple(min(m[i] for m, _ in self.terms) for i in range(len(self.variables)))
        poly = ring.from_dict({
            tuple(e - s for e, s in zip(m, shift)): _to_ground(c) for m, c in self.terms
        })
        return shift, poly

    @classmethod
    def join(cls, variables, scale, shift: Monomial, poly) -> 'LaurentPoly':
        mapping = {
            tuple(e + s for e, s in zip(m, shift)): _from_ground(c) for m, c in poly.items()
        }
        return cls.from_dict(variables, mapping, scale)

    def __neg__(self) -> 'LaurentPoly':
        return LaurentPoly(self.variables, tuple((m, -c) for m, c in self.terms), self.scale)

    def __add__(self, other: 'LaurentPoly') -> 'LaurentPoly':
        a, b = align(self, other)
        merged = a.as_dict()
        for m, c in b.terms:
            merged[m] = merged.get(m, 0) + c
        return LaurentPoly.from_dict(a.variables, merged, a.scale)

    def __sub__(self, other: 'LaurentPoly') -> 'LaurentPoly':
        return self + (-other)

    def __mul__(self, other: Union['LaurentPoly', Number]) -> 'LaurentPoly':
        if not isinstance(other, LaurentPoly):
            factor = sp.Rational(other)
            return LaurentPoly.from_dict(self.variables,
                                         {m: c * factor for m, c in self.terms}, self.scale)
        a, b = align(self, other)
        if a.is_zero() or b.is_zero():
            return LaurentPoly.from_dict(a.variables, {}, a.scale)
        if not a.variables:
            return LaurentPoly.constant(a.terms[0][1] * b.terms[0][1])
        shift_a, pa = a.split()
        shift_b, pb = b.split()
        shift = tuple(x + y for x, y in zip(shift_a, shift_b))
        return LaurentPoly.join(a.variables, a.scale, shift, pa * pb)

    def evaluate_at_one(self, var: str) -> 'LaurentPoly':
        """Substitute var = 1, removing it from the variable list"""
        if var not in self.variables:
            return self
        i = self.variables.index(var)
        merged: Dict[Monomial, sp.Rational] = {}
        for m, c in self.terms:
            key = m[:i] + m[i + 1:]
            merged[key] = merged.get(key, 0) + c
        return LaurentPoly.from_dict(self.variables[:i] + self.variables[i + 1:], merged,
                                     self.scale[:i] + self.scale[i + 1:])

    def divide_by_binomial(self, var: str) -> 'LaurentPoly':
        """Exact quotient by (X - 1) where X is the stored variable"""
        shift, poly = self.split()
        ring = _ring(self.variables)
        divisor = ring.gens[self.variables.index(var)] - 1
        return LaurentPoly.join(self.variables, self.scale, shift, poly.exquo(divisor))

    def euler_derivative(self, var: str) -> 'LaurentPoly':
        """x d/dx in the true variable x, where the stored variable is x^(1/N)"""
        if var not in self.variables:
            return LaurentPoly.from_dict(self.variables, {}, self.scale)
        i = self.variables.index(var)
        return LaurentPoly.from_dict(
            self.variables,
            {m: c * sp.Rational(m[i], self.scale[i]) for m, c in self.terms},
            self.scale,
        )

    def rename(self, mapping: Mapping[str, str]) -> 'LaurentPoly':
        names = [mapping.get(v, v) for v in self.variables]
        if len(set(names)) != len(names):
            raise ValueError(f"renaming {dict(mapping)} collides in {self.variables}")
        order = order_variables(names)
        perm = [names.index(v) for v in order]
        return LaurentPoly.from_dict(
            order,
            {tuple(m[j] for j in perm): c for m, c in self.terms},
            tuple(self.scale[j] for j in perm),
        )

    def merge(self, sources: Iterable[str], target: str) -> 'LaurentPoly':
        """Identify several variables with one new variable (u = v = t)"""
        sources = [s for s in sources if s in self.variables]
        if not sources:
            return self
        common = reduce(lcm, (self.scale[self.variables.index(s)] for s in sources), 1)
        if target in self.variables:
            common = lcm(common, self.scale[self.variables.index(target)])
        rest = [v for v in self.variables if v not in sources and v != target]
        variables = order_variables(rest + [target])
        scale = tuple(common if v == target else self.scale[self.variables.index(v)]
                      for v in variables)
        merged: Dict[Monomial, sp.Rational] = {}
        for m, c in self.terms:
            exps = dict(zip(self.variables, m))
            t = 0
            for s in sources + ([target] if target in self.variables else []):
                i = self.variables.index(s)
                t += exps[s] * (common // self.scale[i])
            key = tuple(t if v == target else exps[v] for v in variables)
            merged[key] = merged.get(key, 0) + c
        return LaurentPoly.from_dict(variables, merged, scale)

    def as_expr(self) -> sp.Expr:
        symbols = [sp.Symbol(v.lower()) for v in self.variables]
        total = sp.Integer(0)
        for m, c in self.terms:
            term = c
            for sym, e, n in zip(symbols, m, self.scale):
                term *= sym ** sp.Rational(e, n)
            total += term
        return total


def align(a: LaurentPoly, b: LaurentPoly) -> Tuple[LaurentPoly, LaurentPoly]:
    """Bring two polynomials onto the union of variables at the least common scale"""
    if a.variables == b.variables and a.scale == b.scale:
        return a, b
    variables = order_variables(a.variables + b.variables)
    scale = []
    for var in variables:
        s = 1
        for p in (a, b):
            if var in p.variables:
                s = lcm(s, p.scale[p.variables.index(var)])
        scale.append(s)
    scale = tuple(scale)
    return a.with_layout(variables, scale), b.with_layout(variables, scale)


_ZERO_POLY = LaurentPoly.from_dict((), {})
_ONE_POLY = LaurentPoly.constant(1)


@dataclass(frozen=True)
class RatExpr:
    """
    Canonical rational function num/den.

    Instances are only produced by `canonicalize`, so structural equality is
    mathematical equality: num and den share one variable layout, den has no
    monomial factor and lex leading coefficient 1, gcd(num, den) = 1, and every
    scale is as small as the exponents allow. Zero is 0/1.
    """
    num: LaurentPoly
    den: LaurentPoly

    # constructors
    @classmethod
    def constant(cls, value) -> 'RatExpr':
        value = as_rational(value)
        return cls(LaurentPoly.constant(value) if value != 0 else _ZERO_POLY, _ONE_POLY)

    @classmethod
    def monomial(cls, exponents: Mapping[str, Number], coeff: Number = 1) -> 'RatExpr':
        exponents = {v: as_rational(e) for v, e in exponents.items() if e != 0}
        variables = order_variables(exponents)
        scale = tuple(int(exponents[v].q) for v in variables)
        monomial = tuple(int(exponents[v].p) for v in variables)
        return canonicalize_pair(LaurentPoly.from_dict(variables, {monomial: coeff}, scale),
                                 LaurentPoly.constant(1))

    @classmethod
    def variable(cls, name: str) -> 'RatExpr':
        return cls.monomial({name: 1})

    # queries
    @property
    def variables(self) -> Tuple[str, ...]:
        return self.num.variables if not self.num.is_zero() else ()

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_constant(self) -> bool:
        return not self.variables

    def constant_value(self) -> sp.Rational:
        if not self.is_constant():
            raise NotConstant("expression still depends on variables", render(self))
        return self.num.terms[0][1] if self.num.terms else sp.Integer(0)

    def is_monomial(self) -> bool:
        return self.den.is_one() and len(self.num.terms) == 1

    # arithmetic
    def _coerce(self, other) -> 'RatExpr':
        if isinstance(other, RatExpr):
            return other
        return RatExpr.constant(other)

    def __add__(self, other) -> 'RatExpr':
        other = self._coerce(other)
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.den == other.den:
            return canonicalize_pair(self.num + other.num, self.den)
        return canonicalize_pair(self.num * other.den + other.num * self.den,
                                 self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> 'RatExpr':
        return RatExpr(-self.num, self.den)

    def __sub__(self, other) -> 'RatExpr':
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> 'RatExpr':
        return self._coerce(other) - self

    def __mul__(self, other) -> 'RatExpr':
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return ZERO
        return canonicalize_pair(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> 'RatExpr':
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDenominator("division by the zero expression")
        return canonicalize_pair(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> 'RatExpr':
        return self._coerce(other) / self

    def __pow__(self, k: int) -> 'RatExpr':
        if not isinstance(k, int):
            raise TypeError("only integer powers of expressions are supported")
        if k < 0:
            return ONE / (self ** -k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def monomial_power(self, exponent: Number) -> 'RatExpr':
        """Rational power of a unit-coefficient monomial"""
        exponent = as_rational(exponent)
        if self.is_zero() or not self.is_monomial() or self.num.terms[0][1] != 1:
            raise ParseError("fractional powers are only defined for monomials",
                             render(self) if not self.is_zero() else '0')
        m = self.num.terms[0][0]
        return RatExpr.monomial({
            v: sp.Rational(e, n) * exponent
            for v, e, n in zip(self.num.variables, m, self.num.scale)
        })

    def rename(self, mapping: Mapping[str, str]) -> 'RatExpr':
        if self.is_zero():
            return self
        return canonicalize_pair(self.num.rename(mapping), self.den.rename(mapping))

    def euler_derivative(self, var: str) -> 'RatExpr':
        """x d/dx of the expression (quotient rule on num/den)"""
        if var not in self.variables:
            return ZERO
        dn = self.num.euler_derivative(var)
        dd = self.den.euler_derivative(var)
        return canonicalize_pair(dn * self.den - self.num * dd, self.den * self.den)

    def as_expr(self) -> sp.Expr:
        return self.num.as_expr() / self.den.as_expr()

    def __str__(self):
        return render(self)


def canonicalize_pair(num: LaurentPoly, den: LaurentPoly) -> RatExpr:
    num, den = align(num, den)
    if den.is_zero():
        raise ZeroDenominator("denominator is identically zero")
    if num.is_zero():
        return ZERO
    variables, scale = num.variables, num.scale
    if not variables:
        return RatExpr.constant(num.terms[0][1] / den.terms[0][1])
    shift_n, p = num.split()
    shift_d, q = den.split()
    g = p.gcd(q)
    p = p.exquo(g)
    q = q.exquo(g)
    lc = q.LC
    p = p.quo_ground(lc)
    q = q.quo_ground(lc)
    shift = tuple(a - b for a, b in zip(shift_n, shift_d))
    num_map = {tuple(e + s for e, s in zip(m, shift)): _from_ground(c) for m, c in p.items()}
    den_map = {m: _from_ground(c) for m, c in q.items()}
    return _deflate(variables, scale, num_map, den_map)


def _deflate(variables, scale, num_map, den_map) -> RatExpr:
    """Drop absent variables and shrink each scale by the gcd of its exponents"""
    keep = []
    for i, var in enumerate(variables):
        g = scale[i]
        for m in list(num_map) + list(den_map):
            g = gcd(g, m[i])
        if any(m[i] for m in list(num_map) + list(den_map)):
            keep.append((i, g))
    new_vars = tuple(variables[i] for i, _ in keep)
    new_scale = tuple(scale[i] // g for i, g in keep)

    def squeeze(mapping):
        return {tuple(m[i] // g for i, g in keep): c for m, c in mapping.items()}

    return RatExpr(LaurentPoly.from_dict(new_vars, squeeze(num_map), new_scale),
                   LaurentPoly.from_dict(new_vars, squeeze(den_map), new_scale))


def canonicalize(e: RatExpr) -> RatExpr:
    """Canonical form of an arbitrary num/den pair; idempotent"""
    return canonicalize_pair(e.num, e.den)


ZERO = RatExpr(_ZERO_POLY, _ONE_POLY)
ONE = RatExpr(_ONE_POLY, _ONE_POLY)


def const(value) -> RatExpr:
    return RatExpr.constant(value)


def var(name: str) -> RatExpr:
    return RatExpr.variable(name)


def w_power(exponent: Number) -> RatExpr:
    """(uv)^exponent"""
    return RatExpr.monomial({'U': exponent, 'V': exponent})


def geometric_factor(a: Number) -> RatExpr:
    """(w - 1)/(w^(a+1) - 1), the weight of a stratum lying on a coefficient-a divisor"""
    a = as_rational(a)
    if a == -1:
        raise MinusOneCoefficient("coefficient -1 has no geometric factor; use a null-perturbation")
    return (w_power(1) - 1) / (w_power(a + 1) - 1)


def limit_at_one(e: RatExpr, variable: str) -> RatExpr:
    """lim variable -> 1 by cancelling (X - 1) from num and den until den(1) != 0"""
    if variable not in e.variables:
        return e
    num, den = e.num, e.den
    bound = den.degree_span(variable)
    for depth in range(bound + 1):
        at_num = num.evaluate_at_one(variable)
        at_den = den.evaluate_at_one(variable)
        if not at_den.is_zero():
            if depth > 1:
                logger.debug(f"limit in {variable} needed {depth} cancellations")
            return canonicalize_pair(at_num, at_den)
        if not at_num.is_zero():
            raise PoleAtOne(f"expression has a pole at {variable.lower()} = 1", render(e))
        num = num.divide_by_binomial(variable)
        den = den.divide_by_binomial(variable)
    raise CancellationDepthExceeded(
        f"more than {bound} cancellations of ({variable.lower()} - 1)", render(e))


def merge_variables(e: RatExpr, sources: Iterable[str], target: str) -> RatExpr:
    if e.is_zero():
        return e
    sources = list(sources)
    return canonicalize_pair(e.num.merge(sources, target), e.den.merge(sources, target))


def euler_specialize(e: RatExpr) -> sp.Rational:
    """Set u = v = t and take t -> 1"""
    merged = merge_variables(e, ['U', 'V'], 'T')
    return limit_at_one(merged, 'T').constant_value()


def chi_y_specialize(e: RatExpr) -> RatExpr:
    """Hodge-style chi_y genus: v -> 1, then u is renamed y"""
    return limit_at_one(e, 'V').rename({'U': 'Y'})


def negate_variable(e: RatExpr, variable: str) -> RatExpr:
    """Substitute x -> -x; every exponent of x must be an integer"""
    if variable not in e.variables:
        return e

    def flip(poly: LaurentPoly) -> LaurentPoly:
        i = poly.variables.index(variable)
        mapping = {}
        for m, c in poly.terms:
            if m[i] % poly.scale[i]:
                raise ValueError(f"{variable.lower()} -> -{variable.lower()} needs integer exponents")
            mapping[m] = -c if (m[i] // poly.scale[i]) % 2 else c
        return LaurentPoly.from_dict(poly.variables, mapping, poly.scale)

    return canonicalize_pair(flip(e.num), flip(e.den))


def evaluate_at(e: RatExpr, variable: str, value) -> RatExpr:
    """Exact substitution of a rational value; integer exponents only"""
    if variable not in e.variables:
        return e
    value = as_rational(value)

    def substitute(poly: LaurentPoly) -> LaurentPoly:
        i = poly.variables.index(variable)
        mapping: Dict[Monomial, sp.Rational] = {}
        for m, c in poly.terms:
            if m[i] % poly.scale[i]:
                raise ValueError(f"substitution into {variable.lower()} needs integer exponents")
            key = m[:i] + m[i + 1:]
            mapping[key] = mapping.get(key, 0) + c * value ** (m[i] // poly.scale[i])
        return LaurentPoly.from_dict(poly.variables[:i] + poly.variables[i + 1:], mapping,
                                     poly.scale[:i] + poly.scale[i + 1:])

    return canonicalize_pair(substitute(e.num), substitute(e.den))


# rendering

def _format_exponent(name: str, exponent: sp.Rational) -> str:
    if exponent == 1:
        return name
    if exponent.is_Integer and exponent > 0:
        return f"{name}^{exponent}"
    return f"{name}^({exponent})"


def _is_w_expressible(e: RatExpr) -> bool:
    variables = e.variables
    if 'U' not in variables and 'V' not in variables:
        return False
    if 'U' not in variables or 'V' not in variables:
        return False
    iu, iv = variables.index('U'), variables.index('V')
    for poly in (e.num, e.den):
        for m, _ in poly.terms:
            if sp.Rational(m[iu], poly.scale[iu]) != sp.Rational(m[iv], poly.scale[iv]):
                return False
    return True


def _render_poly(poly: LaurentPoly, w_mode: bool) -> str:
    pieces = []
    for m, c in poly.terms:
        factors = []
        for v, e, n in zip(poly.variables, m, poly.scale):
            if e == 0 or (w_mode and v == 'V'):
                continue
            name = 'w' if (w_mode and v == 'U') else v.lower()
            factors.append(_format_exponent(name, sp.Rational(e, n)))
        body = '*'.join(factors)
        if not body:
            term = str(c)
        elif c == 1:
            term = body
        elif c == -1:
            term = f"-{body}"
        else:
            term = f"{c}*{body}"
        pieces.append(term)
    text = pieces[0]
    for term in pieces[1:]:
        text += f" - {term[1:]}" if term.startswith('-') else f" + {term}"
    return text


def render(e: RatExpr) -> str:
    """Canonical text: descending terms, reduced fractional exponents, w = uv where possible"""
    if e.is_zero():
        return '0'
    w_mode = _is_w_expressible(e)
    num = _render_poly(e.num, w_mode)
    if e.den.is_one():
        return num
    if len(e.num.terms) > 1:
        num = f"({num})"
    return f"{num}/({_render_poly(e.den, w_mode)})"


# parsing

_TRANSFORMATIONS = standard_transformations + (convert_xor,)
_SYMBOLS = {name: sp.Symbol(name.upper()) for name in ('u', 'v', 's', 't', 'y', 'z', 'w')}
_SYMBOLS.update({name.upper(): sym for name, sym in list(_SYMBOLS.items())})


def _from_sympy(node: sp.Basic) -> RatExpr:
    if node.is_Rational:
        return RatExpr.constant(node)
    if node.is_Symbol:
        if node.name == 'W':
            return w_power(1)
        if node.name not in VARIABLE_ORDER:
            raise ParseError(f"unknown variable {node.name}")
        return RatExpr.variable(node.name)
    if node.is_Add:
        return reduce(lambda a, b: a + b, (_from_sympy(arg) for arg in node.args), ZERO)
    if node.is_Mul:
        return reduce(lambda a, b: a * b, (_from_sympy(arg) for arg in node.args), ONE)
    if node.is_Pow:
        base, exponent = node.args
        if not exponent.is_Rational:
            raise ParseError(f"exponent {exponent} is not an exact fraction")
        if exponent.is_Integer:
            return _from_sympy(base) ** int(exponent)
        return _from_sympy(base).monomial_power(exponent)
    raise ParseError(f"unsupported construct {node}")


def parse(text: str) -> RatExpr:
    """Inverse of `render`; also accepts u, v, s, t, y, z and w = uv freely"""
    try:
        node = parse_expr(text, local_dict=dict(_SYMBOLS), transformations=_TRANSFORMATIONS,
                          evaluate=True)
    except (SyntaxError, TypeError, ValueError, sp.SympifyError) as e:
        raise ParseError(f"cannot parse expression {text!r}") from e
    if isinstance(node, sp.Float) or node.atoms(sp.Float):
        raise ParseError(f"floating point literal in {text!r}")
    return _from_sympy(node)
