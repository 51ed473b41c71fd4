#!/usr/bin/env python3
"""
Smooth Complete Toric Surfaces

A fan is a counterclockwise cycle of primitive rays with det(v_i, v_i+1) = 1.
Each ray is a torus-invariant curve D_i, each cone a torus-fixed point. A toric
pair attaches a coefficient a_i to every D_i; it is Calabi-Yau when
K_X - D = 0, i.e. some linear functional m has <m, v_i> = a_i + 1 on all rays.

JSON layout: {"rays": [[1,0],[0,1],[-1,-1]], "coeffs": ["0","0","-3"]}
"""

import logging
from dataclasses import dataclass
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

import sympy as sp

from dualgraph import CurveRecord, CurveRole, ResolutionGraph
from errors import AdjunctionViolated, InvalidFan, MinusOneCoefficient, SchemaError
from exact import RatExpr, as_rational, w_power

logger = logging.getLogger(__name__)

Ray = Tuple[int, int]


def det(a: Ray, b: Ray) -> int:
    return a[0] * b[1] - a[1] * b[0]


def pairing(m: Sequence, v: Ray):
    return m[0] * v[0] + m[1] * v[1]


def _half(v: Ray) -> int:
    return 0 if v[1] > 0 or (v[1] == 0 and v[0] > 0) else 1


def _precedes(a: Ray, b: Ray) -> bool:
    """Strict counterclockwise order of directions starting at the positive x-axis"""
    if _half(a) != _half(b):
        return _half(a) < _half(b)
    return det(a, b) > 0


@dataclass(frozen=True)
class Fan2D:
    rays: Tuple[Ray, ...]

    def __post_init__(self):
        rays = tuple((int(x), int(y)) for x, y in self.rays)
        object.__setattr__(self, 'rays', rays)
        n = len(rays)
        if n < 3:
            raise InvalidFan(f"a complete fan needs at least 3 rays, got {n}")
        for v in rays:
            if gcd(abs(v[0]), abs(v[1])) != 1:
                raise InvalidFan(f"ray {v} is not primitive")
        for i in range(n):
            d = det(rays[i], rays[(i + 1) % n])
            if d != 1:
                raise InvalidFan(f"cone ({rays[i]}, {rays[(i + 1) % n]}) has det {d}, expected 1")
        wraps = sum(1 for i in range(n) if not _precedes(rays[i], rays[(i + 1) % n]))
        if wraps != 1:
            raise InvalidFan(f"rays wind {wraps} times around the origin")

    def __len__(self):
        return len(self.rays)

    def ray(self, i: int) -> Ray:
        return self.rays[i % len(self.rays)]

    def cones(self) -> List[Tuple[int, int]]:
        n = len(self.rays)
        return [(i, (i + 1) % n) for i in range(n)]


def self_intersections(f: Fan2D) -> List[int]:
    """D_i^2 = -b_i where v_(i-1) + v_(i+1) = b_i v_i"""
    result = []
    for i, v in enumerate(f.rays):
        prev, nxt = f.ray(i - 1), f.ray(i + 1)
        b = det(prev, nxt)
        if (prev[0] + nxt[0], prev[1] + nxt[1]) != (b * v[0], b * v[1]):
            raise InvalidFan(f"ray {v} violates v_(i-1) + v_(i+1) = b v_i")
        result.append(-b)
    if sum(result) != 12 - 3 * len(f.rays):
        raise InvalidFan(f"self-intersections sum to {sum(result)}, expected {12 - 3 * len(f.rays)}")
    return result


def blowup_fan(f: Fan2D, i: int) -> Fan2D:
    """Insert v_i + v_(i+1) into cone i"""
    n = len(f.rays)
    if not 0 <= i < n:
        raise InvalidFan(f"cone index {i} outside 0..{n - 1}")
    a, b = f.ray(i), f.ray(i + 1)
    rays = list(f.rays)
    rays.insert(i + 1, (a[0] + b[0], a[1] + b[1]))
    return Fan2D(tuple(rays))


@dataclass(frozen=True)
class ToricPair:
    fan: Fan2D
    coeffs: Tuple[sp.Rational, ...]

    def __post_init__(self):
        coeffs = tuple(as_rational(a) for a in self.coeffs)
        object.__setattr__(self, 'coeffs', coeffs)
        if len(coeffs) != len(self.fan.rays):
            raise InvalidFan(f"{len(coeffs)} coefficients for {len(self.fan.rays)} rays")

    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> 'ToricPair':
        if not isinstance(doc, dict) or 'rays' not in doc:
            raise SchemaError("toric pair needs 'rays'", "$")
        rays = []
        for k, ray in enumerate(doc['rays']):
            if (not isinstance(ray, list) or len(ray) != 2
                    or not all(isinstance(x, int) and not isinstance(x, bool) for x in ray)):
                raise SchemaError("ray must be a pair of integers", f"$.rays[{k}]")
            rays.append(tuple(ray))
        raw = doc.get('coeffs', ['0'] * len(rays))
        coeffs = []
        for k, value in enumerate(raw):
            if isinstance(value, float):
                raise SchemaError("coefficients must be fraction strings", f"$.coeffs[{k}]")
            try:
                coeffs.append(as_rational(value))
            except Exception:
                raise SchemaError(f"not an exact fraction: {value!r}", f"$.coeffs[{k}]")
        return cls(Fan2D(tuple(rays)), tuple(coeffs))

    def to_dict(self) -> Dict[str, Any]:
        return {'rays': [list(v) for v in self.fan.rays], 'coeffs': [str(a) for a in self.coeffs]}


def is_cy_pair(p: ToricPair) -> Optional[Tuple[sp.Rational, sp.Rational]]:
    """The functional m with <m, v_i> = a_i + 1 on every ray, or None"""
    v0, v1 = p.fan.rays[0], p.fan.rays[1]
    matrix = sp.Matrix([list(v0), list(v1)])
    rhs = sp.Matrix([p.coeffs[0] + 1, p.coeffs[1] + 1])
    m = tuple(sp.Rational(x) for x in matrix.LUsolve(rhs))
    for v, a in zip(p.fan.rays, p.coeffs):
        if pairing(m, v) != a + 1:
            return None
    return m


def blowup_pair(p: ToricPair, i: int) -> ToricPair:
    """Blow up fixed point i; the new ray gets 1 + a_i + a_(i+1)"""
    fan = blowup_fan(p.fan, i)
    n = len(p.fan.rays)
    coeff = 1 + p.coeffs[i] + p.coeffs[(i + 1) % n]
    coeffs = list(p.coeffs)
    coeffs.insert(i + 1, coeff)
    return ToricPair(fan, tuple(coeffs))


def projective_plane(coeffs=(0, 0, 0)) -> ToricPair:
    return ToricPair(Fan2D(((1, 0), (0, 1), (-1, -1))), tuple(coeffs))


def p1_x_p1(coeffs=(0, 0, 0, 0)) -> ToricPair:
    return ToricPair(Fan2D(((1, 0), (0, 1), (-1, 0), (0, -1))), tuple(coeffs))


def hirzebruch(k: int, coeffs=(0, 0, 0, 0)) -> ToricPair:
    """F_k; the ray (0,1) is the section of self-intersection -k"""
    return ToricPair(Fan2D(((1, 0), (0, 1), (-1, k), (0, -1))), tuple(coeffs))


@dataclass(frozen=True)
class LocalModel:
    pair: ToricPair
    e_index: int

    @property
    def neighbours(self) -> Tuple[int, int]:
        n = len(self.pair.fan.rays)
        return (self.e_index - 1) % n, (self.e_index + 1) % n


def local_model(m_t: int, a1, a2) -> LocalModel:
    """
    Blow up P^1 x P^1 with coefficients (a1, a2, -a1-2, -a2-2) at D_1 n D_2, then
    m_t - 1 more times at the point where E meets its newest neighbour, giving a
    -1 curve E of self-intersection -m_t between curves carrying a1 and a2.
    """
    a1, a2 = as_rational(a1), as_rational(a2)
    if a1 + a2 + 2 != 0:
        raise AdjunctionViolated(f"a1 + a2 + 2 = {a1 + a2 + 2}, expected 0")
    if a1 == -1:
        raise MinusOneCoefficient("neighbours of the -1 curve cannot carry -1")
    if m_t < 1:
        raise AdjunctionViolated(f"m_t must be positive, got {m_t}")
    pair = blowup_pair(p1_x_p1((a1, a2, -a1 - 2, -a2 - 2)), 0)
    e = 1
    for _ in range(m_t - 1):
        pair = blowup_pair(pair, e)
    logger.debug(f"local model m_t={m_t}: {len(pair.fan.rays)} rays, E at {e}")
    return LocalModel(pair, e)


@dataclass(frozen=True)
class FixedPointDatum:
    """Cone (v_i, v_(i+1)); weights[k] is the character of the coordinate cutting out D of rays[k]"""
    cone: int
    rays: Tuple[int, int]
    weights: Tuple[Ray, Ray]


def fixed_point_data(f: Fan2D) -> List[FixedPointDatum]:
    result = []
    for k, (i, j) in enumerate(f.cones()):
        (a, b), (c, d) = f.rays[i], f.rays[j]
        # inverse of [[a, b], [c, d]] with det 1, read by columns
        result.append(FixedPointDatum(k, (i, j), ((d, -c), (-b, a))))
    return result


def generic_cocharacter(f: Fan2D) -> Tuple[int, int]:
    """nu = (1, k) with the smallest k >= 1 pairing nonzero with every tangent weight"""
    weights = [u for p in fixed_point_data(f) for u in p.weights]
    k = 1
    while any(pairing((1, k), u) == 0 for u in weights):
        k += 1
    return (1, k)


def toric_null_perturbation(p: ToricPair, functional: Optional[Tuple[int, int]] = None
                            ) -> Dict[int, sp.Rational]:
    """b_i = <m', v_i>; linearly trivial, so null on every curve and Calabi-Yau preserving"""
    minus_one = [i for i, a in enumerate(p.coeffs) if a == -1]
    if functional is None:
        functional = (1, 0)
        candidates = [(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2)]
        for m in candidates:
            if all(pairing(m, p.fan.rays[i]) != 0 for i in minus_one):
                functional = m
                break
    b = {i: sp.Integer(pairing(functional, v)) for i, v in enumerate(p.fan.rays)}
    if any(b[i] == 0 for i in minus_one):
        raise AdjunctionViolated(f"functional {functional} vanishes on a -1 ray")
    return b


def curve_id(i: int) -> str:
    return f"D{i}"


def pair_graph(p: ToricPair) -> ResolutionGraph:
    """The toric boundary as a solved graph of compact curves"""
    selfs = self_intersections(p.fan)
    curves = tuple(CurveRecord(curve_id(i), 0, s, CurveRole.EXCEPTIONAL, a)
                   for i, (s, a) in enumerate(zip(selfs, p.coeffs)))
    nodes = tuple((curve_id(i), curve_id(j)) for i, j in p.fan.cones())
    return ResolutionGraph(curves, nodes)


def torus_e_polynomial() -> RatExpr:
    """E((C*)^2) = (w - 1)^2, the open stratum of a toric surface"""
    return (w_power(1) - 1) ** 2
