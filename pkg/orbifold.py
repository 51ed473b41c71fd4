#!/usr/bin/env python3
"""
Orbifold E-functions and the McKay Correspondence

Sector data are supplied per conjugacy class: the identity sector carries the
E-polynomials of the quotient strata, every other class lists its fixed curves
and fixed points with their weights. Each fixed stratum contributes
w^F * E(stratum / centralizer) * prod(geometric factors); strata on coefficient
-1 curves are summed under a null-perturbation and resolved by the limit
engine, and rotations of -1 curves contribute the H(t, g) terms.
"""

import logging
from collections import defaultdict
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import sympy as sp

from dualgraph import CurveRecord, CurveRole, ResolutionGraph, ensure_solved, is_admissible
from errors import (
    DegreeThree,
    InconsistentCover,
    InvalidSector,
    NotAdmissible,
    NotRotationEligible,
    SchemaError,
)
from exact import (
    ZERO,
    RatExpr,
    as_rational,
    euler_specialize,
    geometric_factor,
    limit_at_one,
    parse,
    render,
    w_power,
)
from stringy import (
    LOCAL,
    PERTURBATION_VARIABLE,
    StringyMode,
    curve_e_polynomial,
    e_stringy,
    euler_stringy_termwise,
    null_perturbation,
    perturbed_factor,
)

logger = logging.getLogger(__name__)

IDENTITY = 'e'


@dataclass(frozen=True)
class QuotientStrata:
    """E-polynomials of the strata of X/G; missing entries default to the trivial group"""
    open_curves: Dict[str, RatExpr] = field(default_factory=dict)
    nodes: Dict[Tuple[str, str], int] = field(default_factory=dict)
    ambient: Optional[RatExpr] = None

    def __hash__(self):
        return hash((tuple(sorted(self.open_curves)), tuple(sorted(self.nodes))))


@dataclass(frozen=True)
class WholeSurface:
    strata: QuotientStrata = field(default_factory=QuotientStrata)


@dataclass(frozen=True)
class FixedCurve:
    curve_id: str
    normal_weight: sp.Rational
    divisor_weights: Dict[str, sp.Rational] = field(default_factory=dict, hash=False)
    quotient_open_E: Optional[RatExpr] = None
    quotient_nodes: Dict[str, int] = field(default_factory=dict, hash=False)


@dataclass(frozen=True)
class FixedPoint:
    """tangent_weights[i] acts on the direction normal to incident[i]; the rest are free"""
    tangent_weights: Tuple[sp.Rational, sp.Rational]
    incident: Tuple[str, ...] = ()


SectorKind = Union[WholeSurface, FixedCurve, FixedPoint]


@dataclass(frozen=True)
class SectorRecord:
    class_id: str
    kind: SectorKind


@dataclass(frozen=True)
class RotationRecord:
    """g rotates the -1 curve `curve_id` with weight alpha at its node with the first neighbour"""
    class_id: str
    curve_id: str
    alpha: sp.Rational
    gamma1: sp.Rational = sp.Integer(0)
    gamma2: sp.Rational = sp.Integer(0)
    first_neighbour: Optional[str] = None


@dataclass(frozen=True)
class OrbifoldDatum:
    graph: ResolutionGraph
    sectors: Tuple[SectorRecord, ...]
    rotations: Tuple[RotationRecord, ...] = ()
    ambient: Optional[RatExpr] = None


@dataclass(frozen=True)
class CoverDatum:
    ramification: Dict[str, int]
    curve_map: Dict[str, str] = field(default_factory=dict)

    def quotient_of(self, cover_id: str) -> str:
        return self.curve_map.get(cover_id, cover_id)


@dataclass(frozen=True)
class StratumTerm:
    """One fixed stratum: w^F * weight * prod over `divisors` of geometric factors"""
    weight: RatExpr
    divisors: Tuple[str, ...]
    shift: sp.Rational
    divisor_weights: Tuple[Tuple[str, sp.Rational], ...]
    label: str = ''


def _in_unit_interval(x: sp.Rational, closed_left: bool = True) -> bool:
    return (0 <= x if closed_left else 0 < x) and x < 1


def validate_sector(s: SectorRecord, graph: ResolutionGraph):
    kind = s.kind
    if isinstance(kind, WholeSurface):
        if s.class_id != IDENTITY:
            raise InvalidSector(f"only the identity class fixes the whole surface, not {s.class_id}")
        return
    if s.class_id == IDENTITY:
        raise InvalidSector("the identity class fixes the whole surface")
    if isinstance(kind, FixedCurve):
        if not graph.has_curve(kind.curve_id):
            raise InvalidSector(f"fixed curve {kind.curve_id} is not in the graph", s.class_id)
        if not _in_unit_interval(kind.normal_weight):
            raise InvalidSector(f"normal weight {kind.normal_weight} outside [0,1)", s.class_id)
        for k, eps in kind.divisor_weights.items():
            if k != kind.curve_id:
                raise InvalidSector(f"a fixed curve lies only in its own divisor, not {k}",
                                    s.class_id)
            if eps != kind.normal_weight:
                raise InvalidSector("O(C)|C is the normal bundle; weights must agree",
                                    s.class_id)
        for n in kind.quotient_nodes:
            if n not in graph.neighbours(kind.curve_id):
                raise InvalidSector(f"{n} does not meet {kind.curve_id}", s.class_id)
    elif isinstance(kind, FixedPoint):
        if len(kind.tangent_weights) != 2:
            raise InvalidSector("a surface fixed point has two tangent weights", s.class_id)
        if not all(_in_unit_interval(a) for a in kind.tangent_weights):
            raise InvalidSector(f"tangent weights {kind.tangent_weights} outside [0,1)",
                                s.class_id)
        if len(kind.incident) > 2:
            raise InvalidSector("at most two curves pass through a fixed point", s.class_id)
        for c in kind.incident:
            if not graph.has_curve(c):
                raise InvalidSector(f"incident curve {c} is not in the graph", s.class_id)
    else:
        raise InvalidSector(f"unknown sector kind {kind!r}", s.class_id)


def fermionic_shift(s: SectorRecord, graph: ResolutionGraph) -> sp.Rational:
    """F(g, D): weights on free normal directions plus (1 + a_k) times divisor weights"""
    graph = ensure_solved(graph)
    term_shift, weights = _shift_data(s)
    return term_shift + sum(((1 + graph.curve(k).coeff) * eps for k, eps in weights),
                            sp.Integer(0))


def _shift_data(s: SectorRecord) -> Tuple[sp.Rational, Tuple[Tuple[str, sp.Rational], ...]]:
    kind = s.kind
    if isinstance(kind, WholeSurface):
        return sp.Integer(0), ()
    if isinstance(kind, FixedCurve):
        eps = kind.divisor_weights.get(kind.curve_id, kind.normal_weight)
        return sp.Integer(0), ((kind.curve_id, eps),)
    free = sum(kind.tangent_weights[len(kind.incident):], sp.Integer(0))
    weights = tuple(zip(kind.incident, kind.tangent_weights[:len(kind.incident)]))
    return free, weights


def _counted(graph: ResolutionGraph, curve_id: str, mode: StringyMode) -> bool:
    return mode.is_global or graph.curve(curve_id).exceptional


def sector_terms(s: SectorRecord, graph: ResolutionGraph, mode: StringyMode,
                 ambient: Optional[RatExpr] = None) -> List[StratumTerm]:
    shift, weights = _shift_data(s)
    kind = s.kind
    terms = []
    if isinstance(kind, WholeSurface):
        quotient = kind.strata
        if mode.is_global:
            base = quotient.ambient if quotient.ambient is not None else ambient
            if base is None:
                raise InvalidSector("global mode needs the E-polynomial of the open quotient",
                                    IDENTITY)
            terms.append(StratumTerm(base, (), shift, weights, 'ambient'))
        for c in graph.curves:
            if not _counted(graph, c.id, mode):
                continue
            removed = sum(graph.neighbours(c.id).values())
            default = curve_e_polynomial(c.genus) - removed
            e = quotient.open_curves.get(c.id, default)
            terms.append(StratumTerm(e, (c.id,), shift, weights, c.id))
        for first, second in sorted(set(graph.nodes)):
            if not (_counted(graph, first, mode) or _counted(graph, second, mode)):
                continue
            count = quotient.nodes.get((first, second), graph.multiplicity(first, second))
            if count:
                terms.append(StratumTerm(RatExpr.constant(count), (first, second), shift,
                                         weights, f"{first}-{second}"))
    elif isinstance(kind, FixedCurve):
        c = graph.curve(kind.curve_id)
        if not _counted(graph, c.id, mode):
            return []
        open_e = kind.quotient_open_E
        if open_e is None:
            open_e = curve_e_polynomial(c.genus) - sum(graph.neighbours(c.id).values())
        terms.append(StratumTerm(open_e, (c.id,), shift, weights, f"{s.class_id}:{c.id}"))
        nodes = dict(graph.neighbours(c.id))
        nodes.update(kind.quotient_nodes)
        for n, count in sorted(nodes.items()):
            if count:
                terms.append(StratumTerm(RatExpr.constant(count), (c.id, n), shift, weights,
                                         f"{s.class_id}:{c.id}-{n}"))
    else:
        if kind.incident and not any(_counted(graph, i, mode) for i in kind.incident):
            return []
        if not kind.incident and not mode.is_global:
            return []
        terms.append(StratumTerm(RatExpr.constant(1), tuple(kind.incident), shift, weights,
                                 f"{s.class_id}:point"))
    return terms


def term_value(term: StratumTerm, graph: ResolutionGraph,
               b: Optional[Dict[str, sp.Rational]] = None) -> RatExpr:
    coeff = {c.id: c.coeff for c in graph.curves}
    f = term.shift + sum(((1 + coeff[k]) * eps for k, eps in term.divisor_weights),
                         sp.Integer(0))
    if b is None:
        value = w_power(f) * term.weight
        for j in term.divisors:
            value = value * geometric_factor(coeff[j])
        return value
    s_exp = sum((b.get(k, 0) * eps for k, eps in term.divisor_weights), sp.Integer(0))
    value = RatExpr.monomial({'U': f, 'V': f, PERTURBATION_VARIABLE: s_exp}) * term.weight
    for j in term.divisors:
        value = value * perturbed_factor(coeff[j], sp.Rational(b.get(j, 0)))
    return value


def _rotation_neighbours(r: RotationRecord, graph: ResolutionGraph) -> Tuple[CurveRecord, CurveRecord]:
    t = graph.curve(r.curve_id)
    neighbours = graph.neighbours(r.curve_id)
    if t.coeff != -1 or len(neighbours) != 2 or any(v != 1 for v in neighbours.values()):
        raise NotRotationEligible(f"{r.curve_id} is not a -1 curve with two neighbours")
    if not (0 < r.alpha < 1 and _in_unit_interval(r.gamma1) and _in_unit_interval(r.gamma2)):
        raise NotRotationEligible("rotation weights must satisfy 0 < alpha < 1, 0 <= gamma < 1")
    ids = sorted(neighbours)
    if r.first_neighbour is not None:
        if r.first_neighbour not in neighbours:
            raise NotRotationEligible(f"{r.first_neighbour} does not meet {r.curve_id}")
        ids.sort(key=lambda i: i != r.first_neighbour)
    return graph.curve(ids[0]), graph.curve(ids[1])


def rotation_terms(r: RotationRecord, graph: ResolutionGraph) -> List[StratumTerm]:
    """The two fixed points of a rotated -1 curve as fixed-point strata"""
    first, second = _rotation_neighbours(r, graph)
    p1 = StratumTerm(RatExpr.constant(1), (r.curve_id, first.id), sp.Integer(0),
                     ((first.id, r.alpha), (r.curve_id, r.gamma1)), f"{r.class_id}:p1")
    p2 = StratumTerm(RatExpr.constant(1), (r.curve_id, second.id), sp.Integer(0),
                     ((second.id, 1 - r.alpha), (r.curve_id, r.gamma2)), f"{r.class_id}:p2")
    return [p1, p2]


def h_rotation(r: RotationRecord, graph: ResolutionGraph,
               perturbation: Optional[Dict[str, sp.Rational]] = None) -> RatExpr:
    """H(t, g) by the limit engine"""
    graph = ensure_solved(graph)
    b = perturbation if perturbation is not None else null_perturbation(graph)
    total = ZERO
    for term in rotation_terms(r, graph):
        total = total + term_value(term, graph, b)
    return limit_at_one(total, PERTURBATION_VARIABLE)


def h_rotation_closed(alpha, gamma1, gamma2, m: int, a) -> RatExpr:
    """-w^(alpha a) [alpha m + g1 - g2 + w^a((1-alpha)m + g2 - g1)] (w-1)^2/(w^a - 1)^2"""
    alpha, gamma1, gamma2, a = (as_rational(x) for x in (alpha, gamma1, gamma2, a))
    w = w_power(1)
    bracket = alpha * m + gamma1 - gamma2 + w_power(a) * ((1 - alpha) * m + gamma2 - gamma1)
    return -w_power(alpha * a) * bracket * (w - 1) ** 2 / (w_power(a) - 1) ** 2


def validate_datum(d: OrbifoldDatum) -> ResolutionGraph:
    graph = ensure_solved(d.graph)
    report = is_admissible(graph, minimal=False)
    if not report:
        raise NotAdmissible(f"graph is not admissible: {report.reason}", report.curve_id)
    if not any(s.class_id == IDENTITY for s in d.sectors):
        raise InvalidSector("identity sector missing")
    for s in d.sectors:
        validate_sector(s, graph)
    for r in d.rotations:
        _rotation_neighbours(r, graph)
    return graph


def e_orb(d: OrbifoldDatum, mode: StringyMode = LOCAL,
          perturbation: Optional[Dict[str, sp.Rational]] = None) -> RatExpr:
    graph = validate_datum(d)
    if mode.is_global and graph.boundary:
        raise NotAdmissible("global mode needs a graph without strict transforms")
    b = perturbation if perturbation is not None else null_perturbation(graph)
    minus_one = {c.id for c in graph.minus_one_curves()}
    ambient = d.ambient if d.ambient is not None else mode.ambient

    total = ZERO
    singular: Dict[str, RatExpr] = defaultdict(lambda: ZERO)
    for s in d.sectors:
        for term in sector_terms(s, graph, mode, ambient):
            touched = sorted(set(term.divisors) & minus_one)
            if not touched:
                total = total + term_value(term, graph)
            else:
                singular[touched[0]] = singular[touched[0]] + term_value(term, graph, b)
    for curve_id in sorted(singular):
        total = total + limit_at_one(singular[curve_id], PERTURBATION_VARIABLE)
    for r in d.rotations:
        total = total + h_rotation(r, graph, b)
    return total


def euler_orb_termwise(d: OrbifoldDatum, mode: StringyMode = LOCAL) -> sp.Rational:
    """Sum of e(fixed stratum)/prod(a_j + 1); only for data without -1 curves"""
    graph = validate_datum(d)
    ambient = d.ambient if d.ambient is not None else mode.ambient
    total = sp.Integer(0)
    for s in d.sectors:
        for term in sector_terms(s, graph, mode, ambient):
            value = euler_specialize(term.weight)
            for j in term.divisors:
                value /= graph.curve(j).coeff + 1
            total += value
    return total


def cover_coefficients(c: CoverDatum, quotient: ResolutionGraph) -> Dict[str, sp.Rational]:
    """b_i = -1 + r_i (a_i + 1) for every quotient component with ramification r_i"""
    quotient = ensure_solved(quotient)
    result = {}
    for curve in quotient.curves:
        r = c.ramification.get(curve.id, 1)
        if r < 1:
            raise InconsistentCover(f"ramification {r} on {curve.id} is not positive")
        result[curve.id] = -1 + r * (curve.coeff + 1)
    return result


def mckay_verify(cover: OrbifoldDatum, quotient: ResolutionGraph,
                 quotient_mode: StringyMode = LOCAL,
                 ramification: Optional[CoverDatum] = None) -> bool:
    """E_orb of the cover equals E_str of the quotient pair"""
    quotient = ensure_solved(quotient)
    cover_graph = ensure_solved(cover.graph)
    if ramification is not None:
        expected = cover_coefficients(ramification, quotient)
        for c in cover_graph.curves:
            q = ramification.quotient_of(c.id)
            if q not in expected:
                raise InconsistentCover(f"{c.id} maps to unknown quotient curve {q}")
            if expected[q] != c.coeff:
                raise InconsistentCover(
                    f"{c.id} has coefficient {c.coeff}, ramification predicts {expected[q]}")
    cover_mode = quotient_mode
    if quotient_mode.is_global:
        if cover.ambient is None:
            raise InconsistentCover("global comparison needs the cover's open quotient stratum")
        cover_mode = StringyMode(cover.ambient)
    left = e_orb(cover, cover_mode)
    right = e_stringy(quotient, quotient_mode)
    if left != right:
        logger.warning(f"McKay mismatch: orbifold {render(left)} vs stringy {render(right)}")
        return False
    return True


def euler_cone_quotient(d: int, order_g: int, e_c_mod_g: int) -> sp.Rational:
    """
    Stringy Euler number of the quotient of the cone over a smooth plane curve
    of degree d by a group of order |G| acting effectively on the plane:
    (|G| + 1) e(C/G) / (3 - d) - d.

    When G acts on C through scalars (e(C/G) = e(C)) the value is also the
    termwise Euler number of the quotient graph, a single curve of
    self-intersection -d|G|, and the two are compared. Otherwise e(C/G) must
    be 2 - 2g for a quotient curve and the Riemann-Hurwitz branch degree
    |G| e(C/G) - e(C) must be non-negative.
    """
    if d == 3:
        raise DegreeThree("the cone over a plane cubic is strictly log-canonical")
    if order_g < 1:
        raise InconsistentCover(f"group order must be positive, got {order_g}")
    e_curve = -d * (d - 3)
    value = sp.Rational((order_g + 1) * e_c_mod_g, 3 - d) - d
    if e_c_mod_g == e_curve:
        quotient = ensure_solved(cone_graph(d, self_int=-d * order_g))
        termwise = euler_stringy_termwise(quotient)
        if termwise != value:
            raise InconsistentCover(f"termwise Euler number {termwise} of the quotient graph "
                                    f"differs from {value}")
        return value
    if e_c_mod_g > 2 or e_c_mod_g % 2:
        raise InconsistentCover(f"e(C/G) = {e_c_mod_g} is not the Euler number of a curve")
    branch = order_g * e_c_mod_g - e_curve
    if branch < 0:
        raise InconsistentCover(f"Riemann-Hurwitz branch degree {branch} is negative")
    logger.debug(f"cone quotient d={d} |G|={order_g}: branch degree {branch}")
    return value


# constructors for cyclic models

def cone_graph(d: int, coeff=None, self_int: Optional[int] = None) -> ResolutionGraph:
    """Single curve of genus (d-1)(d-2)/2; the cone over a degree d plane curve by default"""
    genus = (d - 1) * (d - 2) // 2
    record = CurveRecord('C', genus, -d if self_int is None else self_int,
                         CurveRole.EXCEPTIONAL, None if coeff is None else as_rational(coeff))
    return ResolutionGraph((record,), ())


def cyclic_cone_model(n: int, d: int) -> Tuple[OrbifoldDatum, ResolutionGraph, CoverDatum]:
    """Z_n acting diagonally on the cone over a degree d curve, with its quotient"""
    cover = ensure_solved(cone_graph(d))
    sectors = [SectorRecord(IDENTITY, WholeSurface())]
    for k in range(1, n):
        weight = sp.Rational(k, n)
        sectors.append(SectorRecord(f"g{k}", FixedCurve('C', weight, {'C': weight})))
    quotient = ensure_solved(cone_graph(d, self_int=-d * n))
    return OrbifoldDatum(cover, tuple(sectors)), quotient, CoverDatum({'C': n})


def minus_one_chain(m: int, a) -> ResolutionGraph:
    """A -1 curve T of self-intersection -m between boundary curves of coefficients a-1, -a-1"""
    a = as_rational(a)
    curves = (
        CurveRecord('T', 0, -m, CurveRole.EXCEPTIONAL, None),
        CurveRecord('N1', 0, None, CurveRole.STRICT_TRANSFORM, a - 1),
        CurveRecord('N2', 0, None, CurveRole.STRICT_TRANSFORM, -a - 1),
    )
    return ensure_solved(ResolutionGraph(curves, (('N1', 'T'), ('N2', 'T'))))


def cyclic_curve_sum(r: int, a, open_e: RatExpr) -> RatExpr:
    """sum_k w^(k(a+1)) E (w-1)/(w^(r(a+1)) - 1) over the inertia group Z_r of a curve"""
    a = as_rational(a)
    b = -1 + r * (a + 1)
    total = ZERO
    for k in range(r):
        total = total + w_power(k * (a + 1)) * open_e * geometric_factor(b)
    return total


# JSON codec

def _fraction(value, path: str) -> sp.Rational:
    if isinstance(value, float):
        raise SchemaError("weights must be fraction strings, not floats", path)
    try:
        return as_rational(value)
    except Exception:
        raise SchemaError(f"not an exact fraction: {value!r}", path)


def _expression(value, path: str) -> RatExpr:
    try:
        return parse(str(value))
    except Exception:
        raise SchemaError(f"cannot parse expression {value!r}", path)


def datum_from_dict(doc: Dict[str, Any]) -> OrbifoldDatum:
    graph = ResolutionGraph.from_dict(doc)
    sectors = []
    for k, item in enumerate(doc.get('sectors', [])):
        path = f"$.sectors[{k}]"
        if not isinstance(item, dict) or 'class' not in item or 'kind' not in item:
            raise SchemaError("sector needs 'class' and 'kind'", path)
        kind = item['kind']
        if kind == 'identity':
            open_curves = {cid: _expression(e, f"{path}.open_curves.{cid}")
                           for cid, e in item.get('open_curves', {}).items()}
            nodes = {}
            for j, entry in enumerate(item.get('nodes', [])):
                if not isinstance(entry, list) or len(entry) != 3:
                    raise SchemaError("quotient node entry is [id, id, count]",
                                      f"{path}.nodes[{j}]")
                a, b, count = entry
                nodes[tuple(sorted((str(a), str(b))))] = int(count)
            ambient = _expression(item['ambient'], f"{path}.ambient") if 'ambient' in item else None
            sectors.append(SectorRecord(IDENTITY, WholeSurface(QuotientStrata(open_curves, nodes,
                                                                              ambient))))
        elif kind == 'curve':
            weight = _fraction(item.get('normal_weight'), f"{path}.normal_weight")
            divisor = {cid: _fraction(v, f"{path}.divisor_weights.{cid}")
                       for cid, v in item.get('divisor_weights', {}).items()}
            open_e = (_expression(item['quotient_open_E'], f"{path}.quotient_open_E")
                      if 'quotient_open_E' in item else None)
            nodes = {str(n): int(c) for n, c in item.get('quotient_nodes', {}).items()}
            sectors.append(SectorRecord(str(item['class']),
                                        FixedCurve(str(item['curve']), weight, divisor, open_e, nodes)))
        elif kind == 'point':
            weights = item.get('tangent_weights', [])
            if len(weights) != 2:
                raise SchemaError("a fixed point has two tangent weights", f"{path}.tangent_weights")
            sectors.append(SectorRecord(str(item['class']), FixedPoint(
                tuple(_fraction(w, f"{path}.tangent_weights[{i}]") for i, w in enumerate(weights)),
                tuple(str(c) for c in item.get('incident', [])))))
        else:
            raise SchemaError(f"unknown sector kind {kind!r}", f"{path}.kind")
    rotations = []
    for k, item in enumerate(doc.get('rotations', [])):
        path = f"$.rotations[{k}]"
        try:
            rotations.append(RotationRecord(
                str(item['class']), str(item['curve']), _fraction(item['alpha'], f"{path}.alpha"),
                _fraction(item.get('gamma1', '0'), f"{path}.gamma1"),
                _fraction(item.get('gamma2', '0'), f"{path}.gamma2"),
                item.get('first_neighbour')))
        except (KeyError, TypeError):
            raise SchemaError("rotation needs 'class', 'curve' and 'alpha'", path)
    ambient = _expression(doc['ambient'], "$.ambient") if 'ambient' in doc else None
    return OrbifoldDatum(graph, tuple(sectors), tuple(rotations), ambient)


def datum_to_dict(d: OrbifoldDatum) -> Dict[str, Any]:
    doc = d.graph.to_dict()
    sectors = []
    for s in d.sectors:
        kind = s.kind
        if isinstance(kind, WholeSurface):
            entry = {'class': IDENTITY, 'kind': 'identity'}
            q = kind.strata
            if q.open_curves:
                entry['open_curves'] = {cid: render(e) for cid, e in sorted(q.open_curves.items())}
            if q.nodes:
                entry['nodes'] = [[a, b, n] for (a, b), n in sorted(q.nodes.items())]
            if q.ambient is not None:
                entry['ambient'] = render(q.ambient)
        elif isinstance(kind, FixedCurve):
            entry = {'class': s.class_id, 'kind': 'curve', 'curve': kind.curve_id,
                     'normal_weight': str(kind.normal_weight)}
            if kind.divisor_weights:
                entry['divisor_weights'] = {k: str(v) for k, v in sorted(kind.divisor_weights.items())}
            if kind.quotient_open_E is not None:
                entry['quotient_open_E'] = render(kind.quotient_open_E)
            if kind.quotient_nodes:
                entry['quotient_nodes'] = dict(sorted(kind.quotient_nodes.items()))
        else:
            entry = {'class': s.class_id, 'kind': 'point',
                     'tangent_weights': [str(w) for w in kind.tangent_weights],
                     'incident': list(kind.incident)}
        sectors.append(entry)
    doc['sectors'] = sectors
    doc['rotations'] = [
        {'class': r.class_id, 'curve': r.curve_id, 'alpha': str(r.alpha),
         'gamma1': str(r.gamma1), 'gamma2': str(r.gamma2),
         **({'first_neighbour': r.first_neighbour} if r.first_neighbour else {})}
        for r in d.rotations
    ]
    if d.ambient is not None:
        doc['ambient'] = render(d.ambient)
    return doc
