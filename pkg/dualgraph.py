#!/usr/bin/env python3
"""
Resolution Dual Graphs

Weighted dual graphs of surface log resolutions: one record per curve
(exceptional curves and strict transforms of the boundary), one node per
transversal intersection point. Provides the intersection matrix, the
discrepancy solver, log-terminal classification, admissibility, blow-ups and
the open/node strata used by the E-function sums.

JSON layout:
    {"curves":   [{"id": "E0", "genus": 0, "self": -2, "role": "exceptional"}],
     "boundary": [{"id": "S0", "coeff": "-1/2"}],
     "nodes":    [["E0", "S0"]]}
Exceptional curves may also carry a solved "coeff". Fractions are strings.
"""

import logging
from collections import Counter
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple, Union

import sympy as sp

from errors import (
    BlowupAtMinusOneCurve,
    NotNegativeDefinite,
    SchemaError,
    UnknownSite,
)
from exact import as_rational

logger = logging.getLogger(__name__)


class CurveRole(Enum):
    EXCEPTIONAL = 'exceptional'
    STRICT_TRANSFORM = 'strict'


class Classification(Enum):
    LOG_TERMINAL = 'log-terminal'
    STRICTLY_LOG_CANONICAL = 'strictly log-canonical'
    NOT_LOG_CANONICAL = 'not log-canonical'


@dataclass(frozen=True)
class CurveRecord:
    id: str
    genus: int = 0
    self_int: Optional[int] = None
    role: CurveRole = CurveRole.EXCEPTIONAL
    coeff: Optional[sp.Rational] = None

    @property
    def exceptional(self) -> bool:
        return self.role is CurveRole.EXCEPTIONAL

    @property
    def m(self) -> int:
        """-E.E, the degree of the normal bundle with reversed sign"""
        return -self.self_int


@dataclass(frozen=True)
class FreePoint:
    """A point off every curve of the graph"""


@dataclass(frozen=True)
class PointOn:
    curve_id: str


@dataclass(frozen=True)
class Node:
    first: str
    second: str


Site = Union[FreePoint, PointOn, Node]


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    curve_id: Optional[str] = None
    reason: str = ''

    def __bool__(self):
        return self.admissible


@dataclass(frozen=True)
class Strata:
    open_curves: Tuple[Tuple[str, int], ...]
    nodes: Tuple[Tuple[str, str], ...]


def _node_key(a: str, b: str) -> Tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class ResolutionGraph:
    curves: Tuple[CurveRecord, ...] = ()
    nodes: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        ids = [c.id for c in self.curves]
        duplicates = [i for i, n in Counter(ids).items() if n > 1]
        if duplicates:
            raise SchemaError(f"duplicate curve id {duplicates[0]}", "$.curves")
        for c in self.curves:
            if c.genus < 0:
                raise SchemaError(f"negative genus on {c.id}", "$.curves")
            if c.exceptional and c.self_int is None:
                raise SchemaError(f"exceptional curve {c.id} needs a self-intersection",
                                  "$.curves")
            if not c.exceptional and c.coeff is None:
                raise SchemaError(f"boundary curve {c.id} needs a coefficient", "$.boundary")
        known = set(ids)
        normalized = []
        for k, (a, b) in enumerate(self.nodes):
            if a == b:
                raise SchemaError(f"self-node on {a}", f"$.nodes[{k}]")
            for end in (a, b):
                if end not in known:
                    raise SchemaError(f"node refers to unknown curve {end}", f"$.nodes[{k}]")
            normalized.append(_node_key(a, b))
        object.__setattr__(self, 'nodes', tuple(sorted(normalized)))

    # lookups
    def curve(self, curve_id: str) -> CurveRecord:
        for c in self.curves:
            if c.id == curve_id:
                return c
        raise UnknownSite(f"no curve named {curve_id}")

    def has_curve(self, curve_id: str) -> bool:
        return any(c.id == curve_id for c in self.curves)

    @property
    def exceptional(self) -> List[CurveRecord]:
        return [c for c in self.curves if c.exceptional]

    @property
    def boundary(self) -> List[CurveRecord]:
        return [c for c in self.curves if not c.exceptional]

    def multiplicity(self, a: str, b: str) -> int:
        return self.nodes.count(_node_key(a, b))

    def neighbours(self, curve_id: str) -> Counter:
        """Adjacent curve ids with the number of nodes shared"""
        found = Counter()
        for a, b in self.nodes:
            if a == curve_id:
                found[b] += 1
            elif b == curve_id:
                found[a] += 1
        return found

    def is_solved(self) -> bool:
        return all(c.coeff is not None for c in self.curves)

    def coefficients(self) -> Dict[str, sp.Rational]:
        return {c.id: c.coeff for c in self.curves}

    def minus_one_curves(self) -> List[CurveRecord]:
        return [c for c in self.curves if c.coeff == -1]

    def components(self) -> List[List[str]]:
        """Connected components of the exceptional curves"""
        remaining = [c.id for c in self.exceptional]
        exceptional = set(remaining)
        result = []
        while remaining:
            stack = [remaining[0]]
            seen = {remaining[0]}
            while stack:
                current = stack.pop()
                for other in self.neighbours(current):
                    if other in exceptional and other not in seen:
                        seen.add(other)
                        stack.append(other)
            result.append([i for i in remaining if i in seen])
            remaining = [i for i in remaining if i not in seen]
        return result

    def with_coefficients(self, coeffs: Dict[str, sp.Rational]) -> 'ResolutionGraph':
        curves = tuple(replace(c, coeff=coeffs.get(c.id, c.coeff)) for c in self.curves)
        return ResolutionGraph(curves, self.nodes)

    # JSON codec
    @classmethod
    def from_dict(cls, doc: Dict[str, Any]) -> 'ResolutionGraph':
        if not isinstance(doc, dict):
            raise SchemaError("graph document must be an object", "$")
        curves = []
        for k, item in enumerate(doc.get('curves', [])):
            path = f"$.curves[{k}]"
            if not isinstance(item, dict) or 'id' not in item:
                raise SchemaError("curve needs an id", path)
            role = item.get('role', 'exceptional')
            if role not in ('exceptional',):
                raise SchemaError(f"unknown role {role!r}; boundary curves go under 'boundary'",
                                  f"{path}.role")
            try:
                genus = int(item.get('genus', 0))
                self_int = int(item['self'])
            except (KeyError, TypeError, ValueError):
                raise SchemaError("curve needs integer 'genus' and 'self'", path)
            coeff = _read_fraction(item['coeff'], f"{path}.coeff") if 'coeff' in item else None
            curves.append(CurveRecord(str(item['id']), genus, self_int, CurveRole.EXCEPTIONAL, coeff))
        for k, item in enumerate(doc.get('boundary', [])):
            path = f"$.boundary[{k}]"
            if not isinstance(item, dict) or 'id' not in item or 'coeff' not in item:
                raise SchemaError("boundary curve needs 'id' and 'coeff'", path)
            curves.append(CurveRecord(str(item['id']), int(item.get('genus', 0)), None,
                                      CurveRole.STRICT_TRANSFORM,
                                      _read_fraction(item['coeff'], f"{path}.coeff")))
        nodes = []
        for k, pair in enumerate(doc.get('nodes', [])):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise SchemaError("node must be a pair of curve ids; triple points are not "
                                  "normal crossings", f"$.nodes[{k}]")
            nodes.append((str(pair[0]), str(pair[1])))
        return cls(tuple(curves), tuple(nodes))

    def to_dict(self) -> Dict[str, Any]:
        curves = []
        for c in self.exceptional:
            entry = {'id': c.id, 'genus': c.genus, 'self': c.self_int, 'role': 'exceptional'}
            if c.coeff is not None:
                entry['coeff'] = str(c.coeff)
            curves.append(entry)
        boundary = []
        for c in self.boundary:
            entry = {'id': c.id, 'coeff': str(c.coeff)}
            if c.genus:
                entry['genus'] = c.genus
            boundary.append(entry)
        return {'curves': curves, 'boundary': boundary, 'nodes': [list(n) for n in self.nodes]}


def _read_fraction(value, path: str) -> sp.Rational:
    if isinstance(value, float):
        raise SchemaError("coefficients must be fraction strings, not floats", path)
    try:
        return as_rational(value)
    except Exception:
        raise SchemaError(f"not an exact fraction: {value!r}", path)


def intersection_matrix(g: ResolutionGraph, check: bool = True) -> sp.Matrix:
    """Intersection numbers E_i.E_j of the exceptional curves, in graph order"""
    exceptional = g.exceptional
    n = len(exceptional)
    matrix = sp.zeros(n, n)
    for i, ci in enumerate(exceptional):
        matrix[i, i] = ci.self_int
        for j, cj in enumerate(exceptional):
            if i != j:
                matrix[i, j] = g.multiplicity(ci.id, cj.id)
    if check:
        for k in range(1, n + 1):
            minor = matrix[:k, :k].det()
            if (-1) ** k * minor <= 0:
                raise NotNegativeDefinite(
                    "intersection matrix is not negative definite",
                    f"leading minor {k} = {minor}")
    return matrix


def canonical_degrees(g: ResolutionGraph) -> List[int]:
    """K.E_j = 2g_j - 2 - E_j^2 by adjunction"""
    return [2 * c.genus - 2 - c.self_int for c in g.exceptional]


def solve_discrepancies(g: ResolutionGraph) -> ResolutionGraph:
    """Solve (K - D).E_j = 0 for the exceptional coefficients"""
    exceptional = g.exceptional
    if not exceptional:
        return g
    matrix = intersection_matrix(g)
    rhs = []
    for c, k in zip(exceptional, canonical_degrees(g)):
        boundary = sum((s.coeff * g.multiplicity(c.id, s.id) for s in g.boundary), sp.Integer(0))
        rhs.append(k - boundary)
    solution = matrix.LUsolve(sp.Matrix(rhs))
    coeffs = {c.id: sp.Rational(solution[i]) for i, c in enumerate(exceptional)}
    logger.debug(f"solved discrepancies {coeffs}")
    return g.with_coefficients(coeffs)


def pullback_residuals(g: ResolutionGraph) -> Dict[str, sp.Rational]:
    """(K - D).E_j for every exceptional curve; all zero on a solved graph"""
    residuals = {}
    for c, k in zip(g.exceptional, canonical_degrees(g)):
        total = sp.Integer(0)
        for other in g.curves:
            if other.id == c.id:
                total += other.coeff * c.self_int
            else:
                total += other.coeff * g.multiplicity(c.id, other.id)
        residuals[c.id] = k - total
    return residuals


def ensure_solved(g: ResolutionGraph) -> ResolutionGraph:
    return g if g.is_solved() else solve_discrepancies(g)


def classify(g: ResolutionGraph) -> Classification:
    g = ensure_solved(g)
    coeffs = [c.coeff for c in g.exceptional]
    if all(a > -1 for a in coeffs):
        return Classification.LOG_TERMINAL
    if all(a >= -1 for a in coeffs):
        return Classification.STRICTLY_LOG_CANONICAL
    return Classification.NOT_LOG_CANONICAL


def is_admissible(g: ResolutionGraph, minimal: bool = True) -> AdmissibilityReport:
    """
    Every coefficient -1 curve must be a compact rational curve meeting one or
    two other curves, each at a single point. Strict transforms of the boundary
    are curve germs, so they cannot carry -1 themselves but may meet -1 curves.
    With `minimal`, every exceptional curve with coefficient 0 must also have
    self-intersection <= -2.
    """
    g = ensure_solved(g)
    for c in g.minus_one_curves():
        if not c.exceptional:
            return AdmissibilityReport(False, c.id, "boundary curve with coefficient -1")
        if c.genus != 0:
            return AdmissibilityReport(False, c.id, f"genus {c.genus} curve with coefficient -1")
        neighbours = g.neighbours(c.id)
        if not 1 <= len(neighbours) <= 2:
            return AdmissibilityReport(False, c.id,
                                       f"coefficient -1 curve meets {len(neighbours)} curves")
        for other, count in neighbours.items():
            if count != 1:
                return AdmissibilityReport(False, c.id, f"meets {other} in {count} points")
    if minimal:
        for c in g.exceptional:
            if c.coeff == 0 and c.self_int > -2:
                return AdmissibilityReport(False, c.id,
                                           f"coefficient 0 curve with self-intersection {c.self_int}")
    return AdmissibilityReport(True)


def _fresh_id(g: ResolutionGraph) -> str:
    k = len(g.curves)
    while g.has_curve(f"B{k}"):
        k += 1
    return f"B{k}"


def blowup(g: ResolutionGraph, site: Site) -> ResolutionGraph:
    """
    Blow up a point; the new curve gets a_E = 1 + sum of the coefficients of
    the curves through the point, so K - D keeps being a pullback.
    """
    g = ensure_solved(g)
    new_id = _fresh_id(g)
    through: List[str] = []
    nodes = list(g.nodes)
    if isinstance(site, FreePoint):
        pass
    elif isinstance(site, PointOn):
        target = g.curve(site.curve_id)
        if target.coeff == -1:
            raise BlowupAtMinusOneCurve(
                f"cannot blow up a generic point of coefficient -1 curve {target.id}")
        through = [target.id]
        nodes.append((target.id, new_id))
    elif isinstance(site, Node):
        key = _node_key(site.first, site.second)
        if key not in nodes:
            raise UnknownSite(f"no node between {site.first} and {site.second}")
        nodes.remove(key)
        through = list(key)
        nodes.extend([(key[0], new_id), (key[1], new_id)])
    else:
        raise UnknownSite(f"unsupported blow-up site {site!r}")

    coeff = 1 + sum((g.curve(i).coeff for i in through), sp.Integer(0))
    curves = []
    for c in g.curves:
        if c.id in through and c.exceptional:
            c = replace(c, self_int=c.self_int - 1)
        curves.append(c)
    curves.append(CurveRecord(new_id, 0, -1, CurveRole.EXCEPTIONAL, coeff))
    logger.debug(f"blow-up at {site} created {new_id} with coefficient {coeff}")
    return ResolutionGraph(tuple(curves), tuple(nodes))


def strata(g: ResolutionGraph) -> Strata:
    open_curves = tuple((c.id, sum(g.neighbours(c.id).values())) for c in g.curves)
    return Strata(open_curves, g.nodes)
