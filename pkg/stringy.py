#!/usr/bin/env python3
"""
Stringy E-functions of Admissible Resolution Graphs

E_str is the sum over the strata of the log resolution of E(stratum) times a
geometric factor (w - 1)/(w^(a+1) - 1) per divisor containing the stratum.
Curves with coefficient -1 have no geometric factor; their strata are summed
with a null-perturbation a_i -> a_i + eps*b_i (S = w^eps) and the limit S -> 1
is taken exactly.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Collection, Dict, Iterable, List, Optional, Sequence

import sympy as sp

from dualgraph import (
    FreePoint,
    Node,
    PointOn,
    ResolutionGraph,
    Site,
    blowup,
    ensure_solved,
    is_admissible,
    strata,
)
from errors import AdjunctionViolated, MinusOneCoefficient, NotAdmissible
from exact import (
    ONE,
    ZERO,
    RatExpr,
    as_rational,
    chi_y_specialize,
    euler_specialize,
    geometric_factor,
    limit_at_one,
    w_power,
)

logger = logging.getLogger(__name__)

PERTURBATION_VARIABLE = 'S'


@dataclass(frozen=True)
class StringyMode:
    """Local sums the exceptional fibre only; global adds the open stratum `ambient`"""
    ambient: Optional[RatExpr] = None

    @property
    def is_global(self) -> bool:
        return self.ambient is not None

    @property
    def name(self) -> str:
        return 'global' if self.is_global else 'local'


LOCAL = StringyMode()


def global_mode(ambient: RatExpr = ZERO) -> StringyMode:
    return StringyMode(ambient)


def curve_e_polynomial(genus: int) -> RatExpr:
    """1 - g*u - g*v + uv for a smooth projective genus-g curve"""
    u = RatExpr.variable('U')
    v = RatExpr.variable('V')
    return 1 - genus * u - genus * v + u * v


@lru_cache(maxsize=None)
def perturbed_factor(a: sp.Rational, b: sp.Rational) -> RatExpr:
    """(w - 1)/(w^(a+1) S^b - 1), the geometric factor at coefficient a + eps*b"""
    if b == 0:
        return geometric_factor(a)
    shifted = RatExpr.monomial({'U': a + 1, 'V': a + 1, PERTURBATION_VARIABLE: b})
    return (w_power(1) - 1) / (shifted - 1)


def null_perturbation(g: ResolutionGraph, weights: Optional[Dict[str, sp.Rational]] = None,
                      free_value: sp.Rational = 0) -> Dict[str, sp.Rational]:
    """
    Coefficients b_i with (sum_i b_i D_i).D_t = 0 on every -1 curve D_t.
    `weights` fixes b_t on the -1 curves (default 1); the neighbours of the -1
    curves are solved for and any free parameter is set to `free_value`.
    """
    g = ensure_solved(g)
    weights = {k: as_rational(v) for k, v in (weights or {}).items()}
    targets = g.minus_one_curves()
    if not targets:
        return {}
    b = _solve_null(g, targets, {c.id: weights.get(c.id, sp.Integer(1)) for c in targets}, free_value)
    if b is None and len(weights) < len(targets):
        # -1 curves sharing a neighbour may need unequal weights
        b = _solve_null(g, targets, dict(weights), free_value)
    if b is None:
        raise NotAdmissible("no null-perturbation exists for this graph")
    logger.debug(f"null-perturbation {b}")
    return b


def _solve_null(g: ResolutionGraph, targets, fixed: Dict[str, sp.Rational],
                free_value: sp.Rational) -> Optional[Dict[str, sp.Rational]]:
    """Solve the null conditions with `fixed` pinned; None when inconsistent or degenerate"""
    involved = {c.id for c in targets} | {n for c in targets for n in g.neighbours(c.id)}
    unknowns = sorted(involved - set(fixed))
    symbols = sp.symbols(f"b0:{len(unknowns)}") if unknowns else ()
    lookup = dict(zip(unknowns, symbols))
    equations = []
    for t in targets:
        lhs = (fixed[t.id] if t.id in fixed else lookup[t.id]) * t.self_int
        for n, count in g.neighbours(t.id).items():
            lhs += count * (fixed[n] if n in fixed else lookup[n])
        equations.append(sp.sympify(lhs))
    if not unknowns:
        return dict(fixed) if all(e == 0 for e in equations) else None
    solutions = sp.linsolve(equations, *symbols)
    if not solutions:
        return None
    (solution,) = solutions
    params = sorted(set().union(*(sp.sympify(x).free_symbols for x in solution)), key=str)
    trials = [{p: free_value for p in params}, {p: sp.prime(k + 1) for k, p in enumerate(params)}]
    for trial in trials:
        b = dict(fixed)
        for name, expr in zip(unknowns, solution):
            b[name] = sp.Rational(sp.sympify(expr).subs(trial))
        if all(b[t.id] != 0 for t in targets):
            return b
    return None


def is_null_perturbation(g: ResolutionGraph, b: Dict[str, sp.Rational]) -> bool:
    for t in g.minus_one_curves():
        total = b.get(t.id, 0) * t.self_int
        for n, count in g.neighbours(t.id).items():
            total += count * b.get(n, 0)
        if total != 0 or b.get(t.id, 0) == 0:
            return False
    return True


def minus_one_strata(g: ResolutionGraph, curve_id: str, b: Dict[str, sp.Rational],
                     skip: Collection[str] = ()) -> RatExpr:
    """Perturbed terms of every stratum on the -1 curve `curve_id`; nodes shared with `skip` are left out"""
    t = g.curve(curve_id)
    neighbours = g.neighbours(curve_id)
    own = perturbed_factor(sp.Integer(-1), b[curve_id])
    removed = sum(neighbours.values())
    total = (curve_e_polynomial(t.genus) - removed) * own
    for n, count in neighbours.items():
        if n in skip:
            continue
        other = g.curve(n)
        total = total + own * perturbed_factor(other.coeff, b.get(n, sp.Integer(0))) * count
    return total


def minus_one_contribution(g: ResolutionGraph, curve_id: str,
                           b: Dict[str, sp.Rational]) -> RatExpr:
    """Limit-engine value of every stratum lying on the -1 curve `curve_id`"""
    return limit_at_one(minus_one_strata(g, curve_id, b), PERTURBATION_VARIABLE)


def e_stringy(g: ResolutionGraph, mode: StringyMode = LOCAL,
              perturbation: Optional[Dict[str, sp.Rational]] = None) -> RatExpr:
    g = ensure_solved(g)
    report = is_admissible(g, minimal=False)
    if not report:
        raise NotAdmissible(f"graph is not admissible: {report.reason}", report.curve_id)
    if mode.is_global and g.boundary:
        raise NotAdmissible("global mode needs a graph without strict transforms")
    b = perturbation if perturbation is not None else null_perturbation(g)
    minus_one = {c.id for c in g.minus_one_curves()}

    counted = {c.id for c in (g.curves if mode.is_global else g.exceptional)}
    layout = strata(g)
    total = mode.ambient if mode.is_global else ZERO
    for curve_id, removed in layout.open_curves:
        if curve_id not in counted or curve_id in minus_one:
            continue
        c = g.curve(curve_id)
        total = total + (curve_e_polynomial(c.genus) - removed) * geometric_factor(c.coeff)
    for first, second in layout.nodes:
        if first not in counted and second not in counted:
            continue
        if first in minus_one or second in minus_one:
            continue
        total = total + geometric_factor(g.curve(first).coeff) * \
            geometric_factor(g.curve(second).coeff)
    perturbed = ZERO
    done = []
    for curve_id in sorted(minus_one):
        perturbed = perturbed + minus_one_strata(g, curve_id, b, done)
        done.append(curve_id)
    if not perturbed.is_zero():
        total = total + limit_at_one(perturbed, PERTURBATION_VARIABLE)
    return total


def chi_y_stringy(g: ResolutionGraph, mode: StringyMode = LOCAL) -> RatExpr:
    return chi_y_specialize(e_stringy(g, mode))


def euler_stringy(g: ResolutionGraph, mode: StringyMode = LOCAL) -> sp.Rational:
    return euler_specialize(e_stringy(g, mode))


def euler_stringy_termwise(g: ResolutionGraph, mode: StringyMode = LOCAL) -> sp.Rational:
    """Batyrev's Euler number: sum of e(stratum)/prod(a_i + 1), log-terminal graphs only"""
    g = ensure_solved(g)
    counted = {c.id for c in (g.curves if mode.is_global else g.exceptional)}
    layout = strata(g)
    total = euler_specialize(mode.ambient) if mode.is_global else sp.Integer(0)
    for curve_id, removed in layout.open_curves:
        if curve_id in counted:
            c = g.curve(curve_id)
            if c.coeff == -1:
                raise MinusOneCoefficient(f"{curve_id} has coefficient -1")
            total += sp.Rational(2 - 2 * c.genus - removed) / (c.coeff + 1)
    for first, second in layout.nodes:
        if first in counted or second in counted:
            a1, a2 = g.curve(first).coeff, g.curve(second).coeff
            if -1 in (a1, a2):
                raise MinusOneCoefficient(f"node {first}-{second} lies on a -1 curve")
            total += 1 / ((a1 + 1) * (a2 + 1))
    return total


def veys_contribution_closed(m: int, a1, a2=None) -> RatExpr:
    """
    Closed form of a -1 curve contribution: m(w-1)^2/((w^(a1+1)-1)(w^(a2+1)-1))
    with two neighbours, -m*w with one (a2=None).
    """
    a1 = as_rational(a1)
    if a1 == -1:
        raise MinusOneCoefficient("neighbour of a -1 curve cannot carry -1")
    if a2 is None:
        return -m * w_power(1)
    a2 = as_rational(a2)
    if a1 + a2 + 2 != 0:
        raise AdjunctionViolated(f"a1 + a2 + 2 = {a1 + a2 + 2}, expected 0")
    return m * (w_power(1) - 1) ** 2 / ((w_power(a1 + 1) - 1) * (w_power(a2 + 1) - 1))


def functoriality_correction(g: ResolutionGraph, sites: Sequence[Site],
                             mode: StringyMode) -> RatExpr:
    """
    Change of the summed E-function caused by the blow-ups themselves: in local
    mode a free point adds the isolated fibre 1 and a point on a strict transform
    adds its factor; in global mode nothing changes once the ambient shrinks.
    """
    correction = ZERO
    current = ensure_solved(g)
    for site in sites:
        if not mode.is_global:
            if isinstance(site, FreePoint):
                correction = correction + ONE
            elif isinstance(site, PointOn) and not current.curve(site.curve_id).exceptional:
                correction = correction + geometric_factor(current.curve(site.curve_id).coeff)
        current = blowup(current, site)
    return correction


def verify_functoriality(g: ResolutionGraph, sites: Iterable[Site],
                         mode: StringyMode = LOCAL) -> bool:
    """
    Blow up `sites` in order and compare E_st before and after. The stringy
    E-function of the singularity itself is unchanged; what the local sum
    sees in addition is the new local fibre over each blown-up point that
    was not already counted, namely a FreePoint (fibre 1) and a PointOn a
    strict transform (the fibre meets that boundary curve). So `after` must
    equal `before` plus functoriality_correction, which is zero for sites on
    exceptional curves and nodes, and always zero in global mode once the
    ambient loses the free points.
    """
    sites = list(sites)
    g = ensure_solved(g)
    before = e_stringy(g, mode)
    after_graph = g
    for site in sites:
        after_graph = blowup(after_graph, site)
    after_mode = mode
    if mode.is_global:
        free_points = sum(1 for s in sites if isinstance(s, FreePoint))
        after_mode = global_mode(mode.ambient - free_points)
    after = e_stringy(after_graph, after_mode)
    expected = before + functoriality_correction(g, sites, mode)
    if after != expected:
        logger.warning(f"functoriality failed after {len(sites)} blow-ups")
        return False
    return True
