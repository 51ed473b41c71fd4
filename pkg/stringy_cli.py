#!/usr/bin/env python3
"""
Stringy Invariants Command Line

Usage:
    python stringy_cli.py classify corpus/a1.json
    python stringy_cli.py stringy --mode local corpus/cone_d5.json --euler
    python stringy_cli.py toric-rigidity corpus/p1xp1_cy.json --q-order 3
    python stringy_cli.py verify

Exit codes: 0 success, 1 mathematical error or failed check, 2 input error.
"""

import json
import logging
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Tuple

import metrics_exporter
from config import MODES, OUTPUTS, ComputeConfig, configure_logging
from dualgraph import (
    FreePoint,
    Node,
    PointOn,
    ResolutionGraph,
    blowup,
    classify,
    is_admissible,
    solve_discrepancies,
)
from elliptic import (
    TorusGroup,
    ell_toric_equivariant,
    ell_toric_pair,
    group_from_dict,
    q0_chi_y,
    rigidity_report,
    signature,
)
from errors import ParseError, SchemaError, StringyError
from exact import ZERO, RatExpr, euler_specialize, limit_at_one, parse, render
from orbifold import (
    CoverDatum,
    cyclic_cone_model,
    datum_from_dict,
    datum_to_dict,
    e_orb,
    euler_cone_quotient,
    mckay_verify,
)
from stringy import (
    LOCAL,
    StringyMode,
    chi_y_stringy,
    e_stringy,
    euler_stringy,
    euler_stringy_termwise,
    global_mode,
    verify_functoriality,
)
from toric import ToricPair, toric_null_perturbation

logger = logging.getLogger(__name__)


@dataclass
class Result:
    """Structured value plus its canonical text; `passed` is set by verification commands"""
    value: Any
    canonical: str
    passed: Optional[bool] = None


def load_json(path: str) -> Any:
    try:
        with open(path) as f:
            return json.load(f)
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}")
    except json.JSONDecodeError as e:
        raise ParseError(f"invalid JSON in {path}: line {e.lineno} column {e.colno}")


def load_graph(path: str) -> ResolutionGraph:
    return ResolutionGraph.from_dict(load_json(path))


def _mode(args, config: ComputeConfig, doc: Optional[Dict[str, Any]] = None) -> StringyMode:
    if config.mode == 'local':
        return LOCAL
    ambient = getattr(args, 'ambient', None)
    if ambient is None and doc is not None:
        ambient = doc.get('ambient')
    if ambient is None:
        return global_mode(ZERO)
    try:
        return global_mode(parse(str(ambient)))
    except StringyError:
        raise SchemaError(f"cannot parse ambient {ambient!r}", "$.ambient")


def _expression_result(e: RatExpr, euler: bool = False) -> Result:
    if euler:
        value = euler_specialize(e)
        return Result(str(value), str(value))
    return Result(render(e), render(e))


def _check(name: str, passed: bool, detail: str) -> str:
    metrics_exporter.record_check(name, passed)
    return f"{'PASS' if passed else 'FAIL'}: {detail}"


# commands

def cmd_classify(args, config) -> Result:
    g = solve_discrepancies(load_graph(args.input))
    kind = classify(g)
    report = is_admissible(g)
    admissible = 'admissible' if report else f"not admissible ({report.reason})"
    value = {'classification': kind.value, 'admissible': bool(report), 'reason': report.reason}
    return Result(value, f"{kind.value}; {admissible}")


def cmd_discrepancy(args, config) -> Result:
    g = solve_discrepancies(load_graph(args.input))
    coeffs = {c.id: str(c.coeff) for c in g.exceptional}
    return Result(coeffs, '\n'.join(f"{k} = {v}" for k, v in coeffs.items()))


def cmd_stringy(args, config) -> Result:
    doc = load_json(args.input)
    g = ResolutionGraph.from_dict(doc)
    return _expression_result(e_stringy(g, _mode(args, config, doc)), args.euler)


def cmd_chi_y(args, config) -> Result:
    doc = load_json(args.input)
    e = chi_y_stringy(ResolutionGraph.from_dict(doc), _mode(args, config, doc))
    return Result(render(e), render(e))


def cmd_euler(args, config) -> Result:
    doc = load_json(args.input)
    g = ResolutionGraph.from_dict(doc)
    mode = _mode(args, config, doc)
    value = euler_stringy_termwise(g, mode) if args.termwise else euler_stringy(g, mode)
    return Result(str(value), str(value))


def cmd_orbifold(args, config) -> Result:
    doc = load_json(args.input)
    d = datum_from_dict(doc)
    mode = _mode(args, config, doc)
    return _expression_result(e_orb(d, mode), args.euler)


def _mckay_inputs(doc: Dict[str, Any], args, config):
    for key in ('cover', 'quotient'):
        if key not in doc:
            raise SchemaError(f"McKay document needs {key!r}", "$")
    cover = datum_from_dict(doc['cover'])
    quotient = ResolutionGraph.from_dict(doc['quotient'])
    mode_name = doc.get('mode', config.mode)
    if mode_name not in MODES:
        raise SchemaError(f"unknown mode {mode_name!r}", "$.mode")
    mode = LOCAL
    if mode_name == 'global':
        ambient = doc['quotient'].get('ambient')
        if ambient is None:
            raise SchemaError("global comparison needs the quotient ambient", "$.quotient.ambient")
        mode = global_mode(parse(str(ambient)))
    ramification = None
    if 'ramification' in doc:
        ramification = CoverDatum({str(k): int(v) for k, v in doc['ramification'].items()},
                                  {str(k): str(v) for k, v in doc.get('curve_map', {}).items()})
    return cover, quotient, mode, ramification


def cmd_mckay_check(args, config) -> Result:
    doc = load_json(args.input)
    cover, quotient, mode, ramification = _mckay_inputs(doc, args, config)
    passed = mckay_verify(cover, quotient, mode, ramification)
    value = render(e_stringy(quotient, mode))
    line = _check('mckay', passed, f"E_orb(cover) = E_str(quotient) = {value}" if passed
                  else "E_orb(cover) differs from E_str(quotient)")
    return Result({'passed': passed, 'e_stringy': value}, line, passed)


def parse_site(text: str):
    if text == 'free':
        return FreePoint()
    kind, _, rest = text.partition(':')
    if kind == 'on' and rest:
        return PointOn(rest)
    if kind == 'node':
        first, _, second = rest.partition(':')
        if first and second:
            return Node(first, second)
    raise ParseError(f"site must be 'free', 'on:ID' or 'node:A:B', got {text!r}")


def cmd_blowup(args, config) -> Result:
    doc = load_json(args.input)
    g = solve_discrepancies(ResolutionGraph.from_dict(doc))
    sites = [parse_site(s) for s in args.site or []]
    if args.verify:
        passed = verify_functoriality(g, sites, _mode(args, config, doc))
        line = _check('functoriality', passed, f"E_str unchanged after {len(sites)} blow-ups")
        return Result({'passed': passed}, line, passed)
    for site in sites:
        g = blowup(g, site)
    value = g.to_dict()
    return Result(value, json.dumps(value, sort_keys=True))


def _pair_and_group(args) -> Tuple[ToricPair, TorusGroup]:
    doc = load_json(args.input)
    pair = ToricPair.from_dict(doc)
    group = group_from_dict(doc.get('group'))
    if getattr(args, 'group_order', None):
        group = TorusGroup.cyclic(args.group_order)
    return pair, group


def cmd_toric_rigidity(args, config) -> Result:
    pair, group = _pair_and_group(args)
    report = rigidity_report(pair, group, config.q_order)
    lines = [
        _check('rigidity_q0', report.q0_vanishes, "q^0 (chi_y level) coefficient vanishes"),
        _check('rigidity', not report.nonzero,
               f"all coefficients zero through q^{config.q_order}" if not report.nonzero
               else f"nonzero coefficients at q^{', q^'.join(str(e) for e in report.nonzero)}"),
    ]
    value = {'passed': report.passed, 'functional': [str(x) for x in report.functional],
             'group_order': group.order, 'order': config.q_order}
    return Result(value, '\n'.join(lines), report.passed)


def cmd_elliptic(args, config) -> Result:
    pair, group = _pair_and_group(args)
    metrics_exporter.q_order.set(config.q_order)
    if args.method == 'classes' and group.is_trivial():
        series = ell_toric_pair(pair, config.q_order)
    elif args.method == 'limit' and group.is_trivial():
        perturbation = toric_null_perturbation(pair) if -1 in pair.coeffs else None
        series = ell_toric_pair(pair, config.q_order, perturbation)
    else:
        series = ell_toric_equivariant(pair, group, config.q_order)
    if args.chi_y:
        c0 = q0_chi_y(series)
        return Result(render(c0), render(c0))
    if args.signature:
        value = str(signature(series))
        return Result(value, value)
    return Result(series.to_list(), str(series))


def cmd_limit(args, config) -> Result:
    path = Path(args.input)
    text = path.read_text().strip() if path.is_file() else args.input
    e = limit_at_one(parse(text), args.variable.upper())
    return Result(render(e), render(e))


# bundled verification suite

def _corpus_kind(doc: Dict[str, Any]) -> str:
    if 'rays' in doc:
        return 'toric'
    if 'cover' in doc:
        return 'mckay'
    if 'sectors' in doc:
        return 'orbifold'
    return 'graph'


def _round_trip(doc: Dict[str, Any]) -> bool:
    kind = _corpus_kind(doc)
    if kind == 'toric':
        p = ToricPair.from_dict(doc)
        return ToricPair.from_dict(json.loads(json.dumps(p.to_dict()))) == p
    if kind == 'orbifold':
        d = datum_from_dict(doc)
        return datum_from_dict(json.loads(json.dumps(datum_to_dict(d)))) == d
    if kind == 'mckay':
        return _round_trip(doc['cover']) and _round_trip(doc['quotient'])
    g = ResolutionGraph.from_dict(doc)
    return ResolutionGraph.from_dict(json.loads(json.dumps(g.to_dict()))) == g


def cmd_verify(args, config) -> Result:
    lines: List[str] = []
    outcomes: List[bool] = []

    def check(name: str, passed: bool, detail: str):
        outcomes.append(passed)
        lines.append(_check(name, passed, detail))

    for d in (2, 4, 5):
        for n in (1, 2, 3):
            datum, quotient, cover = cyclic_cone_model(n, d)
            value = euler_specialize(e_orb(datum))
            check('cone_euler', value == n * d, f"Z_{n} on cone over degree {d}: e_orb = {value}")
            check('mckay', mckay_verify(datum, quotient, LOCAL, cover),
                  f"McKay for Z_{n} on cone over degree {d}")
    for order in (2, 3, 4):
        value = euler_cone_quotient(1, order, 2)
        check('classical_mckay', value == order, f"|G| = {order}: quotient Euler number {value}")

    corpus = Path(config.corpus_dir)
    for path in sorted(corpus.glob('*.json')):
        doc = load_json(str(path))
        check('round_trip', _round_trip(doc), f"{path.name} parses back to itself")
        kind = _corpus_kind(doc)
        if kind == 'mckay':
            cover, quotient, mode, ramification = _mckay_inputs(doc, args, config)
            check('mckay', mckay_verify(cover, quotient, mode, ramification), f"McKay for {path.name}")
        elif kind == 'toric' and doc.get('calabi_yau'):
            pair = ToricPair.from_dict(doc)
            for group in (TorusGroup(), TorusGroup.cyclic(2), TorusGroup.cyclic(3, (1, 2))):
                report = rigidity_report(pair, group, config.q_order)
                check('rigidity', report.passed,
                      f"{path.name} with |G| = {group.order} vanishes through q^{config.q_order}")
    passed = all(outcomes)
    lines.append(f"{sum(outcomes)}/{len(outcomes)} checks passed")
    return Result({'passed': passed, 'checks': len(outcomes), 'failed': outcomes.count(False)},
                  '\n'.join(lines), passed)


COMMANDS: Dict[str, Callable] = {
    'classify': cmd_classify,
    'discrepancy': cmd_discrepancy,
    'stringy': cmd_stringy,
    'chi-y': cmd_chi_y,
    'euler': cmd_euler,
    'orbifold': cmd_orbifold,
    'mckay-check': cmd_mckay_check,
    'blowup': cmd_blowup,
    'toric-rigidity': cmd_toric_rigidity,
    'elliptic': cmd_elliptic,
    'limit': cmd_limit,
    'verify': cmd_verify,
}


def build_parser():
    import argparse

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--mode', choices=MODES, default=None, help='local (exceptional fibre) or global')
    common.add_argument('--output', choices=OUTPUTS, default=None, help='Output format')
    common.add_argument('--q-order', type=int, default=None, help='Truncation order of q-series (default 3)')
    common.add_argument('--log-level', default=None, help='Logging level, e.g. INFO or DEBUG')
    common.add_argument('--log-file', default=None, help='Also write logs to this file')
    common.add_argument('--metrics-file', default=None, help='Write Prometheus metrics to this textfile')

    parser = argparse.ArgumentParser(description='Stringy, orbifold and elliptic invariants of surface pairs')
    sub = parser.add_subparsers(dest='command', required=True)

    for name in ('classify', 'discrepancy'):
        sub.add_parser(name, parents=[common]).add_argument('input', help='Resolution graph JSON')
    for name in ('stringy', 'chi-y', 'euler'):
        p = sub.add_parser(name, parents=[common])
        p.add_argument('input', help='Resolution graph JSON')
        p.add_argument('--ambient', default=None, help='E-polynomial of the open stratum (global mode)')
        if name == 'stringy':
            p.add_argument('--euler', action='store_true', help='Print the stringy Euler number')
        if name == 'euler':
            p.add_argument('--termwise', action='store_true', help='Sum e(stratum)/prod(a+1) directly')

    p = sub.add_parser('orbifold', parents=[common])
    p.add_argument('input', help='Orbifold datum JSON')
    p.add_argument('--euler', action='store_true', help='Print the orbifold Euler number')

    sub.add_parser('mckay-check', parents=[common]).add_argument('input', help='Cover/quotient JSON')

    p = sub.add_parser('blowup', parents=[common])
    p.add_argument('input', help='Resolution graph JSON')
    p.add_argument('--site', action='append', help="'free', 'on:ID' or 'node:A:B'; repeatable")
    p.add_argument('--verify', action='store_true', help='Check that E_str is unchanged')

    for name in ('toric-rigidity', 'elliptic'):
        p = sub.add_parser(name, parents=[common])
        p.add_argument('input', help='Toric pair JSON')
        p.add_argument('--group-order', type=int, default=None, help='Use the diagonal Z_n in the torus')
        if name == 'elliptic':
            p.add_argument('--method', choices=('classes', 'limit', 'localization'), default='classes',
                           help='Closed class formula, null-perturbation limit, or fixed points')
            p.add_argument('--chi-y', action='store_true', help='Print the q^0 coefficient as y^(-1) chi_y')
            p.add_argument('--signature', action='store_true', help='Print the signature (y = -1)')

    p = sub.add_parser('limit', parents=[common])
    p.add_argument('input', help='Expression or file holding one')
    p.add_argument('--variable', default='S', help='Variable sent to 1')

    sub.add_parser('verify', parents=[common])
    return parser


def render_result(result: Result, output: str) -> str:
    if output == 'json':
        return json.dumps({'result': result.value, 'canonical': result.canonical}, sort_keys=True)
    return result.canonical


def run(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = ComputeConfig.from_env(q_order=args.q_order, mode=args.mode, output=args.output,
                                        log_level=args.log_level, log_file=args.log_file,
                                        metrics_file=args.metrics_file)
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    configure_logging(config)
    logger.info(f"running {args.command} with q-order {config.q_order}, mode {config.mode}")

    code = 0
    try:
        with metrics_exporter.track(args.command):
            result = COMMANDS[args.command](args, config)
        print(render_result(result, config.output))
        if result.passed is False:
            code = 1
    except StringyError as e:
        logger.debug(f"{args.command} failed", exc_info=True)
        print(f"error: {e}", file=sys.stderr)
        code = e.exit_code
    finally:
        if config.metrics_file:
            metrics_exporter.export(config.metrics_file)
    return code


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
