import random
import unittest
from dataclasses import replace

import sympy as sp

from dualgraph import (
    Classification,
    CurveRecord,
    CurveRole,
    FreePoint,
    Node,
    PointOn,
    ResolutionGraph,
    blowup,
    classify,
    intersection_matrix,
    is_admissible,
    pullback_residuals,
    solve_discrepancies,
    strata,
)
from errors import BlowupAtMinusOneCurve, NotNegativeDefinite, SchemaError, UnknownSite


def chain(*selfs) -> ResolutionGraph:
    curves = tuple(CurveRecord(f"E{i}", 0, s) for i, s in enumerate(selfs))
    nodes = tuple((f"E{i}", f"E{i + 1}") for i in range(len(selfs) - 1))
    return ResolutionGraph(curves, nodes)


def cone(d: int) -> ResolutionGraph:
    return ResolutionGraph((CurveRecord('C', (d - 1) * (d - 2) // 2, -d),))


def cusp_cycle() -> ResolutionGraph:
    curves = tuple(CurveRecord(f"E{i}", 0, -3) for i in range(3))
    return ResolutionGraph(curves, (('E0', 'E1'), ('E1', 'E2'), ('E2', 'E0')))


class DiscrepancyTestCase(unittest.TestCase):
    def test_cone_over_plane_curve(self):
        for d in range(2, 9):
            g = solve_discrepancies(cone(d))
            self.assertEqual(g.curve('C').coeff, 2 - d)

    def test_du_val_chain_is_crepant(self):
        g = solve_discrepancies(chain(-2, -2, -2))
        self.assertEqual(g.coefficients(), {'E0': 0, 'E1': 0, 'E2': 0})
        self.assertEqual(classify(g), Classification.LOG_TERMINAL)
        self.assertTrue(all(r == 0 for r in pullback_residuals(g).values()))

    def test_boundary_enters_the_system(self):
        doc = {
            'curves': [{'id': 'T', 'genus': 0, 'self': -2, 'role': 'exceptional'}],
            'boundary': [{'id': 'N1', 'coeff': '-1/2'}, {'id': 'N2', 'coeff': '-3/2'}],
            'nodes': [['N1', 'T'], ['N2', 'T']],
        }
        g = solve_discrepancies(ResolutionGraph.from_dict(doc))
        self.assertEqual(g.curve('T').coeff, -1)
        self.assertTrue(is_admissible(g))

    def test_classification(self):
        self.assertEqual(classify(cone(3)), Classification.STRICTLY_LOG_CANONICAL)
        self.assertEqual(classify(cone(4)), Classification.NOT_LOG_CANONICAL)

    def test_intersection_matrix(self):
        self.assertEqual(intersection_matrix(chain(-2, -3)), sp.Matrix([[-2, 1], [1, -3]]))
        with self.assertRaises(NotNegativeDefinite):
            solve_discrepancies(chain(-1, -1))


class AdmissibilityTestCase(unittest.TestCase):
    def test_boundary_with_minus_one_is_rejected(self):
        doc = {'curves': [{'id': 'E0', 'genus': 0, 'self': -2}],
               'boundary': [{'id': 'S', 'coeff': '-1'}], 'nodes': [['E0', 'S']]}
        report = is_admissible(ResolutionGraph.from_dict(doc))
        self.assertFalse(report)
        self.assertEqual(report.curve_id, 'S')

    def test_positive_genus_minus_one_curve(self):
        report = is_admissible(cone(3))
        self.assertFalse(report)
        self.assertIn('genus', report.reason)

    def test_adjacent_minus_one_curves(self):
        g = solve_discrepancies(cusp_cycle())
        self.assertEqual(set(g.coefficients().values()), {-1})
        self.assertTrue(is_admissible(g, minimal=False))
        self.assertEqual(classify(g), Classification.STRICTLY_LOG_CANONICAL)

    def test_minus_one_curve_next_to_boundary(self):
        doc = {'curves': [{'id': 'T', 'genus': 0, 'self': -3}],
               'boundary': [{'id': 'S1', 'coeff': '0'}, {'id': 'S2', 'coeff': '-2'}],
               'nodes': [['S1', 'T'], ['S2', 'T']]}
        g = solve_discrepancies(ResolutionGraph.from_dict(doc))
        self.assertEqual(g.curve('T').coeff, -1)
        self.assertTrue(is_admissible(g))

    def test_minimality_rule(self):
        g = ResolutionGraph((
            CurveRecord('E0', 0, -2, CurveRole.EXCEPTIONAL, sp.Integer(0)),
            CurveRecord('B', 0, -1, CurveRole.EXCEPTIONAL, sp.Integer(0)),
        ))
        self.assertFalse(is_admissible(g))
        self.assertTrue(is_admissible(g, minimal=False))


class BlowupTestCase(unittest.TestCase):
    def setUp(self):
        self.a1 = solve_discrepancies(chain(-2))

    def test_free_point(self):
        g = blowup(self.a1, FreePoint())
        self.assertEqual(g.curve('B1').coeff, 1)
        self.assertEqual(g.curve('B1').self_int, -1)
        self.assertEqual(g.curve('E0').self_int, -2)

    def test_point_on_curve_and_node(self):
        g = blowup(self.a1, PointOn('E0'))
        self.assertEqual(g.curve('E0').self_int, -3)
        self.assertEqual(g.curve('B1').coeff, 1)
        g = blowup(g, Node('E0', 'B1'))
        self.assertEqual(g.curve('B2').coeff, 2)
        self.assertEqual(g.multiplicity('E0', 'B1'), 0)
        self.assertTrue(all(r == 0 for r in pullback_residuals(g).values()))

    def test_node_between_half_curves(self):
        g = solve_discrepancies(chain(-3, -3))
        self.assertEqual(g.coefficients(), {'E0': sp.Rational(-1, 2), 'E1': sp.Rational(-1, 2)})
        g = blowup(g, Node('E0', 'E1'))
        self.assertEqual(g.curve('B2').coeff, 0)
        self.assertEqual((g.curve('E0').self_int, g.curve('E1').self_int), (-4, -4))
        self.assertEqual(g.multiplicity('E0', 'B2'), 1)

    def test_point_on_cone_curve(self):
        for d in (2, 4, 5, 7):
            g = blowup(solve_discrepancies(cone(d)), PointOn('C'))
            self.assertEqual(g.curve('B1').coeff, 3 - d)
            self.assertEqual(g.curve('C').self_int, -d - 1)

    def test_illegal_sites(self):
        with self.assertRaises(UnknownSite):
            blowup(self.a1, Node('E0', 'E1'))
        doc = {'curves': [{'id': 'T', 'genus': 0, 'self': -2}],
               'boundary': [{'id': 'N1', 'coeff': '-1/2'}, {'id': 'N2', 'coeff': '-3/2'}],
               'nodes': [['N1', 'T'], ['N2', 'T']]}
        with self.assertRaises(BlowupAtMinusOneCurve):
            blowup(ResolutionGraph.from_dict(doc), PointOn('T'))

    def test_strata(self):
        layout = strata(solve_discrepancies(chain(-2, -2)))
        self.assertEqual(dict(layout.open_curves), {'E0': 1, 'E1': 1})
        self.assertEqual(layout.nodes, (('E0', 'E1'),))


class InvariantTestCase(unittest.TestCase):
    def setUp(self):
        self.rng = random.Random(6174)

    def random_chain(self, boundary_values=("-1/2", "1/3", "0", "-2", "-5/3")) -> ResolutionGraph:
        selfs = [self.rng.randint(-5, -2) for _ in range(self.rng.randint(1, 4))]
        curves = [CurveRecord(f"E{i}", self.rng.choice((0, 0, 0, 1)), s) for i, s in enumerate(selfs)]
        nodes = [(f"E{i}", f"E{i + 1}") for i in range(len(selfs) - 1)]
        if self.rng.random() < 0.5:
            coeff = sp.Rational(self.rng.choice(boundary_values))
            curves.append(CurveRecord('S', 0, None, CurveRole.STRICT_TRANSFORM, coeff))
            nodes.append((f"E{self.rng.randrange(len(selfs))}", 'S'))
        return solve_discrepancies(ResolutionGraph(tuple(curves), tuple(nodes)))

    def random_minus_one_graph(self) -> ResolutionGraph:
        m = self.rng.randint(1, 5)
        a = sp.Rational(self.rng.randint(-7, 7), self.rng.randint(1, 4))
        if a == -1:
            a = sp.Integer(0)
        curves = (CurveRecord('T', 0, -m),
                  CurveRecord('N1', 0, None, CurveRole.STRICT_TRANSFORM, a),
                  CurveRecord('N2', 0, None, CurveRole.STRICT_TRANSFORM, -2 - a))
        return solve_discrepancies(ResolutionGraph(curves, (('N1', 'T'), ('N2', 'T'))))

    def random_site(self, g: ResolutionGraph):
        options = [FreePoint()]
        options += [PointOn(c.id) for c in g.curves if c.coeff != -1]
        options += [Node(a, b) for a, b in g.nodes]
        return self.rng.choice(options)

    def test_pullback_residuals_vanish(self):
        for _ in range(200):
            g = self.random_chain()
            self.assertTrue(all(r == 0 for r in pullback_residuals(g).values()), g.to_dict())

    def test_blowup_matches_fresh_solve(self):
        for _ in range(50):
            g = self.random_chain()
            blown = blowup(g, self.random_site(g))
            fresh = ResolutionGraph(tuple(replace(c, coeff=None) if c.exceptional else c
                                          for c in blown.curves), blown.nodes)
            self.assertEqual(solve_discrepancies(fresh).coefficients(), blown.coefficients())

    def test_log_terminal_survives_blowup(self):
        checked = 0
        while checked < 100:
            g = self.random_chain(("-1/2", "1/3", "0", "-2/3"))
            if classify(g) != Classification.LOG_TERMINAL:
                continue
            for _ in range(self.rng.randint(1, 4)):
                g = blowup(g, self.random_site(g))
                self.assertEqual(classify(g), Classification.LOG_TERMINAL, g.to_dict())
            checked += 1

    def test_admissibility_survives_blowup(self):
        checked = 0
        while checked < 100:
            g = self.random_chain() if self.rng.random() < 0.5 else self.random_minus_one_graph()
            if not is_admissible(g, minimal=False):
                continue
            for _ in range(self.rng.randint(1, 4)):
                g = blowup(g, self.random_site(g))
                self.assertTrue(is_admissible(g, minimal=False), g.to_dict())
            checked += 1


class SchemaTestCase(unittest.TestCase):
    def test_round_trip(self):
        g = solve_discrepancies(chain(-2, -3))
        self.assertEqual(ResolutionGraph.from_dict(g.to_dict()), g)

    def test_errors_carry_json_path(self):
        with self.assertRaises(SchemaError) as ctx:
            ResolutionGraph.from_dict({'curves': [{'id': 'E0', 'self': -2}], 'nodes': [['E0', 'X']]})
        self.assertEqual(ctx.exception.path, '$.nodes[0]')
        with self.assertRaises(SchemaError) as ctx:
            ResolutionGraph.from_dict({'boundary': [{'id': 'S', 'coeff': 0.5}]})
        self.assertEqual(ctx.exception.path, '$.boundary[0].coeff')


if __name__ == '__main__':
    unittest.main()
