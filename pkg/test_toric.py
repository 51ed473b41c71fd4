import unittest

import sympy as sp

from errors import AdjunctionViolated, InvalidFan, MinusOneCoefficient, SchemaError
from exact import ZERO, parse
from stringy import e_stringy, global_mode, is_null_perturbation
from toric import (
    Fan2D,
    ToricPair,
    blowup_fan,
    blowup_pair,
    curve_id,
    fixed_point_data,
    generic_cocharacter,
    hirzebruch,
    is_cy_pair,
    local_model,
    p1_x_p1,
    pair_graph,
    pairing,
    projective_plane,
    self_intersections,
    toric_null_perturbation,
    torus_e_polynomial,
)


class FanTestCase(unittest.TestCase):
    def test_self_intersections(self):
        self.assertEqual(self_intersections(projective_plane().fan), [1, 1, 1])
        self.assertEqual(self_intersections(p1_x_p1().fan), [0, 0, 0, 0])
        self.assertEqual(self_intersections(hirzebruch(1).fan), [0, -1, 0, 1])
        self.assertEqual(self_intersections(hirzebruch(3).fan), [0, -3, 0, 3])

    def test_blowup_adds_minus_one_curve(self):
        f = blowup_fan(projective_plane().fan, 0)
        self.assertEqual(f.rays, ((1, 0), (1, 1), (0, 1), (-1, -1)))
        self.assertEqual(self_intersections(f), [0, -1, 0, 1])

    def test_invalid_fans(self):
        with self.assertRaises(InvalidFan):
            Fan2D(((1, 0), (0, 1)))
        with self.assertRaises(InvalidFan):
            Fan2D(((2, 0), (0, 1), (-1, -1)))
        with self.assertRaises(InvalidFan):
            Fan2D(((1, 0), (1, 2), (-1, -1)))
        with self.assertRaises(InvalidFan):
            blowup_fan(projective_plane().fan, 3)

    def test_fixed_point_weights_are_dual(self):
        f = blowup_fan(hirzebruch(2).fan, 1)
        for p in fixed_point_data(f):
            (i, j), (ui, uj) = p.rays, p.weights
            self.assertEqual((pairing(ui, f.rays[i]), pairing(ui, f.rays[j])), (1, 0))
            self.assertEqual((pairing(uj, f.rays[i]), pairing(uj, f.rays[j])), (0, 1))
        nu = generic_cocharacter(f)
        self.assertTrue(all(pairing(nu, u) != 0 for p in fixed_point_data(f) for u in p.weights))


class PairTestCase(unittest.TestCase):
    def test_calabi_yau_functional(self):
        self.assertEqual(is_cy_pair(projective_plane((0, 0, -3))), (1, 1))
        self.assertEqual(is_cy_pair(p1_x_p1((0, 0, -2, -2))), (1, 1))
        self.assertEqual(is_cy_pair(hirzebruch(1, (1, 0, -2, -2))), (2, 1))
        self.assertIsNone(is_cy_pair(projective_plane()))

    def test_blowup_preserves_calabi_yau(self):
        p = p1_x_p1((sp.Rational(1, 3), 0, sp.Rational(-7, 3), -2))
        m = is_cy_pair(p)
        self.assertIsNotNone(m)
        for i in range(4):
            self.assertEqual(is_cy_pair(blowup_pair(p, i)), m)

    def test_local_model(self):
        for m_t in (1, 2, 3):
            lm = local_model(m_t, sp.Rational(1, 2), sp.Rational(-5, 2))
            e = lm.e_index
            self.assertEqual(self_intersections(lm.pair.fan)[e], -m_t)
            self.assertEqual(lm.pair.coeffs[e], -1)
            left, right = lm.neighbours
            self.assertEqual({lm.pair.coeffs[left], lm.pair.coeffs[right]},
                             {sp.Rational(1, 2), sp.Rational(-5, 2)})
            self.assertIsNotNone(is_cy_pair(lm.pair))
            self.assertEqual(len(lm.pair.fan.rays), 4 + m_t)
        with self.assertRaises(AdjunctionViolated):
            local_model(1, 1, 1)
        with self.assertRaises(MinusOneCoefficient):
            local_model(1, -1, -1)

    def test_toric_null_perturbation(self):
        lm = local_model(2, sp.Rational(1, 2), sp.Rational(-5, 2))
        g = pair_graph(lm.pair)
        for functional in (None, (1, 0), (0, 1)):
            b = toric_null_perturbation(lm.pair, functional)
            self.assertTrue(is_null_perturbation(g, {curve_id(i): v for i, v in b.items()}))
        with self.assertRaises(AdjunctionViolated):
            toric_null_perturbation(lm.pair, (1, -1))

    def test_round_trip_and_schema(self):
        p = hirzebruch(2, (sp.Rational(1, 2), 0, -2, sp.Rational(-3, 4)))
        self.assertEqual(ToricPair.from_dict(p.to_dict()), p)
        with self.assertRaises(SchemaError):
            ToricPair.from_dict({'rays': [[1, 0], [0, 1], [-1, -1]], 'coeffs': [0.5, 0, 0]})
        with self.assertRaises(SchemaError):
            ToricPair.from_dict({'rays': [[1, 0], [0, 1], [-1, 'x']]})


class PairEFunctionTestCase(unittest.TestCase):
    def setUp(self):
        self.mode = global_mode(torus_e_polynomial())

    def test_projective_plane(self):
        self.assertEqual(e_stringy(pair_graph(projective_plane()), self.mode), parse("w^2 + w + 1"))

    def test_calabi_yau_pairs_vanish(self):
        pairs = [projective_plane((0, 0, -3)), p1_x_p1((0, 0, -2, -2)), hirzebruch(1, (1, 0, -2, -2)),
                 local_model(1, sp.Rational(1, 2), sp.Rational(-5, 2)).pair,
                 local_model(2, sp.Rational(1, 3), sp.Rational(-7, 3)).pair]
        for p in pairs:
            self.assertEqual(e_stringy(pair_graph(p), self.mode), ZERO)


if __name__ == '__main__':
    unittest.main()
