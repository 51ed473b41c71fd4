import random
import unittest

import sympy as sp

from errors import MinusOneCoefficient, NotConstant, ParseError, PoleAtOne, ZeroDenominator
from exact import (
    ONE,
    ZERO,
    RatExpr,
    as_rational,
    canonicalize,
    chi_y_specialize,
    euler_specialize,
    evaluate_at,
    geometric_factor,
    limit_at_one,
    negate_variable,
    parse,
    render,
    w_power,
)


def random_monomial(rng: random.Random) -> RatExpr:
    exponents = {v: sp.Rational(rng.randint(-2, 3), rng.choice((1, 1, 2))) for v in rng.sample('UVY', 2)}
    return RatExpr.monomial(exponents, rng.choice((1, -1, 2, sp.Rational(1, 3))))


def random_expr(rng: random.Random) -> RatExpr:
    num = ZERO
    for _ in range(rng.randint(1, 3)):
        num = num + random_monomial(rng)
    den = ONE + random_monomial(rng)
    if den.is_zero():
        den = ONE
    return num / den


def sampled_expr(rng: random.Random) -> RatExpr:
    """Random expression in S and Y, integer exponents, regular at positive values"""
    num = ZERO
    for _ in range(rng.randint(1, 3)):
        exponents = {'S': rng.randint(-2, 3), 'Y': rng.randint(-2, 3)}
        num = num + RatExpr.monomial(exponents, rng.choice((1, -1, 2, sp.Rational(1, 3))))
    den = RatExpr.constant(3) + RatExpr.monomial({'S': rng.randint(1, 2), 'Y': rng.randint(1, 2)})
    return num / den


class RingLawsTestCase(unittest.TestCase):
    def setUp(self):
        self.rng = random.Random(1729)

    def test_commutative_ring_laws(self):
        for _ in range(100):
            a, b, c = (random_expr(self.rng) for _ in range(3))
            self.assertEqual(a + b, b + a)
            self.assertEqual(a * b, b * a)
            self.assertEqual((a + b) + c, a + (b + c))
            self.assertEqual(a * (b + c), a * b + a * c)
            self.assertEqual(a - a, ZERO)

    def test_division_inverts_multiplication(self):
        for _ in range(100):
            a, b = random_expr(self.rng), random_expr(self.rng)
            if b.is_zero():
                continue
            self.assertEqual((a * b) / b, a)

    def test_render_parse_round_trip(self):
        for _ in range(100):
            a = random_expr(self.rng)
            self.assertEqual(parse(render(a)), a)

    def test_division_by_zero(self):
        with self.assertRaises(ZeroDenominator):
            ONE / ZERO


class CanonicalFormTestCase(unittest.TestCase):
    def test_equal_fractions_share_one_form(self):
        self.assertEqual(parse("(w^2 - 1)/(w - 1)"), parse("w + 1"))
        self.assertEqual(parse("(u - 1)/(u^(1/2) - 1)"), parse("u^(1/2) + 1"))

    def test_canonicalize_removes_common_factors(self):
        rng = random.Random(271)
        checked = 0
        while checked < 100:
            a, k = random_expr(rng), random_expr(rng)
            if k.is_zero():
                continue
            raw = RatExpr(a.num * k.num * 3, a.den * k.num * 3)
            self.assertEqual(canonicalize(raw), a)
            self.assertEqual(canonicalize(a), a)
            checked += 1

    def test_render(self):
        self.assertEqual(render(ZERO), '0')
        self.assertEqual(render(w_power(2) + w_power(1)), 'w^2 + w')
        self.assertEqual(render(RatExpr.constant(sp.Rational(-3, 2))), '-3/2')

    def test_as_rational(self):
        self.assertEqual(as_rational("-3/2"), sp.Rational(-3, 2))
        self.assertEqual(as_rational(4), sp.Integer(4))
        with self.assertRaises(ParseError):
            as_rational("three halves")

    def test_parse_rejects_floats_and_unknown_variables(self):
        with self.assertRaises(ParseError):
            parse("1.5*u")
        with self.assertRaises(ParseError):
            parse("q + 1")

    def test_constant_value(self):
        self.assertEqual(parse("6/4").constant_value(), sp.Rational(3, 2))
        with self.assertRaises(NotConstant):
            parse("u").constant_value()


class SpecializationTestCase(unittest.TestCase):
    def test_geometric_factor(self):
        self.assertEqual(geometric_factor(0), ONE)
        self.assertEqual(geometric_factor(1), parse("1/(w + 1)"))
        with self.assertRaises(MinusOneCoefficient):
            geometric_factor(-1)

    def test_limit_at_one(self):
        self.assertEqual(limit_at_one(parse("(s^(1/2) - 1)/(s - 1)"), 'S'), RatExpr.constant(sp.Rational(1, 2)))
        self.assertEqual(limit_at_one(parse("(s*u - 1)/(s + 1)"), 'S'), parse("(u - 1)/2"))
        with self.assertRaises(PoleAtOne):
            limit_at_one(parse("u/(s - 1)"), 'S')

    def test_euler_of_geometric_factor(self):
        rng = random.Random(4096)
        checked = 0
        while checked < 50:
            a = sp.Rational(rng.randint(-20, 20), rng.randint(1, 7))
            if a == -1:
                continue
            self.assertEqual(euler_specialize(geometric_factor(a)), 1 / (a + 1))
            checked += 1

    def test_limit_matches_sampling(self):
        rng = random.Random(65537)
        near_one = 1 + sp.Rational(1, 10 ** 6)
        for _ in range(30):
            k, j = rng.randint(1, 4), rng.randint(1, 4)
            ratio = (RatExpr.monomial({'S': k}) - ONE) / (RatExpr.monomial({'S': j}) - ONE)
            e = sampled_expr(rng) * ratio + sampled_expr(rng)
            expected = evaluate_at(limit_at_one(e, 'S'), 'Y', 2).constant_value()
            sample = evaluate_at(evaluate_at(e, 'S', near_one), 'Y', 2).constant_value()
            self.assertLess(abs(sample - expected), sp.Rational(1, 1000) * max(1, abs(expected)))

    def test_euler_and_chi_y(self):
        self.assertEqual(euler_specialize(w_power(2) + w_power(1)), 2)
        self.assertEqual(euler_specialize(geometric_factor(sp.Rational(1, 2))), sp.Rational(2, 3))
        self.assertEqual(chi_y_specialize(parse("u*v + u")), RatExpr.monomial({'Y': 1}, 2))

    def test_negate_and_evaluate(self):
        self.assertEqual(negate_variable(parse("y^2 - y + 1"), 'Y'), parse("y^2 + y + 1"))
        self.assertEqual(evaluate_at(parse("y^2 - y + 1"), 'Y', -1), RatExpr.constant(3))
        with self.assertRaises(ValueError):
            negate_variable(parse("y^(1/2)"), 'Y')

    def test_euler_derivative(self):
        self.assertEqual(parse("y^2 + y^(1/2)").euler_derivative('Y'), parse("2*y^2 + y^(1/2)/2"))
        self.assertEqual(parse("u").euler_derivative('Y'), ZERO)


if __name__ == '__main__':
    unittest.main()
