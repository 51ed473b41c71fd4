import io
import json
import os
import tempfile
import unittest
from contextlib import redirect_stderr, redirect_stdout
from unittest.mock import patch

import metrics_exporter
from config import ComputeConfig
from errors import ParseError
from exact import parse
from stringy_cli import parse_site, run

CORPUS = os.path.join(os.path.dirname(os.path.abspath(__file__)), 'corpus')


def corpus(name: str) -> str:
    return os.path.join(CORPUS, name)


class CliTestCase(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()

    def tearDown(self):
        self.tmp.cleanup()

    def invoke(self, *argv):
        out, err = io.StringIO(), io.StringIO()
        with redirect_stdout(out), redirect_stderr(err):
            code = run(list(argv))
        return code, out.getvalue().strip(), err.getvalue()

    def write(self, name: str, text: str) -> str:
        path = os.path.join(self.tmp.name, name)
        with open(path, 'w') as f:
            f.write(text)
        return path


class GraphCommandsTestCase(CliTestCase):
    def test_classify(self):
        self.assertEqual(self.invoke('classify', corpus('a1.json'))[:2], (0, 'log-terminal; admissible'))
        code, out, _ = self.invoke('classify', corpus('cone_d4.json'))
        self.assertEqual(code, 0)
        self.assertTrue(out.startswith('not log-canonical'))

    def test_discrepancy(self):
        self.assertEqual(self.invoke('discrepancy', corpus('cone_d4.json'))[1], 'C = -2')

    def test_stringy(self):
        self.assertEqual(self.invoke('stringy', corpus('cone_d5.json'), '--euler')[:2], (0, '5'))
        self.assertEqual(self.invoke('stringy', '--mode', 'global', corpus('a1.json'))[1], 'w^2 + w')
        self.assertEqual(self.invoke('chi-y', corpus('a1.json'))[1], 'y + 1')
        self.assertEqual(self.invoke('euler', corpus('cone_d7.json'), '--termwise')[1], '7')

    def test_json_output(self):
        code, out, _ = self.invoke('stringy', '--output', 'json', corpus('cone_d5.json'), '--euler')
        self.assertEqual(code, 0)
        self.assertEqual(json.loads(out), {'result': '5', 'canonical': '5'})

    def test_blowup(self):
        code, out, _ = self.invoke('blowup', corpus('a1.json'), '--site', 'free', '--site', 'on:E0')
        self.assertEqual(code, 0)
        ids = [c['id'] for c in json.loads(out)['curves']]
        self.assertEqual(ids, ['E0', 'B1', 'B2'])
        code, out, _ = self.invoke('blowup', corpus('veys_chain.json'), '--site', 'node:N1:T', '--verify')
        self.assertEqual((code, out.split(':')[0]), (0, 'PASS'))

    def test_limit(self):
        self.assertEqual(self.invoke('limit', corpus('limit_example.txt'))[1], '2')
        self.assertEqual(self.invoke('limit', '(s^(1/2) - 1)/(s - 1)', '--variable', 's')[1], '1/2')


class OrbifoldCommandsTestCase(CliTestCase):
    def test_orbifold_euler(self):
        self.assertEqual(self.invoke('orbifold', corpus('z3_cone_d5_orbifold.json'), '--euler')[:2],
                         (0, '15'))

    def test_mckay_check(self):
        for name in ('a1_mckay.json', 'z2_cone_d4_mckay.json'):
            code, out, _ = self.invoke('mckay-check', corpus(name))
            self.assertEqual(code, 0)
            self.assertTrue(out.startswith('PASS:'), out)


class ToricCommandsTestCase(CliTestCase):
    def test_rigidity(self):
        code, out, _ = self.invoke('toric-rigidity', corpus('p2_cy.json'), '--q-order', '1')
        self.assertEqual(code, 0)
        self.assertEqual(out.splitlines(), [
            'PASS: q^0 (chi_y level) coefficient vanishes',
            'PASS: all coefficients zero through q^1',
        ])
        code, _, _ = self.invoke('toric-rigidity', corpus('p2_z3.json'), '--q-order', '1')
        self.assertEqual(code, 0)

    def test_rigidity_needs_calabi_yau(self):
        code, out, err = self.invoke('toric-rigidity', corpus('p1xp1.json'), '--q-order', '0')
        self.assertEqual((code, out), (1, ''))
        self.assertIn('error:', err)

    def test_elliptic(self):
        code, out, _ = self.invoke('elliptic', corpus('p1xp1.json'), '--q-order', '0', '--chi-y')
        self.assertEqual(code, 0)
        self.assertEqual(parse(out), parse("(1 - y)^2/y"))
        self.assertEqual(self.invoke('elliptic', corpus('p1xp1.json'), '--q-order', '0',
                                     '--signature')[1], '0')
        code, out, _ = self.invoke('elliptic', corpus('p2_cy.json'), '--q-order', '1',
                                   '--method', 'localization', '--output', 'json')
        self.assertEqual((code, json.loads(out)['result']), (0, []))

    def test_elliptic_minus_one_methods(self):
        for method in ('classes', 'limit'):
            code, out, _ = self.invoke('elliptic', corpus('local_model_m1.json'), '--q-order', '2',
                                       '--method', method, '--output', 'json')
            self.assertEqual((code, json.loads(out)['result']), (0, []), method)


class VerifyTestCase(CliTestCase):
    def test_verify_passes(self):
        before = metrics_exporter.check_count('mckay', 'pass')
        code, out, _ = self.invoke('verify', '--q-order', '0')
        self.assertEqual(code, 0)
        last = out.splitlines()[-1]
        passed, total = last.split()[0].split('/')
        self.assertEqual(passed, total)
        self.assertNotIn('FAIL:', out)
        self.assertGreaterEqual(metrics_exporter.check_count('mckay', 'pass'), before + 11)


class ErrorHandlingTestCase(CliTestCase):
    def test_input_errors_exit_two(self):
        code, _, err = self.invoke('classify', os.path.join(self.tmp.name, 'missing.json'))
        self.assertEqual(code, 2)
        self.assertIn('cannot read', err)
        code, _, _ = self.invoke('classify', self.write('broken.json', '{"curves": ['))
        self.assertEqual(code, 2)
        bad = self.write('bad.json', json.dumps({'curves': [{'id': 'E0', 'self': -2}],
                                                  'nodes': [['E0', 'X']]}))
        code, _, err = self.invoke('classify', bad)
        self.assertEqual(code, 2)
        self.assertIn('$.nodes[0]', err)

    def test_mathematical_errors_exit_one(self):
        code, _, err = self.invoke('euler', corpus('veys_chain.json'), '--termwise')
        self.assertEqual(code, 1)
        self.assertIn('-1', err)
        chain = self.write('chain.json', json.dumps({'curves': [
            {'id': 'E0', 'self': -1}, {'id': 'E1', 'self': -1}], 'nodes': [['E0', 'E1']]}))
        self.assertEqual(self.invoke('classify', chain)[0], 1)

    def test_invalid_config_exits_two(self):
        self.assertEqual(self.invoke('classify', corpus('a1.json'), '--q-order', '-1')[0], 2)

    def test_unknown_site(self):
        with self.assertRaises(ParseError):
            parse_site('somewhere')
        code, _, _ = self.invoke('blowup', corpus('a1.json'), '--site', 'node:E0:E9')
        self.assertEqual(code, 2)


class ConfigAndMetricsTestCase(CliTestCase):
    def test_environment_overrides(self):
        with patch.dict(os.environ, {'STRINGY_Q_ORDER': '5', 'STRINGY_LOG_LEVEL': 'DEBUG'}):
            config = ComputeConfig.from_env()
            self.assertEqual((config.q_order, config.log_level), (5, 'DEBUG'))
            self.assertEqual(ComputeConfig.from_env(q_order=2).q_order, 2)
        with self.assertRaises(ValueError):
            ComputeConfig(mode='everywhere')

    def test_metrics_file(self):
        path = os.path.join(self.tmp.name, 'stringy.prom')
        self.assertEqual(self.invoke('classify', corpus('a1.json'), '--metrics-file', path)[0], 0)
        with open(path) as f:
            text = f.read()
        self.assertIn('stringy_computations_total{command="classify"}', text)
        self.assertIn(b'stringy_computation_duration_seconds', metrics_exporter.metrics_text())

    def test_log_file(self):
        path = os.path.join(self.tmp.name, 'stringy.log')
        self.invoke('classify', corpus('a1.json'), '--log-level', 'INFO', '--log-file', path)
        with open(path) as f:
            self.assertIn('running classify', f.read())


if __name__ == '__main__':
    unittest.main()
