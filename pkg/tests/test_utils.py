import json
import os
import shutil
import tempfile
from pathlib import Path
from unittest import mock

from django.test import SimpleTestCase, override_settings

from rcp_dynamics.conf import THREADS_ENV, get_setting, get_threads
from rcp_dynamics.emitters import MANIFEST_SUFFIX, Emission, RunManifest, format_value, read_csv, write_csv
from rcp_dynamics.exceptions import ConfigurationError, ParameterError
from rcp_dynamics.utils import load_config, merge_options, parse_assignment, parse_range


class ParseTestCase(SimpleTestCase):
    def test_range(self):
        self.assertEqual(parse_range('0.5:1.5:21'), (0.5, 1.5, 21))
        for text in ('1:2', '1:2:3:4', 'a:2:3', '2:1:3', '1:2:1', '1:2:2.5'):
            with self.assertRaises(ParameterError):
                parse_range(text)

    def test_assignment(self):
        self.assertEqual(parse_assignment('a=1.8'), 1.8)
        self.assertEqual(parse_assignment(' a =2'), 2.0)
        for text in ('1.8', 'b=1.8', 'a=fast'):
            with self.assertRaises(ParameterError):
                parse_assignment(text)


class ConfigFileTestCase(SimpleTestCase):
    def setUp(self) -> None:
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp)

    def test_keys_are_normalized(self):
        path = self.tmp / 'config.json'
        path.write_text(json.dumps({'t-end': 40, 'model': 'b'}))
        self.assertEqual(load_config(path), {'t_end': 40, 'model': 'b'})

    def test_not_an_object(self):
        path = self.tmp / 'config.json'
        path.write_text('[1, 2]')
        with self.assertRaises(ParameterError):
            load_config(path)

    def test_unreadable(self):
        with self.assertRaises(ParameterError):
            load_config(self.tmp / 'missing.json')
        path = self.tmp / 'broken.json'
        path.write_text('{')
        with self.assertRaises(ParameterError):
            load_config(path)

    def test_precedence(self):
        merged = merge_options({'a': 2.0, 'dt': None}, {'a': 1.0, 'dt': 0.1, 'rtt': 1}, {'dt': 0.5, 'rtt': 2})
        self.assertEqual(merged, {'a': 2.0, 'dt': 0.1, 'rtt': 1})


class EmissionTestCase(SimpleTestCase):
    def setUp(self) -> None:
        self.tmp = Path(tempfile.mkdtemp())
        self.addCleanup(shutil.rmtree, self.tmp)
        self.out = str(self.tmp / 'data.csv')

    def manifest(self) -> RunManifest:
        return RunManifest(command='test', config={'a': 1.0}, tool_version='0')

    def test_format_value(self):
        self.assertEqual(format_value(None), '')
        self.assertEqual(format_value(True), 'true')
        self.assertEqual(format_value(float('nan')), 'nan')
        self.assertEqual(format_value(0.1), '0.10000000000000001')
        self.assertEqual(format_value(3), '3')
        self.assertEqual(format_value('limit-cycle'), 'limit-cycle')

    def test_floats_round_trip(self):
        value = 1 / 3
        write_csv(self.out, ['x'], [(value,)])
        header, rows = read_csv(self.out)
        self.assertEqual(header, ['x'])
        self.assertEqual(float(rows[0][0]), value)

    def test_manifest_is_written_last(self):
        emission = Emission(self.manifest(), self.out)
        emission.add(lambda: write_csv(self.out, ['x'], [(1.0,)]))
        paths = emission.execute()

        manifest_path = self.out + MANIFEST_SUFFIX
        self.assertEqual(paths, [self.out, manifest_path])
        payload = json.loads(Path(manifest_path).read_text())
        self.assertEqual(payload['artifact_paths'], paths)
        self.assertEqual(payload['status'], 'ok')
        self.assertTrue(payload['timestamp'])

    def test_failing_writer(self):
        def broken():
            raise OSError('disk full')

        emission = Emission(self.manifest(), self.out)
        emission.add(lambda: write_csv(self.out, ['x'], [(1.0,)]))
        emission.add(broken)
        with self.assertRaises(OSError):
            emission.execute()

        payload = json.loads(Path(self.out + MANIFEST_SUFFIX).read_text())
        self.assertEqual(payload['status'], 'failed')
        self.assertEqual(payload['artifact_paths'], [self.out, self.out + MANIFEST_SUFFIX])


class SettingsTestCase(SimpleTestCase):
    def test_package_default(self):
        self.assertEqual(get_setting('DIVERGENCE_FACTOR'), 1e12)

    @override_settings(RCP_DYNAMICS={'DIVERGENCE_FACTOR': 1e6})
    def test_override(self):
        self.assertEqual(get_setting('DIVERGENCE_FACTOR'), 1e6)
        self.assertEqual(get_setting('ROOT_CELL'), 0.05)

    @override_settings(RCP_DYNAMICS={'THREADS': 3})
    def test_threads(self):
        with mock.patch.dict(os.environ, {THREADS_ENV: ''}):
            self.assertEqual(get_threads(), 3)
        with mock.patch.dict(os.environ, {THREADS_ENV: '5'}):
            self.assertEqual(get_threads(), 5)
        with mock.patch.dict(os.environ, {THREADS_ENV: '0'}):
            self.assertEqual(get_threads(), 1)

    def test_threads_not_an_integer(self):
        with mock.patch.dict(os.environ, {THREADS_ENV: 'four'}):
            with self.assertRaises(ConfigurationError):
                get_threads()
