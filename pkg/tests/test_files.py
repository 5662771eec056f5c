from io import StringIO
from pathlib import Path
import tempfile
import unittest
from unittest.mock import patch

from eicats import files
from eicats.instances import Family, fi_spec, vi_spec
from eicats.repmod import Side


def data_dir():
    return Path(__file__).parent.resolve() / "testdata" / "eicats"


class TestReadData(unittest.TestCase):
    def test_json_and_toml_agree(self):
        from_json = files.read_spec(data_dir() / "fi2.json")
        from_toml = files.read_spec(data_dir() / "fi2.toml")
        self.assertEqual(from_json.family, Family.FI_G)
        self.assertEqual(from_toml.level, from_json.level)
        self.assertEqual(from_toml.cap, 1000)

    def test_broken(self):
        with self.assertRaises(files.SchemaError):
            files.read_data(data_dir() / "broken.json")

    def test_missing(self):
        with self.assertRaises(files.SchemaError):
            files.read_data(data_dir() / "missing.json")

    def test_bad_spec(self):
        with self.assertRaises(files.SchemaError):
            files.read_spec(data_dir() / "bad_spec.json")

    def test_cap_override(self):
        spec = files.read_spec(data_dir() / "fi2.toml", cap=10)
        self.assertEqual(spec.cap, 10)


class TestCanonicalJSON(unittest.TestCase):
    def test_dumps_sorted(self):
        self.assertEqual(files.dumps({"b": 1, "a": [1, 2]}), files.dumps({"a": [1, 2], "b": 1}))
        self.assertTrue(files.dumps({}).endswith("\n"))

    def test_digest(self):
        self.assertEqual(files.digest({"x": 1, "y": 2}), files.digest({"y": 2, "x": 1}))
        self.assertNotEqual(files.digest({"x": 1}), files.digest({"x": 2}))
        self.assertEqual(len(files.digest([])), 64)

    def test_write_output(self):
        with tempfile.TemporaryDirectory() as tmpdir:
            out = Path(tmpdir) / "nested" / "out.json"
            files.write_output({"dim": 2}, out)
            self.assertEqual(out.read_text(), files.dumps({"dim": 2}))

    def test_write_stdout(self):
        with patch("sys.stdout", new=StringIO()) as fake_out:
            files.write_output({"dim": 2})
        self.assertEqual(fake_out.getvalue(), files.dumps({"dim": 2}))


class TestCache(unittest.TestCase):
    def setUp(self):
        self.tmpdir = tempfile.TemporaryDirectory()
        self.cache = Path(self.tmpdir.name)

    def tearDown(self):
        self.tmpdir.cleanup()

    def cached_path(self, filename):
        return self.cache / filename

    def test_cached_generate_writes(self):
        with patch("eicats.files.get_cached_path", self.cached_path):
            cat = files.cached_generate(fi_spec(2))
            cached = list(self.cache.glob("FI_G-*.json"))
            self.assertEqual(len(cached), 1)
            self.assertEqual(len(cat.morphisms), 8)

            with patch("eicats.files.generate") as mock_generate:
                again = files.cached_generate(fi_spec(2))
                mock_generate.assert_not_called()
            self.assertEqual(again.to_dict(), cat.to_dict())

    def test_cap_does_not_change_cache_file(self):
        with patch("eicats.files.get_cached_path", self.cached_path):
            files.cached_generate(fi_spec(1))
            files.cached_generate(fi_spec(1, cap=50))
        self.assertEqual(len(list(self.cache.iterdir())), 1)

    def test_force(self):
        with patch("eicats.files.get_cached_path", self.cached_path):
            files.cached_generate(vi_spec(1))
            with patch("eicats.files.generate", wraps=files.generate) as mock_generate:
                files.cached_generate(vi_spec(1), force=True)
                mock_generate.assert_called_once()

    def test_no_cache(self):
        with patch("eicats.files.get_cached_path", self.cached_path):
            files.cached_generate(fi_spec(1), use_cache=False)
        self.assertEqual(list(self.cache.iterdir()), [])

    def test_unreadable_cache(self):
        with patch("eicats.files.get_cached_path", self.cached_path):
            files.cached_generate(fi_spec(1))
            for path in self.cache.iterdir():
                path.write_text("{not json")
            with patch("sys.stderr", new=StringIO()) as fake_out:
                cat = files.cached_generate(fi_spec(1))
                self.assertIn("WARNING: Ignoring unreadable cached instance", fake_out.getvalue())
        self.assertEqual(len(cat.morphisms), 3)


class TestCategoriesAndModules(unittest.TestCase):
    def test_read_category_from_spec(self):
        cat = files.read_category(data_dir() / "fi2.json", use_cache=False)
        self.assertEqual(len(cat.morphisms), 8)

    def test_read_category_cap(self):
        with self.assertRaises(Exception) as context:
            files.read_category(data_dir() / "vi2.json", cap=2, use_cache=False)
        self.assertIn("cap", str(context.exception))

    def test_not_a_category(self):
        with self.assertRaises(files.SchemaError):
            files.category_from_data([1, 2])
        with self.assertRaises(files.SchemaError):
            files.category_from_data({"objects": ["0"]})

    def test_category_round_trip(self):
        cat = files.read_category(data_dir() / "nonmono.json")
        data = files.category_to_data(cat)
        self.assertEqual(files.category_from_data(data).to_dict(), cat.to_dict())

    def test_module_relative_category(self):
        module = files.read_module(data_dir() / "simple_1.json")
        self.assertEqual(module.side, Side.LEFT)
        self.assertEqual(module.dims, {"0": 0, "1": 1, "2": 0})
        self.assertEqual(module.cat.hom("0", "1"), ("u", "v"))

    def test_module_given_category(self):
        cat = files.read_category(data_dir() / "nonmono.json")
        module = files.read_module(data_dir() / "right_simple_1.json", cat)
        self.assertEqual(module.side, Side.RIGHT)

    def test_module_without_category(self):
        with self.assertRaises(files.SchemaError):
            files.module_from_data({"side": "left", "dims": {}})

    def test_module_wrong_shape(self):
        cat = files.read_category(data_dir() / "nonmono.json")
        with self.assertRaises(files.SchemaError):
            files.module_from_data({"side": "left", "dims": {"0": 1}, "action": {"u": [["1", "2"]]}}, cat)

    def test_read_presentation(self):
        presentation = files.read_presentation(data_dir() / "quotient_1.json")
        self.assertEqual(presentation.generators, ("1",))
        self.assertEqual(len(presentation.relations), 1)

    def test_bad_presentation(self):
        with self.assertRaises(files.SchemaError):
            files.read_presentation(data_dir() / "broken.json")
