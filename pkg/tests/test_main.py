import json
from pathlib import Path
import re
import tempfile
import unittest
from unittest.mock import patch

from typer.testing import CliRunner

from eicats import files, main, repmod
from eicats.instances import fi_spec, generate
from eicats.repmod import Side


def data_dir():
    return Path(__file__).parent.resolve() / "testdata" / "eicats"


class TestMain(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.fi = generate(fi_spec(2))

    def setUp(self):
        self.runner = CliRunner()
        self.tmpdir = tempfile.TemporaryDirectory()
        self.tmp = Path(self.tmpdir.name)
        self.out = self.tmp / "out.json"

    def tearDown(self):
        self.tmpdir.cleanup()

    def invoke(self, *args):
        return self.runner.invoke(main.app, ["--no-cache", "--out", str(self.out), *args])

    def output(self):
        return json.loads(self.out.read_text())

    def write_module(self, module, name):
        path = self.tmp / name
        path.write_text(files.dumps(module.to_dict()))
        return str(path)

    def test_version(self):
        result = self.runner.invoke(main.app, ["--version"])
        assert result.exit_code == 0
        assert re.match(r"\d+\.\d+\.\d+", result.stdout)

    @patch("subprocess.run")
    def test_docs_live(self, mock_subprocess):
        result = self.runner.invoke(main.app, ["docs"])
        assert result.exit_code == 0
        mock_subprocess.assert_called_once()
        self.assertIn("sphinx-autobuild", str(mock_subprocess.call_args))

    @patch("webbrowser.open_new")
    @patch("subprocess.run")
    def test_docs_static(self, mock_subprocess, mock_open_web):
        result = self.runner.invoke(main.app, ["docs", "--no-live"])
        assert result.exit_code == 0
        mock_subprocess.assert_called_once()
        self.assertIn("sphinx-build", str(mock_subprocess.call_args))
        mock_open_web.assert_called_once()

    def test_gen(self):
        result = self.invoke("gen", str(data_dir() / "fi2.json"))
        assert result.exit_code == 0
        data = self.output()
        self.assertEqual(len(data["morphisms"]), 8)
        self.assertEqual(data["instance"]["family"], "FI_G")

    def test_gen_vi(self):
        result = self.invoke("gen", str(data_dir() / "vi2.json"))
        assert result.exit_code == 0
        self.assertEqual(len(self.output()["morphisms"]), 13)

    def test_gen_stdout(self):
        result = self.runner.invoke(main.app, ["--no-cache", "gen", str(data_dir() / "fi2.toml")])
        assert result.exit_code == 0
        self.assertIn('"objects"', result.stdout)

    def test_gen_bad_spec(self):
        result = self.invoke("gen", str(data_dir() / "bad_spec.json"))
        assert result.exit_code == 2
        self.assertIn('"error": "SchemaError"', result.output)
        self.assertFalse(self.out.exists())

    def test_gen_malformed_specs(self):
        malformed = {
            "cap.json": {"family": "FI_G", "level": 2, "cap": "abc"},
            "field.json": {"family": "VI_q", "level": 1, "field": {"mul": [[0, 0], [0, 1]]}},
            "table.json": {"family": "FI_G", "level": 1, "group": {"table": [["a", "b"], ["b", "a"]]}},
        }
        for name, data in malformed.items():
            path = self.tmp / name
            path.write_text(json.dumps(data))
            result = self.invoke("gen", str(path))
            assert result.exit_code == 2, name
            self.assertIn('"error": "SchemaError"', result.output)
            self.assertFalse(self.out.exists())

    def test_check_malformed_spec(self):
        path = self.tmp / "cap.json"
        path.write_text(json.dumps({"family": "FI_G", "level": 2, "cap": "abc"}))
        result = self.invoke("check", str(path))
        assert result.exit_code == 2
        self.assertIn('"error": "SchemaError"', result.output)

    def test_gen_cap(self):
        result = self.runner.invoke(main.app, ["--no-cache", "--cap", "2", "gen", str(data_dir() / "vi2.json")])
        assert result.exit_code == 2

    def test_nakayama(self):
        module = self.write_module(repmod.free_module(self.fi, Side.LEFT, "1"), "free_1_left.json")
        result = self.invoke("nakayama", str(data_dir() / "fi2.json"), module)
        assert result.exit_code == 0
        data = self.output()
        self.assertEqual(data["dims"], {"0": 1, "1": 1, "2": 0})
        self.assertEqual(data["provenance"]["construction"], "nakayama")
        self.assertIn("object", result.output)

    def test_nakayama_inverse(self):
        cofree = repmod.dualize(repmod.free_module(self.fi, Side.RIGHT, "1"))
        module = self.write_module(cofree, "cofree_1.json")
        result = self.invoke("nakayama", str(data_dir() / "fi2.json"), module, "--inverse")
        assert result.exit_code == 0
        data = self.output()
        self.assertEqual(data["dims"], {"0": 0, "1": 1, "2": 2})
        self.assertEqual(data["provenance"]["construction"], "inverse_nakayama")

    def test_nakayama_right_module(self):
        module = self.write_module(repmod.free_module(self.fi, Side.RIGHT, "1"), "right.json")
        result = self.invoke("nakayama", str(data_dir() / "fi2.json"), module)
        assert result.exit_code == 2
        self.assertIn('"error"', result.output)

    def test_nakayama_invalid_module(self):
        result = self.invoke("nakayama", str(data_dir() / "nonmono.json"), str(data_dir() / "bad_module.json"))
        assert result.exit_code == 2
        self.assertIn('"error": "ModuleError"', result.output)

    def test_invalid_category(self):
        result = self.invoke("audit", str(data_dir() / "not_ei.json"))
        assert result.exit_code == 2
        self.assertIn('"error": "CategoryError"', result.output)

    def test_resolve(self):
        result = self.invoke("resolve", str(data_dir() / "nonmono.json"), str(data_dir() / "simple_1.json"))
        assert result.exit_code == 0
        data = self.output()
        self.assertTrue(data["certificate"]["passed"])
        self.assertEqual(data["provenance"]["construction"], "injective_resolution")

    def test_resolve_no_shortcut(self):
        module = self.write_module(repmod.trivial_module_at(self.fi, Side.LEFT, "1"), "simple.json")
        result = self.invoke("resolve", str(data_dir() / "fi2.json"), module, "--no-shortcut")
        assert result.exit_code == 0
        self.assertEqual(self.output()["certificate"]["length"], 1)

    def test_check(self):
        result = self.invoke("--seed", "3", "check", str(data_dir() / "z2.json"))
        assert result.exit_code == 0
        self.assertTrue(self.output()["passed"])

    def test_check_group(self):
        result = self.runner.invoke(
            main.app,
            [
                "--out",
                str(self.out),
                "--seed",
                "3",
                "check",
                str(data_dir() / "z2.json"),
                "--suite",
                "adjunction",
                "--adjunction-pairs",
                "2",
            ],
        )
        assert result.exit_code == 0
        data = self.output()
        self.assertTrue(data["passed"])
        self.assertEqual(data["seed"], 3)
        self.assertEqual(data["suite"], "adjunction")

    def test_check_invalid(self):
        result = self.invoke("check", str(data_dir() / "not_ei.json"))
        assert result.exit_code == 2

    def test_hom(self):
        source = self.write_module(repmod.free_module(self.fi, Side.LEFT, "1"), "source.json")
        target = self.write_module(repmod.free_module(self.fi, Side.LEFT, "0"), "target.json")
        result = self.invoke("hom", str(data_dir() / "fi2.json"), source, target, "--basis")
        assert result.exit_code == 0
        data = self.output()
        self.assertEqual(data["dim"], 1)
        self.assertEqual(len(data["basis"]), 1)

    def test_audit(self):
        result = self.invoke("audit", str(data_dir() / "fi2.json"))
        assert result.exit_code == 0
        self.assertIn("WARNING", result.output)
        self.assertFalse(self.output()["verdict"])

    def test_audit_group(self):
        result = self.invoke("audit", str(data_dir() / "z2.json"))
        assert result.exit_code == 0
        self.assertNotIn("WARNING", result.output)
        self.assertTrue(self.output()["verdict"])

    def test_stabilize(self):
        result = self.invoke("stabilize", str(data_dir() / "fi2.json"), str(data_dir() / "free_1.json"))
        assert result.exit_code == 0
        data = self.output()
        self.assertTrue(data["stable"])
        self.assertEqual(data["presentation"]["generators"], ["1"])

    def test_stabilize_below_degree(self):
        result = self.invoke(
            "stabilize", str(data_dir() / "fi2.json"), str(data_dir() / "quotient_1.json"), "--level", "1"
        )
        assert result.exit_code == 2
