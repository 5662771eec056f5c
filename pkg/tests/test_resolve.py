from pathlib import Path
import unittest

import numpy as np

from eicats import files, repmod
from eicats.instances import cyclic_group, fi_spec, generate
from eicats.randomize import random_module
from eicats.repmod import Side
from eicats.resolve import ResolutionError, injective_resolution, resolution_step, verify_resolution


def data_dir():
    return Path(__file__).parent.resolve() / "testdata" / "eicats"


class TestResolutionStep(unittest.TestCase):
    def setUp(self):
        self.cat = generate(fi_spec(2))
        self.simple = repmod.trivial_module_at(self.cat, Side.RIGHT, "1")

    def test_step(self):
        step = resolution_step(self.simple)
        self.assertEqual(step.Cprime, frozenset({"0", "1"}))
        self.assertEqual(step.Cdoubleprime, frozenset({"0"}))
        self.assertEqual(step.P.dims, {"0": 1, "1": 1, "2": 0})
        self.assertEqual(step.kernel.dims, {"0": 1, "1": 0, "2": 0})
        self.assertEqual(step.failures(), [])
        self.assertTrue(repmod.sequence_is_exact(step.sequence).exact)

    def test_larger_object_set(self):
        step = resolution_step(self.simple, ["0", "1", "2"])
        self.assertEqual(step.Cdoubleprime, frozenset({"0", "1"}))
        self.assertEqual(step.failures(), [])

    def test_left_module(self):
        with self.assertRaises(ResolutionError):
            resolution_step(repmod.trivial_module_at(self.cat, Side.LEFT, "1"))

    def test_not_right_closed(self):
        with self.assertRaises(ResolutionError) as context:
            resolution_step(self.simple, ["1"])
        self.assertIn("right-closed", str(context.exception))

    def test_support_leaks(self):
        with self.assertRaises(ResolutionError):
            resolution_step(self.simple, ["0"])

    def test_non_mono(self):
        cat = files.read_category(data_dir() / "nonmono.json")
        module = repmod.free_module(cat, Side.RIGHT, "2")
        step = resolution_step(module)
        self.assertEqual(step.failures(), [])


class TestInjectiveResolution(unittest.TestCase):
    def setUp(self):
        self.cat = generate(fi_spec(2))

    def test_simple_in_the_middle(self):
        simple = repmod.trivial_module_at(self.cat, Side.LEFT, "1")
        resolution = injective_resolution(simple)
        self.assertEqual(resolution.length, 1)
        self.assertEqual(resolution.C0, frozenset({"0", "1"}))
        self.assertEqual(
            [term.dims for term in resolution.injectives], [{"0": 1, "1": 1, "2": 0}, {"0": 1, "1": 0, "2": 0}]
        )
        certificate = verify_resolution(resolution.complex)
        self.assertTrue(certificate.passed, certificate.to_dict())
        self.assertEqual(certificate.bound, 2)

    def test_without_shortcut(self):
        simple = repmod.trivial_module_at(self.cat, Side.LEFT, "1")
        resolution = injective_resolution(simple, stop_at_projective=False)
        self.assertEqual(len(resolution.steps), 2)
        self.assertEqual(resolution.length, 1)
        self.assertTrue(verify_resolution(resolution.complex))

    def test_injective_input(self):
        simple = repmod.trivial_module_at(self.cat, Side.LEFT, "0")
        resolution = injective_resolution(simple)
        self.assertEqual(resolution.length, 0)
        self.assertEqual(resolution.steps, [])
        self.assertTrue(verify_resolution(resolution.complex))

    def test_zero(self):
        resolution = injective_resolution(repmod.zero_module(self.cat, Side.LEFT))
        self.assertEqual(resolution.injectives, [])
        self.assertEqual(resolution.length, 0)

    def test_right_module(self):
        with self.assertRaises(ResolutionError):
            injective_resolution(repmod.free_module(self.cat, Side.RIGHT, "1"))

    def test_projective_complex(self):
        simple = repmod.trivial_module_at(self.cat, Side.LEFT, "1")
        resolution = injective_resolution(simple)
        self.assertEqual(resolution.projective.side, Side.RIGHT)
        self.assertEqual(resolution.projective.terms[-1].dims, {"0": 0, "1": 1, "2": 0})

    def test_random_modules(self):
        rng = np.random.default_rng(3)
        for _ in range(5):
            module = random_module(self.cat, Side.LEFT, rng)
            certificate = verify_resolution(injective_resolution(module).complex)
            self.assertTrue(certificate.passed, certificate.to_dict())

    def test_group(self):
        cat = generate(fi_spec(1, group=cyclic_group(2)))
        rng = np.random.default_rng(5)
        for _ in range(3):
            module = random_module(cat, Side.LEFT, rng)
            self.assertTrue(verify_resolution(injective_resolution(module, stop_at_projective=False).complex))

    def test_non_mono(self):
        cat = files.read_category(data_dir() / "nonmono.json")
        module = files.read_module(data_dir() / "simple_1.json")
        resolution = injective_resolution(module)
        certificate = verify_resolution(resolution.complex)
        self.assertTrue(certificate.passed, certificate.to_dict())
        self.assertLess(resolution.length, len(cat.objects))


class TestCertificate(unittest.TestCase):
    def test_not_a_resolution(self):
        cat = generate(fi_spec(2))
        simple = repmod.trivial_module_at(cat, Side.LEFT, "1")
        complex_ = repmod.ChainComplex(Side.LEFT, [simple, simple], [repmod.identity_hom(simple)])
        certificate = verify_resolution(complex_)
        self.assertFalse(certificate.passed)
        self.assertIn("term 1 is not injective", certificate.failures)
        self.assertFalse(certificate.to_dict()["passed"])

    def test_zeroed_differential(self):
        cat = generate(fi_spec(2))
        resolution = injective_resolution(repmod.trivial_module_at(cat, Side.LEFT, "1"))
        terms, maps = resolution.complex.terms, list(resolution.complex.maps)
        maps[1] = repmod.zero_hom(terms[1], terms[2])
        certificate = verify_resolution(repmod.ChainComplex(Side.LEFT, terms, maps))
        self.assertFalse(certificate.passed)
        self.assertIn("exactness", certificate.failures)
        self.assertEqual(certificate.exactness.homology[2], {"0": 1, "1": 0, "2": 0})

    def test_empty_complex(self):
        certificate = verify_resolution(repmod.ChainComplex(Side.LEFT, [], []))
        self.assertTrue(certificate.passed)
        self.assertEqual(certificate.length, 0)
        self.assertEqual(certificate.injective_terms, {})
