import unittest

import numpy as np

from eicats import randomize, repmod
from eicats.instances import fi_spec, generate
from eicats.repmod import Side


class TestRandomize(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.cat = generate(fi_spec(2))

    def test_get_rng(self):
        rng = np.random.default_rng(1)
        self.assertIs(randomize.get_rng(rng), rng)
        self.assertEqual(randomize.get_rng(5).integers(100), np.random.default_rng(5).integers(100))

    def test_random_elements(self):
        elements = randomize.random_elements(np.random.default_rng(0), 3, 2)
        self.assertEqual(elements.shape, (3, 2))

    def test_random_module_valid(self):
        rng = np.random.default_rng(0)
        for side in Side:
            for _ in range(5):
                module = randomize.random_module(self.cat, side, rng, max_dim=2)
                self.assertEqual(module.side, side)
                self.assertEqual(repmod.validate_module(module), [])
                self.assertFalse(module.is_zero())
                self.assertLessEqual(max(module.dims.values()), 2)

    def test_seeded(self):
        first = randomize.random_module(self.cat, "left", 11)
        second = randomize.random_module(self.cat, "left", 11)
        self.assertEqual(first.to_dict(), second.to_dict())

    def test_fallback(self):
        module = randomize.random_module(self.cat, Side.LEFT, 0, max_dim=0, attempts=1)
        self.assertEqual(sum(module.dims.values()), 1)

    def test_vanishing(self):
        rng = np.random.default_rng(2)
        for _ in range(3):
            module = randomize.random_vanishing_module(self.cat, Side.LEFT, rng)
            self.assertEqual(module.dims["2"], 0)
            self.assertEqual(repmod.validate_module(module), [])

    def test_pair(self):
        module, other = randomize.random_pair(self.cat, 4)
        self.assertEqual(module.side, Side.LEFT)
        self.assertEqual(other.side, Side.LEFT)

    def test_short_exact_sequence(self):
        rng = np.random.default_rng(6)
        for _ in range(3):
            sequence = randomize.random_short_exact_sequence(self.cat, Side.RIGHT, rng)
            self.assertEqual(len(sequence), 3)
            self.assertTrue(repmod.sequence_is_exact(sequence).exact)

    def test_short_exact_sequence_of_given_module(self):
        module = repmod.free_module(self.cat, Side.LEFT, "1")
        sequence = randomize.random_short_exact_sequence(self.cat, Side.LEFT, 0, module=module)
        self.assertIs(sequence.terms[1], module)
