from pathlib import Path
import unittest

from eicats import eicat, files
from eicats.eicat import ViolationKind
from eicats.instances import fi_spec, generate


def data_dir():
    return Path(__file__).parent.resolve() / "testdata" / "eicats"


def poset_category():
    """Two objects and a single arrow 0 → 1."""
    return eicat.category_from_arrows(["0", "1"], [("a", "0", "1")], {}, name="0→1")


class TestCategory(unittest.TestCase):
    def setUp(self):
        self.nonmono = files.read_category(data_dir() / "nonmono.json")

    def test_read(self):
        self.assertEqual(self.nonmono.objects, ("0", "1", "2"))
        self.assertEqual(len(self.nonmono.morphisms), 7)
        self.assertEqual(self.nonmono.hom("0", "1"), ("u", "v"))
        self.assertEqual(self.nonmono.compose("f", "v"), "fu")

    def test_valid(self):
        self.assertEqual(eicat.validate_category(self.nonmono), [])
        self.assertEqual(eicat.validate_category(poset_category()), [])

    def test_not_ei(self):
        cat = files.read_category(data_dir() / "not_ei.json")
        kinds = {violation.kind for violation in eicat.validate_category(cat)}
        self.assertEqual(kinds, {ViolationKind.EI})

    def test_missing_composite(self):
        data = files.read_data(data_dir() / "nonmono.json")
        data["compose"] = [entry for entry in data["compose"] if entry[:2] != ["f", "u"]]
        cat = eicat.FiniteEICategory.from_dict(data)
        violations = eicat.validate_category(cat)
        self.assertTrue(violations)
        self.assertTrue(all(violation.kind == ViolationKind.INCOMPLETE for violation in violations))

    def test_unknown_ids(self):
        with self.assertRaises(eicat.UnknownIdError):
            self.nonmono.hom("0", "9")
        with self.assertRaises(KeyError):
            self.nonmono.src("w")

    def test_compose_not_composable(self):
        with self.assertRaises(eicat.CompositionError):
            self.nonmono.compose("u", "f")

    def test_leq(self):
        self.assertTrue(eicat.leq(self.nonmono, "0", "2"))
        self.assertFalse(eicat.leq(self.nonmono, "2", "0"))
        self.assertTrue(eicat.leq(self.nonmono, "1", "1"))

    def test_monomorphism(self):
        self.assertFalse(eicat.is_monomorphism(self.nonmono, "f"))
        self.assertEqual(eicat.non_monomorphism_witness(self.nonmono, "f"), ("u", "v"))
        self.assertTrue(eicat.is_monomorphism(self.nonmono, "u"))

    def test_generators(self):
        cat = self.nonmono
        self.assertTrue({"f", "u", "v"} <= set(cat.generators))
        identities = set(cat.identity.values())
        self.assertEqual(set(cat.generators) | set(cat.factorization) | identities, set(cat.morphisms))
        for morphism, (g, f) in cat.factorization.items():
            self.assertEqual(cat.compose(g, f), morphism)

    def test_generators_fi(self):
        cat = generate(fi_spec(2))
        for morphism, (g, f) in cat.factorization.items():
            self.assertEqual(cat.compose(g, f), morphism)
        self.assertEqual(len(cat.automorphism_generators("0")), 0)
        self.assertEqual(len(cat.automorphism_generators("1")), 0)

    def test_closures(self):
        cat = self.nonmono
        self.assertEqual(eicat.downward_closure(cat, ["1"]), frozenset({"0", "1"}))
        self.assertTrue(eicat.is_right_closed(cat, ["0", "1"]))
        self.assertFalse(eicat.is_right_closed(cat, ["1"]))
        self.assertFalse(eicat.is_convex(cat, ["0", "2"]))
        self.assertTrue(eicat.is_convex(cat, ["1", "2"]))
        self.assertEqual(eicat.right_closed_subcategory(cat, ["1"]).objects, frozenset({"0", "1"}))
        self.assertEqual(eicat.maximal_objects(cat, ["0", "1"]), frozenset({"1"}))
        self.assertEqual(eicat.non_maximal_objects(cat, ["0", "1"]), frozenset({"0"}))

    def test_full_subcategory(self):
        sub = eicat.full_subcategory(self.nonmono, ["1", "2"]).category
        self.assertEqual(set(sub.morphisms), {"id_1", "id_2", "f"})
        self.assertEqual(eicat.validate_category(sub), [])

    def test_round_trip(self):
        cat = eicat.FiniteEICategory.from_dict(self.nonmono.to_dict())
        self.assertEqual(cat.to_dict(), self.nonmono.to_dict())

    def test_finiteness_report(self):
        report = eicat.finiteness_report(self.nonmono)
        self.assertTrue(report.skeletal and report.ei)
        self.assertEqual(report.inward_morphisms, {"0": 1, "1": 3, "2": 3})
        self.assertEqual(report.largest_hom_set, 2)

    def test_natural_sort(self):
        cat = generate(fi_spec(2))
        self.assertEqual(cat.objects, ("0", "1", "2"))
        self.assertEqual(cat.levels, {"0": 0, "1": 1, "2": 2})
