from pathlib import Path
import unittest

import numpy as np

from eicats import exactla as la
from eicats import files, repmod
from eicats.eicat import full_subcategory
from eicats.instances import fi_spec, generate, vi_spec
from eicats.repmod import ModuleViolationKind, Side


def data_dir():
    return Path(__file__).parent.resolve() / "testdata" / "eicats"


class FIModuleTestCase(unittest.TestCase):
    @classmethod
    def setUpClass(cls):
        cls.cat = generate(fi_spec(2))
        cls.free = {i: repmod.free_module(cls.cat, Side.LEFT, i) for i in cls.cat.objects}
        cls.right_free = {i: repmod.free_module(cls.cat, Side.RIGHT, i) for i in cls.cat.objects}


class TestFreeModules(FIModuleTestCase):
    def test_dims(self):
        self.assertEqual(self.free["1"].dims, {"0": 0, "1": 1, "2": 2})
        self.assertEqual(self.right_free["1"].dims, {"0": 1, "1": 1, "2": 0})
        self.assertEqual(self.free["1"].name, "Ae_1")
        self.assertEqual(self.right_free["1"].name, "e_1A")

    def test_valid(self):
        for module in list(self.free.values()) + list(self.right_free.values()):
            self.assertEqual(repmod.validate_module(module), [])

    def test_unknown_object(self):
        with self.assertRaises(KeyError):
            repmod.free_module(self.cat, Side.LEFT, "5")

    def test_free_module_map(self):
        hom = repmod.free_module_map(self.cat, Side.LEFT, "1>2[0|0]")
        self.assertIs(hom.source.cat, self.cat)
        self.assertEqual(hom.source.name, "Ae_2")
        self.assertEqual(hom.target.name, "Ae_1")
        self.assertEqual(repmod.naturality_violations(hom, exhaustive=True), [])

    def test_dualize_twice(self):
        module = self.free["1"]
        double = repmod.dualize(repmod.dualize(module))
        self.assertEqual(double.side, Side.LEFT)
        for morphism in self.cat.morphisms:
            self.assertTrue(la.equal(double.action[morphism], module.action[morphism]))

    def test_dualize_side(self):
        dual = repmod.dualize(self.right_free["0"])
        self.assertEqual(dual.side, Side.LEFT)
        self.assertEqual(dual.dims, {"0": 1, "1": 0, "2": 0})
        self.assertEqual(repmod.validate_module(dual), [])


class TestValidation(unittest.TestCase):
    def test_bad_module(self):
        cat = files.read_category(data_dir() / "nonmono.json")
        module = files.read_module(data_dir() / "bad_module.json", cat=cat)
        kinds = {violation.kind for violation in repmod.validate_module(module)}
        self.assertIn(ModuleViolationKind.IDENTITY, kinds)

    def test_wrong_shape(self):
        cat = files.read_category(data_dir() / "nonmono.json")
        with self.assertRaises(files.SchemaError):
            files.module_from_data(
                {"side": "left", "dims": {"0": 1, "1": 1, "2": 0}, "action": {"u": [["1", "1"]]}}, cat=cat
            )

    def test_missing_action(self):
        cat = files.read_category(data_dir() / "nonmono.json")
        with self.assertRaises(repmod.ModuleError):
            repmod.CatModule.from_dict({"side": "left", "dims": {"1": 1}, "action": {}}, cat)


class TestHomSpaces(FIModuleTestCase):
    def test_yoneda(self):
        for i in self.cat.objects:
            for j in self.cat.objects:
                space = repmod.hom_space(self.free[i], self.free[j])
                self.assertEqual(space.dim, self.free[j].dims[i])

    def test_basis_is_natural(self):
        space = repmod.hom_space(self.free["2"], self.free["2"])
        self.assertEqual(space.dim, 2)
        for hom in space.basis:
            self.assertEqual(repmod.naturality_violations(hom, exhaustive=True), [])
            self.assertTrue(space.contains(hom))

    def test_hom_basis(self):
        self.assertEqual(len(repmod.hom_basis(self.free["1"], self.free["1"])), 1)
        simple = repmod.trivial_module_at(self.cat, Side.LEFT, "0")
        for i in self.cat.objects:
            self.assertEqual(repmod.hom_basis(simple, self.free[i]), [])

    def test_coordinates(self):
        space = repmod.hom_space(self.free["1"], self.free["1"])
        hom = space.element([3])
        self.assertTrue(la.equal(space.coordinates(hom), la.exact_matrix([[3]])))

    def test_side_mismatch(self):
        with self.assertRaises(repmod.SideMismatchError):
            repmod.hom_space(self.free["1"], self.right_free["1"])

    def test_zero_module(self):
        zero = repmod.zero_module(self.cat, Side.LEFT)
        self.assertEqual(repmod.hom_space(zero, self.free["0"]).dim, 0)
        self.assertEqual(repmod.hom_space(self.free["0"], zero).dim, 0)

    def test_naturality_violation(self):
        module = self.free["1"]
        blocks = {obj: la.zeros(module.dims[obj], module.dims[obj]) for obj in self.cat.objects}
        blocks["1"] = la.identity(1)
        hom = repmod.ModuleHom(module, module, blocks)
        self.assertTrue(repmod.naturality_violations(hom))

    def test_duality(self):
        source, target = self.free["1"], self.free["0"]
        forward = repmod.hom_space(source, target).dim
        backward = repmod.hom_space(repmod.dualize(target), repmod.dualize(source)).dim
        self.assertEqual(forward, backward)

    def test_vi(self):
        cat = generate(vi_spec(2))
        free = repmod.free_module(cat, Side.LEFT, "1")
        self.assertEqual(free.dims, {"0": 0, "1": 1, "2": 3})
        self.assertEqual(repmod.hom_space(free, free).dim, 1)


class TestConstructions(FIModuleTestCase):
    def test_trivial_module_at(self):
        module = repmod.trivial_module_at(self.cat, Side.LEFT, "1")
        self.assertEqual(module.dims, {"0": 0, "1": 1, "2": 0})
        self.assertEqual(module.name, "k_1")
        self.assertEqual(repmod.validate_module(module), [])

    def test_module_at_sign(self):
        automorphism = [g for g in self.cat.automorphisms("2") if g != self.cat.identity["2"]][0]
        module = repmod.module_at(self.cat, Side.LEFT, "2", 1, {automorphism: la.exact_matrix([[-1]])})
        self.assertEqual(repmod.validate_module(module), [])
        self.assertEqual(repmod.hom_space(self.free["2"], module).dim, 1)
        self.assertEqual(repmod.hom_space(module, repmod.trivial_module_at(self.cat, Side.LEFT, "2")).dim, 0)

    def test_kernel_and_cokernel(self):
        simple = repmod.trivial_module_at(self.cat, Side.LEFT, "1")
        hom = repmod.yoneda_map(simple, "1", la.exact_matrix([[1]]))
        kernel, inclusion = repmod.kernel(hom)
        self.assertEqual(kernel.dims, {"0": 0, "1": 0, "2": 2})
        self.assertEqual(repmod.validate_module(kernel), [])
        self.assertTrue(inclusion.is_injective())
        cokernel, projection = repmod.cokernel(hom)
        self.assertTrue(cokernel.is_zero())
        self.assertTrue(projection.is_surjective())

    def test_image(self):
        hom = repmod.free_module_map(self.cat, Side.LEFT, "0>1[|]")
        im, inclusion, corestriction = repmod.image(hom)
        self.assertEqual(repmod.validate_module(im), [])
        self.assertTrue(repmod.compose_homs(inclusion, corestriction).equals(hom))

    def test_direct_sum(self):
        total = repmod.direct_sum([self.free["1"], self.free["0"]])
        self.assertEqual(total.module.dims, {"0": 1, "1": 2, "2": 3})
        self.assertEqual(repmod.validate_module(total.module), [])
        for k in range(2):
            composite = repmod.compose_homs(total.projection(k), total.injection(k))
            self.assertTrue(composite.equals(repmod.identity_hom(total.summands[k])))
        copair = total.copair([total.injection(0) @ total.projection(0) @ total.injection(0), total.injection(1)])
        self.assertTrue(copair.equals(repmod.identity_hom(total.module)))

    def test_empty_direct_sum(self):
        with self.assertRaises(repmod.ModuleError):
            repmod.direct_sum([])
        self.assertTrue(repmod.direct_sum([], cat=self.cat, side=Side.LEFT).module.is_zero())

    def test_submodule_and_quotient(self):
        module = self.free["1"]
        element = la.exact_matrix([[1], [-1]])
        sub, inclusion = repmod.submodule_generated(module, {"2": element})
        self.assertEqual(sub.dims, {"0": 0, "1": 0, "2": 1})
        quotient, projection = repmod.quotient(module, inclusion)
        self.assertEqual(quotient.dims, {"0": 0, "1": 1, "2": 1})
        self.assertEqual(repmod.validate_module(quotient), [])
        sequence = repmod.short_exact_sequence(inclusion, projection)
        self.assertTrue(repmod.sequence_is_exact(sequence).exact)

    def test_not_exact(self):
        hom = repmod.zero_hom(self.free["1"], self.free["1"])
        complex_ = repmod.ChainComplex(Side.LEFT, [self.free["1"], self.free["1"]], [hom])
        report = repmod.sequence_is_exact(complex_)
        self.assertFalse(report.exact)
        self.assertEqual(report.homology[0]["2"], 2)

    def test_complex_needs_maps(self):
        with self.assertRaises(repmod.ModuleError):
            repmod.ChainComplex(Side.LEFT, [self.free["1"], self.free["1"]], [])

    def test_restrict_and_extend(self):
        sub = full_subcategory(self.cat, ["1", "2"])
        restricted = repmod.restrict(self.free["0"], sub)
        self.assertEqual(restricted.dims, {"1": 1, "2": 1})
        extended = repmod.extend_by_zero(restricted, self.cat)
        self.assertEqual(extended.dims, {"0": 0, "1": 1, "2": 1})
        self.assertEqual(repmod.validate_module(extended), [])

    def test_extend_needs_convex(self):
        sub = full_subcategory(self.cat, ["0", "2"])
        restricted = repmod.restrict(self.free["0"], sub)
        with self.assertRaises(repmod.SubcategoryMismatchError):
            repmod.extend_by_zero(restricted, self.cat)

    def test_support(self):
        self.assertEqual(repmod.support(self.free["1"]), frozenset({"1", "2"}))
        self.assertEqual(repmod.top_objects(self.cat), frozenset({"2"}))


class TestProjectivity(FIModuleTestCase):
    def test_free_projective(self):
        for i in self.cat.objects:
            self.assertTrue(repmod.is_projective(self.free[i]))
            self.assertTrue(repmod.is_injective(repmod.dualize(self.right_free[i])))

    def test_section(self):
        test = repmod.split_test(self.free["1"])
        self.assertTrue(test.splits)
        composite = repmod.compose_homs(test.projection, test.section)
        self.assertTrue(composite.equals(repmod.identity_hom(self.free["1"])))

    def test_simple_not_projective(self):
        simple = repmod.trivial_module_at(self.cat, Side.LEFT, "1")
        self.assertFalse(repmod.is_projective(simple))
        self.assertFalse(repmod.is_injective(repmod.trivial_module_at(self.cat, Side.LEFT, "2")))
        self.assertTrue(repmod.is_injective(repmod.trivial_module_at(self.cat, Side.LEFT, "0")))

    def test_top_free_not_injective(self):
        self.assertFalse(repmod.is_injective(self.free["2"]))

    def test_induction(self):
        induction = repmod.tensor_induce(self.right_free["1"], "1")
        self.assertEqual(induction.module.dims, self.right_free["1"].dims)
        self.assertTrue(induction.multiplication.is_isomorphism())

    def test_induced_cover_surjective(self):
        module = repmod.dualize(self.free["1"])
        cover, multiplication = repmod.canonical_cover(module)
        self.assertTrue(multiplication.is_surjective())
        self.assertEqual(repmod.naturality_violations(multiplication, exhaustive=True), [])

    def test_torsion(self):
        for module in self.free.values():
            self.assertTrue(repmod.is_torsion_free(module))
        simple = repmod.trivial_module_at(self.cat, Side.LEFT, "1")
        self.assertIn(repmod.torsion_witness(simple), self.cat.hom("1", "2"))

    def test_torsion_non_mono(self):
        cat = files.read_category(data_dir() / "nonmono.json")
        self.assertEqual(repmod.torsion_witness(repmod.free_module(cat, Side.LEFT, "0")), "f")


class TestIsomorphism(FIModuleTestCase):
    def test_find_isomorphism(self):
        rng = np.random.default_rng(0)
        iso = repmod.find_isomorphism(self.free["2"], self.free["2"], rng)
        self.assertIsNotNone(iso)
        self.assertTrue(iso.is_isomorphism())

    def test_different_dims(self):
        self.assertIsNone(repmod.find_isomorphism(self.free["1"], self.free["0"]))

    def test_same_dims_not_isomorphic(self):
        automorphism = [g for g in self.cat.automorphisms("2") if g != self.cat.identity["2"]][0]
        sign = repmod.module_at(self.cat, Side.LEFT, "2", 1, {automorphism: la.exact_matrix([[-1]])})
        trivial = repmod.trivial_module_at(self.cat, Side.LEFT, "2")
        self.assertIsNone(repmod.find_isomorphism(sign, trivial))
