"""
The Nakayama functor ν = D∘Hom_C(−, A) and its right adjoint ν⁻¹ = Hom_{C^op}(−, A)∘D.

Both are built from one construction, :func:`hom_dual`, which takes a module M and
returns Hom(M, A) graded by the free modules: its value at i is Hom(M, Ae_i) for a
left module M and Hom(M, e_iA) for a right one, and it lives on the opposite side.
Then ν(V) = D(hom_dual(V)) and ν⁻¹(U) = hom_dual(D(U)). Since dualizing twice
returns identical matrices, ν⁻¹(ν(V)) is literally hom_dual(hom_dual(V)), and the unit
of the adjunction is the evaluation map V → hom_dual(hom_dual(V)).
"""
from dataclasses import dataclass, field
from fractions import Fraction
import logging
from typing import Dict, List, Mapping, Optional, Tuple

import numpy as np

from . import exactla as la
from .eicat import FiniteEICategory
from .instances import InstanceSpec, generate
from .repmod import (
    CatModule,
    ChainComplex,
    ExactnessReport,
    HomSpace,
    ModuleError,
    ModuleHom,
    Side,
    SideMismatchError,
    _free_module_map,
    arrow_ends,
    cokernel,
    compose_homs,
    direct_sum,
    dualize,
    dualize_hom,
    extend_action,
    free_basis,
    free_module,
    hom_space,
    identity_hom,
    is_injective,
    sequence_is_exact,
    yoneda_map,
)

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class HomDual:
    """The module Hom(M, A) on the opposite side of M, with the hom-space at every object."""

    source: CatModule
    module: CatModule
    spaces: Dict[str, HomSpace]


def hom_dual(module: CatModule) -> HomDual:
    """
    Computes Hom(M, A) as a module on the opposite side.

    A morphism f acts by post-composition with the map between free modules that f
    induces. The action is solved on generators and extended by factorizations.
    """
    cat, side = module.cat, module.side
    frees = {i: free_module(cat, side, i) for i in cat.objects}
    spaces = {i: hom_space(module, frees[i]) for i in cat.objects}
    dims = {i: spaces[i].dim for i in cat.objects}
    out_side = side.opposite

    generator_actions = {}
    for generator in cat.generators:
        x, y = arrow_ends(cat, out_side, generator)
        free_map = _free_module_map(cat, side, generator, frees[x], frees[y])
        columns = [spaces[y].coordinates(compose_homs(free_map, basis)) for basis in spaces[x].basis]
        generator_actions[generator] = la.hstack(columns, dims[y])

    action = extend_action(cat, out_side, dims, generator_actions)
    name = f"Hom({module.name}, A)" if module.name else ""
    return HomDual(module, CatModule(cat, out_side, dims, action, name=name), spaces)


def hom_dual_map(hom: ModuleHom, source_dual: HomDual, target_dual: HomDual) -> ModuleHom:
    """
    The map Hom(M′, A) → Hom(M, A), ψ ↦ ψ∘φ, induced by φ: M → M′.

    Args:
        hom (ModuleHom): The homomorphism φ.
        source_dual (HomDual): hom_dual of the source of φ.
        target_dual (HomDual): hom_dual of the target of φ.
    """
    blocks = {}
    for i in hom.cat.objects:
        columns = [source_dual.spaces[i].coordinates(compose_homs(psi, hom)) for psi in target_dual.spaces[i].basis]
        blocks[i] = la.hstack(columns, source_dual.module.dims[i])
    return ModuleHom(target_dual.module, source_dual.module, blocks)


def evaluation(module: CatModule, dual: HomDual, double: HomDual) -> ModuleHom:
    """
    The evaluation map M → Hom(Hom(M, A), A), sending m ∈ M(j) to φ ↦ φ_j(m).

    Args:
        module (CatModule): The module M.
        dual (HomDual): hom_dual(M).
        double (HomDual): hom_dual of the module of `dual` (or of a module with identical matrices).
    """
    cat = module.cat
    blocks = {}
    for j in cat.objects:
        space = double.spaces[j]
        columns = []
        for b in range(module.dims[j]):
            theta = {}
            for k in cat.objects:
                rows = len(free_basis(cat, dual.module.side, j, k))
                theta[k] = la.hstack([phi.blocks[j][:, b : b + 1] for phi in dual.spaces[k].basis], rows)
            columns.append(space.coordinates(ModuleHom(dual.module, space.target, theta)))
        blocks[j] = la.hstack(columns, double.module.dims[j])
    return ModuleHom(module, double.module, blocks)


@dataclass(eq=False)
class NakayamaResult:
    """
    The result of applying ν (or ν⁻¹) to a module.

    Attributes:
        input (CatModule): The module the functor was applied to.
        output (CatModule): ν(input), or ν⁻¹(input) when `inverse` is set.
        inverse (bool): Whether this is ν⁻¹.
        dual (HomDual): The hom-spaces the output was built from.
        maps (list): ν applied to homomorphisms requested through :meth:`apply`.
    """

    input: CatModule
    output: CatModule
    inverse: bool
    dual: HomDual
    maps: List[ModuleHom] = field(default_factory=list)

    def dimensions(self) -> Dict[str, int]:
        return dict(self.output.dims)

    def apply(self, hom: ModuleHom, target: "NakayamaResult") -> ModuleHom:
        """Applies the functor to φ: input → target.input and records the result."""
        mapped = inverse_nakayama_map(hom, self, target) if self.inverse else nakayama_map(hom, self, target)
        self.maps.append(mapped)
        return mapped


def _require_left(module: CatModule, what: str):
    if module.side != Side.LEFT:
        raise SideMismatchError(f"{what} takes left modules, got a {module.side} module.")


def nakayama_result(module: CatModule) -> NakayamaResult:
    """
    Applies ν = D∘Hom_C(−, A) to a left module.

    Raises:
        SideMismatchError: If the module is a right module.
    """
    _require_left(module, "The Nakayama functor")
    dual = hom_dual(module)
    output = dualize(dual.module)
    output.name = f"ν({module.name})" if module.name else ""
    logger.debug("ν(%r) = %r", module, output)
    return NakayamaResult(module, output, False, dual)


def inverse_nakayama_result(module: CatModule) -> NakayamaResult:
    """
    Applies ν⁻¹ = Hom_{C^op}(−, A)∘D to a left module.

    Raises:
        SideMismatchError: If the module is a right module.
    """
    _require_left(module, "The inverse Nakayama functor")
    dual = hom_dual(dualize(module))
    output = dual.module
    output.name = f"ν⁻¹({module.name})" if module.name else ""
    logger.debug("ν⁻¹(%r) = %r", module, output)
    return NakayamaResult(module, output, True, dual)


def nakayama(module: CatModule) -> CatModule:
    """The left module ν(V). Its dimension at i is dim Hom_C(V, Ae_i)."""
    return nakayama_result(module).output


def inverse_nakayama(module: CatModule) -> CatModule:
    """The left module ν⁻¹(U). Its dimension at i is dim Hom_{C^op}(D(U), e_iA)."""
    return inverse_nakayama_result(module).output


def nakayama_map(
    hom: ModuleHom, source: Optional[NakayamaResult] = None, target: Optional[NakayamaResult] = None
) -> ModuleHom:
    """
    The homomorphism ν(φ): ν(V) → ν(V′) for φ: V → V′.

    Results for the source and target may be passed in to reuse their hom-spaces.
    """
    source = source or nakayama_result(hom.source)
    target = target or nakayama_result(hom.target)
    pulled_back = hom_dual_map(hom, source.dual, target.dual)
    return dualize_hom(pulled_back, source=source.output, target=target.output)


def inverse_nakayama_map(
    hom: ModuleHom, source: Optional[NakayamaResult] = None, target: Optional[NakayamaResult] = None
) -> ModuleHom:
    """The homomorphism ν⁻¹(α): ν⁻¹(U) → ν⁻¹(U′) for α: U → U′."""
    source = source or inverse_nakayama_result(hom.source)
    target = target or inverse_nakayama_result(hom.target)
    dual_hom = dualize_hom(hom, source=target.dual.source, target=source.dual.source)
    mapped = hom_dual_map(dual_hom, target.dual, source.dual)
    return ModuleHom(source.output, target.output, mapped.blocks)


def _unit(nu: NakayamaResult, inverse_of_nu: NakayamaResult) -> ModuleHom:
    hom = evaluation(nu.input, nu.dual, inverse_of_nu.dual)
    return ModuleHom(nu.input, inverse_of_nu.output, hom.blocks)


def _counit(inverse: NakayamaResult, nu_of_inverse: NakayamaResult) -> ModuleHom:
    hom = evaluation(inverse.dual.source, inverse.dual, nu_of_inverse.dual)
    return dualize_hom(hom, source=nu_of_inverse.output, target=inverse.input)


def unit(module: CatModule) -> ModuleHom:
    """The unit V → ν⁻¹(ν(V)) of the adjunction, the evaluation map."""
    nu = nakayama_result(module)
    return _unit(nu, inverse_nakayama_result(nu.output))


def counit(module: CatModule) -> ModuleHom:
    """The counit ν(ν⁻¹(U)) → U of the adjunction, the dual of the evaluation map of D(U)."""
    inverse = inverse_nakayama_result(module)
    return _counit(inverse, nakayama_result(inverse.output))


@dataclass(eq=False)
class AdjunctionReport:
    """
    Both sides of the adjunction bijection Hom(ν(V), U) ≅ Hom(V, ν⁻¹(U)).

    The witness is the matrix of α ↦ ν⁻¹(α)∘η_V in the canonical bases of the two hom-spaces.
    """

    dim_left: int
    dim_right: int
    witness: np.ndarray
    bijective: bool
    triangle_nu: bool
    triangle_inverse: bool

    @property
    def passed(self) -> bool:
        return self.dim_left == self.dim_right and self.bijective and self.triangle_nu and self.triangle_inverse

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "dim_hom_nu_V_U": self.dim_left,
            "dim_hom_V_inverse_nu_U": self.dim_right,
            "bijective": self.bijective,
            "triangle_nu": self.triangle_nu,
            "triangle_inverse": self.triangle_inverse,
            "witness": la.matrix_to_json(self.witness),
        }


def adjunction_check(module: CatModule, other: CatModule) -> AdjunctionReport:
    """
    Checks the adjunction between ν and ν⁻¹ on a pair of left modules V and U.

    Computes both hom-spaces, the matrix of the bijection through the unit, and both
    triangle identities ε_ν(V)∘ν(η_V) = id and ν⁻¹(ε_U)∘η_ν⁻¹(U) = id.
    """
    nu_v = nakayama_result(module)
    inverse_u = inverse_nakayama_result(other)
    inverse_nu_v = inverse_nakayama_result(nu_v.output)
    nu_inverse_nu_v = nakayama_result(inverse_nu_v.output)
    nu_inverse_u = nakayama_result(inverse_u.output)
    inverse_nu_inverse_u = inverse_nakayama_result(nu_inverse_u.output)

    left = hom_space(nu_v.output, other)
    right = hom_space(module, inverse_u.output)
    eta = _unit(nu_v, inverse_nu_v)

    columns = []
    closed = True
    for alpha in left.basis:
        image = compose_homs(inverse_nakayama_map(alpha, inverse_nu_v, inverse_u), eta)
        closed = closed and right.contains(image)
        columns.append(right.coordinates(image))
    witness = la.hstack(columns, right.dim)
    bijective = closed and left.dim == right.dim and la.rank(witness) == right.dim

    epsilon_nu_v = _counit(inverse_nu_v, nu_inverse_nu_v)
    triangle_nu = compose_homs(epsilon_nu_v, nakayama_map(eta, nu_v, nu_inverse_nu_v)).equals(
        identity_hom(nu_v.output)
    )

    epsilon_u = _counit(inverse_u, nu_inverse_u)
    eta_inverse_u = _unit(nu_inverse_u, inverse_nu_inverse_u)
    triangle_inverse = compose_homs(
        inverse_nakayama_map(epsilon_u, inverse_nu_inverse_u, inverse_u), eta_inverse_u
    ).equals(identity_hom(inverse_u.output))

    report = AdjunctionReport(left.dim, right.dim, witness, bijective, triangle_nu, triangle_inverse)
    logger.debug("Adjunction check (%d, %d): %s", left.dim, right.dim, "passed" if report.passed else "failed")
    return report


def kernel_witness(module: CatModule) -> Optional[str]:
    """An object i with Hom_C(V, Ae_i) nonzero, or None if V is in the kernel of ν."""
    _require_left(module, "The kernel test")
    for i in module.cat.objects:
        if hom_space(module, free_module(module.cat, Side.LEFT, i)).dim:
            return i
    return None


def in_kernel(module: CatModule) -> bool:
    """Whether ν(V) = 0, that is Hom_C(V, Ae_i) = 0 for every object i."""
    return kernel_witness(module) is None


@dataclass(eq=False)
class AuditReport:
    """Which free left modules Ae_i are injective."""

    injective: Dict[str, bool]

    @property
    def verdict(self) -> bool:
        return all(self.injective.values())

    @property
    def witnesses(self) -> Tuple[str, ...]:
        return tuple(f"Ae_{i}" for i, injective in self.injective.items() if not injective)

    def __bool__(self):
        return self.verdict

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "injective": dict(self.injective), "witnesses": list(self.witnesses)}


def locally_self_injective_audit(cat: FiniteEICategory) -> AuditReport:
    """Tests whether every free left module Ae_i is injective."""
    injective = {i: bool(is_injective(free_module(cat, Side.LEFT, i))) for i in cat.objects}
    report = AuditReport(injective)
    logger.info("Locally self-injective audit of %r: %s", cat, report.verdict)
    return report


def nakayama_complex(complex_: ChainComplex) -> ChainComplex:
    """Applies ν termwise to a complex of left modules."""
    results = [nakayama_result(term) for term in complex_.terms]
    maps = [nakayama_map(hom, results[p], results[p + 1]) for p, hom in enumerate(complex_.maps)]
    return ChainComplex(Side.LEFT, [result.output for result in results], maps)


def nakayama_preserves_exactness(sequence: ChainComplex) -> Tuple[ChainComplex, ExactnessReport]:
    """
    Applies ν to an exact sequence and checks that the image is exact.

    Returns:
        tuple: The image complex and its exactness report.
    """
    image = nakayama_complex(sequence)
    return image, sequence_is_exact(image)


@dataclass(frozen=True)
class Relation:
    """A relation at an object: a linear combination of morphisms out of the generators."""

    obj: str
    terms: Tuple[Tuple[int, str, Fraction], ...]


@dataclass(frozen=True)
class Presentation:
    """
    A finitely presented left module: free generators at objects modulo relations.

    Object ids are kept as strings, so the same presentation applies to every
    truncation containing its objects, given stable morphism ids.
    """

    generators: Tuple[str, ...]
    relations: Tuple[Relation, ...] = ()

    def objects(self) -> Tuple[str, ...]:
        return tuple(dict.fromkeys(list(self.generators) + [relation.obj for relation in self.relations]))

    def degree(self, cat: Optional[FiniteEICategory] = None) -> int:
        """The largest level among generators and relations, levels read from the ids when no category is given."""
        levels = [cat.level(obj) if cat else int(obj) for obj in self.objects()]
        return max(levels, default=0)

    def module(self, cat: FiniteEICategory) -> CatModule:
        """
        Realizes the presentation as the cokernel of a map between free left modules.

        Raises:
            ModuleError: If an object or morphism of the presentation is missing from the category.
        """
        missing = [obj for obj in self.objects() if obj not in cat.objects]
        if missing:
            raise ModuleError(f"Objects {missing} of the presentation are not in the category.")
        free = direct_sum([free_module(cat, Side.LEFT, obj) for obj in self.generators], cat=cat, side=Side.LEFT)
        if not self.relations:
            free.module.name = "M"
            return free.module

        yonedas = []
        for relation in self.relations:
            offsets = free.offsets(relation.obj)
            element = la.zeros(free.module.dims[relation.obj], 1)
            for generator, morphism, coefficient in relation.terms:
                basis = cat.hom(self.generators[generator], relation.obj)
                if morphism not in basis:
                    raise ModuleError(f"{morphism} is not in C({self.generators[generator]},{relation.obj}).")
                element[offsets[generator] + basis.index(morphism), 0] += la.to_fraction(coefficient)
            yonedas.append(yoneda_map(free.module, relation.obj, element))
        relations = direct_sum([hom.source for hom in yonedas])
        module, _ = cokernel(relations.copair(yonedas, target=free.module))
        module.name = "M"
        return module

    def to_dict(self) -> dict:
        return {
            "generators": list(self.generators),
            "relations": [
                {"object": relation.obj, "terms": [[g, m, la.format_fraction(c)] for g, m, c in relation.terms]}
                for relation in self.relations
            ],
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> "Presentation":
        generators = tuple(str(obj) for obj in data.get("generators", []))
        relations = []
        for relation in data.get("relations", []):
            obj = str(relation.get("object", relation.get("level")))
            terms = tuple((int(g), str(m), la.to_fraction(c)) for g, m, c in relation.get("terms", []))
            relations.append(Relation(obj, terms))
        return cls(generators, tuple(relations))


@dataclass(eq=False)
class StabilizationReport:
    """ν of a presented module at levels N and N+1, compared on the support of the level N answer."""

    level: int
    module: CatModule
    dims: Dict[str, int]
    next_dims: Dict[str, int]

    @property
    def support(self) -> Tuple[str, ...]:
        return tuple(obj for obj in self.module.cat.objects if self.dims[obj] > 0)

    @property
    def stable(self) -> bool:
        return all(self.dims[obj] == self.next_dims.get(obj, 0) for obj in self.support)

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "stable": self.stable,
            "support": list(self.support),
            "dims": self.dims,
            "next_dims": self.next_dims,
        }


def stabilized_nakayama(presentation: Presentation, spec: InstanceSpec, level: Optional[int] = None) -> StabilizationReport:
    """
    Computes ν of a finitely presented module over a truncation and compares it with the next truncation.

    Args:
        presentation (Presentation): The module.
        spec (InstanceSpec): The family of truncations. Its level is the default for N.
        level (int, optional): The truncation level N. Must be at least the degree of the presentation.

    Raises:
        ModuleError: If N is below the degree of the presentation.

    Returns:
        StabilizationReport: ν at level N with the dimensions at levels N and N+1.
    """
    level = spec.level if level is None else level
    degree = presentation.degree()
    if level < degree:
        raise ModuleError(f"The truncation level {level} is below the degree {degree} of the presentation.")

    results = []
    for n in (level, level + 1):
        cat = generate(spec.at_level(n))
        results.append(nakayama(presentation.module(cat)))
    report = StabilizationReport(level, results[0], dict(results[0].dims), dict(results[1].dims))
    if not report.stable:
        logger.warning("ν is not stable between levels %d and %d; raise the level.", level, level + 1)
    return report
