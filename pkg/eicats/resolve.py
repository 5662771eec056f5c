"""
Finite injective resolutions of finite-dimensional left modules.

A right module W supported on a right-closed set C′ is covered by the sum P of the
modules induced from its values W(i), i ∈ C′. The kernel W′ of the multiplication map
P → W vanishes on the maximal objects of C′, so repeating the step on the non-maximal
objects terminates. Dualizing the projective resolution of D(U) obtained this way gives
an injective resolution 0 → U → I_0 → ⋯ → I_n → 0 with n < |C_0|.
"""
from dataclasses import dataclass, field
import logging
from typing import Dict, FrozenSet, Iterable, List, Optional

from .eicat import downward_closure, is_right_closed, maximal_objects, non_maximal_objects, sort_objects
from .repmod import (
    CatModule,
    ChainComplex,
    ExactnessReport,
    ModuleHom,
    Side,
    compose_homs,
    dualize,
    dualize_hom,
    identity_hom,
    induced_cover,
    is_injective,
    is_projective,
    kernel,
    sequence_is_exact,
    support,
)

logger = logging.getLogger(__name__)


class ResolutionError(Exception):
    pass


@dataclass(eq=False)
class ResolutionStep:
    """
    One step 0 → W′ → P → W → 0 of a projective resolution.

    Attributes:
        W (CatModule): The right module being covered.
        Cprime (frozenset): A right-closed object set containing the support of W.
        Cdoubleprime (frozenset): The objects of Cprime that are not maximal in it.
        P (CatModule): The sum of modules induced from the values of W on Cprime.
        rho (ModuleHom): The multiplication map P → W.
        kernel (CatModule): W′, the kernel of rho.
        inclusion (ModuleHom): The inclusion W′ → P.
    """

    W: CatModule
    Cprime: FrozenSet[str]
    Cdoubleprime: FrozenSet[str]
    P: CatModule
    rho: ModuleHom
    kernel: CatModule
    inclusion: ModuleHom

    @property
    def sequence(self) -> ChainComplex:
        return ChainComplex(Side.RIGHT, [self.kernel, self.P, self.W], [self.inclusion, self.rho])

    def failures(self) -> List[str]:
        """The properties of the step that do not hold; empty for a correct step."""
        failures = []
        if not sequence_is_exact(self.sequence).exact:
            failures.append("the sequence 0 → W′ → P → W → 0 is not exact")
        leaked = support(self.kernel) - self.Cdoubleprime
        if leaked:
            failures.append(f"the kernel is nonzero at maximal objects {sorted(leaked)}")
        ranks = self.rho.ranks()
        for i in maximal_objects(self.W.cat, self.Cprime):
            if not (self.P.dims[i] == self.W.dims[i] == ranks[i]):
                failures.append(f"the multiplication map is not bijective at the maximal object {i}")
        return failures


def resolution_step(module: CatModule, Cprime: Optional[Iterable[str]] = None) -> ResolutionStep:
    """
    Covers a right module by modules induced from its values on a right-closed set.

    Args:
        module (CatModule): The right module W.
        Cprime (iterable, optional): A right-closed object set containing the support of W.
            Defaults to the downward closure of the support.

    Raises:
        ResolutionError: If W is not a right module, Cprime is not right-closed or the support of W leaks out of it.
    """
    if module.side != Side.RIGHT:
        raise ResolutionError("A resolution step takes a right module.")
    cat = module.cat
    Cprime = frozenset(downward_closure(cat, support(module)) if Cprime is None else Cprime)
    if not is_right_closed(cat, Cprime):
        raise ResolutionError(f"The object set {list(sort_objects(cat, Cprime))} is not right-closed.")
    leak = support(module) - Cprime
    if leak:
        raise ResolutionError(f"The support of the module leaks out of the object set at {sorted(leak)}.")

    cover, rho, _ = induced_cover(module, Cprime)
    kernel_module, inclusion = kernel(rho)
    kernel_module.name = "W′"
    step = ResolutionStep(
        W=module,
        Cprime=Cprime,
        Cdoubleprime=non_maximal_objects(cat, Cprime),
        P=cover,
        rho=rho,
        kernel=kernel_module,
        inclusion=inclusion,
    )
    logger.debug(
        "Resolution step over %s: P %s, kernel %s", sort_objects(cat, Cprime), cover.dims, kernel_module.dims
    )
    return step


@dataclass(eq=False)
class InjectiveResolution:
    """
    An injective resolution together with the projective resolution it was dualized from.

    Attributes:
        module (CatModule): The left module U.
        complex (ChainComplex): 0 → U → I_0 → ⋯ → I_n → 0, with U at position 0.
        projective (ChainComplex): P_n → ⋯ → P_0 → D(U), the dual complex in reverse order.
        steps (list): The resolution steps in the order they were computed.
        C0 (frozenset): The downward closure of the support of U.
    """

    module: CatModule
    complex: ChainComplex
    projective: ChainComplex
    steps: List[ResolutionStep] = field(default_factory=list)
    C0: FrozenSet[str] = frozenset()

    @property
    def injectives(self) -> List[CatModule]:
        return self.complex.terms[1:]

    @property
    def length(self) -> int:
        return max(len(self.injectives) - 1, 0)


def injective_resolution(module: CatModule, stop_at_projective: bool = True) -> InjectiveResolution:
    """
    Builds a finite injective resolution of a left module.

    Args:
        module (CatModule): The left module U.
        stop_at_projective (bool): Finish as soon as the current kernel is projective, using it as the
            last term. Injective modules then get the resolution 0 → U → U → 0. When False every
            kernel is covered by induced modules until it vanishes.

    Raises:
        ResolutionError: If U is not a left module.
    """
    if module.side != Side.LEFT:
        raise ResolutionError("An injective resolution takes a left module.")
    cat = module.cat
    W0 = dualize(module)
    C0 = downward_closure(cat, support(W0))

    covers: List[CatModule] = []
    augmentations: List[ModuleHom] = []
    inclusions: List[ModuleHom] = []
    steps: List[ResolutionStep] = []
    current, objects = W0, C0
    while not current.is_zero():
        if stop_at_projective and is_projective(current):
            covers.append(current)
            augmentations.append(identity_hom(current))
            break
        step = resolution_step(current, objects)
        steps.append(step)
        covers.append(step.P)
        augmentations.append(step.rho)
        inclusions.append(step.inclusion)
        current, objects = step.kernel, step.Cdoubleprime
        if len(covers) > len(C0):
            raise ResolutionError("The resolution did not terminate within the number of objects below the support.")

    # d_s = ι_{s-1}∘ρ_s : P_s → P_{s-1}
    differentials = [compose_homs(inclusions[s - 1], augmentations[s]) for s in range(1, len(covers))]
    if covers:
        projective = ChainComplex(
            Side.RIGHT, list(reversed(covers)) + [W0], list(reversed(differentials)) + [augmentations[0]]
        )
    else:
        projective = ChainComplex(Side.RIGHT, [W0], [])

    terms = [module] + [dualize(cover) for cover in covers]
    maps = []
    if covers:
        maps.append(dualize_hom(augmentations[0], source=module, target=terms[1]))
        for s, differential in enumerate(differentials, start=1):
            maps.append(dualize_hom(differential, source=terms[s], target=terms[s + 1]))
    resolution = InjectiveResolution(module, ChainComplex(Side.LEFT, terms, maps), projective, steps, C0)
    logger.debug("Injective resolution of %r has length %d", module, resolution.length)
    return resolution


@dataclass
class ResolutionCertificate:
    """The clauses certified for an injective resolution 0 → U → I_0 → ⋯ → I_n → 0."""

    exactness: ExactnessReport
    injective_terms: Dict[int, bool]
    length: int
    bound: int

    @property
    def length_ok(self) -> bool:
        return self.length < self.bound or (self.bound == 0 and self.length == 0)

    @property
    def failures(self) -> List[str]:
        failures = []
        if not self.exactness.exact:
            failures.append("exactness")
        failures += [f"term {p} is not injective" for p, injective in self.injective_terms.items() if not injective]
        if not self.length_ok:
            failures.append(f"length {self.length} is not below the bound {self.bound}")
        return failures

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "failures": self.failures,
            "exactness": self.exactness.to_dict(),
            "injective_terms": {str(p): injective for p, injective in self.injective_terms.items()},
            "length": self.length,
            "bound": self.bound,
        }


def verify_resolution(complex_: ChainComplex) -> ResolutionCertificate:
    """
    Certifies a complex 0 → U → I_0 → ⋯ → I_n → 0 as an injective resolution of U.

    Checks exactness at every position, injectivity of every term after U, and that the
    length n is below the number of objects in the downward closure of the support of U.
    The empty complex passes with length and bound 0.
    """
    terms = complex_.terms
    if not terms:
        return ResolutionCertificate(ExactnessReport(), {}, 0, 0)
    module = terms[0]
    bound = len(downward_closure(module.cat, support(module)))
    injective_terms = {p: bool(is_injective(term)) for p, term in enumerate(terms) if p > 0}
    length = max(len(terms) - 2, 0)
    return ResolutionCertificate(sequence_is_exact(complex_), injective_terms, length, bound)
