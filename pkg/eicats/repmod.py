"""
Graded modules over the category algebra of a finite EI-category.

A left module V assigns a vector space V(i) to every object and a matrix to every
morphism f: i → j, mapping V(i) to V(j). A right module is contravariant: the matrix
of f maps V(j) to V(i). Matrices act on column vectors, so for a left module the
action of f has shape (dims[dst], dims[src]) and for a right module (dims[src], dims[dst]).

Homomorphisms, kernels and the other constructions in this module are computed
objectwise with the exact linear algebra of :mod:`eicats.exactla`.
"""
from dataclasses import dataclass, field
from enum import Enum
import logging
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np
from cached_property import cached_property

from . import exactla as la
from .eicat import (
    FiniteEICategory,
    Subcategory,
    UnknownIdError,
    Violation,
    full_subcategory,
    is_convex,
    maximal_objects,
    sort_objects,
)

logger = logging.getLogger(__name__)


class ModuleError(Exception):
    pass


class SideMismatchError(ModuleError):
    pass


class SubcategoryMismatchError(ModuleError):
    pass


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"

    def __str__(self):
        return self.value

    @property
    def opposite(self) -> "Side":
        return Side.RIGHT if self == Side.LEFT else Side.LEFT


class ModuleViolationKind(str, Enum):
    MISSING = "missing action"
    SHAPE = "dimension mismatch"
    IDENTITY = "identity violated"
    FUNCTORIALITY = "functoriality violated"
    NATURALITY = "naturality violated"

    def __str__(self):
        return self.value


def arrow_ends(cat: FiniteEICategory, side: Side, morphism: str) -> Tuple[str, str]:
    """The objects (a, b) such that the action of the morphism maps V(a) to V(b)."""
    m = cat.check_morphism(morphism)
    return (m.src, m.dst) if side == Side.LEFT else (m.dst, m.src)


def compose_actions(side: Side, g_action: np.ndarray, f_action: np.ndarray) -> np.ndarray:
    """The action of g∘f from the actions of g and f."""
    if side == Side.LEFT:
        return la.matmul(g_action, f_action)
    return la.matmul(f_action, g_action)


def extend_action(
    cat: FiniteEICategory, side: Side, dims: Mapping[str, int], generator_actions: Mapping[str, np.ndarray]
) -> Dict[str, np.ndarray]:
    """
    Extends actions given on the generators of the category to every morphism.

    Identities act as identity matrices and every other morphism through its recorded factorization.
    """
    action = {}
    for obj in cat.objects:
        action[cat.identity[obj]] = la.identity(dims[obj])
    for generator in cat.generators:
        action[generator] = generator_actions[generator]
    for morphism, (g, f) in cat.factorization.items():
        action[morphism] = compose_actions(side, action[g], action[f])
    return {morphism: action[morphism] for morphism in cat.morphisms}


@dataclass(eq=False)
class CatModule:
    """
    A finite-dimensional left or right module over a finite EI-category.

    Attributes:
        cat (FiniteEICategory): The category.
        side (Side): Whether the module is a covariant (left) or contravariant (right) functor.
        dims (dict): The dimension of V(i) for every object i.
        action (dict): An exact matrix for every morphism id.
        name (str): An optional label used in reports.
    """

    cat: FiniteEICategory
    side: Side
    dims: Dict[str, int]
    action: Dict[str, np.ndarray]
    name: str = ""

    def __post_init__(self):
        self.side = Side(self.side)
        self.dims = {obj: int(self.dims.get(obj, 0)) for obj in self.cat.objects}

    def __repr__(self):
        dims = ", ".join(str(self.dims[obj]) for obj in self.cat.objects)
        label = f" {self.name!r}" if self.name else ""
        return f"<CatModule{label} {self.side} ({dims})>"

    def dim(self, obj: str) -> int:
        return self.dims[self.cat.check_object(obj)]

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def ends(self, morphism: str) -> Tuple[str, str]:
        return arrow_ends(self.cat, self.side, morphism)

    def matrix(self, morphism: str) -> np.ndarray:
        try:
            return self.action[morphism]
        except KeyError:
            raise UnknownIdError(f"The module has no action for morphism {morphism!r}.")

    def dimension_vector(self) -> Tuple[int, ...]:
        return tuple(self.dims[obj] for obj in self.cat.objects)

    def to_dict(self) -> dict:
        return {
            "side": str(self.side),
            "dims": {obj: self.dims[obj] for obj in self.cat.objects},
            "action": {morphism: la.matrix_to_json(self.action[morphism]) for morphism in self.cat.morphisms},
        }

    @classmethod
    def from_dict(cls, data: Mapping, cat: FiniteEICategory, name: str = "") -> "CatModule":
        """
        Reads a module from JSON data of the form {"side", "dims", "action"}.

        Raises:
            ModuleError: If the data does not describe matrices of the right shapes.
        """
        side = Side(data["side"])
        dims = {str(obj): int(n) for obj, n in data["dims"].items()}
        unknown = set(dims) - set(cat.objects)
        if unknown:
            raise ModuleError(f"Unknown objects in dims: {sorted(unknown)}")
        dims = {obj: dims.get(obj, 0) for obj in cat.objects}
        action = {}
        for morphism in cat.morphisms:
            a, b = arrow_ends(cat, side, morphism)
            shape = (dims[b], dims[a])
            entries = data.get("action", {}).get(morphism)
            if entries is None:
                if 0 not in shape:
                    raise ModuleError(f"Missing action for morphism {morphism}.")
                action[morphism] = la.zeros(*shape)
                continue
            try:
                action[morphism] = la.matrix_from_json(entries, shape=shape)
            except ValueError as err:
                raise ModuleError(f"Action of {morphism}: {err}")
            if action[morphism].shape != shape:
                raise ModuleError(f"Action of {morphism} has shape {action[morphism].shape}, expected {shape}.")
        return cls(cat, side, dims, action, name=name)


def zero_module(cat: FiniteEICategory, side: Side) -> CatModule:
    dims = {obj: 0 for obj in cat.objects}
    return CatModule(cat, side, dims, {morphism: la.zeros(0, 0) for morphism in cat.morphisms}, name="0")


def validate_module(module: CatModule, exhaustive: bool = True) -> List[Violation]:
    """
    Checks that a module is a functor.

    Args:
        module (CatModule): The module to check.
        exhaustive (bool): Check every composable pair. Otherwise only pairs whose left
            factor is a generator are checked, which is sufficient because every
            morphism is a composite of generators.

    Returns:
        List[Violation]: Empty exactly when the shapes, identities and composites are all correct.
    """
    cat = module.cat
    violations = []
    for morphism in cat.morphisms:
        if morphism not in module.action:
            violations.append(Violation(ModuleViolationKind.MISSING, f"no action for {morphism}"))
            continue
        a, b = module.ends(morphism)
        expected = (module.dims[a], module.dims[b])
        shape = module.action[morphism].shape
        if shape != (expected[1], expected[0]):
            violations.append(
                Violation(ModuleViolationKind.SHAPE, f"action of {morphism} has shape {shape}, expected {expected[::-1]}")
            )
    if violations:
        return violations

    for obj in cat.objects:
        if not la.equal(module.action[cat.identity[obj]], la.identity(module.dims[obj])):
            violations.append(Violation(ModuleViolationKind.IDENTITY, f"identity of {obj} does not act as the identity"))

    left_factors = cat.morphisms if exhaustive else cat.generators
    for g in left_factors:
        source = cat.src(g)
        for f in cat.morphisms:
            if cat.dst(f) != source:
                continue
            gf = cat.compose(g, f)
            if not la.equal(module.action[gf], compose_actions(module.side, module.action[g], module.action[f])):
                violations.append(Violation(ModuleViolationKind.FUNCTORIALITY, f"action of {g}∘{f} is not the composite"))
    return violations


@dataclass(eq=False)
class ModuleHom:
    """
    A homomorphism of modules: one matrix per object, of shape (target.dims[i], source.dims[i]).

    Naturality means target.action(f)·block(a) = block(b)·source.action(f) whenever the action of f maps a to b.
    """

    source: CatModule
    target: CatModule
    blocks: Dict[str, np.ndarray]

    def __post_init__(self):
        if self.source.cat is not self.target.cat and self.source.cat.objects != self.target.cat.objects:
            raise ModuleError("Source and target are modules over different categories.")
        if self.source.side != self.target.side:
            raise SideMismatchError("Source and target are modules on different sides.")

    def __repr__(self):
        return f"<ModuleHom {self.source!r} → {self.target!r}>"

    @property
    def cat(self) -> FiniteEICategory:
        return self.source.cat

    def block(self, obj: str) -> np.ndarray:
        return self.blocks[obj]

    def ranks(self) -> Dict[str, int]:
        return {obj: la.rank(self.blocks[obj]) for obj in self.cat.objects}

    def is_zero(self) -> bool:
        return all(la.is_zero(self.blocks[obj]) for obj in self.cat.objects)

    def is_injective(self) -> bool:
        return all(rank == self.source.dims[obj] for obj, rank in self.ranks().items())

    def is_surjective(self) -> bool:
        return all(rank == self.target.dims[obj] for obj, rank in self.ranks().items())

    def is_isomorphism(self) -> bool:
        return all(
            self.source.dims[obj] == self.target.dims[obj] and la.is_invertible(self.blocks[obj])
            for obj in self.cat.objects
        )

    def __matmul__(self, other: "ModuleHom") -> "ModuleHom":
        return compose_homs(self, other)

    def equals(self, other: "ModuleHom") -> bool:
        return all(la.equal(self.blocks[obj], other.blocks[obj]) for obj in self.cat.objects)

    def to_dict(self) -> dict:
        return {obj: la.matrix_to_json(self.blocks[obj]) for obj in self.cat.objects}


def naturality_violations(hom: ModuleHom, exhaustive: bool = False) -> List[Violation]:
    """The naturality squares that fail to commute, checked on generators unless exhaustive."""
    violations = []
    cat = hom.cat
    for obj in cat.objects:
        expected = (hom.target.dims[obj], hom.source.dims[obj])
        if hom.blocks.get(obj) is None or hom.blocks[obj].shape != expected:
            violations.append(Violation(ModuleViolationKind.SHAPE, f"block at {obj} should have shape {expected}"))
    if violations:
        return violations
    for morphism in cat.morphisms if exhaustive else cat.generators:
        a, b = hom.source.ends(morphism)
        left = la.matmul(hom.target.action[morphism], hom.blocks[a])
        right = la.matmul(hom.blocks[b], hom.source.action[morphism])
        if not la.equal(left, right):
            violations.append(Violation(ModuleViolationKind.NATURALITY, f"square of {morphism} does not commute"))
    return violations


def compose_homs(g: ModuleHom, f: ModuleHom) -> ModuleHom:
    """The composite g∘f."""
    return ModuleHom(f.source, g.target, {obj: la.matmul(g.blocks[obj], f.blocks[obj]) for obj in f.cat.objects})


def identity_hom(module: CatModule) -> ModuleHom:
    return ModuleHom(module, module, {obj: la.identity(n) for obj, n in module.dims.items()})


def zero_hom(source: CatModule, target: CatModule) -> ModuleHom:
    return ModuleHom(source, target, {obj: la.zeros(target.dims[obj], source.dims[obj]) for obj in source.cat.objects})


def free_basis(cat: FiniteEICategory, side: Side, i: str, j: str) -> Tuple[str, ...]:
    """The basis of the free module Ae_i (left) or e_iA (right) at object j."""
    return cat.hom(i, j) if side == Side.LEFT else cat.hom(j, i)


def free_module(cat: FiniteEICategory, side: Union[Side, str], i: str) -> CatModule:
    """
    The free module Ae_i (left) or e_iA (right).

    At object j the left module Ae_i has the basis C(i, j) and morphisms act by
    post-composition; the right module e_iA has the basis C(j, i) and morphisms act by
    pre-composition. Bases are in morphism id order.

    Raises:
        UnknownIdError: If i is not an object.
    """
    side = Side(side)
    cat.check_object(i)
    bases = {j: free_basis(cat, side, i, j) for j in cat.objects}
    index = {j: {u: k for k, u in enumerate(bases[j])} for j in cat.objects}
    dims = {j: len(bases[j]) for j in cat.objects}

    action = {}
    for morphism in cat.morphisms:
        a, b = arrow_ends(cat, side, morphism)
        matrix = la.zeros(dims[b], dims[a])
        for k, u in enumerate(bases[a]):
            image = cat.compose(morphism, u) if side == Side.LEFT else cat.compose(u, morphism)
            matrix[index[b][image], k] = 1
        action[morphism] = matrix
    name = f"Ae_{i}" if side == Side.LEFT else f"e_{i}A"
    return CatModule(cat, side, dims, action, name=name)


def free_module_map(cat: FiniteEICategory, side: Union[Side, str], morphism: str) -> ModuleHom:
    """
    The homomorphism between free modules induced by a morphism f: a → b.

    For left modules this is Ae_b → Ae_a, u ↦ u∘f. For right modules it is e_aA → e_bA, u ↦ f∘u.
    """
    side = Side(side)
    m = cat.check_morphism(morphism)
    if side == Side.LEFT:
        source, target = free_module(cat, side, m.dst), free_module(cat, side, m.src)
    else:
        source, target = free_module(cat, side, m.src), free_module(cat, side, m.dst)
    return _free_module_map(cat, side, morphism, source, target)


def _free_module_map(cat, side, morphism, source: CatModule, target: CatModule) -> ModuleHom:
    m = cat.check_morphism(morphism)
    blocks = {}
    for j in cat.objects:
        if side == Side.LEFT:
            source_basis, target_basis = cat.hom(m.dst, j), cat.hom(m.src, j)
        else:
            source_basis, target_basis = cat.hom(j, m.src), cat.hom(j, m.dst)
        position = {u: k for k, u in enumerate(target_basis)}
        block = la.zeros(len(target_basis), len(source_basis))
        for k, u in enumerate(source_basis):
            image = cat.compose(u, morphism) if side == Side.LEFT else cat.compose(morphism, u)
            block[position[image], k] = 1
        blocks[j] = block
    return ModuleHom(source, target, blocks)


def dualize(module: CatModule) -> CatModule:
    """
    The dual module D(V) = Hom_k(V, k) on the opposite side.

    Dimensions are kept and every action matrix is transposed in the dual bases, so
    dualizing twice returns the same matrices.
    """
    action = {morphism: matrix.T.copy() for morphism, matrix in module.action.items()}
    name = f"D({module.name})" if module.name else ""
    return CatModule(module.cat, module.side.opposite, dict(module.dims), action, name=name)


def dualize_hom(hom: ModuleHom, source: Optional[CatModule] = None, target: Optional[CatModule] = None) -> ModuleHom:
    """The dual D(φ): D(W) → D(V) of φ: V → W, blocks transposed."""
    source = source or dualize(hom.target)
    target = target or dualize(hom.source)
    return ModuleHom(source, target, {obj: block.T.copy() for obj, block in hom.blocks.items()})


@dataclass(eq=False)
class HomSpace:
    """
    The space of homomorphisms between two modules with a canonical basis.

    Homomorphisms are vectorized by concatenating their blocks row by row over the
    objects where both modules are nonzero. The basis is the canonical kernel basis of
    the naturality equations, so coordinates can be read off directly.
    """

    source: CatModule
    target: CatModule
    layout: Tuple[Tuple[str, int, int, int], ...]
    subspace: la.Subspace

    @property
    def dim(self) -> int:
        return self.subspace.dim

    @property
    def nvars(self) -> int:
        return self.subspace.ambient_dim

    def vector(self, hom: ModuleHom) -> np.ndarray:
        vector = la.zeros(self.nvars, 1)
        for obj, offset, rows, cols in self.layout:
            vector[offset : offset + rows * cols, 0] = hom.blocks[obj].reshape(rows * cols)
        return vector

    def hom_from_vector(self, vector: np.ndarray) -> ModuleHom:
        blocks = {obj: la.zeros(self.target.dims[obj], self.source.dims[obj]) for obj in self.source.cat.objects}
        for obj, offset, rows, cols in self.layout:
            blocks[obj] = vector[offset : offset + rows * cols].reshape(rows, cols).copy()
        return ModuleHom(self.source, self.target, blocks)

    @cached_property
    def basis(self) -> List[ModuleHom]:
        return [self.hom_from_vector(self.subspace.basis[:, k]) for k in range(self.dim)]

    def coordinates(self, hom: ModuleHom) -> np.ndarray:
        """The coordinates of a homomorphism (assumed to lie in the space) as a column vector."""
        return self.subspace.coordinates(self.vector(hom))

    def element(self, coefficients: Sequence) -> ModuleHom:
        coefficients = la.exact_matrix([[c] for c in coefficients], shape=(self.dim, 1))
        return self.hom_from_vector(la.matmul(self.subspace.basis, coefficients)[:, 0])

    def contains(self, hom: ModuleHom) -> bool:
        return self.subspace.contains(self.vector(hom))


def _layout(source: CatModule, target: CatModule) -> Tuple[Tuple[Tuple[str, int, int, int], ...], int]:
    layout = []
    offset = 0
    for obj in source.cat.objects:
        rows, cols = target.dims[obj], source.dims[obj]
        if rows and cols:
            layout.append((obj, offset, rows, cols))
            offset += rows * cols
    return tuple(layout), offset


def _naturality_rows(source: CatModule, target: CatModule, offsets: Mapping[str, Tuple[int, int, int]]):
    """Yields the sparse naturality equations W(g)·X_a − X_b·V(g) = 0 for every generator g."""
    cat = source.cat
    for generator in cat.generators:
        a, b = source.ends(generator)
        if a not in offsets and b not in offsets:
            continue
        w = target.action[generator]
        v = source.action[generator]
        rows_b, cols_a = target.dims[b], source.dims[a]
        w_nonzero = [[(k, value) for k, value in enumerate(row) if value != 0] for row in w]
        v_nonzero = [[(k, value) for k, value in enumerate(column) if value != 0] for column in v.T]
        for r in range(rows_b):
            for c in range(cols_a):
                row: Dict[int, object] = {}
                if a in offsets:
                    offset, _, cols = offsets[a]
                    for k, value in w_nonzero[r]:
                        index = offset + k * cols + c
                        row[index] = row.get(index, 0) + value
                if b in offsets:
                    offset, _, cols = offsets[b]
                    for k, value in v_nonzero[c]:
                        index = offset + r * cols + k
                        row[index] = row.get(index, 0) - value
                if row:
                    yield row


def _check_compatible(source: CatModule, target: CatModule):
    if source.side != target.side:
        raise SideMismatchError(f"Cannot compare a {source.side} module with a {target.side} module.")
    if source.cat is not target.cat and source.cat.objects != target.cat.objects:
        raise ModuleError("The modules are over different categories.")


def hom_space(source: CatModule, target: CatModule) -> HomSpace:
    """
    Solves the naturality equations for the homomorphisms from source to target.

    Raises:
        SideMismatchError: If the modules are on different sides.
    """
    _check_compatible(source, target)
    layout, nvars = _layout(source, target)
    offsets = {obj: (offset, rows, cols) for obj, offset, rows, cols in layout}
    echelon = la.EchelonForm(nvars).extend(_naturality_rows(source, target, offsets))
    space = HomSpace(source, target, layout, echelon.kernel())
    logger.debug("Hom space %r → %r: %d unknowns, dimension %d", source, target, nvars, space.dim)
    return space


def hom_basis(source: CatModule, target: CatModule) -> List[ModuleHom]:
    """A canonically ordered basis of the homomorphisms from source to target."""
    return hom_space(source, target).basis


def support(module: CatModule) -> FrozenSet[str]:
    """The objects i with V(i) nonzero."""
    return frozenset(obj for obj, n in module.dims.items() if n > 0)


def extend_by_zero(module: CatModule, cat: FiniteEICategory) -> CatModule:
    """
    Extends a module over a full subcategory to the whole category by zero.

    The object set of the subcategory must be convex, which makes the extension a
    functor. Right-closed sets and single objects are convex.

    Raises:
        SubcategoryMismatchError: If the module's category is not a convex full subcategory of cat.
    """
    sub = module.cat
    objects = set(sub.objects)
    if not objects <= set(cat.objects):
        raise SubcategoryMismatchError(f"Objects {sorted(objects - set(cat.objects))} are not in the category.")
    for i in sub.objects:
        for j in sub.objects:
            if set(sub.hom(i, j)) != set(cat.hom(i, j)):
                raise SubcategoryMismatchError(f"C({i},{j}) differs, so this is not a full subcategory.")
    if not is_convex(cat, objects):
        raise SubcategoryMismatchError("Extension by zero needs a convex set of objects.")

    dims = {obj: module.dims.get(obj, 0) for obj in cat.objects}
    action = {}
    for morphism in cat.morphisms:
        a, b = arrow_ends(cat, module.side, morphism)
        if a in objects and b in objects:
            action[morphism] = module.action[morphism]
        else:
            action[morphism] = la.zeros(dims[b], dims[a])
    return CatModule(cat, module.side, dims, action, name=module.name)


def restrict(module: CatModule, sub: Union[Subcategory, FiniteEICategory]) -> CatModule:
    """Restricts a module to a full subcategory, forgetting everything outside it."""
    category = sub.category if isinstance(sub, Subcategory) else sub
    for obj in category.objects:
        module.cat.check_object(obj)
    dims = {obj: module.dims[obj] for obj in category.objects}
    action = {morphism: module.action[morphism] for morphism in category.morphisms}
    return CatModule(category, module.side, dims, action, name=module.name)


def module_at(
    cat: FiniteEICategory, side: Union[Side, str], i: str, dim: int, aut_action: Optional[Mapping[str, np.ndarray]] = None
) -> CatModule:
    """
    The module concentrated at one object, given by a representation of Aut(i).

    Args:
        aut_action (dict, optional): Matrices for the automorphism generators of i. Defaults to the trivial action.
    """
    side = Side(side)
    point = full_subcategory(cat, [i]).category
    generator_actions = {g: la.identity(dim) for g in point.generators}
    generator_actions.update(aut_action or {})
    dims = {i: dim}
    module = CatModule(point, side, dims, extend_action(point, side, dims, generator_actions))
    module = extend_by_zero(module, cat)
    module.name = f"k_{i}" if dim == 1 and not aut_action else f"V_{i}"
    return module


def trivial_module_at(cat: FiniteEICategory, side: Union[Side, str], i: str) -> CatModule:
    """The one-dimensional module at object i with trivial automorphism action, zero elsewhere."""
    return module_at(cat, side, i, 1)


@dataclass(eq=False)
class DirectSum:
    """A direct sum with its summands in order; block offsets are cumulative per object."""

    module: CatModule
    summands: Tuple[CatModule, ...]

    def offsets(self, obj: str) -> List[int]:
        result, offset = [], 0
        for summand in self.summands:
            result.append(offset)
            offset += summand.dims[obj]
        return result

    def injection(self, k: int) -> ModuleHom:
        blocks = {}
        for obj in self.module.cat.objects:
            block = la.zeros(self.module.dims[obj], self.summands[k].dims[obj])
            start = self.offsets(obj)[k]
            block[start : start + self.summands[k].dims[obj], :] = la.identity(self.summands[k].dims[obj])
            blocks[obj] = block
        return ModuleHom(self.summands[k], self.module, blocks)

    def projection(self, k: int) -> ModuleHom:
        injection = self.injection(k)
        return ModuleHom(self.module, self.summands[k], {obj: block.T.copy() for obj, block in injection.blocks.items()})

    def copair(self, homs: Sequence[ModuleHom], target: Optional[CatModule] = None) -> ModuleHom:
        """The homomorphism from the sum whose restriction to summand k is homs[k]."""
        target = target or homs[0].target
        blocks = {obj: la.hstack([hom.blocks[obj] for hom in homs], target.dims[obj]) for obj in self.module.cat.objects}
        return ModuleHom(self.module, target, blocks)

    def pair(self, homs: Sequence[ModuleHom], source: Optional[CatModule] = None) -> ModuleHom:
        """The homomorphism into the sum whose component k is homs[k]."""
        source = source or homs[0].source
        blocks = {obj: la.vstack([hom.blocks[obj] for hom in homs], source.dims[obj]) for obj in self.module.cat.objects}
        return ModuleHom(source, self.module, blocks)


def direct_sum(modules: Sequence[CatModule], cat: Optional[FiniteEICategory] = None, side: Optional[Side] = None) -> DirectSum:
    """
    The direct sum of modules over the same category.

    An empty list gives the zero module, for which cat and side must be supplied.
    """
    if not modules:
        if cat is None or side is None:
            raise ModuleError("The direct sum of no modules needs a category and a side.")
        return DirectSum(zero_module(cat, side), ())
    cat, side = modules[0].cat, modules[0].side
    for module in modules[1:]:
        _check_compatible(modules[0], module)
    dims = {obj: sum(module.dims[obj] for module in modules) for obj in cat.objects}
    action = {morphism: la.block_diagonal([module.action[morphism] for module in modules]) for morphism in cat.morphisms}
    name = " ⊕ ".join(module.name or "?" for module in modules)
    return DirectSum(CatModule(cat, side, dims, action, name=name), tuple(modules))


def _submodule(module: CatModule, subspaces: Mapping[str, la.Subspace], name: str = "") -> Tuple[CatModule, ModuleHom]:
    """The submodule with the given subspaces, which are assumed to be stable under the action."""
    cat = module.cat
    dims = {obj: subspaces[obj].dim for obj in cat.objects}
    action = {}
    for morphism in cat.morphisms:
        a, b = module.ends(morphism)
        images = la.matmul(module.action[morphism], subspaces[a].basis)
        action[morphism] = subspaces[b].coordinates(images)
    sub = CatModule(cat, module.side, dims, action, name=name)
    inclusion = ModuleHom(sub, module, {obj: subspaces[obj].basis for obj in cat.objects})
    return sub, inclusion


def kernel(hom: ModuleHom) -> Tuple[CatModule, ModuleHom]:
    """The kernel of a homomorphism with its inclusion into the source."""
    subspaces = {obj: la.kernel(block) for obj, block in hom.blocks.items()}
    return _submodule(hom.source, subspaces, name="ker")


def image(hom: ModuleHom) -> Tuple[CatModule, ModuleHom, ModuleHom]:
    """
    The image of a homomorphism.

    Returns:
        tuple: The image, its inclusion into the target and the corestriction from the source.
    """
    subspaces = {obj: la.column_space(block) for obj, block in hom.blocks.items()}
    im, inclusion = _submodule(hom.target, subspaces, name="im")
    corestriction = ModuleHom(
        hom.source, im, {obj: subspaces[obj].coordinates(hom.blocks[obj]) for obj in hom.cat.objects}
    )
    return im, inclusion, corestriction


def cokernel(hom: ModuleHom) -> Tuple[CatModule, ModuleHom]:
    """The cokernel of a homomorphism with the projection from the target, in pivot-complement coordinates."""
    target = hom.target
    cat = target.cat
    maps = {obj: la.quotient_map(hom.blocks[obj]) for obj in cat.objects}
    dims = {obj: maps[obj][0].shape[0] for obj in cat.objects}
    action = {}
    for morphism in cat.morphisms:
        a, b = target.ends(morphism)
        projection_b, _ = maps[b]
        _, lift_a = maps[a]
        action[morphism] = la.matmul(la.matmul(projection_b, target.action[morphism]), lift_a)
    quotient = CatModule(cat, target.side, dims, action, name="coker")
    return quotient, ModuleHom(target, quotient, {obj: maps[obj][0] for obj in cat.objects})


def submodule_generated(module: CatModule, elements: Mapping[str, np.ndarray]) -> Tuple[CatModule, ModuleHom]:
    """
    The smallest submodule containing the given elements.

    Args:
        elements (dict): For some objects i, a matrix whose columns are elements of V(i).
    """
    cat = module.cat
    spans = {}
    for obj in cat.objects:
        generated = []
        for source, vectors in elements.items():
            if vectors.shape[1] == 0:
                continue
            for morphism in cat.morphisms:
                if module.ends(morphism) == (source, obj):
                    generated.append(la.matmul(module.action[morphism], vectors))
        spans[obj] = la.column_space(la.hstack(generated, module.dims[obj]))
    return _submodule(module, spans, name="sub")


def quotient(module: CatModule, inclusion: ModuleHom) -> Tuple[CatModule, ModuleHom]:
    """The quotient of a module by the image of a homomorphism into it."""
    if inclusion.target is not module:
        raise ModuleError("The homomorphism does not map into the module.")
    return cokernel(inclusion)


def yoneda_map(module: CatModule, i: str, element: np.ndarray) -> ModuleHom:
    """
    The homomorphism from the free module at i determined by an element of V(i).

    For a left module this is Ae_i → V, u ↦ V(u)·v; for a right module e_iA → V, u ↦ v·u.
    """
    cat = module.cat
    free = free_module(cat, module.side, i)
    element = element.reshape(module.dims[i], 1)
    blocks = {}
    for j in cat.objects:
        columns = [la.matmul(module.action[u], element) for u in free_basis(cat, module.side, i, j)]
        blocks[j] = la.hstack(columns, module.dims[j])
    return ModuleHom(free, module, blocks)


@dataclass(eq=False)
class Induction:
    """An induced module together with its multiplication map to the module it was induced from."""

    module: CatModule
    multiplication: ModuleHom
    obj: str


def tensor_induce(module: CatModule, i: str) -> Induction:
    """
    Induces a module from the value V(i) viewed as a representation of Aut(i).

    For a right module this is V(i) ⊗ e_iA over the group algebra of Aut(i): the value at
    j is the quotient of V(i) ⊗ span C(j, i) by the relations v·g ⊗ a − v ⊗ g∘a for the
    generators g of Aut(i). Left modules are induced symmetrically as span C(i, j) ⊗ V(i).
    The multiplication map sends v ⊗ a to the action of a on v.
    """
    cat = module.cat
    side = module.side
    cat.check_object(i)
    d = module.dims[i]
    bases = {j: free_basis(cat, side, i, j) for j in cat.objects}
    index = {j: {u: k for k, u in enumerate(bases[j])} for j in cat.objects}
    automorphisms = cat.automorphism_generators(i)

    def twist(a: str, g: str) -> str:
        return cat.compose(g, a) if side == Side.RIGHT else cat.compose(a, g)

    projections, lifts = {}, {}
    for j in cat.objects:
        n = len(bases[j])
        relations = []
        for g in automorphisms:
            g_action = module.action[g]
            for b in range(d):
                for a_index, a in enumerate(bases[j]):
                    column = la.zeros(d * n, 1)
                    for b2 in range(d):
                        if g_action[b2, b] != 0:
                            column[b2 * n + a_index, 0] += g_action[b2, b]
                    column[b * n + index[j][twist(a, g)], 0] -= 1
                    relations.append(column)
        projections[j], lifts[j] = la.quotient_map(la.hstack(relations, d * n))

    dims = {j: projections[j].shape[0] for j in cat.objects}
    action = {}
    for morphism in cat.morphisms:
        x, y = arrow_ends(cat, side, morphism)
        n_x, n_y = len(bases[x]), len(bases[y])
        translate = la.zeros(d * n_y, d * n_x)
        for a_index, a in enumerate(bases[x]):
            moved = cat.compose(a, morphism) if side == Side.RIGHT else cat.compose(morphism, a)
            for b in range(d):
                translate[b * n_y + index[y][moved], b * n_x + a_index] = 1
        action[morphism] = la.matmul(la.matmul(projections[y], translate), lifts[x])

    induced = CatModule(cat, side, dims, action, name=f"{module.name or 'V'}↑{i}")

    blocks = {}
    for j in cat.objects:
        n = len(bases[j])
        full = la.zeros(module.dims[j], d * n)
        for a_index, a in enumerate(bases[j]):
            a_action = module.action[a]
            for b in range(d):
                full[:, b * n + a_index] = a_action[:, b]
        blocks[j] = la.matmul(full, lifts[j])
    return Induction(induced, ModuleHom(induced, module, blocks), i)


def induced_cover(module: CatModule, objects: Iterable[str]) -> Tuple[CatModule, ModuleHom, DirectSum]:
    """
    The sum of the modules induced from V(i) over the given objects, with the multiplication map to V.

    Objects where V vanishes contribute nothing.
    """
    objects = [obj for obj in sort_objects(module.cat, objects) if module.dims[obj] > 0]
    inductions = [tensor_induce(module, obj) for obj in objects]
    total = direct_sum([induction.module for induction in inductions], cat=module.cat, side=module.side)
    if inductions:
        multiplication = total.copair([induction.multiplication for induction in inductions], target=module)
    else:
        multiplication = zero_hom(total.module, module)
    return total.module, multiplication, total


def canonical_cover(module: CatModule) -> Tuple[CatModule, ModuleHom]:
    """The induced cover over the support of a module, with its surjection onto the module."""
    cover, multiplication, _ = induced_cover(module, support(module))
    return cover, multiplication


@dataclass(eq=False)
class SplitTest:
    """
    The outcome of testing whether the canonical cover of a module splits.

    When it does, `section` is a homomorphism σ with π∘σ the identity.
    """

    module: CatModule
    cover: CatModule
    projection: ModuleHom
    section: Optional[ModuleHom]

    @property
    def splits(self) -> bool:
        return self.section is not None

    def __bool__(self):
        return self.splits


def split_test(module: CatModule) -> SplitTest:
    """
    Looks for a section of the canonical cover by solving naturality together with π∘σ = id.
    """
    cover, projection = canonical_cover(module)
    layout, nvars = _layout(module, cover)
    offsets = {obj: (offset, rows, cols) for obj, offset, rows, cols in layout}

    def equations():
        for row in _naturality_rows(module, cover, offsets):
            yield row, 0
        for obj in module.cat.objects:
            d = module.dims[obj]
            if not d:
                continue
            pi = projection.blocks[obj]
            offset, _, cols = offsets[obj]
            for r in range(d):
                for c in range(d):
                    row = {offset + k * cols + c: pi[r, k] for k in range(pi.shape[1]) if pi[r, k] != 0}
                    yield row, int(r == c)

    solution = la.solve_sparse(equations(), nvars)
    section = None
    if solution is not None:
        vector = la.zeros(nvars, 1)
        for index, value in solution.items():
            vector[index, 0] = value
        space = HomSpace(module, cover, layout, la.Subspace(la.zeros(nvars, 0), ()))
        section = space.hom_from_vector(vector[:, 0])
    logger.debug("Split test of %r: %s", module, "splits" if section is not None else "does not split")
    return SplitTest(module, cover, projection, section)


def is_projective(module: CatModule) -> SplitTest:
    """
    Whether a module is projective, by testing if its canonical cover splits.

    The result is truthy exactly when the module is projective and carries the section as a witness.
    """
    return split_test(module)


def is_injective(module: CatModule) -> SplitTest:
    """Whether a module is injective: its dual is projective on the opposite side."""
    return split_test(dualize(module))


def torsion_witness(module: CatModule) -> Optional[str]:
    """A morphism whose action is not injective, or None if the module is torsion-free."""
    for morphism in module.cat.morphisms:
        a, _ = module.ends(morphism)
        if la.rank(module.action[morphism]) < module.dims[a]:
            return morphism
    return None


def is_torsion_free(module: CatModule) -> bool:
    """Whether every morphism acts injectively."""
    return torsion_witness(module) is None


@dataclass(eq=False)
class ChainComplex:
    """A finite sequence of modules with maps between consecutive terms."""

    side: Side
    terms: List[CatModule]
    maps: List[ModuleHom]

    def __post_init__(self):
        self.side = Side(self.side)
        if len(self.maps) != max(len(self.terms) - 1, 0):
            raise ModuleError(f"A complex with {len(self.terms)} terms needs {max(len(self.terms) - 1, 0)} maps.")

    def __len__(self):
        return len(self.terms)

    def composite_violations(self) -> List[int]:
        """The positions p where d_{p+1}∘d_p is not zero."""
        return [p for p in range(len(self.maps) - 1) if not compose_homs(self.maps[p + 1], self.maps[p]).is_zero()]

    def to_dict(self) -> dict:
        return {
            "side": str(self.side),
            "terms": [term.to_dict() for term in self.terms],
            "maps": [hom.to_dict() for hom in self.maps],
        }


@dataclass
class ExactnessReport:
    """Homology dimensions per position and object; exact when all are zero."""

    homology: Dict[int, Dict[str, int]] = field(default_factory=dict)
    nonzero_composites: List[int] = field(default_factory=list)

    @property
    def exact(self) -> bool:
        return not self.nonzero_composites and all(
            dim == 0 for dims in self.homology.values() for dim in dims.values()
        )

    def __bool__(self):
        return self.exact

    def to_dict(self) -> dict:
        return {
            "exact": self.exact,
            "homology": {str(p): dims for p, dims in self.homology.items()},
            "nonzero_composites": self.nonzero_composites,
        }


def sequence_is_exact(complex_: ChainComplex, positions: Optional[Iterable[int]] = None) -> ExactnessReport:
    """
    Computes the homology of a complex 0 → T_0 → ⋯ → T_n → 0 objectwise by ranks.

    Args:
        complex_ (ChainComplex): The complex, read with zeros on both ends.
        positions (iterable, optional): The positions to check. Defaults to every term.

    Returns:
        ExactnessReport: dim ker(d_p) − rank(d_{p-1}) at every position and object.
    """
    terms, maps = complex_.terms, complex_.maps
    positions = range(len(terms)) if positions is None else positions
    report = ExactnessReport(nonzero_composites=complex_.composite_violations())
    for p in positions:
        term = terms[p]
        dims = {}
        for obj in term.cat.objects:
            outgoing = la.rank(maps[p].blocks[obj]) if p < len(maps) else 0
            incoming = la.rank(maps[p - 1].blocks[obj]) if p > 0 else 0
            dims[obj] = term.dims[obj] - outgoing - incoming
        report.homology[p] = dims
    return report


def short_exact_sequence(inclusion: ModuleHom, projection: ModuleHom) -> ChainComplex:
    """The complex 0 → A → B → C → 0 from an inclusion and a projection."""
    return ChainComplex(inclusion.source.side, [inclusion.source, inclusion.target, projection.target], [inclusion, projection])


def find_isomorphism(
    source: CatModule, target: CatModule, rng: Optional[np.random.Generator] = None, attempts: int = 8
) -> Optional[ModuleHom]:
    """
    Looks for an isomorphism by trying random integer combinations of a hom-space basis.

    Returns:
        ModuleHom: An isomorphism, or None if the dimension vectors differ or no attempt succeeded.
    """
    if source.dimension_vector() != target.dimension_vector():
        return None
    space = hom_space(source, target)
    if source.is_zero():
        return zero_hom(source, target)
    if space.dim == 0:
        return None
    rng = rng if rng is not None else np.random.default_rng(0)
    candidates = [space.basis[0]] if space.dim == 1 else []
    for _ in range(attempts):
        coefficients = [int(c) for c in rng.integers(-1000, 1001, size=space.dim)]
        candidates.append(space.element(coefficients))
    for candidate in candidates:
        if candidate.is_isomorphism():
            return candidate
    return None


def top_objects(cat: FiniteEICategory) -> FrozenSet[str]:
    """The maximal objects of the category."""
    return maximal_objects(cat, cat.objects)
